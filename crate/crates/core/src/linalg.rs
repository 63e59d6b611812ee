//! Dense complex matrices and vectors.
//!
//! Storage is row-major and indexing is 0-based. Matrices quoted from the
//! literature use 1-based `(row, col)` positions; entry `(r, c)` there is
//! `m[(r - 1, c - 1)]` here.

use std::fmt;
use std::ops::Index;

use num_complex::Complex64;

use crate::error::{FluxError, Result};

pub type C64 = Complex64;

/// Largest row or column count any constructor will produce.
pub const MAX_DIM: usize = 4096;

/// Default relative tolerance for [`expm`].
pub const DEFAULT_EXPM_TOL: f64 = 1e-14;

/// Relative threshold below which an entry counts as zero when detecting
/// nilpotency. Scaled by the largest entry of the original matrix.
pub const NILPOTENT_ZERO_REL: f64 = 1e-14;

const ZERO: C64 = C64::new(0.0, 0.0);
const ONE: C64 = C64::new(1.0, 0.0);

#[derive(Clone, PartialEq)]
pub struct ComplexMatrix {
    rows: usize,
    cols: usize,
    data: Vec<C64>,
}

impl ComplexMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        assert!(rows > 0 && cols > 0, "matrix dimensions must be positive");
        Self { rows, cols, data: vec![ZERO; rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.data[i * n + i] = ONE;
        }
        m
    }

    pub fn from_diag(diag: &[C64]) -> Self {
        let n = diag.len();
        let mut m = Self::zeros(n, n);
        for (i, &d) in diag.iter().enumerate() {
            m.data[i * n + i] = d;
        }
        m
    }

    pub fn from_real_diag(diag: &[f64]) -> Self {
        Self::from_diag(&diag.iter().map(|&d| C64::new(d, 0.0)).collect::<Vec<_>>())
    }

    /// Builds a matrix from row-major entries.
    pub fn from_vec(rows: usize, cols: usize, data: Vec<C64>) -> Result<Self> {
        if rows == 0 || cols == 0 || data.len() != rows * cols {
            return Err(FluxError::shape(
                "from_vec",
                format!("{} entries for a {rows}x{cols} matrix", data.len()),
            ));
        }
        Ok(Self { rows, cols, data })
    }

    pub fn from_rows(rows: &[Vec<C64>]) -> Result<Self> {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        if rows.iter().any(|row| row.len() != c) {
            return Err(FluxError::shape("from_rows", "ragged rows"));
        }
        Self::from_vec(r, c, rows.concat())
    }

    pub fn from_real_rows(rows: &[Vec<f64>]) -> Result<Self> {
        let rows: Vec<Vec<C64>> = rows
            .iter()
            .map(|row| row.iter().map(|&x| C64::new(x, 0.0)).collect())
            .collect();
        Self::from_rows(&rows)
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> C64) -> Self {
        let mut m = Self::zeros(rows, cols);
        for i in 0..rows {
            for j in 0..cols {
                m.data[i * cols + j] = f(i, j);
            }
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn as_slice(&self) -> &[C64] {
        &self.data
    }

    pub fn get(&self, i: usize, j: usize) -> Option<C64> {
        (i < self.rows && j < self.cols).then(|| self.data[i * self.cols + j])
    }

    pub fn set(&mut self, i: usize, j: usize, value: C64) {
        assert!(i < self.rows && j < self.cols, "index ({i}, {j}) out of bounds");
        self.data[i * self.cols + j] = value;
    }

    pub fn is_finite(&self) -> bool {
        self.data.iter().all(|z| z.re.is_finite() && z.im.is_finite())
    }

    pub fn max_abs(&self) -> f64 {
        self.data.iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.data.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
    }

    /// True when every entry has modulus strictly below `threshold`, or the
    /// matrix is exactly zero.
    pub fn is_negligible(&self, threshold: f64) -> bool {
        self.data.iter().all(|z| *z == ZERO || z.norm() < threshold)
    }

    pub fn diagonal(&self) -> Vec<C64> {
        (0..self.rows.min(self.cols)).map(|i| self[(i, i)]).collect()
    }

    pub fn scale(&self, c: C64) -> Self {
        Self { rows: self.rows, cols: self.cols, data: self.data.iter().map(|z| z * c).collect() }
    }

    pub fn scale_real(&self, c: f64) -> Self {
        self.scale(C64::new(c, 0.0))
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.zip_with(other, "add", |a, b| a + b)
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.zip_with(other, "sub", |a, b| a - b)
    }

    fn zip_with(&self, other: &Self, op: &'static str, f: impl Fn(C64, C64) -> C64) -> Result<Self> {
        if self.rows != other.rows || self.cols != other.cols {
            return Err(FluxError::shape(
                op,
                format!("{}x{} vs {}x{}", self.rows, self.cols, other.rows, other.cols),
            ));
        }
        let data = self.data.iter().zip(&other.data).map(|(&a, &b)| f(a, b)).collect();
        Ok(Self { rows: self.rows, cols: self.cols, data })
    }

    fn add_assign_scaled(&mut self, other: &Self, divisor: f64) {
        debug_assert_eq!(self.data.len(), other.data.len());
        for (a, b) in self.data.iter_mut().zip(&other.data) {
            *a += b / divisor;
        }
    }
}

impl Index<(usize, usize)> for ComplexMatrix {
    type Output = C64;

    fn index(&self, (i, j): (usize, usize)) -> &C64 {
        assert!(i < self.rows && j < self.cols, "index ({i}, {j}) out of bounds");
        &self.data[i * self.cols + j]
    }
}

impl fmt::Debug for ComplexMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "ComplexMatrix {}x{} [", self.rows, self.cols)?;
        for i in 0..self.rows {
            let row: Vec<String> = (0..self.cols)
                .map(|j| {
                    let z = self[(i, j)];
                    format!("{:.4}{:+.4}i", z.re, z.im)
                })
                .collect();
            writeln!(f, "  {}", row.join(", "))?;
        }
        write!(f, "]")
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct ComplexVector {
    data: Vec<C64>,
}

impl ComplexVector {
    pub fn new(data: Vec<C64>) -> Result<Self> {
        if data.is_empty() {
            return Err(FluxError::shape("ComplexVector::new", "empty vector"));
        }
        Ok(Self { data })
    }

    pub fn from_real(values: &[f64]) -> Result<Self> {
        Self::new(values.iter().map(|&x| C64::new(x, 0.0)).collect())
    }

    pub fn zeros(dim: usize) -> Self {
        assert!(dim > 0, "vector dimension must be positive");
        Self { data: vec![ZERO; dim] }
    }

    /// Unit coordinate vector with a one at 0-based position `index`.
    pub fn basis(dim: usize, index: usize) -> Self {
        assert!(index < dim, "basis index {index} out of range for dimension {dim}");
        let mut v = Self::zeros(dim);
        v.data[index] = ONE;
        v
    }

    pub fn dim(&self) -> usize {
        self.data.len()
    }

    pub fn as_slice(&self) -> &[C64] {
        &self.data
    }

    pub fn norm_sqr(&self) -> f64 {
        self.data.iter().map(|z| z.norm_sqr()).sum()
    }

    pub fn norm(&self) -> f64 {
        self.norm_sqr().sqrt()
    }

    pub fn scale(&self, c: C64) -> Self {
        Self { data: self.data.iter().map(|z| z * c).collect() }
    }

    pub fn normalized(&self) -> Option<Self> {
        let n = self.norm();
        (n > 0.0 && n.is_finite()).then(|| Self { data: self.data.iter().map(|z| z / n).collect() })
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        if self.dim() != other.dim() {
            return Err(FluxError::shape("sub", format!("{} vs {}", self.dim(), other.dim())));
        }
        Ok(Self { data: self.data.iter().zip(&other.data).map(|(a, b)| a - b).collect() })
    }

    pub fn is_finite(&self) -> bool {
        self.data.iter().all(|z| z.re.is_finite() && z.im.is_finite())
    }
}

impl Index<usize> for ComplexVector {
    type Output = C64;

    fn index(&self, i: usize) -> &C64 {
        &self.data[i]
    }
}

/// Kronecker product, capped at [`MAX_DIM`] rows and columns.
pub fn kron(a: &ComplexMatrix, b: &ComplexMatrix) -> Result<ComplexMatrix> {
    kron_with_limit(a, b, MAX_DIM)
}

pub fn kron_with_limit(a: &ComplexMatrix, b: &ComplexMatrix, max_dim: usize) -> Result<ComplexMatrix> {
    let rows = a.rows.checked_mul(b.rows);
    let cols = a.cols.checked_mul(b.cols);
    let (rows, cols) = match (rows, cols) {
        (Some(r), Some(c)) if r <= max_dim && c <= max_dim => (r, c),
        (r, c) => {
            return Err(FluxError::Size { dim: r.unwrap_or(usize::MAX).max(c.unwrap_or(usize::MAX)), max: max_dim })
        }
    };
    let mut out = ComplexMatrix::zeros(rows, cols);
    for i in 0..a.rows {
        for j in 0..a.cols {
            let aij = a[(i, j)];
            if aij == ZERO {
                continue;
            }
            for k in 0..b.rows {
                let row = (i * b.rows + k) * cols + j * b.cols;
                for l in 0..b.cols {
                    out.data[row + l] = aij * b.data[k * b.cols + l];
                }
            }
        }
    }
    Ok(out)
}

/// Conjugate transpose.
pub fn adjoint(a: &ComplexMatrix) -> ComplexMatrix {
    ComplexMatrix::from_fn(a.cols, a.rows, |i, j| a[(j, i)].conj())
}

pub fn matmul(a: &ComplexMatrix, b: &ComplexMatrix) -> Result<ComplexMatrix> {
    if a.cols != b.rows {
        return Err(FluxError::shape(
            "matmul",
            format!("{}x{} times {}x{}", a.rows, a.cols, b.rows, b.cols),
        ));
    }
    let mut out = ComplexMatrix::zeros(a.rows, b.cols);
    for i in 0..a.rows {
        let out_row = &mut out.data[i * b.cols..(i + 1) * b.cols];
        for k in 0..a.cols {
            let aik = a.data[i * a.cols + k];
            if aik == ZERO {
                continue;
            }
            let b_row = &b.data[k * b.cols..(k + 1) * b.cols];
            for (o, &bkj) in out_row.iter_mut().zip(b_row) {
                *o += aik * bkj;
            }
        }
    }
    Ok(out)
}

/// Product of a non-empty chain of matrices, left to right.
pub fn matmul_chain(factors: &[&ComplexMatrix]) -> Result<ComplexMatrix> {
    let (first, rest) = factors
        .split_first()
        .ok_or_else(|| FluxError::Argument("empty matrix product".into()))?;
    rest.iter().try_fold((*first).clone(), |acc, m| matmul(&acc, m))
}

pub fn matvec(a: &ComplexMatrix, v: &ComplexVector) -> Result<ComplexVector> {
    if a.cols != v.dim() {
        return Err(FluxError::shape(
            "matvec",
            format!("{}x{} times vector of length {}", a.rows, a.cols, v.dim()),
        ));
    }
    let data = (0..a.rows)
        .map(|i| {
            a.data[i * a.cols..(i + 1) * a.cols]
                .iter()
                .zip(&v.data)
                .map(|(x, y)| x * y)
                .sum()
        })
        .collect();
    Ok(ComplexVector { data })
}

/// `<u, v>`, conjugate-linear in `u`.
pub fn inner(u: &ComplexVector, v: &ComplexVector) -> Result<C64> {
    if u.dim() != v.dim() {
        return Err(FluxError::shape("inner", format!("{} vs {}", u.dim(), v.dim())));
    }
    Ok(u.data.iter().zip(&v.data).map(|(a, b)| a.conj() * b).sum())
}

pub fn norm(v: &ComplexVector) -> f64 {
    v.norm()
}

/// `[a, b] = ab - ba`
pub fn commutator(a: &ComplexMatrix, b: &ComplexMatrix) -> Result<ComplexMatrix> {
    matmul(a, b)?.sub(&matmul(b, a)?)
}

/// `{a, b} = ab + ba`
pub fn anticommutator(a: &ComplexMatrix, b: &ComplexMatrix) -> Result<ComplexMatrix> {
    matmul(a, b)?.add(&matmul(b, a)?)
}

/// Smallest `k` with `m^k = 0`, where "zero" means every entry is below
/// [`NILPOTENT_ZERO_REL`] times the largest entry of `m`. `None` for a
/// non-square or non-nilpotent matrix.
pub fn nilpotency_index(m: &ComplexMatrix) -> Option<usize> {
    nilpotent_powers(m).map(|powers| powers.len())
}

/// For nilpotent `m` of index `k`, returns `[I, m, m^2, ..., m^(k-1)]`.
fn nilpotent_powers(m: &ComplexMatrix) -> Option<Vec<ComplexMatrix>> {
    if !m.is_square() || !m.is_finite() {
        return None;
    }
    let n = m.rows;
    let scale = m.max_abs();
    if scale == 0.0 {
        return Some(vec![ComplexMatrix::identity(n)]);
    }
    let threshold = NILPOTENT_ZERO_REL * scale;

    // m^(2^j) with 2^j >= n vanishes iff m is nilpotent.
    let mut squared = m.clone();
    let mut reach = 1usize;
    while reach < n {
        squared = matmul(&squared, &squared).ok()?;
        reach *= 2;
        if squared.is_negligible(threshold) {
            break;
        }
    }
    if !squared.is_negligible(threshold) {
        return None;
    }

    let mut powers = vec![ComplexMatrix::identity(n), m.clone()];
    loop {
        let last = powers.last().expect("non-empty");
        if last.is_negligible(threshold) {
            powers.pop();
            return Some(powers);
        }
        if powers.len() > reach {
            return None;
        }
        let next = matmul(last, m).ok()?;
        powers.push(next);
    }
}

/// Sum `m^0/0! + m^1/1! + ...` over the given powers, accumulated in
/// increasing order.
fn taylor_sum(powers: &[ComplexMatrix]) -> ComplexMatrix {
    let mut sum = powers[0].clone();
    let mut factorial = 1.0;
    for (p, power) in powers.iter().enumerate().skip(1) {
        factorial *= p as f64;
        sum.add_assign_scaled(power, factorial);
    }
    sum
}

const MAX_SQUARINGS: u32 = 1100;
const MAX_TAYLOR_TERMS: usize = 60;

/// Matrix exponential.
///
/// Nilpotent inputs are summed exactly as a finite Taylor polynomial. All
/// other inputs go through scaling and squaring with a Taylor core whose
/// truncation is chosen from an a priori remainder bound.
pub fn expm(m: &ComplexMatrix, tol: f64) -> Result<ComplexMatrix> {
    if !m.is_square() {
        return Err(FluxError::shape("expm", format!("{}x{} is not square", m.rows, m.cols)));
    }
    if tol <= 0.0 || !tol.is_finite() {
        return Err(FluxError::Argument(format!("expm tolerance must be positive, got {tol}")));
    }
    if !m.is_finite() {
        return Err(FluxError::Argument("expm input has non-finite entries".into()));
    }
    if let Some(powers) = nilpotent_powers(m) {
        return Ok(taylor_sum(&powers));
    }
    scaling_and_squaring(m, tol)
}

fn scaling_and_squaring(m: &ComplexMatrix, tol: f64) -> Result<ComplexMatrix> {
    let n = m.rows;
    let norm = m.frobenius_norm();
    let mut squarings = 0u32;
    let mut scaled_norm = norm;
    while scaled_norm > 0.5 {
        scaled_norm *= 0.5;
        squarings += 1;
        if squarings > MAX_SQUARINGS {
            return Err(FluxError::Convergence(format!("norm {norm:e} too large to scale")));
        }
    }
    let a = m.scale_real(0.5f64.powi(squarings as i32));
    // Errors in exp(a) grow roughly by 2^s through the squaring phase.
    let target = tol * 0.5f64.powi(squarings as i32);

    let mut sum = ComplexMatrix::identity(n);
    let mut term = ComplexMatrix::identity(n);
    let mut converged = false;
    for q in 1..=MAX_TAYLOR_TERMS {
        term = matmul(&term, &a)?.scale_real(1.0 / q as f64);
        sum = sum.add(&term)?;
        if remainder_bound(scaled_norm, q) <= target {
            converged = true;
            break;
        }
    }
    if !converged {
        return Err(FluxError::Convergence(format!(
            "Taylor series did not reach tolerance {tol:e} within {MAX_TAYLOR_TERMS} terms"
        )));
    }
    for _ in 0..squarings {
        sum = matmul(&sum, &sum)?;
    }
    if !sum.is_finite() {
        return Err(FluxError::Convergence("matrix exponential overflowed".into()));
    }
    Ok(sum)
}

/// Bound on the tail `sum_{p > q} x^p / p!` for `0 <= x < q + 2`.
fn remainder_bound(x: f64, q: usize) -> f64 {
    let mut lead = 1.0;
    for p in 1..=q + 1 {
        lead *= x / p as f64;
    }
    lead / (1.0 - x / (q + 2) as f64)
}
