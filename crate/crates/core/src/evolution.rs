//! Time evolution under a possibly non-self-adjoint Hamiltonian.
//!
//! Three ways of turning `H` and an initial state into mean values of an
//! observable `X` are available:
//!
//! * [`Strategy::Unnormalized`]: `<Ψ(t), X Ψ(t)>` with `Ψ(t) = e^{-iHt} Ψ(0)`.
//! * [`Strategy::HeisenbergNaive`]: `<Ψ(0), e^{iHt} X e^{-iHt} Ψ(0)>`.
//! * [`Strategy::Normalized`]: `<Ψ̂(t), X Ψ̂(t)>` with `Ψ̂ = Ψ(t)/‖Ψ(t)‖`.
//!
//! All three coincide when `H` is self-adjoint. Only the normalized one keeps
//! means inside the spectrum of `X` in general.
//!
//! Every time point gets its own propagator; nothing is stepped, so there is
//! no accumulated integration error and points can be evaluated in any
//! order.

use std::fmt;
use std::str::FromStr;

use rayon::prelude::*;

use crate::error::{FluxError, Result};
use crate::hamiltonian::{is_self_adjoint, HamiltonianSpec};
use crate::ladder::{basis_vector, number_operator, OccupationState};
use crate::linalg::{adjoint, expm, inner, matmul, matmul_chain, matvec, ComplexMatrix, ComplexVector, C64, DEFAULT_EXPM_TOL};

/// Largest tolerated imaginary part of a mean value that must be real.
pub const IMAG_TOL: f64 = 1e-10;
/// Observables must satisfy `‖X − X†‖_F` below this.
pub const SELF_ADJOINT_TOL: f64 = 1e-10;
/// Initial states must have unit norm within this.
pub const NORMALIZATION_TOL: f64 = 1e-12;
/// Norms below this make the normalized state undefined.
pub const DEGENERATE_NORM: f64 = 1e-13;

pub const DEFAULT_T_MAX: f64 = 10.0;
pub const DEFAULT_STEPS: usize = 401;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Strategy {
    Unnormalized,
    HeisenbergNaive,
    Normalized,
}

impl Strategy {
    pub const ALL: [Strategy; 3] = [Strategy::Unnormalized, Strategy::HeisenbergNaive, Strategy::Normalized];

    pub fn name(self) -> &'static str {
        match self {
            Strategy::Unnormalized => "unnormalized",
            Strategy::HeisenbergNaive => "heisenberg",
            Strategy::Normalized => "normalized",
        }
    }
}

impl fmt::Display for Strategy {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Strategy {
    type Err = FluxError;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "unnormalized" | "1" => Ok(Strategy::Unnormalized),
            "heisenberg" | "heisenberg-naive" | "2" => Ok(Strategy::HeisenbergNaive),
            "normalized" | "3" => Ok(Strategy::Normalized),
            other => Err(FluxError::Argument(format!(
                "unknown strategy {other:?} (expected unnormalized, heisenberg or normalized)"
            ))),
        }
    }
}

/// `e^{-iHt}`.
pub fn propagator(h: &ComplexMatrix, t: f64) -> Result<ComplexMatrix> {
    if !h.is_square() {
        return Err(FluxError::Shape { op: "propagator", detail: format!("{}x{} is not square", h.rows(), h.cols()) });
    }
    expm(&h.scale(C64::new(0.0, -t)), DEFAULT_EXPM_TOL)
}

/// `Ψ(t) = e^{-iHt} Ψ(0)`.
pub fn evolve_state(h: &ComplexMatrix, psi0: &ComplexVector, t: f64) -> Result<ComplexVector> {
    if h.cols() != psi0.dim() {
        return Err(FluxError::Shape {
            op: "evolve_state",
            detail: format!("{}x{} Hamiltonian, state of length {}", h.rows(), h.cols(), psi0.dim()),
        });
    }
    matvec(&propagator(h, t)?, psi0)
}

/// `X^(1)(t) = e^{iH†t} X e^{-iHt}`, the operator behind unnormalized means.
pub fn unnormalized_operator(h: &ComplexMatrix, x: &ComplexMatrix, t: f64) -> Result<ComplexMatrix> {
    let u = propagator(h, t)?;
    matmul_chain(&[&adjoint(&u), x, &u])
}

/// `X^(2)(t) = e^{iHt} X e^{-iHt}`.
pub fn heisenberg_operator(h: &ComplexMatrix, x: &ComplexMatrix, t: f64) -> Result<ComplexMatrix> {
    let u = propagator(h, t)?;
    let u_inv = propagator(h, -t)?;
    matmul_chain(&[&u_inv, x, &u])
}

#[derive(Clone, Debug)]
pub struct Observable {
    pub label: String,
    pub matrix: ComplexMatrix,
}

impl Observable {
    pub fn new(label: impl Into<String>, matrix: ComplexMatrix) -> Self {
        Self { label: label.into(), matrix }
    }
}

/// `n_1, ..., n_M` for every mode of the system.
pub fn number_observables(spec: &HamiltonianSpec) -> Result<Vec<Observable>> {
    (1..=spec.system().mode_count())
        .map(|j| Ok(Observable::new(format!("n_{j}"), number_operator(spec.system(), j)?)))
        .collect()
}

/// Closed interval guaranteed to contain the spectrum of a self-adjoint
/// `x`: exact for diagonal matrices, Gershgorin discs otherwise.
pub fn spectral_bounds(x: &ComplexMatrix) -> (f64, f64) {
    let n = x.rows();
    let mut lo = f64::INFINITY;
    let mut hi = f64::NEG_INFINITY;
    for i in 0..n {
        let radius: f64 = (0..n).filter(|&j| j != i).map(|j| x[(i, j)].norm()).sum();
        lo = lo.min(x[(i, i)].re - radius);
        hi = hi.max(x[(i, i)].re + radius);
    }
    (lo, hi)
}

fn check_state(h: &ComplexMatrix, psi0: &ComplexVector) -> Result<()> {
    if !h.is_square() || h.cols() != psi0.dim() {
        return Err(FluxError::Shape {
            op: "evolution",
            detail: format!("{}x{} Hamiltonian, state of length {}", h.rows(), h.cols(), psi0.dim()),
        });
    }
    let n = psi0.norm();
    if (n - 1.0).abs() > NORMALIZATION_TOL {
        return Err(FluxError::Validation(format!("initial state has norm {n}, expected 1")));
    }
    Ok(())
}

fn check_observable(h: &ComplexMatrix, x: &ComplexMatrix, label: &str) -> Result<()> {
    if x.rows() != h.rows() || x.cols() != h.cols() {
        return Err(FluxError::Shape {
            op: "observable",
            detail: format!("{label} is {}x{}, Hamiltonian is {}x{}", x.rows(), x.cols(), h.rows(), h.cols()),
        });
    }
    if !is_self_adjoint(x, SELF_ADJOINT_TOL)? {
        return Err(FluxError::Validation(format!("observable {label} is not self-adjoint")));
    }
    Ok(())
}

/// Per-time-point evaluation shared by [`mean_value`] and [`run_matrix`].
struct PointResult {
    norm: f64,
    values: Vec<f64>,
    imag: Vec<f64>,
}

fn evaluate_point(
    strategy: Strategy,
    h: &ComplexMatrix,
    psi0: &ComplexVector,
    observables: &[&ComplexMatrix],
    t: f64,
) -> Result<PointResult> {
    let u = propagator(h, t)?;
    let psi = matvec(&u, psi0)?;
    let norm = psi.norm();
    if !norm.is_finite() {
        return Err(FluxError::Convergence(format!("state norm overflowed at t = {t}")));
    }
    let mut values = Vec::with_capacity(observables.len());
    let mut imag = Vec::with_capacity(observables.len());
    match strategy {
        Strategy::Unnormalized => {
            for x in observables {
                let m = inner(&psi, &matvec(x, &psi)?)?;
                if m.im.abs() > IMAG_TOL * m.re.abs().max(1.0) {
                    return Err(FluxError::Validation(format!("mean value {m} at t = {t} is not real")));
                }
                values.push(m.re);
                imag.push(m.im);
            }
        }
        Strategy::HeisenbergNaive => {
            // X^(2)(t) is not self-adjoint for H ≠ H†, so the imaginary part is data.
            let u_inv = propagator(h, -t)?;
            let left = adjoint(&u_inv);
            let bra = matvec(&left, psi0)?;
            for x in observables {
                let m = inner(&bra, &matvec(x, &psi)?)?;
                values.push(m.re);
                imag.push(m.im);
            }
        }
        Strategy::Normalized => {
            if norm < DEGENERATE_NORM {
                return Err(FluxError::Degenerate { t, norm });
            }
            let hat = psi.scale(C64::new(1.0 / norm, 0.0));
            for x in observables {
                let m = inner(&hat, &matvec(x, &hat)?)?;
                if m.im.abs() > IMAG_TOL {
                    return Err(FluxError::Validation(format!("mean value {m} at t = {t} is not real")));
                }
                values.push(m.re);
                imag.push(m.im);
            }
        }
    }
    Ok(PointResult { norm, values, imag })
}

/// Mean value of `x` at time `t` under the chosen strategy.
pub fn mean_value(
    strategy: Strategy,
    h: &ComplexMatrix,
    psi0: &ComplexVector,
    x: &ComplexMatrix,
    t: f64,
) -> Result<f64> {
    check_state(h, psi0)?;
    check_observable(h, x, "X")?;
    Ok(evaluate_point(strategy, h, psi0, &[x], t)?.values[0])
}

/// Like [`mean_value`] but returns the full complex number, without any
/// reality check. Useful for the Heisenberg strategy.
pub fn mean_value_complex(
    strategy: Strategy,
    h: &ComplexMatrix,
    psi0: &ComplexVector,
    x: &ComplexMatrix,
    t: f64,
) -> Result<C64> {
    check_state(h, psi0)?;
    let op = match strategy {
        Strategy::Unnormalized => unnormalized_operator(h, x, t)?,
        Strategy::HeisenbergNaive => heisenberg_operator(h, x, t)?,
        Strategy::Normalized => {
            let psi = evolve_state(h, psi0, t)?;
            let norm = psi.norm();
            if norm < DEGENERATE_NORM {
                return Err(FluxError::Degenerate { t, norm });
            }
            let hat = psi.scale(C64::new(1.0 / norm, 0.0));
            return inner(&hat, &matvec(x, &hat)?);
        }
    };
    inner(psi0, &matvec(&op, psi0)?)
}

#[derive(Clone, Debug)]
pub enum InitialState {
    Basis(OccupationState),
    Vector(ComplexVector),
}

#[derive(Clone, Debug)]
pub struct EvolutionRequest {
    pub hamiltonian: HamiltonianSpec,
    pub initial: InitialState,
    pub strategy: Strategy,
    pub times: Vec<f64>,
    /// `None` means all number operators.
    pub observables: Option<Vec<Observable>>,
}

impl EvolutionRequest {
    /// Request with the default grid and number-operator observables.
    pub fn new(hamiltonian: HamiltonianSpec, initial: OccupationState, strategy: Strategy) -> Self {
        Self {
            hamiltonian,
            initial: InitialState::Basis(initial),
            strategy,
            times: uniform_grid(DEFAULT_T_MAX, DEFAULT_STEPS).expect("default grid is valid"),
            observables: None,
        }
    }

    pub fn with_times(mut self, times: Vec<f64>) -> Self {
        self.times = times;
        self
    }

    pub fn with_grid(mut self, t_max: f64, steps: usize) -> Result<Self> {
        self.times = uniform_grid(t_max, steps)?;
        Ok(self)
    }

    pub fn with_strategy(mut self, strategy: Strategy) -> Self {
        self.strategy = strategy;
        self
    }

    pub fn with_observables(mut self, observables: Vec<Observable>) -> Self {
        self.observables = Some(observables);
        self
    }

    pub fn initial_vector(&self) -> Result<ComplexVector> {
        match &self.initial {
            InitialState::Basis(occ) => basis_vector(self.hamiltonian.system(), occ),
            InitialState::Vector(v) => Ok(v.clone()),
        }
    }
}

/// `steps` evenly spaced points on `[0, t_max]`, both ends included.
pub fn uniform_grid(t_max: f64, steps: usize) -> Result<Vec<f64>> {
    if steps < 2 {
        return Err(FluxError::Argument(format!("a time grid needs at least 2 points, got {steps}")));
    }
    if t_max <= 0.0 || !t_max.is_finite() {
        return Err(FluxError::Argument(format!("t_max must be positive, got {t_max}")));
    }
    let last = (steps - 1) as f64;
    Ok((0..steps).map(|i| if i == steps - 1 { t_max } else { t_max * i as f64 / last }).collect())
}

#[derive(Clone, Debug, PartialEq)]
pub struct TimeSeries {
    pub strategy: Strategy,
    pub times: Vec<f64>,
    pub labels: Vec<String>,
    /// `values[k][i]` is observable `k` at `times[i]`.
    pub values: Vec<Vec<f64>>,
    pub norms: Vec<f64>,
    /// Largest |imaginary part| seen per observable.
    pub max_imag: Vec<f64>,
}

impl TimeSeries {
    pub fn len(&self) -> usize {
        self.times.len()
    }

    pub fn is_empty(&self) -> bool {
        self.times.is_empty()
    }

    pub fn series(&self, label: &str) -> Option<&[f64]> {
        self.labels.iter().position(|l| l == label).map(|k| self.values[k].as_slice())
    }

    /// Values of every observable at time index `i`.
    pub fn row(&self, i: usize) -> Vec<f64> {
        self.values.iter().map(|v| v[i]).collect()
    }
}

fn check_times(times: &[f64]) -> Result<()> {
    if times.is_empty() {
        return Err(FluxError::Argument("empty time grid".into()));
    }
    if times.iter().any(|t| !t.is_finite() || *t < 0.0) {
        return Err(FluxError::Argument("times must be finite and non-negative".into()));
    }
    if times.windows(2).any(|w| w[1] <= w[0]) {
        return Err(FluxError::Argument("times must be strictly increasing".into()));
    }
    Ok(())
}

/// Evaluates observables over a time grid for an already compiled `h`.
/// Time points run in parallel; the output does not depend on scheduling.
pub fn run_matrix(
    strategy: Strategy,
    h: &ComplexMatrix,
    psi0: &ComplexVector,
    observables: &[Observable],
    times: &[f64],
) -> Result<TimeSeries> {
    check_times(times)?;
    check_state(h, psi0)?;
    for obs in observables {
        check_observable(h, &obs.matrix, &obs.label)?;
    }
    let mats: Vec<&ComplexMatrix> = observables.iter().map(|o| &o.matrix).collect();
    let points: Vec<PointResult> = times
        .par_iter()
        .map(|&t| evaluate_point(strategy, h, psi0, &mats, t))
        .collect::<Result<_>>()?;

    let mut values = vec![Vec::with_capacity(times.len()); observables.len()];
    let mut max_imag = vec![0.0f64; observables.len()];
    let mut norms = Vec::with_capacity(times.len());
    for p in points {
        norms.push(p.norm);
        for (k, (v, im)) in p.values.into_iter().zip(p.imag).enumerate() {
            values[k].push(v);
            max_imag[k] = max_imag[k].max(im.abs());
        }
    }
    Ok(TimeSeries {
        strategy,
        times: times.to_vec(),
        labels: observables.iter().map(|o| o.label.clone()).collect(),
        values,
        norms,
        max_imag,
    })
}

pub fn run(req: &EvolutionRequest) -> Result<TimeSeries> {
    let h = req.hamiltonian.compile()?;
    let psi0 = req.initial_vector()?;
    let defaults;
    let observables = match &req.observables {
        Some(obs) => obs.as_slice(),
        None => {
            defaults = number_observables(&req.hamiltonian)?;
            defaults.as_slice()
        }
    };
    run_matrix(req.strategy, &h, &psi0, observables, &req.times)
}

/// Runs every strategy on the same request.
pub fn run_all_strategies(req: &EvolutionRequest) -> Result<Vec<TimeSeries>> {
    Strategy::ALL.iter().map(|&s| run(&req.clone().with_strategy(s))).collect()
}

/// `‖(XY)(t) − X(t)Y(t)‖_F` for the operator evolution of a strategy.
/// Zero for the Heisenberg strategy; generically positive for the
/// unnormalized one. The normalized strategy has no operator form.
pub fn automorphism_defect(
    strategy: Strategy,
    h: &ComplexMatrix,
    x: &ComplexMatrix,
    y: &ComplexMatrix,
    t: f64,
) -> Result<f64> {
    let evolve = |m: &ComplexMatrix| match strategy {
        Strategy::Unnormalized => unnormalized_operator(h, m, t),
        Strategy::HeisenbergNaive => heisenberg_operator(h, m, t),
        Strategy::Normalized => Err(FluxError::Unsupported("the normalized strategy has no operator evolution".into())),
    };
    let xy = evolve(&matmul(x, y)?)?;
    let product = matmul(&evolve(x)?, &evolve(y)?)?;
    Ok(xy.sub(&product)?.frobenius_norm())
}

/// Location and value of the largest mean of `x` on `[t_lo, t_hi]`: a scan
/// over `samples` uniform points, then golden-section refinement around the
/// best one. Returns `(t, value)`.
pub fn maximize_mean(
    strategy: Strategy,
    h: &ComplexMatrix,
    psi0: &ComplexVector,
    x: &ComplexMatrix,
    t_lo: f64,
    t_hi: f64,
    samples: usize,
) -> Result<(f64, f64)> {
    if t_hi <= t_lo || (t_hi - t_lo).is_nan() || samples < 2 {
        return Err(FluxError::Argument(format!("bad search interval [{t_lo}, {t_hi}] with {samples} samples")));
    }
    check_state(h, psi0)?;
    check_observable(h, x, "X")?;
    let f = |t: f64| -> Result<f64> { Ok(evaluate_point(strategy, h, psi0, &[x], t)?.values[0]) };
    let step = (t_hi - t_lo) / (samples - 1) as f64;
    let scan: Vec<(f64, f64)> = (0..samples)
        .into_par_iter()
        .map(|k| {
            let t = if k + 1 == samples { t_hi } else { t_lo + k as f64 * step };
            f(t).map(|v| (t, v))
        })
        .collect::<Result<_>>()?;
    let &(mut best_t, mut best_v) = scan.iter().max_by(|a, b| a.1.total_cmp(&b.1)).expect("samples >= 2");

    let (mut a, mut b) = ((best_t - step).max(t_lo), (best_t + step).min(t_hi));
    let inv_phi = (5f64.sqrt() - 1.0) / 2.0;
    let mut c = b - inv_phi * (b - a);
    let mut d = a + inv_phi * (b - a);
    let (mut fc, mut fd) = (f(c)?, f(d)?);
    while b - a > 1e-10 * (1.0 + best_t.abs()) {
        if fc >= fd {
            b = d;
            d = c;
            fd = fc;
            c = b - inv_phi * (b - a);
            fc = f(c)?;
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + inv_phi * (b - a);
            fd = f(d)?;
        }
    }
    for (t, v) in [(c, fc), (d, fd)] {
        if v > best_v {
            best_t = t;
            best_v = v;
        }
    }
    Ok((best_t, best_v))
}
