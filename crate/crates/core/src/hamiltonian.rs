//! Hamiltonians as sums of scaled ladder monomials.

use std::collections::hash_map::Entry;
use std::collections::HashMap;
use std::fmt;
use std::str::FromStr;

use crate::error::{FluxError, Result};
use crate::ladder::{annihilator, total_number_operator, ModeSystem};
use crate::linalg::{adjoint, commutator, matmul, ComplexMatrix, C64};

pub use crate::linalg::nilpotency_index;

/// Tolerance for the numerical `[H, N_tot] = 0` cross-check.
pub const CONSERVATION_TOL: f64 = 1e-12;

/// One ladder operator in a monomial: `b_mode` or `b_mode†`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct LadderFactor {
    pub mode: usize,
    pub dagger: bool,
}

impl LadderFactor {
    pub fn create(mode: usize) -> Self {
        Self { mode, dagger: true }
    }

    pub fn annihilate(mode: usize) -> Self {
        Self { mode, dagger: false }
    }

    pub fn adjoint(self) -> Self {
        Self { mode: self.mode, dagger: !self.dagger }
    }
}

impl fmt::Display for LadderFactor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "b{}{}", self.mode, if self.dagger { "+" } else { "" })
    }
}

impl FromStr for LadderFactor {
    type Err = FluxError;

    /// Parses `b2+`, `a1`, `3^`, `b1†` and similar: an optional letter
    /// prefix, a 1-based mode number, and an optional dagger marker
    /// (`+`, `^`, `†`, or `dag`).
    fn from_str(s: &str) -> Result<Self> {
        let raw = s.trim();
        let body = raw.trim_start_matches(|c: char| c.is_ascii_alphabetic() || c == '_');
        let digits_end = body.find(|c: char| !c.is_ascii_digit()).unwrap_or(body.len());
        let (digits, suffix) = body.split_at(digits_end);
        let mode: usize = digits
            .parse()
            .map_err(|_| FluxError::Argument(format!("ladder factor {raw:?} has no mode number")))?;
        let dagger = match suffix.trim() {
            "" => false,
            "+" | "^" | "†" | "dag" | "^dag" => true,
            other => {
                return Err(FluxError::Argument(format!("unknown suffix {other:?} in ladder factor {raw:?}")))
            }
        };
        Ok(Self { mode, dagger })
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct HamiltonianTerm {
    pub coefficient: C64,
    /// Operator order: the first factor is the leftmost matrix.
    pub factors: Vec<LadderFactor>,
}

impl HamiltonianTerm {
    pub fn new(coefficient: C64, factors: Vec<LadderFactor>) -> Result<Self> {
        if factors.is_empty() {
            return Err(FluxError::Argument("a Hamiltonian term needs at least one factor".into()));
        }
        Ok(Self { coefficient, factors })
    }

    pub fn real(coefficient: f64, factors: Vec<LadderFactor>) -> Result<Self> {
        Self::new(C64::new(coefficient, 0.0), factors)
    }

    /// Parses a whitespace-separated factor list like `"b2+ b1"`.
    pub fn parse(coefficient: C64, factors: &str) -> Result<Self> {
        let factors = factors
            .split_whitespace()
            .map(str::parse)
            .collect::<Result<Vec<LadderFactor>>>()?;
        Self::new(coefficient, factors)
    }

    /// Reversed factors with flipped daggers and a conjugated coefficient.
    pub fn adjoint(&self) -> Self {
        Self {
            coefficient: self.coefficient.conj(),
            factors: self.factors.iter().rev().map(|f| f.adjoint()).collect(),
        }
    }

    pub fn conserves_number(&self) -> bool {
        let created = self.factors.iter().filter(|f| f.dagger).count();
        created * 2 == self.factors.len()
    }
}

impl fmt::Display for HamiltonianTerm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let c = self.coefficient;
        if c.im == 0.0 {
            write!(f, "{}", c.re)?;
        } else {
            write!(f, "({}{:+}i)", c.re, c.im)?;
        }
        for factor in &self.factors {
            write!(f, " {factor}")?;
        }
        Ok(())
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct HamiltonianSpec {
    system: ModeSystem,
    terms: Vec<HamiltonianTerm>,
}

impl HamiltonianSpec {
    pub fn new(system: ModeSystem, terms: Vec<HamiltonianTerm>) -> Result<Self> {
        for term in &terms {
            for factor in &term.factors {
                system
                    .check_mode(factor.mode)
                    .map_err(|_| FluxError::Argument(format!("term `{term}` references mode {}", factor.mode)))?;
            }
        }
        Ok(Self { system, terms })
    }

    pub fn system(&self) -> &ModeSystem {
        &self.system
    }

    pub fn terms(&self) -> &[HamiltonianTerm] {
        &self.terms
    }

    pub fn with_term(mut self, term: HamiltonianTerm) -> Result<Self> {
        for factor in &term.factors {
            self.system.check_mode(factor.mode)?;
        }
        self.terms.push(term);
        Ok(self)
    }

    /// Term-wise adjoint.
    pub fn adjoint(&self) -> Self {
        Self { system: self.system.clone(), terms: self.terms.iter().map(HamiltonianTerm::adjoint).collect() }
    }

    /// `H + H†`, built term by term.
    pub fn hermitized(&self) -> Self {
        let mut terms = self.terms.clone();
        terms.extend(self.terms.iter().map(HamiltonianTerm::adjoint));
        Self { system: self.system.clone(), terms }
    }

    /// Notes on coefficients that are not real. Complex coefficients are
    /// allowed but unusual enough to flag.
    pub fn warnings(&self) -> Vec<String> {
        self.terms
            .iter()
            .filter(|t| t.coefficient.im != 0.0)
            .map(|t| format!("term `{t}` has a non-real coefficient"))
            .collect()
    }

    /// `Σ coefficient · Π factors`.
    pub fn compile(&self) -> Result<ComplexMatrix> {
        let dim = self.system.total_dim();
        let mut lowering: HashMap<usize, ComplexMatrix> = HashMap::new();
        let mut raising: HashMap<usize, ComplexMatrix> = HashMap::new();
        let mut h = ComplexMatrix::zeros(dim, dim);
        for term in &self.terms {
            let mut product: Option<ComplexMatrix> = None;
            for factor in &term.factors {
                if let Entry::Vacant(slot) = lowering.entry(factor.mode) {
                    let a = annihilator(&self.system, factor.mode)?;
                    raising.insert(factor.mode, adjoint(&a));
                    slot.insert(a);
                }
                let op = if factor.dagger { &raising[&factor.mode] } else { &lowering[&factor.mode] };
                product = Some(match product {
                    None => op.clone(),
                    Some(acc) => matmul(&acc, op)?,
                });
            }
            let product = product.expect("terms are non-empty");
            h = h.add(&product.scale(term.coefficient))?;
        }
        Ok(h)
    }

    /// True when every term has as many creators as annihilators, confirmed
    /// by `[H, N_tot] = 0` on the compiled matrix.
    pub fn conserves_total_number(&self) -> bool {
        if !self.terms.iter().all(HamiltonianTerm::conserves_number) {
            return false;
        }
        let Ok(h) = self.compile() else { return false };
        let n_tot = total_number_operator(&self.system);
        commutator(&h, &n_tot).is_ok_and(|c| c.frobenius_norm() <= CONSERVATION_TOL * (1.0 + h.frobenius_norm()))
    }
}

impl fmt::Display for HamiltonianSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let parts: Vec<String> = self.terms.iter().map(ToString::to_string).collect();
        write!(f, "{}", parts.join(" + "))
    }
}

/// `‖m − m†‖_F ≤ tol`.
pub fn is_self_adjoint(m: &ComplexMatrix, tol: f64) -> Result<bool> {
    if !m.is_square() {
        return Err(FluxError::Shape {
            op: "is_self_adjoint",
            detail: format!("{}x{} is not square", m.rows(), m.cols()),
        });
    }
    Ok(m.sub(&adjoint(m))?.frobenius_norm() <= tol)
}
