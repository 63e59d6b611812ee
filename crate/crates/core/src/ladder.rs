//! Ladder operators on a register of fermionic and truncated-bosonic modes.
//!
//! Modes are numbered from 1. Mode 1 is the fastest-varying tensor factor:
//! the basis state with occupations `(n_1, ..., n_M)` sits at 0-based index
//! `n_1 + n_2 L_1 + n_3 L_1 L_2 + ...`, so operators are assembled as
//! `op_M ⊗ ... ⊗ op_2 ⊗ op_1`.
//!
//! Fermionic annihilators carry a `diag(1, -1)` parity factor on every
//! lower-numbered fermionic mode. With this convention the two-mode `a_2`
//! has `+1` at (1,3) and `-1` at (2,4), and the three-mode `b_3` has the
//! sign pattern `+, -, -, +` on its four nonzero entries (1-based
//! positions).

use std::fmt;
use std::str::FromStr;

use crate::error::{FluxError, Result};
use crate::linalg::{adjoint, kron, ComplexMatrix, ComplexVector, C64, MAX_DIM};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum ModeKind {
    Fermionic,
    TruncatedBoson(usize),
}

impl ModeKind {
    pub fn levels(self) -> usize {
        match self {
            ModeKind::Fermionic => 2,
            ModeKind::TruncatedBoson(levels) => levels,
        }
    }

    pub fn is_fermionic(self) -> bool {
        matches!(self, ModeKind::Fermionic)
    }
}

impl fmt::Display for ModeKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ModeKind::Fermionic => write!(f, "fermion"),
            ModeKind::TruncatedBoson(l) => write!(f, "boson{l}"),
        }
    }
}

impl FromStr for ModeKind {
    type Err = FluxError;

    /// Accepts `fermion` or `boson<L>` (e.g. `boson3`).
    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        if s.eq_ignore_ascii_case("fermion") || s.eq_ignore_ascii_case("fermionic") {
            return Ok(ModeKind::Fermionic);
        }
        if let Some(levels) = s.strip_prefix("boson") {
            let levels: usize = levels
                .parse()
                .map_err(|_| FluxError::Argument(format!("bad boson level count in {s:?}")))?;
            if levels < 2 {
                return Err(FluxError::Argument(format!("{s:?}: bosonic modes need at least 2 levels")));
            }
            return Ok(ModeKind::TruncatedBoson(levels));
        }
        Err(FluxError::Argument(format!("unknown mode kind {s:?}")))
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ModeSystem {
    modes: Vec<ModeKind>,
    total_dim: usize,
}

impl ModeSystem {
    pub fn new(modes: Vec<ModeKind>) -> Result<Self> {
        if modes.is_empty() {
            return Err(FluxError::Argument("a mode system needs at least one mode".into()));
        }
        let mut total_dim = 1usize;
        for mode in &modes {
            if let ModeKind::TruncatedBoson(l) = mode {
                if *l < 2 {
                    return Err(FluxError::Argument(format!("bosonic mode with {l} levels")));
                }
            }
            total_dim = total_dim
                .checked_mul(mode.levels())
                .filter(|&d| d <= MAX_DIM)
                .ok_or(FluxError::Size { dim: usize::MAX, max: MAX_DIM })?;
        }
        Ok(Self { modes, total_dim })
    }

    pub fn fermions(count: usize) -> Result<Self> {
        Self::new(vec![ModeKind::Fermionic; count])
    }

    pub fn bosons(count: usize, levels: usize) -> Result<Self> {
        Self::new(vec![ModeKind::TruncatedBoson(levels); count])
    }

    pub fn modes(&self) -> &[ModeKind] {
        &self.modes
    }

    pub fn mode_count(&self) -> usize {
        self.modes.len()
    }

    pub fn total_dim(&self) -> usize {
        self.total_dim
    }

    /// Mode kind for 1-based `j`.
    pub fn mode(&self, j: usize) -> Result<ModeKind> {
        self.check_mode(j)?;
        Ok(self.modes[j - 1])
    }

    pub(crate) fn check_mode(&self, j: usize) -> Result<()> {
        if j == 0 || j > self.modes.len() {
            return Err(FluxError::Argument(format!(
                "mode index {j} out of range 1..={}",
                self.modes.len()
            )));
        }
        Ok(())
    }

    pub fn validate(&self, occ: &OccupationState) -> Result<()> {
        if occ.0.len() != self.modes.len() {
            return Err(FluxError::Argument(format!(
                "occupation {occ} has {} entries for {} modes",
                occ.0.len(),
                self.modes.len()
            )));
        }
        for (j, (&n, mode)) in occ.0.iter().zip(&self.modes).enumerate() {
            if n >= mode.levels() {
                return Err(FluxError::Argument(format!(
                    "occupation {n} of mode {} must be below its {} levels",
                    j + 1,
                    mode.levels()
                )));
            }
        }
        Ok(())
    }

    /// 0-based position of a basis state.
    pub fn linear_index(&self, occ: &OccupationState) -> Result<usize> {
        self.validate(occ)?;
        let mut index = 0;
        let mut stride = 1;
        for (&n, mode) in occ.0.iter().zip(&self.modes) {
            index += n * stride;
            stride *= mode.levels();
        }
        Ok(index)
    }

    pub fn occupation_at(&self, mut index: usize) -> Result<OccupationState> {
        if index >= self.total_dim {
            return Err(FluxError::Argument(format!("basis index {index} out of range")));
        }
        let occ = self
            .modes
            .iter()
            .map(|m| {
                let n = index % m.levels();
                index /= m.levels();
                n
            })
            .collect();
        Ok(OccupationState(occ))
    }

    /// All basis labels in storage order.
    pub fn states(&self) -> impl Iterator<Item = OccupationState> + '_ {
        (0..self.total_dim).map(|i| self.occupation_at(i).expect("index in range"))
    }
}

/// Per-mode occupation numbers, mode 1 first.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct OccupationState(pub Vec<usize>);

impl OccupationState {
    pub fn new(occupations: Vec<usize>) -> Self {
        Self(occupations)
    }

    pub fn occupations(&self) -> &[usize] {
        &self.0
    }

    pub fn total(&self) -> usize {
        self.0.iter().sum()
    }
}

impl fmt::Display for OccupationState {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.iter().all(|&n| n < 10) {
            for n in &self.0 {
                write!(f, "{n}")?;
            }
            Ok(())
        } else {
            let parts: Vec<String> = self.0.iter().map(usize::to_string).collect();
            write!(f, "{}", parts.join(","))
        }
    }
}

impl FromStr for OccupationState {
    type Err = FluxError;

    /// Digit string such as `"101"`, or comma-separated for levels above 9.
    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        let bad = || FluxError::Argument(format!("bad occupation string {s:?}"));
        if s.is_empty() {
            return Err(bad());
        }
        let occ = if s.contains(',') {
            s.split(',').map(|p| p.trim().parse::<usize>().map_err(|_| bad())).collect::<Result<_>>()?
        } else {
            s.chars()
                .map(|c| c.to_digit(10).map(|d| d as usize).ok_or_else(bad))
                .collect::<Result<_>>()?
        };
        Ok(Self(occ))
    }
}

fn single_mode_lowering(levels: usize) -> ComplexMatrix {
    ComplexMatrix::from_fn(levels, levels, |i, j| {
        if j == i + 1 {
            C64::new((j as f64).sqrt(), 0.0)
        } else {
            C64::new(0.0, 0.0)
        }
    })
}

fn parity() -> ComplexMatrix {
    ComplexMatrix::from_real_diag(&[1.0, -1.0])
}

/// Lowering operator for 1-based mode `j`.
pub fn annihilator(sys: &ModeSystem, j: usize) -> Result<ComplexMatrix> {
    sys.check_mode(j)?;
    let target = sys.modes[j - 1];
    let mut out: Option<ComplexMatrix> = None;
    for k in (1..=sys.mode_count()).rev() {
        let mode = sys.modes[k - 1];
        let factor = if k == j {
            single_mode_lowering(mode.levels())
        } else if k < j && target.is_fermionic() && mode.is_fermionic() {
            parity()
        } else {
            ComplexMatrix::identity(mode.levels())
        };
        out = Some(match out {
            None => factor,
            Some(acc) => kron(&acc, &factor)?,
        });
    }
    Ok(out.expect("at least one mode"))
}

pub fn creator(sys: &ModeSystem, j: usize) -> Result<ComplexMatrix> {
    Ok(adjoint(&annihilator(sys, j)?))
}

/// `N_j = a_j† a_j`, assembled directly as the diagonal of occupations so
/// that eigenvalues are exact integers.
pub fn number_operator(sys: &ModeSystem, j: usize) -> Result<ComplexMatrix> {
    sys.check_mode(j)?;
    let diag: Vec<f64> = sys.states().map(|occ| occ.0[j - 1] as f64).collect();
    Ok(ComplexMatrix::from_real_diag(&diag))
}

/// Sum of all number operators.
pub fn total_number_operator(sys: &ModeSystem) -> ComplexMatrix {
    let diag: Vec<f64> = sys.states().map(|occ| occ.total() as f64).collect();
    ComplexMatrix::from_real_diag(&diag)
}

/// Occupation-number basis vector. Equal to
/// `Π_j (a_j†)^{n_j} / sqrt(n_j!)` applied to the vacuum with mode 1
/// leftmost, which always yields a `+1` coefficient.
pub fn basis_vector(sys: &ModeSystem, occ: &OccupationState) -> Result<ComplexVector> {
    let index = sys.linear_index(occ)?;
    Ok(ComplexVector::basis(sys.total_dim(), index))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::{anticommutator, commutator, matmul, matvec};

    fn at(m: &ComplexMatrix, r: usize, c: usize) -> f64 {
        let z = m[(r - 1, c - 1)];
        assert_eq!(z.im, 0.0);
        z.re
    }

    /// Checks every entry against a sparse list of 1-based nonzeros.
    fn assert_sparse(m: &ComplexMatrix, nonzeros: &[(usize, usize, f64)]) {
        for r in 1..=m.rows() {
            for c in 1..=m.cols() {
                let expected = nonzeros
                    .iter()
                    .find(|&&(i, j, _)| (i, j) == (r, c))
                    .map_or(0.0, |&(_, _, v)| v);
                assert!((at(m, r, c) - expected).abs() < 1e-15, "entry ({r},{c}): {} vs {expected}", at(m, r, c));
            }
        }
    }

    #[test]
    fn two_fermion_operators_match_displayed_matrices() {
        let sys = ModeSystem::fermions(2).unwrap();
        assert_sparse(&annihilator(&sys, 1).unwrap(), &[(1, 2, 1.0), (3, 4, 1.0)]);
        assert_sparse(&annihilator(&sys, 2).unwrap(), &[(1, 3, 1.0), (2, 4, -1.0)]);
    }

    #[test]
    fn three_fermion_operators_match_displayed_matrices() {
        let sys = ModeSystem::fermions(3).unwrap();
        assert_sparse(&annihilator(&sys, 1).unwrap(), &[(1, 2, 1.0), (3, 4, 1.0), (5, 6, 1.0), (7, 8, 1.0)]);
        assert_sparse(
            &annihilator(&sys, 2).unwrap(),
            &[(1, 3, 1.0), (2, 4, -1.0), (5, 7, 1.0), (6, 8, -1.0)],
        );
        assert_sparse(
            &annihilator(&sys, 3).unwrap(),
            &[(1, 5, 1.0), (2, 6, -1.0), (3, 7, -1.0), (4, 8, 1.0)],
        );
    }

    #[test]
    fn three_level_operators_match_displayed_matrices() {
        let sys = ModeSystem::bosons(2, 3).unwrap();
        let r2 = 2f64.sqrt();
        assert_sparse(
            &annihilator(&sys, 1).unwrap(),
            &[(1, 2, 1.0), (2, 3, r2), (4, 5, 1.0), (5, 6, r2), (7, 8, 1.0), (8, 9, r2)],
        );
        // The canonical A_2; the literature's matrix has one extra 1 at (4,5).
        assert_sparse(
            &annihilator(&sys, 2).unwrap(),
            &[(1, 4, 1.0), (2, 5, 1.0), (3, 6, 1.0), (4, 7, r2), (5, 8, r2), (6, 9, r2)],
        );
    }

    #[test]
    fn number_operators() {
        let f2 = ModeSystem::fermions(2).unwrap();
        assert_eq!(number_operator(&f2, 1).unwrap(), ComplexMatrix::from_real_diag(&[0.0, 1.0, 0.0, 1.0]));
        assert_eq!(number_operator(&f2, 2).unwrap(), ComplexMatrix::from_real_diag(&[0.0, 0.0, 1.0, 1.0]));
        let b2 = ModeSystem::bosons(2, 3).unwrap();
        assert_eq!(
            number_operator(&b2, 1).unwrap(),
            ComplexMatrix::from_real_diag(&[0.0, 1.0, 2.0, 0.0, 1.0, 2.0, 0.0, 1.0, 2.0])
        );
        assert_eq!(
            number_operator(&b2, 2).unwrap(),
            ComplexMatrix::from_real_diag(&[0.0, 0.0, 0.0, 1.0, 1.0, 1.0, 2.0, 2.0, 2.0])
        );
    }

    #[test]
    fn number_operator_equals_creator_times_annihilator() {
        let mixed = ModeSystem::new(vec![
            ModeKind::Fermionic,
            ModeKind::TruncatedBoson(4),
            ModeKind::Fermionic,
        ])
        .unwrap();
        for j in 1..=3 {
            let a = annihilator(&mixed, j).unwrap();
            let product = matmul(&adjoint(&a), &a).unwrap();
            let n = number_operator(&mixed, j).unwrap();
            assert!(product.sub(&n).unwrap().max_abs() < 1e-14, "mode {j}");
        }
    }

    #[test]
    fn fermionic_number_operator_is_projector() {
        let sys = ModeSystem::fermions(3).unwrap();
        for j in 1..=3 {
            let n = number_operator(&sys, j).unwrap();
            assert_eq!(matmul(&n, &n).unwrap(), n);
        }
    }

    #[test]
    fn canonical_anticommutation() {
        let sys = ModeSystem::fermions(4).unwrap();
        let id = ComplexMatrix::identity(sys.total_dim());
        for j in 1..=4 {
            let bj = annihilator(&sys, j).unwrap();
            assert_eq!(matmul(&bj, &bj).unwrap().frobenius_norm(), 0.0);
            for k in 1..=4 {
                let bk = annihilator(&sys, k).unwrap();
                let anti = anticommutator(&bj, &adjoint(&bk)).unwrap();
                let expected = if j == k { id.clone() } else { ComplexMatrix::zeros(16, 16) };
                assert!(anti.sub(&expected).unwrap().frobenius_norm() <= 1e-12, "({j},{k})");
                assert!(anticommutator(&bj, &bk).unwrap().frobenius_norm() <= 1e-12);
            }
        }
    }

    #[test]
    fn truncated_boson_algebra() {
        let sys = ModeSystem::bosons(2, 3).unwrap();
        let a1 = annihilator(&sys, 1).unwrap();
        let a2 = annihilator(&sys, 2).unwrap();
        for a in [&a1, &a2] {
            let cube = matmul(&matmul(a, a).unwrap(), a).unwrap();
            assert_eq!(cube.max_abs(), 0.0);
        }
        for x in [a1.clone(), adjoint(&a1)] {
            for y in [a2.clone(), adjoint(&a2)] {
                assert_eq!(commutator(&x, &y).unwrap().max_abs(), 0.0);
            }
        }
        let c1 = commutator(&a1, &adjoint(&a1)).unwrap();
        let c2 = commutator(&a2, &adjoint(&a2)).unwrap();
        let d1 = ComplexMatrix::from_real_diag(&[1.0, 1.0, -2.0, 1.0, 1.0, -2.0, 1.0, 1.0, -2.0]);
        let d2 = ComplexMatrix::from_real_diag(&[1.0, 1.0, 1.0, 1.0, 1.0, 1.0, -2.0, -2.0, -2.0]);
        assert!(c1.sub(&d1).unwrap().max_abs() <= 1e-12);
        assert!(c2.sub(&d2).unwrap().max_abs() <= 1e-12);
    }

    #[test]
    fn literal_three_level_a2_breaks_its_own_commutators() {
        // The printed A_2 with the stray (4,5) entry is not diagonal under [A, A†].
        let sys = ModeSystem::bosons(2, 3).unwrap();
        let mut printed = annihilator(&sys, 2).unwrap();
        printed.set(3, 4, C64::new(1.0, 0.0));
        let c = commutator(&printed, &adjoint(&printed)).unwrap();
        let off_diag: f64 = (0..9)
            .flat_map(|i| (0..9).map(move |j| (i, j)))
            .filter(|(i, j)| i != j)
            .map(|(i, j)| c[(i, j)].norm())
            .sum();
        assert!(off_diag > 0.5);
        let a1 = annihilator(&sys, 1).unwrap();
        assert!(commutator(&a1, &printed).unwrap().max_abs() > 0.5);
    }

    #[test]
    fn basis_vectors() {
        let f2 = ModeSystem::fermions(2).unwrap();
        let phi00 = basis_vector(&f2, &"00".parse().unwrap()).unwrap();
        assert_eq!(phi00, ComplexVector::from_real(&[1.0, 0.0, 0.0, 0.0]).unwrap());
        let phi11 = basis_vector(&f2, &"11".parse().unwrap()).unwrap();
        assert_eq!(phi11, ComplexVector::from_real(&[0.0, 0.0, 0.0, 1.0]).unwrap());

        let a1d = creator(&f2, 1).unwrap();
        let a2d = creator(&f2, 2).unwrap();
        let built = matvec(&a1d, &matvec(&a2d, &phi00).unwrap()).unwrap();
        assert_eq!(built, phi11);

        assert!(basis_vector(&f2, &"20".parse().unwrap()).is_err());
        assert!(basis_vector(&f2, &"1".parse().unwrap()).is_err());
    }

    #[test]
    fn occupation_strings() {
        let occ: OccupationState = "101".parse().unwrap();
        assert_eq!(occ.occupations(), &[1, 0, 1]);
        assert_eq!(occ.to_string(), "101");
        assert_eq!("2,10".parse::<OccupationState>().unwrap().to_string(), "2,10");
        assert!("1a".parse::<OccupationState>().is_err());
        assert!("".parse::<OccupationState>().is_err());
    }

    #[test]
    fn linear_index_round_trips() {
        let sys = ModeSystem::new(vec![ModeKind::TruncatedBoson(3), ModeKind::Fermionic, ModeKind::TruncatedBoson(4)])
            .unwrap();
        for i in 0..sys.total_dim() {
            let occ = sys.occupation_at(i).unwrap();
            assert_eq!(sys.linear_index(&occ).unwrap(), i);
        }
        // phi_{n1 n2} of the two-fermion register sits at 1 + n1 + 2 n2 (1-based).
        let f2 = ModeSystem::fermions(2).unwrap();
        assert_eq!(f2.linear_index(&"01".parse().unwrap()).unwrap(), 2);
    }

    #[test]
    fn mode_index_errors() {
        let sys = ModeSystem::fermions(2).unwrap();
        assert!(matches!(annihilator(&sys, 0), Err(FluxError::Argument(_))));
        assert!(matches!(annihilator(&sys, 3), Err(FluxError::Argument(_))));
        assert!(number_operator(&sys, 3).is_err());
        assert!(ModeSystem::new(vec![]).is_err());
        assert!(ModeSystem::bosons(1, 1).is_err());
        assert!(ModeSystem::fermions(13).is_err());
        assert!(ModeSystem::fermions(12).is_ok());
    }

    #[test]
    fn mode_kind_parsing() {
        assert_eq!("fermion".parse::<ModeKind>().unwrap(), ModeKind::Fermionic);
        assert_eq!("boson3".parse::<ModeKind>().unwrap(), ModeKind::TruncatedBoson(3));
        assert!("boson1".parse::<ModeKind>().is_err());
        assert!("qutrit".parse::<ModeKind>().is_err());
    }
}
