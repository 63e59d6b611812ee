//! Mean-value dynamics for small multi-agent systems driven by
//! non-self-adjoint Hamiltonians built from ladder operators.
//!
//! The building blocks, bottom up:
//!
//! * [`linalg`]: dense complex matrices, Kronecker products, and a matrix
//!   exponential that is exact on nilpotent input.
//! * [`ladder`]: fermionic and truncated-bosonic ladder operators on a
//!   tensor-product register.
//! * [`hamiltonian`]: Hamiltonians as sums of ladder monomials.
//! * [`evolution`]: three ways of evolving mean values, and time series.
//! * [`catalog`]: ready-made models with closed-form reference curves.
//! * [`cli`]: configuration files, CSV output, and the `simulate`,
//!   `compare` and `verify` commands behind the `quflux` binary.

pub mod catalog;
pub mod cli;
pub mod error;
pub mod evolution;
pub mod hamiltonian;
pub mod ladder;
pub mod linalg;

pub use error::{FluxError, Result};
pub use evolution::{EvolutionRequest, Observable, Strategy, TimeSeries};
pub use hamiltonian::{HamiltonianSpec, HamiltonianTerm, LadderFactor};
pub use ladder::{ModeKind, ModeSystem, OccupationState};
pub use linalg::{ComplexMatrix, ComplexVector, C64};
