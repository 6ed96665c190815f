//! Numerical laboratory for 1-equivariant wave maps `R^{2+1} -> S^2`.
//!
//! The radial reduction `psi_tt - psi_rr - psi_r / r + sin(2 psi) / (2 r^2) = 0`
//! is evolved on a uniform radial grid together with its linearization around
//! zero. On top of the solvers sit the energy and flux diagnostics of global
//! wave maps and a numerical soliton-plus-radiation decomposition
//! `psi(t) = phi_L(t) + Q(r / lambda(t)) + eps(t)`.
//!
//! Module map:
//!
//! * [`grid`], [`field`], [`soliton`], [`functionals`]: shared types and the
//!   energy, `G` and `H x L^2` functionals.
//! * [`solver`]: RK4 method-of-lines evolution of the nonlinear and linear
//!   equations in the regular variable `v = psi / r`.
//! * [`diagnostics`]: energy ledgers, identity audits, null-cone energies and
//!   exterior decay trends.
//! * [`decompose`]: radiation extraction, scale fitting and decomposition
//!   tracking.
//! * [`harness`]: run configuration, initial-data families, bundles on disk,
//!   sweeps and the `run`/`sweep`/`analyze`/`verify` drivers.

pub mod decompose;
pub mod diagnostics;
pub mod error;
pub mod field;
pub mod functionals;
pub mod grid;
pub mod harness;
pub mod smooth;
pub mod soliton;
pub mod solver;

pub use error::{Error, Result};
pub use field::{EnergyDensitySample, FieldState};
pub use grid::RadialGrid;
pub use soliton::SolitonProfile;

/// Energy of the harmonic map `Q(r) = 2 arctan r`.
pub const SOLITON_ENERGY: f64 = 4.0;
