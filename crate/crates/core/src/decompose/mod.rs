//! Soliton-plus-radiation decomposition `psi(t) = phi_L(t) + Q(r / lambda(t)) + eps(t)`.
//!
//! The radiation is cut out of the final state once (interior linear fill
//! inside a cutoff radius), propagated backward with the linear flow, and
//! subtracted from every snapshot. The remainder `a(t) = psi(t) - phi_L(t)`
//! is fitted against the rescaled harmonic map.

pub mod fit;
pub mod radiation;
pub mod track;

pub use fit::{fit_scale, scale_objective, ScaleFit, SCAN_POINTS};
pub use radiation::{extract_radiation, RadiationExtraction};
pub use track::{track_decomposition, CutoffPolicy, DecompositionRecord, DecompositionReport};
