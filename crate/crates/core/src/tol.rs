//! Numerical tolerances shared across the crate.
//!
//! The constants are the defaults; [`Tolerances`] carries a resolved set that
//! callers may override and that result files echo.

use serde::{Deserialize, Serialize};

/// Maximum entrywise deviation from Hermiticity for a density matrix.
pub const HERMITIAN: f64 = 1e-10;
/// Largest admissible negative eigenvalue of a density matrix.
pub const PSD: f64 = 1e-10;
/// Maximum deviation of the trace of a density matrix from one.
pub const TRACE: f64 = 1e-10;
/// Maximum deviation of the squared norm of a pure state from one.
pub const PURE_NORM: f64 = 1e-12;
/// Hermiticity tolerance accepted by the eigensolver.
pub const EIG_HERMITIAN: f64 = 1e-8;
/// Eigenvalues below this are excluded from entropy sums and rank counts.
pub const EIG_FLOOR: f64 = 1e-12;
/// Eigenvalues in `(-CLAMP, 0)` are clamped to zero.
pub const CLAMP: f64 = 1e-10;
/// Tolerance for exact-structure certificates and bound coincidence.
pub const CERTIFICATE: f64 = 1e-9;
/// Default tolerance for audits comparing two optimizer outputs.
pub const STACKED: f64 = 5e-3;
/// Tolerance for warm-started additivity audits.
pub const WARM_START: f64 = 1e-6;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Tolerances {
    pub hermitian: f64,
    pub psd: f64,
    pub trace: f64,
    pub pure_norm: f64,
    pub eig_floor: f64,
    pub certificate: f64,
    pub stacked: f64,
    pub warm_start: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Self {
            hermitian: HERMITIAN,
            psd: PSD,
            trace: TRACE,
            pure_norm: PURE_NORM,
            eig_floor: EIG_FLOOR,
            certificate: CERTIFICATE,
            stacked: STACKED,
            warm_start: WARM_START,
        }
    }
}
