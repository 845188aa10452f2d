//! Numeric tolerances used throughout the crate.

/// Allowed deviation of a state's squared norm from 1.
pub const NORM_TOL: f64 = 1e-12;

/// Allowed max-entry magnitude of `A - A^H` for observables.
pub const HERMITIAN_TOL: f64 = 1e-12;

/// Allowed pairwise deviation `|<f_i|f_j> - delta_ij|` for final bases.
pub const ORTHO_TOL: f64 = 1e-10;

/// Norm below which a vector counts as zero and cannot be normalized.
pub const ZERO_VECTOR_TOL: f64 = 1e-14;

/// Post-selection probability below which a weak value is undefined.
pub const OVERLAP_FLOOR: f64 = 1e-24;

/// Allowed residual on the measurement-model sum rules.
pub const MODEL_TOL: f64 = 1e-12;

/// Largest `|eps| * max|kappa| * ||A||_2` for which the first-order
/// probability engine is trusted; beyond it a warning is attached.
pub const WEAK_REGIME_LIMIT: f64 = 0.2;

/// Tunable tolerances for analysis-level verdicts and consistency sums.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Tolerances {
    /// Structural checks: realness verdicts, orthonormality, eigen residuals.
    pub structural: f64,
    /// Accumulated sums: Fisher totals against closed forms.
    pub accumulated: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Self {
            structural: 1e-10,
            accumulated: 1e-9,
        }
    }
}
