//! Error type shared by all modules of the crate.

use thiserror::Error;

/// Errors produced by state construction, measurement models, weak-value
/// analysis and estimation.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// Two objects that must live in the same Hilbert space do not.
    #[error("DimMismatch: expected dimension {expected}, got {actual}")]
    DimMismatch { expected: usize, actual: usize },

    /// A vector with (near-)zero norm cannot be normalized.
    #[error("ZeroVector: norm {norm:.3e} is too small to normalize")]
    ZeroVector { norm: f64 },

    /// State amplitudes do not have unit norm.
    #[error("NotNormalized: |norm^2 - 1| = {residual:.3e} exceeds 1e-12")]
    NotNormalized { residual: f64 },

    /// Observable matrix is not Hermitian.
    #[error("NotHermitian: max |A - A^H| entry is {residual:.3e}, above 1e-12")]
    NotHermitian { residual: f64 },

    /// Vectors meant to be orthonormal are not.
    #[error("NotOrthonormal: |<v{i}|v{j}> - delta| = {residual:.3e} exceeds 1e-10")]
    NotOrthonormal { i: usize, j: usize, residual: f64 },

    /// A pointer-outcome label is not part of the measurement model.
    #[error("UnknownOutcome: no outcome labelled `{label}`")]
    UnknownOutcome { label: String },

    /// The post-selection overlap vanishes, so the weak value is undefined.
    #[error("UndefinedWeakValue: |<f|psi>|^2 = {post_prob:.3e} is below the 1e-24 floor")]
    UndefinedWeakValue { post_prob: f64 },

    /// A measurement model violates its sum rules or structure.
    #[error("InvalidModel: {reason}")]
    InvalidModel { reason: String },

    /// Inputs have complex entries where a real representation is required.
    #[error("NotRealRepresentable: max imaginary magnitude {max_imag:.3e} exceeds 1e-12")]
    NotRealRepresentable { max_imag: f64 },

    /// The single-outcome basis construction is undefined because the
    /// carrying outcome would have vanishing post-selection probability.
    #[error("ShuntUndefined: <A> = {expectation:.3e} is too close to zero")]
    ShuntUndefined { expectation: f64 },

    /// The Fisher information vanishes, so no score estimator exists.
    #[error("ZeroInformation: Fisher total {fisher:.3e} is below 1e-12")]
    ZeroInformation { fisher: f64 },
}

pub type Result<T> = std::result::Result<T, Error>;
