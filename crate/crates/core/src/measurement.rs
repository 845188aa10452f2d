//! The weak-measurement model: pointer outcomes with weights and
//! correlation factors, the measurement operators Ê_m = √w_m(𝟙 + εκ_mÂ),
//! and the joint outcome distributions they induce.

use std::fmt;

use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::hilbert::{FinalBasis, Observable, State};
use crate::tol;

/// Weak-pointer outcome set {m} with prior weights w_m and correlation
/// factors κ_m.
///
/// Valid models satisfy Σw = 1, Σwκ = 0 and Σwκ² = 1; construction only
/// enforces structure (matching lengths, at least two outcomes, positive
/// finite weights) so that [`MeasurementModel::validate`] can report the
/// sum rules on arbitrary inputs.
#[derive(Debug, Clone, PartialEq)]
pub struct MeasurementModel {
    outcomes: Vec<String>,
    weights: Vec<f64>,
    correlations: Vec<f64>,
}

impl MeasurementModel {
    pub fn new(
        outcomes: Vec<String>,
        weights: Vec<f64>,
        correlations: Vec<f64>,
    ) -> Result<Self> {
        if outcomes.len() != weights.len() || outcomes.len() != correlations.len() {
            return Err(Error::InvalidModel {
                reason: format!(
                    "outcomes/weights/correlations lengths differ: {}/{}/{}",
                    outcomes.len(),
                    weights.len(),
                    correlations.len()
                ),
            });
        }
        if outcomes.len() < 2 {
            return Err(Error::InvalidModel {
                reason: format!("need at least 2 outcomes, got {}", outcomes.len()),
            });
        }
        if let Some(w) = weights.iter().find(|w| !w.is_finite() || **w <= 0.0) {
            return Err(Error::InvalidModel {
                reason: format!("weights must be positive and finite, found {w}"),
            });
        }
        if let Some(k) = correlations.iter().find(|k| !k.is_finite()) {
            return Err(Error::InvalidModel {
                reason: format!("correlations must be finite, found {k}"),
            });
        }
        Ok(Self {
            outcomes,
            weights,
            correlations,
        })
    }

    /// The canonical binary pointer: outcomes `+`/`-`, w = 1/2 each,
    /// κ = ±1. This is the unique symmetric two-outcome model satisfying
    /// the sum rules.
    pub fn binary_symmetric() -> Self {
        Self {
            outcomes: vec!["+".to_string(), "-".to_string()],
            weights: vec![0.5, 0.5],
            correlations: vec![1.0, -1.0],
        }
    }

    pub fn n_outcomes(&self) -> usize {
        self.outcomes.len()
    }

    pub fn outcomes(&self) -> &[String] {
        &self.outcomes
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn correlations(&self) -> &[f64] {
        &self.correlations
    }

    pub fn outcome_index(&self, label: &str) -> Option<usize> {
        self.outcomes.iter().position(|o| o == label)
    }

    pub fn max_abs_correlation(&self) -> f64 {
        self.correlations.iter().map(|k| k.abs()).fold(0.0, f64::max)
    }

    /// Checks every model invariant and reports the measured residuals.
    /// Failures are reported, not raised; callers decide.
    pub fn validate(&self) -> ModelValidation {
        let n = self.outcomes.len();
        let min_weight = self.weights.iter().copied().fold(f64::INFINITY, f64::min);
        let sum_w: f64 = self.weights.iter().sum();
        let sum_wk: f64 = self
            .weights
            .iter()
            .zip(&self.correlations)
            .map(|(w, k)| w * k)
            .sum();
        let sum_wk2: f64 = self
            .weights
            .iter()
            .zip(&self.correlations)
            .map(|(w, k)| w * k * k)
            .sum();

        let checks = vec![
            ValidationCheck {
                name: "outcome_count",
                residual: if n >= 2 { 0.0 } else { (2 - n) as f64 },
                tolerance: 0.0,
                passed: n >= 2,
            },
            ValidationCheck {
                name: "weights_positive",
                residual: (-min_weight).max(0.0),
                tolerance: 0.0,
                passed: min_weight > 0.0,
            },
            ValidationCheck {
                name: "weights_sum_to_one",
                residual: (sum_w - 1.0).abs(),
                tolerance: tol::MODEL_TOL,
                passed: (sum_w - 1.0).abs() <= tol::MODEL_TOL,
            },
            ValidationCheck {
                name: "unbiasedness",
                residual: sum_wk.abs(),
                tolerance: tol::MODEL_TOL,
                passed: sum_wk.abs() <= tol::MODEL_TOL,
            },
            ValidationCheck {
                name: "correlation_normalization",
                residual: (sum_wk2 - 1.0).abs(),
                tolerance: tol::MODEL_TOL,
                passed: (sum_wk2 - 1.0).abs() <= tol::MODEL_TOL,
            },
        ];
        ModelValidation { checks }
    }

    pub fn is_valid(&self) -> bool {
        self.validate().passed()
    }
}

/// One invariant check with its measured residual.
#[derive(Debug, Clone, PartialEq)]
pub struct ValidationCheck {
    pub name: &'static str,
    pub residual: f64,
    pub tolerance: f64,
    pub passed: bool,
}

/// Pass/fail report for each [`MeasurementModel`] invariant.
#[derive(Debug, Clone, PartialEq)]
pub struct ModelValidation {
    pub checks: Vec<ValidationCheck>,
}

impl ModelValidation {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    pub fn failures(&self) -> impl Iterator<Item = &ValidationCheck> {
        self.checks.iter().filter(|c| !c.passed)
    }

    /// Comma-joined description of the failing checks.
    pub fn failure_summary(&self) -> String {
        self.failures()
            .map(|c| format!("{} (residual {:.3e})", c.name, c.residual))
            .collect::<Vec<_>>()
            .join(", ")
    }
}

/// The unknown interaction parameter ε.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Epsilon(pub f64);

impl Epsilon {
    pub fn value(self) -> f64 {
        self.0
    }

    /// |ε|·max|κ_m|·‖Â‖₂, the size of the first-order term relative to 1.
    pub fn weak_regime_factor(self, model: &MeasurementModel, observable: &Observable) -> f64 {
        self.0.abs() * model.max_abs_correlation() * observable.spectral_norm()
    }

    /// True while the factor stays at or below [`tol::WEAK_REGIME_LIMIT`].
    pub fn within_weak_regime(self, model: &MeasurementModel, observable: &Observable) -> bool {
        self.weak_regime_factor(model, observable) <= tol::WEAK_REGIME_LIMIT
    }
}

/// Which probability engine produced a distribution.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ProbabilityMode {
    FirstOrder,
    Exact,
}

/// Validity diagnostics attached to a distribution instead of being raised.
#[derive(Debug, Clone, PartialEq)]
pub enum ProbabilityWarning {
    /// The first-order expansion is outside its trusted coupling range.
    WeakRegimeExceeded { factor: f64 },
    /// A first-order entry went negative; it is reported, never clamped.
    NegativeEntry {
        outcome: String,
        post_selection: String,
        value: f64,
    },
}

impl fmt::Display for ProbabilityWarning {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ProbabilityWarning::WeakRegimeExceeded { factor } => write!(
                f,
                "weak-regime factor {factor:.3} exceeds {}; first-order probabilities are unreliable",
                tol::WEAK_REGIME_LIMIT
            ),
            ProbabilityWarning::NegativeEntry {
                outcome,
                post_selection,
                value,
            } => write!(
                f,
                "first-order probability p({outcome},{post_selection}) = {value:.3e} is negative"
            ),
        }
    }
}

/// Joint probabilities p(m, f) over pointer outcomes and final-measurement
/// results, stored outcome-major in model × basis order.
#[derive(Debug, Clone, PartialEq)]
pub struct JointDistribution {
    outcome_labels: Vec<String>,
    basis_labels: Vec<String>,
    probs: Vec<f64>,
    epsilon: f64,
    mode: ProbabilityMode,
    warnings: Vec<ProbabilityWarning>,
}

impl JointDistribution {
    pub fn n_outcomes(&self) -> usize {
        self.outcome_labels.len()
    }

    pub fn n_basis(&self) -> usize {
        self.basis_labels.len()
    }

    pub fn prob(&self, m: usize, f: usize) -> f64 {
        self.probs[m * self.n_basis() + f]
    }

    /// Flat outcome-major probabilities; the deterministic cell order used
    /// for sampling.
    pub fn probs(&self) -> &[f64] {
        &self.probs
    }

    pub fn outcome_labels(&self) -> &[String] {
        &self.outcome_labels
    }

    pub fn basis_labels(&self) -> &[String] {
        &self.basis_labels
    }

    pub fn epsilon(&self) -> f64 {
        self.epsilon
    }

    pub fn mode(&self) -> ProbabilityMode {
        self.mode
    }

    pub fn warnings(&self) -> &[ProbabilityWarning] {
        &self.warnings
    }

    pub fn total(&self) -> f64 {
        self.probs.iter().sum()
    }

    /// p(f) = Σ_m p(m, f).
    pub fn marginal_over_outcomes(&self) -> Vec<f64> {
        let nf = self.n_basis();
        let mut out = vec![0.0; nf];
        for m in 0..self.n_outcomes() {
            for f in 0..nf {
                out[f] += self.prob(m, f);
            }
        }
        out
    }
}

/// The measurement operator Ê_m = √w_m·(𝟙 + ε·κ_m·Â).
pub fn kraus_operator(
    model: &MeasurementModel,
    label: &str,
    observable: &Observable,
    epsilon: Epsilon,
) -> Result<DMatrix<Complex64>> {
    let index = model.outcome_index(label).ok_or(Error::UnknownOutcome {
        label: label.to_string(),
    })?;
    let dim = observable.dim();
    let scale = Complex64::new(model.weights()[index].sqrt(), 0.0);
    let coupling = Complex64::new(epsilon.value() * model.correlations()[index], 0.0);
    Ok((DMatrix::identity(dim, dim) + observable.matrix() * coupling) * scale)
}

fn check_dims(observable: &Observable, psi: &State, basis: &FinalBasis) -> Result<()> {
    if observable.dim() != psi.dim() {
        return Err(Error::DimMismatch {
            expected: observable.dim(),
            actual: psi.dim(),
        });
    }
    if basis.dim() != psi.dim() {
        return Err(Error::DimMismatch {
            expected: psi.dim(),
            actual: basis.dim(),
        });
    }
    Ok(())
}

/// First-order joint distribution
/// p(m,f) = w_m·|⟨f|ψ⟩|²·(1 + 2εκ_m·Re[⟨f|Â|ψ⟩/⟨f|ψ⟩]).
///
/// When |⟨f|ψ⟩|² is below the overlap floor the weak-value correction is
/// dropped (the exact entry is O(ε²) there, beyond first order). Entries
/// may go negative at large ε; they are flagged, never clamped.
pub fn joint_prob_linear(
    model: &MeasurementModel,
    observable: &Observable,
    psi: &State,
    basis: &FinalBasis,
    epsilon: Epsilon,
) -> Result<JointDistribution> {
    check_dims(observable, psi, basis)?;
    let eps = epsilon.value();
    let a_psi = observable.apply(psi);

    let n_m = model.n_outcomes();
    let n_f = basis.dim();
    let mut probs = vec![0.0; n_m * n_f];
    for (fi, f) in basis.vectors().iter().enumerate() {
        let z = f.amplitudes().dotc(psi.amplitudes());
        let y = f.amplitudes().dotc(&a_psi);
        let post_prob = z.norm_sqr();
        let real_weak_value = if post_prob < tol::OVERLAP_FLOOR {
            None
        } else {
            Some((z.conj() * y).re / post_prob)
        };
        for m in 0..n_m {
            let weight = model.weights()[m];
            let kappa = model.correlations()[m];
            probs[m * n_f + fi] = match real_weak_value {
                Some(re_aw) => weight * post_prob * (1.0 + 2.0 * eps * kappa * re_aw),
                None => weight * post_prob,
            };
        }
    }

    let mut warnings = Vec::new();
    let factor = epsilon.weak_regime_factor(model, observable);
    if factor > tol::WEAK_REGIME_LIMIT {
        warnings.push(ProbabilityWarning::WeakRegimeExceeded { factor });
    }
    for m in 0..n_m {
        for fi in 0..n_f {
            let value = probs[m * n_f + fi];
            if value < 0.0 {
                warnings.push(ProbabilityWarning::NegativeEntry {
                    outcome: model.outcomes()[m].clone(),
                    post_selection: basis.labels()[fi].clone(),
                    value,
                });
            }
        }
    }

    Ok(JointDistribution {
        outcome_labels: model.outcomes().to_vec(),
        basis_labels: basis.labels().to_vec(),
        probs,
        epsilon: eps,
        mode: ProbabilityMode::FirstOrder,
        warnings,
    })
}

/// Exact Born-rule joint distribution
/// p(m,f) = |⟨f|Ê_m|ψ⟩|² / N(ε) with N(ε) = Σ_{m,f}|⟨f|Ê_m|ψ⟩|².
///
/// For models satisfying the sum rules, N(ε) = 1 + ε²⟨ψ|Â²|ψ⟩, which is
/// asserted. All entries are non-negative and sum to one at any ε.
pub fn joint_prob_exact(
    model: &MeasurementModel,
    observable: &Observable,
    psi: &State,
    basis: &FinalBasis,
    epsilon: Epsilon,
) -> Result<JointDistribution> {
    check_dims(observable, psi, basis)?;
    let eps = epsilon.value();
    let a_psi = observable.apply(psi);

    let n_m = model.n_outcomes();
    let n_f = basis.dim();
    let mut probs = vec![0.0; n_m * n_f];
    let mut normalization = 0.0;
    for (fi, f) in basis.vectors().iter().enumerate() {
        let z = f.amplitudes().dotc(psi.amplitudes());
        let y = f.amplitudes().dotc(&a_psi);
        for m in 0..n_m {
            let weight = model.weights()[m];
            let kappa = model.correlations()[m];
            let amplitude = z + y * Complex64::new(eps * kappa, 0.0);
            let raw = weight * amplitude.norm_sqr();
            probs[m * n_f + fi] = raw;
            normalization += raw;
        }
    }

    if model.is_valid() {
        let expected = 1.0 + eps * eps * observable.second_moment(psi);
        assert!(
            (normalization - expected).abs() <= tol::MODEL_TOL,
            "exact normalization {normalization} deviates from 1 + eps^2 <A^2> = {expected}"
        );
    }
    for p in &mut probs {
        *p /= normalization;
    }

    Ok(JointDistribution {
        outcome_labels: model.outcomes().to_vec(),
        basis_labels: basis.labels().to_vec(),
        probs,
        epsilon: eps,
        mode: ProbabilityMode::Exact,
        warnings: Vec::new(),
    })
}

/// The ε-score at ε = 0: ∂_ε ln p(m,f)|₀ = 2κ_m·Re[⟨f|Â|ψ⟩/⟨f|ψ⟩].
pub fn log_derivative(
    model: &MeasurementModel,
    observable: &Observable,
    psi: &State,
    f: &State,
    label: &str,
) -> Result<f64> {
    let index = model.outcome_index(label).ok_or(Error::UnknownOutcome {
        label: label.to_string(),
    })?;
    if observable.dim() != psi.dim() || f.dim() != psi.dim() {
        return Err(Error::DimMismatch {
            expected: psi.dim(),
            actual: observable.dim().max(f.dim()),
        });
    }
    let z = f.amplitudes().dotc(psi.amplitudes());
    let post_prob = z.norm_sqr();
    if post_prob < tol::OVERLAP_FLOOR {
        return Err(Error::UndefinedWeakValue { post_prob });
    }
    let y = f.amplitudes().dotc(&observable.apply(psi));
    Ok(2.0 * model.correlations()[index] * (z.conj() * y).re / post_prob)
}
