//! Dense complex linear algebra over small finite-dimensional Hilbert spaces.
//!
//! States are unit-norm amplitude vectors, observables are Hermitian
//! matrices, and final measurements are complete orthonormal bases. All
//! operations are pure functions on immutable values.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::tol;

/// A normalized pure state |ψ⟩ over a finite Hilbert space.
#[derive(Debug, Clone, PartialEq)]
pub struct State {
    amplitudes: DVector<Complex64>,
}

impl State {
    /// Wraps an amplitude vector, enforcing unit norm and `dim >= 2`.
    pub fn new(amplitudes: DVector<Complex64>) -> Result<Self> {
        if amplitudes.len() < 2 {
            return Err(Error::DimMismatch {
                expected: 2,
                actual: amplitudes.len(),
            });
        }
        let residual = (amplitudes.norm_squared() - 1.0).abs();
        if residual > tol::NORM_TOL {
            return Err(Error::NotNormalized { residual });
        }
        Ok(Self { amplitudes })
    }

    /// The computational basis state |k⟩.
    pub fn basis_state(dim: usize, k: usize) -> Self {
        assert!(k < dim && dim >= 2, "basis index out of range");
        let mut v = DVector::zeros(dim);
        v[k] = Complex64::new(1.0, 0.0);
        Self { amplitudes: v }
    }

    /// Builds a state from real amplitudes (must already be unit norm).
    pub fn from_real(amplitudes: &[f64]) -> Result<Self> {
        Self::new(DVector::from_iterator(
            amplitudes.len(),
            amplitudes.iter().map(|&x| Complex64::new(x, 0.0)),
        ))
    }

    pub fn dim(&self) -> usize {
        self.amplitudes.len()
    }

    pub fn amplitudes(&self) -> &DVector<Complex64> {
        &self.amplitudes
    }

    /// Largest |Im| over the amplitudes.
    pub fn max_abs_imag(&self) -> f64 {
        self.amplitudes.iter().map(|c| c.im.abs()).fold(0.0, f64::max)
    }
}

/// A Hermitian operator, the target observable Â.
#[derive(Debug, Clone, PartialEq)]
pub struct Observable {
    matrix: DMatrix<Complex64>,
}

impl Observable {
    /// Wraps a square matrix, enforcing Hermiticity within 1e-12.
    pub fn new(matrix: DMatrix<Complex64>) -> Result<Self> {
        if matrix.nrows() != matrix.ncols() {
            return Err(Error::DimMismatch {
                expected: matrix.nrows(),
                actual: matrix.ncols(),
            });
        }
        let residual = (&matrix - matrix.adjoint())
            .iter()
            .map(|c| c.norm())
            .fold(0.0, f64::max);
        if residual > tol::HERMITIAN_TOL {
            return Err(Error::NotHermitian { residual });
        }
        Ok(Self { matrix })
    }

    /// The identity observable on a `dim`-dimensional space.
    pub fn identity(dim: usize) -> Self {
        Self {
            matrix: DMatrix::identity(dim, dim),
        }
    }

    /// Builds an observable from a real symmetric matrix given row-major.
    pub fn from_real_rows(rows: &[&[f64]]) -> Result<Self> {
        let n = rows.len();
        let matrix = DMatrix::from_fn(n, n, |i, j| Complex64::new(rows[i][j], 0.0));
        Self::new(matrix)
    }

    pub fn dim(&self) -> usize {
        self.matrix.nrows()
    }

    pub fn matrix(&self) -> &DMatrix<Complex64> {
        &self.matrix
    }

    /// Applies the operator: Â|ψ⟩ (not normalized).
    pub fn apply(&self, state: &State) -> DVector<Complex64> {
        &self.matrix * state.amplitudes()
    }

    /// ⟨ψ|Â|ψ⟩, real for Hermitian Â.
    pub fn expectation(&self, state: &State) -> f64 {
        state.amplitudes().dotc(&self.apply(state)).re
    }

    /// ⟨ψ|Â²|ψ⟩ computed as ‖Â|ψ⟩‖², which is exactly real.
    pub fn second_moment(&self, state: &State) -> f64 {
        self.apply(state).norm_squared()
    }

    /// Spectral norm ‖Â‖₂ = max |λ|.
    pub fn spectral_norm(&self) -> f64 {
        let (eigenvalues, _) = eig_hermitian(self);
        eigenvalues.iter().map(|l| l.abs()).fold(0.0, f64::max)
    }

    /// Largest |Im| over the matrix entries.
    pub fn max_abs_imag(&self) -> f64 {
        self.matrix.iter().map(|c| c.im.abs()).fold(0.0, f64::max)
    }
}

/// A complete orthonormal basis {|f⟩} for the final projective measurement.
#[derive(Debug, Clone, PartialEq)]
pub struct FinalBasis {
    vectors: Vec<State>,
    labels: Vec<String>,
}

impl FinalBasis {
    /// Wraps `dim` labelled states, enforcing pairwise orthonormality.
    pub fn new(vectors: Vec<State>, labels: Vec<String>) -> Result<Self> {
        let dim = match vectors.first() {
            Some(v) => v.dim(),
            None => {
                return Err(Error::DimMismatch {
                    expected: 2,
                    actual: 0,
                })
            }
        };
        if vectors.len() != dim {
            return Err(Error::DimMismatch {
                expected: dim,
                actual: vectors.len(),
            });
        }
        if labels.len() != vectors.len() {
            return Err(Error::DimMismatch {
                expected: vectors.len(),
                actual: labels.len(),
            });
        }
        for v in &vectors {
            if v.dim() != dim {
                return Err(Error::DimMismatch {
                    expected: dim,
                    actual: v.dim(),
                });
            }
        }
        check_orthonormal(&vectors)?;
        Ok(Self { vectors, labels })
    }

    /// As [`FinalBasis::new`] with labels `f0, f1, ...`.
    pub fn from_vectors(vectors: Vec<State>) -> Result<Self> {
        let labels = (0..vectors.len()).map(|k| format!("f{k}")).collect();
        Self::new(vectors, labels)
    }

    pub fn dim(&self) -> usize {
        self.vectors.len()
    }

    pub fn vectors(&self) -> &[State] {
        &self.vectors
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn iter(&self) -> impl Iterator<Item = (&String, &State)> {
        self.labels.iter().zip(self.vectors.iter())
    }
}

fn check_orthonormal(vectors: &[State]) -> Result<()> {
    for i in 0..vectors.len() {
        for j in i..vectors.len() {
            let target = if i == j { 1.0 } else { 0.0 };
            let overlap = vectors[i].amplitudes().dotc(vectors[j].amplitudes());
            let residual = (overlap - Complex64::new(target, 0.0)).norm();
            if residual > tol::ORTHO_TOL {
                return Err(Error::NotOrthonormal { i, j, residual });
            }
        }
    }
    Ok(())
}

/// Inner product ⟨a|b⟩ = Σᵢ conj(aᵢ)·bᵢ, conjugate-linear in the first
/// argument.
pub fn inner(a: &State, b: &State) -> Result<Complex64> {
    if a.dim() != b.dim() {
        return Err(Error::DimMismatch {
            expected: a.dim(),
            actual: b.dim(),
        });
    }
    Ok(a.amplitudes().dotc(b.amplitudes()))
}

/// Scales a vector to unit norm.
pub fn normalize(v: DVector<Complex64>) -> Result<State> {
    let norm = v.norm();
    if norm <= tol::ZERO_VECTOR_TOL {
        return Err(Error::ZeroVector { norm });
    }
    State::new(v / Complex64::new(norm, 0.0))
}

/// Compares two states up to a global phase: true iff |⟨a|b⟩| = 1 within
/// `tolerance`.
pub fn phase_invariant_eq(a: &State, b: &State, tolerance: f64) -> bool {
    match inner(a, b) {
        Ok(overlap) => (overlap.norm() - 1.0).abs() <= tolerance,
        Err(_) => false,
    }
}

/// Eigendecomposition of a Hermitian observable.
///
/// Returns the eigenvalues in ascending order together with the matching
/// orthonormal eigenbasis (labels `e0, e1, ...`). For degenerate
/// eigenvalues any orthonormal spanning set of the eigenspace may be
/// returned.
pub fn eig_hermitian(observable: &Observable) -> (Vec<f64>, FinalBasis) {
    let dim = observable.dim();
    let se = nalgebra::SymmetricEigen::new(observable.matrix().clone());

    let mut order: Vec<usize> = (0..dim).collect();
    order.sort_by(|&i, &j| se.eigenvalues[i].total_cmp(&se.eigenvalues[j]));

    let eigenvalues: Vec<f64> = order.iter().map(|&k| se.eigenvalues[k]).collect();
    let mut columns: Vec<DVector<Complex64>> = order
        .iter()
        .map(|&k| se.eigenvectors.column(k).into_owned())
        .collect();

    // Re-orthonormalize in sorted order so that (near-)degenerate clusters
    // always meet the basis tolerance. Projections between well-separated
    // eigenvectors are at rounding level and leave them unchanged.
    for k in 0..columns.len() {
        for _ in 0..2 {
            for j in 0..k {
                let coeff = columns[j].dotc(&columns[k]);
                let correction = &columns[j] * coeff;
                columns[k] -= correction;
            }
        }
        let norm = columns[k].norm();
        columns[k] /= Complex64::new(norm, 0.0);
    }

    let vectors: Vec<State> = columns
        .into_iter()
        .map(|v| State::new(v).expect("eigenvector is unit norm"))
        .collect();
    let labels = (0..dim).map(|k| format!("e{k}")).collect();
    let basis = FinalBasis::new(vectors, labels).expect("eigenbasis is orthonormal");
    (eigenvalues, basis)
}

/// Completes a partial orthonormal set to a full basis.
///
/// The input vectors come first, unchanged. The remainder is built by
/// Gram-Schmidt over the canonical unit vectors in index order, skipping
/// candidates whose residual norm falls below 1e-10.
pub fn complete_basis(partial: &[State], dim: usize) -> Result<FinalBasis> {
    if partial.len() > dim {
        return Err(Error::DimMismatch {
            expected: dim,
            actual: partial.len(),
        });
    }
    for v in partial {
        if v.dim() != dim {
            return Err(Error::DimMismatch {
                expected: dim,
                actual: v.dim(),
            });
        }
    }
    check_orthonormal(partial)?;

    let mut vectors: Vec<State> = partial.to_vec();
    for k in 0..dim {
        if vectors.len() == dim {
            break;
        }
        let mut candidate: DVector<Complex64> = DVector::zeros(dim);
        candidate[k] = Complex64::new(1.0, 0.0);
        for _ in 0..2 {
            for v in &vectors {
                let coeff = v.amplitudes().dotc(&candidate);
                let correction = v.amplitudes() * coeff;
                candidate -= correction;
            }
        }
        let norm = candidate.norm();
        if norm < tol::ORTHO_TOL {
            continue;
        }
        vectors.push(State::new(candidate / Complex64::new(norm, 0.0))?);
    }

    FinalBasis::from_vectors(vectors)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    fn cx(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn psi_a() -> State {
        normalize(DVector::from_vec(vec![cx(1.0, 0.0), cx(1.0, 0.0)])).unwrap()
    }

    fn fix_f1() -> State {
        normalize(DVector::from_vec(vec![cx(2.0, 0.0), cx(-1.0, 0.0)])).unwrap()
    }

    fn sigma_z() -> Observable {
        Observable::from_real_rows(&[&[1.0, 0.0], &[0.0, -1.0]]).unwrap()
    }

    #[test]
    fn inner_normalization() {
        let psi = psi_a();
        let result = inner(&psi, &psi).unwrap();
        assert_abs_diff_eq!(result.re, 1.0, epsilon = 1e-14);
        assert_abs_diff_eq!(result.im, 0.0, epsilon = 1e-14);
    }

    #[test]
    fn inner_fix_f_example() {
        // <f1|psi_A> = (2 - 1)/sqrt(10)
        let result = inner(&fix_f1(), &psi_a()).unwrap();
        assert_abs_diff_eq!(result.re, 1.0 / 10.0_f64.sqrt(), epsilon = 1e-14);
        assert_abs_diff_eq!(result.im, 0.0, epsilon = 1e-14);
    }

    #[test]
    fn inner_orthogonal_basis_states() {
        let zero = State::basis_state(2, 0);
        let one = State::basis_state(2, 1);
        assert_eq!(inner(&zero, &one).unwrap(), cx(0.0, 0.0));
    }

    #[test]
    fn inner_dim_mismatch() {
        let a = State::basis_state(2, 0);
        let b = State::basis_state(3, 0);
        assert!(matches!(inner(&a, &b), Err(Error::DimMismatch { .. })));
    }

    #[test]
    fn inner_conjugate_in_first_argument() {
        let a = State::new(DVector::from_vec(vec![cx(0.0, 1.0), cx(0.0, 0.0)])).unwrap();
        let b = State::basis_state(2, 0);
        assert_eq!(inner(&a, &b).unwrap(), cx(0.0, -1.0));
    }

    #[test]
    fn normalize_scales() {
        let state = normalize(DVector::from_vec(vec![cx(2.0, 0.0), cx(0.0, 0.0)])).unwrap();
        assert_abs_diff_eq!(state.amplitudes()[0].re, 1.0, epsilon = 1e-15);
        assert_abs_diff_eq!(state.amplitudes()[1].re, 0.0, epsilon = 1e-15);
    }

    #[test]
    fn normalize_fix_b() {
        // (sqrt(3), 1) has norm 2.
        let state =
            normalize(DVector::from_vec(vec![cx(3.0_f64.sqrt(), 0.0), cx(1.0, 0.0)])).unwrap();
        assert_abs_diff_eq!(state.amplitudes()[0].re, 3.0_f64.sqrt() / 2.0, epsilon = 1e-15);
        assert_abs_diff_eq!(state.amplitudes()[1].re, 0.5, epsilon = 1e-15);
    }

    #[test]
    fn normalize_zero_vector() {
        let result = normalize(DVector::from_vec(vec![cx(0.0, 0.0), cx(0.0, 0.0)]));
        assert!(matches!(result, Err(Error::ZeroVector { .. })));
    }

    #[test]
    fn state_rejects_unnormalized() {
        let result = State::new(DVector::from_vec(vec![cx(1.0, 0.0), cx(1.0, 0.0)]));
        assert!(matches!(result, Err(Error::NotNormalized { .. })));
    }

    #[test]
    fn observable_rejects_non_hermitian() {
        let m = DMatrix::from_row_slice(2, 2, &[cx(0.0, 0.0), cx(1.0, 0.0), cx(0.0, 0.0), cx(0.0, 0.0)]);
        assert!(matches!(Observable::new(m), Err(Error::NotHermitian { .. })));
    }

    #[test]
    fn eig_sigma_z() {
        let (eigenvalues, basis) = eig_hermitian(&sigma_z());
        assert_abs_diff_eq!(eigenvalues[0], -1.0, epsilon = 1e-12);
        assert_abs_diff_eq!(eigenvalues[1], 1.0, epsilon = 1e-12);
        // Ascending order puts |1> first, |0> second.
        assert!(phase_invariant_eq(&basis.vectors()[0], &State::basis_state(2, 1), 1e-10));
        assert!(phase_invariant_eq(&basis.vectors()[1], &State::basis_state(2, 0), 1e-10));
    }

    #[test]
    fn eig_identity_degenerate() {
        let (eigenvalues, basis) = eig_hermitian(&Observable::identity(2));
        assert_abs_diff_eq!(eigenvalues[0], 1.0, epsilon = 1e-12);
        assert_abs_diff_eq!(eigenvalues[1], 1.0, epsilon = 1e-12);
        // Any orthonormal pair is fine; the basis invariants already hold,
        // so only the eigen-equation is left to check.
        let obs = Observable::identity(2);
        for v in basis.vectors() {
            let residual = (obs.apply(v) - v.amplitudes()).norm();
            assert!(residual < 1e-10);
        }
    }

    #[test]
    fn eig_sigma_x() {
        let sx = Observable::from_real_rows(&[&[0.0, 1.0], &[1.0, 0.0]]).unwrap();
        let (eigenvalues, basis) = eig_hermitian(&sx);
        assert_abs_diff_eq!(eigenvalues[0], -1.0, epsilon = 1e-12);
        assert_abs_diff_eq!(eigenvalues[1], 1.0, epsilon = 1e-12);
        let minus = normalize(DVector::from_vec(vec![cx(1.0, 0.0), cx(-1.0, 0.0)])).unwrap();
        let plus = normalize(DVector::from_vec(vec![cx(1.0, 0.0), cx(1.0, 0.0)])).unwrap();
        assert!(phase_invariant_eq(&basis.vectors()[0], &minus, 1e-10));
        assert!(phase_invariant_eq(&basis.vectors()[1], &plus, 1e-10));
    }

    #[test]
    fn complete_basis_from_zero_ket() {
        let basis = complete_basis(&[State::basis_state(2, 0)], 2).unwrap();
        assert_eq!(basis.vectors()[0], State::basis_state(2, 0));
        assert!(phase_invariant_eq(&basis.vectors()[1], &State::basis_state(2, 1), 1e-10));
    }

    #[test]
    fn complete_basis_orthogonal_complement() {
        let basis = complete_basis(&[fix_f1()], 2).unwrap();
        let f2 = normalize(DVector::from_vec(vec![cx(1.0, 0.0), cx(2.0, 0.0)])).unwrap();
        assert_eq!(basis.vectors()[0], fix_f1());
        assert!(phase_invariant_eq(&basis.vectors()[1], &f2, 1e-10));
    }

    #[test]
    fn complete_basis_rejects_repeated_vector() {
        let result = complete_basis(&[State::basis_state(2, 0), State::basis_state(2, 0)], 2);
        assert!(matches!(result, Err(Error::NotOrthonormal { .. })));
    }

    #[test]
    fn complete_basis_empty_partial() {
        let basis = complete_basis(&[], 3).unwrap();
        assert_eq!(basis.dim(), 3);
        for (k, v) in basis.vectors().iter().enumerate() {
            assert!(phase_invariant_eq(v, &State::basis_state(3, k), 1e-10));
        }
    }

    #[test]
    fn final_basis_requires_complete_set() {
        let result = FinalBasis::from_vectors(vec![State::basis_state(3, 0), State::basis_state(3, 1)]);
        assert!(matches!(result, Err(Error::DimMismatch { .. })));
    }

    #[test]
    fn spectral_norm_diag() {
        let a = Observable::from_real_rows(&[&[2.0, 0.0], &[0.0, -3.0]]).unwrap();
        assert_abs_diff_eq!(a.spectral_norm(), 3.0, epsilon = 1e-12);
    }
}
