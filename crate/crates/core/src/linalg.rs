//! Small shared linear-algebra helpers on top of nalgebra.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;

/// Tolerance for identities that pass through an eigensolver.
#[cfg(test)]
pub(crate) const EIG_TOL: f64 = 1e-10;

/// Tolerance for exact algebraic identities.
pub(crate) const ALG_TOL: f64 = 1e-12;

/// Largest absolute entry of a complex matrix.
pub(crate) fn max_abs(m: &DMatrix<Complex64>) -> f64 {
    m.iter().map(|z| z.norm()).fold(0.0, f64::max)
}

pub(crate) fn is_hermitian(m: &DMatrix<Complex64>, tol: f64) -> bool {
    m.is_square() && max_abs(&(m - m.adjoint())) < tol
}

/// Eigendecomposition of a hermitian matrix.
///
/// Eigenvalues are returned in descending order. Each eigenvector is scaled
/// so that its first component of magnitude > 1e-8 is real and positive,
/// which makes decompositions reproducible across runs and platforms.
pub(crate) fn hermitian_eigen(m: &DMatrix<Complex64>) -> (Vec<f64>, Vec<DVector<Complex64>>) {
    debug_assert!(is_hermitian(m, 1e-9));
    let eig = m.clone().symmetric_eigen();
    let mut pairs: Vec<(f64, DVector<Complex64>)> = eig
        .eigenvalues
        .iter()
        .enumerate()
        .map(|(i, &val)| (val, eig.eigenvectors.column(i).into_owned()))
        .collect();
    pairs.sort_by(|a, b| b.0.total_cmp(&a.0));
    let (vals, vecs) = pairs
        .into_iter()
        .map(|(val, vec)| (val, fix_phase(vec)))
        .unzip();
    (vals, vecs)
}

/// Rotate the global phase so the first non-negligible component is real
/// and positive.
pub(crate) fn fix_phase(mut v: DVector<Complex64>) -> DVector<Complex64> {
    if let Some(lead) = v.iter().find(|z| z.norm() > 1e-8).copied() {
        let phase = lead / Complex64::new(lead.norm(), 0.0);
        v /= phase;
    }
    v
}

/// Kronecker product with the left factor as the slow index:
/// `(a ⊗ b)[i·nb + j] = a[i]·b[j]`.
pub(crate) fn kron_vec(a: &DVector<Complex64>, b: &DVector<Complex64>) -> DVector<Complex64> {
    let (na, nb) = (a.len(), b.len());
    DVector::from_fn(na * nb, |idx, _| a[idx / nb] * b[idx % nb])
}

pub(crate) fn kron_mat(a: &DMatrix<Complex64>, b: &DMatrix<Complex64>) -> DMatrix<Complex64> {
    a.kronecker(b)
}

/// Least-squares straight-line fit `y ≈ slope·x + intercept`; returns
/// `(slope, intercept, max_abs_residual)`.
pub(crate) fn linear_fit(x: &[f64], y: &[f64]) -> (f64, f64, f64) {
    assert_eq!(x.len(), y.len());
    let n = x.len() as f64;
    let sx: f64 = x.iter().sum();
    let sy: f64 = y.iter().sum();
    let sxx: f64 = x.iter().map(|v| v * v).sum();
    let sxy: f64 = x.iter().zip(y).map(|(a, b)| a * b).sum();
    let denom = n * sxx - sx * sx;
    let slope = (n * sxy - sx * sy) / denom;
    let intercept = (sy - slope * sx) / n;
    let resid = x
        .iter()
        .zip(y)
        .map(|(a, b)| (b - slope * a - intercept).abs())
        .fold(0.0, f64::max);
    (slope, intercept, resid)
}
