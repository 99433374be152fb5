//! Small dense linear-algebra helpers shared by the phase-space code.

use nalgebra::{DMatrix, Matrix2, Vector2};

use crate::error::{Error, Result};

/// Smallest |det| accepted by the closed-form 2x2 inverse.
pub const DET_GUARD: f64 = 1e-300;

/// Standard symplectic form for `n_modes` modes in (x1, y1, x2, y2, ...) ordering.
pub fn symplectic_form(n_modes: usize) -> DMatrix<f64> {
    let mut omega = DMatrix::zeros(2 * n_modes, 2 * n_modes);
    for k in 0..n_modes {
        omega[(2 * k, 2 * k + 1)] = 1.0;
        omega[(2 * k + 1, 2 * k)] = -1.0;
    }
    omega
}

pub fn inverse_2x2(m: &Matrix2<f64>, context: &'static str) -> Result<Matrix2<f64>> {
    let det = m.determinant();
    if !det.is_finite() || det.abs() <= DET_GUARD {
        return Err(Error::SingularMatrix { context, det });
    }
    Ok(Matrix2::new(m[(1, 1)], -m[(0, 1)], -m[(1, 0)], m[(0, 0)]) / det)
}

/// Pivoted-elimination inverse for blocks larger than 2x2.
pub fn inverse(m: &DMatrix<f64>, context: &'static str) -> Result<DMatrix<f64>> {
    if m.nrows() == 2 && m.ncols() == 2 {
        let small = Matrix2::new(m[(0, 0)], m[(0, 1)], m[(1, 0)], m[(1, 1)]);
        let inv = inverse_2x2(&small, context)?;
        return Ok(DMatrix::from_fn(2, 2, |i, j| inv[(i, j)]));
    }
    let lu = m.clone().full_piv_lu();
    let det = lu.determinant();
    lu.try_inverse()
        .filter(|_| det.abs() > DET_GUARD)
        .ok_or(Error::SingularMatrix { context, det })
}

pub fn max_abs_diff(a: &DMatrix<f64>, b: &DMatrix<f64>) -> f64 {
    (a - b).amax()
}

pub fn is_symmetric(m: &DMatrix<f64>, tol: f64) -> bool {
    m.is_square() && max_abs_diff(m, &m.transpose()) <= tol
}

/// Symplectic eigenvalues of a positive-definite covariance matrix, sorted
/// ascending, one per mode.
///
/// Computed as the singular values of `sqrt(cov) * Omega * sqrt(cov)`, which is
/// real antisymmetric with spectrum `±i nu_k`.
pub fn symplectic_eigenvalues(cov: &DMatrix<f64>) -> Result<Vec<f64>> {
    let dim = cov.nrows();
    if dim % 2 != 0 || !cov.is_square() {
        return Err(Error::Shape(format!(
            "covariance must be square with even dimension, got {}x{}",
            cov.nrows(),
            cov.ncols()
        )));
    }
    let n_modes = dim / 2;
    if n_modes == 1 {
        let det = cov.determinant();
        if !(det > 0.0) || cov[(0, 0)] <= 0.0 {
            return Err(Error::Unphysical(format!(
                "covariance is not positive definite (det {det:e})"
            )));
        }
        return Ok(vec![det.sqrt()]);
    }
    let sym = (cov + cov.transpose()) * 0.5;
    let eig = sym.symmetric_eigen();
    if eig.eigenvalues.iter().any(|&l| !(l > 0.0)) {
        return Err(Error::Unphysical(
            "covariance is not positive definite".into(),
        ));
    }
    let sqrt_diag = DMatrix::from_diagonal(&eig.eigenvalues.map(f64::sqrt));
    let root = &eig.eigenvectors * sqrt_diag * eig.eigenvectors.transpose();
    let k = &root * symplectic_form(n_modes) * &root;
    let gram = k.transpose() * &k;
    let mut nu2: Vec<f64> = gram.symmetric_eigen().eigenvalues.iter().copied().collect();
    nu2.sort_by(f64::total_cmp);
    // Each symplectic eigenvalue appears twice in the spectrum of K^T K.
    Ok(nu2
        .chunks(2)
        .map(|pair| (0.5 * (pair[0] + pair[1])).max(0.0).sqrt())
        .collect())
}

pub fn block2(m: &DMatrix<f64>, row: usize, col: usize) -> Matrix2<f64> {
    Matrix2::new(
        m[(row, col)],
        m[(row, col + 1)],
        m[(row + 1, col)],
        m[(row + 1, col + 1)],
    )
}

pub fn vec2(v: &nalgebra::DVector<f64>, at: usize) -> Vector2<f64> {
    Vector2::new(v[at], v[at + 1])
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn form_is_antisymmetric_and_squares_to_minus_identity() {
        let omega = symplectic_form(3);
        assert_eq!(omega.transpose(), -&omega);
        assert_eq!(&omega * &omega, -DMatrix::<f64>::identity(6, 6));
    }

    #[test]
    fn thermal_product_has_thermal_eigenvalues() {
        let cov = DMatrix::from_diagonal(&nalgebra::DVector::from_vec(vec![1.5, 1.5, 0.5, 0.5]));
        let nu = symplectic_eigenvalues(&cov).unwrap();
        assert!((nu[0] - 0.5).abs() < 1e-12);
        assert!((nu[1] - 1.5).abs() < 1e-12);
    }

    #[test]
    fn singular_2x2_is_rejected() {
        let m = Matrix2::new(1.0, 2.0, 2.0, 4.0);
        assert!(matches!(
            inverse_2x2(&m, "test"),
            Err(Error::SingularMatrix { .. })
        ));
    }

    #[test]
    fn indefinite_matrix_is_unphysical() {
        let cov = DMatrix::from_diagonal(&nalgebra::DVector::from_vec(vec![1.0, -1.0, 1.0, 1.0]));
        assert!(symplectic_eigenvalues(&cov).is_err());
    }
}
