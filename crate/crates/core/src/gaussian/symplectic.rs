use nalgebra::DMatrix;

use crate::error::{check_range, Error, Result};
use crate::linalg::{max_abs_diff, symplectic_form};

/// Tolerance on `||S^T Omega S - Omega||_inf`.
pub const SYMPLECTIC_TOL: f64 = 1e-10;

/// A linear phase-space map acting on moments as `X -> S^T X`,
/// `cov -> S^T cov S`.
#[derive(Clone, Debug, PartialEq)]
pub struct SymplecticOp {
    matrix: DMatrix<f64>,
}

impl SymplecticOp {
    pub fn new(matrix: DMatrix<f64>) -> Result<Self> {
        if !matrix.is_square() || matrix.nrows() % 2 != 0 {
            return Err(Error::Shape(format!(
                "symplectic matrix must be square with even dimension, got {}x{}",
                matrix.nrows(),
                matrix.ncols()
            )));
        }
        let op = Self { matrix };
        let defect = op.symplectic_defect();
        if !(defect <= SYMPLECTIC_TOL) {
            return Err(Error::Shape(format!(
                "matrix is not symplectic (defect {defect:e})"
            )));
        }
        Ok(op)
    }

    pub fn identity(n_modes: usize) -> Self {
        Self {
            matrix: DMatrix::identity(2 * n_modes, 2 * n_modes),
        }
    }

    /// `X -> -X` on every mode (a pi phase shift).
    pub fn phase_flip(n_modes: usize) -> Self {
        Self {
            matrix: -DMatrix::identity(2 * n_modes, 2 * n_modes),
        }
    }

    pub fn matrix(&self) -> &DMatrix<f64> {
        &self.matrix
    }

    pub fn n_modes(&self) -> usize {
        self.matrix.nrows() / 2
    }

    /// `max |S^T Omega S - Omega|`.
    pub fn symplectic_defect(&self) -> f64 {
        let omega = symplectic_form(self.n_modes());
        max_abs_diff(&(self.matrix.transpose() * &omega * &self.matrix), &omega)
    }
}

/// Beam splitter of transmissivity `tau` between `modes.0` and `modes.1` of an
/// `n_modes`-mode system:
///
/// ```text
/// (  sqrt(tau) I     sqrt(1-tau) I )
/// ( -sqrt(1-tau) I   sqrt(tau) I   )
/// ```
///
/// on the selected pair, identity elsewhere.
pub fn bs_symplectic(tau: f64, n_modes: usize, modes: (usize, usize)) -> Result<SymplecticOp> {
    check_range("tau", tau, 0.0, 1.0, "[0, 1]")?;
    let (a, b) = modes;
    for m in [a, b] {
        if m >= n_modes {
            return Err(Error::Index { index: m, n_modes });
        }
    }
    if a == b {
        return Err(Error::Shape(format!(
            "beam splitter needs two distinct modes, got {a} twice"
        )));
    }
    let t = tau.sqrt();
    let r = (1.0 - tau).sqrt();
    let mut s = DMatrix::identity(2 * n_modes, 2 * n_modes);
    for q in 0..2 {
        let (ia, ib) = (2 * a + q, 2 * b + q);
        s[(ia, ia)] = t;
        s[(ia, ib)] = r;
        s[(ib, ia)] = -r;
        s[(ib, ib)] = t;
    }
    Ok(SymplecticOp { matrix: s })
}
