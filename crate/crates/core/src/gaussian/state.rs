use std::ops::Deref;

use nalgebra::{DMatrix, DVector, Matrix2, Vector2};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::symplectic::SymplecticOp;
use crate::error::{check_range, Error, Result};
use crate::linalg::{self, block2, vec2};

/// Tolerance for symmetry and for the uncertainty floor of covariance matrices.
pub const PHYSICAL_TOL: f64 = 1e-10;

/// Largest squeezing parameter accepted by the state builders.
pub const MAX_SQUEEZING: f64 = 10.0;

/// Mean quadrature vector `(x1, y1, x2, y2, ...)`.
#[derive(Clone, Debug, PartialEq)]
pub struct QuadVector(DVector<f64>);

impl QuadVector {
    pub fn new(entries: DVector<f64>) -> Result<Self> {
        if entries.len() % 2 != 0 || entries.is_empty() {
            return Err(Error::Shape(format!(
                "quadrature vector needs a positive even length, got {}",
                entries.len()
            )));
        }
        if entries.iter().any(|v| !v.is_finite()) {
            return Err(Error::Shape(
                "quadrature vector has non-finite entries".into(),
            ));
        }
        Ok(Self(entries))
    }

    pub fn from_slice(entries: &[f64]) -> Result<Self> {
        Self::new(DVector::from_column_slice(entries))
    }

    pub fn into_inner(self) -> DVector<f64> {
        self.0
    }
}

impl Deref for QuadVector {
    type Target = DVector<f64>;
    fn deref(&self) -> &DVector<f64> {
        &self.0
    }
}

/// Covariance matrix of a (physical) Gaussian state.
///
/// Construction checks symmetry and the uncertainty relation: every
/// symplectic eigenvalue must be at least 1/2.
#[derive(Clone, Debug, PartialEq)]
pub struct CovMatrix(DMatrix<f64>);

impl CovMatrix {
    pub fn new(entries: DMatrix<f64>) -> Result<Self> {
        if !entries.is_square() || entries.nrows() % 2 != 0 || entries.nrows() == 0 {
            return Err(Error::Shape(format!(
                "covariance must be square with positive even dimension, got {}x{}",
                entries.nrows(),
                entries.ncols()
            )));
        }
        if entries.iter().any(|v| !v.is_finite()) {
            return Err(Error::Shape("covariance has non-finite entries".into()));
        }
        if !linalg::is_symmetric(&entries, PHYSICAL_TOL) {
            return Err(Error::Unphysical("covariance is not symmetric".into()));
        }
        let cov = Self(entries);
        let nu_min = cov.min_symplectic_eigenvalue()?;
        if nu_min < 0.5 - PHYSICAL_TOL {
            return Err(Error::Unphysical(format!(
                "symplectic eigenvalue {nu_min} below the vacuum floor 1/2"
            )));
        }
        Ok(cov)
    }

    pub fn from_2x2(m: Matrix2<f64>) -> Result<Self> {
        Self::new(DMatrix::from_fn(2, 2, |i, j| m[(i, j)]))
    }

    /// Wraps a matrix produced by a physicality-preserving operation.
    pub(crate) fn trusted(entries: DMatrix<f64>) -> Self {
        Self(entries)
    }

    pub fn n_modes(&self) -> usize {
        self.0.nrows() / 2
    }

    pub fn symplectic_eigenvalues(&self) -> Result<Vec<f64>> {
        linalg::symplectic_eigenvalues(&self.0)
    }

    pub fn min_symplectic_eigenvalue(&self) -> Result<f64> {
        Ok(self
            .symplectic_eigenvalues()?
            .into_iter()
            .fold(f64::INFINITY, f64::min))
    }

    pub fn is_physical(&self) -> bool {
        linalg::is_symmetric(&self.0, PHYSICAL_TOL)
            && self
                .min_symplectic_eigenvalue()
                .is_ok_and(|nu| nu >= 0.5 - PHYSICAL_TOL)
    }

    /// The 2x2 block of mode `k`. Panics if out of range.
    pub fn mode_block(&self, k: usize) -> Matrix2<f64> {
        block2(&self.0, 2 * k, 2 * k)
    }

    pub fn into_inner(self) -> DMatrix<f64> {
        self.0
    }
}

impl Deref for CovMatrix {
    type Target = DMatrix<f64>;
    fn deref(&self) -> &DMatrix<f64> {
        &self.0
    }
}

/// A multimode Gaussian state in the moment representation, with hbar = 1
/// and vacuum quadrature variance 1/2.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "StateRepr", into = "StateRepr")]
pub struct GaussianState {
    mean: QuadVector,
    cov: CovMatrix,
}

impl GaussianState {
    pub fn new(mean: QuadVector, cov: CovMatrix) -> Result<Self> {
        if mean.len() != cov.nrows() {
            return Err(Error::Dimension {
                expected: cov.nrows(),
                found: mean.len(),
            });
        }
        Ok(Self { mean, cov })
    }

    pub fn from_moments(mean: &[f64], cov: DMatrix<f64>) -> Result<Self> {
        Self::new(QuadVector::from_slice(mean)?, CovMatrix::new(cov)?)
    }

    pub(crate) fn trusted(mean: DVector<f64>, cov: DMatrix<f64>) -> Self {
        debug_assert_eq!(mean.len(), cov.nrows());
        Self {
            mean: QuadVector(mean),
            cov: CovMatrix::trusted(cov),
        }
    }

    pub(crate) fn single_mode(mean: Vector2<f64>, cov: Matrix2<f64>) -> Self {
        Self::trusted(
            DVector::from_column_slice(mean.as_slice()),
            DMatrix::from_fn(2, 2, |i, j| cov[(i, j)]),
        )
    }

    pub fn vacuum() -> Self {
        Self::single_mode(Vector2::zeros(), Matrix2::identity() * 0.5)
    }

    /// Coherent state |alpha>: mean sqrt(2) (Re alpha, Im alpha), covariance I/2.
    pub fn coherent(alpha: Complex64) -> Self {
        Self::single_mode(
            std::f64::consts::SQRT_2 * Vector2::new(alpha.re, alpha.im),
            Matrix2::identity() * 0.5,
        )
    }

    /// D(alpha) S(r)|0> with real squeezing `r`; positive `r` stretches x.
    pub fn squeezed_coherent(alpha: Complex64, r: f64) -> Result<Self> {
        check_range("r", r, -MAX_SQUEEZING, MAX_SQUEEZING, "[-10, 10]")?;
        let e2r = (2.0 * r).exp();
        Ok(Self::single_mode(
            std::f64::consts::SQRT_2 * Vector2::new(alpha.re, alpha.im),
            Matrix2::new(0.5 * e2r, 0.0, 0.0, 0.5 / e2r),
        ))
    }

    /// Zero-mean squeezed thermal state with `n_th` mean thermal photons and
    /// squeezing `s`.
    pub fn squeezed_thermal(n_th: f64, s: f64) -> Result<Self> {
        check_range("n_th", n_th, 0.0, f64::MAX, "[0, inf)")?;
        check_range("s", s, -MAX_SQUEEZING, MAX_SQUEEZING, "[-10, 10]")?;
        let scale = (2.0 * n_th + 1.0) / 2.0;
        let e2s = (2.0 * s).exp();
        Ok(Self::single_mode(
            Vector2::zeros(),
            Matrix2::new(scale * e2s, 0.0, 0.0, scale / e2s),
        ))
    }

    pub fn n_modes(&self) -> usize {
        self.mean.len() / 2
    }

    pub fn mean(&self) -> &QuadVector {
        &self.mean
    }

    pub fn cov(&self) -> &CovMatrix {
        &self.cov
    }

    pub fn mode_mean(&self, k: usize) -> Vector2<f64> {
        vec2(&self.mean, 2 * k)
    }

    pub fn mode_cov(&self, k: usize) -> Matrix2<f64> {
        self.cov.mode_block(k)
    }

    pub fn check_mode(&self, mode: usize) -> Result<()> {
        if mode < self.n_modes() {
            Ok(())
        } else {
            Err(Error::Index {
                index: mode,
                n_modes: self.n_modes(),
            })
        }
    }

    pub fn is_physical(&self) -> bool {
        self.cov.is_physical()
    }

    /// `self ⊗ other`: concatenated means, block-diagonal covariance.
    pub fn tensor(&self, other: &GaussianState) -> GaussianState {
        let (na, nb) = (self.mean.len(), other.mean.len());
        let mut mean = DVector::zeros(na + nb);
        mean.rows_mut(0, na).copy_from(&*self.mean);
        mean.rows_mut(na, nb).copy_from(&*other.mean);
        let mut cov = DMatrix::zeros(na + nb, na + nb);
        cov.view_mut((0, 0), (na, na)).copy_from(&*self.cov);
        cov.view_mut((na, na), (nb, nb)).copy_from(&*other.cov);
        Self::trusted(mean, cov)
    }

    /// Applies `cov -> S^T cov S`, `mean -> S^T mean`.
    pub fn apply_symplectic(&self, op: &SymplecticOp) -> Result<GaussianState> {
        let s = op.matrix();
        if s.nrows() != self.mean.len() {
            return Err(Error::Dimension {
                expected: self.mean.len(),
                found: s.nrows(),
            });
        }
        let st = s.transpose();
        let cov = &st * &*self.cov * s;
        let cov = (&cov + cov.transpose()) * 0.5;
        Ok(Self::trusted(&st * &*self.mean, cov))
    }

    /// Displaces `mode` by `gain * z`, i.e. shifts its mean by
    /// `sqrt(2) gain (Re z, Im z)`.
    pub fn displace(&self, mode: usize, z: Complex64, gain: f64) -> Result<GaussianState> {
        self.check_mode(mode)?;
        let mut mean = self.mean.0.clone();
        mean[2 * mode] += std::f64::consts::SQRT_2 * gain * z.re;
        mean[2 * mode + 1] += std::f64::consts::SQRT_2 * gain * z.im;
        Ok(Self::trusted(mean, self.cov.0.clone()))
    }

    /// Marginal on the modes listed in `keep`, in the given order.
    pub fn partial_trace(&self, keep: &[usize]) -> Result<GaussianState> {
        if keep.is_empty() {
            return Err(Error::Shape(
                "partial trace must keep at least one mode".into(),
            ));
        }
        for &k in keep {
            self.check_mode(k)?;
        }
        for (i, k) in keep.iter().enumerate() {
            if keep[..i].contains(k) {
                return Err(Error::Shape(format!("mode {k} listed twice")));
            }
        }
        let idx: Vec<usize> = keep.iter().flat_map(|&k| [2 * k, 2 * k + 1]).collect();
        let mean = DVector::from_fn(idx.len(), |i, _| self.mean[idx[i]]);
        let cov = DMatrix::from_fn(idx.len(), idx.len(), |i, j| self.cov[(idx[i], idx[j])]);
        Ok(Self::trusted(mean, cov))
    }

    /// Negates the mean vector (the phase-space map X -> -X).
    pub fn phase_flipped(&self) -> GaussianState {
        Self::trusted(-&*self.mean, self.cov.0.clone())
    }
}

#[derive(Serialize, Deserialize)]
struct StateRepr {
    n_modes: usize,
    mean: Vec<f64>,
    cov: Vec<Vec<f64>>,
}

impl From<GaussianState> for StateRepr {
    fn from(state: GaussianState) -> Self {
        let dim = state.mean.len();
        StateRepr {
            n_modes: state.n_modes(),
            mean: state.mean.iter().copied().collect(),
            cov: (0..dim)
                .map(|i| (0..dim).map(|j| state.cov[(i, j)]).collect())
                .collect(),
        }
    }
}

impl TryFrom<StateRepr> for GaussianState {
    type Error = Error;

    fn try_from(repr: StateRepr) -> Result<Self> {
        let dim = 2 * repr.n_modes;
        if repr.mean.len() != dim {
            return Err(Error::Dimension {
                expected: dim,
                found: repr.mean.len(),
            });
        }
        if repr.cov.len() != dim || repr.cov.iter().any(|row| row.len() != dim) {
            return Err(Error::Shape(format!("cov must be {dim}x{dim}")));
        }
        let cov = DMatrix::from_fn(dim, dim, |i, j| repr.cov[i][j]);
        GaussianState::from_moments(&repr.mean, cov)
    }
}
