use std::f64::consts::{PI, SQRT_2};

use nalgebra::{DMatrix, DVector, Matrix2, Vector2};
use num_complex::Complex64;
use rand::Rng;
use rand_distr::StandardNormal;

use super::state::{CovMatrix, GaussianState, PHYSICAL_TOL};
use crate::error::{check_range, Error, Result};
use crate::linalg::{inverse_2x2, vec2};

/// Gaussian POVM on one mode with noise covariance `sigma_M`.
///
/// An outcome `z` corresponds to the phase-space point
/// `X_M = sqrt(2) (Re z, Im z)`.
#[derive(Clone, Debug, PartialEq)]
pub struct GaussianMeasurement {
    cov: Matrix2<f64>,
}

impl GaussianMeasurement {
    pub fn new(cov: Matrix2<f64>) -> Result<Self> {
        let checked = CovMatrix::from_2x2(cov).map_err(|e| match e {
            Error::Unphysical(msg) => Error::Unphysical(format!("measurement noise: {msg}")),
            other => other,
        })?;
        let nu = checked.min_symplectic_eigenvalue()?;
        debug_assert!(nu >= 0.5 - PHYSICAL_TOL);
        Ok(Self { cov })
    }

    /// Double-homodyne (heterodyne) detection with quantum efficiency `eta`:
    /// `sigma_M = (2 - eta) / (2 eta) I`.
    pub fn heterodyne(eta: f64) -> Result<Self> {
        check_range("eta", eta, f64::MIN_POSITIVE, 1.0, "(0, 1]")?;
        Ok(Self {
            cov: Matrix2::identity() * ((2.0 - eta) / (2.0 * eta)),
        })
    }

    pub fn cov(&self) -> &Matrix2<f64> {
        &self.cov
    }

    pub fn outcome_point(z: Complex64) -> Vector2<f64> {
        SQRT_2 * Vector2::new(z.re, z.im)
    }
}

/// Moments entering the outcome distribution of `mode`: its mean and
/// `Sigma = B + sigma_M`.
fn outcome_moments(
    state: &GaussianState,
    mode: usize,
    meas: &GaussianMeasurement,
) -> Result<(Vector2<f64>, Matrix2<f64>)> {
    state.check_mode(mode)?;
    Ok((state.mode_mean(mode), state.mode_cov(mode) + meas.cov))
}

fn gaussian_density(diff: &Vector2<f64>, sigma: &Matrix2<f64>) -> Result<f64> {
    let inv = inverse_2x2(sigma, "outcome covariance")?;
    let det = sigma.determinant();
    if det <= 0.0 {
        return Err(Error::SingularMatrix {
            context: "outcome covariance",
            det,
        });
    }
    let q = diff.dot(&(inv * diff));
    Ok((-0.5 * q).exp() / (PI * det.sqrt()))
}

/// Probability density (with respect to d^2 z) of outcome `z` when measuring
/// `mode` of `state`.
pub fn outcome_density(
    state: &GaussianState,
    mode: usize,
    meas: &GaussianMeasurement,
    z: Complex64,
) -> Result<f64> {
    let (mean, sigma) = outcome_moments(state, mode, meas)?;
    gaussian_density(&(GaussianMeasurement::outcome_point(z) - mean), &sigma)
}

/// Conditional state of the remaining modes after observing `z` on `mode`,
/// together with the outcome density.
///
/// The remaining modes keep their relative order.
pub fn measure_mode(
    state: &GaussianState,
    mode: usize,
    meas: &GaussianMeasurement,
    z: Complex64,
) -> Result<(GaussianState, f64)> {
    state.check_mode(mode)?;
    let n = state.n_modes();
    if n < 2 {
        return Err(Error::Dimension {
            expected: 2,
            found: n,
        });
    }
    let (mean_m, sigma) = outcome_moments(state, mode, meas)?;
    let sigma_inv = inverse_2x2(&sigma, "outcome covariance")?;
    let diff = GaussianMeasurement::outcome_point(z) - mean_m;
    let density = gaussian_density(&diff, &sigma)?;

    let kept: Vec<usize> = (0..2 * n).filter(|&i| i / 2 != mode).collect();
    let k = kept.len();
    let cov = state.cov();
    let a = DMatrix::from_fn(k, k, |i, j| cov[(kept[i], kept[j])]);
    let c = DMatrix::from_fn(k, 2, |i, j| cov[(kept[i], 2 * mode + j)]);
    let sigma_inv = DMatrix::from_fn(2, 2, |i, j| sigma_inv[(i, j)]);
    let gain = &c * sigma_inv;

    let cond_cov = &a - &gain * c.transpose();
    let cond_cov = (&cond_cov + cond_cov.transpose()) * 0.5;
    let x1 = DVector::from_fn(k, |i, _| state.mean()[kept[i]]);
    let cond_mean = x1 + gain * DVector::from_column_slice(diff.as_slice());
    Ok((GaussianState::trusted(cond_mean, cond_cov), density))
}

/// Draws an outcome `z` from the distribution of [`outcome_density`].
pub fn sample_outcome<R: Rng + ?Sized>(
    state: &GaussianState,
    mode: usize,
    meas: &GaussianMeasurement,
    rng: &mut R,
) -> Result<Complex64> {
    let (mean, sigma) = outcome_moments(state, mode, meas)?;
    let chol = nalgebra::Cholesky::new(sigma).ok_or(Error::SingularMatrix {
        context: "outcome covariance",
        det: sigma.determinant(),
    })?;
    let w = Vector2::new(
        rng.sample::<f64, _>(StandardNormal),
        rng.sample::<f64, _>(StandardNormal),
    );
    let x = mean + chol.l() * w;
    Ok(Complex64::new(x[0], x[1]) / SQRT_2)
}

/// Mode-0 state obtained by measuring mode 1 of a two-mode state, displacing
/// mode 0 by `gain * z`, and averaging over all outcomes:
/// `cov = A + g^2 Sigma + g (C + C^T)`, `mean = X1 + g X2`.
pub fn average_feedforward(
    state: &GaussianState,
    meas: &GaussianMeasurement,
    gain: f64,
) -> Result<GaussianState> {
    if state.n_modes() != 2 {
        return Err(Error::Dimension {
            expected: 2,
            found: state.n_modes(),
        });
    }
    let a = state.mode_cov(0);
    let sigma = state.mode_cov(1) + meas.cov;
    let c = crate::linalg::block2(state.cov(), 0, 2);
    let cov = a + sigma * (gain * gain) + (c + c.transpose()) * gain;
    let mean = vec2(state.mean(), 0) + vec2(state.mean(), 2) * gain;
    Ok(GaussianState::single_mode(
        mean,
        (cov + cov.transpose()) * 0.5,
    ))
}
