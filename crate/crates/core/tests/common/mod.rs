#![allow(dead_code)]

use gaussclone::gaussian::GaussianState;
use nalgebra::{Matrix2, Rotation2, Vector2};
use proptest::prelude::*;
use rand::Rng;

/// Rotated squeezed thermal covariance: `(2n+1)/2 · R diag(e^{2r}, e^{-2r}) Rᵀ`.
pub fn rotated_cov(n_th: f64, r: f64, phi: f64) -> Matrix2<f64> {
    let rot = Rotation2::new(phi).into_inner();
    let e = (2.0 * r).exp();
    rot * Matrix2::new(e, 0.0, 0.0, 1.0 / e) * rot.transpose() * (n_th + 0.5)
}

pub fn state(mean: Vector2<f64>, cov: Matrix2<f64>) -> GaussianState {
    GaussianState::from_moments(
        mean.as_slice(),
        nalgebra::DMatrix::from_column_slice(2, 2, cov.as_slice()),
    )
    .expect("generated state is physical")
}

pub fn cov_strategy() -> impl Strategy<Value = Matrix2<f64>> {
    (0.0..2.0f64, -1.0..1.0f64, 0.0..std::f64::consts::PI)
        .prop_map(|(n, r, p)| rotated_cov(n, r, p))
}

pub fn state_strategy() -> impl Strategy<Value = GaussianState> {
    (cov_strategy(), -3.0..3.0f64, -3.0..3.0f64).prop_map(|(c, x, y)| state(Vector2::new(x, y), c))
}

pub fn random_cov<R: Rng>(rng: &mut R) -> Matrix2<f64> {
    rotated_cov(
        rng.random_range(0.0..2.0),
        rng.random_range(-1.0..1.0),
        rng.random_range(0.0..std::f64::consts::PI),
    )
}

pub fn random_state<R: Rng>(rng: &mut R) -> GaussianState {
    let mean = Vector2::new(rng.random_range(-3.0..3.0), rng.random_range(-3.0..3.0));
    state(mean, random_cov(rng))
}

pub fn max_abs(m: impl IntoIterator<Item = f64>) -> f64 {
    m.into_iter().fold(0.0, |a, v| a.max(v.abs()))
}

pub fn states_close(a: &GaussianState, b: &GaussianState) -> f64 {
    let dm = max_abs(a.mean().iter().zip(b.mean().iter()).map(|(x, y)| x - y));
    let dc = max_abs(a.cov().iter().zip(b.cov().iter()).map(|(x, y)| x - y));
    dm.max(dc)
}
