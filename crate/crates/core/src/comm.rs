//! Binary communication through the selective cloner.
//!
//! Both inputs are the coherent state |α⟩ (α real). The sender encodes a bit by
//! choosing g = +1 or g = −1; each receiver gets one single-shot clone and
//! decides with a noisy homodyne measurement of x: `x ≥ x̄ ⇒ +1`. Bits are
//! equiprobable.

use std::f64::consts::SQRT_2;

use libm::erfc;
use num_complex::Complex64;
use rayon::prelude::*;
use serde::Serialize;

use crate::cloner::{ClonerConfig, SingleShotCloner};
use crate::error::{check_range, Error, Result};
use crate::gaussian::{sample_outcome, GaussianState};
use crate::quadrature::HermiteRule;
use crate::sampling::{derive_seed, stream, DEFAULT_SEED};

/// Smallest Gauss–Hermite order (per axis) accepted for the outcome average.
pub const MIN_QUAD_ORDER: usize = 40;

/// Smallest Monte Carlo sample count accepted.
pub const MIN_MC_SAMPLES: usize = 1000;

/// Largest estimated quadrature error tolerated before reporting a budget failure.
pub const QUAD_ERROR_LIMIT: f64 = 1e-6;

/// Antithetic pairs per Monte Carlo chunk; each chunk owns one random stream.
const MC_CHUNK_PAIRS: usize = 1 << 14;

fn normal_cdf(x: f64) -> f64 {
    0.5 * erfc(-x / SQRT_2)
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct HomodyneDetector {
    epsilon: f64,
    threshold: f64,
}

impl HomodyneDetector {
    pub fn new(epsilon: f64, threshold: f64) -> Result<Self> {
        check_range("epsilon", epsilon, f64::MIN_POSITIVE, 1.0, "(0, 1]")?;
        check_range("threshold", threshold, f64::MIN, f64::MAX, "finite")?;
        Ok(Self { epsilon, threshold })
    }

    pub fn epsilon(&self) -> f64 {
        self.epsilon
    }

    pub fn threshold(&self) -> f64 {
        self.threshold
    }

    /// Added Gaussian noise `(1 − ε)/(4ε)`.
    pub fn noise_variance(&self) -> f64 {
        (1.0 - self.epsilon) / (4.0 * self.epsilon)
    }
}

/// Mean and variance of the x-quadrature record of an inefficient homodyne
/// detector.
pub fn homodyne_x_marginal(state: &GaussianState, epsilon: f64) -> Result<(f64, f64)> {
    if state.n_modes() != 1 {
        return Err(Error::Dimension {
            expected: 1,
            found: state.n_modes(),
        });
    }
    let det = HomodyneDetector::new(epsilon, 0.0)?;
    Ok((state.mean()[0], state.cov()[(0, 0)] + det.noise_variance()))
}

/// Equal-prior error probability of telling `clone_plus` (bit +1) from
/// `clone_minus` (bit −1) with the threshold rule.
pub fn error_prob_given_z(
    clone_plus: &GaussianState,
    clone_minus: &GaussianState,
    det: &HomodyneDetector,
) -> Result<f64> {
    let (mu_p, var_p) = homodyne_x_marginal(clone_plus, det.epsilon)?;
    let (mu_m, var_m) = homodyne_x_marginal(clone_minus, det.epsilon)?;
    let miss_plus = normal_cdf((det.threshold - mu_p) / var_p.sqrt());
    let miss_minus = 1.0 - normal_cdf((det.threshold - mu_m) / var_m.sqrt());
    Ok(0.5 * (miss_plus + miss_minus))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Method {
    Quadrature,
    MonteCarlo,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct CommEstimate {
    pub value: f64,
    /// Quadrature error estimate, or Monte Carlo standard error.
    pub abs_error: f64,
    pub method: Method,
    pub n_evals: usize,
}

/// The symmetric protocol for one amplitude and detector setting.
#[derive(Clone, Debug)]
pub struct Protocol {
    plus: SingleShotCloner,
    minus: SingleShotCloner,
    detector: HomodyneDetector,
}

impl Protocol {
    pub fn new(alpha: f64, eta: f64, detector: HomodyneDetector) -> Result<Self> {
        check_range("alpha", alpha, 0.0, f64::MAX, "[0, inf)")?;
        let rho = GaussianState::coherent(Complex64::new(alpha, 0.0));
        Ok(Self {
            plus: SingleShotCloner::new(&rho, &rho, &ClonerConfig::symmetric(1.0, eta)?)?,
            minus: SingleShotCloner::new(&rho, &rho, &ClonerConfig::symmetric(-1.0, eta)?)?,
            detector,
        })
    }

    /// `H_e(z)` for one measurement outcome.
    pub fn error_at(&self, z: Complex64) -> Result<f64> {
        let (plus, _) = self.plus.clone_at(z)?;
        let (minus, _) = self.minus.clone_at(z)?;
        error_prob_given_z(&plus.clone1, &minus.clone1, &self.detector)
    }

    fn outcome_moments(&self) -> (nalgebra::Vector2<f64>, nalgebra::Matrix2<f64>) {
        let mixed = self.plus.mixed_state();
        (
            mixed.mode_mean(1),
            mixed.mode_cov(1) + self.plus.config().meas().cov(),
        )
    }

    /// Outcome-averaged error probability.
    pub fn average_error(&self, method: Method, budget: usize, seed: u64) -> Result<CommEstimate> {
        match method {
            Method::Quadrature => self.quadrature(budget),
            Method::MonteCarlo => self.monte_carlo(budget, seed),
        }
    }

    fn quadrature_at(&self, order: usize) -> Result<f64> {
        let (mean, sigma) = self.outcome_moments();
        HermiteRule::new(order)?.expectation_2d(&mean, &sigma, |xm| {
            self.error_at(Complex64::new(xm[0], xm[1]) / SQRT_2)
        })
    }

    fn quadrature(&self, order: usize) -> Result<CommEstimate> {
        if order < MIN_QUAD_ORDER {
            return Err(Error::Budget(format!(
                "quadrature order {order} below the minimum {MIN_QUAD_ORDER}"
            )));
        }
        let value = self.quadrature_at(order)?;
        let coarse_order = order.div_ceil(2);
        let coarse = self.quadrature_at(coarse_order)?;
        let abs_error = (value - coarse).abs().max(f64::EPSILON);
        if abs_error > QUAD_ERROR_LIMIT {
            return Err(Error::Budget(format!(
                "quadrature error estimate {abs_error:e} exceeds {QUAD_ERROR_LIMIT:e}"
            )));
        }
        Ok(CommEstimate {
            value,
            abs_error,
            method: Method::Quadrature,
            n_evals: order * order + coarse_order * coarse_order,
        })
    }

    /// Antithetic Monte Carlo: every outcome drawn is paired with its mirror
    /// image through the mean outcome.
    fn monte_carlo(&self, samples: usize, seed: u64) -> Result<CommEstimate> {
        if samples < MIN_MC_SAMPLES {
            return Err(Error::Budget(format!(
                "{samples} Monte Carlo samples below the minimum {MIN_MC_SAMPLES}"
            )));
        }
        let pairs = samples.div_ceil(2);
        let n_chunks = pairs.div_ceil(MC_CHUNK_PAIRS);
        let mixed = self.plus.mixed_state();
        let meas = self.plus.config().meas();
        let (mean, _) = self.outcome_moments();
        let center = Complex64::new(mean[0], mean[1]) / SQRT_2;

        let chunks: Vec<(f64, f64)> = (0..n_chunks)
            .into_par_iter()
            .map(|k| -> Result<(f64, f64)> {
                let mut rng = stream(seed, k as u64);
                let len = MC_CHUNK_PAIRS.min(pairs - k * MC_CHUNK_PAIRS);
                let (mut sum, mut sum_sq) = (0.0, 0.0);
                for _ in 0..len {
                    let z = sample_outcome(mixed, 1, meas, &mut rng)?;
                    let mirrored = 2.0 * center - z;
                    let v = 0.5 * (self.error_at(z)? + self.error_at(mirrored)?);
                    sum += v;
                    sum_sq += v * v;
                }
                Ok((sum, sum_sq))
            })
            .collect::<Result<_>>()?;

        let (sum, sum_sq) = chunks
            .iter()
            .fold((0.0, 0.0), |(s, q), &(a, b)| (s + a, q + b));
        let n = pairs as f64;
        let value = sum / n;
        let var = ((sum_sq / n - value * value) * n / (n - 1.0)).max(0.0);
        Ok(CommEstimate {
            value,
            abs_error: (var / n).sqrt(),
            method: Method::MonteCarlo,
            n_evals: 2 * pairs,
        })
    }
}

/// Average error probability of the symmetric protocol with threshold 0.
pub fn average_error_probability(
    alpha: f64,
    eta: f64,
    epsilon: f64,
    method: Method,
    budget: usize,
    seed: Option<u64>,
) -> Result<CommEstimate> {
    Protocol::new(alpha, eta, HomodyneDetector::new(epsilon, 0.0)?)?.average_error(
        method,
        budget,
        seed.unwrap_or(DEFAULT_SEED),
    )
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct CurvePoint {
    pub alpha: f64,
    pub h_e: f64,
    pub abs_error: f64,
    pub method: Method,
}

/// [`average_error_probability`] over a strictly increasing amplitude grid.
/// Point `i` uses a seed derived from `(seed, i)`.
pub fn error_curve(
    alphas: &[f64],
    eta: f64,
    epsilon: f64,
    method: Method,
    budget: usize,
    seed: Option<u64>,
) -> Result<Vec<CurvePoint>> {
    if alphas.windows(2).any(|w| !(w[0] < w[1])) {
        return Err(Error::Shape(
            "amplitude grid must be strictly increasing".into(),
        ));
    }
    let master = seed.unwrap_or(DEFAULT_SEED);
    alphas
        .par_iter()
        .enumerate()
        .map(|(i, &alpha)| {
            let est = average_error_probability(
                alpha,
                eta,
                epsilon,
                method,
                budget,
                Some(derive_seed(master, i as u64)),
            )?;
            Ok(CurvePoint {
                alpha,
                h_e: est.value,
                abs_error: est.abs_error,
                method,
            })
        })
        .collect()
}
