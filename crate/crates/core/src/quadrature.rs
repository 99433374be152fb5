//! Tensor-product Gauss–Hermite expectations over bivariate normals.

use std::f64::consts::{PI, SQRT_2};
use std::num::NonZeroUsize;

use gauss_quad::GaussHermite;
use nalgebra::{Matrix2, Vector2};

use crate::error::{Error, Result};

/// Node/weight pairs of a Gauss–Hermite rule for the weight `e^{-x^2}`.
#[derive(Clone, Debug)]
pub struct HermiteRule {
    pairs: Vec<(f64, f64)>,
}

impl HermiteRule {
    pub fn new(order: usize) -> Result<Self> {
        let order = NonZeroUsize::new(order)
            .ok_or_else(|| Error::Budget("quadrature order must be positive".into()))?;
        Ok(Self {
            pairs: GaussHermite::new(order).as_node_weight_pairs().to_vec(),
        })
    }

    pub fn order(&self) -> usize {
        self.pairs.len()
    }

    pub fn pairs(&self) -> &[(f64, f64)] {
        &self.pairs
    }

    /// `E[f(X)]` for `X ~ N(mean, cov)`, using the Cholesky factor of `cov`.
    pub fn expectation_2d<F>(
        &self,
        mean: &Vector2<f64>,
        cov: &Matrix2<f64>,
        mut f: F,
    ) -> Result<f64>
    where
        F: FnMut(Vector2<f64>) -> Result<f64>,
    {
        let chol = nalgebra::Cholesky::new(*cov).ok_or(Error::SingularMatrix {
            context: "quadrature covariance",
            det: cov.determinant(),
        })?;
        let l = chol.l() * SQRT_2;
        let mut acc = 0.0;
        for &(u, wu) in &self.pairs {
            for &(v, wv) in &self.pairs {
                acc += wu * wv * f(mean + l * Vector2::new(u, v))?;
            }
        }
        Ok(acc / PI)
    }
}
