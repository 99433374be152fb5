use std::f64::consts::{PI, SQRT_2};

use nalgebra::{Cholesky, DMatrix, Matrix2, Vector2};
use num_complex::Complex64;
use rayon::prelude::*;

use super::measure::condition_ket;
use super::ops::{fock_beamsplitter, fock_displacement, BeamSplitter};
use super::state::{FockDensityMatrix, FockKet};
use crate::cloner::TAU_MIN;
use crate::error::{check_range, Error, Result};
use crate::quadrature::HermiteRule;

/// Number-basis implementation of the cloner with ideal heterodyne detection.
#[derive(Clone, Debug)]
pub struct OracleCloner {
    cutoff: usize,
    gain: f64,
    bs1: BeamSplitter,
    bs2: BeamSplitter,
    ancilla: FockKet,
}

/// Reduced clone states, each normalized to unit trace.
#[derive(Clone, Debug)]
pub struct OracleClones {
    pub clone1: FockDensityMatrix,
    pub clone2: FockDensityMatrix,
    /// Trace of the averaged output before normalization. Its distance from 1
    /// bounds the combined truncation and quadrature error.
    pub weight: f64,
}

impl OracleCloner {
    /// Cloner with a vacuum ancilla.
    pub fn new(tau1: f64, tau2: f64, gain: f64, cutoff: usize) -> Result<Self> {
        Self::with_ancilla(tau1, tau2, gain, FockKet::vacuum(cutoff, 1)?)
    }

    pub fn with_ancilla(tau1: f64, tau2: f64, gain: f64, ancilla: FockKet) -> Result<Self> {
        check_range("tau1", tau1, TAU_MIN, 1.0 - TAU_MIN, "[1e-6, 1 - 1e-6]")?;
        check_range("tau2", tau2, TAU_MIN, 1.0 - TAU_MIN, "[1e-6, 1 - 1e-6]")?;
        check_range("gain", gain, f64::MIN, f64::MAX, "finite")?;
        if ancilla.n_modes() != 1 {
            return Err(Error::Shape("ancilla must be a single-mode ket".into()));
        }
        let cutoff = ancilla.cutoff();
        Ok(Self {
            cutoff,
            gain,
            bs1: fock_beamsplitter(tau1, cutoff)?,
            bs2: fock_beamsplitter(tau2, cutoff)?,
            ancilla,
        })
    }

    pub fn cutoff(&self) -> usize {
        self.cutoff
    }

    fn mix(&self, rho1: &FockKet, rho2: &FockKet) -> Result<FockKet> {
        self.bs1.apply_ket(&rho1.tensor(rho2)?)
    }

    /// Unnormalized clone pair for outcome `z`; the squared norm of the
    /// returned ket is the outcome density.
    fn branch(&self, mixed: &FockKet, z: Complex64) -> Result<FockKet> {
        let phi = condition_ket(mixed, z)?;
        let shifted = fock_displacement(z * self.gain, self.cutoff).apply_ket(&phi)?;
        self.bs2.apply_ket(&shifted.tensor(&self.ancilla)?)
    }

    /// Clones conditioned on heterodyne outcome `z`, with the outcome density.
    pub fn clone_at(
        &self,
        rho1: &FockKet,
        rho2: &FockKet,
        z: Complex64,
    ) -> Result<(OracleClones, f64)> {
        let out = self.branch(&self.mix(rho1, rho2)?, z)?;
        let p = out.norm_squared();
        let norm = Complex64::new(p, 0.0);
        let c1 = out.reduced(0)?;
        let c2 = out.reduced(1)?;
        Ok((
            OracleClones {
                clone1: FockDensityMatrix::from_parts(self.cutoff, 1, c1.matrix() / norm),
                clone2: FockDensityMatrix::from_parts(self.cutoff, 1, c2.matrix() / norm),
                weight: 1.0,
            },
            p,
        ))
    }

    /// Clones averaged over outcomes with an `order`×`order` Gauss–Hermite grid
    /// centred on the outcome distribution's Fock-computed moments.
    pub fn clone_averaged(
        &self,
        rho1: &FockKet,
        rho2: &FockKet,
        order: usize,
    ) -> Result<OracleClones> {
        let rule = HermiteRule::new(order)?;
        let mixed = self.mix(rho1, rho2)?;
        let m = mixed.moments();
        let mean = Vector2::new(m.mean[2], m.mean[3]);
        let cov = Matrix2::new(m.cov[(2, 2)], m.cov[(2, 3)], m.cov[(3, 2)], m.cov[(3, 3)])
            + Matrix2::identity() * 0.5;
        let chol = Cholesky::new(cov).ok_or(Error::SingularMatrix {
            context: "oracle outcome covariance",
            det: cov.determinant(),
        })?;
        let l = chol.l() * SQRT_2;
        let cov_inv = chol.inverse();
        let norm_const = 1.0 / (2.0 * PI * cov.determinant().sqrt());

        let nodes: Vec<(Vector2<f64>, f64)> = rule
            .pairs()
            .iter()
            .flat_map(|&(u, wu)| {
                rule.pairs()
                    .iter()
                    .map(move |&(v, wv)| (Vector2::new(u, v), wu * wv))
            })
            .map(|(uv, w)| (mean + l * uv, w))
            .collect();

        let parts: Vec<Result<(DMatrix<Complex64>, DMatrix<Complex64>)>> = nodes
            .par_iter()
            .map(|&(x, w)| {
                let z = Complex64::new(x[0], x[1]) / SQRT_2;
                let out = self.branch(&mixed, z)?;
                let dx = x - mean;
                let g = norm_const * (-0.5 * dx.dot(&(cov_inv * dx))).exp();
                // d²z = d²X / 2; divide by the sampling density g(X).
                let scale = Complex64::new(w / PI * 0.5 / g, 0.0);
                Ok((
                    out.reduced(0)?.matrix() * scale,
                    out.reduced(1)?.matrix() * scale,
                ))
            })
            .collect();

        let d = self.cutoff;
        let mut c1 = DMatrix::zeros(d, d);
        let mut c2 = DMatrix::zeros(d, d);
        for part in parts {
            let (a, b) = part?;
            c1 += a;
            c2 += b;
        }
        let weight = c1.trace().re;
        let norm = Complex64::new(weight, 0.0);
        Ok(OracleClones {
            clone1: FockDensityMatrix::from_parts(d, 1, c1 / norm),
            clone2: FockDensityMatrix::from_parts(d, 1, c2 / norm),
            weight,
        })
    }
}
