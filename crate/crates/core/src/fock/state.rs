use std::f64::consts::FRAC_1_SQRT_2;

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;

use super::ops::{fock_displacement_padded, fock_squeezing_padded};
use crate::error::{Error, Result};

/// Largest trace deficit tolerated when building a truncated state.
pub const TRUNCATION_BOUND: f64 = 1e-8;

/// Cutoff heuristic `8(|α|² + sinh² r) + 20`.
///
/// Underestimates for strong squeezing, where the number distribution decays
/// only like `tanh^{2n} r`; see [`certified_cutoff`].
pub fn recommended_cutoff(alpha: Complex64, r: f64) -> usize {
    (8.0 * (alpha.norm_sqr() + r.sinh().powi(2)) + 20.0).ceil() as usize
}

/// Largest cutoff tried by [`certified_cutoff`].
pub const MAX_CUTOFF: usize = 200;

/// Smallest cutoff, at least `floor` and the heuristic, in steps of 10, whose
/// truncated `D(α)S(r)|0⟩` meets [`TRUNCATION_BOUND`].
pub fn certified_cutoff(alpha: Complex64, r: f64, floor: usize) -> Result<usize> {
    let mut d = floor.max(recommended_cutoff(alpha, r));
    loop {
        match FockKet::squeezed(alpha, r, d) {
            Ok(_) => return Ok(d),
            Err(Error::Truncation { .. }) if d + 10 <= MAX_CUTOFF => d += 10,
            Err(e) => return Err(e),
        }
    }
}

fn check_modes(n_modes: usize) -> Result<()> {
    if n_modes == 1 || n_modes == 2 {
        Ok(())
    } else {
        Err(Error::Shape(format!(
            "Fock oracle supports 1 or 2 modes, got {n_modes}"
        )))
    }
}

/// First and second quadrature moments, in the same conventions as
/// [`crate::gaussian::GaussianState`].
#[derive(Clone, Debug, PartialEq)]
pub struct Moments {
    pub mean: DVector<f64>,
    pub cov: DMatrix<f64>,
}

/// Quadrature operator `R_j` (j = 2·mode + {0: x, 1: y}) applied to a vector in
/// the truncated space. Components pushed past the cutoff are dropped.
fn apply_quadrature(
    v: &DVector<Complex64>,
    cutoff: usize,
    n_modes: usize,
    j: usize,
) -> DVector<Complex64> {
    let mode = j / 2;
    let stride = if n_modes == 2 && mode == 0 { cutoff } else { 1 };
    let mut out = DVector::zeros(v.len());
    for (idx, &amp) in v.iter().enumerate() {
        if amp == Complex64::new(0.0, 0.0) {
            continue;
        }
        let n = (idx / stride) % cutoff;
        // a|n> = √n |n−1>, a†|n> = √(n+1) |n+1>
        let (lower, raise) = if j % 2 == 0 {
            (
                Complex64::new(FRAC_1_SQRT_2, 0.0),
                Complex64::new(FRAC_1_SQRT_2, 0.0),
            )
        } else {
            (
                Complex64::new(0.0, -FRAC_1_SQRT_2),
                Complex64::new(0.0, FRAC_1_SQRT_2),
            )
        };
        if n > 0 {
            out[idx - stride] += lower * (n as f64).sqrt() * amp;
        }
        if n + 1 < cutoff {
            out[idx + stride] += raise * ((n + 1) as f64).sqrt() * amp;
        }
    }
    out
}

/// Pure state vector in the truncated number basis.
#[derive(Clone, Debug, PartialEq)]
pub struct FockKet {
    cutoff: usize,
    n_modes: usize,
    amps: DVector<Complex64>,
}

impl FockKet {
    pub fn new(cutoff: usize, n_modes: usize, amps: DVector<Complex64>) -> Result<Self> {
        check_modes(n_modes)?;
        let dim = cutoff.pow(n_modes as u32);
        if amps.len() != dim {
            return Err(Error::Dimension {
                expected: dim,
                found: amps.len(),
            });
        }
        Ok(Self {
            cutoff,
            n_modes,
            amps,
        })
    }

    pub fn vacuum(cutoff: usize, n_modes: usize) -> Result<Self> {
        let mut ket = Self::new(cutoff, n_modes, DVector::zeros(cutoff.pow(n_modes as u32)))?;
        ket.amps[0] = Complex64::new(1.0, 0.0);
        Ok(ket)
    }

    /// `D(α) S(r)|0⟩`, built by exponentiating the generators in a padded space
    /// and truncating to `cutoff`.
    pub fn squeezed(alpha: Complex64, r: f64, cutoff: usize) -> Result<Self> {
        let padded = cutoff + cutoff.max(20);
        let mut v = DVector::zeros(padded);
        v[0] = Complex64::new(1.0, 0.0);
        if r != 0.0 {
            v = fock_squeezing_padded(r, padded) * v;
        }
        if alpha != Complex64::new(0.0, 0.0) {
            v = fock_displacement_padded(alpha, padded) * v;
        }
        let amps = v.rows(0, cutoff).into_owned();
        let deficit = 1.0 - amps.norm_squared();
        if deficit > TRUNCATION_BOUND {
            return Err(Error::Truncation {
                deficit,
                bound: TRUNCATION_BOUND,
            });
        }
        Self::new(cutoff, 1, amps)
    }

    pub fn coherent(alpha: Complex64, cutoff: usize) -> Result<Self> {
        Self::squeezed(alpha, 0.0, cutoff)
    }

    pub fn cutoff(&self) -> usize {
        self.cutoff
    }

    pub fn n_modes(&self) -> usize {
        self.n_modes
    }

    pub fn amps(&self) -> &DVector<Complex64> {
        &self.amps
    }

    pub fn norm_squared(&self) -> f64 {
        self.amps.norm_squared()
    }

    pub fn tensor(&self, other: &FockKet) -> Result<FockKet> {
        if self.n_modes != 1 || other.n_modes != 1 || self.cutoff != other.cutoff {
            return Err(Error::Shape(
                "tensor needs two single-mode kets with equal cutoff".into(),
            ));
        }
        let d = self.cutoff;
        let amps = DVector::from_fn(d * d, |idx, _| self.amps[idx / d] * other.amps[idx % d]);
        FockKet::new(d, 2, amps)
    }

    pub fn to_density(&self) -> FockDensityMatrix {
        FockDensityMatrix {
            cutoff: self.cutoff,
            n_modes: self.n_modes,
            matrix: &self.amps * self.amps.adjoint(),
        }
    }

    /// Reduced density matrix of `keep` (0 or 1) for a two-mode ket.
    pub fn reduced(&self, keep: usize) -> Result<FockDensityMatrix> {
        if self.n_modes != 2 || keep > 1 {
            return Err(Error::Shape(
                "reduced() needs a two-mode ket and keep ∈ {0, 1}".into(),
            ));
        }
        let d = self.cutoff;
        let psi = DMatrix::from_fn(d, d, |n1, n2| self.amps[n1 * d + n2]);
        let matrix = if keep == 0 {
            &psi * psi.adjoint()
        } else {
            (psi.adjoint() * &psi).transpose()
        };
        Ok(FockDensityMatrix {
            cutoff: d,
            n_modes: 1,
            matrix,
        })
    }

    /// Quadrature moments, normalized by the squared norm.
    pub fn moments(&self) -> Moments {
        let dim = 2 * self.n_modes;
        let applied: Vec<DVector<Complex64>> = (0..dim)
            .map(|j| apply_quadrature(&self.amps, self.cutoff, self.n_modes, j))
            .collect();
        let norm = self.norm_squared();
        let mean = DVector::from_fn(dim, |j, _| self.amps.dotc(&applied[j]).re / norm);
        let cov = DMatrix::from_fn(dim, dim, |j, k| {
            applied[j].dotc(&applied[k]).re / norm - mean[j] * mean[k]
        });
        Moments { mean, cov }
    }
}

/// Density operator in the truncated number basis.
#[derive(Clone, Debug, PartialEq)]
pub struct FockDensityMatrix {
    cutoff: usize,
    n_modes: usize,
    matrix: DMatrix<Complex64>,
}

impl FockDensityMatrix {
    pub fn new(cutoff: usize, n_modes: usize, matrix: DMatrix<Complex64>) -> Result<Self> {
        check_modes(n_modes)?;
        let dim = cutoff.pow(n_modes as u32);
        if matrix.nrows() != dim || matrix.ncols() != dim {
            return Err(Error::Dimension {
                expected: dim,
                found: matrix.nrows(),
            });
        }
        let herm_defect = (&matrix - matrix.adjoint())
            .iter()
            .fold(0.0f64, |m, v| m.max(v.norm()));
        if herm_defect > 1e-10 {
            return Err(Error::Shape(format!(
                "density matrix not Hermitian ({herm_defect:e})"
            )));
        }
        let trace = matrix.trace().re;
        if trace > 1.0 + 1e-10 || trace < 1.0 - TRUNCATION_BOUND {
            return Err(Error::Truncation {
                deficit: 1.0 - trace,
                bound: TRUNCATION_BOUND,
            });
        }
        let min_eig = matrix.clone().symmetric_eigenvalues().min();
        if min_eig < -1e-10 {
            return Err(Error::Unphysical(format!(
                "density matrix eigenvalue {min_eig:e}"
            )));
        }
        Ok(Self {
            cutoff,
            n_modes,
            matrix,
        })
    }

    pub(crate) fn from_parts(cutoff: usize, n_modes: usize, matrix: DMatrix<Complex64>) -> Self {
        Self {
            cutoff,
            n_modes,
            matrix,
        }
    }

    pub fn cutoff(&self) -> usize {
        self.cutoff
    }

    pub fn n_modes(&self) -> usize {
        self.n_modes
    }

    pub fn matrix(&self) -> &DMatrix<Complex64> {
        &self.matrix
    }

    pub fn trace(&self) -> f64 {
        self.matrix.trace().re
    }

    /// Mean photon number of each mode.
    pub fn mean_photons(&self) -> Vec<f64> {
        let d = self.cutoff;
        let tr = self.trace();
        (0..self.n_modes)
            .map(|mode| {
                (0..self.matrix.nrows())
                    .map(|idx| {
                        let n = if self.n_modes == 2 && mode == 0 {
                            idx / d
                        } else {
                            idx % d
                        };
                        n as f64 * self.matrix[(idx, idx)].re
                    })
                    .sum::<f64>()
                    / tr
            })
            .collect()
    }

    /// Marginal of `keep` for a two-mode state.
    pub fn partial_trace(&self, keep: usize) -> Result<FockDensityMatrix> {
        if self.n_modes != 2 || keep > 1 {
            return Err(Error::Shape(
                "partial_trace needs a two-mode state and keep ∈ {0, 1}".into(),
            ));
        }
        let d = self.cutoff;
        let matrix = DMatrix::from_fn(d, d, |m, n| {
            (0..d)
                .map(|k| {
                    if keep == 0 {
                        self.matrix[(m * d + k, n * d + k)]
                    } else {
                        self.matrix[(k * d + m, k * d + n)]
                    }
                })
                .sum()
        });
        Ok(Self::from_parts(d, 1, matrix))
    }

    /// Quadrature moments, normalized by the trace.
    pub fn moments(&self) -> Moments {
        let dim = 2 * self.n_modes;
        let tr = self.trace();
        let apply_cols = |m: &DMatrix<Complex64>, j: usize| {
            let mut out = DMatrix::zeros(m.nrows(), m.ncols());
            for c in 0..m.ncols() {
                let col = apply_quadrature(&m.column(c).into_owned(), self.cutoff, self.n_modes, j);
                out.set_column(c, &col);
            }
            out
        };
        let applied: Vec<DMatrix<Complex64>> =
            (0..dim).map(|k| apply_cols(&self.matrix, k)).collect();
        let mean = DVector::from_fn(dim, |j, _| applied[j].trace().re / tr);
        let mut cov = DMatrix::zeros(dim, dim);
        for j in 0..dim {
            for k in j..dim {
                // Tr[R_j R_k ρ]; the symmetrized moment is its real part.
                let rjk = apply_cols(&applied[k], j).trace().re / tr;
                cov[(j, k)] = rjk - mean[j] * mean[k];
                cov[(k, j)] = cov[(j, k)];
            }
        }
        Moments { mean, cov }
    }
}

/// Truncated coherent state |α⟩⟨α|.
pub fn fock_coherent(alpha: Complex64, cutoff: usize) -> Result<FockDensityMatrix> {
    Ok(FockKet::coherent(alpha, cutoff)?.to_density())
}

/// Truncated squeezed coherent state `D(α)S(r)|0⟩⟨0|S†(r)D†(α)`.
pub fn fock_squeezed(alpha: Complex64, r: f64, cutoff: usize) -> Result<FockDensityMatrix> {
    Ok(FockKet::squeezed(alpha, r, cutoff)?.to_density())
}
