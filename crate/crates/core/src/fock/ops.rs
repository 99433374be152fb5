use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;

use super::state::{FockDensityMatrix, FockKet};
use crate::error::{check_range, Error, Result};

/// `exp(G)` for anti-Hermitian `G`, via the eigendecomposition of `iG`.
pub fn expm_antihermitian(generator: &DMatrix<Complex64>) -> DMatrix<Complex64> {
    let i = Complex64::new(0.0, 1.0);
    let h = generator.map(|v| v * i);
    let h = (&h + h.adjoint()) * Complex64::new(0.5, 0.0);
    let eig = h.symmetric_eigen();
    let phases = DVector::from_iterator(
        eig.eigenvalues.len(),
        eig.eigenvalues
            .iter()
            .map(|&l| Complex64::new(0.0, -l).exp()),
    );
    let v = &eig.eigenvectors;
    v * DMatrix::from_diagonal(&phases) * v.adjoint()
}

fn lowering(dim: usize) -> DMatrix<Complex64> {
    DMatrix::from_fn(dim, dim, |m, n| {
        if n == m + 1 {
            Complex64::new((n as f64).sqrt(), 0.0)
        } else {
            Complex64::new(0.0, 0.0)
        }
    })
}

pub(crate) fn fock_displacement_padded(beta: Complex64, dim: usize) -> DMatrix<Complex64> {
    let a = lowering(dim);
    let ad = a.adjoint();
    expm_antihermitian(&(ad * beta - a * beta.conj()))
}

pub(crate) fn fock_squeezing_padded(r: f64, dim: usize) -> DMatrix<Complex64> {
    let a = lowering(dim);
    let ad = a.adjoint();
    let g = (&ad * &ad - &a * &a) * Complex64::new(0.5 * r, 0.0);
    expm_antihermitian(&g)
}

fn padded_block(full: DMatrix<Complex64>, cutoff: usize) -> DMatrix<Complex64> {
    full.view((0, 0), (cutoff, cutoff)).into_owned()
}

/// Dense operator on one or two truncated modes.
#[derive(Clone, Debug, PartialEq)]
pub struct FockOperator {
    cutoff: usize,
    n_modes: usize,
    matrix: DMatrix<Complex64>,
}

impl FockOperator {
    pub fn new(cutoff: usize, n_modes: usize, matrix: DMatrix<Complex64>) -> Result<Self> {
        let dim = cutoff.pow(n_modes as u32);
        if !(1..=2).contains(&n_modes) || matrix.nrows() != dim || matrix.ncols() != dim {
            return Err(Error::Shape(format!(
                "operator of size {}x{} does not fit {n_modes} modes at cutoff {cutoff}",
                matrix.nrows(),
                matrix.ncols()
            )));
        }
        Ok(Self {
            cutoff,
            n_modes,
            matrix,
        })
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

    pub fn apply_ket(&self, ket: &FockKet) -> Result<FockKet> {
        self.check(ket.cutoff(), ket.n_modes())?;
        FockKet::new(self.cutoff, self.n_modes, &self.matrix * ket.amps())
    }

    pub fn apply_density(&self, rho: &FockDensityMatrix) -> Result<FockDensityMatrix> {
        self.check(rho.cutoff(), rho.n_modes())?;
        let m = &self.matrix * rho.matrix() * self.matrix.adjoint();
        Ok(FockDensityMatrix::from_parts(self.cutoff, self.n_modes, m))
    }

    fn check(&self, cutoff: usize, n_modes: usize) -> Result<()> {
        if cutoff != self.cutoff || n_modes != self.n_modes {
            return Err(Error::Shape(format!(
                "operator on {} modes at cutoff {} applied to {n_modes} modes at cutoff {cutoff}",
                self.n_modes, self.cutoff
            )));
        }
        Ok(())
    }
}

/// Exact matrix elements `⟨m|D(β)|n⟩` for `m, n < cutoff`.
///
/// Below the diagonal, `⟨n+k|D(β)|n⟩ = e^{−x/2} βᵏ √(n!/(n+k)!) L_n^{(k)}(x)`
/// with `x = |β|²`, run as a normalized forward Laguerre recurrence in `n`.
/// Above it, `⟨n|D(β)|n+k⟩ = conj ⟨n+k|D(−β)|n⟩`.
fn displacement_elements(beta: Complex64, cutoff: usize) -> DMatrix<Complex64> {
    let mut d = DMatrix::zeros(cutoff, cutoff);
    let x = beta.norm_sqr();
    for (z, lower) in [(beta, true), (-beta, false)] {
        // e^{−x/2} zᵏ / √k!
        let mut head = Complex64::new((-0.5 * x).exp(), 0.0);
        for k in 0..cutoff {
            let kf = k as f64;
            let len = cutoff - k;
            let mut g = Vec::with_capacity(len);
            g.push(head);
            if len > 1 {
                g.push(head * (1.0 + kf - x) / (kf + 1.0).sqrt());
            }
            for n in 1..len.saturating_sub(1) {
                let nf = n as f64;
                let next = (g[n] * (2.0 * nf + 1.0 + kf - x) - g[n - 1] * (nf * (nf + kf)).sqrt())
                    / ((nf + 1.0) * (nf + 1.0 + kf)).sqrt();
                g.push(next);
            }
            for (n, v) in g.into_iter().enumerate() {
                if lower {
                    d[(n + k, n)] = v;
                } else if k > 0 {
                    d[(n, n + k)] = v.conj();
                }
            }
            head = head * z / (kf + 1.0).sqrt();
        }
    }
    d
}

/// Truncated displacement `D(β)`: the exact elements of the full operator.
pub fn fock_displacement(beta: Complex64, cutoff: usize) -> FockOperator {
    FockOperator {
        cutoff,
        n_modes: 1,
        matrix: displacement_elements(beta, cutoff),
    }
}

/// Truncated squeezer `S(r)`; positive `r` stretches x.
pub fn fock_squeezing(r: f64, cutoff: usize) -> FockOperator {
    let padded = cutoff + cutoff.max(20);
    FockOperator {
        cutoff,
        n_modes: 1,
        matrix: padded_block(fock_squeezing_padded(r, padded), cutoff),
    }
}

/// Two-mode beam splitter stored as one unitary block per total photon number.
///
/// Sector `N` holds the states |n1, N − n1⟩ with both occupations below the
/// cutoff, ordered by increasing `n1`.
#[derive(Clone, Debug)]
pub struct BeamSplitter {
    cutoff: usize,
    tau: f64,
    sectors: Vec<(usize, DMatrix<Complex64>)>,
}

/// Beam splitter of transmissivity `tau` acting on two truncated modes.
///
/// Maps quadratures as `x1 → √τ x1 − √(1−τ) x2`, `x2 → √(1−τ) x1 + √τ x2`.
pub fn fock_beamsplitter(tau: f64, cutoff: usize) -> Result<BeamSplitter> {
    check_range("tau", tau, 0.0, 1.0, "[0, 1]")?;
    let theta = tau.sqrt().acos();
    let sectors = (0..(2 * cutoff - 1))
        .map(|total| {
            let lo = total.saturating_sub(cutoff - 1);
            let hi = total.min(cutoff - 1);
            let size = hi - lo + 1;
            // θ(a1 a2† − a1† a2) restricted to the sector.
            let mut g = DMatrix::<Complex64>::zeros(size, size);
            for col in 0..size {
                let n1 = lo + col;
                let n2 = total - n1;
                if n1 < hi {
                    let v = ((n1 + 1) as f64).sqrt() * (n2 as f64).sqrt() * theta;
                    g[(col + 1, col)] -= Complex64::new(v, 0.0);
                    g[(col, col + 1)] += Complex64::new(v, 0.0);
                }
            }
            (lo, expm_antihermitian(&g))
        })
        .collect();
    Ok(BeamSplitter {
        cutoff,
        tau,
        sectors,
    })
}

impl BeamSplitter {
    pub fn cutoff(&self) -> usize {
        self.cutoff
    }

    pub fn tau(&self) -> f64 {
        self.tau
    }

    fn index(&self, total: usize, lo: usize, k: usize) -> usize {
        let n1 = lo + k;
        n1 * self.cutoff + (total - n1)
    }

    fn check(&self, cutoff: usize, n_modes: usize) -> Result<()> {
        if cutoff != self.cutoff || n_modes != 2 {
            return Err(Error::Shape(format!(
                "beam splitter at cutoff {} applied to {n_modes} modes at cutoff {cutoff}",
                self.cutoff
            )));
        }
        Ok(())
    }

    pub fn apply_ket(&self, ket: &FockKet) -> Result<FockKet> {
        self.check(ket.cutoff(), ket.n_modes())?;
        let amps = ket.amps();
        let mut out = DVector::zeros(amps.len());
        for (total, (lo, u)) in self.sectors.iter().enumerate() {
            let v = DVector::from_fn(u.nrows(), |k, _| amps[self.index(total, *lo, k)]);
            let w = u * v;
            for (k, val) in w.iter().enumerate() {
                out[self.index(total, *lo, k)] = *val;
            }
        }
        FockKet::new(self.cutoff, 2, out)
    }

    pub fn apply_density(&self, rho: &FockDensityMatrix) -> Result<FockDensityMatrix> {
        self.check(rho.cutoff(), rho.n_modes())?;
        let m = rho.matrix();
        let mut out = DMatrix::zeros(m.nrows(), m.ncols());
        for (ta, (la, ua)) in self.sectors.iter().enumerate() {
            for (tb, (lb, ub)) in self.sectors.iter().enumerate() {
                let block = DMatrix::from_fn(ua.nrows(), ub.nrows(), |i, j| {
                    m[(self.index(ta, *la, i), self.index(tb, *lb, j))]
                });
                let rotated = ua * block * ub.adjoint();
                for i in 0..ua.nrows() {
                    for j in 0..ub.nrows() {
                        out[(self.index(ta, *la, i), self.index(tb, *lb, j))] = rotated[(i, j)];
                    }
                }
            }
        }
        Ok(FockDensityMatrix::from_parts(self.cutoff, 2, out))
    }

    /// Dense two-mode matrix of the same unitary.
    pub fn to_operator(&self) -> FockOperator {
        let dim = self.cutoff * self.cutoff;
        let mut matrix = DMatrix::zeros(dim, dim);
        for (total, (lo, u)) in self.sectors.iter().enumerate() {
            for i in 0..u.nrows() {
                for j in 0..u.ncols() {
                    matrix[(self.index(total, *lo, i), self.index(total, *lo, j))] = u[(i, j)];
                }
            }
        }
        FockOperator {
            cutoff: self.cutoff,
            n_modes: 2,
            matrix,
        }
    }
}
