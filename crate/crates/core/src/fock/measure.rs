use std::f64::consts::PI;

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;

use super::state::{FockDensityMatrix, FockKet};
use crate::error::{Error, Result};

/// Overlaps `⟨z|n⟩ = e^{−|z|²/2} (z*)^n / √n!` for `n < cutoff`.
pub fn heterodyne_overlaps(z: Complex64, cutoff: usize) -> DVector<Complex64> {
    let mut c = DVector::zeros(cutoff);
    c[0] = Complex64::new((-0.5 * z.norm_sqr()).exp(), 0.0);
    for n in 1..cutoff {
        c[n] = c[n - 1] * z.conj() / (n as f64).sqrt();
    }
    c
}

/// Ideal heterodyne on mode 2 of a two-mode ket. Returns the unnormalized
/// conditional ket of mode 1, whose squared norm is the outcome density.
pub fn condition_ket(ket: &FockKet, z: Complex64) -> Result<FockKet> {
    if ket.n_modes() != 2 {
        return Err(Error::Shape(
            "heterodyne conditioning needs a two-mode state".into(),
        ));
    }
    let d = ket.cutoff();
    let c = heterodyne_overlaps(z, d);
    let amps = ket.amps();
    let scale = 1.0 / PI.sqrt();
    let out = DVector::from_fn(d, |m, _| {
        (0..d).map(|k| c[k] * amps[m * d + k]).sum::<Complex64>() * scale
    });
    FockKet::new(d, 1, out)
}

/// Ideal heterodyne on mode 2 of a two-mode density matrix.
///
/// Returns the normalized conditional state of mode 1 and the outcome density.
pub fn fock_heterodyne_condition(
    rho: &FockDensityMatrix,
    z: Complex64,
) -> Result<(FockDensityMatrix, f64)> {
    if rho.n_modes() != 2 {
        return Err(Error::Shape(
            "heterodyne conditioning needs a two-mode state".into(),
        ));
    }
    let d = rho.cutoff();
    let c = heterodyne_overlaps(z, d);
    let m = rho.matrix();
    let mut out = DMatrix::<Complex64>::zeros(d, d);
    for r in 0..d {
        for s in 0..d {
            let mut acc = Complex64::new(0.0, 0.0);
            for k in 0..d {
                for l in 0..d {
                    acc += c[k] * m[(r * d + k, s * d + l)] * c[l].conj();
                }
            }
            out[(r, s)] = acc / PI;
        }
    }
    let p = out.trace().re;
    if !(p > 0.0) {
        return Err(Error::SingularMatrix {
            context: "heterodyne outcome has zero probability",
            det: p,
        });
    }
    Ok((
        FockDensityMatrix::from_parts(d, 1, out / Complex64::new(p, 0.0)),
        p,
    ))
}

/// Eigenvalues below this fraction of the largest are treated as rounding noise.
const RANK_TOL: f64 = 1e-13;

/// Range of a PSD matrix: eigenvectors with significant eigenvalues, scaled by
/// the square roots of those eigenvalues.
fn sqrt_factor(m: &DMatrix<Complex64>) -> DMatrix<Complex64> {
    let h = (m + m.adjoint()) * Complex64::new(0.5, 0.0);
    let eig = h.symmetric_eigen();
    let top = eig.eigenvalues.amax();
    let keep: Vec<usize> = (0..eig.eigenvalues.len())
        .filter(|&i| eig.eigenvalues[i] > RANK_TOL * top)
        .collect();
    DMatrix::from_fn(m.nrows(), keep.len(), |r, c| {
        eig.eigenvectors[(r, keep[c])] * eig.eigenvalues[keep[c]].sqrt()
    })
}

/// Uhlmann fidelity `(Tr √(√ρ σ √ρ))²` of two trace-normalized states.
///
/// The square root is taken on the support of the lower-rank argument, so a
/// pure state against anything reduces to `⟨ψ|σ|ψ⟩` without rounding noise.
pub fn fock_uhlmann_fidelity(rho: &FockDensityMatrix, sigma: &FockDensityMatrix) -> Result<f64> {
    if rho.cutoff() != sigma.cutoff() || rho.n_modes() != sigma.n_modes() {
        return Err(Error::Shape(
            "fidelity needs states on the same truncated space".into(),
        ));
    }
    let a = rho.matrix() / Complex64::new(rho.trace(), 0.0);
    let b = sigma.matrix() / Complex64::new(sigma.trace(), 0.0);
    let fa = sqrt_factor(&a);
    let fb = sqrt_factor(&b);
    let (f, other) = if fa.ncols() <= fb.ncols() {
        (fa, b)
    } else {
        (fb, a)
    };
    let inner = f.adjoint() * other * &f;
    let h = (&inner + inner.adjoint()) * Complex64::new(0.5, 0.0);
    let ev = h.symmetric_eigenvalues();
    let top = ev.amax();
    let t: f64 = ev
        .iter()
        .filter(|&&l| l > RANK_TOL * top)
        .map(|l| l.sqrt())
        .sum();
    Ok(t * t)
}
