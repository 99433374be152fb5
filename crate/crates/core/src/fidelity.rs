//! Fidelity between single-mode Gaussian states and the cloning figures of merit.

use nalgebra::Matrix2;
use serde::Serialize;

use crate::error::{check_range, Error, Result};
use crate::gaussian::{CovMatrix, GaussianMeasurement, GaussianState};
use crate::linalg::inverse_2x2;

/// Off-diagonal magnitude below which a 2x2 covariance counts as diagonal.
pub const DIAGONAL_TOL: f64 = 1e-12;

/// Bracket searched by [`maximize_fidelity_numeric`].
pub const SQUEEZING_BRACKET: (f64, f64) = (-3.0, 3.0);

/// Absolute tolerance of the golden-section search.
pub const GOLDEN_TOL: f64 = 1e-8;

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct FidelityReport {
    pub fidelity: f64,
    /// `4 (Det σ_a − 1/4)(Det σ_b − 1/4)`, clamped at zero.
    pub delta: f64,
    /// `Det[σ_a + σ_b]`.
    pub det_sum: f64,
}

fn mixedness_term(sigma_a: &Matrix2<f64>, sigma_b: &Matrix2<f64>) -> f64 {
    (4.0 * (sigma_a.determinant() - 0.25) * (sigma_b.determinant() - 0.25)).max(0.0)
}

fn single_mode(state: &GaussianState) -> Result<()> {
    if state.n_modes() == 1 {
        Ok(())
    } else {
        Err(Error::Dimension {
            expected: 1,
            found: state.n_modes(),
        })
    }
}

/// Uhlmann fidelity of two single-mode Gaussian states.
pub fn gaussian_fidelity(a: &GaussianState, b: &GaussianState) -> Result<FidelityReport> {
    single_mode(a)?;
    single_mode(b)?;
    let (sa, sb) = (a.mode_cov(0), b.mode_cov(0));
    let sum = sa + sb;
    let inv = inverse_2x2(&sum, "fidelity covariance sum")?;
    let dx = a.mode_mean(0) - b.mode_mean(0);
    let det_sum = sum.determinant();
    let delta = mixedness_term(&sa, &sb);
    let fidelity = (-0.5 * dx.dot(&(inv * dx))).exp() / ((det_sum + delta).sqrt() - delta.sqrt());
    Ok(FidelityReport {
        fidelity,
        delta,
        det_sum,
    })
}

/// Fidelity of the symmetric cloner for an input of covariance `sigma_k`,
/// ancilla `sigma_3` and measurement noise `sigma_m`. Independent of the
/// input displacement.
pub fn symmetric_cloning_fidelity(
    sigma_k: &Matrix2<f64>,
    sigma_3: &Matrix2<f64>,
    sigma_m: &Matrix2<f64>,
) -> Result<f64> {
    CovMatrix::from_2x2(*sigma_k)?;
    CovMatrix::from_2x2(*sigma_3)?;
    GaussianMeasurement::new(*sigma_m)?;
    Ok(symmetric_fidelity_unchecked(sigma_k, sigma_3, sigma_m))
}

fn symmetric_fidelity_unchecked(
    sigma_k: &Matrix2<f64>,
    sigma_3: &Matrix2<f64>,
    sigma_m: &Matrix2<f64>,
) -> f64 {
    let clone = sigma_k + (sigma_3 + sigma_m) * 0.5;
    let delta = mixedness_term(sigma_k, &clone);
    let det_sum = (sigma_k + clone).determinant();
    1.0 / ((det_sum + delta).sqrt() - delta.sqrt())
}

/// Covariance of a squeezed thermal ancilla, `(2T+1)/2 · diag(e^{2s}, e^{−2s})`.
pub fn ancilla_cov(thermal_photons: f64, s: f64) -> Matrix2<f64> {
    let scale = (2.0 * thermal_photons + 1.0) / 2.0;
    Matrix2::new(scale * (2.0 * s).exp(), 0.0, 0.0, scale * (-2.0 * s).exp())
}

fn require_diagonal(name: &str, m: &Matrix2<f64>) -> Result<()> {
    if m[(0, 1)].abs() > DIAGONAL_TOL || m[(1, 0)].abs() > DIAGONAL_TOL {
        return Err(Error::Shape(format!(
            "{name} must be diagonal (off-diagonal {:e})",
            m[(0, 1)]
        )));
    }
    Ok(())
}

/// Squeezing of the vacuum ancilla that maximizes the symmetric cloning
/// fidelity: `s̄ = ¼ log((4γ11 + Δ11)/(4γ22 + Δ22))`.
///
/// Exact for pure inputs (and whenever `γ11/γ22 = Δ11/Δ22`). For mixed,
/// anisotropic inputs the mixedness term shifts the optimum; use
/// [`maximize_fidelity_numeric`] there.
pub fn optimal_ancilla_squeezing(sigma_k: &Matrix2<f64>, sigma_m: &Matrix2<f64>) -> Result<f64> {
    require_diagonal("sigma_k", sigma_k)?;
    require_diagonal("sigma_M", sigma_m)?;
    let num = 4.0 * sigma_k[(0, 0)] + sigma_m[(0, 0)];
    let den = 4.0 * sigma_k[(1, 1)] + sigma_m[(1, 1)];
    Ok(0.25 * (num / den).ln())
}

/// Maximizes a unimodal function on `[lo, hi]`; returns `(argmax, max)`.
pub fn golden_section_max<F: FnMut(f64) -> f64>(
    mut f: F,
    lo: f64,
    hi: f64,
    tol: f64,
) -> (f64, f64) {
    let inv_phi = (5f64.sqrt() - 1.0) / 2.0;
    let (mut a, mut b) = (lo, hi);
    let mut c = b - inv_phi * (b - a);
    let mut d = a + inv_phi * (b - a);
    let (mut fc, mut fd) = (f(c), f(d));
    while (b - a).abs() > tol {
        if fc > fd {
            b = d;
            d = c;
            fd = fc;
            c = b - inv_phi * (b - a);
            fc = f(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + inv_phi * (b - a);
            fd = f(d);
        }
    }
    let x = 0.5 * (a + b);
    (x, f(x))
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct AncillaOptimum {
    pub s_star: f64,
    pub f_star: f64,
    /// Thermal photon number maximizing the fidelity on the scan grid.
    pub best_thermal_photons: f64,
    /// `(T, max_s F)` for each thermal photon number scanned.
    pub thermal_scan: Vec<(f64, f64)>,
}

/// Thermal photon numbers scanned by [`maximize_fidelity_numeric`]:
/// `0, 0.1, ..., 2`.
pub fn thermal_grid() -> Vec<f64> {
    (0..=20).map(|k| k as f64 * 0.1).collect()
}

/// Direct numerical maximization of the symmetric cloning fidelity over
/// squeezed thermal ancillas.
pub fn maximize_fidelity_numeric(
    sigma_k: &Matrix2<f64>,
    sigma_m: &Matrix2<f64>,
) -> Result<AncillaOptimum> {
    CovMatrix::from_2x2(*sigma_k)?;
    GaussianMeasurement::new(*sigma_m)?;
    let (lo, hi) = SQUEEZING_BRACKET;
    let best_s = |t: f64| {
        golden_section_max(
            |s| symmetric_fidelity_unchecked(sigma_k, &ancilla_cov(t, s), sigma_m),
            lo,
            hi,
            GOLDEN_TOL,
        )
    };
    let (s_star, f_star) = best_s(0.0);
    let thermal_scan: Vec<(f64, f64)> = thermal_grid()
        .into_iter()
        .map(|t| (t, best_s(t).1))
        .collect();
    let best_thermal_photons = thermal_scan
        .iter()
        .fold((f64::NAN, f64::NEG_INFINITY), |acc, &(t, f)| {
            if f > acc.1 {
                (t, f)
            } else {
                acc
            }
        })
        .0;
    Ok(AncillaOptimum {
        s_star,
        f_star,
        best_thermal_photons,
        thermal_scan,
    })
}

/// Largest |r| accepted by [`enhancement`].
pub const MAX_ENHANCEMENT_SQUEEZING: f64 = 3.0;

/// Relative fidelity gain from replacing the vacuum ancilla by the optimal
/// squeezed vacuum, for a squeezed input with parameter `r` and heterodyne
/// efficiency `eta`.
pub fn enhancement(r: f64, eta: f64) -> Result<f64> {
    check_range(
        "r",
        r,
        -MAX_ENHANCEMENT_SQUEEZING,
        MAX_ENHANCEMENT_SQUEEZING,
        "[-3, 3]",
    )?;
    let meas = GaussianMeasurement::heterodyne(eta)?;
    let sigma_1 = ancilla_cov(0.0, r);
    let pair = ancilla_fidelities(&sigma_1, meas.cov())?;
    Ok((pair.optimal - pair.vacuum) / pair.vacuum)
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct AncillaFidelities {
    pub s_bar: f64,
    pub optimal: f64,
    pub vacuum: f64,
}

/// Symmetric cloning fidelity with the optimal squeezed ancilla and with the
/// vacuum ancilla.
pub fn ancilla_fidelities(
    sigma_k: &Matrix2<f64>,
    sigma_m: &Matrix2<f64>,
) -> Result<AncillaFidelities> {
    let s_bar = optimal_ancilla_squeezing(sigma_k, sigma_m)?;
    Ok(AncillaFidelities {
        s_bar,
        optimal: symmetric_cloning_fidelity(sigma_k, &ancilla_cov(0.0, s_bar), sigma_m)?,
        vacuum: symmetric_cloning_fidelity(sigma_k, &ancilla_cov(0.0, 0.0), sigma_m)?,
    })
}
