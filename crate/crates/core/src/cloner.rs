//! The selective linear cloning machine.
//!
//! Two inputs are mixed on a beam splitter (τ1); mode 2 of the output is
//! measured with a Gaussian POVM and the outcome `z` drives a displacement
//! `g z` on mode 1, which is finally split against an ancilla on a second beam
//! splitter (τ2). Clone 1 is the transmitted arm of the second splitter.

use nalgebra::{Matrix2, Vector2};
use num_complex::Complex64;

use crate::error::{check_range, Error, Result};
use crate::gaussian::{
    average_feedforward, bs_symplectic, measure_mode, GaussianMeasurement, GaussianState,
};

/// Transmissivities are kept in `[TAU_MIN, 1 - TAU_MIN]`; the selective gains
/// diverge at the endpoints.
pub const TAU_MIN: f64 = 1e-6;

fn check_tau(name: &'static str, tau: f64) -> Result<f64> {
    check_range(name, tau, TAU_MIN, 1.0 - TAU_MIN, "[1e-6, 1 - 1e-6]")
}

#[derive(Clone, Debug, PartialEq)]
pub struct ClonerConfig {
    tau1: f64,
    tau2: f64,
    gain: f64,
    meas: GaussianMeasurement,
    ancilla: GaussianState,
}

impl ClonerConfig {
    pub fn new(
        tau1: f64,
        tau2: f64,
        gain: f64,
        meas: GaussianMeasurement,
        ancilla: GaussianState,
    ) -> Result<Self> {
        check_tau("tau1", tau1)?;
        check_tau("tau2", tau2)?;
        check_range("gain", gain, f64::MIN, f64::MAX, "finite")?;
        if ancilla.n_modes() != 1 {
            return Err(Error::Dimension {
                expected: 1,
                found: ancilla.n_modes(),
            });
        }
        if !ancilla.is_physical() {
            return Err(Error::Unphysical("ancilla state".into()));
        }
        Ok(Self {
            tau1,
            tau2,
            gain,
            meas,
            ancilla,
        })
    }

    /// Balanced splitters, vacuum ancilla and heterodyne detection with
    /// efficiency `eta`.
    pub fn symmetric(gain: f64, eta: f64) -> Result<Self> {
        Self::new(
            0.5,
            0.5,
            gain,
            GaussianMeasurement::heterodyne(eta)?,
            GaussianState::vacuum(),
        )
    }

    pub fn with_gain(&self, gain: f64) -> Result<Self> {
        Self::new(
            self.tau1,
            self.tau2,
            gain,
            self.meas.clone(),
            self.ancilla.clone(),
        )
    }

    pub fn with_ancilla(&self, ancilla: GaussianState) -> Result<Self> {
        Self::new(self.tau1, self.tau2, self.gain, self.meas.clone(), ancilla)
    }

    pub fn tau1(&self) -> f64 {
        self.tau1
    }
    pub fn tau2(&self) -> f64 {
        self.tau2
    }
    pub fn gain(&self) -> f64 {
        self.gain
    }
    pub fn meas(&self) -> &GaussianMeasurement {
        &self.meas
    }
    pub fn ancilla(&self) -> &GaussianState {
        &self.ancilla
    }

    /// Weight of input 1 in the displaced beam: `√τ1 + g√(1−τ1)`.
    pub fn f1(&self) -> f64 {
        self.tau1.sqrt() + self.gain * (1.0 - self.tau1).sqrt()
    }

    /// Weight of input 2 in the displaced beam: `g√τ1 − √(1−τ1)`.
    pub fn f2(&self) -> f64 {
        self.gain * self.tau1.sqrt() - (1.0 - self.tau1).sqrt()
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct CloneResult {
    pub clone1: GaussianState,
    pub clone2: GaussianState,
    pub f1: f64,
    pub f2: f64,
}

fn check_input(name: &'static str, rho: &GaussianState) -> Result<()> {
    if rho.n_modes() != 1 {
        return Err(Error::Dimension {
            expected: 1,
            found: rho.n_modes(),
        });
    }
    if !rho.is_physical() {
        return Err(Error::Unphysical(format!("input state {name}")));
    }
    Ok(())
}

/// Splits a single-mode state against the ancilla and returns both clones.
fn split_against_ancilla(displaced: &GaussianState, cfg: &ClonerConfig) -> Result<CloneResult> {
    let bs2 = bs_symplectic(cfg.tau2, 2, (0, 1))?;
    let out = displaced.tensor(&cfg.ancilla).apply_symplectic(&bs2)?;
    Ok(CloneResult {
        clone1: out.partial_trace(&[0])?,
        clone2: out.partial_trace(&[1])?,
        f1: cfg.f1(),
        f2: cfg.f2(),
    })
}

fn mix_inputs(rho1: &GaussianState, rho2: &GaussianState, tau1: f64) -> Result<GaussianState> {
    check_input("rho1", rho1)?;
    check_input("rho2", rho2)?;
    let bs1 = bs_symplectic(tau1, 2, (0, 1))?;
    rho1.tensor(rho2).apply_symplectic(&bs1)
}

/// Clones averaged over all measurement outcomes.
///
/// The outcome average is taken before the second splitter; by linearity this
/// gives the same clones as averaging after it.
pub fn run_averaged(
    rho1: &GaussianState,
    rho2: &GaussianState,
    cfg: &ClonerConfig,
) -> Result<CloneResult> {
    let mixed = mix_inputs(rho1, rho2, cfg.tau1)?;
    let displaced = average_feedforward(&mixed, &cfg.meas, cfg.gain)?;
    split_against_ancilla(&displaced, cfg)
}

/// Single-shot machine with the `z`-independent first stage precomputed.
#[derive(Clone, Debug)]
pub struct SingleShotCloner {
    mixed: GaussianState,
    cfg: ClonerConfig,
}

impl SingleShotCloner {
    pub fn new(rho1: &GaussianState, rho2: &GaussianState, cfg: &ClonerConfig) -> Result<Self> {
        Ok(Self {
            mixed: mix_inputs(rho1, rho2, cfg.tau1)?,
            cfg: cfg.clone(),
        })
    }

    /// Two-mode state after the first splitter; mode 1 is the measured arm.
    pub fn mixed_state(&self) -> &GaussianState {
        &self.mixed
    }

    pub fn config(&self) -> &ClonerConfig {
        &self.cfg
    }

    /// Clones conditioned on outcome `z`, and the density `p(z)`.
    pub fn clone_at(&self, z: Complex64) -> Result<(CloneResult, f64)> {
        let (cond, density) = measure_mode(&self.mixed, 1, &self.cfg.meas, z)?;
        let displaced = cond.displace(0, z, self.cfg.gain)?;
        Ok((split_against_ancilla(&displaced, &self.cfg)?, density))
    }
}

/// Clones produced for a single measurement outcome `z`.
pub fn run_single_shot(
    rho1: &GaussianState,
    rho2: &GaussianState,
    cfg: &ClonerConfig,
    z: Complex64,
) -> Result<(CloneResult, f64)> {
    SingleShotCloner::new(rho1, rho2, cfg)?.clone_at(z)
}

/// Single-mode moments fed to [`clone_moments_closed_form`].
#[derive(Clone, Debug, PartialEq)]
pub struct InputMoments {
    pub sigma1: Matrix2<f64>,
    pub sigma2: Matrix2<f64>,
    pub sigma3: Matrix2<f64>,
    pub x1: Vector2<f64>,
    pub x2: Vector2<f64>,
    pub x3: Vector2<f64>,
}

impl InputMoments {
    pub fn from_states(rho1: &GaussianState, rho2: &GaussianState, rho3: &GaussianState) -> Self {
        Self {
            sigma1: rho1.mode_cov(0),
            sigma2: rho2.mode_cov(0),
            sigma3: rho3.mode_cov(0),
            x1: rho1.mode_mean(0),
            x2: rho2.mode_mean(0),
            x3: rho3.mode_mean(0),
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct CloneMoments {
    pub mean1: Vector2<f64>,
    pub mean2: Vector2<f64>,
    pub cov1: Matrix2<f64>,
    pub cov2: Matrix2<f64>,
}

/// Clone moments written directly in terms of the input moments.
///
/// The ancilla entries of `cfg` are ignored in favour of `sigma3`/`x3`.
pub fn clone_moments_closed_form(m: &InputMoments, cfg: &ClonerConfig) -> CloneMoments {
    let (f1, f2, g) = (cfg.f1(), cfg.f2(), cfg.gain);
    let t2 = cfg.tau2;
    let (st2, rt2) = (t2.sqrt(), (1.0 - t2).sqrt());
    let signal = m.x1 * f1 + m.x2 * f2;
    let noise = m.sigma1 * (f1 * f1) + m.sigma2 * (f2 * f2) + cfg.meas.cov() * (g * g);
    CloneMoments {
        mean1: signal * st2 - m.x3 * rt2,
        mean2: signal * rt2 + m.x3 * st2,
        cov1: noise * t2 + m.sigma3 * (1.0 - t2),
        cov2: noise * (1.0 - t2) + m.sigma3 * t2,
    }
}

/// Which input the symmetric machine should copy.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CloneTarget {
    First,
    Second,
}

/// Gain that removes the other input from the clones:
/// `g1 = √((1−τ1)/τ1)`, `g2 = −√(τ1/(1−τ1))`.
pub fn gain_select(target: CloneTarget, tau1: f64) -> Result<f64> {
    check_tau("tau1", tau1)?;
    Ok(match target {
        CloneTarget::First => ((1.0 - tau1) / tau1).sqrt(),
        CloneTarget::Second => -(tau1 / (1.0 - tau1)).sqrt(),
    })
}

/// Corrective π phase shift for the clones of input 2 (`X -> -X`).
pub fn phase_flip(state: &GaussianState) -> GaussianState {
    state.phase_flipped()
}
