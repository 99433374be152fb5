//! Moment-representation calculus for multimode Gaussian states.
//!
//! Conventions: hbar = 1, quadratures `x = (a + a†)/√2`, `y = (a − a†)/(i√2)`,
//! vacuum covariance `I/2`, phase-space ordering `(x1, y1, x2, y2, ...)`.
//! Linear optics acts on moments as `X -> Sᵀ X` and `σ -> Sᵀ σ S`.

mod measurement;
mod state;
mod symplectic;

pub use measurement::{
    average_feedforward, measure_mode, outcome_density, sample_outcome, GaussianMeasurement,
};
pub use state::{CovMatrix, GaussianState, QuadVector, MAX_SQUEEZING, PHYSICAL_TOL};
pub use symplectic::{bs_symplectic, SymplecticOp, SYMPLECTIC_TOL};
