use thiserror::Error;

/// Errors produced by the simulation library.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("{name} = {value} is outside the allowed range {allowed}")]
    Range {
        name: &'static str,
        value: f64,
        allowed: &'static str,
    },

    #[error("dimension mismatch: expected {expected}, got {found}")]
    Dimension { expected: usize, found: usize },

    #[error("mode index {index} out of range for a {n_modes}-mode state")]
    Index { index: usize, n_modes: usize },

    #[error("singular matrix in {context} (determinant {det:e})")]
    SingularMatrix { context: &'static str, det: f64 },

    #[error("matrix shape not supported: {0}")]
    Shape(String),

    #[error("unphysical covariance matrix: {0}")]
    Unphysical(String),

    #[error("Fock truncation too coarse: trace deficit {deficit:e} exceeds {bound:e}")]
    Truncation { deficit: f64, bound: f64 },

    #[error("numeric budget insufficient: {0}")]
    Budget(String),

    #[error("cannot parse `{token}`: {reason}")]
    Parse { token: String, reason: String },
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

pub(crate) fn check_range(
    name: &'static str,
    value: f64,
    lo: f64,
    hi: f64,
    allowed: &'static str,
) -> Result<f64> {
    if value.is_finite() && value >= lo && value <= hi {
        Ok(value)
    } else {
        Err(Error::Range {
            name,
            value,
            allowed,
        })
    }
}
