//! Brute-force check of the Gaussian formalism in a truncated number basis.
//!
//! Covers one- and two-mode states with ideal (η = 1) heterodyne detection.
//! Two-mode basis states |n1, n2⟩ sit at index `n1 * cutoff + n2`.

mod measure;
mod ops;
mod pipeline;
mod state;

pub use measure::{
    condition_ket, fock_heterodyne_condition, fock_uhlmann_fidelity, heterodyne_overlaps,
};
pub use ops::{
    expm_antihermitian, fock_beamsplitter, fock_displacement, fock_squeezing, BeamSplitter,
    FockOperator,
};
pub use pipeline::{OracleCloner, OracleClones};
pub use state::{
    certified_cutoff, fock_coherent, fock_squeezed, recommended_cutoff, FockDensityMatrix, FockKet,
    Moments, MAX_CUTOFF, TRUNCATION_BOUND,
};
