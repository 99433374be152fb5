pub mod cli;
pub mod cloner;
pub mod comm;
pub mod error;
pub mod fidelity;
pub mod fock;
pub mod gaussian;
pub mod linalg;
pub mod quadrature;
pub mod sampling;

pub use error::{Error, Result};
