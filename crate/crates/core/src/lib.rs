//! Exact computations for finite-dimensional braided vector spaces.

pub mod braided;
pub mod cli;
pub mod enveloping;
pub mod error;
pub mod linalg;
pub mod pareigis;
pub mod par;
pub mod scalar;
pub mod tensor;
pub mod tower;

pub use error::{Error, Result};
