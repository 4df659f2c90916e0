//! covmur: covariantisation of finite-outcome quantum observables and exact
//! measurement-uncertainty regions.

pub mod dilation;
pub mod error;
pub mod fourier;
pub mod fuzzing;
pub mod io;
pub mod linalg;
pub mod metrics;
pub mod observables;
pub mod pauli;
pub mod sample;
pub mod symmetry;
pub mod tol;
pub mod verify;

pub use error::{CovmurError, Result};
