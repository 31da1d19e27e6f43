//! Phase-only compressive sensing.
//!
//! Sparse complex signals are observed through the phases of complex
//! Gaussian measurements, `z = csign(Φx₀) ⊙ e^{iξ}`, and their direction is
//! recovered by projected back-projection, `x̂ = H_s(Φᴴz)`. The crate also
//! carries tooling for the (ℓ1,ℓ2) restricted isometry property that
//! controls the error of that estimate, and a seeded Monte Carlo harness for
//! error-versus-measurements and error-versus-noise sweeps.

pub mod error;
pub mod experiment;
pub mod linalg;
pub mod output;
pub mod recon;
pub mod rip;
pub mod rng;
pub mod sensing;

pub use error::{Error, Result};
pub use linalg::{ComplexMat, ComplexVec, NormOrder, SupportSet};
pub use num_complex::Complex64;
pub use rng::RngStream;
pub use sensing::{Scheme, SensingMatrix, SparseSignal};
