//! Rényi-α entanglement of few-qubit states and a Monte Carlo search for
//! violations of strong superadditivity and second-order monogamy.
//!
//! - [`linalg`]: pure states, density matrices, partial traces and spectra.
//! - [`measures`]: concurrence, Rényi entropies and inequality residuals.
//! - [`sampler`]: seedable Haar states and δ-ball perturbations.
//! - [`search`]: minimization runs, region walks, α-continuation, Haar scans.
//! - [`store`]: versioned JSON run archives.
//! - [`verify`]: randomized checks of the inequalities that do hold.

// `!(x > 0.0)` style guards are used on purpose: they also reject NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod error;
pub mod linalg;
pub mod measures;
pub mod sampler;
pub mod search;
pub mod states;
pub mod store;
pub mod verify;

pub use error::{Error, Result};
pub use linalg::{DensityMatrix, PureState, SubsystemMask};
pub use measures::{Alpha, PairingLayout, ResidualReport};
pub use sampler::RngSeed;
pub use search::{ContinuationSchedule, Objective, RunRecord, SearchConfig};
