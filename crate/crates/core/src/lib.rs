//! Simulation engine for the dynamics of non-Hermitian qubit systems.
//!
//! The crate is organized around the pipeline
//!
//! ```text
//! models  ->  closed / open  ->  metrics
//!    \            |
//!     `--------- linalg (dense complex kernels), ode (adaptive integrator)
//! ```
//!
//! * [`linalg`] — Kronecker products, column-stacking vectorization, matrix
//!   exponential, general (non-normal) eigendecomposition with biorthogonal
//!   left/right eigenvectors, trace norm.
//! * [`models`] — construction and symmetry classification of PT- and
//!   APT-symmetric single- and multi-qubit Hamiltonians.
//! * [`closed`] — trace-renormalized propagation of closed non-Hermitian
//!   systems, spectral decomposition, dynamical-regime classification.
//! * [`open`] — dephasing dissipators, vectorized Liouvillian, Liouvillian
//!   spectra and gaps, strong-dephasing freezing diagnostics.
//! * [`metrics`] — trace distance, two-qubit concurrence, and extraction of
//!   oscillation periods / relaxation times from time series.
//!
//! All quantities are in model units (ħ = 1, couplings of order one).

pub mod closed;
pub mod error;
pub mod linalg;
pub mod metrics;
pub mod models;
pub mod ode;
pub mod open;

pub use error::{Error, Result};
