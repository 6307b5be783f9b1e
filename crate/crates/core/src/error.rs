//! Crate-wide error type.

use num_complex::Complex64;
use thiserror::Error;

/// Convenience alias used throughout the crate.
pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, Error)]
pub enum Error {
    #[error("matrix is not square ({rows}x{cols})")]
    NotSquare { rows: usize, cols: usize },

    #[error("matrix contains non-finite entries")]
    NonFinite,

    #[error("vector length {len} is not a perfect square")]
    BadVectorLength { len: usize },

    #[error("matrix exponential overflowed the floating-point range")]
    Overflow,

    #[error("eigenvalue iteration failed to converge after {iterations} iterations")]
    NonConvergence { iterations: usize },

    #[error("matrix is defective (exceptional point); offending eigenvalue cluster {cluster:?}")]
    Defective { cluster: Vec<Complex64> },

    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("tensor sum requires single-qubit factors, found n_qubits = {n_qubits}")]
    NotSingleQubit { n_qubits: usize },

    #[error("tensor sum of an empty list")]
    EmptyTensorSum,

    #[error("invalid density matrix: {0}")]
    InvalidDensity(String),

    #[error("state norm vanished (|trace| < 1e-30) at t = {t}")]
    VanishingNorm { t: f64 },

    #[error("adaptive step size underflowed at t = {t}")]
    StepSizeUnderflow { t: f64 },

    #[error("dynamical regime is ambiguous: |dE| and dGamma both below tolerance")]
    AmbiguousRegime,

    #[error("Liouvillian gap is zero; no exponential relaxation scale")]
    ZeroGap,

    #[error("steady state is not unique: top two Liouvillian eigenvalues coincide")]
    NonUniqueSteadyState,

    #[error("need at least 3 interior maxima to extract a period, found {found}")]
    InsufficientOscillations { found: usize },

    #[error("trajectory does not decay (final value >= 0.5 * initial value)")]
    NoDecay,

    #[error("fit window too short: {samples} samples (need >= 10)")]
    WindowTooShort { samples: usize },

    #[error(
        "period extraction disagrees with spectral estimate: maxima spacing {quadratic}, \
         dominant frequency gives {spectral}"
    )]
    PeriodSpectrumMismatch { quadratic: f64, spectral: f64 },

    #[error("operation requires a two-qubit state, found n_qubits = {n_qubits}")]
    NotTwoQubits { n_qubits: usize },
}
