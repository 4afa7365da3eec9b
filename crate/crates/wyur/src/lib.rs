//! Wigner-Yanase skew information of quantum channels, and lower bounds on
//! the product and sum of two channel uncertainties.
//!
//! The crate is organized in layers:
//!
//! * [`matcore`] is a small dense complex-matrix kernel with a Hermitian
//!   eigensolver, positive-semidefinite square roots, vectorization, and the
//!   rearrangement helpers the bounds are built from.
//! * [`quantum`] provides validated density matrices and Kraus channels,
//!   the builtin example family (a Bloch-ring state, phase damping, bit
//!   flip, two fixed rotations), and seeded random instance generators.
//! * [`skew`] computes tilde matrices `[sqrt(rho), K]`, skew information of
//!   operators and channels, and the associated correlation measure.
//! * [`bounds`] evaluates all lower bounds and aggregates them into a
//!   [`bounds::BoundReport`].
//! * [`experiments`] runs parameter sweeps and randomized verification
//!   campaigns, and writes CSV output.
//! * [`cli`] is the command-line front end (`bounds`, `figure`, `verify`,
//!   `sweep`).
//!
//! All numerics are plain `f64`; dimensions are desk scale (d <= 8).

pub mod bounds;
pub mod cli;
pub mod experiments;
pub mod matcore;
pub mod quantum;
pub mod skew;

use thiserror::Error;

/// Unified error type for every fallible operation in the crate.
#[derive(Debug, Error)]
pub enum Error {
    #[error("matrix is not Hermitian (max |A - A^H| entry = {residual:.3e})")]
    NotHermitian { residual: f64 },
    #[error("eigensolver did not converge within {sweeps} sweeps")]
    NoConvergence { sweeps: usize },
    #[error("eigenvalue {value:.6e} is below the allowed negativity tolerance")]
    NegativeEigenvalue { value: f64 },
    #[error("trace is {trace} but a density matrix must have trace 1")]
    TraceNotOne { trace: num_complex::Complex64 },
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("permutation is not a bijection on 0..{len}")]
    InvalidPermutation { len: usize },
    #[error("Bloch vector norm {norm} exceeds 1")]
    BlochNormExceeded { norm: f64 },
    #[error("parameter `{name}` out of range: {detail}")]
    ParamOutOfRange { name: &'static str, detail: String },
    #[error("{n} Kraus operators exceed the exhaustive search cap of {max}")]
    TooManyKraus { n: usize, max: usize },
    #[error("mixing matrix is not unitary (residual {residual:.3e})")]
    NotUnitaryMix { residual: f64 },
    #[error("operator is not unitary (residual {residual:.3e})")]
    NotUnitary { residual: f64 },
    #[error("exhaustive permutation search is only supported for 2x2 operators")]
    TooLarge,
    #[error("parse error: {0}")]
    Parse(String),
    #[error("I/O error: {0}")]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;

/// Formats a float with 12 significant digits in scientific notation, the
/// fixed width used by every CSV and report emitter in the crate.
pub(crate) fn fmt12(x: f64) -> String {
    format!("{x:.11e}")
}
