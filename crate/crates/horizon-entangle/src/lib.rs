//! Entanglement degradation near a Schwarzschild horizon.
//!
//! This crate computes how the Hawking effect degrades the entanglement of a
//! bipartite field state shared between a free-falling observer (Alice) and a
//! static observer hovering at a small distance from the event horizon (Rob),
//! for both massless scalar and Dirac field modes.
//!
//! Near the horizon the static observer's modes are related to the
//! free-faller's modes by a two-mode squeezing transformation whose single
//! parameter is fixed by the geometry:
//!
//! ```text
//! tanh q_s = tan q_d = exp(-(Ω/2) √(1 - 1/R₀))
//! ```
//!
//! where `Ω = 2π ω/κ` is the mode frequency in units of the surface gravity
//! and `R₀ = r₀/R_S` is Rob's position in Schwarzschild radii. Every
//! Schwarzschild black hole behaves identically in these units.
//!
//! The pipeline is:
//!
//! 1. [`geometry`] — convert a physical scenario (mass, distance to the
//!    horizon, mode frequency; SI units) into the dimensionless squeezing
//!    parameters, with diagnostics for the validity of the near-horizon
//!    Rindler approximation.
//! 2. [`states`] — build the Hartle-Hawking vacuum and one-particle states in
//!    the Boulware ⊗ anti-Boulware basis, and the maximally entangled
//!    Alice–Rob states, with certified truncation for the scalar field.
//! 3. [`fock`] — finite-dimensional tensor-product arithmetic: density
//!    matrices, partial trace, partial transpose over Alice ⊗ Rob ⊗ AntiRob.
//! 4. [`measures`] — negativity, von Neumann entropy, and mutual information
//!    for the three bipartitions AR, AR̄, RR̄, with a generic eigensolver
//!    path and block-structured fast paths cross-validated against it.
//! 5. [`sweeps`] — deterministic parameter-sweep engine with conservation-law
//!    verification and CSV output.
//! 6. [`cli`] — command-line front end (see the `horizon-entangle` binary).
//!
//! Runnable walkthroughs for each capability live in `examples/`.

pub mod cli;
pub mod constants;
pub mod fock;
pub mod geometry;
pub mod measures;
pub mod states;
pub mod sweeps;

use thiserror::Error;

/// Crate-wide error type.
#[derive(Debug, Error)]
pub enum Error {
    /// An input lies outside the physical domain (non-positive mass, observer
    /// at or inside the horizon, ...).
    #[error("domain error: {0}")]
    Domain(String),

    /// An API was called with structurally invalid arguments (index out of
    /// range, empty keep-set, non-Hermitian input, ...).
    #[error("usage error: {0}")]
    Usage(String),

    /// The requested point sits on the horizon limit where the scalar Fock
    /// series does not truncate.
    #[error("horizon limit: {0}")]
    HorizonLimit(String),

    /// No truncation below the hard cap meets the requested tolerance.
    #[error(
        "truncation infeasible: tanh q_s = {tanh_qs} needs n_max > {cap} \
         to reach tolerance {tolerance:e}"
    )]
    TruncationInfeasible {
        tanh_qs: f64,
        tolerance: f64,
        cap: usize,
    },

    /// A matrix that should be a physical state is not (negative eigenvalues
    /// beyond tolerance, wildly wrong trace, ...).
    #[error("invalid state: {0}")]
    InvalidState(String),

    /// Two routes that must agree disagreed beyond tolerance.
    #[error("internal consistency: {0}")]
    InternalConsistency(String),

    /// Config file could not be parsed or contained invalid values.
    #[error("config error: {0}")]
    Config(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
