//! Numerical estimation of the entanglement of purification.
//!
//! The crate has three layers:
//!
//! * Quantum-state primitives on small dense systems: complex matrices,
//!   a Hermitian eigensolver, partial traces, von Neumann entropy, Bell and
//!   Werner states, purifications ([`matrix`], [`linalg`], [`state`],
//!   [`sampling`]).
//! * Multi-start local descent over purifying isometries, producing upper
//!   estimates of the entanglement of purification together with convergence
//!   metadata ([`eop`]).
//! * Bound combinators for the regularized quantity: ensemble decompositions
//!   with Holevo-information overhead, the delta functional, and a midpoint
//!   convexity-violation detector ([`bounds`]).
//!
//! All entropies are base 2 (ebits). Everything is a pure function over
//! immutable values; the crate is `no_std` (with `alloc`) and all floating
//! point goes through `libm`, so results are reproducible across targets.

#![cfg_attr(not(test), no_std)]
#![forbid(unsafe_code)]

extern crate alloc;

pub mod bounds;
pub mod eop;
pub mod linalg;
pub mod matrix;
pub mod sampling;
pub mod state;

mod math;

pub use bounds::{
    convexity_violation, delta, theorem1_upper_bound, werner_benchmark, BenchmarkKind,
    BenchmarkRow, BoundComponent, ConvexityReport, DeltaGrid, DeltaPoint, EnsembleDecomposition,
    Provenance, Theorem1Bound,
};
pub use eop::{
    apply_isometry, eop_estimate, eop_product_estimate, eop_pure, eop_pure_from_density,
    euclidean_gradient, local_minimize, objective, project_tangent, retract, trivial_embedding,
    EopCertificate, EopSearch, IsometryPoint, LineSearchParams, MinimizeOutcome,
    OptimizerOptions, Side, StartKind,
};
pub use linalg::hermitian_eig;
pub use matrix::{kron, ComplexMatrix, C64};
pub use state::{
    bell_state, entropy, holevo_chi, partial_trace, standard_purification, trace_distance,
    werner, DensityOperator, Ensemble, PureState, WernerParams,
};

use alloc::string::String;
use core::fmt;

/// Error type shared by the whole crate.
#[derive(Debug, Clone, PartialEq)]
pub enum Error {
    /// Matrix or subsystem shapes do not line up.
    DimensionMismatch(String),
    /// A subsystem index is out of range, duplicated, or the kept set is empty.
    InvalidIndex(String),
    /// Input to the eigensolver deviates from Hermitian beyond tolerance.
    NotHermitian { max_deviation: f64 },
    /// A state failed a density-operator invariant (trace, positivity, hermiticity).
    InvalidDensity(String),
    /// Ensemble weights are not a probability vector, or components disagree.
    InvalidEnsemble(String),
    /// A scalar parameter is outside its admissible range.
    InvalidParameter(String),
    /// Input expected to be pure has purity tr(rho^2) below threshold.
    NotPure { purity: f64 },
    /// The matrix to re-orthonormalize during retraction is rank deficient;
    /// the step was too large.
    RankDeficientRetraction,
    /// Optimizer options violate their invariants.
    InvalidOptions(String),
    /// The convexity probe found no equally spaced triple in the grid.
    NoEquallySpacedTriple,
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::DimensionMismatch(msg) => write!(f, "dimension mismatch: {msg}"),
            Error::InvalidIndex(msg) => write!(f, "invalid subsystem index: {msg}"),
            Error::NotHermitian { max_deviation } => {
                write!(f, "matrix is not Hermitian (max deviation {max_deviation:.3e})")
            }
            Error::InvalidDensity(msg) => write!(f, "invalid density operator: {msg}"),
            Error::InvalidEnsemble(msg) => write!(f, "invalid ensemble: {msg}"),
            Error::InvalidParameter(msg) => write!(f, "invalid parameter: {msg}"),
            Error::NotPure { purity } => {
                write!(f, "state is not pure (tr rho^2 = {purity:.12})")
            }
            Error::RankDeficientRetraction => {
                write!(f, "rank-deficient retraction: step too large")
            }
            Error::InvalidOptions(msg) => write!(f, "invalid optimizer options: {msg}"),
            Error::NoEquallySpacedTriple => {
                write!(f, "grid contains no equally spaced triple of points")
            }
        }
    }
}

impl core::error::Error for Error {}

pub type Result<T> = core::result::Result<T, Error>;

// Validation tolerances. Double-precision eigensolver noise sits around
// 1e-14 on the dimensions handled here, so 1e-12 decides ranks and 1e-10
// accepts states produced by longer numerical pipelines.
/// Max entrywise deviation from Hermitian accepted by state constructors.
pub const HERMITIAN_TOL: f64 = 1e-10;
/// Trace-one tolerance for density operators.
pub const TRACE_TOL: f64 = 1e-10;
/// Most negative eigenvalue accepted by the positive-semidefinite check.
pub const PSD_TOL: f64 = 1e-10;
/// Squared-norm tolerance for pure states.
pub const NORM_TOL: f64 = 1e-12;
/// Eigenvalues at or below this count as zero for rank decisions.
pub const RANK_TOL: f64 = 1e-12;
/// Probability weights must sum to one within this tolerance.
pub const WEIGHT_TOL: f64 = 1e-12;
/// Max entrywise deviation from V^dagger V = 1 accepted for isometries.
pub const ISOMETRY_TOL: f64 = 1e-10;
