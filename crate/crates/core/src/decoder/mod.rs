//! Coarse-grained parity decoding on the square partition, threshold
//! estimation, and the critical-density solve.

pub mod coarse;
pub mod critical;
pub mod matching;
pub mod threshold;

pub use coarse::{
    logical_failure, sample_edge_flips, syndrome_from_flips, CoarseSyndrome, CoarseTorus, EdgeSet,
    SquarePartition,
};
pub use critical::{critical_density_curve, solve_lambda_c, CriticalDensityCurve, CriticalPoint, CriticalSide};
pub use matching::match_syndrome;
pub use threshold::{estimate_logical_rate, estimate_threshold, Crossing, RatePoint, ThresholdEstimate};

use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum DecoderError {
    #[error("flip probability must lie in [0, 1], got {0}")]
    InvalidProbability(f64),
    #[error("coarse torus needs at least 2 squares per side, got {0}")]
    CoarseTooSmall(usize),
    #[error("square side {side} does not divide L = {size}")]
    SideDoesNotDivide { size: usize, side: usize },
    #[error("edge sets live on different coarse tori")]
    TorusMismatch,
    #[error("odd number of defects ({0})")]
    OddDefectCount(usize),
    #[error("flips and correction leave a nontrivial syndrome")]
    ResidualSyndrome,
    #[error("need at least {min} trials, got {0}", min = threshold::MIN_TRIALS)]
    TooFewTrials(usize),
    #[error("need at least two distinct sizes, got {0}")]
    TooFewSizes(usize),
    #[error("failure-rate curves do not cross inside the grid")]
    NoCrossing,
    #[error("localization length must be positive and finite, got {0}")]
    InvalidLength(f64),
    #[error("threshold must lie in (0, 1), got {0}")]
    InvalidThreshold(f64),
    #[error("l = {length} is always correctable at p_c = {p_c}: no critical side exists")]
    AlwaysCorrectable { length: f64, p_c: f64 },
}
