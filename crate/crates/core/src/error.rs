//! Error type shared by all simulator modules.

/// Convenience alias used throughout the crate.
pub type Result<T> = std::result::Result<T, Error>;

/// Domain and precondition failures.
#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum Error {
    #[error("Fock cutoff must retain at least one photon, got n_max = {0}")]
    CutoffTooSmall(usize),

    #[error("photon counts ({n_c}, {n_d}) exceed the total-number cutoff {n_max}")]
    PhotonCountOutOfRange {
        n_c: usize,
        n_d: usize,
        n_max: usize,
    },

    #[error("amplitude vector has length {got}, expected {expected} for this cutoff")]
    AmplitudeLengthMismatch { got: usize, expected: usize },

    #[error("state cutoff n_max = {state} does not match operator cutoff n_max = {operator}")]
    CutoffMismatch { state: usize, operator: usize },

    #[error("beam-splitter angle must be finite, got {0}")]
    NonFiniteAngle(f64),

    #[error("mean thermal photon number must be non-negative and finite, got {0}")]
    InvalidMeanPhotonNumber(f64),

    #[error("probability {value} at photon number {index} is outside [0, 1]")]
    InvalidProbability { index: usize, value: f64 },

    #[error("array must contain at least one beam splitter")]
    EmptyArray,

    #[error("ensemble must contain at least one sample")]
    EmptyEnsemble,

    #[error("standard deviation must be non-negative and finite, got {0}")]
    InvalidSigma(f64),

    #[error("absorption coefficient must be non-negative and finite, got {0}")]
    InvalidGamma(f64),

    #[error(
        "per-splitter jump probability {delta_p} exceeds 1 \
         (gamma = {gamma}, theta = {theta})"
    )]
    JumpProbabilityTooLarge {
        gamma: f64,
        theta: f64,
        delta_p: f64,
    },

    #[error("critical splitter count must be at least 2, got {0}")]
    CriticalCountBelowTwo(f64),

    #[error("gamma must be positive and finite, got {0}")]
    NonPositiveGamma(f64),

    #[error(
        "gamma = {gamma} exceeds {limit}, the largest absorption solvable \
         with at least 2 beam splitters"
    )]
    GammaAboveSolvableRange { gamma: f64, limit: f64 },

    #[error("cannot merge statistics over {left} slots with statistics over {right} slots")]
    StatsShapeMismatch { left: usize, right: usize },
}
