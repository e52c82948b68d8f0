use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

/// Validation and computation failures. Every variant names the violated
/// precondition so batch front ends can report it verbatim.
#[derive(Debug, Clone, Error)]
pub enum Error {
    #[error("matrix is not Hermitian: max asymmetry {max_asymmetry:.3e} exceeds {tolerance:.1e}")]
    NotHermitian { max_asymmetry: f64, tolerance: f64 },

    #[error("dimension mismatch: {left} vs {right}")]
    DimensionMismatch { left: usize, right: usize },

    #[error("scalar function undefined at eigenvalue {eigenvalue} (index {index}): f produced {value}")]
    UndefinedAtEigenvalue {
        index: usize,
        eigenvalue: f64,
        value: f64,
    },

    #[error("invalid density operator: {reason}")]
    InvalidDensity { reason: String },

    #[error("negative temperature requires upper energy limit: beta = {beta} on a spectrum not flagged complete")]
    NegativeBetaUnbounded { beta: f64 },

    #[error("target energy {target} outside achievable range ({low:.6e}, {high:.6e})")]
    EnergyOutOfRange { target: f64, low: f64, high: f64 },

    #[error("cutoff {cutoff} lies below the ground level {ground}")]
    CutoffBelowGround { cutoff: f64, ground: f64 },

    #[error("{name} must be positive, got {value}")]
    NonPositive { name: &'static str, value: f64 },

    #[error("finite-difference well needs at least 3 grid points, got {grid_points}")]
    GridTooSmall { grid_points: usize },

    #[error("potential length {found} does not match grid_points {expected}")]
    PotentialLengthMismatch { expected: usize, found: usize },

    #[error("spin system needs gaps.len() + 1 == num_levels: {num_levels} levels vs {gaps} gaps")]
    SpinLevelMismatch { num_levels: usize, gaps: usize },

    #[error("composite dimension {dim} exceeds the dense-matrix cap {cap}; compose level lists instead")]
    CompositeTooLarge { dim: usize, cap: usize },

    #[error("occupation p[{index}] = {value} is zero; log-occupation relation undefined for pair ({i}, {j})")]
    ZeroOccupation {
        index: usize,
        value: f64,
        i: usize,
        j: usize,
    },

    #[error("volumes differ: {left} vs {right} (relative gap {relative:.3e} exceeds {tolerance:.1e})")]
    UnequalVolumes {
        left: f64,
        right: f64,
        relative: f64,
        tolerance: f64,
    },

    #[error("neglected tail mass {tail_fraction:.3e} exceeds {limit:.1e}; increase the spectrum cutoff")]
    TailBoundExceeded { tail_fraction: f64, limit: f64 },

    #[error("trajectory invalid: {reason}")]
    InvalidTrajectory { reason: String },

    #[error("constraint infeasible at trajectory sample {index} (t = {time}): {reason}")]
    InfeasibleSample {
        index: usize,
        time: f64,
        reason: String,
    },

    #[error("basis columns are not orthonormal: max defect {defect:.3e} exceeds {tolerance:.1e}")]
    NonOrthonormalBasis { defect: f64, tolerance: f64 },

    #[error("empty level list")]
    EmptySpectrum,

    #[error("{0}")]
    Invalid(String),
}
