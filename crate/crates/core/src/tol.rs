//! Centralized numeric tolerances.
//!
//! Every threshold used by constructors, invariant checks, and the acceptance
//! suite is named here, with its basis, so there are no ad-hoc magic numbers
//! in the implementation.

/// Elementwise Hermiticity check on input matrices. Inputs are expected to be
/// exact up to f64 entry rounding.
pub const HERMITICITY: f64 = 1e-12;

/// Max |V†V − I| entry after an eigendecomposition.
pub const ORTHONORMALITY: f64 = 1e-10;

/// Max |V diag(λ) V† − H| entry, relative to 1 + max|λ|.
pub const RECONSTRUCTION: f64 = 1e-9;

/// Trace-one check at density-operator construction.
pub const DENSITY_TRACE: f64 = 1e-10;

/// Eigenvalue window for density operators: λ ∈ [−window, 1 + window].
pub const DENSITY_EIGENVALUE: f64 = 1e-10;

/// Looser trace check applied to raw occupation vectors fed straight into
/// the entropy sum (they have not been through construction-time validation).
pub const OCCUPATION_TRACE: f64 = 1e-8;

/// Negative-occupation rejection threshold for raw occupation vectors.
pub const OCCUPATION_NEGATIVE: f64 = 1e-10;

/// Occupations below this are treated as exact zeros in entropy sums
/// (0·ln 0 ≡ 0 by continuity).
pub const OCCUPATION_CLAMP: f64 = 1e-300;

/// Gibbs identity S/k = βE + ln Z on constructed canonical states.
pub const GIBBS_IDENTITY: f64 = 1e-10;

/// Canonical-energy inversion: |E(β) − target| < BETA_RESIDUAL_REL · spread.
pub const BETA_RESIDUAL_REL: f64 = 1e-9;

/// Largest exponent magnitude fed to exp() in canonical sums; the max-shift
/// trick keeps all exponents in [−EXP_GUARD, 0].
pub const EXP_GUARD: f64 = 700.0;

/// Default relative probe step for finite-difference derivatives of the
/// fundamental relation.
pub const FD_REL_STEP: f64 = 1e-4;

/// Agreement between finite-difference 1/T and the directly fitted β.
pub const DERIVATIVE_MATCH_REL: f64 = 1e-5;

/// Agreement between finite-difference box pressure and the virial form
/// (2/3)·E/V implied by the V^(−2/3) level scaling.
pub const PRESSURE_MATCH_REL: f64 = 1e-4;

/// Max log-occupation residual of the canonical product identity.
pub const LOG_OCCUPATION_RESIDUAL: f64 = 1e-10;

/// |1/T_A − 1/T_B| below which two states count as mutually equilibrated.
pub const FLOW_NONE: f64 = 1e-9;

/// Relative volume mismatch allowed between "equal volume" shapes.
pub const VOLUME_REL: f64 = 1e-12;

/// Neglected partition-function mass (tail / Z) allowed in truncated box
/// canonical states.
pub const TAIL_MASS: f64 = 1e-8;

/// Closed-loop occupation return and per-sample occupation normalization in
/// reallocation traces.
pub const TRACE_OCCUPATION: f64 = 1e-10;

/// Entropy may not drop under dephasing by more than this slack.
pub const DEPHASING_SLACK: f64 = 1e-12;

/// Entropy invariance under unitary conjugation.
pub const UNITARY_INVARIANCE: f64 = 1e-9;

/// Entropy additivity defect on product states.
pub const ADDITIVITY: f64 = 1e-10;

/// Relative deviation allowed between the semiclassical box entropy and the
/// classical single-particle-in-box relation, in the high-energy regime. The
/// comparison is asymptotic, hence the loose bound.
pub const IDEAL_GAS_REDUCTION_REL: f64 = 0.05;

/// Concavity slack: second differences of S(E) on canonical grids must not
/// exceed this.
pub const CONCAVITY_SLACK: f64 = 1e-8;
