//! Scale sensitivity of the Pearson statistic and scale-invariant
//! alternatives.
//!
//! Pearson's statistic is homogeneous of degree one in the table entries, so
//! the decision on `cA` flips at the critical scale `c* = χ²_crit / χ²(A)`.
//! [`audit_scaling`] measures this. The statistics in [`InvariantStatKind`] are
//! homogeneous of degree zero; their null distributions have no closed form
//! here and are calibrated by simulation in [`calibrate_null`].

mod audit;
mod calibration;
mod rng;
mod sampling;
mod statistics;

pub use audit::{audit_scaling, FlipCheck, ScaleDecision, ScalingAudit, PROPORTIONAL_REL_TOL};
pub use calibration::{
    calibrate_null, decide, invariant_test, null_statistic, InvariantDecision, NullCalibration, QuantilePoint,
    MIN_RECOMMENDED_TRIALS, QUANTILE_LEVELS,
};
pub use rng::Xorshift64Star;
pub use sampling::{sample_binomial, sample_null_table, NullModel, MAX_RESAMPLES};
pub use statistics::{invariant_statistic, InvariantStatKind};
