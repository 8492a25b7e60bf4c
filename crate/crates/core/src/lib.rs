//! Pearson's chi-square test on contingency tables, together with an audit of
//! its behaviour under rescaling of the table (`χ²(cA) = c·χ²(A)`) and a family
//! of scale-invariant statistics whose null distributions are calibrated by
//! Monte Carlo simulation.
//!
//! The crate is `no_std` and needs only `alloc`. File formats, the CLI and
//! parallel calibration live in the `chi-audit` crate.
//!
//! ```
//! use chi_audit_core::{homogeneity_test, ContingencyTable};
//!
//! let table = ContingencyTable::from_rows(&[[1.0, 1.0], [1.0, 11.0]]).unwrap();
//! let result = homogeneity_test(&table, 0.05).unwrap();
//! assert!((result.statistic - 175.0 / 72.0).abs() < 1e-12);
//! assert!(!result.reject_h0);
//! ```

#![no_std]

extern crate alloc;
#[cfg(test)]
extern crate std;

pub mod distributions;
mod error;
pub mod invariance;
pub mod pearson;
pub mod tables;

pub use distributions::{ln_gamma, reg_lower_gamma, reg_upper_gamma, ChiSquare};
pub use error::{Axis, Error, Result};
pub use invariance::{
    audit_scaling, calibrate_null, invariant_statistic, invariant_test, sample_null_table, InvariantDecision,
    InvariantStatKind, NullCalibration, NullModel, ScalingAudit, Xorshift64Star,
};
pub use pearson::{
    check_assumptions, homogeneity_test, independence_from_joint_frequencies, pearson_statistic, AssumptionReport,
    PearsonResult,
};
pub use tables::{ContingencyTable, ExpectedMatrix, Margins, Matrix};
