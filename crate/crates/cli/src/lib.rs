//! `chi-audit`: command-line front end for [`chi_audit_core`].
//!
//! Reads contingency tables from CSV, runs the Pearson test, the scaling
//! audit or a calibrated invariant test, and reports as text or JSON.

pub mod cli;
pub mod datasets;
mod error;
pub mod input;
pub mod parallel;
pub mod report;

pub use error::{CliError, ParseError};
