//! Multi-threaded null calibration.
//!
//! Every trial seeds its own generator from `(seed, index)`, so the worker
//! count and scheduling cannot change the result: statistics are collected
//! back in trial-index order before summarising.

use chi_audit_core::invariance::{decide, null_statistic};
use chi_audit_core::{ContingencyTable, Error, InvariantDecision, InvariantStatKind, NullCalibration, NullModel};
use rayon::prelude::*;

pub fn calibrate_null_par(
    kind: InvariantStatKind,
    model: &NullModel,
    alpha: f64,
    trials: u64,
    seed: u64,
) -> Result<NullCalibration, Error> {
    if trials == 0 {
        return Err(Error::NoTrials);
    }
    let statistics =
        (0..trials).into_par_iter().map(|i| null_statistic(kind, model, seed, i)).collect::<Result<Vec<_>, _>>()?;
    NullCalibration::from_statistics(kind, model, alpha, seed, statistics)
}

pub fn invariant_test_par(
    table: &ContingencyTable,
    kind: InvariantStatKind,
    alpha: f64,
    trials: u64,
    seed: u64,
) -> Result<InvariantDecision, Error> {
    let model = NullModel::from_table(table)?;
    let calibration = calibrate_null_par(kind, &model, alpha, trials, seed)?;
    Ok(decide(table, calibration))
}
