//! Monte Carlo calibration of the null distribution of an invariant
//! statistic, and the calibrated test built on it.

use alloc::vec::Vec;

use super::rng::Xorshift64Star;
use super::sampling::{sample_null_table, NullModel};
use super::statistics::{invariant_statistic, InvariantStatKind};
use crate::error::{Error, Result};
use crate::pearson::check_alpha;
use crate::tables::ContingencyTable;

/// Below this many trials a calibration is flagged as unreliable.
pub const MIN_RECOMMENDED_TRIALS: u64 = 1000;

/// Levels always reported in [`NullCalibration::empirical_quantiles`], in
/// addition to `1 − α`.
pub const QUANTILE_LEVELS: [f64; 4] = [0.5, 0.9, 0.95, 0.99];

#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct QuantilePoint {
    pub level: f64,
    pub value: f64,
}

/// Empirical null distribution of an invariant statistic.
///
/// The design is always the homogeneity one: multinomial rows with fixed
/// totals and shared probabilities, recorded in `row_totals` and
/// `pooled_probs`.
#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct NullCalibration {
    pub kind: InvariantStatKind,
    pub row_totals: Vec<u64>,
    pub pooled_probs: Vec<f64>,
    pub trials: u64,
    pub seed: u64,
    pub alpha: f64,
    /// Nondecreasing in level.
    pub empirical_quantiles: Vec<QuantilePoint>,
    pub critical_value_at_alpha: f64,
    pub monte_carlo_se: f64,
    pub too_few_trials: bool,
}

/// Statistic of the null table drawn for trial `index`. Trials are
/// independent, so they can be evaluated in any order.
pub fn null_statistic(kind: InvariantStatKind, model: &NullModel, seed: u64, index: u64) -> Result<f64> {
    let mut rng = Xorshift64Star::for_trial(seed, index);
    let table = sample_null_table(model, &mut rng)?;
    Ok(invariant_statistic(&table, kind))
}

/// 1-based rank of the order statistic used as the `level` quantile.
fn order_rank(level: f64, n: usize) -> usize {
    let raw = libm::ceil(level * n as f64 - 1e-9);
    (raw as usize).clamp(1, n)
}

impl NullCalibration {
    /// Summarises null statistics given in trial-index order.
    pub fn from_statistics(
        kind: InvariantStatKind,
        model: &NullModel,
        alpha: f64,
        seed: u64,
        statistics: Vec<f64>,
    ) -> Result<Self> {
        check_alpha(alpha)?;
        if statistics.is_empty() {
            return Err(Error::NoTrials);
        }
        let mut sorted = statistics;
        // stable: equal values stay in trial order
        sorted.sort_by(f64::total_cmp);
        let n = sorted.len();
        let at_rank = |rank: usize| sorted[rank - 1];

        let level = 1.0 - alpha;
        let rank = order_rank(level, n);
        let critical_value_at_alpha = at_rank(rank);

        // The rank of the true quantile among n draws is Binomial(n, level);
        // bracket one standard deviation either side.
        let spread = libm::sqrt(n as f64 * level * alpha);
        let lo = (libm::floor(rank as f64 - spread) as usize).clamp(1, n);
        let hi = (libm::ceil(rank as f64 + spread) as usize).clamp(1, n);
        let monte_carlo_se = 0.5 * (at_rank(hi) - at_rank(lo));

        let mut levels: Vec<f64> = QUANTILE_LEVELS.to_vec();
        if levels.iter().all(|l| libm::fabs(l - level) > 1e-12) {
            levels.push(level);
            levels.sort_by(f64::total_cmp);
        }
        let empirical_quantiles =
            levels.into_iter().map(|l| QuantilePoint { level: l, value: at_rank(order_rank(l, n)) }).collect();

        Ok(NullCalibration {
            kind,
            row_totals: model.row_totals.clone(),
            pooled_probs: model.pooled_probs.clone(),
            trials: n as u64,
            seed,
            alpha,
            empirical_quantiles,
            critical_value_at_alpha,
            monte_carlo_se,
            too_few_trials: (n as u64) < MIN_RECOMMENDED_TRIALS,
        })
    }
}

/// Sequential calibration over `trials` null tables.
pub fn calibrate_null(
    kind: InvariantStatKind,
    model: &NullModel,
    alpha: f64,
    trials: u64,
    seed: u64,
) -> Result<NullCalibration> {
    check_alpha(alpha)?;
    if trials == 0 {
        return Err(Error::NoTrials);
    }
    let statistics = (0..trials).map(|i| null_statistic(kind, model, seed, i)).collect::<Result<Vec<_>>>()?;
    NullCalibration::from_statistics(kind, model, alpha, seed, statistics)
}

/// Calibrated test of proportional rows with an invariant statistic.
#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct InvariantDecision {
    pub kind: InvariantStatKind,
    pub statistic: f64,
    pub critical_value: f64,
    /// `statistic > critical_value`
    pub reject: bool,
    pub calibration: NullCalibration,
}

/// Compares the table's statistic with an existing calibration.
pub fn decide(table: &ContingencyTable, calibration: NullCalibration) -> InvariantDecision {
    let statistic = invariant_statistic(table, calibration.kind);
    let critical_value = calibration.critical_value_at_alpha;
    InvariantDecision {
        kind: calibration.kind,
        statistic,
        critical_value,
        reject: statistic > critical_value,
        calibration,
    }
}

/// Calibrates under the table's own row totals and pooled column
/// proportions, then decides.
///
/// The statistic does not depend on the unit of the counts, but the
/// calibration does: rescaling the table changes the row totals that the
/// null is drawn with.
pub fn invariant_test(
    table: &ContingencyTable,
    kind: InvariantStatKind,
    alpha: f64,
    trials: u64,
    seed: u64,
) -> Result<InvariantDecision> {
    let model = NullModel::from_table(table)?;
    let calibration = calibrate_null(kind, &model, alpha, trials, seed)?;
    Ok(decide(table, calibration))
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec;

    #[test]
    fn order_statistic_rank() {
        assert_eq!(order_rank(0.95, 20_000), 19_000);
        assert_eq!(order_rank(0.95, 10), 10);
        assert_eq!(order_rank(0.5, 3), 2);
        assert_eq!(order_rank(0.0, 3), 1);
    }

    #[test]
    fn summary_of_known_statistics() {
        let model = NullModel::new(vec![4, 4], vec![0.5, 0.5]).unwrap();
        let stats: Vec<f64> = (1..=100).rev().map(f64::from).collect();
        let c = NullCalibration::from_statistics(InvariantStatKind::SumNormalized, &model, 0.05, 9, stats).unwrap();
        assert_eq!(c.critical_value_at_alpha, 95.0);
        // spread = sqrt(100·0.95·0.05) ≈ 2.18 → ranks 92 and 98
        assert_eq!(c.monte_carlo_se, 3.0);
        assert!(c.too_few_trials);
        let levels: Vec<f64> = c.empirical_quantiles.iter().map(|q| q.level).collect();
        assert_eq!(levels, vec![0.5, 0.9, 0.95, 0.99]);
        assert_eq!(c.empirical_quantiles[0].value, 50.0);
        assert!(c.empirical_quantiles.windows(2).all(|w| w[0].value <= w[1].value));
    }

    #[test]
    fn extra_level_for_unusual_alpha() {
        let model = NullModel::new(vec![4, 4], vec![0.5, 0.5]).unwrap();
        let stats: Vec<f64> = (0..1000).map(f64::from).collect();
        let c = NullCalibration::from_statistics(InvariantStatKind::SquaredDenom, &model, 0.2, 0, stats).unwrap();
        assert_eq!(c.empirical_quantiles.len(), 5);
        assert_eq!(c.empirical_quantiles[1].level, 0.8);
        assert!(!c.too_few_trials);
    }

    #[test]
    fn zero_trials_is_an_error() {
        let model = NullModel::new(vec![40, 40], vec![0.5, 0.5]).unwrap();
        for kind in InvariantStatKind::ALL {
            assert_eq!(calibrate_null(kind, &model, 0.05, 0, 1), Err(Error::NoTrials));
        }
    }

    #[test]
    fn calibration_is_deterministic() {
        let model = NullModel::new(vec![40, 40], vec![0.5, 0.5]).unwrap();
        let a = calibrate_null(InvariantStatKind::MaxNormalized, &model, 0.05, 2000, 77).unwrap();
        let b = calibrate_null(InvariantStatKind::MaxNormalized, &model, 0.05, 2000, 77).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn out_of_order_evaluation_matches_sequential() {
        let model = NullModel::new(vec![20, 30, 25], vec![0.3, 0.3, 0.4]).unwrap();
        let kind = InvariantStatKind::SquaredDenom;
        let seq = calibrate_null(kind, &model, 0.05, 500, 3).unwrap();
        let mut indexed: Vec<(u64, f64)> =
            (0..500u64).rev().map(|i| (i, null_statistic(kind, &model, 3, i).unwrap())).collect();
        indexed.sort_by_key(|&(i, _)| i);
        let stats = indexed.into_iter().map(|(_, s)| s).collect();
        let merged = NullCalibration::from_statistics(kind, &model, 0.05, 3, stats).unwrap();
        assert_eq!(seq, merged);
    }

    #[test]
    fn proportional_table_never_rejects() {
        let t = ContingencyTable::from_rows(&[[1.0, 2.0], [2.0, 4.0]]).unwrap();
        for kind in InvariantStatKind::ALL {
            let d = invariant_test(&t, kind, 0.05, 300, 0).unwrap();
            assert_eq!(d.statistic, 0.0);
            assert!(!d.reject);
            assert_eq!(d.calibration.row_totals, vec![3, 6]);
        }
    }

    #[test]
    fn scaled_tables_share_the_statistic() {
        let a = ContingencyTable::from_rows(&[[1.0, 1.0], [1.0, 11.0]]).unwrap();
        let b = a.scale(2.0).unwrap();
        let da = invariant_test(&a, InvariantStatKind::SumNormalized, 0.05, 200, 5).unwrap();
        let db = invariant_test(&b, InvariantStatKind::SumNormalized, 0.05, 200, 5).unwrap();
        assert_eq!(da.statistic, db.statistic);
        assert_eq!(db.calibration.row_totals, vec![4, 24]);
    }
}
