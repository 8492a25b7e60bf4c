use alloc::string::String;
use alloc::vec::Vec;

use crate::error::Result;
use crate::pearson::{check_alpha, homogeneity_test};
use crate::tables::ContingencyTable;

/// A base statistic at or below `PROPORTIONAL_REL_TOL · T` counts as zero.
pub const PROPORTIONAL_REL_TOL: f64 = 1e-12;

/// Relative offset from `c*` at which the decision flip is re-tested.
const FLIP_OFFSET: f64 = 1e-3;

/// Test outcome on `scale · A`.
#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct ScaleDecision {
    pub scale: f64,
    pub statistic: f64,
    pub p_value: f64,
    pub reject: bool,
}

/// Decisions just below and just above the critical scale.
#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct FlipCheck {
    pub below: ScaleDecision,
    pub above: ScaleDecision,
}

impl FlipCheck {
    /// Fails to reject below `c*` and rejects above it.
    pub fn confirmed(&self) -> bool {
        !self.below.reject && self.above.reject
    }
}

/// How the Pearson decision on `cA` depends on `c`.
#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct ScalingAudit {
    pub alpha: f64,
    pub base_statistic: f64,
    pub critical_value: f64,
    /// `critical_value / base_statistic`; infinite when the statistic is zero.
    #[cfg_attr(feature = "serde", serde(with = "crate::invariance::audit::maybe_infinite"))]
    pub critical_scale: f64,
    /// Largest `|χ²(cA) − c·χ²(A)| / (c·χ²(A))` over the probes.
    pub linearity_residual: f64,
    pub decisions: Vec<ScaleDecision>,
    pub flip_check: Option<FlipCheck>,
    pub proportional: bool,
    pub notes: Vec<String>,
}

const NOTE_LINEAR: &str = "the Pearson statistic is proportional to the scale of the table, so any non-proportional table is rejected once multiplied by a large enough factor and accepted once multiplied by a small enough one";
const NOTE_FIXED_TOTAL: &str = "the decision is only meaningful when the total count is fixed by the design, e.g. joint frequencies over a known number of trials";

fn decision_at(table: &ContingencyTable, alpha: f64, scale: f64) -> Result<ScaleDecision> {
    let r = homogeneity_test(&table.scale(scale)?, alpha)?;
    Ok(ScaleDecision { scale, statistic: r.statistic, p_value: r.p_value, reject: r.reject_h0 })
}

/// Re-runs the homogeneity test on `c·A` for each probe scale and compares
/// the outcomes with the linear prediction `c·χ²(A)`.
pub fn audit_scaling(table: &ContingencyTable, alpha: f64, probe_scales: &[f64]) -> Result<ScalingAudit> {
    check_alpha(alpha)?;
    let base = homogeneity_test(table, alpha)?;
    let base_statistic = base.statistic;
    let critical_value = base.critical_value;
    let proportional = base_statistic <= PROPORTIONAL_REL_TOL * table.grand_total();
    let critical_scale = if base_statistic > 0.0 { critical_value / base_statistic } else { f64::INFINITY };

    let decisions = probe_scales.iter().map(|&c| decision_at(table, alpha, c)).collect::<Result<Vec<_>>>()?;
    let linearity_residual = if base_statistic > 0.0 {
        decisions
            .iter()
            .map(|d| {
                let predicted = d.scale * base_statistic;
                libm::fabs(d.statistic - predicted) / predicted
            })
            .fold(0.0, f64::max)
    } else {
        0.0
    };

    let flip_check = if !proportional && critical_scale.is_finite() {
        Some(FlipCheck {
            below: decision_at(table, alpha, critical_scale * (1.0 - FLIP_OFFSET))?,
            above: decision_at(table, alpha, critical_scale * (1.0 + FLIP_OFFSET))?,
        })
    } else {
        None
    };

    Ok(ScalingAudit {
        alpha,
        base_statistic,
        critical_value,
        critical_scale,
        linearity_residual,
        decisions,
        flip_check,
        proportional,
        notes: alloc::vec![String::from(NOTE_LINEAR), String::from(NOTE_FIXED_TOTAL)],
    })
}

/// Serializes infinite values as the string `"infinite"`.
#[cfg(feature = "serde")]
pub(crate) mod maybe_infinite {
    use core::fmt;

    use serde::de::{self, Visitor};
    use serde::{Deserializer, Serializer};

    pub fn serialize<S: Serializer>(value: &f64, s: S) -> Result<S::Ok, S::Error> {
        if value.is_infinite() && *value > 0.0 {
            s.serialize_str("infinite")
        } else {
            s.serialize_f64(*value)
        }
    }

    struct MaybeInfinite;

    impl Visitor<'_> for MaybeInfinite {
        type Value = f64;

        fn expecting(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
            f.write_str("a number or \"infinite\"")
        }

        fn visit_f64<E: de::Error>(self, v: f64) -> Result<f64, E> {
            Ok(v)
        }

        fn visit_u64<E: de::Error>(self, v: u64) -> Result<f64, E> {
            Ok(v as f64)
        }

        fn visit_i64<E: de::Error>(self, v: i64) -> Result<f64, E> {
            Ok(v as f64)
        }

        fn visit_str<E: de::Error>(self, v: &str) -> Result<f64, E> {
            if v == "infinite" {
                Ok(f64::INFINITY)
            } else {
                Err(E::invalid_value(de::Unexpected::Str(v), &self))
            }
        }
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<f64, D::Error> {
        d.deserialize_any(MaybeInfinite)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::error::Error;

    fn table(rows: &[&[f64]]) -> ContingencyTable {
        ContingencyTable::from_rows(rows).unwrap()
    }

    #[test]
    fn example_two_flips_under_thousandfold_scaling() {
        let a = audit_scaling(&table(&[&[22.0, 18.0], &[18.0, 22.0]]), 0.05, &[1.0, 1000.0]).unwrap();
        assert!(libm::fabs(a.base_statistic - 0.8) < 1e-12);
        assert!(!a.decisions[0].reject);
        assert!(a.decisions[1].reject);
        assert!(libm::fabs(a.decisions[1].statistic - 800.0) < 1e-9);
        assert!(libm::fabs(a.critical_scale - 3.841 / 0.8) < 1e-2);
        assert!(a.linearity_residual < 1e-12);
        assert!(!a.proportional);
    }

    #[test]
    fn example_one_critical_scale() {
        let t = table(&[&[1.0, 1.0], &[1.0, 11.0]]);
        let a = audit_scaling(&t, 0.05, &[]).unwrap();
        let oracle = 3.841 / (175.0 / 72.0);
        assert!(libm::fabs(a.critical_scale - oracle) < 1e-3, "{}", a.critical_scale);
        let flip = a.flip_check.unwrap();
        assert!(flip.confirmed());
        assert!(libm::fabs(flip.below.scale / a.critical_scale - 0.999) < 1e-12);
    }

    #[test]
    fn proportional_table_never_flips() {
        let a = audit_scaling(&table(&[&[1.0, 2.0], &[2.0, 4.0]]), 0.01, &[0.001, 1.0, 1e6]).unwrap();
        assert_eq!(a.base_statistic, 0.0);
        assert!(a.critical_scale.is_infinite());
        assert!(a.proportional);
        assert!(a.flip_check.is_none());
        assert_eq!(a.linearity_residual, 0.0);
        assert!(a.decisions.iter().all(|d| !d.reject && d.statistic <= 1e-12 * 9.0 * d.scale));
    }

    #[test]
    fn bad_probe_scale_is_rejected() {
        let t = table(&[&[1.0, 2.0], &[3.0, 4.0]]);
        assert!(matches!(audit_scaling(&t, 0.05, &[2.0, -1.0]), Err(Error::NonPositiveScale(_))));
        assert!(matches!(audit_scaling(&t, 1.5, &[2.0]), Err(Error::Domain { .. })));
    }
}
