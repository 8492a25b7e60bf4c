//! Pearson's chi-square test for homogeneity of proportions, the
//! independence test on normalized joint frequencies, and the
//! expected-frequency assumption check.

use alloc::string::String;
use alloc::vec::Vec;

use crate::distributions::ChiSquare;
use crate::error::{Axis, Error, Result};
use crate::tables::{ContingencyTable, ExpectedMatrix, Matrix};

/// Outcome of a Pearson chi-square test.
#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct PearsonResult {
    pub statistic: f64,
    pub dof: u32,
    pub alpha: f64,
    /// The (1 − α)-quantile of χ²(dof).
    pub critical_value: f64,
    pub p_value: f64,
    /// `statistic > critical_value`; ties do not reject.
    pub reject_h0: bool,
    pub expected: ExpectedMatrix,
    /// `(O − E)² / E` per cell.
    pub contributions: Matrix,
}

pub(crate) fn check_alpha(alpha: f64) -> Result<()> {
    if alpha > 0.0 && alpha < 1.0 {
        Ok(())
    } else {
        Err(Error::Domain { what: "significance level", value: alpha })
    }
}

pub(crate) fn dof_of(rows: usize, cols: usize) -> u32 {
    ((rows - 1) * (cols - 1)) as u32
}

/// `Σ (O − E)² / E` without the distributional part of the test.
pub fn pearson_statistic(table: &ContingencyTable) -> f64 {
    let expected = table.expected();
    table.observed().as_slice().iter().zip(expected.matrix().as_slice()).map(|(&o, &e)| (o - e) * (o - e) / e).sum()
}

fn evaluate(observed: &Matrix, expected: ExpectedMatrix, alpha: f64) -> Result<PearsonResult> {
    check_alpha(alpha)?;
    let contributions = Matrix::from_fn(observed.rows(), observed.cols(), |i, j| {
        let (o, e) = (observed.get(i, j), expected.get(i, j));
        (o - e) * (o - e) / e
    });
    let statistic: f64 = contributions.as_slice().iter().sum();
    if !statistic.is_finite() {
        return Err(Error::NonFiniteResult { what: "chi-square statistic", value: statistic });
    }
    let dof = dof_of(observed.rows(), observed.cols());
    let dist = ChiSquare::new(dof)?;
    let critical_value = dist.quantile(1.0 - alpha)?;
    let p_value = dist.sf(statistic)?;
    Ok(PearsonResult {
        statistic,
        dof,
        alpha,
        critical_value,
        p_value,
        reject_h0: statistic > critical_value,
        expected,
        contributions,
    })
}

/// Tests whether the rows of `table` are proportional (every group shares
/// one category distribution) at significance level `alpha`.
pub fn homogeneity_test(table: &ContingencyTable, alpha: f64) -> Result<PearsonResult> {
    evaluate(table.observed(), table.expected(), alpha)
}

/// Independence test for two discrete variables from their joint observed
/// frequencies `z` (summing to 1) over `trials` paired observations.
///
/// Marginals `p_i`, `q_j` are the row and column sums of `z`; the expected
/// joint frequency is `p_i·q_j`. The statistic is evaluated on the counts
/// `trials·z` against `trials·p_i·q_j`.
pub fn independence_from_joint_frequencies(z: &Matrix, alpha: f64, trials: u64) -> Result<PearsonResult> {
    if z.rows() < 2 {
        return Err(Error::TooFewRows(z.rows()));
    }
    if z.cols() < 2 {
        return Err(Error::TooFewCols(z.cols()));
    }
    if trials == 0 {
        return Err(Error::Domain { what: "trial count", value: 0.0 });
    }
    for i in 0..z.rows() {
        for (j, &v) in z.row(i).iter().enumerate() {
            if !v.is_finite() {
                return Err(Error::NonFiniteEntry { row: i, col: j });
            }
            if v < 0.0 {
                return Err(Error::NegativeEntry { row: i, col: j });
            }
        }
    }
    let sum = z.sum();
    if libm::fabs(sum - 1.0) > 1e-9 {
        return Err(Error::NotNormalized { sum });
    }
    let p = z.row_sums();
    let q = z.col_sums();
    if let Some(i) = p.iter().position(|&v| v <= 0.0) {
        return Err(Error::ZeroMarginal { axis: Axis::Row, index: i });
    }
    if let Some(j) = q.iter().position(|&v| v <= 0.0) {
        return Err(Error::ZeroMarginal { axis: Axis::Column, index: j });
    }
    let t = trials as f64;
    let counts = z.map(|v| t * v);
    let expected = ExpectedMatrix::from_matrix(Matrix::from_fn(z.rows(), z.cols(), |i, j| t * (p[i] * q[j])));
    evaluate(&counts, expected, alpha)
}

/// Advisory text for the assumptions that cannot be checked from the table.
pub const UNVERIFIABLE_ASSUMPTIONS: [&str; 4] = [
    "random sampling: observations must come from a random sample; not checkable from the table",
    "categorical data: every observation must fall in exactly one of the m x n cells; not checkable from the table",
    "independence: observations must be independent; note that fixed-margin designs induce dependence between cell counts, so zero covariance between all cells cannot hold literally",
    "fixed margins: homogeneity tests assume the row totals, column totals or both are fixed by the design; not checkable from the table",
];

/// Expected-frequency findings for a table.
#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct AssumptionReport {
    pub min_expected: f64,
    pub cells_below_5: usize,
    pub cells_below_10: usize,
    pub threshold_used: f64,
    pub cells_below_threshold: usize,
    /// No expected frequency below `threshold_used`.
    pub passes: bool,
    pub notes: Vec<String>,
}

/// Checks the rule of thumb `E_ij ≥ threshold` (commonly 5, sometimes 10).
/// The result is advisory; it never blocks a test.
pub fn check_assumptions(table: &ContingencyTable, threshold: f64) -> AssumptionReport {
    let expected = table.expected();
    let cells = expected.matrix().as_slice();
    let below = |limit: f64| cells.iter().filter(|&&e| e < limit).count();
    let cells_below_threshold = below(threshold);
    AssumptionReport {
        min_expected: expected.min(),
        cells_below_5: below(5.0),
        cells_below_10: below(10.0),
        threshold_used: threshold,
        cells_below_threshold,
        passes: cells_below_threshold == 0,
        notes: UNVERIFIABLE_ASSUMPTIONS.iter().map(|&s| String::from(s)).collect(),
    }
}
