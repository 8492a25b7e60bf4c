use core::fmt;
use core::str::FromStr;

use crate::tables::{ContingencyTable, Matrix};

/// Scale-invariant modifications of the Pearson statistic. Each is
/// homogeneous of degree zero: `S(cA) = S(A)` for every `c > 0`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(rename_all = "kebab-case"))]
pub enum InvariantStatKind {
    /// `Σ (O − E)² / E²`
    SquaredDenom,
    /// Pearson's statistic of `A / T`, i.e. `χ²(A) / T`.
    SumNormalized,
    /// Pearson's statistic of `A / max O`, i.e. `χ²(A) / max O`.
    MaxNormalized,
}

impl InvariantStatKind {
    pub const ALL: [InvariantStatKind; 3] =
        [InvariantStatKind::SquaredDenom, InvariantStatKind::SumNormalized, InvariantStatKind::MaxNormalized];

    pub fn as_str(self) -> &'static str {
        match self {
            InvariantStatKind::SquaredDenom => "squared-denom",
            InvariantStatKind::SumNormalized => "sum-normalized",
            InvariantStatKind::MaxNormalized => "max-normalized",
        }
    }
}

impl fmt::Display for InvariantStatKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct UnknownKind;

impl fmt::Display for UnknownKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("expected one of squared-denom, sum-normalized, max-normalized")
    }
}

impl FromStr for InvariantStatKind {
    type Err = UnknownKind;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        InvariantStatKind::ALL.into_iter().find(|k| k.as_str() == s).ok_or(UnknownKind)
    }
}

/// Sums `term(O, E)` over the cells of `observed`, with `E` taken from the
/// margins of `observed` itself.
fn sum_over_cells(observed: &Matrix, term: impl Fn(f64, f64) -> f64) -> f64 {
    let rows = observed.row_sums();
    let cols = observed.col_sums();
    let total: f64 = rows.iter().sum();
    let mut acc = 0.0;
    for (i, r) in rows.iter().enumerate() {
        for (j, c) in cols.iter().enumerate() {
            acc += term(observed.get(i, j), r * c / total);
        }
    }
    acc
}

/// Evaluates an invariant statistic. Every kind is computed on the table
/// after dividing it by a scale of its own (sum or maximum), so tables that
/// differ by an exactly representable factor give bit-identical values.
pub fn invariant_statistic(table: &ContingencyTable, kind: InvariantStatKind) -> f64 {
    let pearson = |o: f64, e: f64| (o - e) * (o - e) / e;
    match kind {
        InvariantStatKind::SquaredDenom => {
            let t = table.grand_total();
            sum_over_cells(&table.observed().map(|v| v / t), |o, e| (o - e) * (o - e) / (e * e))
        }
        InvariantStatKind::SumNormalized => {
            let t = table.grand_total();
            sum_over_cells(&table.observed().map(|v| v / t), pearson)
        }
        InvariantStatKind::MaxNormalized => {
            let max = table.max_entry();
            sum_over_cells(&table.observed().map(|v| v / max), pearson)
        }
    }
}
