use core::fmt;

/// Row or column of a two-way table.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(rename_all = "lowercase"))]
pub enum Axis {
    Row,
    Column,
}

impl fmt::Display for Axis {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Axis::Row => f.write_str("row"),
            Axis::Column => f.write_str("column"),
        }
    }
}

/// Everything that can go wrong in this crate. Indices are zero-based.
#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum Error {
    #[error("negative entry at row {row}, column {col}")]
    NegativeEntry { row: usize, col: usize },
    #[error("non-finite entry at row {row}, column {col}")]
    NonFiniteEntry { row: usize, col: usize },
    #[error("table needs at least 2 rows, got {0}")]
    TooFewRows(usize),
    #[error("table needs at least 2 columns, got {0}")]
    TooFewCols(usize),
    #[error("row {row} has {found} entries, expected {expected}")]
    RaggedRow { row: usize, expected: usize, found: usize },
    #[error("row {0} sums to zero; remove it from the table")]
    ZeroRowSum(usize),
    #[error("column {0} sums to zero; remove it from the table")]
    ZeroColSum(usize),
    #[error("{axis} label count {found} does not match {expected} {axis}s")]
    LabelCount { axis: Axis, expected: usize, found: usize },
    #[error("scale factor must be positive and finite, got {0}")]
    NonPositiveScale(f64),
    #[error("{what} out of domain: {value}")]
    Domain { what: &'static str, value: f64 },
    #[error("{routine} did not converge within {iterations} iterations")]
    NoConvergence { routine: &'static str, iterations: usize },
    /// Overflow or underflow turned a finite table into a non-finite result.
    #[error("{what} is not finite ({value}); the table is outside double-precision range")]
    NonFiniteResult { what: &'static str, value: f64 },
    #[error("joint frequencies sum to {sum}, expected 1")]
    NotNormalized { sum: f64 },
    #[error("{axis} marginal {index} is zero")]
    ZeroMarginal { axis: Axis, index: usize },
    #[error("probability vector is invalid: {0}")]
    InvalidProbabilities(&'static str),
    #[error("sampling probabilities cannot produce a table with positive margins")]
    DegenerateProbabilities,
    #[error("calibration needs at least one trial")]
    NoTrials,
}

impl Error {
    /// True for failures of the numerical routines themselves, as opposed to
    /// bad input.
    pub fn is_numerical(&self) -> bool {
        matches!(self, Error::NoConvergence { .. } | Error::NonFiniteResult { .. })
    }
}

pub type Result<T, E = Error> = core::result::Result<T, E>;
