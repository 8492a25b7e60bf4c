//! Contingency-table data model: validation, margins, expected frequencies,
//! rescaling and proportionality detection.

use alloc::string::String;
use alloc::vec::Vec;

use crate::error::{Axis, Error, Result};

/// Dense row-major matrix of `f64`.
#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(
    feature = "serde",
    derive(serde::Serialize, serde::Deserialize),
    serde(into = "Vec<Vec<f64>>", try_from = "Vec<Vec<f64>>")
)]
pub struct Matrix {
    rows: usize,
    cols: usize,
    data: Vec<f64>,
}

impl Matrix {
    /// Builds a matrix from row slices. Every row must have the same length.
    pub fn from_rows<R: AsRef<[f64]>>(rows: &[R]) -> Result<Self> {
        let cols = rows.first().map_or(0, |r| r.as_ref().len());
        let mut data = Vec::with_capacity(rows.len() * cols);
        for (i, row) in rows.iter().enumerate() {
            let row = row.as_ref();
            if row.len() != cols {
                return Err(Error::RaggedRow { row: i, expected: cols, found: row.len() });
            }
            data.extend_from_slice(row);
        }
        Ok(Matrix { rows: rows.len(), cols, data })
    }

    pub(crate) fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> f64) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                data.push(f(i, j));
            }
        }
        Matrix { rows, cols, data }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    #[inline]
    pub fn get(&self, row: usize, col: usize) -> f64 {
        self.data[row * self.cols + col]
    }

    pub fn row(&self, row: usize) -> &[f64] {
        &self.data[row * self.cols..(row + 1) * self.cols]
    }

    /// All entries in row-major order.
    pub fn as_slice(&self) -> &[f64] {
        &self.data
    }

    pub fn to_rows(&self) -> Vec<Vec<f64>> {
        (0..self.rows).map(|i| self.row(i).to_vec()).collect()
    }

    pub fn row_sums(&self) -> Vec<f64> {
        (0..self.rows).map(|i| self.row(i).iter().sum()).collect()
    }

    pub fn col_sums(&self) -> Vec<f64> {
        let mut sums = alloc::vec![0.0; self.cols];
        for i in 0..self.rows {
            for (s, v) in sums.iter_mut().zip(self.row(i)) {
                *s += v;
            }
        }
        sums
    }

    pub fn sum(&self) -> f64 {
        self.data.iter().sum()
    }

    pub(crate) fn transpose(&self) -> Matrix {
        Matrix::from_fn(self.cols, self.rows, |i, j| self.get(j, i))
    }

    pub(crate) fn map(&self, f: impl Fn(f64) -> f64) -> Matrix {
        Matrix { rows: self.rows, cols: self.cols, data: self.data.iter().map(|&v| f(v)).collect() }
    }
}

impl From<Matrix> for Vec<Vec<f64>> {
    fn from(m: Matrix) -> Self {
        m.to_rows()
    }
}

impl TryFrom<Vec<Vec<f64>>> for Matrix {
    type Error = Error;

    fn try_from(rows: Vec<Vec<f64>>) -> Result<Self> {
        Matrix::from_rows(&rows)
    }
}

/// Row sums `R_i`, column sums `C_j` and grand total `T` of a table.
#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct Margins {
    pub row_sums: Vec<f64>,
    pub col_sums: Vec<f64>,
    pub grand_total: f64,
}

/// Expected cell frequencies `E_ij = R_i·C_j/T` under proportional rows.
#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize), serde(transparent))]
pub struct ExpectedMatrix(Matrix);

impl ExpectedMatrix {
    pub(crate) fn from_margins(margins: &Margins) -> Self {
        let t = margins.grand_total;
        ExpectedMatrix(Matrix::from_fn(margins.row_sums.len(), margins.col_sums.len(), |i, j| {
            margins.row_sums[i] * margins.col_sums[j] / t
        }))
    }

    pub(crate) fn from_matrix(m: Matrix) -> Self {
        ExpectedMatrix(m)
    }

    pub fn get(&self, row: usize, col: usize) -> f64 {
        self.0.get(row, col)
    }

    pub fn matrix(&self) -> &Matrix {
        &self.0
    }

    pub fn min(&self) -> f64 {
        self.0.as_slice().iter().copied().fold(f64::INFINITY, f64::min)
    }
}

/// A validated `m × n` table of nonnegative observed frequencies.
///
/// Entries are reals rather than integers so that rescaled tables `cA` are
/// representable. Margins are computed once at construction.
#[derive(Debug, Clone, PartialEq)]
pub struct ContingencyTable {
    observed: Matrix,
    margins: Margins,
    row_labels: Option<Vec<String>>,
    col_labels: Option<Vec<String>>,
}

impl ContingencyTable {
    /// Validates `observed`: at least 2×2, finite nonnegative entries, and
    /// every row and column with a positive sum.
    pub fn new(observed: Matrix) -> Result<Self> {
        if observed.rows() < 2 {
            return Err(Error::TooFewRows(observed.rows()));
        }
        if observed.cols() < 2 {
            return Err(Error::TooFewCols(observed.cols()));
        }
        for i in 0..observed.rows() {
            for (j, &v) in observed.row(i).iter().enumerate() {
                if !v.is_finite() {
                    return Err(Error::NonFiniteEntry { row: i, col: j });
                }
                if v < 0.0 {
                    return Err(Error::NegativeEntry { row: i, col: j });
                }
            }
        }
        let row_sums = observed.row_sums();
        if let Some(i) = row_sums.iter().position(|&r| r <= 0.0) {
            return Err(Error::ZeroRowSum(i));
        }
        let col_sums = observed.col_sums();
        if let Some(j) = col_sums.iter().position(|&c| c <= 0.0) {
            return Err(Error::ZeroColSum(j));
        }
        let grand_total = observed.sum();
        Ok(ContingencyTable {
            observed,
            margins: Margins { row_sums, col_sums, grand_total },
            row_labels: None,
            col_labels: None,
        })
    }

    pub fn from_rows<R: AsRef<[f64]>>(rows: &[R]) -> Result<Self> {
        ContingencyTable::new(Matrix::from_rows(rows)?)
    }

    /// Attaches category (row) and group (column) names.
    pub fn with_labels(mut self, row_labels: Option<Vec<String>>, col_labels: Option<Vec<String>>) -> Result<Self> {
        if let Some(labels) = &row_labels {
            if labels.len() != self.rows() {
                return Err(Error::LabelCount { axis: Axis::Row, expected: self.rows(), found: labels.len() });
            }
        }
        if let Some(labels) = &col_labels {
            if labels.len() != self.cols() {
                return Err(Error::LabelCount { axis: Axis::Column, expected: self.cols(), found: labels.len() });
            }
        }
        self.row_labels = row_labels;
        self.col_labels = col_labels;
        Ok(self)
    }

    pub fn rows(&self) -> usize {
        self.observed.rows()
    }

    pub fn cols(&self) -> usize {
        self.observed.cols()
    }

    pub fn observed(&self) -> &Matrix {
        &self.observed
    }

    pub fn get(&self, row: usize, col: usize) -> f64 {
        self.observed.get(row, col)
    }

    pub fn margins(&self) -> &Margins {
        &self.margins
    }

    pub fn grand_total(&self) -> f64 {
        self.margins.grand_total
    }

    pub fn row_labels(&self) -> Option<&[String]> {
        self.row_labels.as_deref()
    }

    pub fn col_labels(&self) -> Option<&[String]> {
        self.col_labels.as_deref()
    }

    /// Largest observed entry.
    pub fn max_entry(&self) -> f64 {
        self.observed.as_slice().iter().copied().fold(0.0, f64::max)
    }

    pub fn expected(&self) -> ExpectedMatrix {
        ExpectedMatrix::from_margins(&self.margins)
    }

    /// The table `c·A`. Labels are kept.
    pub fn scale(&self, c: f64) -> Result<ContingencyTable> {
        if !(c.is_finite() && c > 0.0) {
            return Err(Error::NonPositiveScale(c));
        }
        let scaled = ContingencyTable::new(self.observed.map(|v| v * c))?;
        Ok(ContingencyTable { row_labels: self.row_labels.clone(), col_labels: self.col_labels.clone(), ..scaled })
    }

    pub(crate) fn transpose(&self) -> ContingencyTable {
        let margins = Margins {
            row_sums: self.margins.col_sums.clone(),
            col_sums: self.margins.row_sums.clone(),
            grand_total: self.margins.grand_total,
        };
        ContingencyTable {
            observed: self.observed.transpose(),
            margins,
            row_labels: self.col_labels.clone(),
            col_labels: self.row_labels.clone(),
        }
    }

    /// Whether the rows are proportional, i.e. `|O_ij − E_ij| ≤ rel_tol·E_ij`
    /// in every cell. With `rel_tol = 0` this is exact proportionality.
    ///
    /// The tolerance is relative to each `E_ij`, so the verdict does not
    /// change when the table is rescaled.
    pub fn rows_proportional(&self, rel_tol: f64) -> bool {
        let expected = self.expected();
        (0..self.rows()).all(|i| {
            (0..self.cols()).all(|j| {
                let e = expected.get(i, j);
                libm::fabs(self.get(i, j) - e) <= rel_tol * e
            })
        })
    }

    /// Column proportionality, checked on the transpose.
    pub fn cols_proportional(&self, rel_tol: f64) -> bool {
        self.transpose().rows_proportional(rel_tol)
    }
}
