//! Null-hypothesis table sampler: independent multinomial rows with fixed
//! row totals and shared (pooled) category probabilities.

use alloc::vec::Vec;

use super::rng::Xorshift64Star;
use crate::distributions::ln_factorial;
use crate::error::{Error, Result};
use crate::tables::ContingencyTable;

/// Redraws allowed when a sampled table has an empty column.
pub const MAX_RESAMPLES: usize = 100;

/// Mean below which the binomial sampler inverts upward from zero.
const SMALL_MEAN: f64 = 30.0;

/// Sampling design for the homogeneity null: row `i` is multinomial with
/// `row_totals[i]` trials and cell probabilities `pooled_probs`.
#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct NullModel {
    pub row_totals: Vec<u64>,
    pub pooled_probs: Vec<f64>,
}

impl NullModel {
    pub fn new(row_totals: Vec<u64>, pooled_probs: Vec<f64>) -> Result<Self> {
        if row_totals.len() < 2 {
            return Err(Error::TooFewRows(row_totals.len()));
        }
        if pooled_probs.len() < 2 {
            return Err(Error::TooFewCols(pooled_probs.len()));
        }
        if let Some(i) = row_totals.iter().position(|&r| r == 0) {
            return Err(Error::ZeroRowSum(i));
        }
        if pooled_probs.iter().any(|p| !p.is_finite() || *p < 0.0) {
            return Err(Error::InvalidProbabilities("entries must be finite and nonnegative"));
        }
        let sum: f64 = pooled_probs.iter().sum();
        if libm::fabs(sum - 1.0) > 1e-12 {
            return Err(Error::InvalidProbabilities("entries must sum to 1"));
        }
        Ok(NullModel { row_totals, pooled_probs })
    }

    /// The design implied by a table: its own row totals (rounded to whole
    /// trials, at least one) and pooled column proportions `C_j / T`.
    pub fn from_table(table: &ContingencyTable) -> Result<Self> {
        let m = table.margins();
        let row_totals = m.row_sums.iter().map(|&r| (libm::round(r) as u64).max(1)).collect();
        let mut probs: Vec<f64> = m.col_sums.iter().map(|&c| c / m.grand_total).collect();
        // absorb rounding so the vector sums to 1 to within an ulp or two
        let sum: f64 = probs.iter().sum();
        for p in &mut probs {
            *p /= sum;
        }
        NullModel::new(row_totals, probs)
    }
}

/// Binomial(n, p) draw by CDF inversion.
///
/// Small means invert upward from zero. Larger means start at the mode and
/// walk outward alternately, which enumerates the same support in a
/// different fixed order and avoids underflow of `(1 − p)^n`.
pub fn sample_binomial(n: u64, p: f64, rng: &mut Xorshift64Star) -> u64 {
    if n == 0 || p <= 0.0 {
        return 0;
    }
    if p >= 1.0 {
        return n;
    }
    if p > 0.5 {
        return n - sample_binomial(n, 1.0 - p, rng);
    }
    let u = rng.next_f64();
    let q = 1.0 - p;
    let odds = p / q;
    let nf = n as f64;

    if nf * p < SMALL_MEAN {
        let mut pmf = libm::exp(nf * libm::log1p(-p));
        let mut cdf = pmf;
        let mut k = 0u64;
        while u >= cdf && k < n {
            pmf *= odds * (n - k) as f64 / (k + 1) as f64;
            k += 1;
            cdf += pmf;
        }
        return k;
    }

    let mode = libm::floor((nf + 1.0) * p).min(nf) as u64;
    let ln_pmf = ln_factorial(n) - ln_factorial(mode) - ln_factorial(n - mode)
        + mode as f64 * libm::log(p)
        + (n - mode) as f64 * libm::log1p(-p);
    let pmf_mode = libm::exp(ln_pmf);
    let mut rest = u - pmf_mode;
    if rest < 0.0 {
        return mode;
    }
    let (mut lo, mut hi) = (mode, mode);
    let (mut pmf_lo, mut pmf_hi) = (pmf_mode, pmf_mode);
    loop {
        if lo > 0 {
            pmf_lo *= lo as f64 / ((n - lo + 1) as f64 * odds);
            lo -= 1;
            rest -= pmf_lo;
            if rest < 0.0 {
                return lo;
            }
        }
        if hi < n {
            pmf_hi *= odds * (n - hi) as f64 / (hi + 1) as f64;
            hi += 1;
            rest -= pmf_hi;
            if rest < 0.0 {
                return hi;
            }
        }
        // leftover mass from rounding, or both tails exhausted
        if (pmf_lo == 0.0 || lo == 0) && (pmf_hi == 0.0 || hi == n) {
            return mode;
        }
    }
}

/// Multinomial draw by sequential binomial conditioning, written into `out`.
fn sample_multinomial(trials: u64, probs: &[f64], rng: &mut Xorshift64Star, out: &mut [f64]) {
    let mut remaining = trials;
    let mut mass_left = 1.0;
    let last = probs.len() - 1;
    for (j, &p) in probs.iter().enumerate() {
        if j == last {
            out[j] = remaining as f64;
            break;
        }
        let draw = if remaining == 0 || mass_left <= 0.0 {
            0
        } else {
            sample_binomial(remaining, (p / mass_left).min(1.0), rng)
        };
        out[j] = draw as f64;
        remaining -= draw;
        mass_left -= p;
    }
}

/// Draws one table under the null. Tables with an empty column are redrawn
/// up to [`MAX_RESAMPLES`] times.
pub fn sample_null_table(model: &NullModel, rng: &mut Xorshift64Star) -> Result<ContingencyTable> {
    if model.pooled_probs.iter().any(|&p| p <= 0.0) {
        return Err(Error::DegenerateProbabilities);
    }
    let (m, n) = (model.row_totals.len(), model.pooled_probs.len());
    let mut rows = alloc::vec![alloc::vec![0.0; n]; m];
    for _ in 0..=MAX_RESAMPLES {
        for (row, &total) in rows.iter_mut().zip(&model.row_totals) {
            sample_multinomial(total, &model.pooled_probs, rng, row);
        }
        let empty_column = (0..n).any(|j| rows.iter().all(|r| r[j] == 0.0));
        if !empty_column {
            return ContingencyTable::from_rows(&rows);
        }
    }
    Err(Error::DegenerateProbabilities)
}
