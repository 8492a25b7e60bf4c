//! Exact-arithmetic oracles for the chi-audit test suites.
//!
//! Nothing here shares code with `chi-audit-core`: statistics are evaluated in
//! big rational arithmetic straight from the textbook formulas.

use std::collections::BTreeMap;

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{ToPrimitive, Zero};

/// Pearson's statistic of an integer table, exactly:
/// `Σ (T·O − R·C)² / (T·R·C)`.
pub fn exact_pearson(rows: &[Vec<u64>]) -> BigRational {
    let m = rows.len();
    let n = rows[0].len();
    let r: Vec<BigInt> = rows.iter().map(|row| row.iter().map(|&v| BigInt::from(v)).sum()).collect();
    let c: Vec<BigInt> = (0..n).map(|j| rows.iter().map(|row| BigInt::from(row[j])).sum()).collect();
    let t: BigInt = r.iter().sum();
    let mut acc = BigRational::zero();
    for i in 0..m {
        for j in 0..n {
            let rc = &r[i] * &c[j];
            let diff = &t * BigInt::from(rows[i][j]) - &rc;
            acc += BigRational::new(&diff * &diff, &t * &rc);
        }
    }
    acc
}

pub fn to_f64(x: &BigRational) -> f64 {
    x.to_f64().expect("finite rational")
}

fn binomial(n: u64, k: u64) -> BigUint {
    let mut acc = BigUint::from(1u32);
    for i in 0..k {
        acc = acc * BigUint::from(n - i) / BigUint::from(i + 1);
    }
    acc
}

/// Exact null distribution of `χ² / T` for a 2×2 table whose rows are
/// independent Binomial(n1, 1/2) and Binomial(n2, 1/2) counts in column 0.
/// Degenerate draws (an empty column) are dropped and the rest renormalized.
/// Returns `(statistic, probability)` atoms in increasing statistic order.
pub fn two_by_two_half_null(n1: u64, n2: u64) -> Vec<(f64, f64)> {
    let mut atoms: BTreeMap<BigRational, BigUint> = BTreeMap::new();
    let mut kept = BigUint::zero();
    for a in 0..=n1 {
        for c in 0..=n2 {
            let c1 = a + c;
            if c1 == 0 || c1 == n1 + n2 {
                continue;
            }
            let weight = binomial(n1, a) * binomial(n2, c);
            let (b, d) = (n1 - a, n2 - c);
            let det = BigInt::from(a) * BigInt::from(d) - BigInt::from(b) * BigInt::from(c);
            let den = BigInt::from(n1) * BigInt::from(n2) * BigInt::from(c1) * BigInt::from(n1 + n2 - c1);
            // χ² = T·det² / (n1·n2·C1·C2); divided by T
            let stat = BigRational::new(&det * &det, den);
            kept += &weight;
            *atoms.entry(stat).or_insert_with(BigUint::zero) += weight;
        }
    }
    atoms
        .into_iter()
        .map(|(s, w)| (to_f64(&s), BigRational::new(w.into(), kept.clone().into()).to_f64().unwrap()))
        .collect()
}

/// Smallest atom whose cumulative probability reaches `level`, with the
/// cumulative probabilities just below and at it.
pub fn discrete_quantile(atoms: &[(f64, f64)], level: f64) -> (f64, f64, f64) {
    let mut cum = 0.0;
    for &(s, p) in atoms {
        let before = cum;
        cum += p;
        if cum >= level {
            return (s, before, cum);
        }
    }
    let last = atoms.last().expect("non-empty");
    (last.0, cum - last.1, cum)
}
