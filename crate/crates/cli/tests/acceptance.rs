//! Acceptance checks, one PASS/FAIL line each. Runs without the libtest
//! harness so the lines always reach the terminal; exits non-zero if any
//! check fails.

use std::process::{Command, ExitCode};
use std::time::{Duration, Instant};

use chi_audit::datasets::DATASETS;
use chi_audit::parallel::calibrate_null_par;
use chi_audit_core::invariance::null_statistic;
use chi_audit_core::{
    homogeneity_test, invariant_statistic, pearson_statistic, ChiSquare, ContingencyTable, InvariantStatKind, NullModel,
};
use chi_audit_testkit::{discrete_quantile, exact_pearson, to_f64, two_by_two_half_null};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

const ALPHA: f64 = 0.05;

type Criterion = (&'static str, fn() -> Outcome);

struct Outcome {
    ok: bool,
    detail: String,
}

fn check(ok: bool, detail: impl Into<String>) -> Outcome {
    Outcome { ok, detail: detail.into() }
}

fn table(rows: &[&[f64]]) -> ContingencyTable {
    ContingencyTable::from_rows(rows).unwrap()
}

fn rel_err(x: f64, reference: f64) -> f64 {
    (x - reference).abs() / reference.abs()
}

fn dataset(name: &str) -> ContingencyTable {
    DATASETS.iter().find(|d| d.name == name).unwrap().table()
}

/// Random tables with 2..=6 rows and columns and entries uniform on [0, 100].
fn corpus(n: usize) -> Vec<ContingencyTable> {
    let mut rng = ChaCha8Rng::seed_from_u64(2024);
    let mut out = Vec::with_capacity(n);
    while out.len() < n {
        let (m, k) = (rng.gen_range(2..=6), rng.gen_range(2..=6));
        let rows: Vec<Vec<f64>> = (0..m).map(|_| (0..k).map(|_| rng.gen_range(0.0..=100.0)).collect()).collect();
        if let Ok(t) = ContingencyTable::from_rows(&rows) {
            out.push(t);
        }
    }
    out
}

fn example_one() -> Outcome {
    let a = table(&[&[1.0, 1.0], &[1.0, 11.0]]);
    let b = table(&[&[2.0, 2.0], &[2.0, 22.0]]);
    let ra = homogeneity_test(&a, ALPHA).unwrap();
    let rb = homogeneity_test(&b, ALPHA).unwrap();
    let ea = rel_err(ra.statistic, 175.0 / 72.0);
    let eb = rel_err(rb.statistic, 175.0 / 36.0);

    let reps = 200;
    let mut best = Duration::MAX;
    for _ in 0..reps {
        let t0 = Instant::now();
        std::hint::black_box(homogeneity_test(std::hint::black_box(&a), ALPHA).unwrap());
        std::hint::black_box(homogeneity_test(std::hint::black_box(&b), ALPHA).unwrap());
        best = best.min(t0.elapsed());
    }
    check(
        ea <= 1e-12 && eb <= 1e-12 && !ra.reject_h0 && rb.reject_h0 && best < Duration::from_millis(1),
        format!("rel err {ea:.1e} / {eb:.1e}, decisions {} / {}, both tests in {best:?}", ra.reject_h0, rb.reject_h0),
    )
}

fn example_two() -> Outcome {
    let a = table(&[&[22.0, 18.0], &[18.0, 22.0]]);
    let ra = homogeneity_test(&a, ALPHA).unwrap();
    let rb = homogeneity_test(&a.scale(1000.0).unwrap(), ALPHA).unwrap();
    let (ea, eb) = (rel_err(ra.statistic, 0.8), rel_err(rb.statistic, 800.0));
    check(
        ea <= 1e-12 && eb <= 1e-12 && !ra.reject_h0 && rb.reject_h0,
        format!("0.8 rel err {ea:.1e}, 800 rel err {eb:.1e}, reject {} -> {}", ra.reject_h0, rb.reject_h0),
    )
}

fn example_three() -> Outcome {
    const PRINTED_EXPECTED: [[f64; 4]; 3] =
        [[90.3, 82.7, 89.5, 71.6], [80.9, 73.9, 80.2, 64.1], [79.9, 73.3, 79.2, 63.4]];
    let t = dataset("example3");
    let r = homogeneity_test(&t, ALPHA).unwrap();
    let d = homogeneity_test(&t.scale(2.0).unwrap(), ALPHA).unwrap();
    let mut mismatches = Vec::new();
    for (i, row) in PRINTED_EXPECTED.iter().enumerate() {
        for (j, &printed) in row.iter().enumerate() {
            let rounded = (r.expected.get(i, j) * 10.0).round() / 10.0;
            if (rounded - printed).abs() > 1e-9 {
                mismatches.push(format!("({i},{j}) {:.3} vs {printed}", r.expected.get(i, j)));
            }
        }
    }
    let numbers_ok = (r.statistic - 11.475).abs() <= 5e-3
        && r.dof == 6
        && (r.p_value - 0.07).abs() <= 5e-3
        && (d.statistic - 22.95).abs() <= 1e-2
        && (d.p_value - 0.0008).abs() <= 2e-4;
    check(
        numbers_ok && mismatches.is_empty(),
        format!(
            "statistic {:.5}, dof {}, p {:.5}, doubled {:.4} p {:.6}; expected matrix cells off at 1 dp: {}",
            r.statistic,
            r.dof,
            r.p_value,
            d.statistic,
            d.p_value,
            if mismatches.is_empty() { "none".to_owned() } else { mismatches.join(", ") }
        ),
    )
}

fn distribution_numerics() -> Outcome {
    let q1 = ChiSquare::new(1).unwrap().quantile(0.95).unwrap();
    let q6 = ChiSquare::new(6).unwrap().quantile(0.95).unwrap();
    let mut round_trip = 0.0f64;
    for k in 1..=10 {
        let d = ChiSquare::new(k).unwrap();
        for i in 1..=99 {
            let p = f64::from(i) / 100.0;
            round_trip = round_trip.max((d.cdf(d.quantile(p).unwrap()).unwrap() - p).abs());
        }
    }
    let d2 = ChiSquare::new(2).unwrap();
    let closed_form = (0..=5000)
        .map(|i| {
            let x = f64::from(i) * 0.01;
            (d2.cdf(x).unwrap() - (1.0 - (-x / 2.0).exp())).abs()
        })
        .fold(0.0, f64::max);
    check(
        (q1 - 3.841).abs() <= 5e-3 && (q6 - 12.59).abs() <= 5e-3 && round_trip <= 1e-9 && closed_form <= 1e-12,
        format!("q(1) {q1:.6}, q(6) {q6:.6}, round trip {round_trip:.1e}, df=2 closed form {closed_form:.1e}"),
    )
}

const SCALES: [f64; 6] = [0.001, 0.5, 1.0, 2.0, 7.0, 1000.0];

fn scaling_linearity() -> Outcome {
    let tables = corpus(1000);
    let t0 = Instant::now();
    let mut worst = 0.0f64;
    for t in &tables {
        let base = pearson_statistic(t);
        for c in SCALES {
            let predicted = c * base;
            let err = (pearson_statistic(&t.scale(c).unwrap()) - predicted).abs() / predicted.max(1.0);
            worst = worst.max(err);
        }
    }
    let elapsed = t0.elapsed();
    check(
        worst <= 1e-8 && elapsed < Duration::from_secs(5),
        format!("worst scaled error {worst:.1e} over 1000 tables x 6 scales in {elapsed:?}"),
    )
}

fn invariance() -> Outcome {
    let tables = corpus(1000);
    let mut worst = 0.0f64;
    for t in &tables {
        for kind in InvariantStatKind::ALL {
            let base = invariant_statistic(t, kind);
            for c in SCALES {
                let s = invariant_statistic(&t.scale(c).unwrap(), kind);
                let err = if base == 0.0 { s.abs() } else { rel_err(s, base) };
                worst = worst.max(err);
            }
        }
    }
    let pairs = [
        (table(&[&[1.0, 1.0], &[1.0, 11.0]]), table(&[&[2.0, 2.0], &[2.0, 22.0]])),
        (table(&[&[22.0, 18.0], &[18.0, 22.0]]), table(&[&[22000.0, 18000.0], &[18000.0, 22000.0]])),
    ];
    let exact = pairs.iter().all(|(a, b)| {
        InvariantStatKind::ALL
            .iter()
            .all(|&k| invariant_statistic(a, k).to_bits() == invariant_statistic(b, k).to_bits())
    });
    check(worst <= 1e-9 && exact, format!("worst relative change {worst:.1e}; bit-identical on example pairs: {exact}"))
}

fn rank_one_equivalence() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let mut worst = 0.0f64;
    let mut all_proportional = true;
    for _ in 0..200 {
        let (m, k) = (rng.gen_range(2..=6), rng.gen_range(2..=6));
        let u: Vec<f64> = (0..m).map(|_| rng.gen_range(0.1..10.0)).collect();
        let v: Vec<f64> = (0..k).map(|_| rng.gen_range(0.1..10.0)).collect();
        let rows: Vec<Vec<f64>> = u.iter().map(|a| v.iter().map(|b| a * b).collect()).collect();
        let t = ContingencyTable::from_rows(&rows).unwrap();
        worst = worst.max(pearson_statistic(&t));
        all_proportional &= t.rows_proportional(1e-9);
    }
    let bundled_ok = DATASETS.iter().all(|d| {
        let t = d.table();
        pearson_statistic(&t) > 0.0 && !t.rows_proportional(1e-9)
    });
    check(
        worst <= 1e-9 && all_proportional && bundled_ok,
        format!(
            "max statistic on rank-1 tables {worst:.1e}, all proportional: {all_proportional}; bundled tables non-proportional: {bundled_ok}"
        ),
    )
}

fn oracle_equivalence() -> Outcome {
    let mut worst = 0.0f64;
    let mut cancer = 0.0;
    for d in &DATASETS {
        let rows: Vec<Vec<u64>> = d.rows.iter().map(|r| r.iter().map(|&v| v as u64).collect()).collect();
        let exact = to_f64(&exact_pearson(&rows));
        worst = worst.max(rel_err(pearson_statistic(&d.table()), exact));
        if d.name == "cancer" {
            cancer = exact;
        }
    }
    check(
        worst <= 1e-12,
        format!("worst relative error {worst:.1e}; cancer table statistic {cancer:.6} from the oracle"),
    )
}

fn calibration() -> Outcome {
    let t0 = Instant::now();
    let trials = 20_000u64;
    let seed = 42;
    let kind = InvariantStatKind::SumNormalized;
    let model = NullModel::new(vec![40, 40], vec![0.5, 0.5]).unwrap();
    let cal = calibrate_null_par(kind, &model, ALPHA, trials, seed).unwrap();
    let cv = cal.critical_value_at_alpha;

    // fresh null tables: trial indices beyond those used for calibration
    let rejected = (trials..2 * trials).filter(|&i| null_statistic(kind, &model, seed, i).unwrap() > cv).count();
    let rate = rejected as f64 / trials as f64;
    let rate_tol = 3.0 * (ALPHA * (1.0 - ALPHA) / trials as f64).sqrt();
    let rate_ok = (rate - ALPHA).abs() <= rate_tol;

    let target = ChiSquare::new(1).unwrap().quantile(1.0 - ALPHA).unwrap() / 80.0;
    let cv_ok = (cv - target).abs() <= 3.0 * cal.monte_carlo_se;
    let (exact, _, _) = discrete_quantile(&two_by_two_half_null(40, 40), 1.0 - ALPHA);
    let elapsed = t0.elapsed();
    check(
        rate_ok && cv_ok && elapsed < Duration::from_secs(30),
        format!(
            "rejection rate {rate:.5}, tol {rate_tol:.5} [{}]; critical value {cv:.6} vs {target:.6} +/- 3 x {:.2e} [{}], exact null quantile {exact:.6}; {elapsed:?}",
            if rate_ok { "ok" } else { "off" },
            cal.monte_carlo_se,
            if cv_ok { "ok" } else { "off" }
        ),
    )
}

fn determinism() -> Outcome {
    let input = concat!(env!("CARGO_MANIFEST_DIR"), "/tests/data/example3.csv");
    let run = |threads: &str| {
        Command::new(env!("CARGO_BIN_EXE_chi-audit"))
            .args(["invariant", input, "--trials", "5000", "--seed", "123", "--json", "--no-timestamp"])
            .env("RAYON_NUM_THREADS", threads)
            .output()
            .unwrap()
    };
    let (a, b, c) = (run("1"), run("4"), run("4"));
    let ok = a.status.success() && a.stdout == b.stdout && b.stdout == c.stdout && !a.stdout.is_empty();
    check(ok, format!("{} bytes, identical across 3 runs (1 and 4 threads): {ok}", a.stdout.len()))
}

fn main() -> ExitCode {
    let criteria: [Criterion; 10] = [
        ("example 1 exact values", example_one),
        ("example 2 scaling flip", example_two),
        ("example 3 values", example_three),
        ("distribution numerics", distribution_numerics),
        ("scaling linearity", scaling_linearity),
        ("invariance", invariance),
        ("rank-1 equivalence", rank_one_equivalence),
        ("oracle equivalence", oracle_equivalence),
        ("calibration", calibration),
        ("determinism", determinism),
    ];
    let mut failed = 0;
    for (n, (name, f)) in criteria.iter().enumerate() {
        let o = f();
        failed += usize::from(!o.ok);
        println!("{} criterion {:>2} {name}: {}", if o.ok { "PASS" } else { "FAIL" }, n + 1, o.detail);
    }
    println!("acceptance: {} passed, {failed} failed", criteria.len() - failed);
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
