//! Argument parsing and command dispatch.

use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::PathBuf;
use std::time::{SystemTime, UNIX_EPOCH};

use chi_audit_core::{
    audit_scaling, check_assumptions, homogeneity_test, InvariantDecision, InvariantStatKind, ScalingAudit,
};
use clap::{Args, Parser, Subcommand, ValueEnum};

use crate::datasets::{self, DATASETS};
use crate::error::CliError;
use crate::input::{read_table, write_table, CsvLayout, LoadedTable};
use crate::parallel::invariant_test_par;
use crate::report::{InputSummary, Report, ToolInfo, SCHEMA_VERSION};

#[derive(Debug, Parser)]
#[command(
    name = "chi-audit",
    version,
    about = "Pearson chi-square tests, scaling audits and scale-invariant statistics"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Pearson test of homogeneity of the rows.
    Test(TableArgs),
    /// Test the table rescaled by each --scale factor and locate the critical scale.
    Audit {
        #[command(flatten)]
        table: TableArgs,
        /// Scale factor to probe; repeat for several.
        #[arg(long = "scale", value_name = "C")]
        scales: Vec<f64>,
    },
    /// Scale-invariant statistic with a Monte Carlo calibrated critical value.
    Invariant {
        #[command(flatten)]
        table: TableArgs,
        #[arg(long, value_enum, default_value_t = KindArg::SumNormalized)]
        kind: KindArg,
        #[arg(long, default_value_t = 10_000)]
        trials: u64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Write a bundled dataset as CSV, or list them when no name is given.
    Datasets {
        name: Option<String>,
        /// Output file; standard output by default.
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
}

#[derive(Debug, Args)]
pub struct TableArgs {
    /// CSV file holding the contingency table.
    pub input: PathBuf,
    /// Significance level.
    #[arg(long, default_value_t = 0.05)]
    pub alpha: f64,
    /// Print the report as one JSON object.
    #[arg(long)]
    pub json: bool,
    /// Minimum expected frequency for the rule-of-thumb check.
    #[arg(long, default_value_t = 5.0)]
    pub threshold: f64,
    /// First row holds column labels.
    #[arg(long, overrides_with = "no_header")]
    pub header: bool,
    #[arg(long, overrides_with = "header")]
    pub no_header: bool,
    /// First column holds row labels.
    #[arg(long, overrides_with = "no_labels")]
    pub labels: bool,
    #[arg(long, overrides_with = "labels")]
    pub no_labels: bool,
    /// Leave the timestamp out of JSON reports.
    #[arg(long)]
    pub no_timestamp: bool,
}

impl TableArgs {
    fn layout(&self) -> CsvLayout {
        let pick = |yes: bool, no: bool| match (yes, no) {
            (true, _) => Some(true),
            (_, true) => Some(false),
            _ => None,
        };
        CsvLayout { header: pick(self.header, self.no_header), labels: pick(self.labels, self.no_labels) }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum KindArg {
    SquaredDenom,
    SumNormalized,
    MaxNormalized,
}

impl From<KindArg> for InvariantStatKind {
    fn from(k: KindArg) -> Self {
        match k {
            KindArg::SquaredDenom => InvariantStatKind::SquaredDenom,
            KindArg::SumNormalized => InvariantStatKind::SumNormalized,
            KindArg::MaxNormalized => InvariantStatKind::MaxNormalized,
        }
    }
}

pub fn run(cli: Cli, out: &mut dyn Write) -> Result<(), CliError> {
    match cli.command {
        Command::Test(args) => {
            let loaded = read_table(&args.input, args.layout())?;
            let report = base_report("test", &args, &loaded)?;
            emit(&report, &args, out)
        }
        Command::Audit { table: args, scales } => {
            let loaded = read_table(&args.input, args.layout())?;
            let mut report = base_report("audit", &args, &loaded)?;
            let audit =
                audit_scaling(&loaded.table, args.alpha, &scales).map_err(|e| CliError::core(&loaded.path, e))?;
            if audit.proportional {
                report.warnings.push("rows are proportional: no rescaling leads to rejection".into());
            }
            report.scaling_audit = Some(audit);
            emit(&report, &args, out)
        }
        Command::Invariant { table: args, kind, trials, seed } => {
            let loaded = read_table(&args.input, args.layout())?;
            let mut report = base_report("invariant", &args, &loaded)?;
            let decision = invariant_test_par(&loaded.table, kind.into(), args.alpha, trials, seed)
                .map_err(|e| CliError::core(&loaded.path, e))?;
            if decision.calibration.too_few_trials {
                report.warnings.push(format!(
                    "too-few-trials: {} Monte Carlo trials; at least {} recommended",
                    trials,
                    chi_audit_core::invariance::MIN_RECOMMENDED_TRIALS
                ));
            }
            if loaded.table.observed().as_slice().iter().any(|v| v.fract() != 0.0) {
                report.warnings.push("non-integer counts: null drawn with rounded row totals".into());
            }
            report.invariant = Some(decision);
            emit(&report, &args, out)
        }
        Command::Datasets { name: None, .. } => {
            for d in &DATASETS {
                writeln!(out, "{:<10} {}", d.name, d.description).map_err(CliError::Output)?;
            }
            Ok(())
        }
        Command::Datasets { name: Some(name), output } => {
            let table = datasets::find(&name)?.table();
            match output {
                Some(path) => {
                    let file = File::create(&path).map_err(|source| CliError::Io { path: path.clone(), source })?;
                    write_table(&table, BufWriter::new(file))
                }
                None => write_table(&table, out),
            }
        }
    }
}

fn base_report(command: &str, args: &TableArgs, loaded: &LoadedTable) -> Result<Report, CliError> {
    let ctx = |e| CliError::core(&loaded.path, e);
    let pearson = homogeneity_test(&loaded.table, args.alpha).map_err(ctx)?;
    let assumptions = check_assumptions(&loaded.table, args.threshold);
    let mut warnings = Vec::new();
    if !assumptions.passes {
        warnings.push(format!(
            "low-expected-frequency: {} cell(s) with expected frequency below {}",
            assumptions.cells_below_threshold, assumptions.threshold_used
        ));
    }
    let timestamp =
        (!args.no_timestamp).then(|| SystemTime::now().duration_since(UNIX_EPOCH).map_or(0, |d| d.as_secs()));
    Ok(Report {
        schema_version: SCHEMA_VERSION,
        tool: ToolInfo::default(),
        command: command.to_owned(),
        timestamp,
        input: InputSummary::from(loaded),
        pearson,
        assumptions,
        scaling_audit: None,
        invariant: None,
        warnings,
    })
}

fn emit(report: &Report, args: &TableArgs, out: &mut dyn Write) -> Result<(), CliError> {
    let text = if args.json { report.to_json() } else { render(report) };
    writeln!(out, "{text}").map_err(CliError::Output)
}

fn num(x: f64) -> String {
    if x.is_infinite() {
        "infinite".into()
    } else if x != 0.0 && x.abs() < 1e-4 {
        format!("{x:.4e}")
    } else {
        format!("{x:.6}")
    }
}

fn verdict(reject: bool) -> &'static str {
    if reject {
        "reject H0"
    } else {
        "fail to reject H0"
    }
}

/// Plain-text summary of a report.
pub fn render(r: &Report) -> String {
    use std::fmt::Write as _;
    let mut s = String::new();
    let p = &r.pearson;
    let total: f64 = r.input.observed.sum();
    let _ = writeln!(
        s,
        "input        {} ({} x {}, total {}, sha256 {})",
        r.input.path,
        r.input.rows,
        r.input.cols,
        num(total),
        r.input.sha256
    );
    let _ = writeln!(s, "statistic    {}", num(p.statistic));
    let _ = writeln!(s, "dof          {}", p.dof);
    let _ = writeln!(s, "critical     {} (alpha {})", num(p.critical_value), p.alpha);
    let _ = writeln!(s, "p-value      {}", num(p.p_value));
    let _ = writeln!(s, "decision     {}", verdict(p.reject_h0));
    let a = &r.assumptions;
    let _ = writeln!(
        s,
        "expected     min {}; {} cell(s) below 5, {} below 10",
        num(a.min_expected),
        a.cells_below_5,
        a.cells_below_10
    );
    if let Some(audit) = &r.scaling_audit {
        render_audit(&mut s, audit);
    }
    if let Some(inv) = &r.invariant {
        render_invariant(&mut s, inv);
    }
    for w in &r.warnings {
        let _ = writeln!(s, "warning      {w}");
    }
    s.truncate(s.trim_end().len());
    s
}

fn render_audit(s: &mut String, a: &ScalingAudit) {
    use std::fmt::Write as _;
    let _ = writeln!(s, "critical c*  {}", num(a.critical_scale));
    let _ = writeln!(s, "proportional {}", a.proportional);
    for d in &a.decisions {
        let _ = writeln!(
            s,
            "  scale {:<12} statistic {:<14} p {:<12} {}",
            num(d.scale),
            num(d.statistic),
            num(d.p_value),
            verdict(d.reject)
        );
    }
    if let Some(f) = &a.flip_check {
        let _ = writeln!(
            s,
            "flip check   {} at {}, {} at {}",
            verdict(f.below.reject),
            num(f.below.scale),
            verdict(f.above.reject),
            num(f.above.scale)
        );
    }
}

fn render_invariant(s: &mut String, d: &InvariantDecision) {
    use std::fmt::Write as _;
    let c = &d.calibration;
    let _ = writeln!(s, "invariant    {} = {}", d.kind, num(d.statistic));
    let _ = writeln!(
        s,
        "calibrated   {} +/- {} (Monte Carlo SE; {} trials, seed {})",
        num(d.critical_value),
        num(c.monte_carlo_se),
        c.trials,
        c.seed
    );
    let _ = writeln!(s, "decision     {}", verdict(d.reject));
}
