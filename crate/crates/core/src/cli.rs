//! Command-line front end.

use std::ffi::OsString;
use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use rayon::prelude::*;
use thiserror::Error;

use crate::curve::{bound_curve, fmt_num, linear_grid, CurveRow};
use crate::processes::{
    build_kstep_process, correlation_counterexamples, delta_s_range_witnesses, run_process, two_stage_memory_scenario,
    KStepSpec,
};
use crate::quantum::QState;
use crate::scenario::{Scenario, ScenarioError, Status};
use crate::sweep::sweep;

pub const EXIT_PASS: i32 = 0;
pub const EXIT_FAIL: i32 = 1;
pub const EXIT_USAGE: i32 = 2;

#[derive(Debug, Error)]
pub enum CliError {
    #[error(transparent)]
    Scenario(#[from] ScenarioError),

    #[error(transparent)]
    Numeric(#[from] crate::error::Error),

    #[error("cannot write output: {0}")]
    Io(#[from] std::io::Error),

    #[error("cannot write csv: {0}")]
    Csv(#[from] csv::Error),
}

#[derive(Debug, Parser)]
#[command(name = "landauer", version, about = "Finite-size Landauer bounds and process checks")]
pub struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Lower bounds on beta*dQ as functions of dS for reservoir dimension d
    Bounds(BoundsArgs),
    /// Run a scenario file and its checks
    Run(RunArgs),
    /// Heat of k-step processes between two diagonal states
    Kstep(KstepArgs),
    /// Check the process identities and bounds on random processes
    Verify(VerifyArgs),
    /// Processes attaining the extreme values of dS
    Witnesses(WitnessArgs),
    /// Scenarios where correlations with a memory beat the naive bound
    Counterexamples(CounterexampleArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Csv,
    Text,
}

#[derive(Debug, Args)]
struct OutputArgs {
    /// Write to this file instead of stdout
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long, value_enum)]
    format: Option<Format>,
}

#[derive(Debug, Args)]
struct BoundsArgs {
    #[arg(long, default_value_t = 16)]
    d: usize,
    /// First dS (default -log d)
    #[arg(long, allow_negative_numbers = true)]
    from: Option<f64>,
    /// Last dS (default log d)
    #[arg(long, allow_negative_numbers = true)]
    to: Option<f64>,
    #[arg(long, default_value_t = 201)]
    points: usize,
    #[command(flatten)]
    output: OutputArgs,
}

#[derive(Debug, Args)]
struct RunArgs {
    scenario: PathBuf,
    #[command(flatten)]
    output: OutputArgs,
}

#[derive(Debug, Args)]
struct KstepArgs {
    /// Initial spectrum, diagonal in the computational basis
    #[arg(long, value_delimiter = ',', default_value = "0.5,0.5")]
    initial: Vec<f64>,
    /// Target spectrum
    #[arg(long, value_delimiter = ',', default_value = "0.9,0.1")]
    target: Vec<f64>,
    #[arg(long, value_delimiter = ',', default_value = "10,20,50,100,200,500,1000")]
    ks: Vec<usize>,
    #[command(flatten)]
    output: OutputArgs,
}

#[derive(Debug, Args)]
struct VerifyArgs {
    #[arg(long)]
    seed: u64,
    #[arg(long, default_value_t = 200)]
    count: usize,
    #[command(flatten)]
    output: OutputArgs,
}

#[derive(Debug, Args)]
struct WitnessArgs {
    #[arg(long, default_value_t = 2)]
    d: usize,
    #[command(flatten)]
    output: OutputArgs,
}

#[derive(Debug, Args)]
struct CounterexampleArgs {
    #[arg(long, default_value_t = 16)]
    d: usize,
    /// Steps of the second stage of the entangled-memory scenario
    #[arg(long, default_value_t = 1000)]
    k: usize,
    #[command(flatten)]
    output: OutputArgs,
}

struct Table {
    header: Vec<&'static str>,
    rows: Vec<Vec<String>>,
}

impl Table {
    fn new(header: &[&'static str]) -> Self {
        Self { header: header.to_vec(), rows: Vec::new() }
    }

    fn push(&mut self, row: Vec<String>) {
        debug_assert_eq!(row.len(), self.header.len());
        self.rows.push(row);
    }

    fn write(&self, format: Format, out: &mut dyn Write) -> Result<(), CliError> {
        match format {
            Format::Csv => {
                let mut w = csv::Writer::from_writer(out);
                w.write_record(&self.header)?;
                for r in &self.rows {
                    w.write_record(r)?;
                }
                w.flush()?;
            }
            Format::Text => {
                let mut widths: Vec<usize> = self.header.iter().map(|h| h.len()).collect();
                for r in &self.rows {
                    for (w, cell) in widths.iter_mut().zip(r) {
                        *w = (*w).max(cell.len());
                    }
                }
                let line = |cells: Vec<&str>| {
                    let padded: Vec<String> = cells.iter().zip(&widths).map(|(c, w)| format!("{c:<w$}")).collect();
                    padded.join("  ").trim_end().to_string()
                };
                writeln!(out, "{}", line(self.header.clone()))?;
                for r in &self.rows {
                    writeln!(out, "{}", line(r.iter().map(String::as_str).collect()))?;
                }
            }
        }
        Ok(())
    }
}

fn status(ok: bool) -> String {
    if ok { Status::Pass } else { Status::Fail }.to_string()
}

fn emit(table: &Table, output: &OutputArgs, default: Format, stdout: &mut dyn Write) -> Result<(), CliError> {
    let format = output.format.unwrap_or(default);
    match &output.out {
        Some(path) => {
            let mut w = BufWriter::new(File::create(path)?);
            table.write(format, &mut w)?;
            w.flush()?;
        }
        None => table.write(format, stdout)?,
    }
    Ok(())
}

/// Parses `args` (including the program name), runs the command and returns
/// the process exit code.
pub fn run<I, S>(args: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = S>,
    S: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let text = e.render().to_string();
            return if e.exit_code() == 0 {
                let _ = write!(stdout, "{text}");
                EXIT_PASS
            } else {
                let _ = write!(stderr, "{text}");
                EXIT_USAGE
            };
        }
    };
    match execute(&cli.command, stdout) {
        Ok(true) => EXIT_PASS,
        Ok(false) => EXIT_FAIL,
        Err(e) => {
            let _ = writeln!(stderr, "error: {e}");
            EXIT_USAGE
        }
    }
}

/// `Ok(false)` when a check failed.
fn execute(command: &Command, stdout: &mut dyn Write) -> Result<bool, CliError> {
    match command {
        Command::Bounds(a) => bounds(a, stdout),
        Command::Run(a) => run_scenario(a, stdout),
        Command::Kstep(a) => kstep(a, stdout),
        Command::Verify(a) => verify(a, stdout),
        Command::Witnesses(a) => witnesses(a, stdout),
        Command::Counterexamples(a) => counterexamples(a, stdout),
    }
}

fn bounds(a: &BoundsArgs, stdout: &mut dyn Write) -> Result<bool, CliError> {
    let ld = (a.d.max(1) as f64).ln();
    let grid = linear_grid(a.from.unwrap_or(-ld), a.to.unwrap_or(ld), a.points)?;
    let rows = bound_curve(a.d, &grid)?;
    let mut t = Table::new(&CurveRow::HEADER);
    for r in &rows {
        t.push(r.fields().to_vec());
    }
    emit(&t, &a.output, Format::Csv, stdout)?;
    Ok(true)
}

fn run_scenario(a: &RunArgs, stdout: &mut dyn Write) -> Result<bool, CliError> {
    let outcome = Scenario::load(&a.scenario)?.run()?;
    let mut t = Table::new(&["item", "name", "value", "tol", "status"]);
    for (name, v) in &outcome.quantities {
        t.push(vec!["quantity".into(), name.to_string(), fmt_num(*v), String::new(), String::new()]);
    }
    for c in &outcome.checks {
        t.push(vec!["check".into(), c.label.clone(), fmt_num(c.value), fmt_num(c.tol), c.status.to_string()]);
    }
    if !outcome.name.is_empty() && a.output.format != Some(Format::Csv) && a.output.out.is_none() {
        writeln!(stdout, "scenario: {}", outcome.name)?;
    }
    emit(&t, &a.output, Format::Text, stdout)?;
    Ok(outcome.passed())
}

/// Tolerance on `lower <= gap <= upper` per row.
const KSTEP_ROW_TOL: f64 = 1e-9;

fn kstep(a: &KstepArgs, stdout: &mut dyn Write) -> Result<bool, CliError> {
    let initial = QState::diagonal(&a.initial)?;
    let target = QState::diagonal(&a.target)?;
    let reports = a
        .ks
        .par_iter()
        .map(|&k| build_kstep_process(&KStepSpec::linear(initial.clone(), target.clone(), k)))
        .collect::<crate::error::Result<Vec<_>>>()?;
    let mut t = Table::new(&["k", "delta_s", "beta_delta_q", "gap", "upper_bound", "lower_bound", "status"]);
    let mut ok = true;
    for r in &reports {
        let upper = r.upper_bound.unwrap_or(f64::INFINITY);
        let row_ok = r.lower_bound <= r.gap + KSTEP_ROW_TOL && r.gap <= upper + KSTEP_ROW_TOL;
        ok &= row_ok;
        t.push(vec![
            r.k.to_string(),
            fmt_num(r.delta_s),
            fmt_num(r.beta_delta_q),
            fmt_num(r.gap),
            r.upper_bound.map_or("nan".into(), fmt_num),
            fmt_num(r.lower_bound),
            status(row_ok),
        ]);
    }
    emit(&t, &a.output, Format::Csv, stdout)?;
    Ok(ok)
}

fn verify(a: &VerifyArgs, stdout: &mut dyn Write) -> Result<bool, CliError> {
    let s = sweep(a.seed, a.count)?;
    let mut t = Table::new(&["quantity", "value", "limit", "status"]);
    let mut ok = true;
    let mut row = |name: &str, v: f64, limit: f64, upper: bool| {
        let pass = if upper { v <= limit } else { v >= limit };
        ok &= pass;
        t.push(vec![name.into(), fmt_num(v), fmt_num(limit), status(pass)]);
    };
    row("max_equality_residual", s.max_equality_residual, 1e-8, true);
    row("max_second_law_residual", s.max_second_law_residual, 1e-9, true);
    row("min_mutual_info", s.min_mutual_info, -1e-12, false);
    row("min_landauer_margin", s.min_landauer_margin, -1e-8, false);
    row("min_finite_size_margin", s.min_finite_size_margin, -1e-8, false);
    row("min_sharpened_margin", s.min_sharpened_margin, -1e-8, false);
    row("min_pureness_margin", s.min_pureness_margin, -1e-10, false);
    row("max_integral_residual", s.max_integral_residual, 1e-6, true);
    if a.output.format != Some(Format::Csv) && a.output.out.is_none() {
        writeln!(stdout, "{} processes from seed {}", s.count, a.seed)?;
    }
    emit(&t, &a.output, Format::Text, stdout)?;
    Ok(ok)
}

/// Tolerance on the attained extreme values of `dS`.
const WITNESS_TOL: f64 = 1e-8;

fn witnesses(a: &WitnessArgs, stdout: &mut dyn Write) -> Result<bool, CliError> {
    let w = delta_s_range_witnesses::<f64>(a.d)?;
    let ld = (a.d as f64).ln();
    let mut t = Table::new(&["witness", "delta_s", "target", "delta_q", "beta_delta_q", "status"]);
    let mut ok = true;
    for (name, spec, target, no_heat) in [
        ("upper", &w.upper, ld, false),
        ("classical-lower", &w.classical_lower, -ld, false),
        ("quantum-lower", &w.quantum_lower, -2.0 * ld, true),
    ] {
        let r = run_process(spec)?;
        let pass = (r.delta_s - target).abs() <= WITNESS_TOL && (!no_heat || r.delta_q.abs() <= WITNESS_TOL);
        ok &= pass;
        t.push(vec![
            name.into(),
            fmt_num(r.delta_s),
            fmt_num(target),
            fmt_num(r.delta_q),
            fmt_num(r.beta_delta_q),
            status(pass),
        ]);
    }
    emit(&t, &a.output, Format::Text, stdout)?;
    Ok(ok)
}

fn counterexamples(a: &CounterexampleArgs, stdout: &mut dyn Write) -> Result<bool, CliError> {
    let c = correlation_counterexamples::<f64>(a.d)?;
    let two = two_stage_memory_scenario::<f64>(a.k)?;
    let ld = (a.d as f64).ln();
    let ln2 = 2f64.ln();
    let mut t = Table::new(&["scenario", "quantity", "value", "claim", "status"]);
    let mut ok = true;
    let mut row = |scenario: &str, q: &str, v: f64, claim: String, pass: Option<bool>| {
        ok &= pass.unwrap_or(true);
        t.push(vec![scenario.into(), q.into(), fmt_num(v), claim, pass.map_or(String::new(), status)]);
    };
    row("classical-memory", "delta_i", c.correlated_delta_i, "= log 2".into(), Some((c.correlated_delta_i - ln2).abs() < 1e-9));
    row("classical-memory", "beta_delta_q", c.correlated.beta_delta_q, "= 0".into(), Some(c.correlated.beta_delta_q.abs() < 1e-9));
    row("mixed-reservoir", "lambda", c.lambda, String::new(), None);
    let bound = -0.4 * ld;
    row("mixed-reservoir", "beta_delta_q", c.beta_delta_q, format!("< {}", fmt_num(bound)), Some(c.beta_delta_q < bound));
    let dense_ok = (c.beta_delta_q_dense - c.beta_delta_q).abs() < 1e-8;
    row("mixed-reservoir", "beta_delta_q_dense", c.beta_delta_q_dense, "= closed form".into(), Some(dense_ok));
    row("mixed-reservoir", "delta_i", c.product_delta_i, "= 0".into(), Some(c.product_delta_i.abs() < 1e-9));
    let floor = 0.2 - ld;
    row("mixed-reservoir", "scan_min", c.scan_min, format!("> {}", fmt_num(floor)), Some(c.scan_min > floor));
    row("mixed-reservoir", "scan_max", c.scan_max, String::new(), None);
    row("entangled-memory", "stage1_beta_delta_q", two.stage1.beta_delta_q, String::new(), None);
    row("entangled-memory", "stage2_beta_delta_q", two.stage2.beta_delta_q, String::new(), None);
    row("entangled-memory", "total_beta_delta_q", two.total_beta_delta_q, format!("-> {}", fmt_num(two.target)), None);
    row("entangled-memory", "memory_entropy_final", two.memory_entropy_final, String::new(), None);
    emit(&t, &a.output, Format::Text, stdout)?;
    Ok(ok)
}
