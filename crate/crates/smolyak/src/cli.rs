//! Command-line front end.

use std::ffi::OsString;
use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::PathBuf;

use clap::{Parser, Subcommand};
use smolyak_core::cubature::{Method, RecoveryConfig};
use smolyak_core::witness::{WitnessConfig, WitnessVariant};
use smolyak_core::GridVariant;

use crate::corpus::CorpusFunction;
use crate::error::{CliError, CliResult};
use crate::experiments::{
    bounds_table, convergence, convergence_table, grid_rows, grid_summary, integrate, measure_error, method_name,
    method_order, parse_method, parse_p, parse_variant, scheme_ab, witness, ConvergenceSpec,
};
use crate::io::{expansion_table, rule_table, Format, Table};

#[derive(Debug, Parser)]
#[command(name = "smolyak", version, about = "Sparse-grid recovery, cubature and error-bound experiments")]
pub struct Cli {
    #[command(subcommand)]
    pub mode: Mode,
    /// Dimension.
    #[arg(long, global = true, default_value_t = 2)]
    pub d: usize,
    /// Grid parameter (first value of a sweep).
    #[arg(long, global = true, default_value_t = 4)]
    pub m: u32,
    /// Last grid parameter of a sweep.
    #[arg(long = "m-max", global = true)]
    pub m_max: Option<u32>,
    /// Active-variable budget (defaults to d).
    #[arg(long, global = true)]
    pub nu: Option<usize>,
    /// Smoothness.
    #[arg(long, global = true, default_value_t = 2.0)]
    pub alpha: f64,
    /// Error exponent, a number ≥ 1 or `inf`.
    #[arg(long, global = true, default_value = "inf", value_parser = parse_p)]
    pub p: f64,
    /// Grid variant: full, interior or nu.
    #[arg(long, global = true, default_value = "full")]
    pub variant: String,
    /// Recovery method: faber, linear, cubic, quintic or file:PATH.
    #[arg(long, global = true, default_value = "faber")]
    pub scheme: String,
    /// Corpus function.
    #[arg(long, global = true, default_value = "prodsine")]
    pub corpus: String,
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,
    /// Output file (stdout when absent).
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    #[arg(long, global = true, default_value = "csv")]
    pub format: Format,
    /// Random trials of the Hölder spot-check.
    #[arg(long, global = true, default_value_t = 10_000)]
    pub trials: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Subcommand)]
pub enum Mode {
    /// Export the points of a sparse grid with their generating (k, s) pairs.
    Grid,
    /// Recover a corpus function and export the coefficients.
    Recover,
    /// Derive a cubature rule and integrate a corpus function.
    Integrate,
    /// Tabulate the error bounds over m.
    Bounds,
    /// Check the lower-bound witness function.
    Witness,
    /// Measure recovery errors against the bounds over m.
    Convergence,
}

impl Cli {
    fn nu(&self) -> usize {
        self.nu.unwrap_or(self.d)
    }

    fn grid_variant(&self) -> CliResult<GridVariant> {
        parse_variant(&self.variant, self.d, self.nu)
    }

    fn m_range(&self) -> CliResult<(u32, u32)> {
        let hi = self.m_max.unwrap_or(self.m);
        if hi < self.m {
            return Err(CliError::Spec(format!("--m-max {hi} is below --m {}", self.m)));
        }
        Ok((self.m, hi))
    }

    fn validate(&self) -> CliResult<()> {
        if self.d == 0 || self.d > 10 {
            return Err(CliError::Spec(format!("dimension {} outside 1..=10", self.d)));
        }
        if !(self.alpha > 0.0) || !self.alpha.is_finite() {
            return Err(CliError::Spec(format!("smoothness {} must be positive", self.alpha)));
        }
        if !(self.p >= 1.0) {
            return Err(CliError::Spec(format!("exponent {} below 1", self.p)));
        }
        Ok(())
    }
}

/// Output of a run: the main table plus a summary for stderr.
pub struct Outcome {
    pub table: Table,
    pub notes: Vec<String>,
    /// Failed checks of a verification mode.
    pub violations: Vec<String>,
}

/// Runs one mode; the caller writes the table.
pub fn run(cli: &Cli) -> CliResult<Outcome> {
    cli.validate()?;
    let mut notes = Vec::new();
    let mut violations = Vec::new();
    let table = match cli.mode {
        Mode::Grid => {
            let variant = cli.grid_variant()?;
            let (points, origins, formula) = grid_summary(cli.d, cli.m, variant)?;
            notes.push(format!("distinct points {points}, generating pairs {origins}, closed-form count {formula}"));
            grid_rows(cli.d, cli.m, variant)?
        }
        Mode::Recover => {
            let variant = cli.grid_variant()?;
            let method = parse_method(&cli.scheme)?;
            let f = CorpusFunction::build(&cli.corpus, cli.d, cli.nu(), cli.alpha, method_order(&method))?;
            let config = RecoveryConfig::new(cli.d, cli.m, variant, method.clone())?;
            let rec = config.recover(|x: &[f64]| f.eval(x))?;
            let err = measure_error(&f, &rec.expansion, cli.p, cli.m, cli.seed);
            notes.push(format!(
                "{} on '{}': {} samples, {} coefficients, measured L_{} error {:e} on {} points",
                method_name(&method),
                f.name,
                rec.sample_points.len(),
                rec.expansion.coefficient_count(),
                cli.p,
                err.value,
                err.points
            ));
            expansion_table(&rec.expansion)
        }
        Mode::Integrate => {
            let variant = cli.grid_variant()?;
            let method = parse_method(&cli.scheme)?;
            let f = CorpusFunction::build(&cli.corpus, cli.d, cli.nu(), cli.alpha, method_order(&method))?;
            let config = RecoveryConfig::new(cli.d, cli.m, variant, method)?;
            let report = integrate(&f, &config)?;
            for row in &report.summary().rows {
                notes.push(format!("{}: {}", row[0].as_str().unwrap_or(""), row[1]));
            }
            violations = report.violations();
            rule_table(&report.rule, cli.d)
        }
        Mode::Bounds => {
            let (lo, hi) = cli.m_range()?;
            let method = parse_method(&cli.scheme)?;
            let ab = match method {
                Method::Faber => None,
                _ => scheme_ab(&method, cli.alpha, cli.p)?,
            };
            let (table, bad) = bounds_table(cli.alpha, cli.p, cli.d, cli.nu(), lo, hi, ab);
            violations = bad;
            table
        }
        Mode::Witness => {
            let variant = match cli.grid_variant()? {
                GridVariant::Interior => WitnessVariant::Interior,
                GridVariant::Full => WitnessVariant::SupportBounded(cli.d),
                GridVariant::SupportBounded(nu) => WitnessVariant::SupportBounded(nu),
            };
            let config = WitnessConfig::new(cli.d, cli.m, cli.alpha, variant)?;
            let report = witness(config, cli.p, cli.trials, cli.seed)?;
            if !report.certifies {
                notes.push("the witness norm does not reach the theorem's refined lower bound".into());
            }
            violations = report.violations();
            report.table()
        }
        Mode::Convergence => {
            let (lo, hi) = cli.m_range()?;
            let spec = ConvergenceSpec {
                corpus: cli.corpus.clone(),
                d: cli.d,
                nu: cli.nu(),
                alpha: cli.alpha,
                p: cli.p,
                variant: cli.grid_variant()?,
                method: parse_method(&cli.scheme)?,
                m_min: lo,
                m_max: hi,
                seed: cli.seed,
            };
            let rows = convergence(&spec)?;
            for r in rows.iter().filter(|r| !r.within_bound(1e-9)) {
                violations.push(format!(
                    "m = {}: error {:e} exceeds the bound {:e}",
                    r.m, r.empirical_error, r.upper_bound_refined
                ));
            }
            convergence_table(&rows)
        }
    };
    Ok(Outcome { table, notes, violations })
}

fn write_table(cli: &Cli, table: &Table) -> CliResult<()> {
    match &cli.out {
        Some(path) => {
            let mut w = BufWriter::new(File::create(path)?);
            table.write(&mut w, cli.format)?;
            w.flush()?;
        }
        None => {
            let stdout = std::io::stdout();
            let mut lock = stdout.lock();
            table.write(&mut lock, cli.format)?;
            lock.flush()?;
        }
    }
    Ok(())
}

/// Parses arguments, runs, writes outputs and returns the exit status.
pub fn main_with_args<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { 2 } else { 0 };
        }
    };
    let result = run(&cli).and_then(|outcome| {
        write_table(&cli, &outcome.table)?;
        for n in &outcome.notes {
            eprintln!("{n}");
        }
        if outcome.violations.is_empty() {
            Ok(())
        } else {
            Err(CliError::Verification(outcome.violations.join("; ")))
        }
    });
    match result {
        Ok(()) => 0,
        Err(e) => {
            eprintln!("error: {e}");
            e.exit_code()
        }
    }
}
