use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use cenmcc::compare::{self, CompareError, MeasurePair};
use cenmcc::csv_io::{self, CsvError};
use cenmcc::format::{self, DEFAULT_SIG_DIGITS};
use cenmcc::runner::{self, EmitFormat, RunError};
use cenmcc_core::experiment::{self, ExperimentConfig, ExperimentSummary};
use cenmcc_core::families::{self, FamilyKind, FamilyParams, FormCheck};
use cenmcc_core::{metrics, ConfusionMatrix};

const EXIT_VALIDATION: u8 = 2;
const EXIT_BUDGET: u8 = 3;
const EXIT_IO: u8 = 4;
const EXIT_CHECK: u8 = 5;

const FAMILY_TOLERANCE: f64 = 1e-10;
const BINARY_TOLERANCE: f64 = 1e-12;

/// Multi-class confusion-matrix measures: accuracy, MCC, confusion entropy
/// and the transformed MCC.
///
/// Exit codes: 0 success, 2 invalid input or flags, 3 pair budget exceeded,
/// 4 I/O failure, 5 a closed-form check or the experiment sanity band failed.
#[derive(Debug, Parser)]
#[command(name = "cenmcc", version)]
struct Cli {
    /// Print numbers with full precision instead of 7 significant digits.
    #[arg(long, global = true)]
    full_precision: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Measures of one confusion matrix read from CSV.
    ///
    /// The matrix file holds N lines of N nonnegative integers; row i is
    /// true class i, column j predicted class j. With --classes, the file
    /// instead holds one `true,predicted` pair per line, labels 1..=N.
    Compute(ComputeArgs),
    /// Builds a member of an analytic family and checks its closed forms
    /// against direct evaluation (tolerance 1e-10).
    Family(FamilyArgs),
    /// Compares two measures over every matrix with the given row sums.
    EnumerateCompare(EnumerateArgs),
    /// Random-matrix experiment relating the transformed MCC to k(N)·CEN.
    Experiment(ExperimentArgs),
}

#[derive(Debug, Args)]
struct ComputeArgs {
    /// Matrix CSV, or label-pair CSV when --classes is given.
    file: PathBuf,
    /// Read 1-based `true,predicted` label pairs for this many classes.
    #[arg(long, value_name = "N")]
    classes: Option<usize>,
    /// On a 2×2 matrix, also compare the binary closed forms with the
    /// general ones (tolerance 1e-12). Rows are [TP, FN] and [FP, TN].
    #[arg(long)]
    binary_closed_form: bool,
    /// Print the report as JSON.
    #[arg(long)]
    json: bool,
}

#[derive(Debug, Args)]
struct FamilyArgs {
    /// za (ones, corner (N,1) = A), unbalanced (last row all A), diag-b
    /// (T on the diagonal, F elsewhere) or uniform (all ones).
    #[arg(value_parser = parse_family)]
    kind: FamilyKind,
    /// Class count, at least 3.
    #[arg(long)]
    n: usize,
    /// Corner or last-row value for za and unbalanced.
    #[arg(long)]
    a: Option<u64>,
    /// Diagonal value for diag-b.
    #[arg(long)]
    t: Option<u64>,
    /// Off-diagonal value for diag-b.
    #[arg(long)]
    f: Option<u64>,
}

#[derive(Debug, Args)]
struct EnumerateArgs {
    /// Row sums, comma separated, e.g. 2,4,3.
    #[arg(long, value_delimiter = ',', required = true)]
    rows: Vec<u64>,
    /// Measures `f-g` from acc, mcc, cen; degrees are of f over g. CEN is
    /// negated before comparison so that larger is better for all three.
    #[arg(long, default_value = "cen-mcc")]
    pair: MeasurePair,
    /// Values closer than this count as tied.
    #[arg(long, default_value = "1e-12")]
    tolerance: f64,
    /// Refuse domains with more unordered pairs than this.
    #[arg(long, default_value = "100000000")]
    pair_budget: u64,
    /// Worker threads (default: all cores).
    #[arg(long, value_parser = clap::value_parser!(u16).range(1..))]
    jobs: Option<u16>,
}

#[derive(Debug, Args)]
struct ExperimentArgs {
    /// Number of random matrices.
    #[arg(long = "n", default_value = "200000")]
    n_matrices: u64,
    /// Random seed; every run with the same flags is identical.
    #[arg(long, default_value = "20100")]
    seed: u64,
    /// Smallest class count.
    #[arg(long, default_value = "3")]
    dim_min: usize,
    /// Largest class count.
    #[arg(long, default_value = "30")]
    dim_max: usize,
    /// Diagonal entries are drawn from 1..=DIAG_MAX.
    #[arg(long, default_value = "1000")]
    diag_max: u64,
    /// Smallest off-diagonal scale; off-diagonal entries are drawn from
    /// 1..=floor(DIAG_MAX·rho) with rho uniform per matrix.
    #[arg(long, default_value = "0.01")]
    rho_min: f64,
    /// Largest off-diagonal scale.
    #[arg(long, default_value = "1.0")]
    rho_max: f64,
    /// Bootstrap resamples for the ratio interval.
    #[arg(long, default_value = "10000")]
    resamples: usize,
    /// Bootstrap confidence level.
    #[arg(long, default_value = "0.95")]
    level: f64,
    /// Pairs counted for consistency; above this, pairs are sampled.
    #[arg(long, default_value = "100000000")]
    pair_budget: u64,
    /// Values closer than this count as tied.
    #[arg(long, default_value = "1e-12")]
    tolerance: f64,
    /// Worker threads (default: all cores). Output does not depend on it.
    #[arg(long, value_parser = clap::value_parser!(u16).range(1..))]
    jobs: Option<u16>,
    /// Write per-matrix records as CSV here.
    #[arg(long, value_name = "PATH")]
    records: Option<PathBuf>,
    /// Write the summary and configuration as JSON here.
    #[arg(long, value_name = "PATH")]
    summary: Option<PathBuf>,
}

impl ExperimentArgs {
    fn config(&self) -> ExperimentConfig {
        ExperimentConfig {
            n_matrices: self.n_matrices,
            dim_min: self.dim_min,
            dim_max: self.dim_max,
            diag_max: self.diag_max,
            rho_min: self.rho_min,
            rho_max: self.rho_max,
            seed: self.seed,
            bootstrap_resamples: self.resamples,
            bootstrap_level: self.level,
            pair_budget: self.pair_budget,
            tie_tolerance: self.tolerance,
        }
    }
}

fn parse_family(s: &str) -> Result<FamilyKind, String> {
    let key: String = s.chars().filter(|c| !matches!(c, '-' | '_')).collect();
    match key.to_ascii_lowercase().as_str() {
        "za" => Ok(FamilyKind::Za),
        "unbalanced" => Ok(FamilyKind::Unbalanced),
        "diagb" => Ok(FamilyKind::DiagB),
        "uniform" => Ok(FamilyKind::Uniform),
        _ => Err(format!("unknown family {s:?} (expected za, unbalanced, diag-b or uniform)")),
    }
}

#[derive(Debug)]
struct Failure {
    code: u8,
    message: String,
}

impl Failure {
    fn new(code: u8, message: impl ToString) -> Self {
        Failure { code, message: message.to_string() }
    }

    fn io(path: &Path, e: io::Error) -> Self {
        Failure::new(EXIT_IO, format!("{}: {e}", path.display()))
    }
}

impl From<io::Error> for Failure {
    fn from(e: io::Error) -> Self {
        Failure::new(EXIT_IO, e)
    }
}

#[derive(Debug, Clone, Copy)]
struct Printer {
    full: bool,
}

impl Printer {
    fn num(self, x: f64) -> String {
        format::number(x, DEFAULT_SIG_DIGITS, self.full)
    }

    fn opt(self, x: Option<f64>) -> String {
        format::optional(x, DEFAULT_SIG_DIGITS, self.full)
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let printer = Printer { full: cli.full_precision };
    let result = match cli.command {
        Command::Compute(args) => compute(&args, printer),
        Command::Family(args) => family(&args, printer),
        Command::EnumerateCompare(args) => enumerate_compare(&args, printer),
        Command::Experiment(args) => run_experiment(&args, printer),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            eprintln!("error: {}", f.message);
            ExitCode::from(f.code)
        }
    }
}

fn read_matrix(args: &ComputeArgs) -> Result<ConfusionMatrix, Failure> {
    let file = File::open(&args.file).map_err(|e| Failure::io(&args.file, e))?;
    let parsed = match args.classes {
        Some(n) => csv_io::read_label_pairs(file, n),
        None => csv_io::read_csv(file),
    };
    parsed.map_err(|e| match e {
        CsvError::Csv(ref inner) if inner.is_io_error() => Failure::new(EXIT_IO, e),
        e => Failure::new(EXIT_VALIDATION, format!("{}: {e}", args.file.display())),
    })
}

fn print_checks(out: &mut impl Write, checks: &[FormCheck], p: Printer) -> io::Result<()> {
    writeln!(out, "{:<14} {:>16} {:>16} {:>16}", "quantity", "closed", "direct", "abs_diff")?;
    for c in checks {
        writeln!(
            out,
            "{:<14} {:>16} {:>16} {:>16}",
            c.quantity,
            p.num(c.closed),
            p.num(c.direct),
            p.num(c.abs_diff())
        )?;
    }
    Ok(())
}

fn failed_checks(checks: &[FormCheck], tolerance: f64) -> Result<(), Failure> {
    let failed: Vec<&str> = checks
        .iter()
        .filter(|c| !(c.abs_diff() <= tolerance))
        .map(|c| c.quantity)
        .collect();
    if failed.is_empty() {
        Ok(())
    } else {
        Err(Failure::new(
            EXIT_CHECK,
            format!("closed form differs from direct value by more than {tolerance:e}: {}", failed.join(", ")),
        ))
    }
}

fn compute(args: &ComputeArgs, p: Printer) -> Result<(), Failure> {
    let c = read_matrix(args)?;
    let report = metrics::metric_report(&c);
    let mut out = io::stdout().lock();
    if args.json {
        serde_json::to_writer_pretty(&mut out, &report).map_err(io::Error::other)?;
        writeln!(out)?;
    } else {
        writeln!(out, "n      {}", report.n)?;
        writeln!(out, "total  {}", report.total)?;
        writeln!(out, "acc    {}", p.num(report.acc))?;
        writeln!(out, "mcc    {}", p.num(report.mcc))?;
        writeln!(out, "cen    {}", p.num(report.cen))?;
        writeln!(out, "tmcc   {}", p.opt(report.tmcc))?;
        writeln!(out, "k_cen  {}", p.opt(report.k_cen))?;
    }
    if args.binary_closed_form {
        if c.n() != 2 {
            return Err(Failure::new(
                EXIT_VALIDATION,
                format!("--binary-closed-form needs a 2×2 matrix, got {0}×{0}", c.n()),
            ));
        }
        let &[tp, fn_, fp, tn] = c.entries() else { unreachable!("2×2 matrix has four entries") };
        let binary = |r: Result<f64, _>| r.map_err(|e| Failure::new(EXIT_VALIDATION, e));
        let checks = [
            FormCheck { quantity: "mcc", closed: binary(metrics::mcc_binary(tp, fn_, fp, tn))?, direct: report.mcc },
            FormCheck { quantity: "cen", closed: binary(metrics::cen_binary(tp, fn_, fp, tn))?, direct: report.cen },
        ];
        if !args.json {
            writeln!(out)?;
        }
        print_checks(&mut out, &checks, p)?;
        failed_checks(&checks, BINARY_TOLERANCE)?;
    }
    Ok(())
}

fn family_params(args: &FamilyArgs) -> Result<FamilyParams, Failure> {
    let need = |v: Option<u64>, flag: &str| {
        v.ok_or_else(|| Failure::new(EXIT_VALIDATION, format!("this family needs --{flag}")))
    };
    let n = args.n;
    Ok(match args.kind {
        FamilyKind::Za => FamilyParams::Za { n, a: need(args.a, "a")? },
        FamilyKind::Unbalanced => FamilyParams::Unbalanced { n, a: need(args.a, "a")? },
        FamilyKind::DiagB => FamilyParams::DiagB { n, t: need(args.t, "t")?, f: need(args.f, "f")? },
        FamilyKind::Uniform => FamilyParams::Uniform { n },
    })
}

fn family(args: &FamilyArgs, p: Printer) -> Result<(), Failure> {
    let params = family_params(args)?;
    let invalid = |e: cenmcc_core::FamilyError| Failure::new(EXIT_VALIDATION, e);
    let c = families::make_matrix(&params).map_err(invalid)?;
    let checks = families::checks(&params).map_err(invalid)?;
    let mut out = io::stdout().lock();
    writeln!(out, "matrix (row i = true class i, column j = predicted class j, 1-based)")?;
    csv_io::write_csv(&c, &mut out)?;
    writeln!(out)?;
    print_checks(&mut out, &checks, p)?;
    failed_checks(&checks, FAMILY_TOLERANCE)
}

fn pool(jobs: Option<u16>) -> Result<rayon::ThreadPool, Failure> {
    runner::thread_pool(jobs.map(usize::from)).map_err(|e| Failure::new(EXIT_IO, e))
}

fn enumerate_compare(args: &EnumerateArgs, p: Printer) -> Result<(), Failure> {
    let pool = pool(args.jobs)?;
    let report = pool
        .install(|| compare::enumerate_compare(&args.rows, args.pair, args.tolerance, args.pair_budget))
        .map_err(|e| match e {
            CompareError::Budget { .. } => Failure::new(EXIT_BUDGET, e),
            CompareError::Invalid(_) => Failure::new(EXIT_VALIDATION, e),
        })?;
    let r = report.result;
    let mut out = io::stdout().lock();
    writeln!(out, "pair           {}", args.pair)?;
    writeln!(out, "domain_size    {}", report.domain_size)?;
    writeln!(out, "tie_tolerance  {:e}", r.tie_tolerance)?;
    writeln!(out, "P              {}", r.p_count)?;
    writeln!(out, "Q              {}", r.q_count)?;
    writeln!(out, "R              {}", r.r_count)?;
    writeln!(out, "S              {}", r.s_count)?;
    writeln!(out, "discriminancy  {}", p.opt(r.discriminancy))?;
    writeln!(out, "consistency    {}", p.opt(r.consistency))?;
    Ok(())
}

fn print_summary(out: &mut impl Write, s: &ExperimentSummary, p: Printer) -> io::Result<()> {
    writeln!(out, "n_matrices     {}", s.n_matrices)?;
    writeln!(out, "seed           {}", s.seed)?;
    writeln!(out, "pearson_r      {}", p.opt(s.pearson_r))?;
    writeln!(out, "consistency    {}", p.opt(s.consistency))?;
    writeln!(out, "discriminancy  {}", p.opt(s.discriminancy))?;
    writeln!(out, "mean_ratio     {}", p.opt(s.mean_ratio))?;
    writeln!(out, "ci_lo          {}", p.opt(s.ci_lo))?;
    writeln!(out, "ci_hi          {}", p.opt(s.ci_hi))
}

fn create(path: &Path) -> Result<BufWriter<File>, Failure> {
    File::create(path).map(BufWriter::new).map_err(|e| Failure::io(path, e))
}

fn run_experiment(args: &ExperimentArgs, p: Printer) -> Result<(), Failure> {
    let cfg = args.config();
    cfg.validate().map_err(|e| Failure::new(EXIT_VALIDATION, e))?;
    let pool = pool(args.jobs)?;
    let mut records = args.records.as_deref().map(create).transpose()?;
    let summary = runner::run(&cfg, records.as_mut(), &pool).map_err(|e| match e {
        RunError::Config(_) => Failure::new(EXIT_VALIDATION, e),
        RunError::Io(_) => Failure::new(EXIT_IO, e),
    })?;
    if let Some(path) = &args.summary {
        let mut sink = create(path)?;
        runner::emit(&[], &summary, &cfg, &mut sink, EmitFormat::JsonSummary)
            .and_then(|()| sink.flush())
            .map_err(|e| Failure::io(path, e))?;
    }
    print_summary(&mut io::stdout().lock(), &summary, p)?;
    if !experiment::within_sanity_band(&summary) {
        return Err(Failure::new(
            EXIT_CHECK,
            "summary outside the sanity band (pearson_r >= 0.98, mean_ratio in [0.99, 1.01])",
        ));
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use clap::CommandFactory;

    #[test]
    fn cli_is_well_formed() {
        Cli::command().debug_assert();
    }

    #[test]
    fn experiment_defaults_match_library() {
        let cli = Cli::parse_from(["cenmcc", "experiment"]);
        let Command::Experiment(args) = cli.command else { panic!() };
        assert_eq!(args.config(), ExperimentConfig::default());
        assert_eq!(args.seed, experiment::DEFAULT_SEED);
    }

    #[test]
    fn family_names() {
        for (s, k) in [
            ("ZA", FamilyKind::Za),
            ("za", FamilyKind::Za),
            ("DIAG_B", FamilyKind::DiagB),
            ("diag-b", FamilyKind::DiagB),
            ("Uniform", FamilyKind::Uniform),
            ("unbalanced", FamilyKind::Unbalanced),
        ] {
            assert_eq!(parse_family(s), Ok(k));
        }
        assert!(parse_family("zb").is_err());
    }
}
