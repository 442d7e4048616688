//! Batch command-line surface: bound tables, extremal dumps, verification
//! suites, and searches, emitted as pretty text, CSV, or JSON lines.
//!
//! Exit codes: 0 success, 1 verification failure, 2 argument or input
//! errors, 3 queries outside every theorem's domain.  CSV columns are fixed:
//! `class,alpha,beta,n,m,lambda,bound,branch,sharpness,best_found,gap`, with
//! the literal `n/a` for out-of-domain cells and empty fields for columns a
//! subcommand does not produce.  Numeric CSV/JSON output carries 17
//! significant digits; everything flows through flags (no environment
//! knobs), so fixed flags and seed give byte-identical output.

use std::ffi::OsString;
use std::fs::File;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use crate::bounds::{bound, BoundResult, DomainCode};
use crate::classes::{
    caratheodory_from_measure, extremal_series, series_from_measure, Atom, AtomicMeasure,
    ClassSpec, ExtremalId, ExtremalSpec,
};
use crate::error::Error;
use crate::search::{maximize_functional, sweep, SearchConfig};
use crate::series::FunctionalQuery;
use crate::suite::{
    continuity_suite, hermitian_suite, membership_suite, oracle_suite, sharpness_suite,
    SuiteRecord,
};
use crate::verify::{check_bound, proof_form_replay, toeplitz_min_eig, GridSpec};

#[derive(Debug, Parser)]
#[command(
    name = "zalcman",
    version,
    about = "Sharp coefficient-functional bounds: compute, verify, and stress-test"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
    /// Output format.
    #[arg(long, global = true, value_enum, default_value_t = Format::Pretty)]
    format: Format,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Pretty,
    Csv,
    Json,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Bound for one (class, n, m, lambda) cell.
    Bound(BoundArgs),
    /// Bounds over an (n, m, lambda) grid.
    Table(TableArgs),
    /// Coefficient dump of a cataloged extremal.
    Extremal(ExtremalArgs),
    /// Run the verification suites (JSON-lines report).
    Verify(VerifyArgs),
    /// Maximize the functional over a class: one cell or a lambda sweep.
    Search(SearchArgs),
}

#[derive(Debug, Args)]
struct ClassArgs {
    /// Target class: starlike_hull, convex_hull, R, f_over_z,
    /// typically_real, S_real, F1, F2.
    #[arg(long = "class")]
    class: String,
    /// Order parameter for the hull classes.
    #[arg(long)]
    alpha: Option<f64>,
    /// Order parameter for R, f_over_z, F1, F2.
    #[arg(long)]
    beta: Option<f64>,
}

impl ClassArgs {
    fn to_spec(&self) -> Result<ClassSpec, CliError> {
        let need_alpha = |v: Option<f64>| {
            v.ok_or_else(|| CliError::usage(format!("class {} requires --alpha", self.class)))
        };
        let need_beta = |v: Option<f64>| {
            v.ok_or_else(|| CliError::usage(format!("class {} requires --beta", self.class)))
        };
        let spec = match self.class.as_str() {
            "starlike_hull" | "starlike-hull" => ClassSpec::StarlikeHull {
                alpha: need_alpha(self.alpha)?,
            },
            "convex_hull" | "convex-hull" => ClassSpec::ConvexHull {
                alpha: need_alpha(self.alpha)?,
            },
            "R" | "r" => ClassSpec::R {
                beta: need_beta(self.beta)?,
            },
            "f_over_z" | "f-over-z" => ClassSpec::FOverZ {
                beta: need_beta(self.beta)?,
            },
            "typically_real" | "typically-real" | "T" => ClassSpec::TypicallyReal,
            "S_real" | "s_real" | "s-real" => ClassSpec::SReal,
            "F1" | "f1" => ClassSpec::F1 {
                beta: need_beta(self.beta)?,
            },
            "F2" | "f2" => ClassSpec::F2 {
                beta: need_beta(self.beta)?,
            },
            other => {
                return Err(CliError::usage(format!("unknown class `{other}`")));
            }
        };
        if spec.alpha().is_none() && self.alpha.is_some() {
            return Err(CliError::usage(format!(
                "class {} does not take --alpha",
                self.class
            )));
        }
        if spec.beta().is_none() && self.beta.is_some() {
            return Err(CliError::usage(format!(
                "class {} does not take --beta",
                self.class
            )));
        }
        spec.validate()?;
        Ok(spec)
    }
}

#[derive(Debug, Args)]
struct BoundArgs {
    #[command(flatten)]
    class: ClassArgs,
    #[arg(short)]
    n: usize,
    #[arg(short)]
    m: usize,
    #[arg(long)]
    lambda: f64,
}

#[derive(Debug, Args)]
struct TableArgs {
    #[command(flatten)]
    class: ClassArgs,
    #[arg(long, default_value_t = 2)]
    n_min: usize,
    #[arg(long, default_value_t = 4)]
    n_max: usize,
    #[arg(long, default_value_t = 2)]
    m_min: usize,
    #[arg(long, default_value_t = 4)]
    m_max: usize,
    /// Comma-separated lambda values.
    #[arg(long, value_delimiter = ',', required = true)]
    lambdas: Vec<f64>,
}

#[derive(Debug, Args)]
struct ExtremalArgs {
    /// One of: koebe, tr_odd, f1_starlike, f2_convex, f0_R, f0_R_power,
    /// f1beta_F1, f2beta_F2, f3_F2, mixture.
    #[arg(long)]
    id: String,
    /// Truncation order.
    #[arg(short = 'N', long = "order", default_value_t = 10)]
    order: usize,
    #[arg(long)]
    alpha: Option<f64>,
    #[arg(long)]
    beta: Option<f64>,
    /// Power k for f0_R_power.
    #[arg(long)]
    power: Option<usize>,
    /// Outer rotation angle in radians.
    #[arg(long, default_value_t = 0.0)]
    rotation: f64,
    /// Mixture weights (comma-separated), paired with --angles.
    #[arg(long, value_delimiter = ',')]
    weights: Option<Vec<f64>>,
    /// Mixture rotation angles in radians (comma-separated).
    #[arg(long, value_delimiter = ',')]
    angles: Option<Vec<f64>>,
    /// Base extremal id for mixtures.
    #[arg(long)]
    base: Option<String>,
}

#[derive(Debug, Args)]
struct VerifyArgs {
    /// all, sharpness, continuity, hermitian, oracle, membership, or member
    /// (the latter needs --measure-file).
    #[arg(long, default_value = "all")]
    suite: String,
    /// Equality and bound-margin tolerance.
    #[arg(long, default_value_t = 1e-9)]
    tol: f64,
    /// Positivity tolerance for the Hermitian/Toeplitz batteries.
    #[arg(long, default_value_t = 1e-10)]
    positivity_tol: f64,
    /// Branch-continuity tolerance.
    #[arg(long, default_value_t = 1e-12)]
    continuity_tol: f64,
    #[arg(long, default_value_t = 42)]
    seed: u64,
    /// Random measures per battery.
    #[arg(long, default_value_t = 1000)]
    measures: usize,
    /// z-sequences per measure in the Hermitian battery.
    #[arg(long, default_value_t = 8)]
    zseqs: usize,
    /// Oracle grid: angle count.
    #[arg(long, default_value_t = 721)]
    grid_angles: usize,
    /// Oracle grid: weight count.
    #[arg(long, default_value_t = 101)]
    grid_weights: usize,
    /// JSON file with atoms [{"w": .., "t": ..}, ..] for the member suite.
    #[arg(long)]
    measure_file: Option<String>,
    #[command(flatten)]
    class: Option<ClassArgsOpt>,
    #[arg(short, requires = "measure_file")]
    n: Option<usize>,
    #[arg(short, requires = "measure_file")]
    m: Option<usize>,
    #[arg(long, requires = "measure_file")]
    lambda: Option<f64>,
}

// An optional variant of ClassArgs for `verify`, where --class only matters
// for the member suite.
#[derive(Debug, Args)]
struct ClassArgsOpt {
    #[arg(long = "class")]
    class: Option<String>,
    #[arg(long)]
    alpha: Option<f64>,
    #[arg(long)]
    beta: Option<f64>,
}

#[derive(Debug, Args)]
struct SearchArgs {
    #[command(flatten)]
    class: ClassArgs,
    #[arg(short)]
    n: usize,
    #[arg(short)]
    m: usize,
    /// Single-cell search.
    #[arg(long, conflicts_with = "lambdas")]
    lambda: Option<f64>,
    /// Lambda sweep (comma-separated).
    #[arg(long, value_delimiter = ',')]
    lambdas: Option<Vec<f64>>,
    #[arg(long, default_value_t = 6)]
    atoms: usize,
    #[arg(long, default_value_t = 200)]
    restarts: usize,
    #[arg(long, default_value_t = 500)]
    max_iters: usize,
    #[arg(long, default_value_t = 42)]
    seed: u64,
}

#[derive(Debug)]
enum CliError {
    Usage(String),
    Domain(DomainCode),
    SuiteFailed(usize),
}

impl CliError {
    fn usage(msg: impl Into<String>) -> Self {
        CliError::Usage(msg.into())
    }
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        match e {
            Error::OutsideTheoremDomain(code) => CliError::Domain(code),
            other => CliError::Usage(other.to_string()),
        }
    }
}

/// Entry point: parse `args`, run, and map outcomes to exit codes.
pub fn run<I, T>(args: I) -> ExitCode
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            // clap exits 0 for --help/--version and 2 for usage errors.
            e.exit();
        }
    };
    match dispatch(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(CliError::SuiteFailed(count)) => {
            eprintln!("{count} check(s) failed");
            ExitCode::from(1)
        }
        Err(CliError::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
        Err(CliError::Domain(code)) => {
            eprintln!("outside theorem domain: {code}");
            ExitCode::from(3)
        }
    }
}

fn dispatch(cli: &Cli) -> Result<(), CliError> {
    match &cli.command {
        Command::Bound(args) => run_bound(args, cli.format),
        Command::Table(args) => run_table(args, cli.format),
        Command::Extremal(args) => run_extremal(args, cli.format),
        Command::Verify(args) => run_verify(args),
        Command::Search(args) => run_search(args, cli.format),
    }
}

/// 17 significant digits, for CSV and JSON payloads.
fn sig17(x: f64) -> String {
    format!("{x:.16e}")
}

fn json_str(s: &str) -> String {
    serde_json::to_string(s).expect("string serializes")
}

/// One output row in the fixed schema.
struct Row {
    class: String,
    alpha: Option<f64>,
    beta: Option<f64>,
    n: usize,
    m: usize,
    lambda: f64,
    bound: Option<f64>,
    branch: Option<String>,
    sharpness: Option<String>,
    best_found: Option<f64>,
    gap: Option<f64>,
    outside: Option<DomainCode>,
}

impl Row {
    fn from_bound(spec: &ClassSpec, n: usize, m: usize, lambda: f64, b: &BoundResult) -> Self {
        let mut row = Row {
            class: spec.name().to_string(),
            alpha: spec.alpha(),
            beta: spec.beta(),
            n,
            m,
            lambda,
            bound: None,
            branch: None,
            sharpness: None,
            best_found: None,
            gap: None,
            outside: None,
        };
        match b {
            BoundResult::Valid(v) => {
                row.bound = Some(v.value);
                row.branch = Some(v.branch.to_string());
                row.sharpness = Some(v.sharpness.to_string());
            }
            BoundResult::OutsideDomain(code) => row.outside = Some(*code),
        }
        row
    }

    const CSV_HEADER: &'static str =
        "class,alpha,beta,n,m,lambda,bound,branch,sharpness,best_found,gap";

    fn to_csv(&self) -> String {
        let na = |present: bool| if present { "" } else { "n/a" };
        let opt_f = |v: Option<f64>| v.map(sig17).unwrap_or_default();
        let covered = self.outside.is_none();
        format!(
            "{},{},{},{},{},{},{},{},{},{},{}",
            self.class,
            opt_f(self.alpha),
            opt_f(self.beta),
            self.n,
            self.m,
            sig17(self.lambda),
            self.bound.map(sig17).unwrap_or_else(|| na(covered).into()),
            self.branch.clone().unwrap_or_else(|| na(covered).into()),
            self.sharpness.clone().unwrap_or_else(|| na(covered).into()),
            opt_f(self.best_found),
            self.gap
                .map(sig17)
                .unwrap_or_else(|| if self.best_found.is_some() && !covered {
                    "n/a".into()
                } else {
                    String::new()
                }),
        )
    }

    fn to_json(&self) -> String {
        let f = |v: Option<f64>| v.map(sig17).unwrap_or_else(|| "null".into());
        let s = |v: &Option<String>| v.as_deref().map(json_str).unwrap_or_else(|| "null".into());
        format!(
            "{{\"class\":{},\"alpha\":{},\"beta\":{},\"n\":{},\"m\":{},\"lambda\":{},\"bound\":{},\"branch\":{},\"sharpness\":{},\"best_found\":{},\"gap\":{},\"outside\":{}}}",
            json_str(&self.class),
            f(self.alpha),
            f(self.beta),
            self.n,
            self.m,
            sig17(self.lambda),
            f(self.bound),
            s(&self.branch),
            s(&self.sharpness),
            f(self.best_found),
            f(self.gap),
            self.outside
                .map(|c| json_str(&c.to_string()))
                .unwrap_or_else(|| "null".into()),
        )
    }

    fn to_pretty(&self) -> String {
        match (&self.bound, self.outside) {
            (Some(b), _) => {
                let mut line = format!(
                    "n={} m={} lambda={}: {} branch={}",
                    self.n,
                    self.m,
                    self.lambda,
                    b,
                    self.branch.as_deref().unwrap_or("?"),
                );
                if let Some(s) = &self.sharpness {
                    line.push_str(&format!(" sharpness={s}"));
                }
                if let Some(best) = self.best_found {
                    line.push_str(&format!(" best_found={best}"));
                }
                if let Some(gap) = self.gap {
                    line.push_str(&format!(" gap={gap:e}"));
                }
                line
            }
            (None, Some(code)) => {
                let mut line = format!("n={} m={} lambda={}: n/a ({code})", self.n, self.m, self.lambda);
                if let Some(best) = self.best_found {
                    line.push_str(&format!(" best_found={best}"));
                }
                line
            }
            _ => unreachable!("row without bound or code"),
        }
    }
}

fn emit_rows(rows: &[Row], format: Format) {
    match format {
        Format::Csv => {
            println!("{}", Row::CSV_HEADER);
            for r in rows {
                println!("{}", r.to_csv());
            }
        }
        Format::Json => {
            for r in rows {
                println!("{}", r.to_json());
            }
        }
        Format::Pretty => {
            for r in rows {
                println!("{}", r.to_pretty());
            }
        }
    }
}

fn run_bound(args: &BoundArgs, format: Format) -> Result<(), CliError> {
    let spec = args.class.to_spec()?;
    let q = FunctionalQuery::new(args.n, args.m, args.lambda)?;
    let result = bound(&spec, &q)?;
    match &result {
        BoundResult::Valid(v) => match format {
            Format::Pretty => {
                let attained = v
                    .attaining_extremal
                    .as_ref()
                    .map(|e| format!(" attained_by={e}"))
                    .unwrap_or_default();
                println!(
                    "{} branch={} sharpness={}{}",
                    v.value, v.branch, v.sharpness, attained
                );
            }
            _ => emit_rows(
                &[Row::from_bound(&spec, args.n, args.m, args.lambda, &result)],
                format,
            ),
        },
        BoundResult::OutsideDomain(code) => return Err(CliError::Domain(*code)),
    }
    Ok(())
}

fn run_table(args: &TableArgs, format: Format) -> Result<(), CliError> {
    let spec = args.class.to_spec()?;
    if args.n_min < 2 || args.m_min < 2 || args.n_max < args.n_min || args.m_max < args.m_min {
        return Err(CliError::usage("need 2 <= n_min <= n_max and likewise for m"));
    }
    let mut rows = Vec::new();
    for n in args.n_min..=args.n_max {
        for m in args.m_min..=args.m_max {
            for &lambda in &args.lambdas {
                let q = FunctionalQuery::new(n, m, lambda)?;
                rows.push(Row::from_bound(&spec, n, m, lambda, &bound(&spec, &q)?));
            }
        }
    }
    emit_rows(&rows, format);
    Ok(())
}

fn parse_base_extremal(args: &ExtremalArgs) -> Result<ExtremalSpec, CliError> {
    let id = args
        .base
        .as_deref()
        .ok_or_else(|| CliError::usage("mixture requires --base"))?;
    build_extremal(id, args.alpha, args.beta, args.power, 0.0, None, None, None)
}

#[allow(clippy::too_many_arguments)]
fn build_extremal(
    id: &str,
    alpha: Option<f64>,
    beta: Option<f64>,
    power: Option<usize>,
    rotation: f64,
    weights: Option<&[f64]>,
    angles: Option<&[f64]>,
    base: Option<ExtremalSpec>,
) -> Result<ExtremalSpec, CliError> {
    let need_alpha = alpha.ok_or_else(|| CliError::usage(format!("{id} requires --alpha")));
    let need_beta = beta.ok_or_else(|| CliError::usage(format!("{id} requires --beta")));
    let id = match id {
        "koebe" => ExtremalId::Koebe,
        "tr_odd" => ExtremalId::TrOdd,
        "f1_starlike" => ExtremalId::F1Starlike { alpha: need_alpha? },
        "f2_convex" => ExtremalId::F2Convex { alpha: need_alpha? },
        "f0_R" => ExtremalId::F0R { beta: need_beta? },
        "f0_R_power" => ExtremalId::F0RPower {
            beta: need_beta?,
            order: power.ok_or_else(|| CliError::usage("f0_R_power requires --power"))?,
        },
        "f1beta_F1" => ExtremalId::F1BetaF1 { beta: need_beta? },
        "f2beta_F2" => ExtremalId::F2BetaF2 { beta: need_beta? },
        "f3_F2" => ExtremalId::F3F2 { beta: need_beta? },
        "mixture" => {
            let weights = weights
                .ok_or_else(|| CliError::usage("mixture requires --weights"))?
                .to_vec();
            let angles = angles
                .ok_or_else(|| CliError::usage("mixture requires --angles"))?
                .to_vec();
            let base = base.ok_or_else(|| CliError::usage("mixture requires --base"))?;
            ExtremalId::Mixture {
                weights,
                angles,
                base: Box::new(base),
            }
        }
        other => return Err(CliError::usage(format!("unknown extremal id `{other}`"))),
    };
    Ok(ExtremalSpec::with_rotation(id, rotation))
}

fn run_extremal(args: &ExtremalArgs, format: Format) -> Result<(), CliError> {
    if args.order < 2 {
        return Err(CliError::usage("order must be at least 2"));
    }
    let base = if args.id == "mixture" {
        Some(parse_base_extremal(args)?)
    } else {
        None
    };
    let spec = build_extremal(
        &args.id,
        args.alpha,
        args.beta,
        args.power,
        args.rotation,
        args.weights.as_deref(),
        args.angles.as_deref(),
        base,
    )?;
    let series = extremal_series(&spec, args.order)?;
    match format {
        Format::Pretty => {
            let rendered: Vec<String> = series
                .coeffs()
                .iter()
                .map(|c| {
                    if c.im == 0.0 {
                        format!("{}", c.re)
                    } else if c.im < 0.0 {
                        format!("{}{}i", c.re, c.im)
                    } else {
                        format!("{}+{}i", c.re, c.im)
                    }
                })
                .collect();
            println!("{}", rendered.join(","));
        }
        Format::Csv => {
            println!("n,re,im");
            for (i, c) in series.coeffs().iter().enumerate() {
                println!("{},{},{}", i + 1, sig17(c.re), sig17(c.im));
            }
        }
        Format::Json => {
            for (i, c) in series.coeffs().iter().enumerate() {
                println!(
                    "{{\"n\":{},\"re\":{},\"im\":{}}}",
                    i + 1,
                    sig17(c.re),
                    sig17(c.im)
                );
            }
        }
    }
    Ok(())
}

fn emit_records(records: &[SuiteRecord]) {
    for r in records {
        println!(
            "{{\"suite\":{},\"name\":{},\"passed\":{},\"observed\":{},\"threshold\":{}}}",
            json_str(r.suite),
            json_str(&r.name),
            r.passed,
            sig17(r.observed),
            sig17(r.threshold)
        );
    }
}

fn run_verify(args: &VerifyArgs) -> Result<(), CliError> {
    let grid = GridSpec {
        angles: args.grid_angles,
        weights: args.grid_weights,
    };
    let mut records: Vec<SuiteRecord> = Vec::new();
    let run_all = args.suite == "all";
    match args.suite.as_str() {
        "all" | "sharpness" | "continuity" | "hermitian" | "oracle" | "membership" | "member" => {}
        other => return Err(CliError::usage(format!("unknown suite `{other}`"))),
    }
    if run_all || args.suite == "sharpness" {
        records.extend(sharpness_suite(args.tol)?);
    }
    if run_all || args.suite == "continuity" {
        records.extend(continuity_suite(args.continuity_tol)?);
    }
    if run_all || args.suite == "hermitian" {
        records.extend(hermitian_suite(
            args.seed,
            args.measures,
            args.zseqs,
            args.positivity_tol,
        )?);
    }
    if run_all || args.suite == "oracle" {
        records.extend(oracle_suite(&grid));
    }
    if run_all || args.suite == "membership" {
        records.extend(membership_suite(
            args.seed,
            (args.measures / 10).max(1),
            args.tol,
        )?);
    }
    if args.suite == "member" || (run_all && args.measure_file.is_some()) {
        records.extend(member_suite(args)?);
    }
    emit_records(&records);
    let failed = records.iter().filter(|r| !r.passed).count();
    eprintln!("{} checks, {} failed", records.len(), failed);
    if failed > 0 {
        return Err(CliError::SuiteFailed(failed));
    }
    Ok(())
}

/// Check a user-supplied measure file: membership signals plus in-domain
/// bound checks for the requested class.
fn member_suite(args: &VerifyArgs) -> Result<Vec<SuiteRecord>, CliError> {
    let path = args
        .measure_file
        .as_deref()
        .ok_or_else(|| CliError::usage("member suite requires --measure-file"))?;
    let class_args = args
        .class
        .as_ref()
        .and_then(|c| c.class.clone())
        .ok_or_else(|| CliError::usage("member suite requires --class"))?;
    let spec = ClassArgs {
        class: class_args,
        alpha: args.class.as_ref().and_then(|c| c.alpha),
        beta: args.class.as_ref().and_then(|c| c.beta),
    }
    .to_spec()?;
    let file = File::open(path)
        .map_err(|e| CliError::usage(format!("cannot open {path}: {e}")))?;
    let atoms: Vec<Atom> = serde_json::from_reader(file)
        .map_err(|e| CliError::usage(format!("cannot parse {path}: {e}")))?;
    let measure = AtomicMeasure::from_atoms_auto(atoms)?;

    let mut records = Vec::new();
    let c = caratheodory_from_measure(&measure, 8)?;
    let eig = toeplitz_min_eig(&c);
    records.push(SuiteRecord {
        suite: "member",
        name: format!("{path}: toeplitz_min_eig"),
        passed: eig >= -args.positivity_tol,
        observed: eig,
        threshold: -args.positivity_tol,
    });

    let series = series_from_measure(&spec, &measure, 13)?;
    let cells: Vec<(usize, usize, f64)> = match (args.n, args.m, args.lambda) {
        (Some(n), Some(m), Some(lambda)) => vec![(n, m, lambda)],
        _ => {
            let mut cells = Vec::new();
            for n in 2..=6 {
                for m in 2..=6 {
                    for lambda in [-2.0, -1.0, 0.0, 1.0, 2.0, 3.0, 4.0, 5.0, 6.0] {
                        cells.push((n, m, lambda));
                    }
                }
            }
            cells
        }
    };
    for (n, m, lambda) in cells {
        let q = FunctionalQuery::new(n, m, lambda)?;
        match bound(&spec, &q)? {
            BoundResult::Valid(_) => {
                let report = check_bound(&series, &spec, &q, args.tol)?;
                records.push(SuiteRecord {
                    suite: "member",
                    name: format!("{spec} member: n={n} m={m} lambda={lambda}"),
                    passed: report.passed,
                    observed: report.margin,
                    threshold: -args.tol,
                });
                if matches!(
                    spec,
                    ClassSpec::R { .. }
                        | ClassSpec::F1 { .. }
                        | ClassSpec::F2 { .. }
                        | ClassSpec::TypicallyReal
                ) {
                    let v = proof_form_replay(&spec, &measure, &q)?;
                    records.push(SuiteRecord {
                        suite: "member",
                        name: format!("{spec} proof form: n={n} m={m} lambda={lambda}"),
                        passed: v >= -args.positivity_tol,
                        observed: v,
                        threshold: -args.positivity_tol,
                    });
                }
            }
            BoundResult::OutsideDomain(_) => {}
        }
    }
    Ok(records)
}

fn run_search(args: &SearchArgs, format: Format) -> Result<(), CliError> {
    let spec = args.class.to_spec()?;
    let cfg = SearchConfig {
        atoms: args.atoms,
        restarts: args.restarts,
        max_iters: args.max_iters,
        seed: args.seed,
        ..SearchConfig::default()
    };
    let lambdas: Vec<f64> = match (&args.lambda, &args.lambdas) {
        (Some(l), None) => vec![*l],
        (None, Some(ls)) => ls.clone(),
        _ => return Err(CliError::usage("provide exactly one of --lambda / --lambdas")),
    };

    if lambdas.len() == 1 && args.lambda.is_some() {
        let q = FunctionalQuery::new(args.n, args.m, lambdas[0])?;
        let result = maximize_functional(&spec, &q, &cfg)?;
        let b = bound(&spec, &q)?;
        let mut row = Row::from_bound(&spec, args.n, args.m, lambdas[0], &b);
        row.best_found = Some(result.best_value);
        row.gap = result.bound_gap;
        match format {
            Format::Pretty => {
                println!("{}", row.to_pretty());
                let atoms: Vec<String> = result
                    .best_measure
                    .atoms()
                    .iter()
                    .filter(|a| a.weight > 1e-9)
                    .map(|a| format!("(w={:.6}, t={:.6})", a.weight, a.angle))
                    .collect();
                println!("best measure: [{}]", atoms.join(", "));
                println!("iterations: {}", result.iterations_used);
            }
            _ => emit_rows(&[row], format),
        }
        return Ok(());
    }

    let rows_data = sweep(&spec, args.n, args.m, &lambdas, &cfg)?;
    let rows: Vec<Row> = rows_data
        .iter()
        .map(|r| {
            let mut row = Row {
                class: spec.name().to_string(),
                alpha: spec.alpha(),
                beta: spec.beta(),
                n: args.n,
                m: args.m,
                lambda: r.lambda,
                bound: r.bound.as_ref().map(|v| v.value),
                branch: r.bound.as_ref().map(|v| v.branch.to_string()),
                sharpness: r.bound.as_ref().map(|v| v.sharpness.to_string()),
                best_found: Some(r.best_found),
                gap: r.gap,
                outside: r.outside,
            };
            if row.bound.is_none() {
                row.branch = None;
                row.sharpness = None;
            }
            row
        })
        .collect();
    emit_rows(&rows, format);
    Ok(())
}
