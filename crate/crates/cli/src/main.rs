//! Command-line front end: analyze metric definitions, replay the recorded
//! verification suites, and inspect or export the bundled catalog.

use std::fs;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use curvlab::catalog;
use curvlab::classify::Tolerances;
use curvlab::error::Error;
use curvlab::metricfile::{AnalysisDefaults, MetricFile};
use curvlab::report::{analyze, verify_target, Report, RunConfig, Subject, VERIFY_TARGETS};

#[derive(Parser)]
#[command(
    name = "curvlab",
    version,
    about = "Numerical laboratory for semi-Riemannian curvature structures",
    propagate_version = true
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run the classification battery over seeded sample points
    Analyze {
        /// Definition file path, or catalog:NAME for a bundled entry
        target: String,
        #[command(flatten)]
        opts: RunOpts,
    },
    /// Replay a recorded verification suite
    #[command(name = "verify-paper")]
    VerifyPaper {
        /// One of: thm1.1, prop1.1, thm1.2, eardley, gebarowski
        target: String,
        #[command(flatten)]
        opts: RunOpts,
    },
    /// Inspect the bundled metric catalog
    Catalog {
        #[command(subcommand)]
        action: CatalogAction,
    },
}

#[derive(Subcommand)]
enum CatalogAction {
    /// List entry names and kinds
    List,
    /// Print an entry's documented expectations with provenance
    Show { name: String },
    /// Print an entry as a self-contained definition file
    Export { name: String },
}

#[derive(Args)]
struct RunOpts {
    /// Seed for the sample-point stream
    #[arg(long)]
    seed: Option<u64>,
    /// Number of sample points per metric
    #[arg(long)]
    points: Option<usize>,
    /// Bound for identities that hold by construction
    #[arg(long)]
    tol_structural: Option<f64>,
    /// Bound for quantities obtained through derived formulas
    #[arg(long)]
    tol_derived: Option<f64>,
    /// Bound for classification verdicts
    #[arg(long)]
    tol_theorem: Option<f64>,
    /// Output format
    #[arg(long, value_enum, default_value_t = Format::Text)]
    format: Format,
}

#[derive(ValueEnum, Clone, Copy, PartialEq)]
enum Format {
    Text,
    Machine,
}

/// Failure paths keep distinct exit codes: 2 for definition or validation
/// problems, 3 for numerical-domain failures during evaluation.
struct Failure {
    code: u8,
    message: String,
}

fn failure_code(err: &Error) -> u8 {
    match err {
        Error::Eval(_)
        | Error::DegenerateMetric { .. }
        | Error::OutsideDomain { .. }
        | Error::NonPositiveWarp { .. } => 3,
        _ => 2,
    }
}

fn fail(err: Error) -> Failure {
    Failure { code: failure_code(&err), message: err.to_string() }
}

/// Merge precedence for run parameters: command-line flag, then the
/// definition file's analysis section, then the built-in default. The
/// resulting provenance strings are embedded in every report.
fn build_config(opts: &RunOpts, file_defaults: &AnalysisDefaults) -> RunConfig {
    let base = Tolerances::default();
    let pick = |flag: Option<f64>, file: Option<f64>, default: f64| match (flag, file) {
        (Some(v), _) => (v, "flag"),
        (None, Some(v)) => (v, "file"),
        (None, None) => (default, "default"),
    };
    let (structural, s_src) =
        pick(opts.tol_structural, file_defaults.tol_structural, base.structural);
    let (derived, d_src) = pick(opts.tol_derived, file_defaults.tol_derived, base.derived);
    let (theorem, t_src) = pick(opts.tol_theorem, file_defaults.tol_theorem, base.theorem);
    let (seed, seed_source) = match (opts.seed, file_defaults.seed) {
        (Some(v), _) => (v, "flag"),
        (None, Some(v)) => (v, "file"),
        (None, None) => (0, "default"),
    };
    let (points, p_src) = match (opts.points, file_defaults.points) {
        (Some(v), _) => (v, "flag"),
        (None, Some(v)) => (v, "file"),
        (None, None) => (50, "default"),
    };
    RunConfig {
        seed,
        points,
        tolerances: Tolerances { structural, derived, theorem },
        seed_source: seed_source.to_string(),
        tolerance_source: format!(
            "structural:{s_src} derived:{d_src} theorem:{t_src} points:{p_src}"
        ),
    }
}

fn load_subject(target: &str) -> Result<(Subject, AnalysisDefaults), Failure> {
    if let Some(name) = target.strip_prefix("catalog:") {
        let entry = catalog::entry(name).map_err(fail)?;
        return Ok((Subject::from_entry(&entry), AnalysisDefaults::default()));
    }
    let raw = fs::read_to_string(target).map_err(|e| Failure {
        code: 2,
        message: format!("cannot read definition file '{target}': {e}"),
    })?;
    let file = MetricFile::parse(&raw).map_err(fail)?;
    let defaults = file.analysis.clone();
    Ok((Subject::from_file(&file, target, &raw), defaults))
}

fn emit(report: &Report, format: Format) -> u8 {
    let text = match format {
        Format::Machine => report.render_machine(),
        Format::Text => report.render_text(),
    };
    print!("{text}");
    report.exit_code() as u8
}

fn run_analyze(target: &str, opts: &RunOpts) -> Result<u8, Failure> {
    let (subject, defaults) = load_subject(target)?;
    let cfg = build_config(opts, &defaults);
    let report = analyze(&subject, &cfg).map_err(fail)?;
    Ok(emit(&report, opts.format))
}

fn run_verify(target: &str, opts: &RunOpts) -> Result<u8, Failure> {
    if !VERIFY_TARGETS.contains(&target) {
        return Err(Failure {
            code: 2,
            message: format!(
                "unknown verification target '{target}'; expected one of {}",
                VERIFY_TARGETS.join(", ")
            ),
        });
    }
    let cfg = build_config(opts, &AnalysisDefaults::default());
    let report = verify_target(target, &cfg).map_err(fail)?;
    Ok(emit(&report, opts.format))
}

fn run_catalog(action: &CatalogAction) -> Result<u8, Failure> {
    match action {
        CatalogAction::List => {
            for e in catalog::catalog() {
                let kind = if e.contact.is_some() {
                    "contact"
                } else if e.warped.is_some() {
                    "warped"
                } else {
                    "plain"
                };
                println!(
                    "{:16} {:8} dim {}  {}",
                    e.name,
                    kind,
                    e.metric.dim(),
                    e.description
                );
            }
            Ok(0)
        }
        CatalogAction::Show { name } => {
            let e = catalog::entry(name).map_err(fail)?;
            println!("{}", e.name);
            println!("  {}", e.description);
            println!("  dimension {}, derivation: {}", e.metric.dim(), e.provenance);
            println!("  expected classification:");
            for x in &e.expected {
                let mut line = format!("    {:26} {}", x.predicate, x.verdict);
                if !x.constants.is_empty() {
                    let consts: Vec<String> =
                        x.constants.iter().map(|(k, v)| format!("{k}={v}")).collect();
                    line.push_str(&format!("  [{}]", consts.join(", ")));
                }
                line.push_str(&format!("  ({})", x.provenance));
                println!("{line}");
            }
            Ok(0)
        }
        CatalogAction::Export { name } => {
            let e = catalog::entry(name).map_err(fail)?;
            print!("{}", MetricFile::from_catalog(&e).render());
            Ok(0)
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let outcome = match &cli.command {
        Command::Analyze { target, opts } => run_analyze(target, opts),
        Command::VerifyPaper { target, opts } => run_verify(target, opts),
        Command::Catalog { action } => run_catalog(action),
    };
    match outcome {
        Ok(code) => ExitCode::from(code),
        Err(f) => {
            eprintln!("error: {}", f.message);
            ExitCode::from(f.code)
        }
    }
}
