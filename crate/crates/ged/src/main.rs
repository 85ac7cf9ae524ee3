//! Command-line pipeline: run sweeps over interaction logs, verify
//! scripted scenarios against planted ground truth, and generate
//! synthetic logs.

use std::fs;
use std::io::{BufReader, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use ged::formats;
use ged::harness::{self, HarnessError, RunConfig};
use ged::importance::{ImportanceKind, DEFAULT_EPSILON, DEFAULT_MAX_ITER, DEFAULT_TOL};
use ged::synth;
use ged::temporal::{parse_event_log, date_to_day, ParseOptions, TimestampFormat, WindowScheme, WindowSpec};

const EXIT_INPUT_ERROR: u8 = 1;
const EXIT_VERIFY_FAILED: u8 = 2;
const EXIT_NON_CONVERGENCE: u8 = 3;

#[derive(Parser)]
#[command(name = "ged", about = "Track group evolution in temporal interaction networks")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Slice a log, detect groups, and sweep the event classifier over an
    /// (alpha, beta) grid, writing events, chains, and a report.
    Run(RunArgs),
    /// Generate a scripted scenario, run the pipeline on it, and compare
    /// the detected events against the planted ground truth.
    Verify(VerifyArgs),
    /// Generate a synthetic interaction log (and optionally the script
    /// text) from a scenario.
    Generate(GenerateArgs),
}

#[derive(Clone, Copy, ValueEnum)]
enum WindowTypeArg {
    Disjoint,
    Overlapping,
    Increasing,
}

#[derive(Clone, Copy, ValueEnum)]
enum ImportanceArg {
    Degree,
    SocialPosition,
}

#[derive(Clone, Copy, ValueEnum)]
enum TimestampArg {
    Auto,
    Date,
    Epoch,
}

#[derive(Args)]
struct RunArgs {
    /// Input log: lines of source,target,timestamp[,kind]
    input: PathBuf,
    #[arg(long = "window-type", value_enum)]
    window_type: WindowTypeArg,
    /// Window size in days (ignored for increasing windows)
    #[arg(long, default_value_t = 30)]
    size: u32,
    /// Window offset in days
    #[arg(long)]
    offset: Option<u32>,
    /// Keep the trailing partial window instead of dropping it
    #[arg(long)]
    keep_partial: bool,
    /// Clique size for community detection
    #[arg(long, default_value_t = 5)]
    k: usize,
    #[arg(long, value_enum, default_value = "social-position")]
    importance: ImportanceArg,
    #[arg(long, default_value_t = DEFAULT_EPSILON)]
    epsilon: f64,
    /// Alpha values; fractions (0.7) or percentages (70) accepted
    #[arg(long, value_delimiter = ',', default_value = "50,60,70,80,90,100")]
    alpha: Vec<f64>,
    /// Beta values; fractions or percentages
    #[arg(long, value_delimiter = ',', default_value = "50,60,70,80,90,100")]
    beta: Vec<f64>,
    /// Forming/dissolving and match threshold
    #[arg(long, default_value_t = 0.10)]
    threshold: f64,
    #[arg(long)]
    out: PathBuf,
    /// Timestamp convention of the input
    #[arg(long, value_enum, default_value = "auto")]
    timestamp_format: TimestampArg,
    /// Override the derived span start (YYYY-MM-DD)
    #[arg(long)]
    span_start: Option<String>,
    /// Override the derived span end (YYYY-MM-DD)
    #[arg(long)]
    span_end: Option<String>,
    /// Load groups from a file instead of running the detector
    #[arg(long)]
    groups_file: Option<PathBuf>,
    /// Load importance values from a file instead of computing them
    #[arg(long)]
    importance_file: Option<PathBuf>,
}

#[derive(Args)]
struct VerifyArgs {
    /// Scenario script path; omit with --figure1
    #[arg(required_unless_present = "figure1")]
    script: Option<PathBuf>,
    /// Use the canned single-group evolution scenario
    #[arg(long)]
    figure1: bool,
    #[arg(long, default_value_t = 5)]
    k: usize,
    #[arg(long, default_value_t = 50.0)]
    alpha: f64,
    #[arg(long, default_value_t = 50.0)]
    beta: f64,
    #[arg(long, value_enum, default_value = "social-position")]
    importance: ImportanceArg,
    #[arg(long, default_value_t = DEFAULT_EPSILON)]
    epsilon: f64,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Optional directory for the JSON verdict
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct GenerateArgs {
    /// Scenario script path; omit with --figure1
    #[arg(required_unless_present = "figure1")]
    script: Option<PathBuf>,
    #[arg(long)]
    figure1: bool,
    #[arg(long, default_value_t = 5)]
    k: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Output log path
    #[arg(long)]
    out: PathBuf,
    /// Also write the script text next to the log
    #[arg(long)]
    emit_script: bool,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Run(args) => cmd_run(args),
        Command::Verify(args) => cmd_verify(args),
        Command::Generate(args) => cmd_generate(args),
    };
    match result {
        Ok(code) => code,
        Err(err) => {
            eprintln!("error: {err}");
            ExitCode::from(exit_code_for(&err))
        }
    }
}

fn exit_code_for(err: &anyhow::Error) -> u8 {
    if let Some(h) = err.downcast_ref::<HarnessError>() {
        if matches!(h, HarnessError::Importance(_)) {
            return EXIT_NON_CONVERGENCE;
        }
    }
    if err.downcast_ref::<ged::importance::ImportanceError>().is_some() {
        return EXIT_NON_CONVERGENCE;
    }
    EXIT_INPUT_ERROR
}

/// Accept 0.7 and 70 as the same threshold.
fn normalize_fraction(v: f64) -> f64 {
    if v > 1.0 {
        v / 100.0
    } else {
        v
    }
}

fn parse_date_arg(text: &str) -> anyhow::Result<i64> {
    let date = chrono::NaiveDate::parse_from_str(text, "%Y-%m-%d")
        .map_err(|e| anyhow::anyhow!("bad date {text:?}: {e}"))?;
    Ok(date_to_day(date))
}

impl ImportanceArg {
    fn to_kind(self, epsilon: f64) -> ImportanceKind {
        match self {
            ImportanceArg::Degree => ImportanceKind::Degree,
            ImportanceArg::SocialPosition => ImportanceKind::SocialPosition { epsilon },
        }
    }
}

fn cmd_run(args: RunArgs) -> anyhow::Result<ExitCode> {
    let scheme = match args.window_type {
        WindowTypeArg::Disjoint => WindowScheme::Disjoint,
        WindowTypeArg::Overlapping => WindowScheme::Overlapping,
        WindowTypeArg::Increasing => WindowScheme::Increasing,
    };
    let offset = args.offset.unwrap_or(match scheme {
        WindowScheme::Disjoint => args.size,
        _ => args.size / 2,
    });
    let spec = WindowSpec::new(scheme, args.size, offset)?;

    let options = ParseOptions {
        delimiter: ',',
        timestamp: match args.timestamp_format {
            TimestampArg::Auto => TimestampFormat::Auto,
            TimestampArg::Date => TimestampFormat::IsoDate,
            TimestampArg::Epoch => TimestampFormat::EpochSeconds,
        },
    };
    let file = fs::File::open(&args.input)
        .map_err(|e| anyhow::anyhow!("cannot open {}: {e}", args.input.display()))?;
    let mut log = parse_event_log(BufReader::new(file), &options)?;
    if args.span_start.is_some() || args.span_end.is_some() {
        let start = match &args.span_start {
            Some(s) => parse_date_arg(s)?,
            None => log.span_start(),
        };
        let end = match &args.span_end {
            Some(s) => parse_date_arg(s)?,
            None => log.span_end(),
        };
        log = log.with_span(start, end)?;
    }
    if log.rejected_count() > 0 {
        eprintln!("note: {} malformed or self-loop lines rejected", log.rejected_count());
    }

    let alphas: Vec<f64> = args.alpha.iter().map(|&v| normalize_fraction(v)).collect();
    let betas: Vec<f64> = args.beta.iter().map(|&v| normalize_fraction(v)).collect();
    for &v in alphas.iter().chain(betas.iter()) {
        if !(0.5..=1.0).contains(&v) {
            eprintln!("warning: alpha/beta value {v} outside the recommended range [0.5, 1.0]");
        }
    }

    let external_groups = match &args.groups_file {
        Some(path) => Some(formats::read_groups(BufReader::new(fs::File::open(path)?))?),
        None => None,
    };
    let external_importance = match &args.importance_file {
        Some(path) => Some(formats::read_importance(BufReader::new(fs::File::open(path)?))?),
        None => None,
    };

    let config = RunConfig {
        windows: vec![spec],
        keep_partial: args.keep_partial,
        k: args.k,
        importance: args.importance.to_kind(args.epsilon),
        tol: DEFAULT_TOL,
        max_iter: DEFAULT_MAX_ITER,
        alphas,
        betas,
        form_dissolve_threshold: args.threshold,
        match_threshold: args.threshold,
        report_pair: None,
        out_dir: Some(args.out.clone()),
    };
    let report = harness::run_experiment(
        &log,
        &config,
        external_groups.as_ref(),
        external_importance.as_ref(),
    )?;
    let mut stdout = std::io::stdout().lock();
    for row in &report.rows {
        writeln!(
            stdout,
            "{} size {} offset {}: {} frames, {} groups (avg size {:.0}), \
             {} events at alpha={} beta={}, sweep total {}",
            row.scheme,
            row.size,
            row.offset,
            row.timeframes,
            row.groups,
            row.avg_group_size,
            row.total,
            row.report_alpha,
            row.report_beta,
            row.sweep_total
        )?;
    }
    writeln!(stdout, "artifacts written to {}", args.out.display())?;
    Ok(ExitCode::SUCCESS)
}

fn load_script(path: &Option<PathBuf>, figure1: bool, k: usize) -> anyhow::Result<synth::ScenarioScript> {
    if figure1 {
        return Ok(synth::figure1_scenario(k));
    }
    let path = path.as_ref().expect("clap enforces script or --figure1");
    let file = fs::File::open(path)
        .map_err(|e| anyhow::anyhow!("cannot open {}: {e}", path.display()))?;
    Ok(formats::parse_script(BufReader::new(file))?)
}

fn cmd_verify(args: VerifyArgs) -> anyhow::Result<ExitCode> {
    let script = load_script(&args.script, args.figure1, args.k)?;
    let report = harness::verify_scenario(
        &script,
        args.k,
        normalize_fraction(args.alpha),
        normalize_fraction(args.beta),
        args.importance.to_kind(args.epsilon),
        args.seed,
    )?;
    print!("{}", harness::format_verify_report(&report));
    if let Some(dir) = &args.out {
        harness::write_verify_report(dir, &report)?;
    }
    if report.pass {
        Ok(ExitCode::SUCCESS)
    } else {
        Ok(ExitCode::from(EXIT_VERIFY_FAILED))
    }
}

fn cmd_generate(args: GenerateArgs) -> anyhow::Result<ExitCode> {
    let script = load_script(&args.script, args.figure1, args.k)?;
    let (log, _truth) = synth::generate(&script, args.k, args.seed)?;
    let mut out = fs::File::create(&args.out)?;
    formats::write_event_log(&mut out, &log)?;
    println!(
        "wrote {} records spanning {} days to {}",
        log.records().len(),
        log.span_days(),
        args.out.display()
    );
    if args.emit_script {
        let script_path = args.out.with_extension("scenario");
        let mut f = fs::File::create(&script_path)?;
        formats::write_script(&mut f, &script)?;
        println!("wrote script to {}", script_path.display());
    }
    Ok(ExitCode::SUCCESS)
}
