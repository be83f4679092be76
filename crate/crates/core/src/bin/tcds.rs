//! Batch front-end: load a system description, run verification
//! suites, and emit machine-readable JSON reports.
//!
//! Exit codes: 0 all checks passed, 1 some check failed, 2 invalid
//! input (unparseable config, unknown system, unknown task, I/O error).

use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Instant;

use clap::{Args, Parser, Subcommand};

use tcds::config::{RunConfig, SystemConfig};
use tcds::report::Report;
use tcds::{builtin, runner};

#[derive(Parser)]
#[command(
    name = "tcds",
    version,
    about = "Verification engine for discrete twisted dynamical systems"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Check the system axioms and the derived identities.
    Verify(RunArgs),
    /// Check the twisted convolution *-algebra laws.
    Algebra(RunArgs),
    /// Check Fourier coefficients and conditional expectations.
    Fourier(RunArgs),
    /// Check absorption identities and compression bounds.
    Fell(RunArgs),
    /// Check approximation certificates, cutoffs, and transport.
    Approx(RunArgs),
    /// Classify the canonical representation and check norm domination.
    Regularity(RunArgs),
    /// Write the built-in gallery as self-contained config files.
    Examples {
        /// Directory for the generated configs.
        #[arg(long, default_value = "gallery")]
        out: PathBuf,
    },
    /// Merge previously emitted reports into one.
    Report {
        /// Report files to merge.
        files: Vec<PathBuf>,
        /// Write the merged report here instead of stdout.
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Args)]
struct RunArgs {
    /// JSON system/run description.
    #[arg(long)]
    config: PathBuf,
    /// Write the report here instead of stdout.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Override the config seed.
    #[arg(long)]
    seed: Option<u64>,
    /// Override the config tolerance.
    #[arg(long)]
    tolerance: Option<f64>,
    /// Comma-separated task list overriding the command default.
    #[arg(long, value_delimiter = ',')]
    tasks: Option<Vec<String>>,
    /// Override the config sample count.
    #[arg(long)]
    samples: Option<usize>,
    /// Leave the elapsed_ms field out of the report.
    #[arg(long)]
    omit_timing: bool,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let code = match dispatch(cli) {
        Ok(code) => code,
        Err(message) => {
            eprintln!("error: {message}");
            2
        }
    };
    ExitCode::from(code)
}

fn dispatch(cli: Cli) -> Result<u8, String> {
    match cli.command {
        Command::Verify(args) => run_command("verify", args),
        Command::Algebra(args) => run_command("algebra", args),
        Command::Fourier(args) => run_command("fourier", args),
        Command::Fell(args) => run_command("fell", args),
        Command::Approx(args) => run_command("approx", args),
        Command::Regularity(args) => run_command("regularity", args),
        Command::Examples { out } => examples(&out),
        Command::Report { files, out } => merge_reports(&files, out.as_deref()),
    }
}

fn run_command(command: &str, args: RunArgs) -> Result<u8, String> {
    let text = fs::read_to_string(&args.config)
        .map_err(|e| format!("cannot read {}: {e}", args.config.display()))?;
    let mut cfg = RunConfig::from_json(&text).map_err(|e| e.to_string())?;
    if let Some(seed) = args.seed {
        cfg.seed = seed;
    }
    if let Some(tolerance) = args.tolerance {
        cfg.tolerance = tolerance;
    }
    if let Some(samples) = args.samples {
        cfg.samples = samples;
    }
    if let Some(tasks) = args.tasks {
        cfg.tasks = tasks;
    }

    let started = Instant::now();
    let mut report = runner::run(command, &cfg).map_err(|e| e.to_string())?;
    if !args.omit_timing {
        report.elapsed_ms = Some(started.elapsed().as_millis() as u64);
    }
    emit(&report.to_json(), args.out.as_deref())?;
    Ok(u8::try_from(report.exit_code()).unwrap_or(1))
}

fn examples(out: &Path) -> Result<u8, String> {
    fs::create_dir_all(out).map_err(|e| format!("cannot create {}: {e}", out.display()))?;
    let mut index = Vec::new();
    for sys in builtin::all() {
        let cfg = RunConfig::for_system(SystemConfig::describe(&sys));
        let path = out.join(format!("{}.json", sys.name()));
        fs::write(&path, cfg.to_json())
            .map_err(|e| format!("cannot write {}: {e}", path.display()))?;
        index.push(serde_json::json!({
            "name": sys.name(),
            "path": path.display().to_string(),
        }));
    }
    let listing = serde_json::to_string_pretty(&serde_json::json!({ "gallery": index }))
        .expect("index serializes");
    println!("{listing}");
    Ok(0)
}

fn merge_reports(files: &[PathBuf], out: Option<&Path>) -> Result<u8, String> {
    if files.is_empty() {
        return Err("report: no input files given".into());
    }
    let mut reports = Vec::with_capacity(files.len());
    for path in files {
        let text = fs::read_to_string(path)
            .map_err(|e| format!("cannot read {}: {e}", path.display()))?;
        reports.push(Report::from_json(&text).map_err(|e| e.to_string())?);
    }
    let merged = Report::merge(&reports).map_err(|e| e.to_string())?;
    emit(&merged.to_json(), out)?;
    Ok(u8::try_from(merged.exit_code()).unwrap_or(1))
}

fn emit(text: &str, out: Option<&Path>) -> Result<(), String> {
    match out {
        Some(path) => {
            fs::write(path, text).map_err(|e| format!("cannot write {}: {e}", path.display()))
        }
        None => {
            print!("{text}");
            Ok(())
        }
    }
}
