use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{Context, Result};
use clap::{Args, Parser, Subcommand};

use relsep::interface::{
    channels_from_json, emit_table, run_check, run_scan, run_table_check, CheckReport,
    MethodChoice, OutputFormat, RunConfig, TableDump, EXIT_CHECK_FAILED, EXIT_CONFIG,
    EXIT_NO_POINTS,
};
use relsep::ChannelConfig;

/// Relativistic J-matrix phase shifts for separable potentials.
#[derive(Parser)]
#[command(name = "relsep", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Sweep an energy grid and write S, tau and status per point.
    Scan(ScanArgs),
    /// Same as scan with the analytic and numeric methods side by side.
    Compare(ScanArgs),
    /// Run the built-in invariant suites.
    Check(CheckArgs),
    /// Write H0, Omega, Jmat and the reference coefficients at one energy.
    EmitTable(TableArgs),
}

#[derive(Args)]
struct ScanArgs {
    #[arg(long)]
    config: PathBuf,
    /// Output file; overrides the config. Standard output when neither is set.
    #[arg(long)]
    out: Option<PathBuf>,
    /// csv or json; overrides the config.
    #[arg(long)]
    format: Option<OutputFormat>,
    /// Worker threads.
    #[arg(long)]
    jobs: Option<usize>,
}

#[derive(Args)]
struct CheckArgs {
    /// JSON channel list (or a single channel / run config); defaults when absent.
    #[arg(long)]
    config: Option<PathBuf>,
    /// Check previously emitted tables instead of computing them.
    #[arg(long = "from-table")]
    from_table: Vec<PathBuf>,
    /// Perturb Omega's diagonal at this row (fault injection).
    #[arg(long = "corrupt-omega", hide = true)]
    corrupt_omega: Option<usize>,
    /// Write the report here as well as to standard output.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct TableArgs {
    /// Channel JSON (a run config also works; extra keys are ignored).
    #[arg(long)]
    config: PathBuf,
    #[arg(long)]
    epsilon: f64,
    #[arg(long = "n-max", default_value_t = 10)]
    n_max: usize,
    #[arg(long)]
    out: Option<PathBuf>,
}

/// A failure with the exit status it maps to.
struct Failure {
    code: u8,
    error: anyhow::Error,
}

fn config_error(error: impl Into<anyhow::Error>) -> Failure {
    Failure {
        code: EXIT_CONFIG,
        error: error.into(),
    }
}

fn write_output(path: Option<&Path>, text: &str) -> Result<()> {
    match path {
        Some(path) => {
            std::fs::write(path, text).with_context(|| format!("writing {}", path.display()))
        }
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn scan(args: ScanArgs, compare: bool) -> std::result::Result<u8, Failure> {
    let mut config = RunConfig::from_path(&args.config).map_err(config_error)?;
    if compare {
        let n = match config.method {
            MethodChoice::Numeric(n) | MethodChoice::Both(n) => n,
            MethodChoice::Analytic => config.fallback_truncation(),
        };
        config.method = MethodChoice::Both(n);
        config.validate().map_err(config_error)?;
    }
    let format = args.format.unwrap_or(config.output.format);
    let out = args
        .out
        .or_else(|| config.output.path.as_ref().map(PathBuf::from));
    let report = run_scan(&config, args.jobs).map_err(config_error)?;
    write_output(out.as_deref(), &report.render(format)).map_err(config_error)?;
    eprintln!(
        "{} of {} points computed",
        report.succeeded(),
        report.rows.len()
    );
    if let Some(max) = report.max_abs_diff() {
        eprintln!("max |S_analytic - S_numeric| = {max:.3e}");
    }
    for index in &report.unwrap_breaks {
        eprintln!("warning: ambiguous phase jump at grid point {index}; unwrapping restarted");
    }
    Ok(if report.succeeded() > 0 {
        0
    } else {
        EXIT_NO_POINTS
    })
}

fn check(args: CheckArgs) -> std::result::Result<u8, Failure> {
    let report: CheckReport = if args.from_table.is_empty() {
        let channels: Vec<ChannelConfig> = match &args.config {
            Some(path) => {
                let text = std::fs::read_to_string(path)
                    .with_context(|| format!("reading {}", path.display()))
                    .map_err(config_error)?;
                channels_from_json(&text).map_err(config_error)?
            }
            None => Vec::new(),
        };
        run_check(&channels, args.corrupt_omega)
    } else {
        let tables = args
            .from_table
            .iter()
            .map(|p| TableDump::from_path(p))
            .collect::<relsep::Result<Vec<_>>>()
            .map_err(config_error)?;
        run_table_check(&tables)
    };
    let rendered = report.render();
    print!("{rendered}");
    if let Some(path) = &args.out {
        write_output(Some(path), &rendered).map_err(config_error)?;
    }
    Ok(if report.passed() {
        0
    } else {
        EXIT_CHECK_FAILED
    })
}

fn table(args: TableArgs) -> std::result::Result<u8, Failure> {
    let text = std::fs::read_to_string(&args.config)
        .with_context(|| format!("reading {}", args.config.display()))
        .map_err(config_error)?;
    let channel: ChannelConfig = serde_json::from_str(&text)
        .context("parsing channel config")
        .map_err(config_error)?;
    channel.validate().map_err(config_error)?;
    let table = emit_table(&channel, args.epsilon, args.n_max).map_err(config_error)?;
    write_output(args.out.as_deref(), &(table.to_json() + "\n")).map_err(config_error)?;
    Ok(0)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Scan(args) => scan(args, false),
        Command::Compare(args) => scan(args, true),
        Command::Check(args) => check(args),
        Command::EmitTable(args) => table(args),
    };
    match result {
        Ok(code) => ExitCode::from(code),
        Err(failure) => {
            eprintln!("error: {:#}", failure.error);
            ExitCode::from(failure.code)
        }
    }
}
