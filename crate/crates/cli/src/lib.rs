//! Library behind the `oam` binary: spectrum, scan, beam-shaping and tomography
//! jobs driven by a JSON config.

mod commands;
mod config;
mod error;
mod output;

use std::ffi::OsString;
use std::path::PathBuf;
use std::time::Instant;

use clap::{Args, Parser, Subcommand};

use config::{load, OutputFormat, Overrides};
use error::{CliError, CliResult};

#[derive(Parser)]
#[command(name = "oam", version, about = "OAM spectrum, beam-shaping and tomography runs")]
struct Cli {
    #[command(subcommand)]
    command: Command,
    #[command(flatten)]
    common: Common,
}

#[derive(Args)]
struct Common {
    /// JSON run configuration.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// Overrides `outputPath`.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// Overrides `outputFormat`.
    #[arg(long, global = true, value_enum)]
    format: Option<OutputFormat>,
    /// Overrides `seed`.
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// Worker threads for parallel sections (default: all cores).
    #[arg(long, global = true)]
    threads: Option<usize>,
}

#[derive(Subcommand, Clone, Copy)]
enum Command {
    /// Coincidence amplitudes over an OAM window.
    Spectrum,
    /// Schmidt number over an (a, gamma) grid.
    Scan,
    /// Phase design for a target intensity plus a propagation check.
    Shape,
    /// Simulated measurement, reconstruction and entanglement metrics.
    Tomography,
}

fn execute(cli: Cli) -> CliResult<()> {
    let common = cli.common;
    if let Some(n) = common.threads {
        if n == 0 {
            return Err(CliError::config("--threads", "must be at least 1"));
        }
        rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build_global()
            .map_err(|e| CliError::Runtime(e.to_string()))?;
    }
    let path = common
        .config
        .ok_or_else(|| CliError::config("--config", "a config file is required"))?;
    let overrides = Overrides {
        out: common.out,
        format: common.format,
        seed: common.seed,
    };
    let start = Instant::now();
    match cli.command {
        Command::Spectrum => commands::spectrum::run(&load(&path, &overrides)?),
        Command::Scan => commands::scan::run(&load(&path, &overrides)?),
        Command::Shape => commands::shape::run(&load(&path, &overrides)?),
        Command::Tomography => {
            commands::tomography::run(&load(&path, &overrides)?)?;
            eprintln!("wall time: {:.3} s", start.elapsed().as_secs_f64());
            Ok(())
        }
    }
}

/// Parses `args` (program name first), runs the command and returns the
/// process exit code. Errors are reported on stderr as one JSON line.
pub fn run<I, T>(args: I) -> u8
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) if !e.use_stderr() => {
            let _ = e.print();
            return 0;
        }
        Err(e) => {
            let message = e.to_string();
            let first = message.lines().next().unwrap_or("invalid arguments");
            eprintln!("{}", CliError::config("arguments", first.trim_start_matches("error: ")).to_line());
            return 2;
        }
    };
    match execute(cli) {
        Ok(()) => 0,
        Err(e) => {
            eprintln!("{}", e.to_line());
            e.exit_code() as u8
        }
    }
}
