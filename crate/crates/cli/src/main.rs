use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use stardyn_cli::descriptor::{load, System};
use stardyn_cli::{classify, covrep, depth_limit_from, extend, spectrum, verify_all, CliError, Mode, DEPTH_LIMIT_VAR};

/// Exact verification of finite C*-dynamical systems and their natural extensions.
#[derive(Parser)]
#[command(name = "stardyn", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Classification with the completeness criteria.
    Classify { file: PathBuf },
    /// Natural-extension tower dimensions and identities.
    Extend {
        file: PathBuf,
        #[arg(long)]
        levels: usize,
        /// Write the Bratteli diagram in DOT format.
        #[arg(long)]
        dot: Option<PathBuf>,
    },
    /// Points of the extended spectrum with the lifted map.
    Spectrum {
        file: PathBuf,
        #[arg(long)]
        depth: usize,
        #[arg(long)]
        dot: Option<PathBuf>,
    },
    /// Covariance relations of a sparse-operator representation.
    Covrep {
        file: PathBuf,
        #[arg(long)]
        depth: usize,
        #[arg(long, value_enum, default_value_t = ModeArg::Strict)]
        mode: ModeArg,
    },
    /// Every applicable suite; fails on any breach.
    VerifyAll {
        file: PathBuf,
        #[arg(long)]
        depth: usize,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum ModeArg {
    Strict,
    Example13,
}

fn read(path: &PathBuf) -> Result<System, CliError> {
    let text = std::fs::read_to_string(path).map_err(|e| CliError::Input(format!("{}: {e}", path.display())))?;
    load(&text)
}

fn run(cli: Cli) -> Result<bool, CliError> {
    let limit = depth_limit_from(std::env::var(DEPTH_LIMIT_VAR).ok().as_deref())?;
    let (outcome, dot_path) = match cli.command {
        Command::Classify { file } => (classify(&read(&file)?)?, None),
        Command::Extend { file, levels, dot } => (extend(&read(&file)?, levels, limit, dot.is_some())?, dot),
        Command::Spectrum { file, depth, dot } => (spectrum(&read(&file)?, depth, limit, dot.is_some())?, dot),
        Command::Covrep { file, depth, mode } => {
            let mode = match mode {
                ModeArg::Strict => Mode::Strict,
                ModeArg::Example13 => Mode::Example13,
            };
            (covrep(&read(&file)?, depth, mode, limit)?, None)
        }
        Command::VerifyAll { file, depth } => (verify_all(&read(&file)?, depth, limit)?, None),
    };
    if let (Some(path), Some(dot)) = (dot_path, &outcome.dot) {
        std::fs::write(&path, dot).map_err(|e| CliError::Input(format!("{}: {e}", path.display())))?;
    }
    let text = serde_json::to_string_pretty(&outcome.report).expect("reports serialize");
    // Write errors such as a closed pipe are ignored.
    let _ = writeln!(std::io::stdout().lock(), "{text}");
    Ok(outcome.passed)
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("stardyn: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
