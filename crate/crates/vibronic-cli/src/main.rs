use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use vibronic_cli::config::ConfigFile;
use vibronic_cli::run::{
    cmd_noise, cmd_sweep, cmd_truncation, resolve_deterministic, resolve_noise, resolve_sweep,
    resolve_truncation, NoiseOverrides, SweepOverrides, TruncationOverrides,
};

/// Vibrational overlap factors of displaced oscillators: method sweeps,
/// truncation studies, and noise-robustness curves, written as CSV.
#[derive(Parser)]
#[command(name = "vibronic", version)]
struct Cli {
    /// Flat `key = value` settings file; flags override its values
    #[arg(long, global = true, value_name = "PATH")]
    config: Option<PathBuf>,

    /// Omit timestamps so identical inputs give byte-identical files
    #[arg(long, global = true)]
    deterministic: bool,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run one overlap method over its displacement grid
    Sweep(SweepArgs),
    /// Tabulate truncated-basis deviations from the closed forms
    Truncation(TruncationArgs),
    /// Monte Carlo readout-noise study over both emulated pipelines
    Noise(NoiseArgs),
}

#[derive(Args)]
struct SweepArgs {
    /// analytic | oracle | direct | tomography | moussa [default: tomography]
    #[arg(long)]
    method: Option<String>,

    /// Largest displacement on the grid [default: 3; moussa: 4]
    #[arg(long)]
    b0: Option<f64>,

    /// Number of grid steps; the grid has steps+1 points [default: 11]
    #[arg(long)]
    steps: Option<usize>,

    /// Basis dimension for the truncated methods; tomography needs 8,
    /// moussa needs 4 [default: 8; moussa: 4]
    #[arg(long)]
    dim: Option<usize>,

    /// Ancilla rotation angle in radians (moussa only) [default: pi]
    #[arg(long)]
    theta: Option<f64>,

    /// Total imposed on the solved ground-row overlaps (moussa only):
    /// unit | four-level [default: unit]
    #[arg(long)]
    norm: Option<String>,

    /// Output CSV path [default: sweep.csv]
    #[arg(long, value_name = "PATH")]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct TruncationArgs {
    /// Comma-separated basis dimensions, each at least 4 [default: 4,8,16]
    #[arg(long)]
    dim: Option<String>,

    /// Largest displacement on the grid [default: 4]
    #[arg(long)]
    b0: Option<f64>,

    /// Number of grid steps; the grid has steps+1 points [default: 40]
    #[arg(long)]
    steps: Option<usize>,

    /// Output CSV path [default: truncation.csv]
    #[arg(long, value_name = "PATH")]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct NoiseArgs {
    /// Noise amplitudes: comma list (0,0.5,1) or range start:stop:step
    /// [default: 0:1:0.1]
    #[arg(long)]
    eta: Option<String>,

    /// Noisy trials per amplitude [default: 1000]
    #[arg(long)]
    trials: Option<usize>,

    /// Base seed for the reproducible noise streams [default: 7]
    #[arg(long)]
    seed: Option<u64>,

    /// Ancilla rotation angle in radians [default: pi]
    #[arg(long)]
    theta: Option<f64>,

    /// Output CSV path [default: noise.csv]
    #[arg(long, value_name = "PATH")]
    out: Option<PathBuf>,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match dispatch(cli) {
        Ok(summary) => {
            println!("{summary}");
            ExitCode::SUCCESS
        }
        Err(err) => {
            eprintln!("{{\"error\":\"{}\"}}", json_escape(&err.to_string()));
            ExitCode::FAILURE
        }
    }
}

fn dispatch(cli: Cli) -> vibronic::Result<String> {
    let config = match &cli.config {
        Some(path) => ConfigFile::load(path)?,
        None => ConfigFile::default(),
    };
    let deterministic = resolve_deterministic(cli.deterministic, &config)?;
    match cli.command {
        Command::Sweep(args) => {
            let overrides = SweepOverrides {
                method: args.method,
                b0: args.b0,
                steps: args.steps,
                dim: args.dim,
                theta: args.theta,
                norm: args.norm,
                out: args.out,
            };
            cmd_sweep(&resolve_sweep(&overrides, &config, deterministic)?)
        }
        Command::Truncation(args) => {
            let overrides = TruncationOverrides {
                dims: args.dim,
                b0: args.b0,
                steps: args.steps,
                out: args.out,
            };
            cmd_truncation(&resolve_truncation(&overrides, &config, deterministic)?)
        }
        Command::Noise(args) => {
            let overrides = NoiseOverrides {
                eta: args.eta,
                trials: args.trials,
                seed: args.seed,
                theta: args.theta,
                out: args.out,
            };
            cmd_noise(&resolve_noise(&overrides, &config, deterministic)?)
        }
    }
}

/// Escapes a message for embedding in a one-line JSON object on stderr.
fn json_escape(text: &str) -> String {
    let mut escaped = String::with_capacity(text.len());
    for c in text.chars() {
        match c {
            '"' => escaped.push_str("\\\""),
            '\\' => escaped.push_str("\\\\"),
            '\n' => escaped.push_str("\\n"),
            '\r' => escaped.push_str("\\r"),
            '\t' => escaped.push_str("\\t"),
            c if (c as u32) < 0x20 => {
                escaped.push_str(&format!("\\u{:04x}", c as u32));
            }
            c => escaped.push(c),
        }
    }
    escaped
}
