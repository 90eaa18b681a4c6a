//! `qmaps` command-line front end.

mod commands;
mod error;
mod io;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use crate::error::CliError;

#[derive(Debug, Parser)]
#[command(
    name = "qmaps",
    version,
    about = "Quantum maps, superchannels and process tensors"
)]
pub struct Cli {
    /// Tolerance for the TP/HP/CP and Markov verdicts.
    #[arg(long, global = true, default_value_t = qmaps::tol::VERDICT)]
    pub tol: f64,
    /// Seed for every random choice.
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,
    /// Write the JSON result here instead of stdout.
    #[arg(long, global = true)]
    pub output: Option<PathBuf>,
    /// Also write a CSV table to this path.
    #[arg(long, global = true)]
    pub emit_table: Option<PathBuf>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Re-encode a map in another representation.
    Convert {
        #[arg(long)]
        input: PathBuf,
        #[arg(long, value_enum)]
        to: Repr,
    },
    /// Report TP, HP and CP verdicts for a map.
    Check {
        #[arg(long)]
        input: PathBuf,
    },
    /// Produce a dilation from a map or from a preset.
    Dilate(DilateArgs),
    /// Build a standard channel, or the channel induced by a one-step dilation.
    Channel(ChannelArgs),
    /// Build the superchannel of a one-step dilation and optionally apply it.
    Superchannel {
        #[arg(long)]
        dilation: PathBuf,
        #[arg(long)]
        operation: Option<PathBuf>,
    },
    /// Build the process tensor of a dilation.
    ProcessTensor {
        #[arg(long)]
        dilation: PathBuf,
        #[arg(short = 'k', long)]
        k: Option<usize>,
    },
    /// Reconstruct a process tensor from simulated basis sequences.
    Tomography {
        #[arg(long)]
        dilation: PathBuf,
        #[arg(short = 'k', long)]
        k: Option<usize>,
    },
    /// Distance between a process and its Markov product.
    Nonmarkov {
        /// A dilation or a process tensor.
        #[arg(long)]
        input: PathBuf,
        #[arg(long, value_enum, default_value_t = DistanceArg::Trace)]
        distance: DistanceArg,
        #[arg(short = 'k', long)]
        k: Option<usize>,
    },
    /// Linear process tomography with initial correlations.
    NcpDemo {
        #[arg(long, default_value = "1")]
        mu: String,
        #[arg(long, default_value = "1")]
        nu: String,
        #[arg(long, value_enum, default_value_t = ProtocolArg::Projection)]
        protocol: ProtocolArg,
    },
}

#[derive(Debug, Args)]
pub struct DilateArgs {
    /// Map to dilate; excludes --preset.
    #[arg(long, conflicts_with = "preset")]
    pub input: Option<PathBuf>,
    #[arg(long, value_enum)]
    pub preset: Option<Preset>,
    #[arg(short = 'k', long, default_value_t = 2)]
    pub k: usize,
    #[arg(long, default_value_t = 2)]
    pub d_s: usize,
    #[arg(long, default_value_t = 2)]
    pub d_e: usize,
    /// Draw a correlated initial state for the random preset.
    #[arg(long)]
    pub correlated: bool,
}

#[derive(Debug, Args)]
pub struct ChannelArgs {
    #[arg(long, value_enum, conflicts_with = "dilation")]
    pub kind: Option<ChannelKind>,
    /// One-step product dilation whose induced channel is reported.
    #[arg(long)]
    pub dilation: Option<PathBuf>,
    #[arg(long, default_value_t = 0.0)]
    pub p: f64,
    #[arg(long, default_value_t = 0.0)]
    pub gamma: f64,
    #[arg(long, default_value_t = 2)]
    pub d: usize,
    #[arg(long, value_enum, default_value_t = Repr::Kraus)]
    pub to: Repr,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
pub enum Repr {
    Tomographic,
    Kraus,
    Aform,
    Bform,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
pub enum Preset {
    Swap,
    Fresh,
    Random,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
pub enum ChannelKind {
    Identity,
    Depolarizing,
    AmplitudeDamping,
    BitFlip,
    PhaseFlip,
    Hadamard,
    Random,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
pub enum DistanceArg {
    Trace,
    RelativeEntropy,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
pub enum ProtocolArg {
    Projection,
    ProjectRotate,
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match commands::run(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}

impl Cli {
    fn check_tol(&self) -> Result<(), CliError> {
        if !(self.tol.is_finite() && self.tol >= 0.0) {
            return Err(CliError::Validation(format!(
                "--tol must be a non-negative number, got {}",
                self.tol
            )));
        }
        Ok(())
    }
}
