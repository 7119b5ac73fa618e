mod commands;
mod output;

use clap::{Args, Parser, Subcommand};
use std::path::PathBuf;
use std::process::ExitCode;
use wickforge::PresetKind;

/// Check and explore statistics systems given by a cross operator `T` and an
/// optional braid `B`.
#[derive(Debug, Parser)]
#[command(name = "wickforge", version)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,

    /// Numerical tolerance; falls back to WICKFORGE_EPS, then 1e-9.
    #[arg(long, global = true)]
    pub eps: Option<f64>,

    /// Emit machine-readable JSON instead of text.
    #[arg(long, global = true)]
    pub json: bool,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Run the operator checks (star, Yang-Baxter, braid, consistency).
    Validate(SourceArgs),
    /// Gram matrix, spectrum and positivity of one sector.
    Gram {
        #[command(flatten)]
        source: SourceArgs,
        #[arg(long)]
        sector: usize,
        /// Use the quotient by the braid ideal.
        #[arg(long)]
        quotient: bool,
    },
    /// Kernel of P2 = id + T~.
    Kernel(SourceArgs),
    /// Quotient dimensions and descended-operator checks per sector.
    Quotient {
        #[command(flatten)]
        source: SourceArgs,
        #[arg(long, default_value_t = 4)]
        max_sector: usize,
    },
    /// Normal-order an expression such as "a(1) c(1)".
    NormalOrder {
        expr: String,
        #[command(flatten)]
        source: SourceArgs,
        /// Compare both sides as Fock operators on sectors 0..=max-sector.
        #[arg(long)]
        verify: bool,
        #[arg(long, default_value_t = 4)]
        max_sector: usize,
    },
    /// List presets, or write a preset as an operator file.
    Catalog {
        #[arg(long, value_parser = parse_kind)]
        preset: Option<PresetKind>,
        #[command(flatten)]
        params: PresetParams,
        /// Write the operator file to PATH, or to stdout without a path.
        #[arg(long, num_args = 0..=1, requires = "preset")]
        emit: Option<Option<PathBuf>>,
    },
}

#[derive(Debug, Args)]
#[group(required = true, multiple = false, id = "system_source")]
pub struct Source {
    /// Operator file (JSON).
    #[arg(long)]
    pub file: Option<PathBuf>,
    /// Built-in statistics: boltzmann, boson, fermion, quon, phase.
    #[arg(long, value_parser = parse_kind)]
    pub preset: Option<PresetKind>,
}

#[derive(Debug, Args)]
pub struct PresetParams {
    /// Number of species [default: 2].
    #[arg(long)]
    pub dim: Option<usize>,
    /// Quon deformation parameter.
    #[arg(long, allow_negative_numbers = true)]
    pub q: Option<f64>,
    /// Phases Phi_ij: N*N row-major values, or the N(N-1)/2 entries above the diagonal.
    #[arg(long, allow_hyphen_values = true)]
    pub phi: Option<String>,
}

#[derive(Debug, Args)]
pub struct SourceArgs {
    #[command(flatten)]
    pub source: Source,
    #[command(flatten)]
    pub params: PresetParams,
}

fn parse_kind(s: &str) -> Result<PresetKind, String> {
    s.parse().map_err(|e: wickforge::catalog::PresetError| e.to_string())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match commands::run(&cli) {
        Ok(code) => code.into(),
        Err(err) => {
            eprintln!("error: {err}");
            err.exit_code().into()
        }
    }
}
