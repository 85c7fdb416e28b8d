// SPDX-License-Identifier: Apache-2.0

//! Command-line surface. Every value flag is optional here so a config file
//! can supply it; defaults and required checks live in the commands.

use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

#[derive(Debug, Parser)]
#[command(
    name = "thermowit",
    version,
    about = "Heat bounds and heat-based witnesses for memory-assisted thermal interactions"
)]
pub struct Cli {
    /// TOML file with parameter values; flags take precedence.
    #[arg(long, global = true, value_name = "PATH")]
    pub config: Option<PathBuf>,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Extremal heats of one state (JSON).
    Bounds(BoundsArgs),
    /// Heat bounds of two-qudit isotropic states against the separable envelope (CSV).
    WernerSweep(WernerArgs),
    /// Isotropic-state detection threshold per local dimension (CSV).
    LambdaCrt(LambdaCrtArgs),
    /// Left-root magnitude versus its large-β approximation (CSV).
    Asymptotic(AsymptoticArgs),
    /// Two spins and a cavity field with a cyclic memory (CSV plus a JSON summary).
    TavisCummings(TcArgs),
    /// Heat envelope of a separable or incoherent set, with an optional verdict (JSON).
    Witness(WitnessArgs),
    /// Solver versus brute-force oracle: one state (JSON) or a seeded study (CSV).
    Oracle(OracleArgs),
}

#[derive(Debug, Args)]
pub struct OutArg {
    /// Output file, written atomically; stdout when absent.
    #[arg(long, value_name = "PATH")]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct BoundsArgs {
    #[arg(long, value_name = "PATH")]
    pub state: Option<PathBuf>,
    #[arg(long, value_name = "PATH")]
    pub hamiltonian: Option<PathBuf>,
    #[arg(long)]
    pub beta: Option<f64>,
    #[command(flatten)]
    pub out: OutArg,
}

#[derive(Debug, Args)]
pub struct WernerArgs {
    /// Local dimension, 2 to 7.
    #[arg(long)]
    pub d: Option<usize>,
    #[arg(long)]
    pub beta: Option<f64>,
    #[arg(long)]
    pub lambda_steps: Option<usize>,
    #[command(flatten)]
    pub out: OutArg,
}

#[derive(Debug, Args)]
pub struct LambdaCrtArgs {
    /// Largest local dimension, 2 to 12.
    #[arg(long)]
    pub d_max: Option<usize>,
    #[command(flatten)]
    pub out: OutArg,
}

#[derive(Debug, Args)]
pub struct AsymptoticArgs {
    /// Comma-separated local dimensions.
    #[arg(long)]
    pub d_list: Option<String>,
    /// Comma-separated inverse temperatures.
    #[arg(long)]
    pub beta_list: Option<String>,
    /// Entropy of the bipartite state; defaults to ln d.
    #[arg(long)]
    pub entropy: Option<f64>,
    #[command(flatten)]
    pub out: OutArg,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Control {
    /// System spin in the coherent state whose dephasing is thermal.
    Coherent,
    /// System spin in its thermal state.
    Incoherent,
}

impl Control {
    pub fn as_str(self) -> &'static str {
        match self {
            Control::Coherent => "coherent",
            Control::Incoherent => "incoherent",
        }
    }
}

#[derive(Debug, Args)]
pub struct TcArgs {
    #[arg(long)]
    pub epsilon: Option<f64>,
    #[arg(long)]
    pub g: Option<f64>,
    #[arg(long)]
    pub beta: Option<f64>,
    /// Cycle time; accepts forms such as `pi/4`.
    #[arg(long)]
    pub tau: Option<String>,
    #[arg(long)]
    pub n_max: Option<usize>,
    /// Time points on [0, tau], endpoints included.
    #[arg(long)]
    pub steps: Option<usize>,
    #[arg(long, value_enum)]
    pub control: Option<Control>,
    /// Largest accepted population of the top two Fock levels.
    #[arg(long)]
    pub max_leakage: Option<f64>,
    #[command(flatten)]
    pub out: OutArg,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum WitnessKind {
    Separable,
    Incoherent,
}

#[derive(Debug, Args)]
pub struct WitnessArgs {
    #[arg(long, value_enum)]
    pub kind: Option<WitnessKind>,
    #[arg(long)]
    pub beta: Option<f64>,
    /// State whose marginal data (separable) or energy (incoherent) defines the set.
    #[arg(long, value_name = "PATH")]
    pub state: Option<PathBuf>,
    /// Separable: comma-separated local energies.
    #[arg(long)]
    pub energies: Option<String>,
    /// Separable: comma-separated local entropies.
    #[arg(long)]
    pub entropies: Option<String>,
    /// Separable: comma-separated local dimensions (ladder Hamiltonians).
    #[arg(long)]
    pub dims: Option<String>,
    /// Separable: local Hamiltonian files in party order, instead of ladders.
    #[arg(long = "local-hamiltonian", value_name = "PATH")]
    pub local_hamiltonians: Vec<PathBuf>,
    /// Separable: ignore local entropies (entropy floor 0).
    #[arg(long)]
    pub dimension_only: bool,
    /// Incoherent: energy of the set.
    #[arg(long)]
    pub energy: Option<f64>,
    /// Incoherent: Hamiltonian file.
    #[arg(long, value_name = "PATH")]
    pub hamiltonian: Option<PathBuf>,
    /// Incoherent: comma-separated energy levels, instead of a file.
    #[arg(long)]
    pub levels: Option<String>,
    /// Measured heat to classify.
    #[arg(long, allow_negative_numbers = true)]
    pub q: Option<f64>,
    #[arg(long)]
    pub margin: Option<f64>,
    #[command(flatten)]
    pub out: OutArg,
}

#[derive(Debug, Args)]
pub struct OracleArgs {
    /// Single-state mode: state file.
    #[arg(long, value_name = "PATH")]
    pub state: Option<PathBuf>,
    /// Single-state mode: Hamiltonian file.
    #[arg(long, value_name = "PATH")]
    pub hamiltonian: Option<PathBuf>,
    #[arg(long)]
    pub beta: Option<f64>,
    /// Study mode: comma-separated dimensions.
    #[arg(long)]
    pub dims: Option<String>,
    /// Study mode: states per dimension.
    #[arg(long)]
    pub count: Option<usize>,
    #[arg(long)]
    pub seed: Option<u64>,
    /// Grid points per scan level (at least 1000).
    #[arg(long)]
    pub resolution: Option<usize>,
    /// Random feasibility samples per state.
    #[arg(long)]
    pub samples: Option<usize>,
    #[command(flatten)]
    pub out: OutArg,
}
