use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

pub const WORKERS_ENV: &str = "COLLATZ_LAB_WORKERS";

#[derive(Debug, Parser)]
#[command(
    name = "collatz-lab",
    version,
    about = "Mod-4 class analysis of the 3x+1 map"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,

    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Debug, Clone, Args)]
pub struct OutputArgs {
    /// Write results here instead of standard output.
    #[arg(long, global = true, value_name = "PATH")]
    pub out: Option<PathBuf>,

    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    pub format: Format,

    /// Worker threads for range sweeps [default: available parallelism].
    #[arg(long, global = true, env = WORKERS_ENV, value_parser = clap::value_parser!(u64).range(1..))]
    pub workers: Option<u64>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
    Text,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Residue class and index of a number.
    Classify { n: String },

    /// Iterate C (or T) down to 1.
    Trajectory {
        n: String,
        #[arg(long, value_enum, default_value_t = MapArg::C)]
        map: MapArg,
        #[arg(long, default_value_t = collatz_lab::DEFAULT_STEP_LIMIT)]
        limit: u64,
    },

    /// Vertex-count coordinates of a number.
    Polyline { n: String },

    /// Sweep a range, checking a symbolic identity against brute-force iteration.
    Verify(VerifyArgs),

    /// Cycle equation searches.
    Cycles {
        #[command(subcommand)]
        action: CyclesAction,
    },

    /// Delay or glide record holders.
    Records {
        #[arg(value_enum)]
        kind: RecordArg,
        #[arg(long, default_value_t = 1_000_000)]
        max: u64,
        #[arg(long, default_value_t = collatz_lab::DEFAULT_STEP_LIMIT)]
        limit: u64,
    },

    /// Backward tree from 1.
    Tree {
        #[arg(long, default_value_t = 10)]
        depth: u64,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum MapArg {
    C,
    T,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum RecordArg {
    Delay,
    Glide,
}

#[derive(Debug, Subcommand)]
pub enum CyclesAction {
    /// Enumerate block exponent sequences and solve each cycle equation.
    Search {
        #[arg(long, default_value_t = 3)]
        n_max: usize,
        #[arg(long, default_value_t = 12)]
        budget: u64,
    },
}

#[derive(Debug, Clone, Args)]
pub struct VerifyArgs {
    #[arg(value_enum)]
    pub target: VerifyTarget,

    /// First input [default: 1, or 0 for β indices].
    #[arg(long)]
    pub start: Option<u64>,

    /// Last input [default depends on the target].
    #[arg(long)]
    pub max: Option<u64>,

    #[arg(long, default_value_t = collatz_lab::DEFAULT_STEP_LIMIT)]
    pub limit: u64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum VerifyTarget {
    /// Class transition table against C, over z.
    Transitions,
    /// β-chain solvers and iteration, over k (β = 4k+2).
    BetaChain,
    /// Block decomposition and recurrence, over k (β = 4k+2).
    Blocks,
    /// Coordinate roundtrip, class parity, closed-form T and step law, over z.
    Polyline,
    /// Every z reaches 1 within the step limit.
    Convergence,
}

impl VerifyTarget {
    pub fn name(self) -> &'static str {
        match self {
            VerifyTarget::Transitions => "transitions",
            VerifyTarget::BetaChain => "beta-chain",
            VerifyTarget::Blocks => "blocks",
            VerifyTarget::Polyline => "polyline",
            VerifyTarget::Convergence => "convergence",
        }
    }

    pub fn default_start(self) -> u64 {
        match self {
            VerifyTarget::BetaChain | VerifyTarget::Blocks => 0,
            _ => 1,
        }
    }

    pub fn default_max(self) -> u64 {
        match self {
            VerifyTarget::Blocks => 100_000,
            VerifyTarget::Convergence => 10_000_000,
            _ => 1_000_000,
        }
    }
}
