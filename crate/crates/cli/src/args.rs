use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use defectsum_core::statesum::Strategy;

#[derive(Debug, Parser)]
#[command(name = "defectsum", version, about = "State-sum invariants of surfaces with a defect curve")]
pub struct Cli {
  #[command(subcommand)]
  pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
  /// Check that a complex is a closed oriented flag-like surface/curve pair.
  ValidateComplex {
    #[arg(long)]
    complex: PathBuf,
  },
  /// Check groups, bi-set and twisting tables, printing condition witnesses.
  ValidateTwisting {
    #[command(flatten)]
    algebra:       AlgebraArgs,
    /// Report every witness instead of the first one per condition.
    #[arg(long)]
    all_witnesses: bool,
  },
  /// Evaluate the invariant of a complex.
  Compute {
    #[arg(long)]
    complex: PathBuf,
    #[command(flatten)]
    algebra: AlgebraArgs,
    #[command(flatten)]
    run:     RunArgs,
  },
  /// Recompute the invariant along seeded random move sequences.
  Fuzz {
    #[arg(long)]
    complex: PathBuf,
    #[command(flatten)]
    algebra: AlgebraArgs,
    #[command(flatten)]
    run:     RunArgs,
    #[arg(long, default_value_t = 50)]
    steps:   usize,
    #[arg(long, default_value_t = 10)]
    trials:  usize,
    #[arg(long)]
    seed:    u64,
  },
  /// Write bundled example inputs.
  Examples {
    /// Example to write; omit to list them.
    name: Option<String>,
    #[arg(long, default_value = ".")]
    out:  PathBuf,
  },
}

#[derive(Debug, Clone, Args)]
pub struct AlgebraArgs {
  /// Bulk group G.
  #[arg(long)]
  pub group:     Option<PathBuf>,
  /// Curve group H.
  #[arg(long)]
  pub hgroup:    Option<PathBuf>,
  /// The (H, X, G) bi-set.
  #[arg(long)]
  pub biset:     Option<PathBuf>,
  #[arg(long)]
  pub twisting:  Option<PathBuf>,
  /// Re-express the twisting over a larger modulus (a multiple of the file's N).
  #[arg(long)]
  pub modulus:   Option<u32>,
}

#[derive(Debug, Args)]
pub struct RunArgs {
  /// Worker threads for enumeration.
  #[arg(long)]
  pub jobs:     Option<usize>,
  #[arg(long, value_enum, default_value_t = StrategyArg::GaugeFixed)]
  pub strategy: StrategyArg,
  /// Write the run report here as JSON.
  #[arg(long)]
  pub out:      Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum StrategyArg {
  Exhaustive,
  GaugeFixed,
}

impl From<StrategyArg> for Strategy {
  fn from(s: StrategyArg) -> Self {
    match s {
      StrategyArg::Exhaustive => Strategy::Exhaustive,
      StrategyArg::GaugeFixed => Strategy::GaugeFixed,
    }
  }
}
