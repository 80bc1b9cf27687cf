use std::num::NonZeroUsize;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use farsight_core::{Horizon, Mechanism};

#[derive(Debug, Parser)]
#[command(name = "farsight", version, about = "School choice mechanisms and farsighted stability")]
pub struct Cli {
    #[arg(long, value_enum, default_value_t = Format::Text, global = true)]
    pub format: Format,
    /// Largest matching space to build (defaults: 4096 for reachability, 10000000 for `enumerate`)
    #[arg(long, global = true)]
    pub cap: Option<usize>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Text,
    Json,
}

#[derive(Debug, Args)]
pub struct Instance {
    /// Instance file
    pub instance: PathBuf,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Run a mechanism
    Solve {
        #[command(flatten)]
        instance: Instance,
        #[arg(long, value_enum)]
        mechanism: MechanismArg,
        /// Print the step-by-step trace
        #[arg(long)]
        trace: bool,
    },
    /// Rationality, waste, envy, stability and efficiency of a matching
    Properties {
        #[command(flatten)]
        instance: Instance,
        #[arg(long)]
        matching: String,
        /// Exit with status 1 unless the property holds
        #[arg(long, value_enum)]
        require: Vec<Property>,
    },
    /// Matchings reachable by improving paths
    Phi {
        #[command(flatten)]
        instance: Instance,
        #[arg(long)]
        from: String,
        /// Students look this many moves ahead
        #[arg(long)]
        horizon: Option<NonZeroUsize>,
        /// Longest path searched under a horizon
        #[arg(long, requires = "horizon")]
        depth_cap: Option<usize>,
    },
    /// Construct an improving path to a mechanism outcome
    Path {
        #[command(flatten)]
        instance: Instance,
        #[arg(long, value_enum)]
        target: Target,
        #[arg(long)]
        from: String,
        /// Also validate with students looking this many moves ahead
        #[arg(long)]
        check_horizon: Option<NonZeroUsize>,
    },
    /// Check a path certificate
    ValidatePath {
        #[command(flatten)]
        instance: Instance,
        #[arg(long)]
        file: PathBuf,
    },
    /// Check whether a set of matchings is a stable set
    CheckSet {
        #[command(flatten)]
        instance: Instance,
        /// Matching literals separated by `;`
        #[arg(long)]
        set: String,
        #[arg(long)]
        horizon: Option<NonZeroUsize>,
    },
    /// All one-matching stable sets
    FindSingletons {
        #[command(flatten)]
        instance: Instance,
        #[arg(long)]
        horizon: Option<NonZeroUsize>,
    },
    /// All stable sets up to a size
    FindSets {
        #[command(flatten)]
        instance: Instance,
        #[arg(long)]
        max_size: usize,
        #[arg(long)]
        horizon: Option<NonZeroUsize>,
    },
    /// Count the matchings
    Enumerate {
        #[command(flatten)]
        instance: Instance,
        /// Also list them
        #[arg(long)]
        list: bool,
    },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum MechanismArg {
    Ttc,
    Da,
    Ia,
    Fct,
    Ct,
    Ettc,
}

impl From<MechanismArg> for Mechanism {
    fn from(m: MechanismArg) -> Self {
        match m {
            MechanismArg::Ttc => Mechanism::Ttc,
            MechanismArg::Da => Mechanism::Da,
            MechanismArg::Ia => Mechanism::Ia,
            MechanismArg::Fct => Mechanism::Fct,
            MechanismArg::Ct => Mechanism::Ct,
            MechanismArg::Ettc => Mechanism::Ettc,
        }
    }
}

/// Mechanisms with a path construction.
#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Target {
    Ttc,
    Fct,
    Ct,
    Ettc,
}

impl From<Target> for Mechanism {
    fn from(t: Target) -> Self {
        match t {
            Target::Ttc => Mechanism::Ttc,
            Target::Fct => Mechanism::Fct,
            Target::Ct => Mechanism::Ct,
            Target::Ettc => Mechanism::Ettc,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Property {
    IndividuallyRational,
    NonWasteful,
    NoJustifiedEnvy,
    Stable,
    ParetoEfficient,
}

pub fn horizon(k: Option<NonZeroUsize>) -> Horizon {
    k.map_or(Horizon::Farsighted, |k| Horizon::Steps(k.get()))
}
