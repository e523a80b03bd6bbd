use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;
use vfilt_core::field::DEFAULT_SATURATION_CAP;

#[derive(Parser, Debug, Clone, Serialize)]
#[command(name = "vfilt", version, about = "Canonical V-filtrations of unit F-crystals over finite fields")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
    #[command(flatten)]
    pub job: JobArgs,
}

#[derive(Args, Debug, Clone, Serialize)]
pub struct JobArgs {
    /// Characteristic.
    #[arg(long, global = true)]
    pub p: Option<u64>,
    /// Degree of the coefficient field; defaults to the least m with d | p^m - 1.
    #[arg(long, global = true)]
    pub m: Option<usize>,
    /// Order of the cyclic group.
    #[arg(long, global = true)]
    pub d: Option<u64>,
    /// JSON file `{d, r, mat}` describing a representation.
    #[arg(long, global = true, value_name = "FILE")]
    pub rep: Option<PathBuf>,
    #[arg(long = "rep-builtin", global = true, value_enum, value_name = "NAME")]
    pub rep_builtin: Option<Builtin>,
    /// Rank of the builtin trivial representation.
    #[arg(long, global = true, default_value_t = 1)]
    pub rank: usize,
    /// Extension class, a Laurent polynomial such as "3t^-2+t".
    #[arg(long, global = true, allow_hyphen_values = true, value_name = "EXPR")]
    pub c: Option<String>,
    /// Filtration window [-N, N); also the recursion cap of extension modules.
    #[arg(long, global = true, default_value_t = 64, value_name = "N")]
    pub window: i64,
    /// Largest field extension degree tried when saturating fixed points.
    #[arg(long, global = true, default_value_t = DEFAULT_SATURATION_CAP, value_name = "K")]
    pub cap: usize,
    #[arg(long, global = true, value_name = "S")]
    pub seed: Option<u64>,
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    pub format: Format,
}

#[derive(ValueEnum, Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Builtin {
    Trivial,
    Companion,
    Regular,
}

#[derive(ValueEnum, Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Format {
    Json,
}

#[derive(Subcommand, Debug, Clone, Serialize)]
#[serde(tag = "name", rename_all = "snake_case")]
pub enum Command {
    /// Construct the crystal or extension module.
    Build,
    /// Canonical filtration with jumps, graded dimensions and axiom checks.
    Vfilt,
    /// Graded pieces with the maps induced by F and t.
    Graded,
    /// Axiom checks only.
    Check,
    /// Compare against the degree d*e presentation and against integer shifts.
    Compare {
        #[arg(long, default_value_t = 2)]
        e: u64,
        /// Test shifts k with 1 <= |k| <= this bound.
        #[arg(long, default_value_t = 3)]
        shifts: i64,
    },
    /// Pull the filtration back along u^degree = t.
    Pullback {
        #[arg(long, default_value_t = 2)]
        degree: u64,
        #[arg(long, default_value_t = 0)]
        depth: u64,
    },
    /// Unipotent and full nearby cycles.
    Nearby,
    /// The vanishing pair and its map to nearby cycles.
    Vanishing,
    /// Recover the representation from nearby cycles.
    Recover,
    /// Solutions of F x = x.
    Sol,
    /// Randomized round trips through both functors.
    Roundtrip {
        /// Representations per (p, d) pair.
        #[arg(long, default_value_t = 100)]
        count: usize,
        /// Naturality checks per (p, d) pair.
        #[arg(long, default_value_t = 20)]
        morphisms: usize,
    },
    /// Gluing data and reconstruction.
    Glue,
}

impl Command {
    pub fn name(&self) -> &'static str {
        match self {
            Command::Build => "build",
            Command::Vfilt => "vfilt",
            Command::Graded => "graded",
            Command::Check => "check",
            Command::Compare { .. } => "compare",
            Command::Pullback { .. } => "pullback",
            Command::Nearby => "nearby",
            Command::Vanishing => "vanishing",
            Command::Recover => "recover",
            Command::Sol => "sol",
            Command::Roundtrip { .. } => "roundtrip",
            Command::Glue => "glue",
        }
    }
}
