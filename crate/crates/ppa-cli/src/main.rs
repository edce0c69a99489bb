//! `ppa`: generate instances, run reductions, verify and solve, and run round-trip checks.
//!
//! Every command prints one JSON report on stdout. Exit status: 0 success or verified,
//! 1 verified false or no solution, 2 malformed input, 3 I/O failure.

mod commands;

use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::json;

#[derive(Parser, Debug)]
#[command(
    name = "ppa",
    version,
    about = "Reductions between consensus halving, necklace splitting, ham sandwich and Tucker"
)]
pub struct Cli {
    /// Seed for every randomised generator.
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,
    /// JSON file with reduction parameters; overrides --preset.
    #[arg(long, global = true)]
    pub params: Option<PathBuf>,
    /// Worker cap. Commands currently run on one thread.
    #[arg(long, global = true, default_value_t = 1)]
    pub jobs: usize,
    #[command(subcommand)]
    pub verb: Verb,
}

#[derive(Subcommand, Debug)]
pub enum Verb {
    /// Random instance.
    Gen(GenArgs),
    /// Forward or backward reduction.
    Reduce(ReduceArgs),
    /// Check a solution.
    Verify(VerifyArgs),
    /// Brute-force solver.
    Solve(SolveArgs),
    /// Reduce, solve, map back and verify in one go.
    Roundtrip(RoundtripArgs),
    /// Validate reduction parameters and print derived quantities.
    ParamsCheck(ParamsArgs),
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
pub enum Subject {
    Tucker2d,
    Tuckernd,
    Nvhdt,
    Ch,
    Necklace,
    Sandwich,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
pub enum Preset {
    Desk,
    Coarse,
}

#[derive(Args, Debug)]
pub struct GenArgs {
    pub subject: Subject,
    /// Grid side (tucker2d).
    #[arg(long, default_value_t = 6)]
    pub m: usize,
    /// Dimension (nvhdt, ch).
    #[arg(long, default_value_t = 2)]
    pub n: usize,
    /// Number of beads (necklace).
    #[arg(long, default_value_t = 8)]
    pub beads: usize,
    #[arg(long, default_value_t = 2)]
    pub colours: u32,
    #[arg(long, default_value_t = 2)]
    pub thieves: u32,
    #[arg(long, value_enum, default_value_t = Preset::Coarse)]
    pub preset: Preset,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
pub enum Reduction {
    /// Necklace to ham sandwich via the moment curve.
    NsToDhs,
    /// Ham sandwich solution back to a necklace split (needs --embedding).
    DhsToNs,
    /// 2D Tucker to the cubelet form via snake folds.
    Tucker2dToNvhdt,
    /// Cubelet Tucker to consensus halving.
    NvhdtToCh,
    /// Consensus-halving solution back to cubelet points (needs --reduction-file, --cuts).
    ChToNvhdt,
}

#[derive(Args, Debug)]
pub struct ReduceArgs {
    pub reduction: Reduction,
    #[arg(long = "in")]
    pub input: PathBuf,
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[arg(long)]
    pub embedding: Option<PathBuf>,
    #[arg(long)]
    pub reduction_file: Option<PathBuf>,
    #[arg(long)]
    pub cuts: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = Preset::Coarse)]
    pub preset: Preset,
    /// Also write every agent's measure (nvhdt-to-ch).
    #[arg(long)]
    pub materialise: bool,
}

#[derive(Args, Debug)]
pub struct VerifyArgs {
    pub subject: Subject,
    #[arg(long)]
    pub inst: PathBuf,
    /// Solution file: cuts (ch), split (necklace), solution (sandwich), points (nvhdt).
    #[arg(long)]
    pub solution: Option<PathBuf>,
    #[arg(long)]
    pub cuts: Option<PathBuf>,
    /// Grid point as comma separated 1-based coordinates (tucker2d, tuckernd).
    #[arg(long, value_delimiter = ',')]
    pub p: Vec<usize>,
    #[arg(long, value_delimiter = ',')]
    pub q: Vec<usize>,
}

#[derive(Args, Debug)]
pub struct SolveArgs {
    pub subject: Subject,
    #[arg(long)]
    pub inst: PathBuf,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
pub enum Suite {
    /// Necklace, moment curve, brute-force sandwich, back to a split.
    NsDhs,
    /// 2D Tucker through the snake folds and back.
    Snake,
    /// Transformed coordinates to the simplex and back.
    Mobius,
    /// Cubelet Tucker to consensus halving, every slot agent balanced.
    NvhdtCh,
}

#[derive(Args, Debug)]
pub struct RoundtripArgs {
    pub suite: Suite,
    #[arg(long = "in")]
    pub input: Option<PathBuf>,
    /// Dimension (mobius, nvhdt-ch).
    #[arg(long, default_value_t = 2)]
    pub n: usize,
    /// Grid side of a generated instance (snake).
    #[arg(long, default_value_t = 6)]
    pub m: usize,
    #[arg(long, default_value_t = 1000)]
    pub count: usize,
    #[arg(long, value_enum, default_value_t = Preset::Coarse)]
    pub preset: Preset,
}

#[derive(Args, Debug)]
pub struct ParamsArgs {
    #[arg(long, default_value_t = 2)]
    pub n: usize,
    #[arg(long, value_enum, default_value_t = Preset::Desk)]
    pub preset: Preset,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let (code, report) = match commands::run(&cli) {
        Ok(out) => (if out.ok { 0 } else { 1 }, out.report),
        Err(f) => (f.code, json!({ "error": f.message, "exit": f.code })),
    };
    let text = serde_json::to_string_pretty(&report).unwrap_or_else(|_| "{}".into());
    let _ = writeln!(std::io::stdout(), "{text}");
    ExitCode::from(code as u8)
}
