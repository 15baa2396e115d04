//! Command-line front end for `permclass`.

mod commands;
mod error;
mod output;

use std::ops::RangeInclusive;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use permclass::{EngineConfig, Mode, Strategy};

use crate::error::CliError;
use crate::output::Format;

#[derive(Parser, Debug)]
#[command(name = "permclass", version, about = "Equivalence classes of permutations under pattern replacement")]
pub struct Cli {
    /// Print the reference relations with their formulas and valid ranges, then exit.
    #[arg(long)]
    list_relations: bool,

    /// Worker threads for class enumeration (default: all cores).
    #[arg(long, global = true)]
    workers: Option<usize>,

    #[arg(long, global = true, value_enum, default_value = "text")]
    format: Format,

    /// Write the report here instead of stdout.
    #[arg(long, global = true)]
    output: Option<PathBuf>,

    /// Permit n above the default bounds when memory allows.
    #[arg(long, global = true)]
    allow_large: bool,

    #[command(subcommand)]
    command: Option<Command>,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Number of classes of S_n.
    Count(CountArgs),
    /// Class representatives, or the class of one permutation.
    Classes(ClassesArgs),
    /// Invariants and canonical forms of one permutation.
    Invariant(InvariantArgs),
    /// Expected class counts from the formulas.
    Table(TableArgs),
    /// Compare engine counts with the formulas.
    Verify(VerifyArgs),
    /// Images of a partition under reverse and complement.
    Orbit(OrbitArgs),
    /// Minimal lefted/righted/middled sets, or normalize one permutation.
    Stooge(StoogeArgs),
    /// Check a general result on concrete sizes.
    #[command(subcommand)]
    Theorem(TheoremCommand),
}

/// `N` or `A..B` (also `A-B`), inclusive.
#[derive(Debug, Clone)]
pub struct NRange(pub RangeInclusive<usize>);

impl std::str::FromStr for NRange {
    type Err = String;

    fn from_str(s: &str) -> Result<NRange, String> {
        let bad = || format!("expected N or A..B, got {s:?}");
        let num = |t: &str| t.trim().parse::<usize>().map_err(|_| bad());
        let (lo, hi) = if let Some((a, b)) = s.split_once("..") {
            (num(a)?, num(b.trim_start_matches('='))?)
        } else if let Some((a, b)) = s.split_once('-') {
            (num(a)?, num(b)?)
        } else {
            let n = num(s)?;
            (n, n)
        };
        if lo > hi {
            return Err(bad());
        }
        Ok(NRange(lo..=hi))
    }
}

#[derive(Args, Debug)]
pub struct CountArgs {
    #[arg(long)]
    pub partition: String,
    /// Size or inclusive range of sizes.
    #[arg(long)]
    pub n: NRange,
    #[arg(long, default_value = "factor")]
    pub mode: Mode,
}

#[derive(Args, Debug)]
pub struct ClassesArgs {
    #[arg(long)]
    pub partition: String,
    /// Required unless --perm is given.
    #[arg(long)]
    pub n: Option<usize>,
    #[arg(long, default_value = "factor")]
    pub mode: Mode,
    /// List the class of this permutation instead of all representatives.
    #[arg(long)]
    pub perm: Option<String>,
}

#[derive(Args, Debug)]
pub struct InvariantArgs {
    #[arg(long)]
    pub perm: String,
    /// One invariant; all of them when omitted.
    #[arg(long)]
    pub name: Option<String>,
    /// Keep only invariants of this relation.
    #[arg(long)]
    pub partition: Option<String>,
}

#[derive(Args, Debug)]
pub struct TableArgs {
    /// Repeatable; every reference relation when omitted.
    #[arg(long)]
    pub relation: Vec<String>,
    #[arg(long, default_value = "3..10")]
    pub n: NRange,
}

#[derive(Args, Debug)]
pub struct VerifyArgs {
    /// Repeatable; every reference relation when omitted.
    #[arg(long)]
    pub relation: Vec<String>,
    #[arg(long, default_value = "3..7")]
    pub n: NRange,
    /// CSV with columns relation,n,expected replacing reference values.
    #[arg(long)]
    pub expected: Option<PathBuf>,
}

#[derive(Args, Debug)]
pub struct OrbitArgs {
    #[arg(long)]
    pub partition: String,
}

#[derive(Args, Debug)]
pub struct StoogeArgs {
    #[arg(long)]
    pub partition: String,
    /// Size for the L/R/I sets; inferred from --perm when normalizing.
    #[arg(long)]
    pub n: Option<usize>,
    /// A middled permutation to normalize.
    #[arg(long)]
    pub perm: Option<String>,
}

#[derive(Subcommand, Debug)]
pub enum TheoremCommand {
    /// Classes versus U-avoiders at k, propagated up to --check-to.
    AvoiderCriterion(KArgs),
    /// Factor classes versus subword classes at k, propagated up to --check-to.
    AdjacentSubword(KArgs),
    /// Permutations whose repeated down jumps depend on the strategy.
    Strategy(StrategyArgs),
    /// The partition of S_{c+1} induced by a partition of S_c.
    Lift(OrbitArgs),
}

#[derive(Args, Debug)]
pub struct KArgs {
    #[arg(long)]
    pub partition: String,
    #[arg(long)]
    pub k: usize,
    #[arg(long)]
    pub check_to: usize,
}

#[derive(Args, Debug)]
pub struct StrategyArgs {
    #[arg(long)]
    pub partition: String,
    #[arg(long)]
    pub n: usize,
    /// Also print the avoider reached from this permutation.
    #[arg(long)]
    pub perm: Option<String>,
    #[arg(long, default_value = "leftmost")]
    pub strategy: Strategy,
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 2 } else { 0 });
        }
    };
    let cfg = EngineConfig {
        workers: cli.workers,
        allow_large: cli.allow_large,
        ..Default::default()
    };
    let result = if cli.list_relations {
        commands::list_relations()
    } else {
        match &cli.command {
            Some(cmd) => commands::run(cmd, &cfg),
            None => Err(CliError::Usage("no subcommand given; see --help".into())),
        }
    };
    let (out, code) = match result {
        Ok(r) => r,
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(e.exit_code() as u8);
        }
    };
    if let Err(e) = out.emit(cli.format, cli.output.as_deref()) {
        eprintln!("error: {e}");
        return ExitCode::from(e.exit_code() as u8);
    }
    ExitCode::from(code)
}
