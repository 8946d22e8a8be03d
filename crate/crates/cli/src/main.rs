//! `semisign`: sign questions for rational matrices and commuting families.
//!
//! Exit status: 0 for a YES/NO verdict (or a successful `--verify`), 2 for
//! UNKNOWN, 1 for input errors and failed verification.

mod commands;
mod input;

use anyhow::Result;
use clap::{Parser, Subcommand, ValueEnum};
use std::io::Read;
use std::path::PathBuf;
use std::process::ExitCode;

#[derive(Parser, Debug)]
#[command(name = "semisign", version, about = "Exact sign analysis of rational matrix powers and semigroups")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,

    /// Input JSON document; standard input when absent or `-`.
    #[arg(long, short, global = true)]
    pub input: Option<PathBuf>,

    #[arg(long, value_enum, default_value_t = Format::Human, global = true)]
    pub format: Format,

    /// Largest working precision for sign determination, in bits.
    #[arg(long, env = "SEMISIGN_PRECISION_BITS", default_value_t = 8192, global = true,
          value_parser = clap::value_parser!(u32).range(64..))]
    pub precision_bits: u32,

    /// Grid radius for the general non-negative search.
    #[arg(long, env = "SEMISIGN_SEARCH_BUDGET", default_value_t = 2, global = true,
          value_parser = clap::value_parser!(i64).range(1..))]
    pub search_budget: i64,

    /// Coefficient bound for multiplicative relation search (`masser-basis`).
    #[arg(long, env = "SEMISIGN_MASSER_BOUND", global = true, value_parser = clap::value_parser!(u64).range(1..))]
    pub masser_bound: Option<u64>,

    /// Re-check the witness in a previously emitted JSON report.
    #[arg(long, global = true)]
    pub verify: Option<PathBuf>,

    /// Accepted for compatibility; all searches are sequential, so output is
    /// deterministic either way.
    #[arg(long, global = true)]
    pub fast: bool,
}

#[derive(Subcommand, Debug, Clone)]
pub enum Command {
    /// Sign pattern of the powers of one matrix: `{"matrix": [[..]]}`.
    AnalyzeMatrix,
    /// Does the semigroup contain a positive matrix: `{"generators": [..]}`.
    DecidePositive,
    /// Does the semigroup contain a non-negative matrix: `{"generators": [..]}`.
    DecideNonnegative,
    /// Relation lattice of algebraic numbers: `{"numbers": [..], "kind": ..}`.
    MasserBasis,
    /// Integer program over logarithms: `{"unknowns", "rows", "congruence"}`.
    Iplog,
    /// Non-negative membership instance from a probabilistic automaton.
    ReducePfa {
        /// Longest product enumerated when checking the correspondence.
        #[arg(long, default_value_t = 6)]
        max_len: usize,
    },
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
pub enum Format {
    Human,
    Json,
}

fn read_input(path: &Option<PathBuf>) -> Result<String> {
    match path {
        Some(p) if p.as_os_str() != "-" => {
            std::fs::read_to_string(p).map_err(|e| anyhow::anyhow!("cannot read {}: {e}", p.display()))
        }
        _ => {
            let mut s = String::new();
            std::io::stdin().read_to_string(&mut s)?;
            Ok(s)
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = read_input(&cli.input).and_then(|text| commands::run(&cli, &text));
    match result {
        Ok(out) => {
            match cli.format {
                Format::Json => println!("{}", serde_json::to_string_pretty(&out.report).unwrap()),
                Format::Human => {
                    for line in &out.human {
                        println!("{line}");
                    }
                }
            }
            ExitCode::from(out.exit)
        }
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(1)
        }
    }
}
