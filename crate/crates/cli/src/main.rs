//! Command-line front end for independence statement discovery.
//!
//! Exit codes: 0 success, 1 verification mismatch, 2 input or budget error,
//! 3 degenerate relation (the report is still written).

mod bench;
mod commands;
mod generate;
mod input;
mod report;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use indep::Threshold;

use crate::input::{parse_threshold, Format, InputArgs, SearchArgs};

#[derive(Debug, Parser)]
#[command(name = "indep", version, about = "Discover independence statements in tabular data")]
struct Cli {
    /// Worker threads for validation; defaults to the machine's parallelism.
    #[arg(long, global = true)]
    threads: Option<usize>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Run discovery and write a JSON report.
    Discover {
        #[command(flatten)]
        input: InputArgs,
        #[command(flatten)]
        search: SearchArgs,
        /// Minimum independence ratio, as a decimal or `p/q`.
        #[arg(long, default_value = "1", value_parser = parse_threshold)]
        epsilon: Threshold,
        /// Drop cover members implied by the others under the axioms.
        #[arg(long)]
        reduce_cover: bool,
        /// With --reduce-cover, include a derivation for each removed member.
        #[arg(long, requires = "reduce_cover")]
        trace: bool,
        #[arg(long, value_enum, default_value = "json")]
        format: Format,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// One discovery run per threshold, as a table.
    Sweep {
        #[command(flatten)]
        input: InputArgs,
        #[command(flatten)]
        search: SearchArgs,
        /// Thresholds in descending order, comma separated.
        #[arg(long, value_delimiter = ',', num_args = 1.., required = true, value_parser = parse_threshold)]
        epsilon: Vec<Threshold>,
        #[arg(long, value_enum, default_value = "csv")]
        format: Format,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Build a relation from a graph or formula, with its ground truth in
    /// `<out>.truth.json`.
    Generate {
        #[command(flatten)]
        source: generate::Source,
        /// Node count for --random-graph, variable count for --random-formula.
        #[arg(long, default_value_t = 6)]
        size: usize,
        /// Edge probability for --random-graph.
        #[arg(long, default_value_t = 0.5)]
        edge_probability: f64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Ground truth is computed by exhaustive search up to this many
        /// nodes; beyond it the sidecar records it as unknown.
        #[arg(long, default_value_t = 12)]
        max_oracle_nodes: usize,
        #[arg(long)]
        out: PathBuf,
    },
    /// Compare the engine against brute-force enumeration.
    Verify {
        #[command(flatten)]
        input: InputArgs,
        #[command(flatten)]
        search: SearchArgs,
        #[arg(long, default_value = "1", value_parser = parse_threshold)]
        epsilon: Threshold,
        /// Oracle limit on attributes.
        #[arg(long, default_value_t = 8)]
        max_attributes: usize,
        /// Oracle limit on rows.
        #[arg(long, default_value_t = 64)]
        max_rows: usize,
    },
    /// Runtime and count curves over arity, column subsets or row prefixes.
    Bench {
        #[command(flatten)]
        input: InputArgs,
        #[command(flatten)]
        search: SearchArgs,
        #[command(flatten)]
        curve: bench::Curve,
        #[arg(long, default_value = "1", value_parser = parse_threshold)]
        epsilon: Threshold,
        /// Seed for the random row order and random column subsets.
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, value_enum, default_value = "csv")]
        format: Format,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

/// How a command ended when it did not fail outright.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Outcome {
    Success,
    Mismatch,
    Degenerate,
}

impl From<Outcome> for ExitCode {
    fn from(o: Outcome) -> Self {
        ExitCode::from(match o {
            Outcome::Success => 0,
            Outcome::Mismatch => 1,
            Outcome::Degenerate => 3,
        })
    }
}

fn run(cli: Cli) -> anyhow::Result<Outcome> {
    if let Some(n) = cli.threads {
        rayon::ThreadPoolBuilder::new().num_threads(n).build_global()?;
    }
    let threads = cli.threads;
    match cli.command {
        Command::Discover {
            input,
            search,
            epsilon,
            reduce_cover,
            trace,
            format,
            out,
        } => commands::discover(&input, &search, epsilon, reduce_cover, trace, format, out.as_deref(), threads),
        Command::Sweep {
            input,
            search,
            epsilon,
            format,
            out,
        } => commands::sweep(&input, &search, &epsilon, format, out.as_deref(), threads),
        Command::Generate {
            source,
            size,
            edge_probability,
            seed,
            max_oracle_nodes,
            out,
        } => generate::run(&source, size, edge_probability, seed, max_oracle_nodes, &out),
        Command::Verify {
            input,
            search,
            epsilon,
            max_attributes,
            max_rows,
        } => commands::verify(&input, &search, epsilon, max_attributes, max_rows),
        Command::Bench {
            input,
            search,
            curve,
            epsilon,
            seed,
            format,
            out,
        } => bench::run(&input, &search, &curve, epsilon, seed, format, out.as_deref(), threads),
    }
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = Cli::parse();
    match run(cli) {
        Ok(outcome) => outcome.into(),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}
