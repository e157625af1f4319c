//! `eosforensics`: run the forensics pipeline stage by stage over files on disk.
//!
//! Exit status is 0 on success, 1 when a detector reports findings and 2 on error.

mod args;
mod commands;
mod data;
mod report;
mod summary;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use args::{AttackArgs, BotArgs, DataArgs, OutArgs};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Outcome {
    Clean,
    Findings,
}

#[derive(Parser)]
#[command(name = "eosforensics", version, about = "Graph analytics and fraud detectors for EOSIO action traces")]
struct Cli {
    /// Worker threads for parallel stages (default: all cores).
    #[arg(long, global = true, env = "EOSF_THREADS")]
    threads: Option<usize>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Parse a trace and snapshot, normalise them and report malformed lines.
    Ingest {
        #[command(flatten)]
        data: DataArgs,
        #[command(flatten)]
        out: OutArgs,
    },
    /// Build the money-flow, account-creation and invocation graphs.
    Graph {
        #[command(subcommand)]
        command: GraphCommand,
    },
    /// Structural metrics, PageRank and degree rankings.
    Metrics {
        #[command(flatten)]
        data: DataArgs,
        /// Plain edge list (`from,to[,weight]` with a header row) instead of chain data.
        #[arg(long)]
        edges: Option<PathBuf>,
        /// Directory with edge CSVs written by `graph build`.
        #[arg(long)]
        graphs: Option<PathBuf>,
        #[arg(long, default_value_t = 10)]
        top: usize,
        #[arg(long)]
        weighted_clustering: bool,
        #[command(flatten)]
        out: OutArgs,
    },
    /// Bot community detection and per-account classification.
    Bots {
        #[command(subcommand)]
        command: BotsCommand,
    },
    /// eosio.code permission audit.
    Perms {
        #[command(subcommand)]
        command: PermsCommand,
    },
    /// Fake-transfer, fake-notice and profit-driven attack scan.
    Attacks {
        #[command(subcommand)]
        command: AttacksCommand,
    },
    /// Synthetic chains with planted ground truth.
    Synth {
        #[command(subcommand)]
        command: SynthCommand,
    },
    /// Summary tables over a directory of stage outputs.
    Report {
        /// Directory holding stage outputs.
        #[arg(long, env = "EOSF_REPORT_DIR")]
        dir: PathBuf,
        #[arg(long, value_enum, default_value = "both")]
        format: report::Format,
        /// Where to write the report files (default: --dir).
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Subcommand)]
enum GraphCommand {
    Build {
        #[command(flatten)]
        data: DataArgs,
        #[command(flatten)]
        out: OutArgs,
    },
}

#[derive(Subcommand)]
enum BotsCommand {
    /// Community-level detection, key merge and categorisation.
    Detect {
        #[command(flatten)]
        data: DataArgs,
        #[command(flatten)]
        bots: BotArgs,
        /// Saved classifier for accounts outside flagged communities.
        #[arg(long)]
        model: Option<PathBuf>,
        #[command(flatten)]
        out: OutArgs,
    },
    /// Train a random forest on registry labels (or load one) and classify accounts.
    Classify {
        #[command(flatten)]
        data: DataArgs,
        #[arg(long)]
        model: Option<PathBuf>,
        #[arg(long, env = "EOSF_SEED", default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 0.8)]
        split: f64,
        /// Train one default forest instead of the full grid.
        #[arg(long)]
        single: bool,
        /// File with one account name per line (default: every unlabeled snapshot account).
        #[arg(long)]
        accounts: Option<PathBuf>,
        #[command(flatten)]
        out: OutArgs,
    },
}

#[derive(Subcommand)]
enum PermsCommand {
    Audit {
        #[command(flatten)]
        data: DataArgs,
        #[arg(long, default_value_t = 10)]
        top: usize,
        #[command(flatten)]
        out: OutArgs,
    },
}

#[derive(Subcommand)]
enum AttacksCommand {
    Scan {
        #[command(flatten)]
        data: DataArgs,
        #[command(flatten)]
        attacks: AttackArgs,
        /// Skip writing per-finding evidence bundles.
        #[arg(long)]
        no_bundles: bool,
        #[command(flatten)]
        out: OutArgs,
    },
}

#[derive(Subcommand)]
enum SynthCommand {
    Generate {
        #[arg(long, env = "EOSF_SEED")]
        seed: Option<u64>,
        /// small, bots, attacks, permissions, volume or empty.
        #[arg(long, default_value = "small")]
        preset: String,
        /// Scenario JSON; overrides --preset.
        #[arg(long)]
        config: Option<PathBuf>,
        #[command(flatten)]
        out: OutArgs,
    },
}

fn run(cmd: Command) -> anyhow::Result<Outcome> {
    match cmd {
        Command::Ingest { data, out } => commands::ingest(&data, &out.out),
        Command::Graph { command: GraphCommand::Build { data, out } } => commands::graph_build(&data, &out.out),
        Command::Metrics { data, edges, graphs, top, weighted_clustering, out } => {
            let opts = commands::MetricsOpts { edges, graphs, top, weighted_clustering };
            commands::metrics(&data, &opts, &out.out)
        }
        Command::Bots { command: BotsCommand::Detect { data, bots, model, out } } => {
            commands::bots_detect(&data, &bots, model.as_deref(), &out.out)
        }
        Command::Bots { command: BotsCommand::Classify { data, model, seed, split, single, accounts, out } } => {
            let opts = commands::ClassifyOpts { model, seed, split, single, accounts };
            commands::bots_classify(&data, &opts, &out.out)
        }
        Command::Perms { command: PermsCommand::Audit { data, top, out } } => commands::perms_audit(&data, top, &out.out),
        Command::Attacks { command: AttacksCommand::Scan { data, attacks, no_bundles, out } } => {
            commands::attacks_scan(&data, &attacks, !no_bundles, &out.out)
        }
        Command::Synth { command: SynthCommand::Generate { seed, preset, config, out } } => {
            commands::synth_generate(seed, &preset, config.as_deref(), &out.out)
        }
        Command::Report { dir, format, out } => {
            let out = out.unwrap_or_else(|| dir.clone());
            report::report(&dir, format, &out)
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let threads = cli.threads;
    let result = eosio_forensics::parallel::with_threads(threads, move || run(cli.command))
        .map_err(anyhow::Error::from)
        .and_then(|r| r);
    match result {
        Ok(Outcome::Clean) => ExitCode::SUCCESS,
        Ok(Outcome::Findings) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}
