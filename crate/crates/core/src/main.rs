//! Command-line front end.
//!
//! Exit codes: 0 compatible (or success), 1 incompatible, 2 usage or input
//! error, 3 internal inconsistency (methods disagree, embedding check failed).

mod cmd;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use treecompat::MethodChoice;

#[derive(Parser)]
#[command(name = "treecompat", version, about = "Ancestral compatibility of semi-labeled trees")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum MethodArg {
    Local,
    Clusters,
    Both,
}

impl From<MethodArg> for MethodChoice {
    fn from(m: MethodArg) -> Self {
        match m {
            MethodArg::Local => MethodChoice::Local,
            MethodArg::Clusters => MethodChoice::Clusters,
            MethodArg::Both => MethodChoice::Both,
        }
    }
}

#[derive(Subcommand)]
enum Command {
    /// Decide whether two trees are ancestrally compatible.
    Check {
        t1: PathBuf,
        t2: PathBuf,
        #[arg(long, value_enum, default_value = "clusters")]
        method: MethodArg,
        /// Write the verdict and certificates as JSON to this file.
        #[arg(long, value_name = "PATH")]
        certificate: Option<PathBuf>,
    },
    /// Build the join supertree of two compatible trees.
    Join {
        t1: PathBuf,
        t2: PathBuf,
        /// Newick output; embeddings go to PATH.embeddings.json.
        #[arg(long, value_name = "PATH")]
        out: PathBuf,
    },
    /// List the clusters of a tree with their multiplicities.
    Clusters { tree: PathBuf },
    /// Check every pair of trees in a corpus.
    Batch {
        /// Newick files or directories of Newick files.
        #[arg(required = true)]
        paths: Vec<PathBuf>,
        #[arg(long, value_enum, default_value = "clusters")]
        method: MethodArg,
        /// Write the JSON report to this file.
        #[arg(long, value_name = "PATH")]
        report: Option<PathBuf>,
        /// Warn about unparseable files instead of failing.
        #[arg(long)]
        skip_bad: bool,
        /// Number of worker threads (default: one per core).
        #[arg(long, value_name = "N")]
        jobs: Option<usize>,
        /// Leave the timestamp out of the report.
        #[arg(long)]
        no_timestamp: bool,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Check {
            t1,
            t2,
            method,
            certificate,
        } => cmd::check::run(&t1, &t2, method.into(), certificate.as_deref()),
        Command::Join { t1, t2, out } => cmd::join::run(&t1, &t2, &out),
        Command::Clusters { tree } => cmd::clusters::run(&tree),
        Command::Batch {
            paths,
            method,
            report,
            skip_bad,
            jobs,
            no_timestamp,
        } => cmd::batch::run(&cmd::batch::Options {
            paths,
            method: method.into(),
            report,
            skip_bad,
            jobs,
            timestamp: !no_timestamp,
        }),
    };
    match result {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            e.exit_code().into()
        }
    }
}
