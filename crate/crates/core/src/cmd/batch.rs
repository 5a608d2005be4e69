use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use chrono::{SecondsFormat, Utc};
use treecompat::{run_batch, BatchError, CorpusTree, MethodChoice};

use super::{io_error, read_trees, write_json, CliError};

pub struct Options {
    pub paths: Vec<PathBuf>,
    pub method: MethodChoice,
    pub report: Option<PathBuf>,
    pub skip_bad: bool,
    pub jobs: Option<usize>,
    pub timestamp: bool,
}

/// Expands directories into their regular files, sorted by name.
fn input_files(paths: &[PathBuf]) -> Result<Vec<PathBuf>, CliError> {
    let mut files = Vec::new();
    for path in paths {
        if path.is_dir() {
            let mut inner: Vec<PathBuf> = fs::read_dir(path)
                .map_err(io_error(path))?
                .filter_map(Result::ok)
                .map(|e| e.path())
                .filter(|p| p.is_file())
                .collect();
            inner.sort();
            files.extend(inner);
        } else {
            files.push(path.clone());
        }
    }
    Ok(files)
}

fn load(files: &[PathBuf], skip_bad: bool) -> Result<Vec<CorpusTree>, CliError> {
    let mut corpus = Vec::new();
    for file in files {
        match read_trees(file) {
            Ok(trees) => corpus.extend(trees.into_iter().enumerate().map(|(i, tree)| CorpusTree {
                source: display(file),
                index_in_source: i,
                tree,
            })),
            Err(e) if skip_bad => eprintln!("warning: skipping {e}"),
            Err(e) => return Err(e),
        }
    }
    Ok(corpus)
}

fn display(path: &Path) -> String {
    path.to_string_lossy().replace('\\', "/")
}

pub fn run(opts: &Options) -> Result<ExitCode, CliError> {
    let files = input_files(&opts.paths)?;
    let corpus = load(&files, opts.skip_bad)?;
    let mut report = run_batch(&corpus, opts.method, opts.jobs).map_err(|e| match e {
        BatchError::MethodDisagreement { .. } => CliError::Internal(e.to_string()),
        _ => CliError::Usage(e.to_string()),
    })?;
    if opts.timestamp {
        report.generated_at = Some(Utc::now().to_rfc3339_opts(SecondsFormat::Secs, true));
    }
    if let Some(path) = &opts.report {
        write_json(path, &report)?;
    }
    print!("{}", report.summary());
    Ok(ExitCode::SUCCESS)
}
