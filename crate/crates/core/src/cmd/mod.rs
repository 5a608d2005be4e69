pub mod batch;
pub mod check;
pub mod clusters;
pub mod join;

use std::fs;
use std::path::{Path, PathBuf};

use thiserror::Error;
use treecompat::{parse_newick, ATree, Certificate, NewickError};

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{}: {source}", path.display())]
    Io {
        path: PathBuf,
        source: std::io::Error,
    },
    #[error("{}: {source}", path.display())]
    Parse { path: PathBuf, source: NewickError },
    #[error("{}: expected exactly one tree, found {count}", path.display())]
    TreeCount { path: PathBuf, count: usize },
    #[error("{0}")]
    Usage(String),
    #[error("{0}")]
    Internal(String),
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Internal(_) => 3,
            _ => 2,
        }
    }
}

pub fn io_error(path: &Path) -> impl FnOnce(std::io::Error) -> CliError + '_ {
    move |source| CliError::Io {
        path: path.to_path_buf(),
        source,
    }
}

pub fn read_trees(path: &Path) -> Result<Vec<ATree>, CliError> {
    let text = fs::read_to_string(path).map_err(io_error(path))?;
    parse_newick(&text).map_err(|source| CliError::Parse {
        path: path.to_path_buf(),
        source,
    })
}

pub fn read_one_tree(path: &Path) -> Result<ATree, CliError> {
    let mut trees = read_trees(path)?;
    if trees.len() != 1 {
        return Err(CliError::TreeCount {
            path: path.to_path_buf(),
            count: trees.len(),
        });
    }
    Ok(trees.remove(0))
}

/// Writes `value` as pretty JSON with a trailing newline.
pub fn write_json<T: serde::Serialize>(path: &Path, value: &T) -> Result<(), CliError> {
    let mut text = serde_json::to_string_pretty(value).expect("report types serialize");
    text.push('\n');
    fs::write(path, text).map_err(io_error(path))
}

/// One line per certificate for terminal output.
pub fn describe(c: &Certificate) -> String {
    let mut line = format!("{:?}", c.kind);
    for l in &c.labels {
        line.push(' ');
        line.push_str(l.as_str());
    }
    for x in &c.clusters {
        line.push(' ');
        line.push_str(&x.to_string());
    }
    line
}
