use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use treecompat::{embeddings_document, join, verify_embedding, JoinError};

use super::{describe, io_error, read_one_tree, write_json, CliError};

pub fn run(t1: &Path, t2: &Path, out: &Path) -> Result<ExitCode, CliError> {
    let a = read_one_tree(t1)?;
    let b = read_one_tree(t2)?;
    let result = match join(&a, &b) {
        Ok(r) => r,
        Err(JoinError::Incompatible(certificates)) => {
            println!("incompatible");
            for c in &certificates {
                println!("  {}", describe(c));
            }
            return Ok(ExitCode::from(1));
        }
        Err(e) => return Err(CliError::Internal(e.to_string())),
    };
    for (name, f, source) in [("first", &result.f1, &a), ("second", &result.f2, &b)] {
        let violations = verify_embedding(f, source, &result.supertree)
            .map_err(|e| CliError::Internal(format!("{name} embedding: {e}")))?;
        if let Some(v) = violations.first() {
            return Err(CliError::Internal(format!("{name} embedding: {v}")));
        }
    }
    let doc = embeddings_document(&a, &b, &result).map_err(|e| CliError::Internal(e.to_string()))?;
    fs::write(out, format!("{}\n", doc.supertree)).map_err(io_error(out))?;
    let mut side = out.as_os_str().to_owned();
    side.push(".embeddings.json");
    write_json(&PathBuf::from(side), &doc)?;
    println!("{}", doc.supertree);
    Ok(ExitCode::SUCCESS)
}
