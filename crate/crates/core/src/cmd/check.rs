use std::path::Path;
use std::process::ExitCode;

use treecompat::{decide, MethodChoice};

use super::{describe, read_one_tree, write_json, CliError};

pub fn run(
    t1: &Path,
    t2: &Path,
    method: MethodChoice,
    certificate: Option<&Path>,
) -> Result<ExitCode, CliError> {
    let a = read_one_tree(t1)?;
    let b = read_one_tree(t2)?;
    let decision = decide(&a, &b, method).map_err(|e| CliError::Internal(e.to_string()))?;
    if let Some(path) = certificate {
        write_json(path, &decision)?;
    }
    if decision.compatible {
        println!("compatible");
        Ok(ExitCode::SUCCESS)
    } else {
        println!("incompatible");
        for c in &decision.certificates {
            println!("  {}", describe(c));
        }
        Ok(ExitCode::from(1))
    }
}
