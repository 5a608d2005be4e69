use std::path::Path;
use std::process::ExitCode;

use treecompat::cluster_representation;

use super::{read_one_tree, CliError};

pub fn run(path: &Path) -> Result<ExitCode, CliError> {
    let tree = read_one_tree(path)?;
    for (cluster, class) in cluster_representation(&tree).iter() {
        println!("{cluster}\t{}", class.multiplicity);
    }
    Ok(ExitCode::SUCCESS)
}
