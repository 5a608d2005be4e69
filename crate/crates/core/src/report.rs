//! JSON document for join embeddings.
//!
//! Nodes are addressed by child-index paths from the root (`/`, `/0`,
//! `/1/0`). Source paths follow the stored child order of the inputs, which
//! for parsed trees is the order in the input file; target paths follow the
//! canonical order of the written supertree.

use std::collections::BTreeMap;

use serde::Serialize;

use crate::embedding::EmbeddingMap;
use crate::join::JoinResult;
use crate::newick::{node_paths, serialize_newick, ChildOrder};
use crate::tree::{ATree, NodeId, TreeError};

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct EmbeddingsDocument {
    pub supertree: String,
    pub disjoint_root: bool,
    pub f1: BTreeMap<String, String>,
    pub f2: BTreeMap<String, String>,
}

fn path_map(
    f: &EmbeddingMap,
    source: &ATree,
    target: &BTreeMap<NodeId, String>,
) -> BTreeMap<String, String> {
    let from = node_paths(source, ChildOrder::Stored);
    f.iter()
        .map(|(a, b)| (from[&a].clone(), target[&b].clone()))
        .collect()
}

/// Describes `result` with node paths instead of internal ids.
pub fn embeddings_document(
    t1: &ATree,
    t2: &ATree,
    result: &JoinResult,
) -> Result<EmbeddingsDocument, TreeError> {
    let target = node_paths(&result.supertree, ChildOrder::Canonical);
    Ok(EmbeddingsDocument {
        supertree: serialize_newick(&result.supertree)?,
        disjoint_root: result.disjoint_root,
        f1: path_map(&result.f1, t1, &target),
        f2: path_map(&result.f2, t2, &target),
    })
}
