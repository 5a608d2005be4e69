//! Weak topological embeddings and ancestral display.
//!
//! A weak topological embedding of `S` into `T` is an injective,
//! label-preserving node map such that `f(a) ⇝ f(b)` exists in `T` exactly
//! when `a ⇝ b` exists in `S`.

use std::collections::{BTreeMap, HashMap};
use std::fmt;

use serde::Serialize;
use thiserror::Error;

use crate::cluster::{cluster_of, cluster_representation};
use crate::restriction::{normalize_semilabeled, restrict};
use crate::tree::{ATree, NodeId};

/// A node map from a source tree into a target tree.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize)]
#[serde(transparent)]
pub struct EmbeddingMap(BTreeMap<NodeId, NodeId>);

impl EmbeddingMap {
    pub fn new() -> Self {
        EmbeddingMap::default()
    }

    pub fn insert(&mut self, from: NodeId, to: NodeId) {
        self.0.insert(from, to);
    }

    pub fn get(&self, from: NodeId) -> Option<NodeId> {
        self.0.get(&from).copied()
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = (NodeId, NodeId)> + '_ {
        self.0.iter().map(|(&a, &b)| (a, b))
    }
}

impl FromIterator<(NodeId, NodeId)> for EmbeddingMap {
    fn from_iter<I: IntoIterator<Item = (NodeId, NodeId)>>(iter: I) -> Self {
        EmbeddingMap(iter.into_iter().collect())
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum EmbeddingViolation {
    NotInjective { a: NodeId, b: NodeId, image: NodeId },
    LabelNotPreserved { node: NodeId, image: NodeId },
    /// `from ⇝ to` is an arc of the source whose image is not a path.
    PathNotPreserved { from: NodeId, to: NodeId },
    /// `from ⇝ to` is not a path of the source but its image is.
    PathNotReflected { from: NodeId, to: NodeId },
}

impl fmt::Display for EmbeddingViolation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::NotInjective { a, b, image } => write!(f, "{a} and {b} both map to {image}"),
            Self::LabelNotPreserved { node, image } => {
                write!(f, "label of {node} is not carried by its image {image}")
            }
            Self::PathNotPreserved { from, to } => {
                write!(f, "arc {from} -> {to} is not mapped to a path")
            }
            Self::PathNotReflected { from, to } => {
                write!(f, "images of {from} and {to} are joined by a path but the nodes are not")
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum DomainMismatch {
    #[error("source node {0} has no image")]
    Unmapped(NodeId),
    #[error("map has an entry for {0}, which is not a source node")]
    UnknownSource(NodeId),
    #[error("image {0} is not a node of the target")]
    UnknownTarget(NodeId),
}

/// Checks every embedding condition and returns the violations found (empty
/// when `f` is a weak topological embedding of `s` into `t`).
pub fn verify_embedding(
    f: &EmbeddingMap,
    s: &ATree,
    t: &ATree,
) -> Result<Vec<EmbeddingViolation>, DomainMismatch> {
    for (a, b) in f.iter() {
        if !s.contains(a) {
            return Err(DomainMismatch::UnknownSource(a));
        }
        if !t.contains(b) {
            return Err(DomainMismatch::UnknownTarget(b));
        }
    }
    let image: Vec<(NodeId, NodeId)> = s
        .preorder()
        .iter()
        .map(|&v| f.get(v).map(|w| (v, w)).ok_or(DomainMismatch::Unmapped(v)))
        .collect::<Result<_, _>>()?;

    let mut out = Vec::new();
    let mut owner: HashMap<NodeId, NodeId> = HashMap::new();
    for &(v, w) in &image {
        if let Some(&prev) = owner.get(&w) {
            out.push(EmbeddingViolation::NotInjective { a: prev, b: v, image: w });
        } else {
            owner.insert(w, v);
        }
        if let Some(label) = s.label_of(v) {
            if t.label_of(w) != Some(label) {
                out.push(EmbeddingViolation::LabelNotPreserved { node: v, image: w });
            }
        }
    }
    for &(v, w) in &image {
        if let Some(p) = s.parent_of(v) {
            if !t.reaches(f.get(p).unwrap(), w) {
                out.push(EmbeddingViolation::PathNotPreserved { from: p, to: v });
            }
        }
    }
    for &(a, fa) in &image {
        for &(b, fb) in &image {
            if a != b && !s.reaches(a, b) && t.reaches(fa, fb) {
                out.push(EmbeddingViolation::PathNotReflected { from: a, to: b });
            }
        }
    }
    Ok(out)
}

/// Whether `t` ancestrally displays `s`: every label of `s` occurs in `t`,
/// the two trees agree on paths between labeled nodes of `s`, and every
/// cluster of `s` is a cluster of `t` restricted to the labels of `s`.
pub fn ancestrally_displays(t: &ATree, s: &ATree) -> bool {
    let labels = s.label_set();
    if labels.iter().any(|l| t.node_of(l.as_str()).is_none()) {
        return false;
    }
    let nodes: Vec<(NodeId, NodeId)> = s
        .labeled_nodes()
        .map(|(v, l)| (v, t.node_of(l.as_str()).unwrap()))
        .collect();
    for &(a_s, a_t) in &nodes {
        for &(b_s, b_t) in &nodes {
            if s.reaches(a_s, b_s) != t.reaches(a_t, b_t) {
                return false;
            }
        }
    }
    let restricted = cluster_representation(&restrict(t, &labels));
    cluster_representation(s)
        .clusters()
        .all(|c| restricted.contains(c))
}

/// The canonical candidate embedding of `normalize_semilabeled(s)` into `t`,
/// sending each node to the MRCA in `t` of its cluster. `t` displays `s`
/// exactly when this map verifies. Returns `None` when some label of `s` is
/// missing from `t`.
pub fn display_embedding(t: &ATree, s: &ATree) -> Option<(ATree, EmbeddingMap)> {
    if s.labeled_nodes().any(|(_, l)| t.node_of(l.as_str()).is_none()) {
        return None;
    }
    let s_prime = normalize_semilabeled(s);
    let f = s_prime
        .preorder()
        .iter()
        .map(|&v| {
            let cluster = cluster_of(&s_prime, v).unwrap();
            (v, t.mrca(cluster.members()).unwrap())
        })
        .collect();
    Some((s_prime, f))
}
