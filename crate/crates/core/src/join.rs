//! The join supertree of two compatible trees.
//!
//! On equal label sets the join has one chain of nodes `w_{Y,1} ... w_{Y,n}`
//! per cluster `Y` of either tree, `n` being the larger of the two
//! multiplicities of `Y`; `w_{Y,1}` is the lowest node of the chain. Each
//! chain hangs below `w_{Z,1}` for the smallest cluster `Z` strictly
//! containing `Y`.
//!
//! In general the join of the two trees restricted to their shared labels is
//! built first. Nodes that would receive a private label from both sides are
//! split, and the parts of each input outside the shared restriction are
//! then grafted onto the images of their attachment points.

use std::collections::HashMap;

use fixedbitset::FixedBitSet;
use thiserror::Error;

use crate::cluster::{Cluster, ClusterIndex};
use crate::compat::{cluster_compatibility, Certificate};
use crate::embedding::EmbeddingMap;
use crate::restriction::common_restriction_pair;
use crate::tree::{ATree, Label, NodeId, RawTree, TreeError};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum JoinError {
    #[error("the trees have different label sets")]
    LabelSetMismatch,
    #[error("the trees are not ancestrally compatible ({} certificates)", .0.len())]
    Incompatible(Vec<Certificate>),
    #[error(transparent)]
    Tree(#[from] TreeError),
}

/// The chain of join nodes created for one cluster of the shared
/// restriction, lowest node first.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CoreCluster {
    pub cluster: Cluster,
    pub nodes: Vec<NodeId>,
}

#[derive(Debug, Clone)]
pub struct JoinResult {
    pub supertree: ATree,
    /// Embedding of the first input into the supertree.
    pub f1: EmbeddingMap,
    /// Embedding of the second input into the supertree.
    pub f2: EmbeddingMap,
    /// Chains built from the shared clusters, in cluster order.
    pub core: Vec<CoreCluster>,
    /// Set when the inputs share no label and were placed under a fresh root.
    pub disjoint_root: bool,
}

/// Joins two compatible trees with the same label set.
pub fn join_same_labels(t1: &ATree, t2: &ATree) -> Result<JoinResult, JoinError> {
    if t1.label_set() != t2.label_set() {
        return Err(JoinError::LabelSetMismatch);
    }
    join(t1, t2)
}

/// Joins two compatible trees.
///
/// If one input is empty the other is returned unchanged. If the label sets
/// are disjoint both inputs are placed under a new unlabeled root.
pub fn join(t1: &ATree, t2: &ATree) -> Result<JoinResult, JoinError> {
    let verdict = cluster_compatibility(t1, t2);
    if !verdict.compatible {
        return Err(JoinError::Incompatible(verdict.certificates));
    }
    if t1.is_empty() || t2.is_empty() {
        let identity = |t: &ATree| t.preorder().iter().map(|&v| (v, v)).collect();
        let (supertree, f1, f2) = if t1.is_empty() {
            (t2.clone(), EmbeddingMap::new(), identity(t2))
        } else {
            (t1.clone(), identity(t1), EmbeddingMap::new())
        };
        return Ok(JoinResult {
            supertree,
            f1,
            f2,
            core: Vec::new(),
            disjoint_root: false,
        });
    }

    let pair = common_restriction_pair(t1, t2);
    if pair.common.is_empty() {
        let mut raw = RawTree::new();
        let root = raw.add_node(None);
        raw.root = Some(root);
        let mut f1 = EmbeddingMap::new();
        let mut f2 = EmbeddingMap::new();
        graft(&mut raw, t1, &|_| false, &mut f1, Some(root));
        graft(&mut raw, t2, &|_| false, &mut f2, Some(root));
        return Ok(JoinResult {
            supertree: raw.finish()?,
            f1,
            f2,
            core: Vec::new(),
            disjoint_root: true,
        });
    }

    let Core {
        mut raw,
        mut f1,
        mut f2,
        core,
    } = core_join(&pair.bar1, &pair.bar2);

    // Split nodes that both sides want to label with a private label.
    let private = |t: &ATree, v: NodeId| {
        t.label_of(v)
            .filter(|l| !pair.common.contains(*l))
            .cloned()
    };
    let image2: HashMap<NodeId, NodeId> = f2.iter().map(|(y, w)| (w, y)).collect();
    let mut clashes: Vec<(Label, NodeId)> = pair
        .bar1
        .preorder()
        .iter()
        .filter_map(|&x| {
            let label = private(t1, x)?;
            let w = f1.get(x).unwrap();
            let y = *image2.get(&w)?;
            private(t2, y).map(|_| (label, x))
        })
        .collect();
    clashes.sort();
    for (_, x) in clashes {
        let fresh = raw.insert_above(f1.get(x).unwrap());
        f1.insert(x, fresh);
    }

    // Graft the parts of each input outside the shared restriction.
    for (t, bar, f) in [(t1, &pair.bar1, &mut f1), (t2, &pair.bar2, &mut f2)] {
        for &x in bar.preorder() {
            if let Some(label) = private(t, x) {
                raw.set_label(f.get(x).unwrap(), Some(label));
            }
        }
        graft(&mut raw, t, &|v| bar.contains(v), f, None);
    }

    Ok(JoinResult {
        supertree: raw.finish()?,
        f1,
        f2,
        core,
        disjoint_root: false,
    })
}

/// Copies the nodes of `t` not accepted by `kept` into `raw` with fresh ids,
/// recording them in `f`. Nodes whose parent is kept attach to the parent's
/// image; a copied root attaches to `root_parent`.
fn graft(
    raw: &mut RawTree,
    t: &ATree,
    kept: &dyn Fn(NodeId) -> bool,
    f: &mut EmbeddingMap,
    root_parent: Option<NodeId>,
) {
    for &v in t.preorder() {
        if kept(v) {
            continue;
        }
        let w = raw.add_node(t.label_of(v).cloned());
        let parent = match t.parent_of(v) {
            Some(p) => f.get(p),
            None => root_parent,
        };
        if let Some(p) = parent {
            raw.attach(p, w);
        }
        f.insert(v, w);
    }
}

struct Core {
    raw: RawTree,
    f1: EmbeddingMap,
    f2: EmbeddingMap,
    core: Vec<CoreCluster>,
}

struct Entry {
    bits: FixedBitSet,
    chain1: Vec<NodeId>,
    chain2: Vec<NodeId>,
    parent: Option<usize>,
    nodes: Vec<NodeId>,
}

/// The join of two compatible trees on the same non-empty label set.
fn core_join(t1: &ATree, t2: &ATree) -> Core {
    let idx1 = ClusterIndex::new(t1);
    let idx2 = ClusterIndex::new(t2);

    let mut entries: Vec<Entry> = Vec::new();
    let mut by_bits: HashMap<FixedBitSet, usize> = HashMap::new();
    for (side, idx) in [(1, &idx1), (2, &idx2)] {
        for a in idx.anchors() {
            let bits = idx.bits(a).clone();
            let i = *by_bits.entry(bits.clone()).or_insert_with(|| {
                entries.push(Entry {
                    bits,
                    chain1: Vec::new(),
                    chain2: Vec::new(),
                    parent: None,
                    nodes: Vec::new(),
                });
                entries.len() - 1
            });
            let chain = idx.chain(a);
            if side == 1 {
                entries[i].chain1 = chain;
            } else {
                entries[i].chain2 = chain;
            }
        }
    }

    // Size first, then lexicographic on members.
    let mut order: Vec<usize> = (0..entries.len()).collect();
    order.sort_by(|&a, &b| {
        let (x, y) = (&entries[a].bits, &entries[b].bits);
        x.count_ones(..)
            .cmp(&y.count_ones(..))
            .then_with(|| x.ones().cmp(y.ones()))
    });

    for entry in entries.iter_mut() {
        let y = &entry.bits;
        let first = y.ones().next().expect("clusters are non-empty");
        let label = idx1.label_at(first);
        let up1 = strict_superset(&idx1, t1.node_of(label.as_str()).unwrap(), y);
        let up2 = strict_superset(&idx2, t2.node_of(label.as_str()).unwrap(), y);
        let parent = match (up1, up2) {
            (Some(a), Some(b)) => Some(if a.count_ones(..) <= b.count_ones(..) { a } else { b }),
            (a, b) => a.or(b),
        };
        entry.parent = parent.map(|p| by_bits[p]);
    }

    let mut raw = RawTree::new();
    for &i in &order {
        let n = entries[i].chain1.len().max(entries[i].chain2.len());
        entries[i].nodes = (0..n).map(|_| raw.add_node(None)).collect();
        for j in 1..n {
            let (lower, upper) = (entries[i].nodes[j - 1], entries[i].nodes[j]);
            raw.attach(upper, lower);
        }
    }
    let mut covered: Vec<FixedBitSet> = vec![FixedBitSet::with_capacity(idx1.universe_len()); entries.len()];
    for &i in &order {
        let top = *entries[i].nodes.last().unwrap();
        match entries[i].parent {
            Some(p) => {
                raw.attach(entries[p].nodes[0], top);
                let bits = entries[i].bits.clone();
                covered[p].union_with(&bits);
            }
            None => raw.root = Some(top),
        }
    }
    for i in 0..entries.len() {
        let mut rest = entries[i].bits.clone();
        rest.difference_with(&covered[i]);
        let mut ones = rest.ones();
        if let (Some(a), None) = (ones.next(), ones.next()) {
            raw.set_label(entries[i].nodes[0], Some(idx1.label_at(a).clone()));
        }
    }

    let mut f1 = EmbeddingMap::new();
    let mut f2 = EmbeddingMap::new();
    for e in &entries {
        for (x, &w) in e.chain1.iter().zip(&e.nodes) {
            f1.insert(*x, w);
        }
        for (y, &w) in e.chain2.iter().zip(&e.nodes) {
            f2.insert(*y, w);
        }
    }
    let core = order
        .iter()
        .map(|&i| CoreCluster {
            cluster: Cluster::new(idx1.to_labels(&entries[i].bits)),
            nodes: entries[i].nodes.clone(),
        })
        .collect();
    Core { raw, f1, f2, core }
}

/// Cluster of the lowest node at or above `start` whose cluster strictly
/// contains `y`.
fn strict_superset<'a>(
    idx: &'a ClusterIndex<'_>,
    start: NodeId,
    y: &FixedBitSet,
) -> Option<&'a FixedBitSet> {
    let mut v = Some(start);
    while let Some(u) = v {
        let bits = idx.bits(u);
        if bits != y && y.is_subset(bits) {
            return Some(bits);
        }
        v = idx.tree().parent_of(u);
    }
    None
}
