//! Clusters and cluster representations.
//!
//! The cluster of a node is the set of labels on the node and its
//! descendants. Nodes sharing a cluster always form a vertical chain whose
//! upper members are unlabeled elementary nodes; the lowest node of the chain
//! is the most recent common ancestor of the cluster and is used as its
//! anchor.

use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::sync::Arc;

use fixedbitset::FixedBitSet;
use serde::{Serialize, Serializer};

use crate::tree::{ATree, Label, NodeId, TreeError};

/// A finite set of labels, stored sorted.
///
/// Clusters order by size first and then lexicographically on their sorted
/// members, which is the order used for every listing in this crate.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Cluster(Arc<[Label]>);

impl Cluster {
    pub fn new<I: IntoIterator<Item = Label>>(labels: I) -> Self {
        let mut v: Vec<Label> = labels.into_iter().collect();
        v.sort();
        v.dedup();
        Cluster(v.into())
    }

    pub fn members(&self) -> &[Label] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn contains(&self, label: &str) -> bool {
        self.0.binary_search_by(|l| l.as_str().cmp(label)).is_ok()
    }

    pub fn is_subset(&self, other: &Cluster) -> bool {
        self.len() <= other.len() && self.0.iter().all(|l| other.contains(l.as_str()))
    }

    pub fn intersects(&self, other: &Cluster) -> bool {
        self.0.iter().any(|l| other.contains(l.as_str()))
    }
}

impl Ord for Cluster {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        self.len()
            .cmp(&other.len())
            .then_with(|| self.0.cmp(&other.0))
    }
}

impl PartialOrd for Cluster {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for Cluster {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("{")?;
        for (i, l) in self.0.iter().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            f.write_str(l.as_str())?;
        }
        f.write_str("}")
    }
}

impl fmt::Debug for Cluster {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl Serialize for Cluster {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        self.0.serialize(serializer)
    }
}

/// Labels of `v` and all its descendants.
pub fn cluster_of(tree: &ATree, v: NodeId) -> Result<Cluster, TreeError> {
    let nodes = tree.subtree(v)?;
    Ok(Cluster::new(
        nodes.iter().filter_map(|&u| tree.label_of(u).cloned()),
    ))
}

/// The nodes realizing one cluster.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ClusterClass {
    /// Number of nodes whose cluster this is.
    pub multiplicity: usize,
    /// The lowest node of the chain, i.e. the MRCA of the cluster.
    pub anchor: NodeId,
    /// All nodes with this cluster, from the anchor upwards.
    pub chain: Vec<NodeId>,
}

/// The set of clusters of a tree with their multiplicities and anchors.
#[derive(Debug, Clone, Default)]
pub struct ClusterRepresentation {
    classes: BTreeMap<Cluster, ClusterClass>,
}

impl ClusterRepresentation {
    pub fn len(&self) -> usize {
        self.classes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.classes.is_empty()
    }

    /// Clusters in size-then-lexicographic order.
    pub fn clusters(&self) -> impl Iterator<Item = &Cluster> + '_ {
        self.classes.keys()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&Cluster, &ClusterClass)> + '_ {
        self.classes.iter()
    }

    pub fn get(&self, cluster: &Cluster) -> Option<&ClusterClass> {
        self.classes.get(cluster)
    }

    pub fn contains(&self, cluster: &Cluster) -> bool {
        self.classes.contains_key(cluster)
    }

    pub fn multiplicity(&self, cluster: &Cluster) -> usize {
        self.classes.get(cluster).map_or(0, |c| c.multiplicity)
    }

    pub fn anchor(&self, cluster: &Cluster) -> Option<NodeId> {
        self.classes.get(cluster).map(|c| c.anchor)
    }
}

/// Computes every cluster of `tree` together with its multiplicity and chain.
pub fn cluster_representation(tree: &ATree) -> ClusterRepresentation {
    let index = ClusterIndex::new(tree);
    let mut classes = BTreeMap::new();
    for v in index.anchors() {
        let chain = index.chain(v);
        classes.insert(
            index.cluster(v),
            ClusterClass {
                multiplicity: chain.len(),
                anchor: v,
                chain,
            },
        );
    }
    ClusterRepresentation { classes }
}

/// Bitset clusters for every node of one tree over its sorted label set.
pub(crate) struct ClusterIndex<'t> {
    tree: &'t ATree,
    universe: Vec<Label>,
    bits: Vec<FixedBitSet>,
}

impl<'t> ClusterIndex<'t> {
    pub(crate) fn new(tree: &'t ATree) -> Self {
        let universe: Vec<Label> = tree.label_set().into_iter().collect();
        let position: HashMap<Label, usize> = universe
            .iter()
            .enumerate()
            .map(|(i, l)| (l.clone(), i))
            .collect();
        let k = universe.len();
        let mut bits = vec![FixedBitSet::new(); tree.slot_count()];
        for &v in tree.preorder().iter().rev() {
            let mut set = FixedBitSet::with_capacity(k);
            if let Some(l) = tree.label_of(v) {
                set.insert(position[l]);
            }
            for c in tree.children_of(v) {
                set.union_with(&bits[c.index()]);
            }
            bits[v.index()] = set;
        }
        ClusterIndex {
            tree,
            universe,
            bits,
        }
    }

    pub(crate) fn tree(&self) -> &'t ATree {
        self.tree
    }

    pub(crate) fn universe_len(&self) -> usize {
        self.universe.len()
    }

    pub(crate) fn bits(&self, v: NodeId) -> &FixedBitSet {
        &self.bits[v.index()]
    }

    pub(crate) fn label_at(&self, i: usize) -> &Label {
        &self.universe[i]
    }

    pub(crate) fn cluster(&self, v: NodeId) -> Cluster {
        Cluster(self.to_labels(self.bits(v)).into())
    }

    pub(crate) fn to_labels(&self, set: &FixedBitSet) -> Vec<Label> {
        set.ones().map(|i| self.universe[i].clone()).collect()
    }

    /// Nodes that are the lowest of their cluster chain, in preorder.
    pub(crate) fn anchors(&self) -> impl Iterator<Item = NodeId> + '_ {
        self.tree
            .preorder()
            .iter()
            .copied()
            .filter(|&v| !self.tree.is_unlabeled_elementary(v))
    }

    /// The chain of nodes sharing the cluster of anchor `v`, bottom first.
    pub(crate) fn chain(&self, v: NodeId) -> Vec<NodeId> {
        let mut chain = vec![v];
        let mut cur = v;
        while let Some(p) = self.tree.parent_of(cur) {
            if !self.tree.is_unlabeled_elementary(p) {
                break;
            }
            chain.push(p);
            cur = p;
        }
        chain
    }
}
