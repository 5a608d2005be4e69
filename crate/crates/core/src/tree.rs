//! Rooted trees with a partial injective labeling (A-trees).
//!
//! Nodes live in an arena indexed by [`NodeId`]. Ids are stable: operations
//! that derive a tree from another one (restriction, normalization, blow-out)
//! keep the ids of the nodes they retain, so results can always be related
//! back to their inputs. Removed nodes leave an empty slot behind.

use std::borrow::Borrow;
use std::collections::{BTreeSet, HashMap};
use std::fmt;
use std::str::FromStr;
use std::sync::Arc;

use serde::{Serialize, Serializer};
use thiserror::Error;

/// Stable identifier of a node within one [`ATree`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
#[serde(transparent)]
pub struct NodeId(u32);

impl NodeId {
    pub const fn new(index: u32) -> Self {
        NodeId(index)
    }

    pub fn index(self) -> usize {
        self.0 as usize
    }
}

impl fmt::Display for NodeId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "#{}", self.0)
    }
}

/// A taxon name.
///
/// Labels are non-empty tokens over `[A-Za-z0-9_.|-]`, which keeps them
/// representable in Newick without quoting. Comparison is exact byte equality.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Label(Arc<str>);

pub(crate) fn is_label_char(c: char) -> bool {
    c.is_ascii_alphanumeric() || matches!(c, '_' | '.' | '|' | '-')
}

impl Label {
    pub fn new(name: &str) -> Result<Self, TreeError> {
        if name.is_empty() || !name.chars().all(is_label_char) {
            return Err(TreeError::InvalidLabel(name.to_string()));
        }
        Ok(Label(Arc::from(name)))
    }

    pub fn as_str(&self) -> &str {
        &self.0
    }
}

impl FromStr for Label {
    type Err = TreeError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Label::new(s)
    }
}

impl Borrow<str> for Label {
    fn borrow(&self) -> &str {
        &self.0
    }
}

impl fmt::Display for Label {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl fmt::Debug for Label {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}", &*self.0)
    }
}

impl Serialize for Label {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.serialize_str(&self.0)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum TreeError {
    #[error("invalid label {0:?}: labels are non-empty tokens over [A-Za-z0-9_.|-]")]
    InvalidLabel(String),
    #[error("cycle detected through node {0}")]
    CycleDetected(NodeId),
    #[error("more than one root: {0} and {1}")]
    MultipleRoots(NodeId, NodeId),
    #[error("node {0} has more than one parent")]
    MultipleParents(NodeId),
    #[error("label {0} is assigned to more than one node")]
    DuplicateLabel(Label),
    #[error("leaf {0} is unlabeled")]
    UnlabeledLeaf(NodeId),
    #[error("unknown node {0}")]
    UnknownNode(NodeId),
    #[error("label {0} does not occur in the tree")]
    LabelNotPresent(Label),
    #[error("empty label set")]
    EmptyLabelSet,
    #[error("the tree is empty")]
    EmptyTree,
}

#[derive(Debug, Clone)]
struct Node {
    parent: Option<NodeId>,
    children: Vec<NodeId>,
    label: Option<Label>,
}

/// Per-node traversal data computed once when a tree is validated.
#[derive(Debug, Clone, Copy, Default)]
struct Span {
    /// Position of the node in the preorder.
    pre: u32,
    /// Number of nodes in the subtree rooted here.
    size: u32,
    depth: u32,
}

/// A rooted tree whose leaves (and possibly some inner nodes) carry
/// pairwise distinct labels.
///
/// Values are immutable once built; every constructor validates the tree
/// invariants. Child order is kept for deterministic output but carries no
/// meaning.
#[derive(Debug, Clone, Default)]
pub struct ATree {
    slots: Vec<Option<Node>>,
    root: Option<NodeId>,
    by_label: HashMap<Label, NodeId>,
    preorder: Vec<NodeId>,
    spans: Vec<Span>,
}

/// Builds an [`ATree`] from an arc list and a partial labeling.
///
/// Nodes are the endpoints of the arcs plus the keys of the labeling, so a
/// single labeled node with no arcs is a one-node tree. Children keep the
/// order in which their arcs are listed.
pub fn build_tree(
    edges: &[(NodeId, NodeId)],
    labeling: &[(NodeId, Label)],
) -> Result<ATree, TreeError> {
    let max = edges
        .iter()
        .flat_map(|&(p, c)| [p, c])
        .chain(labeling.iter().map(|(v, _)| *v))
        .map(NodeId::index)
        .max();
    let mut raw = RawTree::with_slots(max.map_or(0, |m| m + 1));
    for &(p, c) in edges {
        raw.ensure(p);
        raw.ensure(c);
    }
    for (v, _) in labeling {
        raw.ensure(*v);
    }
    for &(p, c) in edges {
        if p == c {
            return Err(TreeError::CycleDetected(p));
        }
        if raw.node(c).parent.is_some() {
            return Err(TreeError::MultipleParents(c));
        }
        raw.attach(p, c);
    }
    for (v, label) in labeling {
        raw.set_label(*v, Some(label.clone()));
    }
    let roots: Vec<NodeId> = raw
        .live()
        .filter(|&v| raw.node(v).parent.is_none())
        .take(2)
        .collect();
    match (roots.first().copied(), roots.get(1).copied()) {
        (Some(a), Some(b)) => return Err(TreeError::MultipleRoots(a, b)),
        (Some(r), None) => raw.root = Some(r),
        (None, _) => {
            if let Some(v) = raw.live().next() {
                return Err(TreeError::CycleDetected(v));
            }
        }
    }
    raw.finish()
}

impl ATree {
    pub fn empty() -> Self {
        ATree::default()
    }

    pub fn is_empty(&self) -> bool {
        self.root.is_none()
    }

    pub fn root(&self) -> Option<NodeId> {
        self.root
    }

    /// Number of nodes.
    pub fn len(&self) -> usize {
        self.preorder.len()
    }

    pub fn contains(&self, v: NodeId) -> bool {
        matches!(self.slots.get(v.index()), Some(Some(_)))
    }

    fn node(&self, v: NodeId) -> Result<&Node, TreeError> {
        self.slots
            .get(v.index())
            .and_then(Option::as_ref)
            .ok_or(TreeError::UnknownNode(v))
    }

    /// Nodes in preorder (parents before children, children in stored order).
    pub fn preorder(&self) -> &[NodeId] {
        &self.preorder
    }

    pub fn parent(&self, v: NodeId) -> Result<Option<NodeId>, TreeError> {
        Ok(self.node(v)?.parent)
    }

    pub fn children(&self, v: NodeId) -> Result<&[NodeId], TreeError> {
        Ok(&self.node(v)?.children)
    }

    pub fn label(&self, v: NodeId) -> Result<Option<&Label>, TreeError> {
        Ok(self.node(v)?.label.as_ref())
    }

    /// The node carrying `label`, if any.
    pub fn node_of(&self, label: &str) -> Option<NodeId> {
        self.by_label.get(label).copied()
    }

    pub fn is_leaf(&self, v: NodeId) -> Result<bool, TreeError> {
        Ok(self.node(v)?.children.is_empty())
    }

    /// A node with exactly one child.
    pub fn is_elementary(&self, v: NodeId) -> Result<bool, TreeError> {
        Ok(self.node(v)?.children.len() == 1)
    }

    pub fn depth(&self, v: NodeId) -> Result<usize, TreeError> {
        self.node(v)?;
        Ok(self.spans[v.index()].depth as usize)
    }

    /// All labels of the tree, sorted.
    pub fn label_set(&self) -> BTreeSet<Label> {
        self.by_label.keys().cloned().collect()
    }

    /// Labels of the leaves, sorted.
    pub fn leaf_labels(&self) -> BTreeSet<Label> {
        self.preorder
            .iter()
            .filter_map(|&v| {
                let node = self.slots[v.index()].as_ref().unwrap();
                if node.children.is_empty() {
                    node.label.clone()
                } else {
                    None
                }
            })
            .collect()
    }

    /// `(node, label)` for every labeled node, in preorder.
    pub fn labeled_nodes(&self) -> impl Iterator<Item = (NodeId, &Label)> + '_ {
        self.preorder.iter().filter_map(move |&v| {
            self.slots[v.index()]
                .as_ref()
                .and_then(|n| n.label.as_ref())
                .map(|l| (v, l))
        })
    }

    /// Nodes of the subtree rooted at `v`, in preorder.
    pub fn subtree(&self, v: NodeId) -> Result<&[NodeId], TreeError> {
        self.node(v)?;
        let span = self.spans[v.index()];
        let start = span.pre as usize;
        Ok(&self.preorder[start..start + span.size as usize])
    }

    /// Whether there is a path from `u` to `v`, i.e. `v` is `u` or one of its
    /// descendants.
    pub fn has_path(&self, u: NodeId, v: NodeId) -> Result<bool, TreeError> {
        self.node(u)?;
        self.node(v)?;
        Ok(self.reaches(u, v))
    }

    /// `has_path` for nodes already known to be in the tree.
    pub(crate) fn reaches(&self, u: NodeId, v: NodeId) -> bool {
        let a = self.spans[u.index()];
        let b = self.spans[v.index()];
        a.pre <= b.pre && b.pre < a.pre + a.size
    }

    /// Most recent common ancestor of two nodes.
    pub fn mrca_of_nodes(&self, u: NodeId, v: NodeId) -> Result<NodeId, TreeError> {
        self.node(u)?;
        self.node(v)?;
        Ok(self.meet(u, v))
    }

    pub(crate) fn meet(&self, mut u: NodeId, v: NodeId) -> NodeId {
        while !self.reaches(u, v) {
            // The root reaches everything, so u has a parent here.
            u = self.slots[u.index()].as_ref().unwrap().parent.unwrap();
        }
        u
    }

    pub(crate) fn parent_of(&self, v: NodeId) -> Option<NodeId> {
        self.slots[v.index()].as_ref().unwrap().parent
    }

    pub(crate) fn children_of(&self, v: NodeId) -> &[NodeId] {
        &self.slots[v.index()].as_ref().unwrap().children
    }

    pub(crate) fn label_of(&self, v: NodeId) -> Option<&Label> {
        self.slots[v.index()].as_ref().unwrap().label.as_ref()
    }

    /// The most recent common ancestor `v_X` of the nodes labeled in `labels`.
    pub fn mrca<'a, I>(&self, labels: I) -> Result<NodeId, TreeError>
    where
        I: IntoIterator<Item = &'a Label>,
    {
        let mut acc: Option<NodeId> = None;
        for label in labels {
            let v = self
                .node_of(label.as_str())
                .ok_or_else(|| TreeError::LabelNotPresent(label.clone()))?;
            acc = Some(match acc {
                None => v,
                Some(a) => self.meet(a, v),
            });
        }
        acc.ok_or(TreeError::EmptyLabelSet)
    }

    /// True when every elementary node is labeled (leaves always are).
    pub fn is_semilabeled(&self) -> bool {
        self.preorder.iter().all(|&v| {
            let node = self.slots[v.index()].as_ref().unwrap();
            node.children.len() != 1 || node.label.is_some()
        })
    }

    /// Unlabeled nodes with a single child share their cluster with that
    /// child.
    pub(crate) fn is_unlabeled_elementary(&self, v: NodeId) -> bool {
        let node = self.slots[v.index()].as_ref().unwrap();
        node.children.len() == 1 && node.label.is_none()
    }

    /// Inserts a fresh unlabeled node directly above `node`, splitting the arc
    /// from its parent, or above the root if `node` is the root. Returns the
    /// new tree and the id of the inserted node.
    pub fn blow_out(&self, node: NodeId) -> Result<(ATree, NodeId), TreeError> {
        self.node(node)?;
        let mut raw = self.to_raw();
        let fresh = raw.insert_above(node);
        Ok((raw.finish()?, fresh))
    }

    /// Whether there is a bijection between the nodes of the two trees that
    /// preserves the root, the arcs and the labels. Child order is ignored.
    pub fn is_isomorphic(&self, other: &ATree) -> bool {
        let (r1, r2) = match (self.root, other.root) {
            (None, None) => return true,
            (Some(a), Some(b)) => (a, b),
            _ => return false,
        };
        if self.len() != other.len() || self.by_label.len() != other.by_label.len() {
            return false;
        }
        let key1 = self.min_labels();
        let key2 = other.min_labels();
        let mut stack = vec![(r1, r2)];
        while let Some((u, v)) = stack.pop() {
            let a = self.slots[u.index()].as_ref().unwrap();
            let b = other.slots[v.index()].as_ref().unwrap();
            if a.label != b.label || a.children.len() != b.children.len() {
                return false;
            }
            let mut ca: Vec<_> = a.children.iter().map(|&c| (&key1[c.index()], c)).collect();
            let mut cb: Vec<_> = b.children.iter().map(|&c| (&key2[c.index()], c)).collect();
            ca.sort();
            cb.sort();
            for ((ka, x), (kb, y)) in ca.into_iter().zip(cb) {
                if ka != kb {
                    return false;
                }
                stack.push((x, y));
            }
        }
        true
    }

    /// Smallest label in the cluster of every node, indexed by slot.
    /// Sibling clusters are disjoint, so this key tells siblings apart.
    pub(crate) fn min_labels(&self) -> Vec<Option<Label>> {
        let mut key: Vec<Option<Label>> = vec![None; self.slots.len()];
        for &v in self.preorder.iter().rev() {
            let node = self.slots[v.index()].as_ref().unwrap();
            let mut best = node.label.clone();
            for c in &node.children {
                let k = &key[c.index()];
                if k.is_some() && (best.is_none() || k < &best) {
                    best = k.clone();
                }
            }
            key[v.index()] = best;
        }
        key
    }

    pub(crate) fn slot_count(&self) -> usize {
        self.slots.len()
    }

    pub(crate) fn to_raw(&self) -> RawTree {
        RawTree {
            slots: self.slots.clone(),
            root: self.root,
        }
    }
}

/// Mutable tree under construction. [`RawTree::finish`] validates it into an
/// [`ATree`].
#[derive(Debug, Clone, Default)]
pub(crate) struct RawTree {
    slots: Vec<Option<Node>>,
    pub(crate) root: Option<NodeId>,
}

impl RawTree {
    pub(crate) fn new() -> Self {
        RawTree::default()
    }

    pub(crate) fn with_slots(n: usize) -> Self {
        RawTree {
            slots: vec![None; n],
            root: None,
        }
    }

    fn ensure(&mut self, v: NodeId) {
        let slot = &mut self.slots[v.index()];
        if slot.is_none() {
            *slot = Some(Node {
                parent: None,
                children: Vec::new(),
                label: None,
            });
        }
    }

    /// Places a detached node at a chosen id. The slot must be free.
    pub(crate) fn put(&mut self, v: NodeId, label: Option<Label>) {
        if self.slots.len() <= v.index() {
            self.slots.resize(v.index() + 1, None);
        }
        debug_assert!(self.slots[v.index()].is_none());
        self.ensure(v);
        self.set_label(v, label);
    }

    fn node(&self, v: NodeId) -> &Node {
        self.slots[v.index()].as_ref().expect("live node")
    }

    fn node_mut(&mut self, v: NodeId) -> &mut Node {
        self.slots[v.index()].as_mut().expect("live node")
    }

    fn live(&self) -> impl Iterator<Item = NodeId> + '_ {
        self.slots
            .iter()
            .enumerate()
            .filter(|(_, s)| s.is_some())
            .map(|(i, _)| NodeId(i as u32))
    }

    pub(crate) fn add_node(&mut self, label: Option<Label>) -> NodeId {
        let id = NodeId(self.slots.len() as u32);
        self.slots.push(Some(Node {
            parent: None,
            children: Vec::new(),
            label,
        }));
        id
    }

    pub(crate) fn attach(&mut self, parent: NodeId, child: NodeId) {
        self.node_mut(child).parent = Some(parent);
        self.node_mut(parent).children.push(child);
    }

    pub(crate) fn set_label(&mut self, v: NodeId, label: Option<Label>) {
        self.node_mut(v).label = label;
    }

    pub(crate) fn insert_above(&mut self, v: NodeId) -> NodeId {
        let fresh = self.add_node(None);
        match self.node(v).parent {
            Some(p) => {
                let pos = self
                    .node(p)
                    .children
                    .iter()
                    .position(|&c| c == v)
                    .expect("child listed under its parent");
                self.node_mut(p).children[pos] = fresh;
                self.node_mut(fresh).parent = Some(p);
            }
            None => self.root = Some(fresh),
        }
        self.node_mut(fresh).children.push(v);
        self.node_mut(v).parent = Some(fresh);
        fresh
    }

    /// Validates the structure and labeling and computes traversal data.
    pub(crate) fn finish(self) -> Result<ATree, TreeError> {
        let RawTree { slots, root } = self;
        let live = slots.iter().filter(|s| s.is_some()).count();
        let Some(root) = root else {
            if let Some(i) = slots.iter().position(Option::is_some) {
                return Err(TreeError::CycleDetected(NodeId(i as u32)));
            }
            return Ok(ATree {
                slots,
                ..ATree::default()
            });
        };
        if slots[root.index()].as_ref().unwrap().parent.is_some() {
            return Err(TreeError::CycleDetected(root));
        }

        let mut spans = vec![Span::default(); slots.len()];
        let mut preorder = Vec::with_capacity(live);
        let mut seen = vec![false; slots.len()];
        // (node, depth, exiting)
        let mut stack = vec![(root, 0u32, false)];
        while let Some((v, depth, exiting)) = stack.pop() {
            if exiting {
                let span = &mut spans[v.index()];
                span.size = preorder.len() as u32 - span.pre;
                continue;
            }
            if seen[v.index()] {
                return Err(TreeError::CycleDetected(v));
            }
            seen[v.index()] = true;
            spans[v.index()] = Span {
                pre: preorder.len() as u32,
                size: 0,
                depth,
            };
            preorder.push(v);
            stack.push((v, depth, true));
            let node = slots[v.index()].as_ref().unwrap();
            for &c in node.children.iter().rev() {
                stack.push((c, depth + 1, false));
            }
        }
        if preorder.len() != live {
            let stray = (0..slots.len())
                .find(|&i| slots[i].is_some() && !seen[i])
                .unwrap();
            let stray = NodeId(stray as u32);
            let node = slots[stray.index()].as_ref().unwrap();
            return Err(if node.parent.is_none() {
                TreeError::MultipleRoots(root, stray)
            } else {
                TreeError::CycleDetected(stray)
            });
        }

        let mut by_label = HashMap::new();
        for &v in &preorder {
            let node = slots[v.index()].as_ref().unwrap();
            match &node.label {
                Some(label) => {
                    if by_label.insert(label.clone(), v).is_some() {
                        return Err(TreeError::DuplicateLabel(label.clone()));
                    }
                }
                None if node.children.is_empty() => return Err(TreeError::UnlabeledLeaf(v)),
                None => {}
            }
        }

        Ok(ATree {
            slots,
            root: Some(root),
            by_label,
            preorder,
            spans,
        })
    }
}
