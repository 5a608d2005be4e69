//! Restriction to a label subset and suppression of unlabeled elementary
//! nodes. Both keep the ids of the nodes they retain.

use std::collections::BTreeSet;

use crate::tree::{ATree, Label, NodeId, RawTree};

/// Two trees restricted to the labels they share.
#[derive(Debug, Clone)]
pub struct RestrictedPair {
    pub bar1: ATree,
    pub bar2: ATree,
    pub common: BTreeSet<Label>,
}

/// The subtree of `tree` made of the nodes with a label from `labels` at or
/// below them. Labels outside `labels` are dropped; the root is kept whenever
/// the result is non-empty.
pub fn restrict(tree: &ATree, labels: &BTreeSet<Label>) -> ATree {
    let mut keep = vec![false; tree.slot_count()];
    for &v in tree.preorder().iter().rev() {
        keep[v.index()] = tree.label_of(v).is_some_and(|l| labels.contains(l))
            || tree.children_of(v).iter().any(|c| keep[c.index()]);
    }
    let mut raw = RawTree::with_slots(tree.slot_count());
    for &v in tree.preorder() {
        if !keep[v.index()] {
            continue;
        }
        let label = tree.label_of(v).filter(|l| labels.contains(*l)).cloned();
        raw.put(v, label);
        match tree.parent_of(v) {
            Some(p) => raw.attach(p, v),
            None => raw.root = Some(v),
        }
    }
    raw.finish().expect("restriction of a valid tree is valid")
}

/// Restricts both trees to `𝒜(t1) ∩ 𝒜(t2)`.
pub fn common_restriction_pair(t1: &ATree, t2: &ATree) -> RestrictedPair {
    let l2 = t2.label_set();
    let common: BTreeSet<Label> = t1.label_set().intersection(&l2).cloned().collect();
    RestrictedPair {
        bar1: restrict(t1, &common),
        bar2: restrict(t2, &common),
        common,
    }
}

/// Removes every unlabeled elementary node, contracting each maximal chain of
/// them onto the node at its lower end. The result is semi-labeled and has
/// the same clusters.
pub fn normalize_semilabeled(tree: &ATree) -> ATree {
    let mut above: Vec<Option<NodeId>> = vec![None; tree.slot_count()];
    let mut raw = RawTree::with_slots(tree.slot_count());
    for &v in tree.preorder() {
        let parent_rep = tree.parent_of(v).and_then(|p| above[p.index()]);
        if tree.is_unlabeled_elementary(v) {
            above[v.index()] = parent_rep;
            continue;
        }
        above[v.index()] = Some(v);
        raw.put(v, tree.label_of(v).cloned());
        match parent_rep {
            Some(p) => raw.attach(p, v),
            None => raw.root = Some(v),
        }
    }
    raw.finish().expect("normalization of a valid tree is valid")
}
