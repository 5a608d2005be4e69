//! Random tree generators and small-instance enumerators shared by the
//! integration tests.

#![allow(dead_code)]

use std::collections::BTreeSet;

use rand::seq::SliceRandom;
use rand::Rng;
use rand_chacha::ChaCha8Rng;
use rand::SeedableRng;
use treecompat::{build_tree, parse_newick, restrict, ATree, Label, NodeId};

pub fn label(s: &str) -> Label {
    Label::new(s).unwrap()
}

pub fn tree(s: &str) -> ATree {
    parse_newick(s).unwrap().remove(0)
}

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Mutable parent-array tree used to build and perturb test inputs.
#[derive(Debug, Clone, Default)]
pub struct TestTree {
    pub parent: Vec<Option<usize>>,
    pub label: Vec<Option<Label>>,
    pub alive: Vec<bool>,
}

impl TestTree {
    pub fn add(&mut self, parent: Option<usize>, label: Option<Label>) -> usize {
        self.parent.push(parent);
        self.label.push(label);
        self.alive.push(true);
        self.parent.len() - 1
    }

    pub fn from_atree(t: &ATree) -> Self {
        let mut out = TestTree::default();
        let mut index = std::collections::HashMap::new();
        for &v in t.preorder() {
            let p = t.parent(v).unwrap().map(|p| index[&p]);
            let i = out.add(p, t.label(v).unwrap().cloned());
            index.insert(v, i);
        }
        out
    }

    fn live(&self) -> impl Iterator<Item = usize> + '_ {
        (0..self.parent.len()).filter(|&i| self.alive[i])
    }

    fn children(&self, v: usize) -> Vec<usize> {
        self.live().filter(|&c| self.parent[c] == Some(v)).collect()
    }

    fn is_ancestor(&self, a: usize, mut b: usize) -> bool {
        loop {
            if a == b {
                return true;
            }
            match self.parent[b] {
                Some(p) => b = p,
                None => return false,
            }
        }
    }

    /// Removes unlabeled leaves until none is left.
    pub fn prune(&mut self) {
        loop {
            let mut changed = false;
            for v in 0..self.parent.len() {
                if self.alive[v] && self.label[v].is_none() && self.children(v).is_empty() {
                    self.alive[v] = false;
                    changed = true;
                }
            }
            if !changed {
                return;
            }
        }
    }

    pub fn to_atree(&self) -> ATree {
        let mut t = self.clone();
        t.prune();
        let ids: Vec<usize> = t.live().collect();
        let edges: Vec<(NodeId, NodeId)> = ids
            .iter()
            .filter_map(|&v| t.parent[v].map(|p| (NodeId::new(p as u32), NodeId::new(v as u32))))
            .collect();
        let labeling: Vec<(NodeId, Label)> = ids
            .iter()
            .map(|&v| (NodeId::new(v as u32), t.label[v].clone()))
            .filter_map(|(v, l)| l.map(|l| (v, l)))
            .collect();
        build_tree(&edges, &labeling).expect("generated tree is valid")
    }

    /// Merges unlabeled non-root nodes into their parents with probability `p`.
    pub fn contract_unlabeled<R: Rng>(&mut self, rng: &mut R, p: f64) {
        for v in 0..self.parent.len() {
            if !self.alive[v] || self.label[v].is_some() {
                continue;
            }
            let Some(up) = self.parent[v] else { continue };
            if rng.random_bool(p) {
                for c in self.children(v) {
                    self.parent[c] = Some(up);
                }
                self.alive[v] = false;
            }
        }
    }

    /// Inserts unlabeled elementary nodes above random nodes.
    pub fn insert_elementary<R: Rng>(&mut self, rng: &mut R, p: f64) {
        let n = self.parent.len();
        for v in 0..n {
            if !self.alive[v] || !rng.random_bool(p) {
                continue;
            }
            let old = self.parent[v];
            let w = self.add(old, None);
            self.parent[v] = Some(w);
        }
    }

    /// Exchanges the labels of two random labeled nodes.
    pub fn swap_labels<R: Rng>(&mut self, rng: &mut R) {
        let labeled: Vec<usize> = self.live().filter(|&v| self.label[v].is_some()).collect();
        if labeled.len() < 2 {
            return;
        }
        let a = labeled[rng.random_range(0..labeled.len())];
        let b = labeled[rng.random_range(0..labeled.len())];
        self.label.swap(a, b);
    }

    /// Re-attaches a random non-root subtree below a random node outside it.
    pub fn move_subtree<R: Rng>(&mut self, rng: &mut R) {
        let nodes: Vec<usize> = self.live().collect();
        let movable: Vec<usize> = nodes.iter().copied().filter(|&v| self.parent[v].is_some()).collect();
        if movable.is_empty() {
            return;
        }
        let v = movable[rng.random_range(0..movable.len())];
        let targets: Vec<usize> = nodes.iter().copied().filter(|&t| !self.is_ancestor(v, t)).collect();
        let t = targets[rng.random_range(0..targets.len())];
        self.parent[v] = Some(t);
    }

    /// Adds a new leaf with `l` under a random node, or labels a random
    /// unlabeled node with it.
    pub fn add_label<R: Rng>(&mut self, rng: &mut R, l: Label) {
        let nodes: Vec<usize> = self.live().collect();
        let unlabeled: Vec<usize> = nodes.iter().copied().filter(|&v| self.label[v].is_none()).collect();
        if !unlabeled.is_empty() && rng.random_bool(0.3) {
            let v = unlabeled[rng.random_range(0..unlabeled.len())];
            self.label[v] = Some(l);
        } else {
            let p = nodes[rng.random_range(0..nodes.len())];
            self.add(Some(p), Some(l));
        }
    }
}

/// Random rooted shape with `n` nodes, a random subset of which carry the
/// given labels; unlabeled leaves are pruned afterwards.
pub fn random_test_tree<R: Rng>(rng: &mut R, labels: &[Label], extra_nodes: usize) -> TestTree {
    let n = (labels.len() + extra_nodes).max(1);
    let mut t = TestTree::default();
    for i in 0..n {
        let p = if i == 0 {
            None
        } else if rng.random_bool(0.3) {
            Some(i - 1)
        } else {
            Some(rng.random_range(0..i))
        };
        t.add(p, None);
    }
    let mut slots: Vec<usize> = (0..n).collect();
    slots.shuffle(rng);
    for (l, &v) in labels.iter().zip(&slots) {
        t.label[v] = Some(l.clone());
    }
    t
}

pub fn random_atree<R: Rng>(rng: &mut R, labels: &[Label], extra_nodes: usize) -> ATree {
    random_test_tree(rng, labels, extra_nodes).to_atree()
}

/// Labels `prefix0 .. prefix{n-1}`.
pub fn labels(prefix: &str, n: usize) -> Vec<Label> {
    (0..n).map(|i| label(&format!("{prefix}{i}"))).collect()
}

fn sample<R: Rng>(rng: &mut R, pool: &[Label], min: usize) -> Vec<Label> {
    let k = rng.random_range(min.min(pool.len())..=pool.len());
    let mut v = pool.to_vec();
    v.shuffle(rng);
    v.truncate(k);
    v
}

/// How a random pair was produced.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PairKind {
    Independent,
    /// Both trees are displayed by a common tree, so they are compatible.
    Displayed,
    Perturbed,
}

/// A random pair of A-trees sharing at most 10 labels. A third of the pairs
/// are independent, a third are compatible by construction and a third are
/// compatible pairs with one random perturbation.
pub fn random_pair<R: Rng>(rng: &mut R) -> (ATree, ATree, PairKind) {
    let shared_pool = labels("S", 10);
    let p1 = labels("P1_", 4);
    let p2 = labels("P2_", 4);
    match rng.random_range(0..3) {
        0 => {
            let mut l1 = sample(rng, &shared_pool, 1);
            l1.extend(sample(rng, &p1, 0));
            let mut l2 = sample(rng, &shared_pool, 1);
            l2.extend(sample(rng, &p2, 0));
            let e1 = rng.random_range(0..6);
            let e2 = rng.random_range(0..6);
            (random_atree(rng, &l1, e1), random_atree(rng, &l2, e2), PairKind::Independent)
        }
        kind => {
            let (t1, t2) = displayed_pair(rng, &shared_pool, &p1, &p2);
            if kind == 1 {
                (t1, t2, PairKind::Displayed)
            } else {
                let mut tt = TestTree::from_atree(&t2);
                if rng.random_bool(0.5) {
                    tt.swap_labels(rng);
                } else {
                    tt.move_subtree(rng);
                }
                (t1, tt.to_atree(), PairKind::Perturbed)
            }
        }
    }
}

/// Two restrictions of one random base tree, each with unlabeled nodes
/// randomly contracted or inserted.
pub fn displayed_pair<R: Rng>(
    rng: &mut R,
    shared_pool: &[Label],
    p1: &[Label],
    p2: &[Label],
) -> (ATree, ATree) {
    let shared = sample(rng, shared_pool, 1);
    let priv1 = sample(rng, p1, 0);
    let priv2 = sample(rng, p2, 0);
    let mut all = shared.clone();
    all.extend(priv1.iter().cloned());
    all.extend(priv2.iter().cloned());
    let extra = rng.random_range(0..8);
    let base = random_atree(rng, &all, extra);
    let mut derive = |own: &[Label]| {
        let keep: BTreeSet<Label> = shared.iter().chain(own).cloned().collect();
        let mut t = TestTree::from_atree(&restrict(&base, &keep));
        t.contract_unlabeled(rng, 0.3);
        t.insert_elementary(rng, 0.1);
        t.to_atree()
    };
    let t1 = derive(&priv1);
    let t2 = derive(&priv2);
    (t1, t2)
}

/// Every semi-labeled tree whose label set is exactly `labels`, as Newick
/// bodies without the trailing `;`.
pub fn semilabeled_newicks(labels: &[&str]) -> Vec<String> {
    let mut sorted: Vec<&str> = labels.to_vec();
    sorted.sort();
    enumerate(&sorted)
}

fn enumerate(labels: &[&str]) -> Vec<String> {
    let mut out = Vec::new();
    // A labeled root over any forest on the remaining labels.
    for (i, root) in labels.iter().enumerate() {
        let rest: Vec<&str> = labels.iter().enumerate().filter(|&(j, _)| j != i).map(|(_, l)| *l).collect();
        if rest.is_empty() {
            out.push(root.to_string());
            continue;
        }
        for forest in forests(&rest, 1) {
            out.push(format!("({forest}){root}"));
        }
    }
    // An unlabeled root with at least two subtrees.
    if labels.len() >= 2 {
        for forest in forests(labels, 2) {
            out.push(format!("({forest})"));
        }
    }
    out
}

/// Comma-separated forests of at least `min_blocks` trees over `labels`,
/// one per set partition and choice of subtree.
fn forests(labels: &[&str], min_blocks: usize) -> Vec<String> {
    let mut out = Vec::new();
    for partition in set_partitions(labels) {
        if partition.len() < min_blocks {
            continue;
        }
        let mut acc = vec![String::new()];
        for block in &partition {
            let options = enumerate(block);
            let mut next = Vec::new();
            for prefix in &acc {
                for o in &options {
                    next.push(if prefix.is_empty() {
                        o.clone()
                    } else {
                        format!("{prefix},{o}")
                    });
                }
            }
            acc = next;
        }
        out.extend(acc);
    }
    out
}

fn set_partitions<'a>(labels: &[&'a str]) -> Vec<Vec<Vec<&'a str>>> {
    let Some((first, rest)) = labels.split_first() else {
        return vec![vec![]];
    };
    let mut out = Vec::new();
    for partition in set_partitions(rest) {
        let mut with_new = vec![vec![*first]];
        with_new.extend(partition.iter().cloned());
        out.push(with_new);
        for i in 0..partition.len() {
            let mut p = partition.clone();
            p[i].insert(0, *first);
            out.push(p);
        }
    }
    out
}

/// All semi-labeled trees over every non-empty subset of `labels`.
pub fn all_semilabeled_up_to(labels: &[&str]) -> Vec<ATree> {
    let n = labels.len();
    let mut out = Vec::new();
    for mask in 1u32..(1 << n) {
        let subset: Vec<&str> = (0..n).filter(|i| mask & (1 << i) != 0).map(|i| labels[i]).collect();
        for s in semilabeled_newicks(&subset) {
            out.push(tree(&format!("{s};")));
        }
    }
    out
}
