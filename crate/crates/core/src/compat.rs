//! Ancestral compatibility tests and incompatibility certificates.
//!
//! Two procedures decide the same question:
//!
//! * the local test checks the pair condition (C1) and the triple condition
//!   (C2) on the shared labels directly;
//! * the cluster test restricts both trees to their shared labels and checks
//!   that the smallest cluster containing each label agrees and that the two
//!   cluster families are mutually laminar.
//!
//! Both report every violation they find. Node ids in certificates refer to
//! the input trees.

use std::collections::HashSet;

use serde::Serialize;

use crate::cluster::{Cluster, ClusterIndex};
use crate::restriction::common_restriction_pair;
use crate::tree::{ATree, Label, NodeId};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub enum CertificateKind {
    /// Exactly one tree has a path `v_A ⇝ v_B`.
    IncompatiblePair,
    /// The first tree has a non-trivial path `v_{B,C} ⇝ v_{A,B}` and the
    /// second a non-trivial path `v_{A,B} ⇝ v_{B,C}`.
    IncompatibleTriple,
    /// The smallest cluster containing a label differs between the restricted
    /// trees.
    SmallestClusterMismatch,
    /// Two clusters overlap without being nested.
    ProperClusterIntersection,
}

/// The evidence one tree contributes to a certificate.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Witness {
    /// For path certificates the two endpoints `[from, to]`; for cluster
    /// certificates the node realizing the cluster.
    pub nodes: Vec<NodeId>,
    /// For path certificates, whether this tree has the path `from ⇝ to`.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub has_path: Option<bool>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Sides {
    pub t1: Witness,
    pub t2: Witness,
}

/// One violation of compatibility.
///
/// For triples, `labels` is `[A, B, C]` in the roles of the (C2) condition.
/// For cluster intersections, `labels` is a shared label followed by a label
/// only in the first cluster and one only in the second.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Certificate {
    pub kind: CertificateKind,
    pub labels: Vec<Label>,
    pub clusters: Vec<Cluster>,
    pub sides: Sides,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Method {
    Local,
    Clusters,
}

impl Method {
    pub fn as_str(self) -> &'static str {
        match self {
            Method::Local => "local",
            Method::Clusters => "clusters",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Verdict {
    pub compatible: bool,
    pub method: Method,
    pub certificates: Vec<Certificate>,
}

impl Verdict {
    fn new(method: Method, certificates: Vec<Certificate>) -> Self {
        Verdict {
            compatible: certificates.is_empty(),
            method,
            certificates,
        }
    }
}

/// Runs the chosen procedure.
pub fn check(t1: &ATree, t2: &ATree, method: Method) -> Verdict {
    match method {
        Method::Local => local_compatibility(t1, t2),
        Method::Clusters => cluster_compatibility(t1, t2),
    }
}

/// Which procedure(s) a caller asked for.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum MethodChoice {
    Local,
    Clusters,
    /// Run both and require them to agree.
    Both,
}

/// Outcome of [`decide`]. Serializes as the certificate document
/// `{compatible, method, certificates}`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Decision {
    pub compatible: bool,
    pub method: MethodChoice,
    pub certificates: Vec<Certificate>,
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("local test says {local}, cluster test says {clusters}", local = verdict_word(*.local), clusters = verdict_word(*.clusters))]
pub struct MethodDisagreement {
    pub local: bool,
    pub clusters: bool,
}

fn verdict_word(compatible: bool) -> &'static str {
    if compatible {
        "compatible"
    } else {
        "incompatible"
    }
}

/// Runs the requested procedure(s). With [`MethodChoice::Both`] the
/// certificates of both tests are returned, local ones first.
pub fn decide(t1: &ATree, t2: &ATree, choice: MethodChoice) -> Result<Decision, MethodDisagreement> {
    let single = |v: Verdict| Decision {
        compatible: v.compatible,
        method: choice,
        certificates: v.certificates,
    };
    match choice {
        MethodChoice::Local => Ok(single(local_compatibility(t1, t2))),
        MethodChoice::Clusters => Ok(single(cluster_compatibility(t1, t2))),
        MethodChoice::Both => {
            let local = local_compatibility(t1, t2);
            let clusters = cluster_compatibility(t1, t2);
            if local.compatible != clusters.compatible {
                return Err(MethodDisagreement {
                    local: local.compatible,
                    clusters: clusters.compatible,
                });
            }
            let mut certificates = local.certificates;
            certificates.extend(clusters.certificates);
            Ok(Decision {
                compatible: local.compatible,
                method: choice,
                certificates,
            })
        }
    }
}

/// Shared labels in sorted order with their nodes in each tree.
fn shared_nodes(t1: &ATree, t2: &ATree) -> Vec<(Label, NodeId, NodeId)> {
    t1.label_set()
        .into_iter()
        .filter_map(|l| {
            let v2 = t2.node_of(l.as_str())?;
            let v1 = t1.node_of(l.as_str()).unwrap();
            Some((l, v1, v2))
        })
        .collect()
}

fn path_witness(from: NodeId, to: NodeId, has_path: bool) -> Witness {
    Witness {
        nodes: vec![from, to],
        has_path: Some(has_path),
    }
}

fn node_witness(v: NodeId) -> Witness {
    Witness {
        nodes: vec![v],
        has_path: None,
    }
}

/// Ordered pairs `(A, B)` of shared labels on which the two trees disagree
/// about the existence of a path `v_A ⇝ v_B`, in lexicographic order.
pub fn check_c1(t1: &ATree, t2: &ATree) -> Vec<Certificate> {
    let shared = shared_nodes(t1, t2);
    let mut out = Vec::new();
    for (a, a1, a2) in &shared {
        for (b, b1, b2) in &shared {
            if a == b {
                continue;
            }
            let p1 = t1.reaches(*a1, *b1);
            let p2 = t2.reaches(*a2, *b2);
            if p1 != p2 {
                out.push(Certificate {
                    kind: CertificateKind::IncompatiblePair,
                    labels: vec![a.clone(), b.clone()],
                    clusters: Vec::new(),
                    sides: Sides {
                        t1: path_witness(*a1, *b1, p1),
                        t2: path_witness(*a2, *b2, p2),
                    },
                });
            }
        }
    }
    out
}

/// Triples of shared labels violating (C2). Each set of three labels is
/// reported at most once, for the first role assignment in lexicographic
/// order that violates the condition.
pub fn check_c2(t1: &ATree, t2: &ATree) -> Vec<Certificate> {
    let shared = shared_nodes(t1, t2);
    let k = shared.len();
    let table = |t: &ATree, pick: fn(&(Label, NodeId, NodeId)) -> NodeId| {
        let mut m = vec![NodeId::new(0); k * k];
        for i in 0..k {
            for j in 0..k {
                m[i * k + j] = t.meet(pick(&shared[i]), pick(&shared[j]));
            }
        }
        m
    };
    let m1 = table(t1, |s| s.1);
    let m2 = table(t2, |s| s.2);
    let mut seen = HashSet::new();
    let mut out = Vec::new();
    for a in 0..k {
        for b in 0..k {
            for c in 0..k {
                if a == b || b == c || a == c {
                    continue;
                }
                let (from1, to1) = (m1[b * k + c], m1[a * k + b]);
                if from1 == to1 || !t1.reaches(from1, to1) {
                    continue;
                }
                let (from2, to2) = (m2[a * k + b], m2[b * k + c]);
                if from2 == to2 || !t2.reaches(from2, to2) {
                    continue;
                }
                let mut key = [a, b, c];
                key.sort_unstable();
                if !seen.insert(key) {
                    continue;
                }
                out.push(Certificate {
                    kind: CertificateKind::IncompatibleTriple,
                    labels: vec![shared[a].0.clone(), shared[b].0.clone(), shared[c].0.clone()],
                    clusters: Vec::new(),
                    sides: Sides {
                        t1: path_witness(from1, to1, true),
                        t2: path_witness(from2, to2, true),
                    },
                });
            }
        }
    }
    out
}

/// The brute-force test: compatible iff neither (C1) nor (C2) is violated.
pub fn local_compatibility(t1: &ATree, t2: &ATree) -> Verdict {
    let mut certificates = check_c1(t1, t2);
    certificates.extend(check_c2(t1, t2));
    Verdict::new(Method::Local, certificates)
}

/// The cluster test on the trees restricted to their shared labels.
///
/// Reports every label whose smallest enclosing cluster differs (by label)
/// and then every pair of overlapping, non-nested clusters (in cluster
/// order of the first tree, then of the second).
pub fn cluster_compatibility(t1: &ATree, t2: &ATree) -> Verdict {
    let pair = common_restriction_pair(t1, t2);
    if pair.common.is_empty() {
        return Verdict::new(Method::Clusters, Vec::new());
    }
    let idx1 = ClusterIndex::new(&pair.bar1);
    let idx2 = ClusterIndex::new(&pair.bar2);
    let mut certificates = Vec::new();

    for label in &pair.common {
        let v1 = pair.bar1.node_of(label.as_str()).unwrap();
        let v2 = pair.bar2.node_of(label.as_str()).unwrap();
        if idx1.bits(v1) != idx2.bits(v2) {
            certificates.push(Certificate {
                kind: CertificateKind::SmallestClusterMismatch,
                labels: vec![label.clone()],
                clusters: vec![idx1.cluster(v1), idx2.cluster(v2)],
                sides: Sides {
                    t1: node_witness(v1),
                    t2: node_witness(v2),
                },
            });
        }
    }

    let bar2 = &pair.bar2;
    let node2: Vec<NodeId> = (0..pair.common.len())
        .map(|i| bar2.node_of(idx1.label_at(i).as_str()).unwrap())
        .collect();
    let mut stamp: Vec<usize> = vec![usize::MAX; bar2.slot_count()];
    let mut crossing: Vec<(NodeId, NodeId)> = Vec::new();
    for (round, u) in idx1.anchors().enumerate() {
        let x1 = idx1.bits(u);
        for i in x1.ones() {
            // Every cluster of the second tree meeting x1 sits on the path
            // from some label of x1 to the root.
            let mut w = Some(node2[i]);
            while let Some(v) = w {
                if stamp[v.index()] == round {
                    break;
                }
                stamp[v.index()] = round;
                if !bar2.is_unlabeled_elementary(v) {
                    let x2 = idx2.bits(v);
                    if !x1.is_subset(x2) && !x2.is_subset(x1) {
                        crossing.push((u, v));
                    }
                }
                w = bar2.parent_of(v);
            }
        }
    }

    if !crossing.is_empty() {
        let rank1 = cluster_ranks(&idx1);
        let rank2 = cluster_ranks(&idx2);
        crossing.sort_by_key(|&(u, v)| (rank1[u.index()], rank2[v.index()]));
        let mut cache1: Vec<Option<Cluster>> = vec![None; pair.bar1.slot_count()];
        let mut cache2: Vec<Option<Cluster>> = vec![None; bar2.slot_count()];
        for (u, v) in crossing {
            let x1 = idx1.bits(u);
            let x2 = idx2.bits(v);
            let both = x1.intersection(x2).next().unwrap();
            let only1 = x1.difference(x2).next().unwrap();
            let only2 = x2.difference(x1).next().unwrap();
            let c1 = cache1[u.index()].get_or_insert_with(|| idx1.cluster(u)).clone();
            let c2 = cache2[v.index()].get_or_insert_with(|| idx2.cluster(v)).clone();
            certificates.push(Certificate {
                kind: CertificateKind::ProperClusterIntersection,
                labels: [both, only1, only2]
                    .into_iter()
                    .map(|i| idx1.label_at(i).clone())
                    .collect(),
                clusters: vec![c1, c2],
                sides: Sides {
                    t1: node_witness(u),
                    t2: node_witness(v),
                },
            });
        }
    }

    Verdict::new(Method::Clusters, certificates)
}

/// Position of each anchor's cluster in size-then-lexicographic order,
/// indexed by slot.
fn cluster_ranks(idx: &ClusterIndex<'_>) -> Vec<usize> {
    let mut anchors: Vec<NodeId> = idx.anchors().collect();
    anchors.sort_by(|&a, &b| {
        let (x, y) = (idx.bits(a), idx.bits(b));
        x.count_ones(..)
            .cmp(&y.count_ones(..))
            .then_with(|| x.ones().cmp(y.ones()))
    });
    let mut rank = vec![usize::MAX; idx.tree().slot_count()];
    for (i, a) in anchors.into_iter().enumerate() {
        rank[a.index()] = i;
    }
    rank
}
