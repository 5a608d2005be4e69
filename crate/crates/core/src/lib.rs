//! Ancestral compatibility of semi-labeled phylogenetic trees.
//!
//! Two trees whose labels may sit on inner nodes as well as leaves are
//! ancestrally compatible when some tree displays both. This crate decides
//! compatibility with two independent procedures, explains negative answers
//! with small certificates, and builds the join supertree together with the
//! embeddings of both inputs when the answer is positive.

pub mod batch;
pub mod cluster;
pub mod compat;
pub mod embedding;
pub mod join;
pub mod newick;
pub mod report;
pub mod restriction;
pub mod tree;

pub use batch::{run_batch, BatchError, BatchReport, CorpusTree, PairRecord, TreeRecord};
pub use cluster::{cluster_of, cluster_representation, Cluster, ClusterClass, ClusterRepresentation};
pub use compat::{
    check, check_c1, check_c2, cluster_compatibility, decide, local_compatibility, Certificate,
    CertificateKind, Decision, Method, MethodChoice, MethodDisagreement, Sides, Verdict, Witness,
};
pub use embedding::{
    ancestrally_displays, display_embedding, verify_embedding, DomainMismatch, EmbeddingMap,
    EmbeddingViolation,
};
pub use join::{join, join_same_labels, CoreCluster, JoinError, JoinResult};
pub use newick::{node_paths, parse_newick, serialize_newick, ChildOrder, NewickError};
pub use report::{embeddings_document, EmbeddingsDocument};
pub use restriction::{common_restriction_pair, normalize_semilabeled, restrict, RestrictedPair};
pub use tree::{build_tree, ATree, Label, NodeId, TreeError};
