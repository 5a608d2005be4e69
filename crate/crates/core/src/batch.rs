//! All-pairs compatibility over a corpus of trees.

use std::collections::BTreeMap;

use rayon::prelude::*;
use serde::Serialize;
use thiserror::Error;

use crate::compat::{decide, CertificateKind, MethodChoice};
use crate::tree::ATree;

/// A tree together with where it came from.
#[derive(Debug, Clone)]
pub struct CorpusTree {
    pub source: String,
    /// Position of the tree within its source file.
    pub index_in_source: usize,
    pub tree: ATree,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TreeRecord {
    pub index: usize,
    pub source: String,
    pub index_in_source: usize,
    pub n_labels: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PairRecord {
    pub i: usize,
    pub j: usize,
    pub compatible: bool,
    /// Number of certificates of each kind; kinds that did not occur are
    /// omitted.
    pub certificates: BTreeMap<CertificateKind, usize>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BatchReport {
    pub n_trees: usize,
    pub n_pairs: usize,
    pub n_incompatible: usize,
    pub incompatibility_ratio: f64,
    pub method: MethodChoice,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub generated_at: Option<String>,
    pub trees: Vec<TreeRecord>,
    pub pairs: Vec<PairRecord>,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum BatchError {
    #[error("a batch needs at least two trees, got {0}")]
    TooFewTrees(usize),
    #[error("methods disagree on pair ({i}, {j}): {reason}")]
    MethodDisagreement { i: usize, j: usize, reason: String },
    #[error("cannot start worker pool: {0}")]
    Pool(String),
}

/// Checks every unordered pair of `trees`. `jobs` bounds the number of worker
/// threads (default: one per core). Records are ordered by pair index.
pub fn run_batch(
    trees: &[CorpusTree],
    method: MethodChoice,
    jobs: Option<usize>,
) -> Result<BatchReport, BatchError> {
    let n = trees.len();
    if n < 2 {
        return Err(BatchError::TooFewTrees(n));
    }
    let pairs: Vec<(usize, usize)> = (0..n)
        .flat_map(|i| (i + 1..n).map(move |j| (i, j)))
        .collect();
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(jobs.unwrap_or(0))
        .build()
        .map_err(|e| BatchError::Pool(e.to_string()))?;
    let records: Vec<PairRecord> = pool.install(|| {
        pairs
            .par_iter()
            .map(|&(i, j)| {
                let d = decide(&trees[i].tree, &trees[j].tree, method).map_err(|e| {
                    BatchError::MethodDisagreement {
                        i,
                        j,
                        reason: e.to_string(),
                    }
                })?;
                let mut certificates = BTreeMap::new();
                for c in &d.certificates {
                    *certificates.entry(c.kind).or_insert(0) += 1;
                }
                Ok(PairRecord {
                    i,
                    j,
                    compatible: d.compatible,
                    certificates,
                })
            })
            .collect::<Result<_, BatchError>>()
    })?;

    let n_incompatible = records.iter().filter(|r| !r.compatible).count();
    Ok(BatchReport {
        n_trees: n,
        n_pairs: records.len(),
        n_incompatible,
        incompatibility_ratio: n_incompatible as f64 / records.len() as f64,
        method,
        generated_at: None,
        trees: trees
            .iter()
            .enumerate()
            .map(|(index, t)| TreeRecord {
                index,
                source: t.source.clone(),
                index_in_source: t.index_in_source,
                n_labels: t.tree.label_set().len(),
            })
            .collect(),
        pairs: records,
    })
}

impl BatchReport {
    /// A short human-readable summary.
    pub fn summary(&self) -> String {
        format!(
            "trees: {}\npairs: {}\nincompatible: {}\nincompatibility ratio: {:.3}%\n",
            self.n_trees,
            self.n_pairs,
            self.n_incompatible,
            100.0 * self.incompatibility_ratio
        )
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::newick::parse_newick;

    fn corpus(texts: &[&str]) -> Vec<CorpusTree> {
        texts
            .iter()
            .enumerate()
            .map(|(i, s)| CorpusTree {
                source: format!("t{i}"),
                index_in_source: 0,
                tree: parse_newick(s).unwrap().remove(0),
            })
            .collect()
    }

    #[test]
    fn three_tree_corpus() {
        let trees = corpus(&["((A,B),C);", "(A,B,C);", "((A,C),B);"]);
        let report = run_batch(&trees, MethodChoice::Both, Some(2)).unwrap();
        assert_eq!(report.n_pairs, 3);
        let verdicts: Vec<_> = report.pairs.iter().map(|p| (p.i, p.j, p.compatible)).collect();
        assert_eq!(verdicts, vec![(0, 1, true), (0, 2, false), (1, 2, true)]);
        assert_eq!(report.n_incompatible, 1);
        assert!(report.summary().contains("33.333%"));
    }

    #[test]
    fn too_few_trees() {
        let trees = corpus(&["(A,B);"]);
        assert_eq!(
            run_batch(&trees, MethodChoice::Clusters, None).unwrap_err(),
            BatchError::TooFewTrees(1)
        );
        assert_eq!(
            run_batch(&[], MethodChoice::Clusters, None).unwrap_err(),
            BatchError::TooFewTrees(0)
        );
    }
}
