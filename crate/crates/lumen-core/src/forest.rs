//! Multi-label random forest with Gini impurity splitting and
//! mean-decrease-in-impurity feature importance.
//!
//! The default reduction is binary relevance: one forest per label, all
//! labels sharing the same bootstrap samples. A multi-output variant trains
//! a single forest whose leaves hold per-label distributions.

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::seed::{derive, stream};

/// Row-major feature matrix with fixed column names.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FeatureMatrix {
    pub rows: Vec<Vec<f64>>,
    pub feature_names: Vec<String>,
}

impl FeatureMatrix {
    pub fn new(rows: Vec<Vec<f64>>, feature_names: Vec<String>) -> Result<Self> {
        let f = feature_names.len();
        let mut seen = std::collections::HashSet::new();
        for name in &feature_names {
            if !seen.insert(name) {
                return Err(Error::Config(format!("duplicate feature name {name}")));
            }
        }
        for (i, row) in rows.iter().enumerate() {
            if row.len() != f {
                return Err(Error::FeatureCountMismatch {
                    expected: f,
                    got: row.len(),
                });
            }
            if row.iter().any(|v| !v.is_finite()) {
                return Err(Error::Config(format!("non-finite feature value in row {i}")));
            }
        }
        Ok(FeatureMatrix {
            rows,
            feature_names,
        })
    }

    pub fn num_rows(&self) -> usize {
        self.rows.len()
    }

    pub fn num_features(&self) -> usize {
        self.feature_names.len()
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ForestParams {
    pub n_trees: usize,
    pub max_depth: Option<usize>,
    pub min_samples_leaf: usize,
    /// Features sampled per split; defaults to ceil(sqrt(F)).
    pub max_features: Option<usize>,
    /// Probability at or above which a bit turns on.
    pub threshold: f64,
    /// Train one joint forest instead of one forest per label.
    pub multi_output: bool,
    /// Worker threads for tree training; 1 keeps everything serial. An
    /// execution knob only: results are identical for any value, so it is
    /// excluded from serialized artifacts.
    #[serde(skip_serializing, default = "serial_jobs")]
    pub n_jobs: usize,
}

fn serial_jobs() -> usize {
    1
}

impl Default for ForestParams {
    fn default() -> Self {
        ForestParams {
            n_trees: 200,
            max_depth: None,
            min_samples_leaf: 1,
            max_features: None,
            threshold: 0.5,
            multi_output: false,
            n_jobs: 1,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
enum Node {
    Leaf {
        /// Positive fraction per predicted label.
        dist: Vec<f64>,
    },
    Split {
        feature: usize,
        threshold: f64,
        left: u32,
        right: u32,
    },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
struct Tree {
    nodes: Vec<Node>,
}

impl Tree {
    fn leaf_dist<'a>(&'a self, row: &[f64]) -> &'a [f64] {
        let mut at = 0usize;
        loop {
            match &self.nodes[at] {
                Node::Leaf { dist } => return dist,
                Node::Split {
                    feature,
                    threshold,
                    left,
                    right,
                } => {
                    at = if row[*feature] <= *threshold {
                        *left as usize
                    } else {
                        *right as usize
                    };
                }
            }
        }
    }

    fn has_split(&self) -> bool {
        self.nodes.iter().any(|n| matches!(n, Node::Split { .. }))
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
enum Trees {
    /// One forest per label, `L x n_trees`.
    PerLabel(Vec<Vec<Tree>>),
    /// One joint forest with vector leaves.
    Joint(Vec<Tree>),
}

/// A trained forest plus its normalized feature importances.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ForestModel {
    trees: Trees,
    pub num_labels: usize,
    pub feature_names: Vec<String>,
    pub params: ForestParams,
    pub seed: u64,
    /// Mean decrease in Gini impurity per feature, normalized to sum to one
    /// when any split exists; all zeros otherwise.
    pub importances: Vec<f64>,
}

/// Per-document label bits and probabilities.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PredictionSet {
    pub bits: Vec<Vec<bool>>,
    pub probs: Vec<Vec<f64>>,
    pub threshold: f64,
}

impl PredictionSet {
    pub fn from_probs(probs: Vec<Vec<f64>>, threshold: f64) -> Self {
        let bits = probs
            .iter()
            .map(|row| row.iter().map(|&p| p >= threshold).collect())
            .collect();
        PredictionSet {
            bits,
            probs,
            threshold,
        }
    }
}

fn gini(pos: f64, total: f64) -> f64 {
    if total <= 0.0 {
        return 0.0;
    }
    let p = pos / total;
    2.0 * p * (1.0 - p)
}

/// Sum of per-label Gini impurities for a node.
fn node_impurity(pos: &[f64], total: f64) -> f64 {
    pos.iter().map(|&p| gini(p, total)).sum()
}

struct TreeBuilder<'a> {
    x: &'a FeatureMatrix,
    /// Label columns this tree predicts (one for binary relevance).
    y: Vec<&'a [bool]>,
    max_features: usize,
    min_samples_leaf: usize,
    max_depth: Option<usize>,
    rng: ChaCha8Rng,
    nodes: Vec<Node>,
    /// Accumulated impurity decrease per feature, weighted by node size.
    importance: Vec<f64>,
    n_root: f64,
}

impl<'a> TreeBuilder<'a> {
    fn build(&mut self, samples: Vec<usize>, depth: usize) -> u32 {
        let n = samples.len() as f64;
        let pos: Vec<f64> = self
            .y
            .iter()
            .map(|col| samples.iter().filter(|&&i| col[i]).count() as f64)
            .collect();
        let impurity = node_impurity(&pos, n);
        let as_leaf = |nodes: &mut Vec<Node>| -> u32 {
            let dist = pos.iter().map(|&p| p / n).collect();
            nodes.push(Node::Leaf { dist });
            (nodes.len() - 1) as u32
        };
        if impurity == 0.0
            || samples.len() < 2 * self.min_samples_leaf.max(1)
            || self.max_depth.map(|d| depth >= d).unwrap_or(false)
        {
            return as_leaf(&mut self.nodes);
        }
        let Some((feature, threshold, gain)) = self.best_split(&samples, impurity) else {
            return as_leaf(&mut self.nodes);
        };
        let (left_samples, right_samples): (Vec<usize>, Vec<usize>) = samples
            .iter()
            .partition(|&&i| self.x.rows[i][feature] <= threshold);
        self.importance[feature] += (n / self.n_root) * gain;
        let placeholder = self.nodes.len();
        self.nodes.push(Node::Leaf { dist: Vec::new() });
        let left = self.build(left_samples, depth + 1);
        let right = self.build(right_samples, depth + 1);
        self.nodes[placeholder] = Node::Split {
            feature,
            threshold,
            left,
            right,
        };
        placeholder as u32
    }

    /// Evaluates a random feature subset and returns the best
    /// `(feature, threshold, impurity decrease)` found, if any.
    fn best_split(&mut self, samples: &[usize], parent_impurity: f64) -> Option<(usize, f64, f64)> {
        let num_features = self.x.num_features();
        let mut candidates: Vec<usize> = (0..num_features).collect();
        for i in 0..self.max_features.min(num_features) {
            let j = self.rng.gen_range(i..num_features);
            candidates.swap(i, j);
        }
        candidates.truncate(self.max_features.min(num_features));

        let n = samples.len() as f64;
        let totals: Vec<f64> = self
            .y
            .iter()
            .map(|col| samples.iter().filter(|&&i| col[i]).count() as f64)
            .collect();

        let mut best: Option<(usize, f64, f64)> = None;
        let mut sorted: Vec<usize> = Vec::with_capacity(samples.len());
        for &feature in &candidates {
            sorted.clear();
            sorted.extend_from_slice(samples);
            sorted.sort_by(|&a, &b| {
                self.x.rows[a][feature]
                    .partial_cmp(&self.x.rows[b][feature])
                    .unwrap()
            });
            let mut left_pos = vec![0.0f64; self.y.len()];
            for split in 1..sorted.len() {
                let prev = sorted[split - 1];
                for (l, col) in self.y.iter().enumerate() {
                    if col[prev] {
                        left_pos[l] += 1.0;
                    }
                }
                let a = self.x.rows[prev][feature];
                let b = self.x.rows[sorted[split]][feature];
                if a == b {
                    continue;
                }
                let n_left = split as f64;
                let n_right = n - n_left;
                if (n_left as usize) < self.min_samples_leaf
                    || (n_right as usize) < self.min_samples_leaf
                {
                    continue;
                }
                let mut child_impurity = 0.0;
                for (l, &lp) in left_pos.iter().enumerate() {
                    child_impurity += n_left / n * gini(lp, n_left);
                    child_impurity += n_right / n * gini(totals[l] - lp, n_right);
                }
                let gain = parent_impurity - child_impurity;
                if gain > 1e-12 && best.map(|(_, _, g)| gain > g).unwrap_or(true) {
                    best = Some((feature, a + (b - a) / 2.0, gain));
                }
            }
        }
        best
    }
}

fn bootstrap_sample(n: usize, rng: &mut ChaCha8Rng) -> Vec<usize> {
    (0..n).map(|_| rng.gen_range(0..n)).collect()
}

fn default_max_features(f: usize) -> usize {
    (f as f64).sqrt().ceil() as usize
}

struct TreeJob<'a> {
    x: &'a FeatureMatrix,
    y: Vec<&'a [bool]>,
    params: &'a ForestParams,
    bootstrap_seed: u64,
    split_seed: u64,
}

fn train_tree(job: TreeJob<'_>) -> (Tree, Vec<f64>) {
    let n = job.x.num_rows();
    let mut boot_rng = ChaCha8Rng::seed_from_u64(job.bootstrap_seed);
    let samples = bootstrap_sample(n, &mut boot_rng);
    let mut builder = TreeBuilder {
        x: job.x,
        max_features: job
            .params
            .max_features
            .unwrap_or_else(|| default_max_features(job.x.num_features())),
        min_samples_leaf: job.params.min_samples_leaf.max(1),
        max_depth: job.params.max_depth,
        rng: ChaCha8Rng::seed_from_u64(job.split_seed),
        nodes: Vec::new(),
        importance: vec![0.0; job.x.num_features()],
        n_root: samples.len() as f64,
        y: job.y,
    };
    builder.build(samples, 0);
    (
        Tree {
            nodes: builder.nodes,
        },
        builder.importance,
    )
}

fn run_jobs<'a>(jobs: Vec<TreeJob<'a>>, n_jobs: usize) -> Vec<(Tree, Vec<f64>)> {
    if n_jobs > 1 {
        let pool = rayon::ThreadPoolBuilder::new()
            .num_threads(n_jobs)
            .build()
            .expect("thread pool");
        pool.install(|| jobs.into_par_iter().map(train_tree).collect())
    } else {
        jobs.into_iter().map(train_tree).collect()
    }
}

/// Trains a multi-label forest. `labels` is row-major `D x L`; every tree is
/// grown on a bootstrap sample of the rows. Deterministic for a given seed
/// regardless of `n_jobs`.
pub fn train_forest(
    x: &FeatureMatrix,
    labels: &[Vec<bool>],
    label_count: usize,
    params: &ForestParams,
    seed: u64,
) -> Result<ForestModel> {
    if x.num_rows() == 0 {
        return Err(Error::EmptyCorpus);
    }
    if params.n_trees < 1 {
        return Err(Error::Config("n_trees must be at least 1".into()));
    }
    if labels.len() != x.num_rows() {
        return Err(Error::SchemaMismatch(format!(
            "{} feature rows but {} label rows",
            x.num_rows(),
            labels.len()
        )));
    }
    if labels.iter().any(|row| row.len() != label_count) {
        return Err(Error::SchemaMismatch(
            "label row width differs from schema".into(),
        ));
    }
    // Column-major copies so trees can borrow label slices.
    let columns: Vec<Vec<bool>> = (0..label_count)
        .map(|l| labels.iter().map(|row| row[l]).collect())
        .collect();

    let mut importance_sum = vec![0.0f64; x.num_features()];
    let trees = if params.multi_output {
        let jobs: Vec<TreeJob> = (0..params.n_trees)
            .map(|j| TreeJob {
                x,
                y: columns.iter().map(|c| c.as_slice()).collect(),
                params,
                bootstrap_seed: derive(seed, stream::FOREST_BOOTSTRAP ^ (j as u64) << 8),
                split_seed: derive(seed, stream::FOREST_SPLITS ^ (j as u64) << 8),
            })
            .collect();
        let results = run_jobs(jobs, params.n_jobs);
        let mut trees = Vec::with_capacity(params.n_trees);
        for (tree, imp) in results {
            for (a, b) in importance_sum.iter_mut().zip(&imp) {
                *a += b;
            }
            trees.push(tree);
        }
        Trees::Joint(trees)
    } else {
        let mut per_label = Vec::with_capacity(label_count);
        for (l, column) in columns.iter().enumerate() {
            let jobs: Vec<TreeJob> = (0..params.n_trees)
                .map(|j| TreeJob {
                    x,
                    y: vec![column.as_slice()],
                    params,
                    // Bootstrap seeds depend only on the tree index, so all
                    // labels see the same resamples.
                    bootstrap_seed: derive(seed, stream::FOREST_BOOTSTRAP ^ (j as u64) << 8),
                    split_seed: derive(
                        seed,
                        stream::FOREST_SPLITS ^ ((l as u64) << 32 | (j as u64) << 8),
                    ),
                })
                .collect();
            let results = run_jobs(jobs, params.n_jobs);
            let mut trees = Vec::with_capacity(params.n_trees);
            for (tree, imp) in results {
                for (a, b) in importance_sum.iter_mut().zip(&imp) {
                    *a += b;
                }
                trees.push(tree);
            }
            per_label.push(trees);
        }
        Trees::PerLabel(per_label)
    };

    let total: f64 = importance_sum.iter().sum();
    let importances = if total > 0.0 {
        importance_sum.iter().map(|v| v / total).collect()
    } else {
        importance_sum
    };
    Ok(ForestModel {
        trees,
        num_labels: label_count,
        feature_names: x.feature_names.clone(),
        params: params.clone(),
        seed,
        importances,
    })
}

impl ForestModel {
    /// Per-label probabilities (mean of tree leaf fractions) and thresholded
    /// bits for each row.
    pub fn predict(&self, x: &FeatureMatrix) -> Result<PredictionSet> {
        if x.num_features() != self.feature_names.len() {
            return Err(Error::FeatureCountMismatch {
                expected: self.feature_names.len(),
                got: x.num_features(),
            });
        }
        let probs = x.rows.iter().map(|row| self.predict_row(row)).collect();
        Ok(PredictionSet::from_probs(probs, self.params.threshold))
    }

    pub fn predict_row(&self, row: &[f64]) -> Vec<f64> {
        match &self.trees {
            Trees::PerLabel(per_label) => per_label
                .iter()
                .map(|trees| {
                    trees.iter().map(|t| t.leaf_dist(row)[0]).sum::<f64>() / trees.len() as f64
                })
                .collect(),
            Trees::Joint(trees) => {
                let mut acc = vec![0.0f64; self.num_labels];
                for tree in trees {
                    for (a, b) in acc.iter_mut().zip(tree.leaf_dist(row)) {
                        *a += b;
                    }
                }
                for a in &mut acc {
                    *a /= trees.len() as f64;
                }
                acc
            }
        }
    }

    pub fn has_any_split(&self) -> bool {
        match &self.trees {
            Trees::PerLabel(per_label) => per_label.iter().flatten().any(Tree::has_split),
            Trees::Joint(trees) => trees.iter().any(Tree::has_split),
        }
    }

    /// Importances paired with feature names, descending, ties broken by
    /// column order.
    pub fn importance_report(&self) -> Vec<(String, f64)> {
        let mut ranked: Vec<(usize, f64)> = self.importances.iter().copied().enumerate().collect();
        ranked.sort_by(|a, b| b.1.partial_cmp(&a.1).unwrap().then(a.0.cmp(&b.0)));
        ranked
            .into_iter()
            .map(|(i, v)| (self.feature_names[i].clone(), v))
            .collect()
    }
}
