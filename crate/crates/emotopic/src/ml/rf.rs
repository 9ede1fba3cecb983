//! Random forest of Gini-split CART trees on bootstrap samples.
//!
//! Determinism contract: tree `t` draws its bootstrap from a stream seeded
//! with `derive_seed(params.seed, "rf-tree-{t}")` (see
//! [`bootstrap_indices`]) and then continues on the same stream for
//! feature sampling. When the per-split feature budget covers every
//! feature, candidates are evaluated in natural order without consuming
//! randomness, so a one-tree full-feature forest is exactly the CART tree
//! of its bootstrap.

use super::FeatureTable;
use crate::error::{Error, Result};
use crate::rng::{derive_seed, Rng};

#[derive(Debug, Clone)]
pub struct RfParams {
    pub trees: usize,
    /// `None` grows until purity.
    pub max_depth: Option<usize>,
    /// Minimum rows on each side of a split.
    pub min_leaf: usize,
    /// Candidate features per node; `None` uses ceil(sqrt(F)).
    pub features_per_split: Option<usize>,
    pub seed: u64,
}

impl RfParams {
    pub fn default_for(seed: u64) -> Self {
        RfParams {
            trees: 100,
            max_depth: None,
            min_leaf: 1,
            features_per_split: None,
            seed,
        }
    }

    fn validate(&self) -> Result<()> {
        if self.trees < 1 {
            return Err(Error::InvalidParams("forest needs >= 1 tree".into()));
        }
        if self.min_leaf < 1 {
            return Err(Error::InvalidParams("min_leaf must be >= 1".into()));
        }
        Ok(())
    }
}

#[derive(Debug, Clone)]
enum Node {
    Leaf {
        class: usize,
    },
    Split {
        feature: usize,
        threshold: f64,
        left: Box<Node>,
        right: Box<Node>,
    },
}

#[derive(Debug, Clone)]
pub struct RandomForest {
    pub class_names: Vec<String>,
    trees: Vec<Node>,
    num_classes: usize,
}

/// The bootstrap sample tree `tree` trains on: `n` draws with replacement
/// from the stream seeded with `derive_seed(seed, "rf-tree-{tree}")`.
pub fn bootstrap_indices(seed: u64, tree: usize, n: usize) -> Vec<usize> {
    let mut rng = Rng::new(derive_seed(seed, &format!("rf-tree-{tree}")));
    (0..n).map(|_| rng.below(n)).collect()
}

fn gini(counts: &[u32], total: usize) -> f64 {
    let n = total as f64;
    1.0 - counts
        .iter()
        .map(|&c| {
            let p = c as f64 / n;
            p * p
        })
        .sum::<f64>()
}

fn majority(counts: &[u32]) -> usize {
    let mut best = 0;
    for (class, &c) in counts.iter().enumerate().skip(1) {
        if c > counts[best] {
            best = class;
        }
    }
    best
}

fn class_counts(rows: &[usize], labels: &[usize], c: usize) -> Vec<u32> {
    let mut counts = vec![0u32; c];
    for &r in rows {
        counts[labels[r]] += 1;
    }
    counts
}

struct TreeBuilder<'a> {
    table: &'a FeatureTable,
    params: &'a RfParams,
    num_classes: usize,
}

impl TreeBuilder<'_> {
    fn candidate_features(&self, rng: &mut Rng) -> Vec<usize> {
        let f = self.table.num_features();
        let m = self.params.features_per_split.unwrap_or_else(|| {
            (f as f64).sqrt().ceil() as usize
        });
        if m >= f {
            return (0..f).collect();
        }
        // partial Fisher-Yates; evaluated in sampled order
        let mut pool: Vec<usize> = (0..f).collect();
        for i in 0..m {
            let j = i + rng.below(f - i);
            pool.swap(i, j);
        }
        pool.truncate(m);
        pool
    }

    fn build(&self, rows: &[usize], depth: usize, rng: &mut Rng) -> Node {
        let counts = class_counts(rows, &self.table.labels, self.num_classes);
        let leaf = Node::Leaf {
            class: majority(&counts),
        };

        let parent_gini = gini(&counts, rows.len());
        if parent_gini == 0.0
            || rows.len() < 2 * self.params.min_leaf
            || self.params.max_depth.is_some_and(|d| depth >= d)
        {
            return leaf;
        }

        // best split: minimum weighted child impurity, first strictly
        // better candidate wins (features in candidate order, thresholds
        // ascending)
        let mut best: Option<(usize, f64, f64)> = None;
        for feature in self.candidate_features(rng) {
            let mut values: Vec<f64> = rows.iter().map(|&r| self.table.rows[r][feature]).collect();
            values.sort_by(|a, b| a.partial_cmp(b).unwrap());
            values.dedup();
            for pair in values.windows(2) {
                let threshold = (pair[0] + pair[1]) / 2.0;
                let mut left_counts = vec![0u32; self.num_classes];
                let mut left_n = 0usize;
                for &r in rows {
                    if self.table.rows[r][feature] < threshold {
                        left_counts[self.table.labels[r]] += 1;
                        left_n += 1;
                    }
                }
                let right_n = rows.len() - left_n;
                if left_n < self.params.min_leaf || right_n < self.params.min_leaf {
                    continue;
                }
                let right_counts: Vec<u32> = counts
                    .iter()
                    .zip(&left_counts)
                    .map(|(&c, &l)| c - l)
                    .collect();
                let weighted = (left_n as f64 * gini(&left_counts, left_n)
                    + right_n as f64 * gini(&right_counts, right_n))
                    / rows.len() as f64;
                if best.is_none_or(|(_, _, w)| weighted < w) {
                    best = Some((feature, threshold, weighted));
                }
            }
        }

        match best {
            Some((feature, threshold, weighted)) if weighted < parent_gini => {
                let (left_rows, right_rows): (Vec<usize>, Vec<usize>) = rows
                    .iter()
                    .partition(|&&r| self.table.rows[r][feature] < threshold);
                Node::Split {
                    feature,
                    threshold,
                    left: Box::new(self.build(&left_rows, depth + 1, rng)),
                    right: Box::new(self.build(&right_rows, depth + 1, rng)),
                }
            }
            _ => leaf,
        }
    }
}

/// Train the forest: one Gini CART tree per bootstrap sample.
pub fn train_rf(table: &FeatureTable, params: &RfParams) -> Result<RandomForest> {
    params.validate()?;
    if table.rows.is_empty() {
        return Err(Error::EmptyTable);
    }

    let num_classes = table.class_names.len();
    let builder = TreeBuilder {
        table,
        params,
        num_classes,
    };

    let n = table.num_rows();
    let mut trees = Vec::with_capacity(params.trees);
    for t in 0..params.trees {
        let mut rng = Rng::new(derive_seed(params.seed, &format!("rf-tree-{t}")));
        let sample: Vec<usize> = (0..n).map(|_| rng.below(n)).collect();
        trees.push(builder.build(&sample, 0, &mut rng));
    }

    Ok(RandomForest {
        class_names: table.class_names.clone(),
        trees,
        num_classes,
    })
}

fn route(node: &Node, x: &[f64]) -> usize {
    match node {
        Node::Leaf { class } => *class,
        Node::Split {
            feature,
            threshold,
            left,
            right,
        } => {
            if x[*feature] < *threshold {
                route(left, x)
            } else {
                route(right, x)
            }
        }
    }
}

impl RandomForest {
    /// Majority vote over trees; ties break toward the earlier class.
    pub fn predict(&self, x: &[f64]) -> usize {
        let mut votes = vec![0u32; self.num_classes];
        for tree in &self.trees {
            votes[route(tree, x)] += 1;
        }
        majority(&votes)
    }
}
