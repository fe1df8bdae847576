//! Random forest of Gini classification trees grown on bootstrap samples
//! with per-node random feature subsets.

mod grid;
mod tree;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

pub use grid::{grid_search, stratified_folds, GridResult, GridSpec, Hyperparameters};
pub use tree::{best_split, gini_impurity, grow_tree, GrowConfig, SplitChoice, TreeNode};

use crate::error::{Error, Result};
use crate::features::{schema_hash, FEATURE_COUNT};
use crate::rng::child_seed;

pub const DEFAULT_TREES: usize = 100;
pub const DEFAULT_SEED: u64 = 42;
pub const DEFAULT_THRESHOLD: f64 = 0.5;

/// ceil(sqrt(n_features)).
pub fn default_subset_size(n_features: usize) -> usize {
    let mut k = (n_features as f64).sqrt().floor() as usize;
    while k * k < n_features {
        k += 1;
    }
    k.max(1)
}

#[derive(Debug, Clone, PartialEq)]
pub struct ForestParams {
    pub n_estimators: usize,
    pub max_depth: Option<usize>,
    /// Defaults to ceil(sqrt(n_features)) when `None`.
    pub feature_subset_size: Option<usize>,
    pub seed: u64,
    /// Draw n rows with replacement per tree; when false every tree sees
    /// the full training set once.
    pub bootstrap: bool,
    pub threshold: f64,
    /// Worker threads for tree building; results do not depend on it.
    pub jobs: usize,
}

impl Default for ForestParams {
    fn default() -> Self {
        ForestParams {
            n_estimators: DEFAULT_TREES,
            max_depth: None,
            feature_subset_size: None,
            seed: DEFAULT_SEED,
            bootstrap: true,
            threshold: DEFAULT_THRESHOLD,
            jobs: 1,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ForestModel {
    pub trees: Vec<TreeNode>,
    pub n_estimators: usize,
    pub n_features: usize,
    pub feature_subset_size: usize,
    pub max_depth: Option<usize>,
    pub bootstrap: bool,
    pub seed: u64,
    pub schema_hash: u64,
    pub threshold: f64,
}

/// Run `f` on a dedicated pool of `jobs` threads (at least one), so that
/// parallel iterators inside it never spill onto the global pool.
pub(crate) fn with_jobs<T: Send>(jobs: usize, f: impl FnOnce() -> T + Send) -> T {
    match rayon::ThreadPoolBuilder::new()
        .num_threads(jobs.max(1))
        .build()
    {
        Ok(pool) => pool.install(f),
        Err(_) => f(),
    }
}

pub fn fit_forest<R: AsRef<[f64]> + Sync>(
    rows: &[R],
    labels: &[u8],
    params: &ForestParams,
) -> Result<ForestModel> {
    if rows.len() != labels.len() {
        return Err(Error::InvalidInput(format!(
            "{} rows but {} labels",
            rows.len(),
            labels.len()
        )));
    }
    if rows.len() < 2 {
        return Err(Error::Fit("need at least two rows".into()));
    }
    if labels.iter().any(|&l| l > 1) {
        return Err(Error::InvalidInput("labels must be 0 or 1".into()));
    }
    if !(labels.contains(&0) && labels.contains(&1)) {
        return Err(Error::Fit("training data contains a single class".into()));
    }
    if params.n_estimators == 0 {
        return Err(Error::InvalidInput(
            "n_estimators must be at least 1".into(),
        ));
    }
    let n_features = rows[0].as_ref().len();
    if n_features == 0 || rows.iter().any(|r| r.as_ref().len() != n_features) {
        return Err(Error::InvalidInput(
            "rows must share a non-zero width".into(),
        ));
    }
    let subset = params
        .feature_subset_size
        .unwrap_or_else(|| default_subset_size(n_features));
    if subset == 0 || subset > n_features {
        return Err(Error::InvalidInput(format!(
            "feature subset size {subset} outside 1..={n_features}"
        )));
    }
    let config = GrowConfig {
        max_depth: params.max_depth,
        feature_subset_size: subset,
    };
    let n = rows.len();
    let build = |t: usize| {
        let mut rng = ChaCha8Rng::seed_from_u64(child_seed(params.seed, t as u64));
        let sample: Vec<usize> = if params.bootstrap {
            (0..n).map(|_| rng.random_range(0..n)).collect()
        } else {
            (0..n).collect()
        };
        grow_tree(rows, labels, &sample, &config, &mut rng)
    };
    let trees = if params.jobs <= 1 {
        (0..params.n_estimators).map(build).collect()
    } else {
        with_jobs(params.jobs, || {
            (0..params.n_estimators)
                .into_par_iter()
                .map(build)
                .collect()
        })
    };
    Ok(ForestModel {
        trees,
        n_estimators: params.n_estimators,
        n_features,
        feature_subset_size: subset,
        max_depth: params.max_depth,
        bootstrap: params.bootstrap,
        seed: params.seed,
        schema_hash: if n_features == FEATURE_COUNT {
            schema_hash()
        } else {
            0
        },
        threshold: params.threshold,
    })
}

impl ForestModel {
    /// Mean over trees of the class-1 fraction in the reached leaf.
    pub fn predict_proba(&self, x: &[f64]) -> f64 {
        let total: f64 = self.trees.iter().map(|t| t.predict_proba(x)).sum();
        total / self.trees.len() as f64
    }

    /// 1 when the probability strictly exceeds the threshold.
    pub fn predict(&self, x: &[f64]) -> u8 {
        u8::from(self.predict_proba(x) > self.threshold)
    }

    /// Mean decrease in impurity, normalized to sum to 1. A forest without
    /// any split reports all zeros.
    pub fn feature_importances(&self) -> Vec<f64> {
        let mut totals = vec![0.0; self.n_features];
        for tree in &self.trees {
            let root = tree.counts();
            let n_root = (root[0] + root[1]) as f64;
            let mut per_tree = vec![0.0; self.n_features];
            accumulate_importance(tree, n_root, &mut per_tree);
            for (t, p) in totals.iter_mut().zip(per_tree) {
                *t += p;
            }
        }
        let n_trees = self.trees.len().max(1) as f64;
        totals.iter_mut().for_each(|t| *t /= n_trees);
        let sum: f64 = totals.iter().sum();
        if sum > 0.0 {
            totals.iter_mut().for_each(|t| *t /= sum);
        }
        totals
    }
}

fn accumulate_importance(node: &TreeNode, n_root: f64, out: &mut [f64]) {
    if let TreeNode::Split {
        feature,
        left,
        right,
        ..
    } = node
    {
        let (c, l, r) = (node.counts(), left.counts(), right.counts());
        let size = |c: [u64; 2]| (c[0] + c[1]) as f64;
        let decrease =
            size(c) * gini_impurity(c) - size(l) * gini_impurity(l) - size(r) * gini_impurity(r);
        out[*feature] += decrease / n_root;
        accumulate_importance(left, n_root, out);
        accumulate_importance(right, n_root, out);
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand_distr::{Distribution, Normal};

    fn stump_model(trees: Vec<TreeNode>, n_features: usize) -> ForestModel {
        ForestModel {
            n_estimators: trees.len(),
            trees,
            n_features,
            feature_subset_size: 1,
            max_depth: None,
            bootstrap: true,
            seed: 0,
            schema_hash: 0,
            threshold: 0.5,
        }
    }

    fn gaussian_blobs(n: usize, seed: u64) -> (Vec<Vec<f64>>, Vec<u8>) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let noise = Normal::new(0.0, 1.0).unwrap();
        let mut rows = Vec::new();
        let mut labels = Vec::new();
        for i in 0..n {
            let y = (i % 2) as u8;
            let shift = if y == 1 { 1.5 } else { -1.5 };
            rows.push((0..5).map(|_| shift + noise.sample(&mut rng)).collect());
            labels.push(y);
        }
        (rows, labels)
    }

    #[test]
    fn subset_default() {
        assert_eq!(default_subset_size(68), 9);
        assert_eq!(default_subset_size(64), 8);
        assert_eq!(default_subset_size(2), 2);
        assert_eq!(default_subset_size(1), 1);
    }

    #[test]
    fn deterministic_and_records_metadata() {
        let (rows, labels) = gaussian_blobs(200, 3);
        let params = ForestParams {
            n_estimators: 100,
            seed: 42,
            ..Default::default()
        };
        let a = fit_forest(&rows, &labels, &params).unwrap();
        let b = fit_forest(&rows, &labels, &params).unwrap();
        assert_eq!(a, b);
        assert_eq!((a.n_estimators, a.seed, a.trees.len()), (100, 42, 100));
        let parallel = fit_forest(&rows, &labels, &ForestParams { jobs: 4, ..params }).unwrap();
        assert_eq!(a, parallel);
    }

    #[test]
    fn fits_gaussian_training_data() {
        let (rows, labels) = gaussian_blobs(1000, 11);
        let model = fit_forest(
            &rows,
            &labels,
            &ForestParams {
                n_estimators: 30,
                ..Default::default()
            },
        )
        .unwrap();
        let correct = rows
            .iter()
            .zip(&labels)
            .filter(|(x, &y)| model.predict(x) == y)
            .count();
        assert!(correct as f64 / 1000.0 >= 0.99, "{correct}");
    }

    #[test]
    fn fit_errors() {
        let rows = vec![vec![1.0], vec![2.0]];
        assert!(matches!(
            fit_forest(&rows, &[1, 1], &ForestParams::default()),
            Err(Error::Fit(_))
        ));
        assert!(fit_forest(&rows[..1], &[1], &ForestParams::default()).is_err());
        let bad = ForestParams {
            feature_subset_size: Some(2),
            ..Default::default()
        };
        assert!(fit_forest(&rows, &[0, 1], &bad).is_err());
    }

    #[test]
    fn probability_and_tie_rule() {
        let class1 = TreeNode::split(0, 0.0, TreeNode::leaf(3, 0), TreeNode::leaf(0, 2));
        let class0 = TreeNode::split(0, 0.0, TreeNode::leaf(0, 3), TreeNode::leaf(2, 0));
        let one = stump_model(vec![class1.clone()], 1);
        assert_eq!(one.predict_proba(&[1.0]), 1.0);

        let three = stump_model(vec![class1.clone(), class1.clone(), class0.clone()], 1);
        assert!((three.predict_proba(&[1.0]) - 2.0 / 3.0).abs() < 1e-15);
        assert_eq!(three.predict(&[1.0]), 1);

        let tie = stump_model(vec![class1.clone(), class0.clone()], 1);
        assert_eq!(tie.predict_proba(&[1.0]), 0.5);
        assert_eq!(tie.predict(&[1.0]), 0);
    }

    #[test]
    fn flipping_one_pure_vote_moves_probability_by_one_over_n() {
        let up = TreeNode::split(0, 0.0, TreeNode::leaf(1, 0), TreeNode::leaf(0, 1));
        let down = TreeNode::split(0, 0.0, TreeNode::leaf(0, 1), TreeNode::leaf(1, 0));
        let mut trees = vec![up.clone(); 7];
        let before = stump_model(trees.clone(), 1).predict_proba(&[1.0]);
        trees[3] = down;
        let after = stump_model(trees, 1).predict_proba(&[1.0]);
        assert!((before - after - 1.0 / 7.0).abs() < 1e-15);
    }

    #[test]
    fn importances() {
        let on7 = TreeNode::split(7, 0.0, TreeNode::leaf(4, 0), TreeNode::leaf(0, 4));
        let imp = stump_model(vec![on7], 10).feature_importances();
        assert_eq!(imp[7], 1.0);
        assert_eq!(imp.iter().sum::<f64>(), 1.0);

        let leaves = stump_model(vec![TreeNode::leaf(3, 1), TreeNode::leaf(0, 2)], 4);
        assert_eq!(leaves.feature_importances(), vec![0.0; 4]);

        let on0 = TreeNode::split(0, 0.0, TreeNode::leaf(2, 0), TreeNode::leaf(0, 2));
        let on1 = TreeNode::split(1, 0.0, TreeNode::leaf(2, 0), TreeNode::leaf(0, 2));
        let imp = stump_model(vec![on0, on1], 3).feature_importances();
        assert_eq!(imp, vec![0.5, 0.5, 0.0]);
    }

    #[test]
    fn probabilities_are_bounded() {
        let (rows, labels) = gaussian_blobs(100, 5);
        let model = fit_forest(
            &rows,
            &labels,
            &ForestParams {
                n_estimators: 10,
                ..Default::default()
            },
        )
        .unwrap();
        let (probe, _) = gaussian_blobs(50, 99);
        for x in &probe {
            let p = model.predict_proba(x);
            assert!((0.0..=1.0).contains(&p));
        }
    }
}
