use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use super::{default_subset_size, fit_forest, ForestParams};
use crate::error::{Error, Result};
use crate::rng::child_seed;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Hyperparameters {
    pub n_estimators: usize,
    pub max_depth: Option<usize>,
    pub feature_subset_size: usize,
}

impl Hyperparameters {
    /// Preference order among equally accurate cells: fewer trees, then
    /// shallower (unlimited counts as deepest), then fewer features.
    fn simplicity_key(&self) -> (usize, usize, usize) {
        (
            self.n_estimators,
            self.max_depth.unwrap_or(usize::MAX),
            self.feature_subset_size,
        )
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct GridSpec {
    pub n_estimators: Vec<usize>,
    pub max_depth: Vec<Option<usize>>,
    pub feature_subset_size: Vec<usize>,
    pub folds: usize,
    pub seed: u64,
    pub jobs: usize,
}

impl GridSpec {
    /// Trees {50, 100, 200}, depth {unlimited, 10, 20}, sqrt-sized feature
    /// subsets, 5 folds.
    pub fn default_for(n_features: usize, seed: u64) -> Self {
        GridSpec {
            n_estimators: vec![50, 100, 200],
            max_depth: vec![None, Some(10), Some(20)],
            feature_subset_size: vec![default_subset_size(n_features)],
            folds: 5,
            seed,
            jobs: 1,
        }
    }

    fn cells(&self) -> Vec<Hyperparameters> {
        let mut out = Vec::new();
        for &n_estimators in &self.n_estimators {
            for &max_depth in &self.max_depth {
                for &feature_subset_size in &self.feature_subset_size {
                    out.push(Hyperparameters {
                        n_estimators,
                        max_depth,
                        feature_subset_size,
                    });
                }
            }
        }
        out
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct GridResult {
    pub best: Hyperparameters,
    pub best_accuracy: f64,
    /// Mean cross-validated accuracy of every cell, in grid order.
    pub cells: Vec<(Hyperparameters, f64)>,
}

/// Assign every row to one of `k` folds, class by class, so each fold
/// keeps the class balance. Returns the fold index of each row.
pub fn stratified_folds(labels: &[u8], k: usize, seed: u64) -> Result<Vec<usize>> {
    if k < 2 {
        return Err(Error::InvalidInput("need at least two folds".into()));
    }
    let mut fold = vec![0; labels.len()];
    for class in [0u8, 1] {
        let mut members: Vec<usize> = (0..labels.len()).filter(|&i| labels[i] == class).collect();
        if members.len() < k {
            return Err(Error::InvalidInput(format!(
                "class {class} has {} rows, fewer than {k} folds",
                members.len()
            )));
        }
        let mut rng = ChaCha8Rng::seed_from_u64(child_seed(seed, class as u64));
        members.shuffle(&mut rng);
        for (pos, &i) in members.iter().enumerate() {
            fold[i] = pos % k;
        }
    }
    Ok(fold)
}

/// Exhaustive search over the grid scored by stratified k-fold accuracy.
pub fn grid_search<R: AsRef<[f64]> + Sync>(
    rows: &[R],
    labels: &[u8],
    grid: &GridSpec,
) -> Result<GridResult> {
    if grid.n_estimators.is_empty()
        || grid.max_depth.is_empty()
        || grid.feature_subset_size.is_empty()
    {
        return Err(Error::InvalidInput(
            "every grid axis needs at least one value".into(),
        ));
    }
    let folds = stratified_folds(labels, grid.folds, grid.seed)?;
    let mut cells = Vec::new();
    for hp in grid.cells() {
        let mut accuracy_sum = 0.0;
        for k in 0..grid.folds {
            let (mut train_x, mut train_y, mut test_x, mut test_y) =
                (vec![], vec![], vec![], vec![]);
            for (i, row) in rows.iter().enumerate() {
                if folds[i] == k {
                    test_x.push(row.as_ref());
                    test_y.push(labels[i]);
                } else {
                    train_x.push(row.as_ref());
                    train_y.push(labels[i]);
                }
            }
            let params = ForestParams {
                n_estimators: hp.n_estimators,
                max_depth: hp.max_depth,
                feature_subset_size: Some(hp.feature_subset_size),
                seed: grid.seed,
                jobs: grid.jobs,
                ..Default::default()
            };
            let model = fit_forest(&train_x, &train_y, &params)?;
            let correct = test_x
                .iter()
                .zip(&test_y)
                .filter(|(x, &y)| model.predict(x) == y)
                .count();
            accuracy_sum += correct as f64 / test_y.len() as f64;
        }
        cells.push((hp, accuracy_sum / grid.folds as f64));
    }
    let (best, best_accuracy) = cells
        .iter()
        .copied()
        .reduce(|a, b| {
            if b.1 > a.1 || (b.1 == a.1 && b.0.simplicity_key() < a.0.simplicity_key()) {
                b
            } else {
                a
            }
        })
        .expect("grid has at least one cell");
    Ok(GridResult {
        best,
        best_accuracy,
        cells,
    })
}
