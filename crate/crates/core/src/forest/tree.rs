use rand::seq::index::sample;
use rand::Rng;

/// A binary classification tree. Samples with `value <= threshold` go left.
#[derive(Debug, Clone, PartialEq)]
pub enum TreeNode {
    Leaf {
        /// Training samples reaching this leaf per class.
        counts: [u64; 2],
    },
    Split {
        feature: usize,
        threshold: f64,
        left: Box<TreeNode>,
        right: Box<TreeNode>,
    },
}

impl TreeNode {
    pub fn leaf(n0: u64, n1: u64) -> Self {
        TreeNode::Leaf { counts: [n0, n1] }
    }

    pub fn split(feature: usize, threshold: f64, left: TreeNode, right: TreeNode) -> Self {
        TreeNode::Split {
            feature,
            threshold,
            left: Box::new(left),
            right: Box::new(right),
        }
    }

    pub fn leaf_counts(&self, x: &[f64]) -> [u64; 2] {
        let mut node = self;
        loop {
            match node {
                TreeNode::Leaf { counts } => return *counts,
                TreeNode::Split {
                    feature,
                    threshold,
                    left,
                    right,
                } => {
                    node = if x[*feature] <= *threshold {
                        left
                    } else {
                        right
                    }
                }
            }
        }
    }

    /// Class-1 fraction of the leaf `x` lands in.
    pub fn predict_proba(&self, x: &[f64]) -> f64 {
        let [n0, n1] = self.leaf_counts(x);
        n1 as f64 / (n0 + n1) as f64
    }

    /// Per-class sample counts summed over every leaf below this node.
    pub fn counts(&self) -> [u64; 2] {
        match self {
            TreeNode::Leaf { counts } => *counts,
            TreeNode::Split { left, right, .. } => {
                let (l, r) = (left.counts(), right.counts());
                [l[0] + r[0], l[1] + r[1]]
            }
        }
    }

    /// Longest root-to-leaf path in edges.
    pub fn depth(&self) -> usize {
        match self {
            TreeNode::Leaf { .. } => 0,
            TreeNode::Split { left, right, .. } => 1 + left.depth().max(right.depth()),
        }
    }

    pub fn leaf_count(&self) -> usize {
        match self {
            TreeNode::Leaf { .. } => 1,
            TreeNode::Split { left, right, .. } => left.leaf_count() + right.leaf_count(),
        }
    }
}

pub fn gini_impurity(counts: [u64; 2]) -> f64 {
    let n = (counts[0] + counts[1]) as f64;
    let p0 = counts[0] as f64 / n;
    let p1 = counts[1] as f64 / n;
    1.0 - p0 * p0 - p1 * p1
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SplitChoice {
    pub feature: usize,
    pub threshold: f64,
    /// Parent impurity minus size-weighted child impurity.
    pub gain: f64,
}

/// `(a^2 + b^2) / n` as an exact fraction. Weighted child Gini equals
/// `1 - (purity(left) + purity(right)) / n`, so maximizing the summed purity
/// minimizes impurity without rounding.
#[derive(Clone, Copy)]
struct Purity {
    num: u128,
    den: u128,
}

impl Purity {
    fn of(c: [u64; 2]) -> Self {
        let (a, b) = (c[0] as u128, c[1] as u128);
        Purity {
            num: a * a + b * b,
            den: a + b,
        }
    }

    fn plus(self, other: Purity) -> Purity {
        Purity {
            num: self.num * other.den + other.num * self.den,
            den: self.den * other.den,
        }
    }

    fn gt(self, other: Purity) -> bool {
        self.num * other.den > other.num * self.den
    }
}

fn midpoint(lo: f64, hi: f64) -> f64 {
    let mid = lo / 2.0 + hi / 2.0;
    if mid >= hi {
        lo
    } else {
        mid
    }
}

/// Best Gini split over the candidate features for the sampled rows.
/// `sample` may contain repeated indices (bootstrap draws). Ties go to the
/// lowest feature index, then the lowest threshold. Returns `None` when no
/// split lowers the impurity.
pub fn best_split<R: AsRef<[f64]>>(
    rows: &[R],
    labels: &[u8],
    sample: &[usize],
    features: &[usize],
) -> Option<SplitChoice> {
    if sample.len() < 2 {
        return None;
    }
    let mut total = [0u64; 2];
    for &i in sample {
        total[labels[i] as usize] += 1;
    }
    let parent = Purity::of(total);
    let mut best: Option<(usize, f64, Purity, [u64; 2], [u64; 2])> = None;
    let mut sorted: Vec<(f64, u8)> = Vec::with_capacity(sample.len());

    let mut ordered: Vec<usize> = features.to_vec();
    ordered.sort_unstable();
    ordered.dedup();
    for &f in &ordered {
        sorted.clear();
        sorted.extend(sample.iter().map(|&i| (rows[i].as_ref()[f], labels[i])));
        sorted.sort_by(|a, b| a.0.total_cmp(&b.0));
        let mut left = [0u64; 2];
        for k in 0..sorted.len() - 1 {
            left[sorted[k].1 as usize] += 1;
            let (lo, hi) = (sorted[k].0, sorted[k + 1].0);
            if lo >= hi {
                continue;
            }
            let right = [total[0] - left[0], total[1] - left[1]];
            let score = Purity::of(left).plus(Purity::of(right));
            if best.is_none_or(|b| score.gt(b.2)) {
                best = Some((f, midpoint(lo, hi), score, left, right));
            }
        }
    }
    let (feature, threshold, score, left, right) = best?;
    // Weighted child purity must beat the parent's: compare
    // score against parent scaled to the same denominator.
    if !score.gt(parent) {
        return None;
    }
    let n = sample.len() as f64;
    let weighted = (left[0] + left[1]) as f64 / n * gini_impurity(left)
        + (right[0] + right[1]) as f64 / n * gini_impurity(right);
    Some(SplitChoice {
        feature,
        threshold,
        gain: gini_impurity(total) - weighted,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct GrowConfig {
    pub max_depth: Option<usize>,
    /// Features drawn (without replacement) at every node.
    pub feature_subset_size: usize,
}

/// Recursively grow a tree on `sample`, drawing a fresh feature subset at
/// every node.
pub fn grow_tree<R: AsRef<[f64]>, G: Rng + ?Sized>(
    rows: &[R],
    labels: &[u8],
    sample: &[usize],
    config: &GrowConfig,
    rng: &mut G,
) -> TreeNode {
    let n_features = rows.first().map_or(0, |r| r.as_ref().len());
    grow(rows, labels, sample.to_vec(), config, n_features, 0, rng)
}

fn grow<R: AsRef<[f64]>, G: Rng + ?Sized>(
    rows: &[R],
    labels: &[u8],
    sample: Vec<usize>,
    config: &GrowConfig,
    n_features: usize,
    depth: usize,
    rng: &mut G,
) -> TreeNode {
    let mut counts = [0u64; 2];
    for &i in &sample {
        counts[labels[i] as usize] += 1;
    }
    let leaf = TreeNode::Leaf { counts };
    if counts[0] == 0 || counts[1] == 0 || sample.len() < 2 || config.max_depth == Some(depth) {
        return leaf;
    }
    let k = config.feature_subset_size.clamp(1, n_features.max(1));
    let features = if k >= n_features {
        (0..n_features).collect()
    } else {
        let mut f = sample_features(rng, n_features, k);
        f.sort_unstable();
        f
    };
    let Some(choice) = best_split(rows, labels, &sample, &features) else {
        return leaf;
    };
    let (left, right): (Vec<usize>, Vec<usize>) = sample
        .iter()
        .partition(|&&i| rows[i].as_ref()[choice.feature] <= choice.threshold);
    TreeNode::split(
        choice.feature,
        choice.threshold,
        grow(rows, labels, left, config, n_features, depth + 1, rng),
        grow(rows, labels, right, config, n_features, depth + 1, rng),
    )
}

fn sample_features<G: Rng + ?Sized>(rng: &mut G, n: usize, k: usize) -> Vec<usize> {
    sample(rng, n, k).into_vec()
}
