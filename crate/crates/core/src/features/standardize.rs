use super::schema::{schema_hash, FEATURE_COUNT};
use super::vector::FeatureVector;
use crate::error::{Error, Result};

/// Per-feature centering and scaling learned from training rows.
#[derive(Debug, Clone, PartialEq)]
pub struct StandardizerState {
    pub means: [f64; FEATURE_COUNT],
    /// Population standard deviations.
    pub stds: [f64; FEATURE_COUNT],
    pub fitted_on: usize,
    pub schema_hash: u64,
}

/// Features that are missing in every row (for example dependency features
/// in raw-text mode) carry no information; they are ignored when deciding
/// which rows to drop and are fitted as mean 0, std 0.
pub fn structurally_missing(rows: &[FeatureVector]) -> [bool; FEATURE_COUNT] {
    std::array::from_fn(|i| rows.iter().all(|r| r.is_missing(i)))
}

/// Rows usable for fitting: no missing value outside the structurally
/// missing columns.
pub fn usable_rows(rows: &[FeatureVector]) -> Vec<usize> {
    let absent = structurally_missing(rows);
    rows.iter()
        .enumerate()
        .filter(|(_, r)| (0..FEATURE_COUNT).all(|i| absent[i] || !r.is_missing(i)))
        .map(|(k, _)| k)
        .collect()
}

pub fn fit_standardizer(rows: &[FeatureVector]) -> Result<StandardizerState> {
    if let Some(bad) = rows.iter().find(|r| r.schema_hash != schema_hash()) {
        return Err(Error::SchemaMismatch {
            expected: schema_hash(),
            found: bad.schema_hash,
        });
    }
    let absent = structurally_missing(rows);
    let keep = usable_rows(rows);
    if keep.is_empty() {
        return Err(Error::Fit("every row has missing feature values".into()));
    }
    let n = keep.len() as f64;
    let mut means = [0.0; FEATURE_COUNT];
    let mut stds = [0.0; FEATURE_COUNT];
    for i in (0..FEATURE_COUNT).filter(|&i| !absent[i]) {
        let column = || keep.iter().map(|&k| rows[k].values[i].unwrap_or(0.0));
        let mean = column().sum::<f64>() / n;
        means[i] = mean;
        // a constant column must not pick up a rounding-sized spread
        let first = column().next().unwrap_or(0.0);
        if column().any(|x| x != first) {
            stds[i] = (column().map(|x| (x - mean) * (x - mean)).sum::<f64>() / n).sqrt();
        }
    }
    Ok(StandardizerState {
        means,
        stds,
        fitted_on: keep.len(),
        schema_hash: schema_hash(),
    })
}

impl StandardizerState {
    /// `(x - mean) / std`; zero-variance and missing features map to 0.
    pub fn standardize(&self, v: &FeatureVector) -> Result<[f64; FEATURE_COUNT]> {
        if v.schema_hash != self.schema_hash {
            return Err(Error::SchemaMismatch {
                expected: self.schema_hash,
                found: v.schema_hash,
            });
        }
        Ok(std::array::from_fn(|i| match v.values[i] {
            Some(x) if self.stds[i] > 0.0 => (x - self.means[i]) / self.stds[i],
            _ => 0.0,
        }))
    }
}
