pub mod evaluate;
pub mod extract;
pub mod inspect;
pub mod predict;
pub mod split;
pub mod train;

use std::borrow::Cow;
use std::path::Path;

use stylodetect::corpus::Classifier;
use stylodetect::features::{FeatureVector, StandardizerState};
use stylodetect::text::Lexicons;
use stylodetect::Error;

use crate::failure::Failure;
use crate::LexiconOverrides;

pub struct Context {
    pub seed: u64,
    pub jobs: usize,
    pub quiet: bool,
}

impl Context {
    pub fn info(&self, message: impl AsRef<str>) {
        if !self.quiet {
            eprintln!("{}", message.as_ref());
        }
    }
}

pub fn read_text(path: &Path) -> Result<String, Failure> {
    std::fs::read_to_string(path).map_err(|e| Error::io(path, e).into())
}

pub fn lexicons(overrides: &LexiconOverrides) -> Result<Cow<'static, Lexicons>, Failure> {
    let builtin = Lexicons::builtin();
    if overrides.closed_class.is_none() && overrides.abbreviations.is_none() {
        return Ok(Cow::Borrowed(builtin));
    }
    let mut lex = builtin.clone();
    if let Some(path) = &overrides.closed_class {
        lex = lex.with_closed_class(&read_text(path)?)?;
    }
    if let Some(path) = &overrides.abbreviations {
        lex = lex.with_abbreviations(&read_text(path)?)?;
    }
    Ok(Cow::Owned(lex))
}

/// Standardized dense rows; without a stored scaler values pass through
/// with missing entries as 0.
pub fn standardize_all(
    standardizer: Option<&StandardizerState>,
    rows: &[FeatureVector],
) -> Result<Vec<Vec<f64>>, Failure> {
    rows.iter()
        .map(|v| match standardizer {
            Some(s) => Ok(s.standardize(v)?.to_vec()),
            None => Ok(v.values.iter().map(|x| x.unwrap_or(0.0)).collect()),
        })
        .collect()
}

pub fn probabilities(classifier: &Classifier, rows: &[Vec<f64>]) -> Result<Vec<f64>, Failure> {
    match classifier {
        Classifier::Forest(f) => Ok(rows.iter().map(|r| f.predict_proba(r)).collect()),
        Classifier::ConvNet(n) => Ok(n.predict_many(rows)?),
    }
}

pub fn with_threshold(
    mut classifier: Classifier,
    threshold: Option<f64>,
) -> Result<Classifier, Failure> {
    if let Some(t) = threshold {
        if !(0.0..=1.0).contains(&t) {
            return Err(Failure::input(format!("threshold {t} outside [0, 1]")));
        }
        match &mut classifier {
            Classifier::Forest(f) => f.threshold = t,
            Classifier::ConvNet(n) => n.threshold = t,
        }
    }
    Ok(classifier)
}
