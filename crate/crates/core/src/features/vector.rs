use super::cohesion::cohesion_stats;
use super::descriptive::descriptive_stats;
use super::lexical::lexical_information_stats;
use super::quality::quality_stats;
use super::readability::readability_indices;
use super::schema::{schema_hash, FeatureGroup, FEATURE_COUNT};
use super::syntax::{dependency_stats, pos_proportions};
use rayon::prelude::*;

use crate::forest::with_jobs;
use crate::text::{Document, Lexicons};

/// A fixed-length feature vector; `None` marks a value that is undefined
/// for the document.
#[derive(Debug, Clone, PartialEq)]
pub struct FeatureVector {
    pub values: [Option<f64>; FEATURE_COUNT],
    pub schema_hash: u64,
}

impl FeatureVector {
    pub fn new(values: [Option<f64>; FEATURE_COUNT]) -> Self {
        FeatureVector {
            values,
            schema_hash: schema_hash(),
        }
    }

    pub fn from_dense(values: &[f64; FEATURE_COUNT]) -> Self {
        FeatureVector::new(values.map(Some))
    }

    pub fn get(&self, i: usize) -> Option<f64> {
        self.values[i]
    }

    pub fn is_missing(&self, i: usize) -> bool {
        self.values[i].is_none()
    }

    pub fn missing_count(&self) -> usize {
        self.values.iter().filter(|v| v.is_none()).count()
    }

    pub fn missing_indices(&self) -> Vec<usize> {
        (0..FEATURE_COUNT).filter(|&i| self.is_missing(i)).collect()
    }

    pub fn is_complete(&self) -> bool {
        self.values.iter().all(Option::is_some)
    }
}

/// Compute every feature group and lay the values out in schema order.
/// Non-finite intermediate results become missing.
pub fn assemble_feature_vector(doc: &Document, lex: &Lexicons) -> FeatureVector {
    let mut values = [None; FEATURE_COUNT];
    let mut put = |group: FeatureGroup, part: &[Option<f64>]| {
        let range = group.range();
        debug_assert_eq!(range.len(), part.len());
        for (slot, v) in values[range].iter_mut().zip(part) {
            *slot = v.filter(|x| x.is_finite());
        }
    };
    put(FeatureGroup::Descriptive, &descriptive_stats(doc));
    put(FeatureGroup::Readability, &readability_indices(doc));
    put(FeatureGroup::Lexical, &lexical_information_stats(doc));
    put(FeatureGroup::PartOfSpeech, &pos_proportions(doc));
    put(FeatureGroup::Dependency, &dependency_stats(doc));
    put(FeatureGroup::Cohesion, &cohesion_stats(doc, lex));
    put(FeatureGroup::Quality, &quality_stats(doc, lex));
    FeatureVector::new(values)
}

/// Raw-text convenience: analyze and extract in one step.
pub fn extract_text(text: &str, lex: &Lexicons) -> FeatureVector {
    assemble_feature_vector(&Document::from_text(text, lex), lex)
}

/// Raw-text extraction over many documents on `jobs` threads. The output
/// is in input order and identical for any thread count.
pub fn extract_texts<T: AsRef<str> + Sync>(
    texts: &[T],
    lex: &Lexicons,
    jobs: usize,
) -> Vec<FeatureVector> {
    with_jobs(jobs, || {
        texts
            .par_iter()
            .map(|t| extract_text(t.as_ref(), lex))
            .collect()
    })
}

/// As [`extract_texts`] for already analyzed documents.
pub fn extract_documents(docs: &[Document], lex: &Lexicons, jobs: usize) -> Vec<FeatureVector> {
    with_jobs(jobs, || {
        docs.par_iter()
            .map(|d| assemble_feature_vector(d, lex))
            .collect()
    })
}
