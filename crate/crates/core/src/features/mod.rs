//! The 68-feature stylometric vector and its standardization.

mod cohesion;
mod descriptive;
mod lexical;
mod quality;
mod readability;
mod schema;
mod standardize;
mod stats;
mod syntax;
mod vector;

pub use cohesion::cohesion_stats;
pub use descriptive::descriptive_stats;
pub use lexical::lexical_information_stats;
pub use quality::quality_stats;
pub use readability::{readability_indices, ReadabilityCounts};
pub use schema::{
    feature_index, feature_names, hash_names, schema_document, schema_hash, FeatureGroup, FEATURES,
    FEATURE_COUNT,
};
pub use standardize::{fit_standardizer, structurally_missing, usable_rows, StandardizerState};
pub use syntax::{dependency_stats, pos_proportions};
pub use vector::{
    assemble_feature_vector, extract_documents, extract_text, extract_texts, FeatureVector,
};
