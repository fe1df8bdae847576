//! Corpus ingestion, stratified splitting and artifact persistence.

pub mod conllu;
pub mod container;
mod labeled;
mod matrix;
mod split;

pub use conllu::{parse_conllu, AnnotatedSentence, ConlluToken};
pub use container::{
    model_from_bytes, model_to_bytes, read_model, write_model, Classifier, ModelFile, ModelKind,
};
pub use labeled::{
    load_labeled_csv, parse_label, parse_labeled_csv, write_labeled_csv, LabeledRecord,
    DEFAULT_LABEL_COLUMN, DEFAULT_TEXT_COLUMN,
};
pub use matrix::{
    format_feature_matrix, parse_feature_matrix, read_feature_matrix, write_feature_matrix,
    LabeledRow,
};
pub use split::{allocate, stratified_split, SplitSpec, Splits};
