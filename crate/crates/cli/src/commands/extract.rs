use std::collections::HashMap;
use std::path::Path;

use stylodetect::corpus::{
    load_labeled_csv, parse_conllu, write_feature_matrix, AnnotatedSentence, LabeledRecord,
};
use stylodetect::features::{extract_documents, extract_texts, FeatureGroup, FeatureVector};
use stylodetect::text::Document;

use super::{lexicons, read_text, Context};
use crate::failure::Failure;
use crate::{Columns, LexiconOverrides, Mode};

/// Group annotated sentences by their `newdoc id` and line them up with
/// the CSV records by id.
fn align(
    records: &[LabeledRecord],
    sentences: Vec<AnnotatedSentence>,
) -> Result<Vec<Document>, Failure> {
    let mut by_doc: HashMap<String, Vec<AnnotatedSentence>> = HashMap::new();
    for s in sentences {
        let Some(id) = s.doc_id.clone() else {
            return Err(Failure::input(
                "CoNLL-U sentence outside any `# newdoc id = ...` document",
            ));
        };
        by_doc.entry(id).or_default().push(s);
    }
    let mut docs = Vec::with_capacity(records.len());
    for r in records {
        match by_doc.remove(&r.id.to_string()) {
            Some(sentences) => docs.push(Document::from_conllu(&sentences)),
            None if r.text.trim().is_empty() => docs.push(Document::from_conllu(&[])),
            None => {
                return Err(Failure::input(format!(
                    "record {} has no CoNLL-U document with that id",
                    r.id
                )));
            }
        }
    }
    if let Some(extra) = by_doc.keys().min() {
        return Err(Failure::input(format!(
            "CoNLL-U document {extra} matches no record"
        )));
    }
    Ok(docs)
}

pub fn run(
    ctx: &Context,
    input: &Path,
    output: &Path,
    mode: Mode,
    conllu: Option<&Path>,
    columns: &Columns,
    overrides: &LexiconOverrides,
) -> Result<(), Failure> {
    let records = load_labeled_csv(input, &columns.text_column, &columns.label_column)?;
    let lex = lexicons(overrides)?;
    let vectors: Vec<FeatureVector> = match mode {
        Mode::Raw => {
            let texts: Vec<&str> = records.iter().map(|r| r.text.as_str()).collect();
            extract_texts(&texts, &lex, ctx.jobs)
        }
        Mode::Conllu => {
            let path = conllu.ok_or_else(|| Failure::input("--mode conllu needs --conllu FILE"))?;
            let docs = align(&records, parse_conllu(&read_text(path)?)?)?;
            extract_documents(&docs, &lex, ctx.jobs)
        }
    };
    for r in records.iter().filter(|r| r.text.trim().is_empty()) {
        eprintln!(
            "warning: record {} is empty; most of its features are missing",
            r.id
        );
    }
    let dependency = FeatureGroup::Dependency.range();
    let missing_dependency = vectors
        .iter()
        .filter(|v| dependency.clone().any(|i| v.is_missing(i)))
        .count();
    let rows: Vec<_> = vectors
        .into_iter()
        .zip(records.iter().map(|r| r.label))
        .collect();
    write_feature_matrix(&rows, output)?;
    println!(
        "extracted {} rows to {}; {missing_dependency} rows with missing dependency features",
        rows.len(),
        output.display()
    );
    Ok(())
}
