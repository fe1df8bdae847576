use std::path::Path;

use stylodetect::corpus::{read_feature_matrix, read_model};
use stylodetect::eval::{EvalReport, ReportFormat};
use stylodetect::features::schema_hash;
use stylodetect::Error;

use super::{probabilities, standardize_all, with_threshold, Context};
use crate::failure::{Failure, SCHEMA};
use crate::Format;

fn mismatch(model: u64, features: u64) -> Failure {
    Failure {
        code: SCHEMA,
        message: format!("schema mismatch: model {model:016x}, features {features:016x}"),
    }
}

pub fn run(
    ctx: &Context,
    model_path: &Path,
    features: &Path,
    format: Format,
    output: Option<&Path>,
    threshold: Option<f64>,
) -> Result<(), Failure> {
    let model = read_model(model_path)?;
    let model_hash = model.classifier.schema_hash();
    if model_hash != schema_hash() {
        return Err(mismatch(model_hash, schema_hash()));
    }
    let rows = match read_feature_matrix(features) {
        Ok(rows) => rows,
        Err(Error::SchemaMismatch { found, .. }) => return Err(mismatch(model_hash, found)),
        Err(e) => return Err(e.into()),
    };
    let (vectors, labels): (Vec<_>, Vec<u8>) = rows.into_iter().unzip();
    let classifier = with_threshold(model.classifier, threshold)?;
    let x = standardize_all(model.standardizer.as_ref(), &vectors)?;
    let probs = probabilities(&classifier, &x)?;
    let report = EvalReport::compute(&labels, &probs, classifier.threshold())?;
    let text = report.render(match format {
        Format::Text => ReportFormat::Text,
        Format::Json => ReportFormat::Structured,
    });
    print!("{text}");
    if let Some(path) = output {
        std::fs::write(path, &text).map_err(|e| Error::io(path, e))?;
        ctx.info(format!("wrote {}", path.display()));
    }
    Ok(())
}
