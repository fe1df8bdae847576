use std::io::Read;
use std::path::{Path, PathBuf};

use stylodetect::corpus::read_model;
use stylodetect::features::extract_text;
use stylodetect::Error;

use super::{lexicons, probabilities, standardize_all, with_threshold};
use crate::failure::Failure;
use crate::LexiconOverrides;

fn read_input(path: &Path) -> Result<(String, String), Failure> {
    if path == Path::new("-") {
        let mut text = String::new();
        std::io::stdin()
            .read_to_string(&mut text)
            .map_err(|e| Error::io("<stdin>", e))?;
        return Ok((text, "-".to_string()));
    }
    let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    Ok((text, path.display().to_string()))
}

/// One line per document: probability (6 dp), label, source.
pub fn run(
    model_path: &Path,
    inputs: &[PathBuf],
    threshold: Option<f64>,
    overrides: &LexiconOverrides,
) -> Result<(), Failure> {
    let model = read_model(model_path)?;
    let classifier = with_threshold(model.classifier, threshold)?;
    let lex = lexicons(overrides)?;
    let stdin = [PathBuf::from("-")];
    let inputs = if inputs.is_empty() {
        &stdin[..]
    } else {
        inputs
    };
    let docs = inputs
        .iter()
        .map(|p| read_input(p))
        .collect::<Result<Vec<_>, _>>()?;
    let vectors: Vec<_> = docs
        .iter()
        .map(|(text, _)| extract_text(text, &lex))
        .collect();
    let x = standardize_all(model.standardizer.as_ref(), &vectors)?;
    let probs = probabilities(&classifier, &x)?;
    let t = classifier.threshold();
    for ((_, source), p) in docs.iter().zip(probs) {
        println!("{p:.6}\t{}\t{source}", u8::from(p > t));
    }
    Ok(())
}
