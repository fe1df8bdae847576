use std::path::Path;

use stylodetect::corpus::{
    load_labeled_csv, stratified_split, write_labeled_csv, LabeledRecord, SplitSpec,
};

use super::Context;
use crate::failure::Failure;
use crate::Columns;

fn class_counts(records: &[LabeledRecord]) -> (usize, usize) {
    let ai = records.iter().filter(|r| r.label == 1).count();
    (records.len() - ai, ai)
}

pub fn run(
    ctx: &Context,
    input: &Path,
    out_dir: Option<&Path>,
    fractions: &[f64],
    columns: &Columns,
) -> Result<(), Failure> {
    let [train, validation, test] = fractions else {
        return Err(Failure::input("--fractions needs three values"));
    };
    let spec = SplitSpec {
        train: *train,
        validation: *validation,
        test: *test,
        seed: ctx.seed,
    };
    spec.validate()?;
    let records = load_labeled_csv(input, &columns.text_column, &columns.label_column)?;
    let splits = stratified_split(&records, &spec)?;

    let dir = out_dir
        .map(Path::to_path_buf)
        .unwrap_or_else(|| input.parent().map(Path::to_path_buf).unwrap_or_default());
    std::fs::create_dir_all(&dir).map_err(|e| stylodetect::Error::io(&dir, e))?;
    let stem = input
        .file_stem()
        .and_then(|s| s.to_str())
        .unwrap_or("corpus");
    println!("split      rows  human     ai");
    for (name, part) in [
        ("train", &splits.train),
        ("val", &splits.validation),
        ("test", &splits.test),
    ] {
        let path = dir.join(format!("{stem}.{name}.csv"));
        write_labeled_csv(&path, part, &columns.text_column, &columns.label_column)?;
        let (human, ai) = class_counts(part);
        println!("{name:<8} {:>6} {human:>6} {ai:>6}", part.len());
        ctx.info(format!("wrote {}", path.display()));
    }
    Ok(())
}
