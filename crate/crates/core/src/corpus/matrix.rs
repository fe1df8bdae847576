//! Feature matrices as comma-separated text: a header of schema names plus
//! `label`, floats in shortest round-trip form, empty cells for missing.

use std::fmt::Write as _;
use std::fs;
use std::path::Path;

use crate::error::{Error, Result};
use crate::features::{feature_names, hash_names, schema_hash, FeatureVector, FEATURE_COUNT};

pub type LabeledRow = (FeatureVector, u8);

pub fn format_feature_matrix(rows: &[LabeledRow]) -> Result<String> {
    let mut out = String::new();
    for name in feature_names() {
        out.push_str(name);
        out.push(',');
    }
    out.push_str("label\n");
    for (v, label) in rows {
        if v.schema_hash != schema_hash() {
            return Err(Error::SchemaMismatch {
                expected: schema_hash(),
                found: v.schema_hash,
            });
        }
        for value in &v.values {
            if let Some(x) = value {
                write!(out, "{x:?}").expect("write to string");
            }
            out.push(',');
        }
        writeln!(out, "{label}").expect("write to string");
    }
    Ok(out)
}

pub fn write_feature_matrix(rows: &[LabeledRow], path: &Path) -> Result<()> {
    let text = format_feature_matrix(rows)?;
    fs::write(path, text).map_err(|e| Error::io(path, e))
}

pub fn parse_feature_matrix(text: &str) -> Result<Vec<LabeledRow>> {
    let text = text.trim_start_matches('\u{feff}');
    let mut lines = text.lines();
    let header = lines.next().ok_or(Error::EmptyCorpus)?;
    let names: Vec<&str> = header.trim_end_matches('\r').split(',').collect();
    let (label, features) = names.split_last().ok_or(Error::EmptyCorpus)?;
    if *label != "label" {
        return Err(Error::MissingColumn("label".into()));
    }
    let found = hash_names(features.iter().copied());
    if found != schema_hash() {
        return Err(Error::SchemaMismatch {
            expected: schema_hash(),
            found,
        });
    }
    let mut rows = Vec::new();
    for (i, line) in lines.enumerate() {
        let row_no = i + 1;
        let line = line.trim_end_matches('\r');
        if line.is_empty() {
            continue;
        }
        let cells: Vec<&str> = line.split(',').collect();
        if cells.len() != FEATURE_COUNT + 1 {
            return Err(Error::Row {
                row: row_no,
                message: format!(
                    "expected {} fields, found {}",
                    FEATURE_COUNT + 1,
                    cells.len()
                ),
            });
        }
        let mut values = [None; FEATURE_COUNT];
        for (slot, cell) in values.iter_mut().zip(&cells) {
            if !cell.is_empty() {
                *slot = Some(cell.parse::<f64>().map_err(|_| Error::Row {
                    row: row_no,
                    message: format!("`{cell}` is not a number"),
                })?);
            }
        }
        let label = match cells[FEATURE_COUNT] {
            "0" => 0,
            "1" => 1,
            other => {
                return Err(Error::Row {
                    row: row_no,
                    message: format!("label `{other}` is not 0 or 1"),
                })
            }
        };
        rows.push((FeatureVector::new(values), label));
    }
    Ok(rows)
}

pub fn read_feature_matrix(path: &Path) -> Result<Vec<LabeledRow>> {
    let text = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    parse_feature_matrix(&text)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::features::extract_text;
    use crate::text::Lexicons;
    use proptest::prelude::*;

    #[test]
    fn zero_row_layout() {
        let rows = vec![(FeatureVector::from_dense(&[0.0; FEATURE_COUNT]), 1)];
        let text = format_feature_matrix(&rows).unwrap();
        let mut lines = text.lines();
        let header: Vec<_> = lines.next().unwrap().split(',').collect();
        assert_eq!(header.len(), FEATURE_COUNT + 1);
        assert_eq!(header[0], "token_count");
        assert_eq!(header[FEATURE_COUNT], "label");
        assert!(lines.next().unwrap().ends_with(",1"));
        assert_eq!(parse_feature_matrix(&text).unwrap(), rows);
    }

    #[test]
    fn shortest_round_trip_decimal() {
        let mut values = [0.0; FEATURE_COUNT];
        values[0] = 0.1;
        values[1] = 1.0 / 3.0;
        values[2] = 1e-300;
        let text = format_feature_matrix(&[(FeatureVector::from_dense(&values), 0)]).unwrap();
        let row = text.lines().nth(1).unwrap();
        assert!(row.starts_with("0.1,0.3333333333333333,1e-300,"));
        let back = parse_feature_matrix(&text).unwrap();
        assert_eq!(
            back[0].0.values[1].unwrap().to_bits(),
            (1.0f64 / 3.0).to_bits()
        );
    }

    #[test]
    fn raw_text_rows_have_empty_dependency_cells() {
        let v = extract_text("The dog barks. It runs away.", Lexicons::builtin());
        let text = format_feature_matrix(&[(v.clone(), 0)]).unwrap();
        let row: Vec<_> = text.lines().nth(1).unwrap().split(',').collect();
        assert!(row[45..51].iter().all(|c| c.is_empty()));
        let back = parse_feature_matrix(&text).unwrap();
        assert_eq!(back[0].0, v);
        assert_eq!(back[0].0.missing_indices(), (45..51).collect::<Vec<_>>());
    }

    #[test]
    fn foreign_header_is_a_version_error() {
        let text = "a,b,label\n1,2,0\n";
        assert!(matches!(
            parse_feature_matrix(text).unwrap_err(),
            Error::SchemaMismatch { .. }
        ));
    }

    #[test]
    fn file_round_trip() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("m.csv");
        let rows = vec![(extract_text("Hi there. Bye.", Lexicons::builtin()), 1)];
        write_feature_matrix(&rows, &path).unwrap();
        assert_eq!(read_feature_matrix(&path).unwrap(), rows);
    }

    proptest! {
        #[test]
        fn round_trip_is_identity(
            cells in prop::collection::vec(prop::option::of(any::<f64>().prop_filter("finite", |x| x.is_finite())), FEATURE_COUNT),
            label in 0u8..2,
        ) {
            let v = FeatureVector::new(std::array::from_fn(|i| cells[i]));
            let text = format_feature_matrix(&[(v.clone(), label)]).unwrap();
            let back = parse_feature_matrix(&text).unwrap();
            prop_assert_eq!(back.len(), 1);
            for (a, b) in back[0].0.values.iter().zip(&v.values) {
                prop_assert_eq!(a.map(f64::to_bits), b.map(f64::to_bits));
            }
            prop_assert_eq!(back[0].1, label);
        }
    }
}
