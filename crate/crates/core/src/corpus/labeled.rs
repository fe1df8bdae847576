use std::fs;
use std::path::Path;

use crate::error::{Error, Result};

pub const DEFAULT_TEXT_COLUMN: &str = "text";
pub const DEFAULT_LABEL_COLUMN: &str = "generated";

/// One labeled document. Label 0 is human-written, 1 is machine-generated.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LabeledRecord {
    pub id: usize,
    pub text: String,
    pub label: u8,
}

/// Accepts `0`/`1` as well as the float spellings `0.0`/`1.0`.
pub fn parse_label(raw: &str) -> Option<u8> {
    match raw.trim() {
        "0" | "0.0" => Some(0),
        "1" | "1.0" => Some(1),
        other => match other.parse::<f64>() {
            Ok(v) if v == 0.0 => Some(0),
            Ok(v) if v == 1.0 => Some(1),
            _ => None,
        },
    }
}

pub fn load_labeled_csv(
    path: &Path,
    text_column: &str,
    label_column: &str,
) -> Result<Vec<LabeledRecord>> {
    let bytes = fs::read(path).map_err(|e| Error::io(path, e))?;
    parse_labeled_csv(&bytes, text_column, label_column)
}

/// Rows are numbered from 1 starting at the first data row. When the input
/// has an `id` column its values are kept, otherwise ids are row indices.
pub fn parse_labeled_csv(
    bytes: &[u8],
    text_column: &str,
    label_column: &str,
) -> Result<Vec<LabeledRecord>> {
    let bytes = bytes.strip_prefix(b"\xef\xbb\xbf").unwrap_or(bytes);
    if bytes.iter().all(u8::is_ascii_whitespace) {
        return Err(Error::EmptyCorpus);
    }
    let mut reader = csv::ReaderBuilder::new().flexible(false).from_reader(bytes);
    let headers = reader
        .headers()
        .map_err(|e| Error::Row {
            row: 0,
            message: e.to_string(),
        })?
        .clone();
    let find = |name: &str| {
        headers
            .iter()
            .position(|h| h.trim() == name)
            .ok_or_else(|| Error::MissingColumn(name.to_string()))
    };
    let text_idx = find(text_column)?;
    let label_idx = find(label_column)?;
    let id_idx = headers.iter().position(|h| h.trim() == "id");

    let mut records = Vec::new();
    for (i, row) in reader.records().enumerate() {
        let row_no = i + 1;
        let row = row.map_err(|e| Error::Row {
            row: row_no,
            message: e.to_string(),
        })?;
        let field = |idx: usize| row.get(idx).unwrap_or("");
        let label = parse_label(field(label_idx)).ok_or_else(|| Error::Row {
            row: row_no,
            message: format!("label `{}` is not 0 or 1", field(label_idx)),
        })?;
        let id = match id_idx {
            Some(idx) => field(idx).trim().parse().map_err(|_| Error::Row {
                row: row_no,
                message: format!("id `{}` is not a non-negative integer", field(idx)),
            })?,
            None => i,
        };
        records.push(LabeledRecord {
            id,
            text: field(text_idx).to_string(),
            label,
        });
    }
    if records.is_empty() {
        return Err(Error::EmptyCorpus);
    }
    Ok(records)
}

/// Writes `id,<text_column>,<label_column>` with RFC-4180 quoting.
pub fn write_labeled_csv(
    path: &Path,
    records: &[LabeledRecord],
    text_column: &str,
    label_column: &str,
) -> Result<()> {
    let csv_err = |e: csv::Error| Error::io(path, e.into());
    let mut writer = csv::Writer::from_path(path).map_err(csv_err)?;
    writer
        .write_record(["id", text_column, label_column])
        .map_err(csv_err)?;
    for r in records {
        writer
            .write_record([r.id.to_string(), r.text.clone(), r.label.to_string()])
            .map_err(csv_err)?;
    }
    writer.flush().map_err(|e| Error::io(path, e))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn parse(text: &str) -> Result<Vec<LabeledRecord>> {
        parse_labeled_csv(text.as_bytes(), "text", "generated")
    }

    #[test]
    fn float_labels() {
        let r = parse("text,generated\nhello there,0.0\nbeep boop,1.0\n").unwrap();
        assert_eq!(r.len(), 2);
        assert_eq!(r.iter().map(|r| r.label).collect::<Vec<_>>(), vec![0, 1]);
        assert_eq!(r[1].id, 1);
    }

    #[test]
    fn quoted_fields() {
        let r = parse("text,generated\n\"a, b\",1\n\"line one\nline \"\"two\"\"\",0\n").unwrap();
        assert_eq!(r[0].text, "a, b");
        assert_eq!(r[1].text, "line one\nline \"two\"");
    }

    #[test]
    fn bad_label_names_row() {
        let text = "text,generated\na,0\nb,1\nc,0\nd,1\ne,2\n";
        match parse(text).unwrap_err() {
            Error::Row { row, message } => {
                assert_eq!(row, 5);
                assert!(message.contains('2'));
            }
            other => panic!("unexpected {other}"),
        }
    }

    #[test]
    fn missing_column_and_empty_file() {
        match parse("body,generated\nx,1\n").unwrap_err() {
            Error::MissingColumn(c) => assert_eq!(c, "text"),
            other => panic!("unexpected {other}"),
        }
        assert!(matches!(parse("").unwrap_err(), Error::EmptyCorpus));
        assert!(matches!(
            parse("text,generated\n").unwrap_err(),
            Error::EmptyCorpus
        ));
    }

    #[test]
    fn bom_is_stripped() {
        let r = parse("\u{feff}text,generated\nx,1\n").unwrap();
        assert_eq!(r[0].text, "x");
    }

    #[test]
    fn write_then_load_keeps_ids() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("s.csv");
        let records = vec![
            LabeledRecord {
                id: 7,
                text: "a, \"b\"\nc".into(),
                label: 1,
            },
            LabeledRecord {
                id: 3,
                text: "d".into(),
                label: 0,
            },
        ];
        write_labeled_csv(&path, &records, "text", "generated").unwrap();
        assert_eq!(
            load_labeled_csv(&path, "text", "generated").unwrap(),
            records
        );
    }
}
