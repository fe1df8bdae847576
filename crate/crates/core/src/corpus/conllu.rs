//! Minimal CoNLL-U reader covering the columns the feature extractor needs:
//! ID, FORM, UPOS, HEAD and DEPREL.

use crate::error::{Error, Result};
use crate::text::Upos;

#[derive(Debug, Clone, PartialEq)]
pub struct ConlluToken {
    pub form: String,
    pub upos: Upos,
    /// 0 for the root, otherwise the 1-based position of the head.
    pub head: usize,
    pub deprel: String,
}

#[derive(Debug, Clone, PartialEq)]
pub struct AnnotatedSentence {
    pub tokens: Vec<ConlluToken>,
    /// Value of the most recent `# newdoc id = ...` comment, if any.
    pub doc_id: Option<String>,
}

impl AnnotatedSentence {
    /// Number of edges from token `i` (0-based) up to the root.
    pub fn depth(&self, i: usize) -> usize {
        let mut depth = 0;
        let mut head = self.tokens[i].head;
        while head != 0 {
            depth += 1;
            head = self.tokens[head - 1].head;
        }
        depth
    }
}

/// Parse CoNLL-U text into sentences. Comment lines are skipped apart from
/// `newdoc id`, multiword ranges (`3-4`) and empty nodes (`5.1`) are
/// skipped, and each sentence is checked to form a single rooted tree.
pub fn parse_conllu(input: &str) -> Result<Vec<AnnotatedSentence>> {
    let input = input.trim_start_matches('\u{feff}');
    let mut sentences = Vec::new();
    let mut current: Vec<ConlluToken> = Vec::new();
    let mut doc_id: Option<String> = None;
    let mut last_line = 0;

    for (n, line) in input.lines().enumerate() {
        let line_no = n + 1;
        last_line = line_no;
        let line = line.trim_end_matches('\r');
        if line.trim().is_empty() {
            if !current.is_empty() {
                let tokens = std::mem::take(&mut current);
                validate_tree(&tokens, line_no)?;
                sentences.push(AnnotatedSentence {
                    tokens,
                    doc_id: doc_id.clone(),
                });
            }
            continue;
        }
        if let Some(comment) = line.strip_prefix('#') {
            if let Some(id) = comment.trim().strip_prefix("newdoc") {
                let id = id.trim().strip_prefix("id").map(str::trim);
                let id = id.and_then(|s| s.strip_prefix('=')).map(str::trim);
                doc_id = id.filter(|s| !s.is_empty()).map(str::to_string);
            }
            continue;
        }
        let cols: Vec<&str> = line.split('\t').collect();
        if cols.len() != 10 {
            return Err(Error::Conllu {
                line: line_no,
                message: format!("expected 10 tab-separated columns, found {}", cols.len()),
            });
        }
        let id = cols[0];
        if id.contains('-') || id.contains('.') {
            continue;
        }
        let id: usize = id.parse().map_err(|_| Error::Conllu {
            line: line_no,
            message: format!("token id `{id}` is not an integer"),
        })?;
        if id != current.len() + 1 {
            return Err(Error::Conllu {
                line: line_no,
                message: format!(
                    "token id {id} out of sequence, expected {}",
                    current.len() + 1
                ),
            });
        }
        let head: usize = cols[6].parse().map_err(|_| Error::Conllu {
            line: line_no,
            message: format!("HEAD `{}` is not an integer", cols[6]),
        })?;
        let upos = match cols[3] {
            "_" => Upos::X,
            tag => tag.parse().map_err(|_| Error::Conllu {
                line: line_no,
                message: format!("unknown UPOS `{tag}`"),
            })?,
        };
        current.push(ConlluToken {
            form: cols[1].to_string(),
            upos,
            head,
            deprel: cols[7].to_string(),
        });
    }
    if !current.is_empty() {
        validate_tree(&current, last_line)?;
        sentences.push(AnnotatedSentence {
            tokens: current,
            doc_id,
        });
    }
    Ok(sentences)
}

fn validate_tree(tokens: &[ConlluToken], line: usize) -> Result<()> {
    let n = tokens.len();
    let structural = |message: String| Error::Structure { line, message };
    if let Some((i, t)) = tokens.iter().enumerate().find(|(_, t)| t.head > n) {
        return Err(structural(format!(
            "token {} has head {} outside 0..={n}",
            i + 1,
            t.head
        )));
    }
    let roots = tokens.iter().filter(|t| t.head == 0).count();
    if roots != 1 {
        return Err(structural(format!(
            "expected exactly one root, found {roots}"
        )));
    }
    for start in 0..n {
        let mut head = tokens[start].head;
        let mut steps = 0;
        while head != 0 {
            steps += 1;
            if steps > n {
                return Err(structural(format!("cycle through token {}", start + 1)));
            }
            head = tokens[head - 1].head;
        }
    }
    Ok(())
}
