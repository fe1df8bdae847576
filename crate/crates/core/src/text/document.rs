use std::ops::Range;

use super::lexicon::{Lexicons, Upos};
use super::sentences::segment_sentences;
use super::tagger::tag_pos_fallback;
use super::tokenize::{classify, tokenize, Token};
use crate::corpus::conllu::AnnotatedSentence;

/// An analyzed text: tokens, sentence partition and optional annotations.
///
/// `dep_heads` follows CoNLL-U conventions: 0 marks the sentence root,
/// otherwise the value is the 1-based position of the head within the
/// token's own sentence.
#[derive(Debug, Clone, PartialEq)]
pub struct Document {
    pub source: String,
    pub tokens: Vec<Token>,
    pub sentences: Vec<Range<usize>>,
    pub pos_tags: Option<Vec<Upos>>,
    pub dep_heads: Option<Vec<usize>>,
    pub dep_rels: Option<Vec<String>>,
}

impl Document {
    /// Raw-text mode: tokenize, segment and tag with the fallback tagger.
    /// No dependency annotation is produced.
    pub fn from_text(text: &str, lex: &Lexicons) -> Self {
        let text = text.trim_start_matches('\u{feff}');
        let mut tokens = tokenize(text);
        let sentences = segment_sentences(&tokens, &lex.abbreviations);
        for (s, range) in sentences.iter().enumerate() {
            for t in &mut tokens[range.clone()] {
                t.sentence_index = s;
            }
        }
        let tags = tag_pos_fallback(&tokens, &sentences, lex);
        Document {
            source: text.to_string(),
            tokens,
            sentences,
            pos_tags: Some(tags),
            dep_heads: None,
            dep_rels: None,
        }
    }

    /// Annotated mode: sentence boundaries, tags and dependencies come from
    /// the CoNLL-U input. The source text is rebuilt by joining word forms
    /// with single spaces.
    pub fn from_conllu(sentences: &[AnnotatedSentence]) -> Self {
        let mut source = String::new();
        let mut tokens = Vec::new();
        let mut bounds = Vec::with_capacity(sentences.len());
        let mut tags = Vec::new();
        let mut heads = Vec::new();
        let mut rels = Vec::new();
        for (s, sentence) in sentences.iter().enumerate() {
            let first = tokens.len();
            for word in &sentence.tokens {
                if !source.is_empty() {
                    source.push(' ');
                }
                let start = source.len();
                source.push_str(&word.form);
                tokens.push(Token {
                    kind: classify(&word.form),
                    surface: word.form.clone(),
                    span: start..source.len(),
                    sentence_index: s,
                });
                tags.push(word.upos);
                heads.push(word.head);
                rels.push(word.deprel.clone());
            }
            if tokens.len() > first {
                bounds.push(first..tokens.len());
            }
        }
        Document {
            source,
            tokens,
            sentences: bounds,
            pos_tags: Some(tags),
            dep_heads: Some(heads),
            dep_rels: Some(rels),
        }
    }

    pub fn sentence_tokens(&self, s: usize) -> &[Token] {
        &self.tokens[self.sentences[s].clone()]
    }
}
