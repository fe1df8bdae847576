use std::collections::HashSet;

use super::stats::{mean, median, ratio, std_dev};
use crate::text::{count_syllables, fold, Document, TokenKind};

/// Number of word/number tokens in each sentence.
pub(crate) fn sentence_lengths(doc: &Document) -> Vec<f64> {
    doc.sentences
        .iter()
        .map(|s| {
            doc.tokens[s.clone()]
                .iter()
                .filter(|t| t.is_lexical())
                .count() as f64
        })
        .collect()
}

pub(crate) fn word_count(doc: &Document) -> usize {
    doc.tokens
        .iter()
        .filter(|t| t.kind == TokenKind::Word)
        .count()
}

/// Group A. Counts are always present; everything else is missing when the
/// document has no word tokens.
pub fn descriptive_stats(doc: &Document) -> [Option<f64>; 12] {
    let token_count = doc.tokens.len();
    let unique: HashSet<String> = doc.tokens.iter().map(|t| fold(&t.surface)).collect();
    let characters = doc.source.chars().filter(|c| !c.is_whitespace()).count();
    let mut out = [None; 12];
    out[0] = Some(token_count as f64);
    out[1] = Some(unique.len() as f64);
    out[3] = Some(characters as f64);
    out[4] = Some(doc.sentences.len() as f64);

    let words = word_count(doc);
    if words == 0 {
        return out;
    }
    let lengths: Vec<f64> = doc
        .tokens
        .iter()
        .filter(|t| t.is_lexical())
        .map(|t| t.surface.chars().count() as f64)
        .collect();
    let sentence_lengths = sentence_lengths(doc);
    let syllables: usize = doc
        .tokens
        .iter()
        .filter(|t| t.kind == TokenKind::Word)
        .map(|t| count_syllables(&t.surface))
        .sum();

    out[2] = ratio(unique.len(), token_count);
    out[5] = mean(&lengths);
    out[6] = median(&lengths);
    out[7] = std_dev(&lengths);
    out[8] = mean(&sentence_lengths);
    out[9] = median(&sentence_lengths);
    out[10] = std_dev(&sentence_lengths);
    out[11] = ratio(syllables, words);
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::text::Lexicons;

    fn stats(text: &str) -> [Option<f64>; 12] {
        descriptive_stats(&Document::from_text(text, Lexicons::builtin()))
    }

    #[test]
    fn hello_world() {
        let a = stats("Hello, world!");
        assert_eq!(a[0], Some(4.0));
        assert_eq!(a[1], Some(4.0));
        assert_eq!(a[3], Some(12.0));
        assert_eq!(a[4], Some(1.0));
        assert_eq!(a[5], Some(5.0));
        assert_eq!(a[7], Some(0.0));
        assert_eq!(a[8], Some(2.0));
    }

    #[test]
    fn repeated_word_uniqueness_is_case_folded() {
        let a = stats("a A a.");
        assert_eq!(a[0], Some(4.0));
        assert_eq!(a[1], Some(2.0));
        assert_eq!(a[2], Some(0.5));
    }

    #[test]
    fn empty_text_keeps_only_counts() {
        let a = stats("");
        assert_eq!(&a[..2], &[Some(0.0), Some(0.0)]);
        assert_eq!(a[3], Some(0.0));
        assert_eq!(a[4], Some(0.0));
        for (i, v) in a.iter().enumerate() {
            if ![0, 1, 3, 4].contains(&i) {
                assert_eq!(*v, None, "index {i}");
            }
        }
    }

    #[test]
    fn sentence_length_statistics() {
        // Sentence lengths 1, 2, 3.
        let a = stats("Go. Go now. Go now please.");
        assert_eq!(a[8], Some(2.0));
        assert_eq!(a[9], Some(2.0));
        assert!((a[10].unwrap() - (2.0f64 / 3.0).sqrt()).abs() < 1e-15);
    }
}
