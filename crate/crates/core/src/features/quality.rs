use std::collections::HashSet;

use super::descriptive::sentence_lengths;
use super::lexical::{sentence_words, word_bigrams};
use super::stats::{mean, ratio, std_dev};
use crate::text::{fold, Document, Lexicons, TokenKind};

const BULLETS: &[char] = &['•', '◦', '▪', '‣', '·', '-', '*', '–'];

fn is_ellipsis(surface: &str) -> bool {
    surface.contains('…') || (surface.len() >= 3 && surface.chars().all(|c| c == '.'))
}

fn bullet_lines(source: &str) -> usize {
    source
        .lines()
        .filter(|line| {
            let mut chars = line.trim_start().chars();
            matches!(
                (chars.next(), chars.next()),
                (Some(b), Some(w)) if BULLETS.contains(&b) && w.is_whitespace()
            )
        })
        .count()
}

fn is_all_caps(word: &str) -> bool {
    word.chars().count() >= 2
        && word.chars().any(char::is_alphabetic)
        && !word.chars().any(char::is_lowercase)
}

/// Group G. Punctuation and comma densities are per token; everything else
/// needs at least one word token.
pub fn quality_stats(doc: &Document, lex: &Lexicons) -> [Option<f64>; 10] {
    let tokens = &doc.tokens;
    let punct = tokens
        .iter()
        .filter(|t| t.kind == TokenKind::Punctuation)
        .count();
    let commas = tokens.iter().filter(|t| t.surface == ",").count();
    let mut out = [None; 10];
    out[0] = ratio(punct, tokens.len());
    out[1] = ratio(commas, tokens.len());

    let sentences = sentence_words(doc);
    let words: Vec<&str> = sentences.iter().flatten().map(String::as_str).collect();
    let n = words.len();
    if n == 0 {
        return out;
    }
    let stop = words
        .iter()
        .filter(|w| lex.stop_words.contains(**w))
        .count();
    let symbols = tokens
        .iter()
        .filter(|t| t.kind == TokenKind::Symbol)
        .count();
    let bigrams = word_bigrams(&sentences);
    let distinct_bigrams: HashSet<_> = bigrams.iter().collect();
    let mut seen = HashSet::new();
    let repeated_sentences = doc
        .sentences
        .iter()
        .filter(|s| {
            let key: Vec<String> = tokens[(*s).clone()]
                .iter()
                .map(|t| fold(&t.surface))
                .collect();
            !seen.insert(key)
        })
        .count();
    let oov = words.iter().filter(|w| !lex.in_vocabulary(w)).count();
    let lengths = sentence_lengths(doc);
    let cv = match (mean(&lengths), std_dev(&lengths)) {
        (Some(m), Some(s)) if m > 0.0 => Some(s / m),
        _ => None,
    };
    let ellipses = tokens
        .iter()
        .filter(|t| t.kind == TokenKind::Punctuation && is_ellipsis(&t.surface))
        .count();
    let caps = tokens
        .iter()
        .filter(|t| t.kind == TokenKind::Word && is_all_caps(&t.surface))
        .count();

    out[2] = ratio(stop, n);
    out[3] = ratio(symbols, n);
    out[4] =
        (!bigrams.is_empty()).then(|| 1.0 - distinct_bigrams.len() as f64 / bigrams.len() as f64);
    out[5] = ratio(repeated_sentences, doc.sentences.len());
    out[6] = ratio(oov, n);
    out[7] = cv;
    out[8] = ratio(ellipses + bullet_lines(&doc.source), doc.sentences.len());
    out[9] = ratio(caps, n);
    out
}
