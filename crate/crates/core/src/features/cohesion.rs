use std::collections::BTreeSet;

use super::lexical::sentence_words;
use super::stats::{mean, ratio, std_dev};
use crate::text::{Document, Lexicons};

fn jaccard(a: &BTreeSet<&str>, b: &BTreeSet<&str>) -> f64 {
    let union = a.union(b).count();
    if union == 0 {
        0.0
    } else {
        a.intersection(b).count() as f64 / union as f64
    }
}

/// Group F: lexicon densities per word token plus content-word overlap of
/// consecutive sentences (missing with fewer than two sentences).
pub fn cohesion_stats(doc: &Document, lex: &Lexicons) -> [Option<f64>; 7] {
    let sentences = sentence_words(doc);
    let words: Vec<&str> = sentences.iter().flatten().map(String::as_str).collect();
    let n = words.len();
    if n == 0 {
        return [None; 7];
    }
    let count = |set: &std::collections::HashSet<String>| {
        words.iter().filter(|w| set.contains(**w)).count()
    };
    let the = words.iter().filter(|w| **w == "the").count();

    let content: Vec<BTreeSet<&str>> = sentences
        .iter()
        .map(|s| {
            s.iter()
                .map(String::as_str)
                .filter(|w| !lex.stop_words.contains(*w))
                .collect()
        })
        .collect();
    let overlaps: Vec<f64> = content.windows(2).map(|w| jaccard(&w[0], &w[1])).collect();

    [
        ratio(count(&lex.connectives), n),
        ratio(count(&lex.pronouns), n),
        ratio(count(&lex.first_person), n),
        ratio(count(&lex.demonstratives), n),
        ratio(the, n),
        mean(&overlaps),
        std_dev(&overlaps),
    ]
}
