use std::collections::BTreeMap;

use super::stats::{entropy, frequencies, ratio};
use crate::text::{fold, Document, TokenKind};

/// Case-folded word tokens of each sentence, in order.
pub(crate) fn sentence_words(doc: &Document) -> Vec<Vec<String>> {
    doc.sentences
        .iter()
        .map(|s| {
            doc.tokens[s.clone()]
                .iter()
                .filter(|t| t.kind == TokenKind::Word)
                .map(|t| fold(&t.surface))
                .collect()
        })
        .collect()
}

/// Adjacent word pairs, never crossing a sentence boundary.
pub(crate) fn word_bigrams(sentences: &[Vec<String>]) -> Vec<(&str, &str)> {
    sentences
        .iter()
        .flat_map(|s| s.windows(2).map(|w| (w[0].as_str(), w[1].as_str())))
        .collect()
}

/// Group C.
pub fn lexical_information_stats(doc: &Document) -> [Option<f64>; 8] {
    let sentences = sentence_words(doc);
    let words: Vec<&str> = sentences.iter().flatten().map(String::as_str).collect();
    let n = words.len();
    if n == 0 {
        return [None; 8];
    }
    let freq: BTreeMap<&str, usize> = frequencies(words.iter().copied());
    let u = freq.len();
    let (nf, uf) = (n as f64, u as f64);
    let hapax = freq.values().filter(|&&c| c == 1).count();
    let token_entropy = entropy(&freq);
    let bigrams = frequencies(word_bigrams(&sentences));
    let characters = frequencies(words.iter().flat_map(|w| w.chars()));

    [
        ratio(u, n),
        Some(uf / nf.sqrt()),
        (n > 1).then(|| uf.ln() / nf.ln()),
        ratio(hapax, u),
        token_entropy,
        token_entropy
            .filter(|_| u > 1)
            .map(|h| (h / uf.log2()).min(1.0)),
        entropy(&bigrams),
        entropy(&characters),
    ]
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::text::Lexicons;

    fn stats(text: &str) -> [Option<f64>; 8] {
        lexical_information_stats(&Document::from_text(text, Lexicons::builtin()))
    }

    #[test]
    fn uniform_distribution() {
        let c = stats("one two three four");
        assert_eq!(c[4], Some(2.0));
        assert_eq!(c[5], Some(1.0));
        assert_eq!(c[3], Some(1.0));
    }

    #[test]
    fn skewed_distribution() {
        let c = stats("a a b");
        assert!((c[4].unwrap() - 0.918_295_834_054_489_6).abs() < 1e-12);
    }

    #[test]
    fn ttr_family() {
        let c = stats("the cat sat on the mat");
        assert!((c[0].unwrap() - 5.0 / 6.0).abs() < 1e-15);
        assert!((c[1].unwrap() - 5.0 / 6f64.sqrt()).abs() < 1e-15);
        assert!((c[1].unwrap() - 2.0412).abs() < 1e-4);
        assert!((c[2].unwrap() - 5f64.ln() / 6f64.ln()).abs() < 1e-15);
        assert!((c[3].unwrap() - 4.0 / 5.0).abs() < 1e-15);
    }

    #[test]
    fn degenerate_cases() {
        let c = stats("hello");
        assert_eq!(c[2], None);
        assert_eq!(c[5], None);
        assert_eq!(c[6], None);
        assert_eq!(stats("..."), [None; 8]);
    }

    #[test]
    fn bigrams_stay_inside_sentences() {
        let doc = Document::from_text("a b. c d.", Lexicons::builtin());
        let s = sentence_words(&doc);
        assert_eq!(word_bigrams(&s), vec![("a", "b"), ("c", "d")]);
    }
}
