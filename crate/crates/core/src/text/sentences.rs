use std::collections::HashSet;
use std::ops::Range;

use super::lexicon::fold;
use super::tokenize::{Token, TokenKind};

const CLOSERS: &[char] = &['"', '\'', '”', '’', ')', ']', '}', '»'];

fn is_terminator(t: &Token) -> bool {
    t.kind == TokenKind::Punctuation
        && t.surface
            .chars()
            .all(|c| matches!(c, '.' | '!' | '?' | '…'))
}

fn is_closer(t: &Token) -> bool {
    t.kind == TokenKind::Punctuation && t.surface.chars().all(|c| CLOSERS.contains(&c))
}

/// A lone period glued to a listed abbreviation ("Dr.") does not end a sentence.
fn is_abbreviation_period(tokens: &[Token], i: usize, abbreviations: &HashSet<String>) -> bool {
    if tokens[i].surface != "." || i == 0 {
        return false;
    }
    let prev = &tokens[i - 1];
    prev.kind == TokenKind::Word
        && prev.span.end == tokens[i].span.start
        && abbreviations.contains(&fold(&prev.surface))
}

/// Partition `tokens` into sentences. Returned ranges are half-open token
/// index ranges that cover the input without gaps.
pub fn segment_sentences(tokens: &[Token], abbreviations: &HashSet<String>) -> Vec<Range<usize>> {
    let mut bounds = Vec::new();
    let mut start = 0;
    let mut i = 0;
    while i < tokens.len() {
        if is_terminator(&tokens[i]) && !is_abbreviation_period(tokens, i, abbreviations) {
            let mut end = i + 1;
            while end < tokens.len() && (is_terminator(&tokens[end]) || is_closer(&tokens[end])) {
                end += 1;
            }
            bounds.push(start..end);
            start = end;
            i = end;
        } else {
            i += 1;
        }
    }
    if start < tokens.len() {
        bounds.push(start..tokens.len());
    }
    bounds
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::text::lexicon::Lexicons;
    use crate::text::tokenize::tokenize;
    use proptest::prelude::*;

    fn count(text: &str) -> usize {
        segment_sentences(&tokenize(text), &Lexicons::builtin().abbreviations).len()
    }

    #[test]
    fn two_plain_sentences() {
        assert_eq!(count("I ran. I fell."), 2);
    }

    #[test]
    fn trailing_material_is_a_sentence() {
        assert_eq!(count("Wait"), 1);
        assert_eq!(count("Stop. Wait"), 2);
        assert_eq!(count(""), 0);
    }

    #[test]
    fn abbreviation_suppresses_boundary() {
        assert_eq!(count("Dr. Smith left. He returned."), 2);
        assert_eq!(count("Cats, dogs, etc. are pets. Fine."), 2);
        assert_eq!(count("See e.g. this. Done."), 2);
    }

    #[test]
    fn closers_and_stacked_terminators_stay_attached() {
        let tokens = tokenize("He said \"Stop!\" Then what?! Nothing.");
        let bounds = segment_sentences(&tokens, &Lexicons::builtin().abbreviations);
        assert_eq!(bounds.len(), 3);
        assert_eq!(tokens[bounds[0].end - 1].surface, "\"");
        assert_eq!(tokens[bounds[1].end - 1].surface, "!");
    }

    proptest! {
        #[test]
        fn bounds_partition_tokens(text in "[a-zA-Z .!?\"]{0,80}") {
            let tokens = tokenize(&text);
            let bounds = segment_sentences(&tokens, &Lexicons::builtin().abbreviations);
            let mut next = 0;
            for b in &bounds {
                prop_assert_eq!(b.start, next);
                prop_assert!(b.end > b.start);
                next = b.end;
            }
            prop_assert_eq!(next, tokens.len());
        }
    }
}
