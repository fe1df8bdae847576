use std::ops::Range;

use super::lexicon::{fold, Lexicons, Upos};
use super::tokenize::{Token, TokenKind};

const SUFFIXES: &[(&str, Upos)] = &[
    ("ly", Upos::Adv),
    ("ing", Upos::Verb),
    ("ed", Upos::Verb),
    ("ous", Upos::Adj),
    ("ful", Upos::Adj),
    ("ive", Upos::Adj),
    ("able", Upos::Adj),
];

fn suffix_tag(folded: &str) -> Option<Upos> {
    let len = folded.chars().count();
    SUFFIXES
        .iter()
        .find(|(suffix, _)| folded.ends_with(suffix) && len >= suffix.len() + 2)
        .map(|&(_, tag)| tag)
}

/// Rule-based UPOS tagging for raw text: token kind, then the closed-class
/// lexicon, then suffixes, then mid-sentence capitalization, else NOUN.
pub fn tag_pos_fallback(tokens: &[Token], sentences: &[Range<usize>], lex: &Lexicons) -> Vec<Upos> {
    let mut tags = vec![Upos::Noun; tokens.len()];
    for sentence in sentences {
        let first_word = sentence
            .clone()
            .find(|&i| tokens[i].kind == TokenKind::Word);
        for i in sentence.clone() {
            tags[i] = tag_token(&tokens[i], Some(i) == first_word, lex);
        }
    }
    tags
}

fn tag_token(token: &Token, sentence_initial: bool, lex: &Lexicons) -> Upos {
    match token.kind {
        TokenKind::Punctuation => return Upos::Punct,
        TokenKind::Symbol => return Upos::Sym,
        TokenKind::Number => return Upos::Num,
        TokenKind::Word => {}
    }
    let folded = fold(&token.surface);
    if let Some(&tag) = lex.closed_class.get(&folded) {
        return tag;
    }
    if let Some(tag) = suffix_tag(&folded) {
        return tag;
    }
    if !sentence_initial && token.surface.chars().next().is_some_and(char::is_uppercase) {
        return Upos::Propn;
    }
    Upos::Noun
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::text::Document;

    fn tags(text: &str) -> Vec<(String, Upos)> {
        let doc = Document::from_text(text, Lexicons::builtin());
        doc.tokens
            .iter()
            .map(|t| t.surface.clone())
            .zip(doc.pos_tags.unwrap())
            .collect()
    }

    #[test]
    fn lexicon_and_suffix_rules() {
        let t = tags("the dog ran quickly");
        assert_eq!(t[0].1, Upos::Det);
        assert_eq!(t[3].1, Upos::Adv);
        assert_eq!(tags("walking")[0].1, Upos::Verb);
        assert_eq!(tags("famous")[0].1, Upos::Adj);
        assert_eq!(tags("The")[0].1, Upos::Det);
    }

    #[test]
    fn capitalization_only_mid_sentence() {
        let t = tags("We saw Paris. Paris was big.");
        assert_eq!(t[2], ("Paris".to_string(), Upos::Propn));
        assert_eq!(t[4], ("Paris".to_string(), Upos::Noun));
    }

    #[test]
    fn kinds_map_directly() {
        let t = tags("Pay $5 now!");
        assert_eq!(t[1].1, Upos::Sym);
        assert_eq!(t[2].1, Upos::Num);
        assert_eq!(t[4].1, Upos::Punct);
    }

    #[test]
    fn every_token_tagged() {
        let doc = Document::from_text("A b, c. \"D\" e? F", Lexicons::builtin());
        assert_eq!(doc.pos_tags.as_ref().unwrap().len(), doc.tokens.len());
    }
}
