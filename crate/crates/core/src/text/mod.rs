//! Tokenization, sentence segmentation, syllable estimation and a
//! rule-based part-of-speech tagger.

mod document;
mod lexicon;
mod sentences;
mod syllables;
mod tagger;
mod tokenize;

pub use document::Document;
pub use lexicon::{fold, Lexicons, Upos};
pub use sentences::segment_sentences;
pub use syllables::count_syllables;
pub use tagger::tag_pos_fallback;
pub use tokenize::{classify, is_numeric, tokenize, Token, TokenKind};
