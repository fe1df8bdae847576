//! Whitespace-and-punctuation tokenizer.
//!
//! Chunks are split on Unicode whitespace. Inside a chunk, a word runs over
//! alphanumeric characters and absorbs an apostrophe, hyphen or period only
//! when it sits between two alphanumerics, and a comma only between two
//! digits. Every other character becomes its own token, except that runs of
//! periods stay together so an ellipsis is a single token.

use std::ops::Range;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum TokenKind {
    Word,
    Punctuation,
    Symbol,
    Number,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Token {
    pub surface: String,
    pub kind: TokenKind,
    /// Byte offsets into the source text.
    pub span: Range<usize>,
    pub sentence_index: usize,
}

impl Token {
    pub fn is_lexical(&self) -> bool {
        matches!(self.kind, TokenKind::Word | TokenKind::Number)
    }
}

const SYMBOLS: &[char] = &[
    '$', '€', '£', '¥', '¢', '₹', '₽', '₩', '₺', '%', '‰', '+', '−', '×', '÷', '=', '<', '>', '^',
    '~', '±', '≤', '≥', '≠', '≈', '∞', '|', '°', '#', '&', '@', '*', '§', '©', '®', '™',
];

pub fn is_symbol_char(c: char) -> bool {
    SYMBOLS.contains(&c)
}

/// Digits, optionally with comma groupings and a single decimal point.
pub fn is_numeric(s: &str) -> bool {
    let bytes = s.as_bytes();
    match (bytes.first(), bytes.last()) {
        (Some(f), Some(l)) if f.is_ascii_digit() && l.is_ascii_digit() => {}
        _ => return false,
    }
    let mut points = 0;
    for &b in bytes {
        match b {
            b'0'..=b'9' | b',' => {}
            b'.' => points += 1,
            _ => return false,
        }
    }
    points <= 1
}

pub fn classify(surface: &str) -> TokenKind {
    if is_numeric(surface) {
        TokenKind::Number
    } else if surface.chars().any(char::is_alphanumeric) {
        TokenKind::Word
    } else if surface.chars().count() == 1 && surface.chars().all(is_symbol_char) {
        TokenKind::Symbol
    } else {
        TokenKind::Punctuation
    }
}

fn joins_word(prev: Option<char>, c: char, next: Option<char>) -> bool {
    if c.is_alphanumeric() {
        return true;
    }
    let (Some(p), Some(n)) = (prev, next) else {
        return false;
    };
    match c {
        '\'' | '’' | '-' | '.' => p.is_alphanumeric() && n.is_alphanumeric(),
        ',' => p.is_ascii_digit() && n.is_ascii_digit(),
        _ => false,
    }
}

pub fn tokenize(text: &str) -> Vec<Token> {
    let mut tokens = Vec::new();
    let chars: Vec<(usize, char)> = text.char_indices().collect();
    let end_of = |i: usize| chars.get(i).map_or(text.len(), |&(b, _)| b);
    let mut i = 0;
    while i < chars.len() {
        let c = chars[i].1;
        if c.is_whitespace() {
            i += 1;
            continue;
        }
        let start = i;
        if c.is_alphanumeric() {
            i += 1;
            while i < chars.len() {
                let prev = Some(chars[i - 1].1);
                let next = chars.get(i + 1).map(|&(_, c)| c);
                if joins_word(prev, chars[i].1, next) {
                    i += 1;
                } else {
                    break;
                }
            }
        } else if c == '.' {
            while i < chars.len() && chars[i].1 == '.' {
                i += 1;
            }
        } else {
            i += 1;
        }
        let span = chars[start].0..end_of(i);
        let surface = text[span.clone()].to_string();
        tokens.push(Token {
            kind: classify(&surface),
            surface,
            span,
            sentence_index: 0,
        });
    }
    tokens
}
