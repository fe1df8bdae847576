use std::collections::{HashMap, HashSet};
use std::fmt;
use std::str::FromStr;
use std::sync::LazyLock;

use crate::error::{Error, Result};

/// Universal part-of-speech tags, in the order used by the feature schema.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Upos {
    Adj,
    Adp,
    Adv,
    Aux,
    Cconj,
    Det,
    Intj,
    Noun,
    Num,
    Part,
    Pron,
    Propn,
    Punct,
    Sconj,
    Sym,
    Verb,
    X,
}

impl Upos {
    pub const ALL: [Upos; 17] = [
        Upos::Adj,
        Upos::Adp,
        Upos::Adv,
        Upos::Aux,
        Upos::Cconj,
        Upos::Det,
        Upos::Intj,
        Upos::Noun,
        Upos::Num,
        Upos::Part,
        Upos::Pron,
        Upos::Propn,
        Upos::Punct,
        Upos::Sconj,
        Upos::Sym,
        Upos::Verb,
        Upos::X,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            Upos::Adj => "ADJ",
            Upos::Adp => "ADP",
            Upos::Adv => "ADV",
            Upos::Aux => "AUX",
            Upos::Cconj => "CCONJ",
            Upos::Det => "DET",
            Upos::Intj => "INTJ",
            Upos::Noun => "NOUN",
            Upos::Num => "NUM",
            Upos::Part => "PART",
            Upos::Pron => "PRON",
            Upos::Propn => "PROPN",
            Upos::Punct => "PUNCT",
            Upos::Sconj => "SCONJ",
            Upos::Sym => "SYM",
            Upos::Verb => "VERB",
            Upos::X => "X",
        }
    }

    /// Position of this tag within [`Upos::ALL`].
    pub fn index(self) -> usize {
        self as usize
    }
}

impl fmt::Display for Upos {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Upos {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Upos::ALL
            .iter()
            .copied()
            .find(|t| t.as_str() == s)
            .ok_or_else(|| Error::InvalidInput(format!("unknown UPOS tag `{s}`")))
    }
}

/// Case folding used for every lexicon lookup.
pub fn fold(s: &str) -> String {
    if s.is_ascii() {
        s.to_ascii_lowercase()
    } else {
        s.to_lowercase()
    }
}

const CLOSED_CLASS: &str = include_str!("../../data/closed_class.txt");
const ABBREVIATIONS: &str = include_str!("../../data/abbreviations.txt");
const STOP_WORDS: &str = include_str!("../../data/stop_words.txt");
const CONNECTIVES: &str = include_str!("../../data/connectives.txt");
const PRONOUNS: &str = include_str!("../../data/pronouns.txt");
const FIRST_PERSON: &str = include_str!("../../data/first_person.txt");
const DEMONSTRATIVES: &str = include_str!("../../data/demonstratives.txt");
const VOCABULARY: &str = include_str!("../../data/vocabulary.txt");

static BUILTIN: LazyLock<Lexicons> = LazyLock::new(|| Lexicons {
    closed_class: parse_closed_class(CLOSED_CLASS).expect("embedded closed-class lexicon"),
    abbreviations: parse_word_list(ABBREVIATIONS),
    stop_words: parse_word_list(STOP_WORDS),
    connectives: parse_word_list(CONNECTIVES),
    pronouns: parse_word_list(PRONOUNS),
    first_person: parse_word_list(FIRST_PERSON),
    demonstratives: parse_word_list(DEMONSTRATIVES),
    vocabulary: parse_word_list(VOCABULARY),
});

/// Word lists consulted by the tagger, the segmenter and the feature
/// extractors. All entries are stored case-folded.
#[derive(Debug, Clone)]
pub struct Lexicons {
    pub closed_class: HashMap<String, Upos>,
    pub abbreviations: HashSet<String>,
    pub stop_words: HashSet<String>,
    pub connectives: HashSet<String>,
    pub pronouns: HashSet<String>,
    pub first_person: HashSet<String>,
    pub demonstratives: HashSet<String>,
    pub vocabulary: HashSet<String>,
}

impl Lexicons {
    /// The lexicons embedded in the crate.
    pub fn builtin() -> &'static Lexicons {
        &BUILTIN
    }

    /// Replace the closed-class lexicon with `word<TAB>UPOS` lines.
    pub fn with_closed_class(mut self, text: &str) -> Result<Self> {
        self.closed_class = parse_closed_class(text)?;
        Ok(self)
    }

    /// Replace the abbreviation list (one entry per line, no trailing period).
    pub fn with_abbreviations(mut self, text: &str) -> Result<Self> {
        self.abbreviations = parse_word_list(text);
        Ok(self)
    }

    /// True when the case-folded word is known to the frequency lexicon.
    /// Hyphenated compounds are known when every part is; contractions are
    /// looked up by the part before the apostrophe.
    pub fn in_vocabulary(&self, folded: &str) -> bool {
        if self.vocabulary.contains(folded) {
            return true;
        }
        if let Some(stem) = folded.split(['\'', '’']).next() {
            if stem.len() < folded.len() && !stem.is_empty() {
                return self.in_vocabulary(stem);
            }
        }
        if folded.contains('-') {
            return folded
                .split('-')
                .all(|part| !part.is_empty() && self.vocabulary.contains(part));
        }
        false
    }
}

fn data_lines(text: &str) -> impl Iterator<Item = &str> {
    text.trim_start_matches('\u{feff}')
        .lines()
        .map(str::trim)
        .filter(|l| !l.is_empty() && !l.starts_with('#'))
}

fn parse_word_list(text: &str) -> HashSet<String> {
    data_lines(text).map(fold).collect()
}

fn parse_closed_class(text: &str) -> Result<HashMap<String, Upos>> {
    let mut map = HashMap::new();
    for (n, line) in data_lines(text).enumerate() {
        let mut parts = line.split_whitespace();
        let (Some(word), Some(tag)) = (parts.next(), parts.next()) else {
            return Err(Error::InvalidInput(format!(
                "closed-class entry {} is not `word<TAB>TAG`: {line:?}",
                n + 1
            )));
        };
        let tag: Upos = tag.parse()?;
        map.entry(fold(word)).or_insert(tag);
    }
    Ok(map)
}
