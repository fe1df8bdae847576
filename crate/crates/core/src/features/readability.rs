//! Classic readability indices over word counts, sentence counts and
//! syllable estimates.

use crate::text::{count_syllables, Document, TokenKind};

/// Raw tallies every index is computed from.
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct ReadabilityCounts {
    pub words: f64,
    pub sentences: f64,
    pub syllables: f64,
    /// Letters and digits inside word tokens.
    pub characters: f64,
    /// Letters only.
    pub letters: f64,
    /// Words of three or more syllables.
    pub polysyllables: f64,
    /// Words with more than six letters.
    pub long_words: f64,
}

impl ReadabilityCounts {
    pub fn from_document(doc: &Document) -> Self {
        let mut c = ReadabilityCounts {
            sentences: doc.sentences.len() as f64,
            ..Default::default()
        };
        for t in doc.tokens.iter().filter(|t| t.kind == TokenKind::Word) {
            let syl = count_syllables(&t.surface);
            let letters = t.surface.chars().filter(|c| c.is_alphabetic()).count();
            c.words += 1.0;
            c.syllables += syl as f64;
            c.characters += t.surface.chars().filter(|c| c.is_alphanumeric()).count() as f64;
            c.letters += letters as f64;
            if syl >= 3 {
                c.polysyllables += 1.0;
            }
            if letters > 6 {
                c.long_words += 1.0;
            }
        }
        c
    }

    fn words_per_sentence(&self) -> f64 {
        self.words / self.sentences
    }

    pub fn flesch_reading_ease(&self) -> f64 {
        206.835 - 1.015 * self.words_per_sentence() - 84.6 * (self.syllables / self.words)
    }

    pub fn flesch_kincaid_grade(&self) -> f64 {
        0.39 * self.words_per_sentence() + 11.8 * (self.syllables / self.words) - 15.59
    }

    pub fn automated_readability_index(&self) -> f64 {
        4.71 * (self.characters / self.words) + 0.5 * self.words_per_sentence() - 21.43
    }

    pub fn smog(&self) -> f64 {
        1.0430 * (self.polysyllables * 30.0 / self.sentences).sqrt() + 3.1291
    }

    pub fn gunning_fog(&self) -> f64 {
        0.4 * (self.words_per_sentence() + 100.0 * self.polysyllables / self.words)
    }

    pub fn coleman_liau(&self) -> f64 {
        let letters_per_100 = 100.0 * self.letters / self.words;
        let sentences_per_100 = 100.0 * self.sentences / self.words;
        0.0588 * letters_per_100 - 0.296 * sentences_per_100 - 15.8
    }

    pub fn lix(&self) -> f64 {
        self.words_per_sentence() + 100.0 * self.long_words / self.words
    }

    pub fn rix(&self) -> f64 {
        self.long_words / self.sentences
    }
}

/// Group B; missing entirely without at least one sentence and one word.
pub fn readability_indices(doc: &Document) -> [Option<f64>; 8] {
    let c = ReadabilityCounts::from_document(doc);
    if c.words == 0.0 || c.sentences == 0.0 {
        return [None; 8];
    }
    [
        c.flesch_reading_ease(),
        c.flesch_kincaid_grade(),
        c.automated_readability_index(),
        c.smog(),
        c.gunning_fog(),
        c.coleman_liau(),
        c.lix(),
        c.rix(),
    ]
    .map(Some)
}
