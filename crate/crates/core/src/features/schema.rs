use std::ops::Range;
use std::sync::LazyLock;

pub const FEATURE_COUNT: usize = 68;

/// Feature families with their index ranges in the vector.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FeatureGroup {
    Descriptive,
    Readability,
    Lexical,
    PartOfSpeech,
    Dependency,
    Cohesion,
    Quality,
}

impl FeatureGroup {
    pub const ALL: [FeatureGroup; 7] = [
        FeatureGroup::Descriptive,
        FeatureGroup::Readability,
        FeatureGroup::Lexical,
        FeatureGroup::PartOfSpeech,
        FeatureGroup::Dependency,
        FeatureGroup::Cohesion,
        FeatureGroup::Quality,
    ];

    pub fn range(self) -> Range<usize> {
        match self {
            FeatureGroup::Descriptive => 0..12,
            FeatureGroup::Readability => 12..20,
            FeatureGroup::Lexical => 20..28,
            FeatureGroup::PartOfSpeech => 28..45,
            FeatureGroup::Dependency => 45..51,
            FeatureGroup::Cohesion => 51..58,
            FeatureGroup::Quality => 58..68,
        }
    }

    pub fn label(self) -> &'static str {
        match self {
            FeatureGroup::Descriptive => "descriptive",
            FeatureGroup::Readability => "readability",
            FeatureGroup::Lexical => "lexical/information",
            FeatureGroup::PartOfSpeech => "part-of-speech proportions",
            FeatureGroup::Dependency => "dependency/syntax",
            FeatureGroup::Cohesion => "cohesion",
            FeatureGroup::Quality => "quality",
        }
    }

    pub fn of(index: usize) -> FeatureGroup {
        FeatureGroup::ALL
            .into_iter()
            .find(|g| g.range().contains(&index))
            .expect("feature index out of range")
    }
}

/// (name, definition) for every feature, in vector order.
pub const FEATURES: [(&str, &str); FEATURE_COUNT] = [
    ("token_count", "number of tokens of every kind"),
    ("unique_token_count", "distinct case-folded token surfaces"),
    (
        "proportion_unique_tokens",
        "unique_token_count / token_count",
    ),
    ("character_count", "non-whitespace characters"),
    ("sentence_count", "number of sentences"),
    ("mean_token_length", "mean characters per word/number token"),
    (
        "median_token_length",
        "median characters per word/number token",
    ),
    (
        "std_token_length",
        "population std of characters per word/number token",
    ),
    (
        "mean_sentence_length_tokens",
        "mean word/number tokens per sentence",
    ),
    (
        "median_sentence_length_tokens",
        "median word/number tokens per sentence",
    ),
    (
        "std_sentence_length_tokens",
        "population std of word/number tokens per sentence",
    ),
    ("mean_syllables_per_token", "syllables / word tokens"),
    ("flesch_reading_ease", "206.835 - 1.015 W/S - 84.6 Syl/W"),
    ("flesch_kincaid_grade", "0.39 W/S + 11.8 Syl/W - 15.59"),
    (
        "automated_readability_index",
        "4.71 C/W + 0.5 W/S - 21.43, C = letters and digits",
    ),
    ("smog", "1.0430 sqrt(polysyllables * 30 / S) + 3.1291"),
    (
        "gunning_fog",
        "0.4 (W/S + 100 complex/W), complex = 3+ syllables",
    ),
    (
        "coleman_liau",
        "0.0588 L - 0.296 S100 - 15.8 (per 100 words)",
    ),
    ("lix", "W/S + 100 long/W, long = more than 6 letters"),
    ("rix", "long / S"),
    ("type_token_ratio", "U / N over case-folded word tokens"),
    ("root_ttr", "U / sqrt(N)"),
    ("log_ttr", "ln U / ln N"),
    ("hapax_legomena_ratio", "types seen once / U"),
    ("token_entropy", "Shannon entropy of word unigrams, bits"),
    ("normalized_token_entropy", "token_entropy / log2 U"),
    (
        "bigram_entropy",
        "Shannon entropy of within-sentence word bigrams, bits",
    ),
    (
        "character_entropy",
        "Shannon entropy of word-token characters, bits",
    ),
    ("pos_adj", "share of tokens tagged ADJ"),
    ("pos_adp", "share of tokens tagged ADP"),
    ("pos_adv", "share of tokens tagged ADV"),
    ("pos_aux", "share of tokens tagged AUX"),
    ("pos_cconj", "share of tokens tagged CCONJ"),
    ("pos_det", "share of tokens tagged DET"),
    ("pos_intj", "share of tokens tagged INTJ"),
    ("pos_noun", "share of tokens tagged NOUN"),
    ("pos_num", "share of tokens tagged NUM"),
    ("pos_part", "share of tokens tagged PART"),
    ("pos_pron", "share of tokens tagged PRON"),
    ("pos_propn", "share of tokens tagged PROPN"),
    ("pos_punct", "share of tokens tagged PUNCT"),
    ("pos_sconj", "share of tokens tagged SCONJ"),
    ("pos_sym", "share of tokens tagged SYM"),
    ("pos_verb", "share of tokens tagged VERB"),
    ("pos_x", "share of tokens tagged X"),
    (
        "mean_dep_distance",
        "mean |position - head position| over non-root tokens",
    ),
    ("std_dep_distance", "population std of dependency distances"),
    (
        "prop_adjacent_deps",
        "share of dependencies with distance 1",
    ),
    (
        "mean_tree_depth",
        "mean over sentences of the deepest token",
    ),
    ("max_tree_depth", "deepest token in the document"),
    (
        "mean_clausal_relations_per_sentence",
        "ccomp/xcomp/advcl/acl/csubj/relcl/acl:relcl per sentence",
    ),
    ("connective_density", "connectives / word tokens"),
    ("pronoun_density", "personal pronouns / word tokens"),
    (
        "first_person_pronoun_proportion",
        "first-person pronouns / word tokens",
    ),
    (
        "demonstrative_density",
        "this/that/these/those / word tokens",
    ),
    ("definite_article_density", "`the` / word tokens"),
    (
        "adjacent_sentence_overlap_mean",
        "mean Jaccard overlap of content words in consecutive sentences",
    ),
    (
        "adjacent_sentence_overlap_std",
        "population std of that overlap",
    ),
    ("punctuation_density", "punctuation tokens / tokens"),
    ("comma_density", "commas / tokens"),
    ("stop_word_proportion", "stop words / word tokens"),
    ("symbol_to_word_ratio", "symbol tokens / word tokens"),
    (
        "duplicate_word_bigram_fraction",
        "1 - distinct / total within-sentence word bigrams",
    ),
    (
        "duplicate_sentence_fraction",
        "sentences repeating an earlier case-folded sentence",
    ),
    (
        "oov_proportion",
        "word tokens absent from the frequency lexicon",
    ),
    ("sentence_length_cv", "std / mean of sentence lengths"),
    (
        "ellipsis_bullet_density",
        "ellipses and line-initial bullets per sentence",
    ),
    (
        "uppercase_token_proportion",
        "all-caps word tokens of length 2+ / word tokens",
    ),
];

/// FNV-1a over the newline-joined ordered feature names.
pub fn hash_names<'a>(names: impl IntoIterator<Item = &'a str>) -> u64 {
    let mut hash: u64 = 0xcbf2_9ce4_8422_2325;
    for (i, name) in names.into_iter().enumerate() {
        if i > 0 {
            hash = fnv_step(hash, b'\n');
        }
        for &b in name.as_bytes() {
            hash = fnv_step(hash, b);
        }
    }
    hash
}

fn fnv_step(hash: u64, byte: u8) -> u64 {
    (hash ^ byte as u64).wrapping_mul(0x0100_0000_01b3)
}

static SCHEMA_HASH: LazyLock<u64> = LazyLock::new(|| hash_names(FEATURES.iter().map(|(n, _)| *n)));

pub fn schema_hash() -> u64 {
    *SCHEMA_HASH
}

pub fn feature_names() -> impl Iterator<Item = &'static str> {
    FEATURES.iter().map(|(n, _)| *n)
}

pub fn feature_index(name: &str) -> Option<usize> {
    FEATURES.iter().position(|(n, _)| *n == name)
}

/// Plain-text reference of the schema: one line per feature with its
/// index, group and definition.
pub fn schema_document() -> String {
    let mut out = format!(
        "# feature schema ({FEATURE_COUNT} features, hash {:016x})\n",
        schema_hash()
    );
    for group in FeatureGroup::ALL {
        let r = group.range();
        out.push_str(&format!(
            "\n## {} [{}..={}]\n",
            group.label(),
            r.start,
            r.end - 1
        ));
        for i in r {
            let (name, def) = FEATURES[i];
            out.push_str(&format!("{i:>2}  {name:<38} {def}\n"));
        }
    }
    out
}
