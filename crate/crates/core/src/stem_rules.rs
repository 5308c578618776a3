//! Rule-based (supervised) splitting of inflected words into a stem and a
//! marked suffix token.
//!
//! A rule is a suffix string with an optional constraint on how the
//! remaining stem must end. The bundled Telugu rules cover the sixteen noun
//! case-marker inflections (unconstrained) and the verb suffixes that attach
//! to stems ending in the U vowel sign.

use std::collections::BTreeSet;
use std::fs;
use std::path::Path;

use unicode_normalization::UnicodeNormalization;

use crate::corpus::SentenceTokens;
use crate::error::{Error, Result};

pub const DEFAULT_MARKER: char = '+';
pub const DEFAULT_MIN_STEM_LENGTH: usize = 3;

/// TELUGU VOWEL SIGN U.
pub const U_VOWEL_SIGN: char = '\u{0C41}';

/// Contents of the bundled Telugu rule file.
pub const TELUGU_RULES: &str = include_str!("../data/telugu_suffixes.tsv");

/// File name of the bundled rules inside a data directory.
pub const TELUGU_RULES_FILE: &str = "telugu_suffixes.tsv";

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct SuffixRule {
    pub suffix: String,
    /// The stem must end with this string, when present.
    pub stem_final: Option<String>,
}

impl SuffixRule {
    pub fn new(suffix: &str, stem_final: Option<&str>) -> Self {
        SuffixRule {
            suffix: suffix.nfc().collect(),
            stem_final: stem_final.filter(|c| !c.is_empty()).map(|c| c.nfc().collect()),
        }
    }
}

/// A deduplicated rule set plus splitting parameters.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SuffixRuleSet {
    /// Sorted so that the first applicable rule is the preferred one:
    /// longest suffix first, constrained before unconstrained.
    rules: Vec<SuffixRule>,
    min_stem_length: usize,
    marker: char,
}

fn preference(rule: &SuffixRule) -> (std::cmp::Reverse<usize>, bool, &str, Option<&str>) {
    (
        std::cmp::Reverse(rule.suffix.chars().count()),
        rule.stem_final.is_none(),
        &rule.suffix,
        rule.stem_final.as_deref(),
    )
}

impl SuffixRuleSet {
    pub fn new<I>(rules: I, min_stem_length: usize, marker: char) -> Result<Self>
    where
        I: IntoIterator<Item = SuffixRule>,
    {
        if min_stem_length < 1 {
            return Err(Error::usage("minimum stem length must be at least 1"));
        }
        if marker.is_whitespace() {
            return Err(Error::usage("marker must not be whitespace"));
        }
        let unique: BTreeSet<SuffixRule> = rules.into_iter().collect();
        for rule in &unique {
            if rule.suffix.is_empty() {
                return Err(Error::data("rule with empty suffix"));
            }
            if rule.suffix.contains(marker) {
                return Err(Error::data(format!(
                    "suffix {:?} contains the marker {marker:?}",
                    rule.suffix
                )));
            }
        }
        let mut rules: Vec<SuffixRule> = unique.into_iter().collect();
        rules.sort_by(|a, b| preference(a).cmp(&preference(b)));
        Ok(SuffixRuleSet {
            rules,
            min_stem_length,
            marker,
        })
    }

    /// Parses a rule file: `SUFFIX[<TAB>STEM_FINAL]` per line; blank lines
    /// and `#` comments are skipped.
    pub fn parse(text: &str) -> Result<Self> {
        let mut rules = Vec::new();
        for (i, raw) in text.lines().enumerate() {
            let line_no = i + 1;
            let line = raw.trim_end_matches('\r');
            if line.trim().is_empty() || line.trim_start().starts_with('#') {
                continue;
            }
            let fields: Vec<&str> = line.split('\t').collect();
            if fields.len() > 2 {
                return Err(Error::data_at(line_no, "expected at most two tab-separated fields"));
            }
            let suffix = fields[0].trim();
            let constraint = fields.get(1).map(|c| c.trim());
            if suffix.is_empty() {
                return Err(Error::data_at(line_no, "empty suffix"));
            }
            for field in [Some(suffix), constraint].into_iter().flatten() {
                if field.chars().any(char::is_whitespace) {
                    return Err(Error::data_at(line_no, format!("whitespace inside {field:?}")));
                }
            }
            rules.push(SuffixRule::new(suffix, constraint));
        }
        if rules.is_empty() {
            return Err(Error::data("rule file contains no rules"));
        }
        SuffixRuleSet::new(rules, DEFAULT_MIN_STEM_LENGTH, DEFAULT_MARKER)
    }

    /// The bundled Telugu rules.
    pub fn telugu_default() -> Self {
        SuffixRuleSet::parse(TELUGU_RULES).expect("bundled rule file is valid")
    }

    pub fn with_marker(self, marker: char) -> Result<Self> {
        SuffixRuleSet::new(self.rules, self.min_stem_length, marker)
    }

    pub fn with_min_stem_length(self, min_stem_length: usize) -> Result<Self> {
        SuffixRuleSet::new(self.rules, min_stem_length, self.marker)
    }

    pub fn rules(&self) -> &[SuffixRule] {
        &self.rules
    }

    pub fn len(&self) -> usize {
        self.rules.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rules.is_empty()
    }

    pub fn marker(&self) -> char {
        self.marker
    }

    pub fn min_stem_length(&self) -> usize {
        self.min_stem_length
    }

    pub fn contains(&self, suffix: &str, stem_final: Option<&str>) -> bool {
        self.rules.contains(&SuffixRule::new(suffix, stem_final))
    }

    /// The rule that applies to `word`, if any.
    pub fn matching_rule(&self, word: &str) -> Option<&SuffixRule> {
        let word_chars = word.chars().count();
        self.rules.iter().find(|rule| {
            if word.len() <= rule.suffix.len() || !word.ends_with(rule.suffix.as_str()) {
                return false;
            }
            let stem = &word[..word.len() - rule.suffix.len()];
            if word_chars - rule.suffix.chars().count() < self.min_stem_length {
                return false;
            }
            rule.stem_final
                .as_deref()
                .is_none_or(|c| stem.ends_with(c))
        })
    }
}

/// Reads a rule file from disk.
pub fn load_rules(path: impl AsRef<Path>) -> Result<SuffixRuleSet> {
    let path = path.as_ref();
    let text = fs::read(path)?;
    let text = String::from_utf8(text)
        .map_err(|_| Error::data(format!("{}: rule file is not UTF-8", path.display())))?;
    SuffixRuleSet::parse(&text)
}

/// `[stem, marker + suffix]` using the preferred matching rule, or `[word]`.
pub fn split_word_supervised(word: &str, rules: &SuffixRuleSet) -> Vec<String> {
    match rules.matching_rule(word) {
        Some(rule) => {
            let stem = &word[..word.len() - rule.suffix.len()];
            vec![stem.to_owned(), format!("{}{}", rules.marker, rule.suffix)]
        }
        None => vec![word.to_owned()],
    }
}

/// What a corpus splitting pass did.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, serde::Serialize)]
pub struct SplitReport {
    /// Distinct word types that were split.
    pub split_types: usize,
    /// Running tokens that were split.
    pub split_tokens: usize,
    pub unique_words_before: usize,
    pub unique_words_after: usize,
}

/// Applies a per-token splitter to every sentence and tallies the result.
pub(crate) fn split_corpus_with<F>(corpus: &[SentenceTokens], mut split: F) -> (Vec<SentenceTokens>, SplitReport)
where
    F: FnMut(&str) -> Vec<String>,
{
    let mut split_types = BTreeSet::new();
    let mut before = BTreeSet::new();
    let mut after = BTreeSet::new();
    let mut split_tokens = 0;
    let mut out = Vec::with_capacity(corpus.len());
    for sentence in corpus {
        let mut tokens = Vec::with_capacity(sentence.len());
        for token in sentence {
            before.insert(token.clone());
            let parts = split(token);
            if parts.len() > 1 {
                split_tokens += 1;
                split_types.insert(token.clone());
            }
            for part in parts {
                if !after.contains(&part) {
                    after.insert(part.clone());
                }
                tokens.push(part);
            }
        }
        out.push(SentenceTokens::from_vec_unchecked(tokens));
    }
    let report = SplitReport {
        split_types: split_types.len(),
        split_tokens,
        unique_words_before: before.len(),
        unique_words_after: after.len(),
    };
    (out, report)
}

/// Splits every token of a corpus independently.
pub fn split_corpus_supervised(
    corpus: &[SentenceTokens],
    rules: &SuffixRuleSet,
) -> (Vec<SentenceTokens>, SplitReport) {
    split_corpus_with(corpus, |w| split_word_supervised(w, rules))
}
