//! Rejoining marked suffix tokens onto the preceding word.

use serde::Serialize;

use crate::corpus::SentenceTokens;
use crate::error::{Error, Result};
use crate::stem_rules::DEFAULT_MARKER;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct RejoinConfig {
    pub marker: char,
}

impl Default for RejoinConfig {
    fn default() -> Self {
        RejoinConfig {
            marker: DEFAULT_MARKER,
        }
    }
}

impl RejoinConfig {
    pub fn new(marker: char) -> Self {
        RejoinConfig { marker }
    }

    /// Accepts a marker given as a string; it must be exactly one code point.
    pub fn from_marker_str(marker: &str) -> Result<Self> {
        parse_marker(marker).map(RejoinConfig::new)
    }
}

/// Parses a marker argument, which must be a single non-whitespace code point.
pub fn parse_marker(marker: &str) -> Result<char> {
    let mut chars = marker.chars();
    match (chars.next(), chars.next()) {
        (Some(c), None) if !c.is_whitespace() => Ok(c),
        _ => Err(Error::usage(format!(
            "marker must be exactly one non-whitespace character, got {marker:?}"
        ))),
    }
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize)]
pub struct RejoinReport {
    /// Marked tokens glued onto a predecessor.
    pub joined: usize,
    /// Marked tokens with nothing to attach to (emitted with the marker
    /// stripped).
    pub orphans: usize,
}

/// Glues every marked token onto the previous output token.
pub fn rejoin(tokens: &SentenceTokens, config: RejoinConfig) -> SentenceTokens {
    rejoin_counted(tokens, config).0
}

pub fn rejoin_counted(tokens: &SentenceTokens, config: RejoinConfig) -> (SentenceTokens, RejoinReport) {
    let mut out: Vec<String> = Vec::with_capacity(tokens.len());
    let mut report = RejoinReport::default();
    for token in tokens {
        match token.strip_prefix(config.marker) {
            Some(rest) => match out.last_mut() {
                Some(prev) => {
                    prev.push_str(rest);
                    report.joined += 1;
                }
                None => {
                    report.orphans += 1;
                    if !rest.is_empty() {
                        out.push(rest.to_owned());
                    }
                }
            },
            None => out.push(token.clone()),
        }
    }
    (SentenceTokens::from_vec_unchecked(out), report)
}

pub fn rejoin_corpus(corpus: &[SentenceTokens], config: RejoinConfig) -> (Vec<SentenceTokens>, RejoinReport) {
    let mut total = RejoinReport::default();
    let out = corpus
        .iter()
        .map(|s| {
            let (joined, report) = rejoin_counted(s, config);
            total.joined += report.joined;
            total.orphans += report.orphans;
            joined
        })
        .collect();
    (out, total)
}
