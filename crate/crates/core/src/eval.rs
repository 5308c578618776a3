//! Perplexity, OOV and hit-rate reports, and WER alignment.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::corpus::SentenceTokens;
use crate::error::{Error, Result};
use crate::smoothing::{BackoffModel, SequenceScore};

/// `100 * count / total`, or 0 when `total` is 0.
pub fn percent(count: u64, total: u64) -> f64 {
    if total == 0 {
        0.0
    } else {
        100.0 * count as f64 / total as f64
    }
}

/// OOV rate over all test word tokens.
pub fn oov_rate(oov_count: u64, word_tokens: u64) -> f64 {
    percent(oov_count, word_tokens)
}

/// Share of in-vocabulary word tokens resolved at one n-gram order.
pub fn hit_rate(hits: u64, word_tokens: u64, oov_count: u64) -> f64 {
    percent(hits, word_tokens.saturating_sub(oov_count))
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct HitRate {
    pub count: u64,
    pub percent: f64,
}

/// Test-set statistics of a language model.
///
/// `scored_token_count` and `total_log10_prob` cover every predicted word
/// and the end-of-sentence symbols. OOV words are skipped. The hit counts
/// cover words only, so their sum is `scored_token_count` minus the number
/// of sentences, and their percentages are taken over in-vocabulary word
/// tokens. `oov_rate` is taken over all word tokens.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PerplexityReport {
    pub scored_token_count: u64,
    pub oov_count: u64,
    pub oov_rate: f64,
    pub total_log10_prob: f64,
    pub perplexity: f64,
    pub hits_per_order: BTreeMap<usize, HitRate>,
}

impl PerplexityReport {
    /// Builds a report from raw counts. `hits[k - 1]` is the number of word
    /// tokens resolved at order k.
    pub fn from_counts(
        scored_token_count: u64,
        oov_count: u64,
        total_log10_prob: f64,
        hits: &[u64],
    ) -> Self {
        let scored_words: u64 = hits.iter().sum();
        let word_tokens = scored_words + oov_count;
        let perplexity = if scored_token_count == 0 {
            1.0
        } else {
            10f64.powf(-total_log10_prob / scored_token_count as f64)
        };
        let hits_per_order = hits
            .iter()
            .enumerate()
            .map(|(i, &count)| {
                let rate = HitRate {
                    count,
                    percent: hit_rate(count, word_tokens, oov_count),
                };
                (i + 1, rate)
            })
            .collect();
        PerplexityReport {
            scored_token_count,
            oov_count,
            oov_rate: oov_rate(oov_count, word_tokens),
            total_log10_prob,
            perplexity,
            hits_per_order,
        }
    }

    /// Number of in-vocabulary word tokens.
    pub fn scored_word_count(&self) -> u64 {
        self.hits_per_order.values().map(|h| h.count).sum()
    }

    pub fn word_token_count(&self) -> u64 {
        self.scored_word_count() + self.oov_count
    }

    fn hit_counts(&self) -> Vec<u64> {
        let order = self.hits_per_order.keys().max().copied().unwrap_or(0);
        (1..=order)
            .map(|k| self.hits_per_order.get(&k).map_or(0, |h| h.count))
            .collect()
    }

    /// Combines reports over disjoint test sets.
    pub fn merge(&self, other: &PerplexityReport) -> PerplexityReport {
        let (a, b) = (self.hit_counts(), other.hit_counts());
        let hits: Vec<u64> = (0..a.len().max(b.len()))
            .map(|i| a.get(i).unwrap_or(&0) + b.get(i).unwrap_or(&0))
            .collect();
        PerplexityReport::from_counts(
            self.scored_token_count + other.scored_token_count,
            self.oov_count + other.oov_count,
            self.total_log10_prob + other.total_log10_prob,
            &hits,
        )
    }
}

#[derive(Debug, Default)]
struct ScoreTotals {
    scored: u64,
    oov: u64,
    log10: f64,
    hits: Vec<u64>,
}

impl ScoreTotals {
    fn add(&mut self, score: &SequenceScore) {
        self.scored += score.scored_token_count as u64;
        self.oov += score.oov_count as u64;
        self.log10 += score.total_log10_prob;
        let words = &score.hit_orders[..score.hit_orders.len() - 1];
        for &k in words {
            self.hits[k - 1] += 1;
        }
    }
}

/// Scores every sentence of `test` with `model`.
pub fn evaluate_perplexity<'a, I>(model: &BackoffModel, test: I) -> Result<PerplexityReport>
where
    I: IntoIterator<Item = &'a SentenceTokens>,
{
    let mut totals = ScoreTotals {
        hits: vec![0; model.order()],
        ..Default::default()
    };
    let mut sentences = 0usize;
    for sentence in test {
        totals.add(&model.sequence_logprob(sentence));
        sentences += 1;
    }
    if sentences == 0 {
        return Err(Error::data("test corpus is empty"));
    }
    Ok(PerplexityReport::from_counts(
        totals.scored,
        totals.oov,
        totals.log10,
        &totals.hits,
    ))
}

/// Word error counts of one or more aligned sentence pairs.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct WerReport {
    pub reference_length: u64,
    pub correct: u64,
    pub insertions: u64,
    pub deletions: u64,
    pub substitutions: u64,
    pub wer_percent: f64,
    pub word_accuracy_percent: f64,
}

impl WerReport {
    /// Percentages use `max(reference_length, 1)` as denominator.
    pub fn from_counts(
        reference_length: u64,
        insertions: u64,
        deletions: u64,
        substitutions: u64,
    ) -> Result<Self> {
        let correct = reference_length
            .checked_sub(deletions + substitutions)
            .ok_or_else(|| Error::data("deletions + substitutions exceed reference length"))?;
        let errors = insertions + deletions + substitutions;
        let denom = reference_length.max(1) as f64;
        Ok(WerReport {
            reference_length,
            correct,
            insertions,
            deletions,
            substitutions,
            wer_percent: 100.0 * errors as f64 / denom,
            word_accuracy_percent: 100.0 * (reference_length as f64 - errors as f64) / denom,
        })
    }

    pub fn errors(&self) -> u64 {
        self.insertions + self.deletions + self.substitutions
    }

    pub fn merge(&self, other: &WerReport) -> WerReport {
        WerReport::from_counts(
            self.reference_length + other.reference_length,
            self.insertions + other.insertions,
            self.deletions + other.deletions,
            self.substitutions + other.substitutions,
        )
        .expect("merged counts stay consistent")
    }
}

/// One step of an alignment trace.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum EditOp {
    Match,
    Substitution,
    Deletion,
    Insertion,
}

/// Minimum-edit-distance alignment with unit costs. Ties are resolved in
/// the order match, substitution, deletion, insertion, walking back from
/// the end of both sequences.
pub fn alignment<S: AsRef<str>>(reference: &[S], hypothesis: &[S]) -> Vec<EditOp> {
    let (n, m) = (reference.len(), hypothesis.len());
    let mut d = vec![vec![0usize; m + 1]; n + 1];
    for (i, row) in d.iter_mut().enumerate() {
        row[0] = i;
    }
    for (j, cell) in d[0].iter_mut().enumerate() {
        *cell = j;
    }
    for i in 1..=n {
        for j in 1..=m {
            let same = reference[i - 1].as_ref() == hypothesis[j - 1].as_ref();
            let diag = d[i - 1][j - 1] + usize::from(!same);
            d[i][j] = diag.min(d[i - 1][j] + 1).min(d[i][j - 1] + 1);
        }
    }
    let mut ops = Vec::with_capacity(n.max(m));
    let (mut i, mut j) = (n, m);
    while i > 0 || j > 0 {
        if i > 0 && j > 0 {
            let same = reference[i - 1].as_ref() == hypothesis[j - 1].as_ref();
            if same && d[i][j] == d[i - 1][j - 1] {
                ops.push(EditOp::Match);
                i -= 1;
                j -= 1;
                continue;
            }
            if !same && d[i][j] == d[i - 1][j - 1] + 1 {
                ops.push(EditOp::Substitution);
                i -= 1;
                j -= 1;
                continue;
            }
        }
        if i > 0 && d[i][j] == d[i - 1][j] + 1 {
            ops.push(EditOp::Deletion);
            i -= 1;
        } else {
            ops.push(EditOp::Insertion);
            j -= 1;
        }
    }
    ops.reverse();
    ops
}

/// Aligns `hypothesis` against `reference` and counts the errors.
pub fn align_wer(reference: &SentenceTokens, hypothesis: &SentenceTokens) -> WerReport {
    let (mut ins, mut del, mut sub) = (0, 0, 0);
    for op in alignment(reference.tokens(), hypothesis.tokens()) {
        match op {
            EditOp::Match => {}
            EditOp::Substitution => sub += 1,
            EditOp::Deletion => del += 1,
            EditOp::Insertion => ins += 1,
        }
    }
    WerReport::from_counts(reference.len() as u64, ins, del, sub)
        .expect("alignment counts are consistent")
}

/// Aligns line-parallel corpora and sums the counts.
pub fn corpus_wer(reference: &[SentenceTokens], hypothesis: &[SentenceTokens]) -> Result<WerReport> {
    if reference.len() != hypothesis.len() {
        return Err(Error::data(format!(
            "reference has {} lines but hypothesis has {}",
            reference.len(),
            hypothesis.len()
        )));
    }
    let zero = WerReport::from_counts(0, 0, 0, 0)?;
    Ok(reference
        .iter()
        .zip(hypothesis)
        .map(|(r, h)| align_wer(r, h))
        .fold(zero, |acc, r| acc.merge(&r)))
}
