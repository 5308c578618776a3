//! Smoothing: turns an [`NGramTable`] into a [`BackoffModel`].
//!
//! Five methods are supported. Good-Turing (Katz), linear and absolute
//! discounting are back-off methods: seen n-grams get discounted relative
//! frequencies and the freed mass is spread over unseen words in proportion
//! to the next-lower order, scaled by a per-context back-off weight.
//! Witten-Bell and Kneser-Ney are interpolated; their interpolated
//! distributions are stored in the equivalent back-off form, with the
//! interpolation weight as the back-off weight.
//!
//! Below the unigram level every method bottoms out in the uniform
//! distribution over the predictable vocabulary (everything except `<s>`).

mod model;

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

pub use model::{BackoffModel, Hit, NGramEntry, SequenceScore, LOG_FLOOR};

use crate::corpus::{build_vocabulary, SentenceTokens, TokenId, Vocabulary, BOS_ID};
use crate::counts::count_ngrams;
use crate::counts::{count_of_counts_of, NGram, NGramTable};
use crate::error::{Error, Result};

/// Probability floor applied to unigrams before renormalization.
pub const UNIGRAM_FLOOR: f64 = 1e-10;

/// Discount substituted when the count-of-counts cannot support a formula.
pub const FALLBACK_DISCOUNT: f64 = 0.5;

/// Default Good-Turing cutoff: counts above it are left undiscounted.
pub const DEFAULT_GT_CUTOFF: u64 = 7;

/// Below this mass the unseen-word denominator of a back-off weight is
/// recomputed by enumeration instead of `1 - sum(seen)`.
const DENOMINATOR_RECOMPUTE: f64 = 0.01;
const DENOMINATOR_ZERO: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum SmoothingKind {
    GoodTuring,
    LinearDiscount,
    AbsoluteDiscount,
    WittenBell,
    KneserNey,
}

impl SmoothingKind {
    pub const ALL: [SmoothingKind; 5] = [
        SmoothingKind::GoodTuring,
        SmoothingKind::LinearDiscount,
        SmoothingKind::AbsoluteDiscount,
        SmoothingKind::WittenBell,
        SmoothingKind::KneserNey,
    ];

    pub fn name(self) -> &'static str {
        match self {
            SmoothingKind::GoodTuring => "good-turing",
            SmoothingKind::LinearDiscount => "linear",
            SmoothingKind::AbsoluteDiscount => "absolute",
            SmoothingKind::WittenBell => "witten-bell",
            SmoothingKind::KneserNey => "kneser-ney",
        }
    }

    fn is_interpolated(self) -> bool {
        matches!(self, SmoothingKind::WittenBell | SmoothingKind::KneserNey)
    }
}

impl fmt::Display for SmoothingKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for SmoothingKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let key = s.to_ascii_lowercase().replace(['_', ' '], "-");
        match key.as_str() {
            "good-turing" | "gt" | "katz" => Ok(SmoothingKind::GoodTuring),
            "linear" | "linear-discount" | "linear-discounting" => Ok(SmoothingKind::LinearDiscount),
            "absolute" | "absolute-discount" | "absolute-discounting" => {
                Ok(SmoothingKind::AbsoluteDiscount)
            }
            "witten-bell" | "wb" => Ok(SmoothingKind::WittenBell),
            "kneser-ney" | "kn" => Ok(SmoothingKind::KneserNey),
            _ => Err(Error::usage(format!(
                "unknown smoothing method {s:?} (expected one of good-turing, linear, absolute, witten-bell, kneser-ney)"
            ))),
        }
    }
}

/// A smoothing method with its parameters.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SmoothingMethod {
    pub kind: SmoothingKind,
    /// Good-Turing: counts `r <= cutoff` are discounted.
    pub good_turing_cutoff: u64,
    /// Fixed discount for absolute discounting and Kneser-Ney.
    pub discount: Option<f64>,
}

impl SmoothingMethod {
    pub fn new(kind: SmoothingKind) -> Self {
        SmoothingMethod {
            kind,
            good_turing_cutoff: DEFAULT_GT_CUTOFF,
            discount: None,
        }
    }

    pub fn with_cutoff(mut self, cutoff: u64) -> Result<Self> {
        if cutoff < 1 {
            return Err(Error::usage("Good-Turing cutoff must be at least 1"));
        }
        self.good_turing_cutoff = cutoff;
        Ok(self)
    }

    pub fn with_discount(mut self, discount: f64) -> Result<Self> {
        if !(discount > 0.0 && discount < 1.0) {
            return Err(Error::usage(format!(
                "discount must lie strictly between 0 and 1, got {discount}"
            )));
        }
        self.discount = Some(discount);
        Ok(self)
    }

    fn validate(&self) -> Result<()> {
        if self.good_turing_cutoff < 1 {
            return Err(Error::usage("Good-Turing cutoff must be at least 1"));
        }
        if let Some(d) = self.discount {
            if !(d > 0.0 && d < 1.0) {
                return Err(Error::usage(format!(
                    "discount must lie strictly between 0 and 1, got {d}"
                )));
            }
        }
        Ok(())
    }
}

impl From<SmoothingKind> for SmoothingMethod {
    fn from(kind: SmoothingKind) -> Self {
        SmoothingMethod::new(kind)
    }
}

/// A degenerate statistic that forced a fallback.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SmoothingWarning {
    pub order: usize,
    pub message: String,
}

impl fmt::Display for SmoothingWarning {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "order {}: {}", self.order, self.message)
    }
}

/// An estimated model plus any warnings raised on the way.
#[derive(Debug, Clone)]
pub struct Estimate {
    pub model: BackoffModel,
    pub warnings: Vec<SmoothingWarning>,
}

/// Good-Turing adjusted count `r* = (r+1) n_{r+1} / n_r`, when both counts
/// of counts are non-zero.
pub fn good_turing_adjusted_count(r: u64, count_of_counts: &BTreeMap<u64, u64>) -> Option<f64> {
    let n_r = count_of_counts.get(&r).copied().unwrap_or(0);
    let n_next = count_of_counts.get(&(r + 1)).copied().unwrap_or(0);
    if n_r == 0 || n_next == 0 {
        return None;
    }
    Some((r + 1) as f64 * n_next as f64 / n_r as f64)
}

/// Absolute discount `D = n_1 / (n_1 + 2 n_2)`, when `n_1, n_2 > 0`.
pub fn absolute_discount(n1: u64, n2: u64) -> Option<f64> {
    if n1 == 0 || n2 == 0 {
        return None;
    }
    Some(n1 as f64 / (n1 as f64 + 2.0 * n2 as f64))
}

/// Interpolated Witten-Bell estimate
/// `(c(h,w) + T(h) P_lower(w)) / (c(h) + T(h))`.
pub fn witten_bell_prob(count_hw: u64, count_h: u64, types_h: u64, p_lower: f64) -> f64 {
    (count_hw as f64 + types_h as f64 * p_lower) / (count_h as f64 + types_h as f64)
}

/// Katz discount ratios `d_r` for `r = 1..=cutoff` (index `r - 1`).
///
/// `d_r = (r*/r - A) / (1 - A)` with `A = (k+1) n_{k+1} / n_1`. Ratios that
/// cannot be computed or fall outside `(0, 1]` are left at 1.
pub fn katz_discounts(
    count_of_counts: &BTreeMap<u64, u64>,
    cutoff: u64,
) -> (Vec<f64>, Vec<String>) {
    let mut ratios = vec![1.0; cutoff as usize];
    let mut notes = Vec::new();
    let n = |r: u64| count_of_counts.get(&r).copied().unwrap_or(0) as f64;
    if n(1) == 0.0 {
        notes.push("no singletons (n_1 = 0); Good-Turing discounting skipped".to_owned());
        return (ratios, notes);
    }
    let common = (cutoff + 1) as f64 * n(cutoff + 1) / n(1);
    if common >= 1.0 {
        notes.push(format!(
            "Katz normalizer (k+1)n_(k+1)/n_1 = {common:.4} >= 1; Good-Turing discounting skipped"
        ));
        return (ratios, notes);
    }
    for r in 1..=cutoff {
        if n(r) == 0.0 {
            continue;
        }
        let Some(adjusted) = good_turing_adjusted_count(r, count_of_counts) else {
            notes.push(format!("n_{} = 0; count {r} left undiscounted", r + 1));
            continue;
        };
        let d = (adjusted / r as f64 - common) / (1.0 - common);
        if d > 0.0 && d <= 1.0 {
            ratios[r as usize - 1] = d;
        } else {
            notes.push(format!("discount ratio {d:.4} for count {r} out of range; left undiscounted"));
        }
    }
    (ratios, notes)
}

/// Kneser-Ney continuation distribution over words:
/// `N1+(. w) / sum_v N1+(. v)`, excluding `<s>`.
pub fn continuation_probabilities(table: &NGramTable) -> BTreeMap<TokenId, f64> {
    if table.order() < 2 {
        return BTreeMap::new();
    }
    let counts: Vec<(TokenId, u64)> = table
        .continuation_counts(1)
        .iter()
        .filter(|(g, _)| g[0] != BOS_ID)
        .map(|(g, &c)| (g[0], c))
        .collect();
    let total: u64 = counts.iter().map(|(_, c)| c).sum();
    counts
        .into_iter()
        .map(|(w, c)| (w, c as f64 / total as f64))
        .collect()
}

/// Counts used at one order, grouped by context.
type Groups = BTreeMap<NGram, Vec<(TokenId, u64)>>;

fn level_groups(table: &NGramTable, k: usize, top: usize, kind: SmoothingKind) -> Groups {
    let use_continuation = kind == SmoothingKind::KneserNey && k < top;
    let mut groups: Groups = BTreeMap::new();
    for (gram, &raw) in table.ngrams(k) {
        // <s> is never predicted.
        if k == 1 && gram[0] == BOS_ID {
            continue;
        }
        let count = if use_continuation && gram[0] != BOS_ID {
            table.continuation_count(gram)
        } else {
            raw
        };
        if count == 0 {
            continue;
        }
        let (context, word) = gram.split_at(k - 1);
        groups.entry(context.to_vec()).or_default().push((word[0], count));
    }
    groups
}

/// Per-order discounting parameters.
enum LevelParams {
    Katz(Vec<f64>),
    Linear(f64),
    Absolute(f64),
    WittenBell,
    KneserNey(f64),
}

impl LevelParams {
    fn prepare(
        method: &SmoothingMethod,
        groups: &Groups,
        order: usize,
        warnings: &mut Vec<SmoothingWarning>,
    ) -> Self {
        let coc = count_of_counts_of(groups.values().flatten().map(|&(_, c)| c));
        let n1 = coc.get(&1).copied().unwrap_or(0);
        let n2 = coc.get(&2).copied().unwrap_or(0);
        let mut warn = |message: String| warnings.push(SmoothingWarning { order, message });
        let discount = |warn: &mut dyn FnMut(String)| match method.discount {
            Some(d) => d,
            None => absolute_discount(n1, n2).unwrap_or_else(|| {
                warn(format!(
                    "n_1 = {n1}, n_2 = {n2}; discount D = {FALLBACK_DISCOUNT} substituted"
                ));
                FALLBACK_DISCOUNT
            }),
        };
        match method.kind {
            SmoothingKind::GoodTuring => {
                let (ratios, notes) = katz_discounts(&coc, method.good_turing_cutoff);
                notes.into_iter().for_each(&mut warn);
                LevelParams::Katz(ratios)
            }
            SmoothingKind::LinearDiscount => {
                let total: u64 = coc.iter().map(|(r, n)| r * n).sum();
                let lambda = if n1 == 0 || n1 >= total {
                    warn(format!(
                        "singleton fraction n_1/N = {n1}/{total} unusable; lambda = {FALLBACK_DISCOUNT} substituted"
                    ));
                    FALLBACK_DISCOUNT
                } else {
                    n1 as f64 / total as f64
                };
                LevelParams::Linear(lambda)
            }
            SmoothingKind::AbsoluteDiscount => LevelParams::Absolute(discount(&mut warn)),
            SmoothingKind::WittenBell => LevelParams::WittenBell,
            SmoothingKind::KneserNey => LevelParams::KneserNey(discount(&mut warn)),
        }
    }

    /// Discounted probabilities of the seen words of one context plus the
    /// mass left for the lower order (freed mass for back-off methods, the
    /// interpolation weight for interpolated ones).
    fn discount(&self, words: &[(TokenId, u64)]) -> (Vec<f64>, f64) {
        let total: u64 = words.iter().map(|&(_, c)| c).sum();
        let total_f = total as f64;
        let types = words.len() as f64;
        match self {
            LevelParams::Katz(ratios) => {
                let mut freed = 0.0;
                let probs = words
                    .iter()
                    .map(|&(_, c)| {
                        let d = ratios.get(c as usize - 1).copied().unwrap_or(1.0);
                        freed += (1.0 - d) * c as f64 / total_f;
                        d * c as f64 / total_f
                    })
                    .collect();
                (probs, freed)
            }
            LevelParams::Linear(lambda) => {
                let probs = words
                    .iter()
                    .map(|&(_, c)| (1.0 - lambda) * c as f64 / total_f)
                    .collect();
                (probs, *lambda)
            }
            LevelParams::Absolute(d) => {
                let probs = words.iter().map(|&(_, c)| (c as f64 - d) / total_f).collect();
                (probs, d * types / total_f)
            }
            LevelParams::WittenBell => {
                let denom = total_f + types;
                let probs = words.iter().map(|&(_, c)| c as f64 / denom).collect();
                (probs, types / denom)
            }
            LevelParams::KneserNey(d) => {
                let probs = words
                    .iter()
                    .map(|&(_, c)| (c as f64 - d).max(0.0) / total_f)
                    .collect();
                (probs, d * types / total_f)
            }
        }
    }
}

/// Estimates a back-off model of `order` from `table`.
pub fn estimate(
    table: &NGramTable,
    vocab: &Vocabulary,
    method: &SmoothingMethod,
    order: usize,
) -> Result<Estimate> {
    method.validate()?;
    if order < 1 || order > table.order() {
        return Err(Error::usage(format!(
            "model order {order} must lie in 1..={} (the table order)",
            table.order()
        )));
    }
    if table.is_empty() {
        return Err(Error::data("cannot estimate a model from an empty table"));
    }
    let interpolated = method.kind.is_interpolated();
    let mut warnings = Vec::new();
    let mut model = BackoffModel::new(vocab.clone(), order);

    // Unigrams: every predictable vocabulary entry gets a probability.
    let groups = level_groups(table, 1, order, method.kind);
    let params = LevelParams::prepare(method, &groups, 1, &mut warnings);
    let seen = groups.get(&Vec::new()).map(Vec::as_slice).unwrap_or(&[]);
    let (seen_probs, leftover) = params.discount(seen);
    let predictable = vocab.len() - 1;
    let uniform = 1.0 / predictable as f64;
    let mut probs = vec![0.0; vocab.len()];
    let mut is_seen = vec![false; vocab.len()];
    for (&(w, _), &p) in seen.iter().zip(&seen_probs) {
        probs[w as usize] = p;
        is_seen[w as usize] = true;
    }
    let unseen = (0..vocab.len())
        .filter(|&w| w != BOS_ID as usize && !is_seen[w])
        .count();
    if interpolated {
        for (w, p) in probs.iter_mut().enumerate() {
            if w != BOS_ID as usize {
                *p += leftover * uniform;
            }
        }
    } else if unseen > 0 {
        let share = leftover / unseen as f64;
        for (w, p) in probs.iter_mut().enumerate() {
            if w != BOS_ID as usize && !is_seen[w] {
                *p = share;
            }
        }
    } else if leftover > 0.0 {
        let scale = 1.0 / (1.0 - leftover);
        probs.iter_mut().for_each(|p| *p *= scale);
    }
    let mut floored = false;
    for (w, p) in probs.iter_mut().enumerate() {
        if w != BOS_ID as usize && *p < UNIGRAM_FLOOR {
            *p = UNIGRAM_FLOOR;
            floored = true;
        }
    }
    if floored {
        let sum: f64 = probs.iter().sum();
        probs.iter_mut().for_each(|p| *p /= sum);
    }
    model.insert(vec![BOS_ID], LOG_FLOOR, None);
    for (w, &p) in probs.iter().enumerate() {
        if w != BOS_ID as usize {
            model.insert(vec![w as TokenId], p.log10(), None);
        }
    }

    for k in 2..=order {
        let groups = level_groups(table, k, order, method.kind);
        let params = LevelParams::prepare(method, &groups, k, &mut warnings);
        let mut level: Vec<(NGram, f64)> = Vec::new();
        let mut backoffs: Vec<(NGram, f64)> = Vec::with_capacity(groups.len());
        for (context, words) in &groups {
            let (mut seen_probs, leftover) = params.discount(words);
            let lower = &context[1..];
            let lower_probs: Vec<f64> = words
                .iter()
                .map(|&(w, _)| model.lookup(lower, w).prob())
                .collect();
            let alpha = if interpolated {
                for (p, lp) in seen_probs.iter_mut().zip(&lower_probs) {
                    *p += leftover * lp;
                }
                leftover
            } else {
                let mut denom = 1.0 - lower_probs.iter().sum::<f64>();
                if denom < DENOMINATOR_RECOMPUTE {
                    denom = unseen_lower_mass(&model, lower, words);
                }
                if denom < DENOMINATOR_ZERO {
                    // Nothing left to back off to: the seen words take up
                    // everything but the (negligible) lower-order remainder.
                    let seen_total = 1.0 - leftover;
                    let scale = (1.0 - denom) / seen_total;
                    seen_probs.iter_mut().for_each(|p| *p *= scale);
                    1.0
                } else {
                    leftover / denom
                }
            };
            for (&(w, _), &p) in words.iter().zip(&seen_probs) {
                let mut gram = context.clone();
                gram.push(w);
                level.push((gram, p.log10()));
            }
            backoffs.push((context.clone(), alpha.log10()));
        }
        for (context, bo) in backoffs {
            let stored = model.set_backoff(&context, bo);
            debug_assert!(stored, "context missing from lower order");
        }
        for (gram, lp) in level {
            model.insert(gram, lp, None);
        }
    }

    Ok(Estimate { model, warnings })
}

/// Exact `sum over unseen w of P(w | lower)` by enumerating the vocabulary.
fn unseen_lower_mass(model: &BackoffModel, lower: &[TokenId], seen: &[(TokenId, u64)]) -> f64 {
    let mut seen_flags = vec![false; model.vocab().len()];
    for &(w, _) in seen {
        seen_flags[w as usize] = true;
    }
    (0..model.vocab().len() as TokenId)
        .filter(|&w| w != BOS_ID && !seen_flags[w as usize])
        .map(|w| model.lookup(lower, w).prob())
        .sum()
}

/// Builds the vocabulary, counts n-grams and estimates a model in one step.
pub fn train(corpus: &[SentenceTokens], order: usize, method: &SmoothingMethod) -> Result<Estimate> {
    let (vocab, _) = build_vocabulary(corpus)?;
    let table = count_ngrams(corpus, order, &vocab)?;
    estimate(&table, &vocab, method, order)
}
