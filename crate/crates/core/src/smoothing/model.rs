use std::collections::HashMap;

use crate::corpus::{SentenceTokens, TokenId, Vocabulary, BOS_ID, EOS_ID, UNK_ID};
use crate::counts::NGram;

/// Smallest log10 value ever stored; stands in for log10(0).
pub const LOG_FLOOR: f64 = -99.0;

/// One stored n-gram: its conditional log10 probability and, when the
/// n-gram also serves as a context, its log10 back-off weight.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NGramEntry {
    pub log_prob: f64,
    pub backoff: Option<f64>,
}

/// Result of a back-off lookup.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Hit {
    pub log10_prob: f64,
    /// Length of the longest stored n-gram that ended the lookup.
    pub hit_order: usize,
}

impl Hit {
    pub fn prob(&self) -> f64 {
        10f64.powf(self.log10_prob)
    }
}

/// Score of one padded sentence.
#[derive(Debug, Clone, PartialEq)]
pub struct SequenceScore {
    pub total_log10_prob: f64,
    /// Hit order of every scored token, in sentence order. The last entry
    /// always belongs to the end-of-sentence symbol.
    pub hit_orders: Vec<usize>,
    pub oov_count: usize,
    pub scored_token_count: usize,
}

/// A back-off n-gram language model with log10 probabilities.
#[derive(Debug, Clone, PartialEq)]
pub struct BackoffModel {
    order: usize,
    vocab: Vocabulary,
    levels: Vec<HashMap<NGram, NGramEntry>>,
}

impl BackoffModel {
    /// An empty model of the given order.
    pub fn new(vocab: Vocabulary, order: usize) -> Self {
        BackoffModel {
            order,
            vocab,
            levels: vec![HashMap::new(); order],
        }
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn vocab(&self) -> &Vocabulary {
        &self.vocab
    }

    /// Stores an n-gram. Log values are clamped into `[LOG_FLOOR, 0]` for
    /// probabilities and `[LOG_FLOOR, inf)` for back-off weights.
    ///
    /// Panics if the n-gram is empty or longer than the model order.
    pub fn insert(&mut self, gram: NGram, log_prob: f64, backoff: Option<f64>) {
        assert!(
            !gram.is_empty() && gram.len() <= self.order,
            "n-gram length {} outside 1..={}",
            gram.len(),
            self.order
        );
        let entry = NGramEntry {
            log_prob: clamp_log(log_prob).min(0.0),
            backoff: backoff.map(clamp_log),
        };
        self.levels[gram.len() - 1].insert(gram, entry);
    }

    /// Sets the back-off weight of an already stored n-gram; returns false
    /// when the n-gram is absent.
    pub fn set_backoff(&mut self, gram: &[TokenId], log_backoff: f64) -> bool {
        if gram.is_empty() || gram.len() > self.order {
            return false;
        }
        match self.levels[gram.len() - 1].get_mut(gram) {
            Some(entry) => {
                entry.backoff = Some(clamp_log(log_backoff));
                true
            }
            None => false,
        }
    }

    pub fn entry(&self, gram: &[TokenId]) -> Option<&NGramEntry> {
        if gram.is_empty() || gram.len() > self.order {
            return None;
        }
        self.levels[gram.len() - 1].get(gram)
    }

    /// Stored k-grams (unordered).
    pub fn entries(&self, k: usize) -> &HashMap<NGram, NGramEntry> {
        &self.levels[k - 1]
    }

    /// Log10 back-off weight of a context; 0 (weight 1) when none is stored.
    pub fn backoff_log10(&self, context: &[TokenId]) -> f64 {
        if context.is_empty() {
            return 0.0;
        }
        self.entry(context).and_then(|e| e.backoff).unwrap_or(0.0)
    }

    /// Back-off lookup on token ids. Only the last `order - 1` context
    /// tokens are used.
    pub fn lookup(&self, context: &[TokenId], word: TokenId) -> Hit {
        let max_context = self.order.saturating_sub(1).min(context.len());
        let context = &context[context.len() - max_context..];
        let mut gram: NGram = Vec::with_capacity(context.len() + 1);
        let mut backoff = 0.0;
        for start in 0..=context.len() {
            gram.clear();
            gram.extend_from_slice(&context[start..]);
            gram.push(word);
            if let Some(entry) = self.levels[gram.len() - 1].get(&gram) {
                return Hit {
                    log10_prob: backoff + entry.log_prob,
                    hit_order: gram.len(),
                };
            }
            backoff += self.backoff_log10(&context[start..]);
        }
        Hit {
            log10_prob: backoff + LOG_FLOOR,
            hit_order: 1,
        }
    }

    /// `P(word | context)` on token strings; unknown strings resolve to
    /// `<unk>`. Returns the probability and the hit order.
    pub fn conditional_prob(&self, context: &[&str], word: &str) -> (f64, usize) {
        let ids: Vec<TokenId> = context.iter().map(|t| self.vocab.id_or_unk(t)).collect();
        let hit = self.lookup(&ids, self.vocab.id_or_unk(word));
        (hit.prob(), hit.hit_order)
    }

    /// Scores `<s> w_1 ... w_m </s>`, predicting every word and `</s>`.
    ///
    /// Words missing from the model vocabulary count as OOV: they are not
    /// scored, and they appear as `<unk>` in later contexts.
    pub fn sequence_logprob(&self, sentence: &SentenceTokens) -> SequenceScore {
        let mut history: Vec<TokenId> = Vec::with_capacity(sentence.len() + 2);
        history.push(BOS_ID);
        let mut total = 0.0;
        let mut hit_orders = Vec::with_capacity(sentence.len() + 1);
        let mut oov_count = 0;
        for token in sentence {
            match self.vocab.id(token) {
                Some(id) => {
                    let hit = self.lookup(&history, id);
                    total += hit.log10_prob;
                    hit_orders.push(hit.hit_order);
                    history.push(id);
                }
                None => {
                    oov_count += 1;
                    history.push(UNK_ID);
                }
            }
        }
        let hit = self.lookup(&history, EOS_ID);
        total += hit.log10_prob;
        hit_orders.push(hit.hit_order);
        SequenceScore {
            total_log10_prob: total,
            scored_token_count: hit_orders.len(),
            hit_orders,
            oov_count,
        }
    }
}

fn clamp_log(v: f64) -> f64 {
    if v.is_nan() || v < LOG_FLOOR {
        LOG_FLOOR
    } else {
        v
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corpus::tokenize_line;

    /// Trigram model over {a, b, c} with hand-set values.
    fn toy() -> (BackoffModel, [TokenId; 3]) {
        let vocab = Vocabulary::from_words(["a", "b", "c"]);
        let [a, b, c] = ["a", "b", "c"].map(|w| vocab.id(w).unwrap());
        let mut m = BackoffModel::new(vocab, 3);
        m.insert(vec![BOS_ID], LOG_FLOOR, Some(-0.1));
        for w in [EOS_ID, UNK_ID, a, b, c] {
            m.insert(vec![w], -0.7, None);
        }
        m.set_backoff(&[a], -0.3);
        m.set_backoff(&[b], -0.2);
        m.insert(vec![a, b], -1.0, Some(-0.2));
        m.insert(vec![b, c], -1.0, None);
        m.insert(vec![a, b, c], -0.5, None);
        (m, [a, b, c])
    }

    #[test]
    fn direct_trigram_hit() {
        let (m, [a, b, c]) = toy();
        let hit = m.lookup(&[a, b], c);
        assert_eq!(hit.hit_order, 3);
        assert!((hit.prob() - 0.316_227_77).abs() < 1e-8);
    }

    #[test]
    fn one_step_backoff() {
        // (b, b, c) absent; context (b, b) absent too, so its weight is 1;
        // then (b, c) is stored with log10 -1.0.
        let (m, [a, b, c]) = toy();
        let hit = m.lookup(&[b, b], c);
        assert_eq!(hit.hit_order, 2);
        assert!((hit.log10_prob + 1.0).abs() < 1e-12);
        // Context (a, b) has back-off -0.2 and (b, a) is absent, (a) is a unigram.
        let hit = m.lookup(&[a, b], a);
        assert_eq!(hit.hit_order, 1);
        assert!((hit.log10_prob - (-0.2 - 0.2 - 0.7)).abs() < 1e-12);
    }

    #[test]
    fn backoff_chain_to_unigram() {
        let (m, [a, b, _]) = toy();
        // trigram (a,b,b) and bigram (b,b) absent: bo(a b) + bo(b) + p(b)
        let hit = m.lookup(&[a, b], b);
        assert_eq!(hit.hit_order, 1);
        let expected = 10f64.powf(-0.2 - 0.2 - 0.7);
        assert!((hit.prob() - expected).abs() < 1e-12);
    }

    #[test]
    fn stored_value_is_returned_exactly() {
        let (m, [a, b, c]) = toy();
        let hit = m.lookup(&[a, b], c);
        assert_eq!(hit.log10_prob, -0.5);
    }

    #[test]
    fn sequence_padding_and_oov() {
        let (m, _) = toy();
        let empty = m.sequence_logprob(&tokenize_line(""));
        assert_eq!(empty.scored_token_count, 1);
        let one = m.sequence_logprob(&tokenize_line("a"));
        assert_eq!((one.scored_token_count, one.oov_count), (2, 0));
        let three = m.sequence_logprob(&tokenize_line("a zzz b"));
        assert_eq!((three.scored_token_count, three.oov_count), (3, 1));
        assert_eq!(three.hit_orders.len(), 3);
    }

    #[test]
    fn insert_clamps_minus_infinity() {
        let (mut m, [a, ..]) = toy();
        m.insert(vec![a], f64::NEG_INFINITY, Some(f64::NEG_INFINITY));
        let e = m.entry(&[a]).unwrap();
        assert_eq!(e.log_prob, LOG_FLOOR);
        assert_eq!(e.backoff, Some(LOG_FLOOR));
    }
}
