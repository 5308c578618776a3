//! N-gram statistics: raw counts plus everything the smoothing methods
//! derive from them (context totals, count-of-counts, distinct successors,
//! continuation counts).

use std::collections::BTreeMap;
use std::io::Write;

use crate::corpus::{SentenceTokens, TokenId, Vocabulary, BOS_ID, EOS_ID};
use crate::error::{Error, Result};

pub type NGram = Vec<TokenId>;

/// All n-gram statistics of a corpus up to a maximum order.
///
/// Per-order vectors are indexed by `k - 1`. Every sentence is padded with
/// a single `<s>` and a single `</s>` before counting.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NGramTable {
    order: usize,
    counts: Vec<BTreeMap<NGram, u64>>,
    context_totals: Vec<BTreeMap<NGram, u64>>,
    successor_types: Vec<BTreeMap<NGram, u64>>,
    continuation_counts: Vec<BTreeMap<NGram, u64>>,
    count_of_counts: Vec<BTreeMap<u64, u64>>,
}

/// Pads a sentence and maps it onto vocabulary ids (unknowns become `<unk>`).
pub fn padded_ids(sentence: &SentenceTokens, vocab: &Vocabulary) -> Vec<TokenId> {
    let mut ids = Vec::with_capacity(sentence.len() + 2);
    ids.push(BOS_ID);
    ids.extend(sentence.iter().map(|t| vocab.id_or_unk(t)));
    ids.push(EOS_ID);
    ids
}

/// Counts every k-gram, `1 <= k <= order`, of the padded corpus.
pub fn count_ngrams<'a, I>(corpus: I, order: usize, vocab: &Vocabulary) -> Result<NGramTable>
where
    I: IntoIterator<Item = &'a SentenceTokens>,
{
    if order < 1 {
        return Err(Error::usage("n-gram order must be at least 1"));
    }
    let mut counts = vec![BTreeMap::new(); order];
    for sentence in corpus {
        let ids = padded_ids(sentence, vocab);
        for k in 1..=order {
            for window in ids.windows(k) {
                *counts[k - 1].entry(window.to_vec()).or_insert(0u64) += 1;
            }
        }
    }
    Ok(NGramTable::from_counts(order, counts))
}

/// `n_r`: how many distinct items occur exactly `r` times (r > 0).
pub fn count_of_counts_of<I: IntoIterator<Item = u64>>(counts: I) -> BTreeMap<u64, u64> {
    let mut coc = BTreeMap::new();
    for c in counts.into_iter().filter(|&c| c > 0) {
        *coc.entry(c).or_insert(0) += 1;
    }
    coc
}

impl NGramTable {
    /// Derives every statistic from raw per-order counts.
    pub fn from_counts(order: usize, counts: Vec<BTreeMap<NGram, u64>>) -> Self {
        assert_eq!(counts.len(), order, "one count map per order");
        let mut context_totals = Vec::with_capacity(order);
        let mut successor_types = Vec::with_capacity(order);
        let mut count_of_counts = Vec::with_capacity(order);
        for level in &counts {
            let mut totals: BTreeMap<NGram, u64> = BTreeMap::new();
            let mut types: BTreeMap<NGram, u64> = BTreeMap::new();
            for (gram, &c) in level {
                if c == 0 {
                    continue;
                }
                let context = &gram[..gram.len() - 1];
                *totals.entry(context.to_vec()).or_insert(0) += c;
                *types.entry(context.to_vec()).or_insert(0) += 1;
            }
            context_totals.push(totals);
            successor_types.push(types);
            count_of_counts.push(count_of_counts_of(level.values().copied()));
        }
        let mut continuation_counts = vec![BTreeMap::new(); order];
        for k in 1..order {
            let mut cont: BTreeMap<NGram, u64> = BTreeMap::new();
            for (gram, &c) in &counts[k] {
                if c > 0 {
                    *cont.entry(gram[1..].to_vec()).or_insert(0) += 1;
                }
            }
            continuation_counts[k - 1] = cont;
        }
        NGramTable {
            order,
            counts,
            context_totals,
            successor_types,
            continuation_counts,
            count_of_counts,
        }
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn is_empty(&self) -> bool {
        self.counts.first().is_none_or(BTreeMap::is_empty)
    }

    /// Raw count of an n-gram (0 when unseen or longer than the order).
    pub fn count(&self, gram: &[TokenId]) -> u64 {
        if gram.is_empty() || gram.len() > self.order {
            return 0;
        }
        self.counts[gram.len() - 1].get(gram).copied().unwrap_or(0)
    }

    /// All k-grams with their counts, sorted by token ids.
    pub fn ngrams(&self, k: usize) -> &BTreeMap<NGram, u64> {
        &self.counts[k - 1]
    }

    /// Sum of counts of all extensions `context + w`.
    pub fn context_total(&self, context: &[TokenId]) -> u64 {
        self.level_lookup(&self.context_totals, context.len() + 1, context)
    }

    /// Contexts (of length `k - 1`) observed at order k with their totals.
    pub fn contexts(&self, k: usize) -> &BTreeMap<NGram, u64> {
        &self.context_totals[k - 1]
    }

    /// `T(h)`: number of distinct words seen after `context`.
    pub fn successor_types(&self, context: &[TokenId]) -> u64 {
        self.level_lookup(&self.successor_types, context.len() + 1, context)
    }

    /// Number of distinct tokens seen immediately before `gram`.
    ///
    /// Zero for grams at the maximum order, which have no longer extension.
    pub fn continuation_count(&self, gram: &[TokenId]) -> u64 {
        self.level_lookup(&self.continuation_counts, gram.len(), gram)
    }

    pub fn continuation_counts(&self, k: usize) -> &BTreeMap<NGram, u64> {
        &self.continuation_counts[k - 1]
    }

    /// Count-of-counts for order `k`.
    pub fn count_of_counts(&self, k: usize) -> Result<&BTreeMap<u64, u64>> {
        if k < 1 || k > self.order {
            return Err(Error::usage(format!(
                "order {k} outside table range 1..={}",
                self.order
            )));
        }
        Ok(&self.count_of_counts[k - 1])
    }

    /// Total number of k-gram tokens.
    pub fn total(&self, k: usize) -> u64 {
        self.counts[k - 1].values().sum()
    }

    fn level_lookup(&self, levels: &[BTreeMap<NGram, u64>], k: usize, key: &[TokenId]) -> u64 {
        if k < 1 || k > self.order {
            return 0;
        }
        levels[k - 1].get(key).copied().unwrap_or(0)
    }

    /// Adds the counts of another table built with the same vocabulary.
    pub fn merge(&self, other: &NGramTable) -> Result<NGramTable> {
        if self.order != other.order {
            return Err(Error::usage(format!(
                "cannot merge tables of order {} and {}",
                self.order, other.order
            )));
        }
        let mut counts = self.counts.clone();
        for (mine, theirs) in counts.iter_mut().zip(&other.counts) {
            for (gram, &c) in theirs {
                *mine.entry(gram.clone()).or_insert(0) += c;
            }
        }
        Ok(NGramTable::from_counts(self.order, counts))
    }
}

/// Writes `token_1 ... token_k<TAB>count` lines, order by order, each order
/// sorted by token ids.
pub fn write_counts<W: Write>(mut sink: W, table: &NGramTable, vocab: &Vocabulary) -> Result<()> {
    for k in 1..=table.order() {
        for (gram, count) in table.ngrams(k) {
            let words: Vec<&str> = gram.iter().map(|&id| vocab.token(id)).collect();
            writeln!(sink, "{}\t{}", words.join(" "), count)?;
        }
    }
    sink.flush()?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corpus::{build_vocabulary, tokenize_line};

    fn table(lines: &[&str], order: usize) -> (NGramTable, Vocabulary) {
        let corpus: Vec<_> = lines.iter().map(|l| tokenize_line(l)).collect();
        let (vocab, _) = build_vocabulary(&corpus).unwrap();
        (count_ngrams(&corpus, order, &vocab).unwrap(), vocab)
    }

    fn ids(vocab: &Vocabulary, words: &str) -> Vec<TokenId> {
        words.split(' ').map(|w| vocab.id(w).unwrap()).collect()
    }

    #[test]
    fn bigrams_of_single_sentence() {
        let (t, v) = table(&["a b"], 2);
        let expected: BTreeMap<NGram, u64> = [
            (ids(&v, "<s> a"), 1),
            (ids(&v, "a b"), 1),
            (ids(&v, "b </s>"), 1),
        ]
        .into_iter()
        .collect();
        assert_eq!(t.ngrams(2), &expected);
    }

    #[test]
    fn unigrams_include_padding() {
        let (t, v) = table(&["a"], 1);
        assert_eq!(t.ngrams(1).len(), 3);
        for w in ["<s>", "a", "</s>"] {
            assert_eq!(t.count(&ids(&v, w)), 1);
        }
    }

    #[test]
    fn repeated_bigram_counts() {
        let (t, v) = table(&["a b", "a b"], 2);
        assert_eq!(t.count(&ids(&v, "a b")), 2);
        assert!(t.count_of_counts(2).unwrap().get(&2).copied().unwrap_or(0) >= 1);
    }

    #[test]
    fn count_of_counts_by_hand() {
        let coc = count_of_counts_of([2, 1, 1]);
        assert_eq!(coc, [(1, 2), (2, 1)].into_iter().collect());
        assert_eq!(coc.iter().map(|(r, n)| r * n).sum::<u64>(), 4);
        assert_eq!(count_of_counts_of([5]), [(5, 1)].into_iter().collect());
    }

    #[test]
    fn count_of_counts_order_out_of_range() {
        let (t, _) = table(&["a"], 2);
        assert!(matches!(t.count_of_counts(3), Err(Error::Usage(_))));
        assert!(matches!(t.count_of_counts(0), Err(Error::Usage(_))));
    }

    #[test]
    fn order_zero_is_usage_error() {
        let v = Vocabulary::from_words(["a"]);
        assert!(matches!(count_ngrams(&[], 0, &v), Err(Error::Usage(_))));
    }

    #[test]
    fn derived_statistics() {
        let (t, v) = table(&["a b", "a c", "d b"], 3);
        let a = ids(&v, "a");
        assert_eq!(t.context_total(&a), 2);
        assert_eq!(t.successor_types(&a), 2);
        // b follows a and d.
        assert_eq!(t.continuation_count(&ids(&v, "b")), 2);
        assert_eq!(t.continuation_count(&ids(&v, "a b")), 1);
        assert_eq!(t.context_total(&[]), t.total(1));
    }

    #[test]
    fn counts_dump_format() {
        let (t, v) = table(&["a"], 2);
        let mut out = Vec::new();
        write_counts(&mut out, &t, &v).unwrap();
        let text = String::from_utf8(out).unwrap();
        assert_eq!(
            text,
            "<s>\t1\n</s>\t1\na\t1\n<s> a\t1\na </s>\t1\n"
        );
    }

    mod props {
        use super::*;
        use proptest::prelude::*;

        fn corpus() -> impl Strategy<Value = Vec<String>> {
            proptest::collection::vec("[a-e]( [a-e]){0,6}", 1..12)
        }

        proptest! {
            #[test]
            fn table_invariants(lines in corpus(), order in 1usize..4) {
                let refs: Vec<&str> = lines.iter().map(String::as_str).collect();
                let (t, _) = table(&refs, order);
                for k in 1..=order {
                    let coc = t.count_of_counts(k).unwrap();
                    prop_assert_eq!(coc.iter().map(|(r, n)| r * n).sum::<u64>(), t.total(k));
                    for (h, &total) in t.contexts(k) {
                        let sum: u64 = t.ngrams(k).iter()
                            .filter(|(g, _)| &g[..k - 1] == h.as_slice())
                            .map(|(_, c)| c).sum();
                        prop_assert_eq!(sum, total);
                        let distinct = t.ngrams(k).keys().filter(|g| &g[..k - 1] == h.as_slice()).count();
                        prop_assert_eq!(t.successor_types(h), distinct as u64);
                        prop_assert!(t.successor_types(h) <= total);
                    }
                }
            }

            #[test]
            fn merge_equals_concatenation(a in corpus(), b in corpus(), order in 1usize..4) {
                let all: Vec<_> = a.iter().chain(&b).map(|l| tokenize_line(l)).collect();
                let (vocab, _) = build_vocabulary(&all).unwrap();
                let left: Vec<_> = a.iter().map(|l| tokenize_line(l)).collect();
                let right: Vec<_> = b.iter().map(|l| tokenize_line(l)).collect();
                let merged = count_ngrams(&left, order, &vocab).unwrap()
                    .merge(&count_ngrams(&right, order, &vocab).unwrap()).unwrap();
                prop_assert_eq!(merged, count_ngrams(&all, order, &vocab).unwrap());
            }
        }
    }
}
