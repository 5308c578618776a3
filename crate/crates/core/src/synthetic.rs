//! Seeded generators for synthetic corpora used by tests and examples.

use std::collections::BTreeSet;

use rand::distributions::{Distribution, WeightedIndex};
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::corpus::SentenceTokens;

const LETTERS: &[u8] = b"abcdefghijklmnopqrstuvwxyz";

/// Weights proportional to `1 / rank^exponent` for ranks `1..=n`.
pub fn zipf_weights(n: usize, exponent: f64) -> Vec<f64> {
    (1..=n).map(|r| (r as f64).powf(-exponent)).collect()
}

fn random_string<R: Rng>(rng: &mut R, alphabet: &[char], len: usize) -> String {
    (0..len).map(|_| *alphabet.choose(rng).unwrap()).collect()
}

/// `n` distinct random words of 2 to 9 code points, mixing Latin letters
/// and Telugu letters and vowel signs.
pub fn random_words(seed: u64, n: usize) -> Vec<String> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut alphabet: Vec<char> = LETTERS.iter().map(|&b| b as char).collect();
    alphabet.extend(('\u{0C15}'..='\u{0C28}').chain('\u{0C3E}'..='\u{0C4C}'));
    let mut seen = BTreeSet::new();
    let mut words = Vec::with_capacity(n);
    while words.len() < n {
        let len = rng.gen_range(2..=9);
        let w = random_string(&mut rng, &alphabet, len);
        if seen.insert(w.clone()) {
            words.push(w);
        }
    }
    words
}

/// A corpus whose words are all `stem + suffix` concatenations.
#[derive(Debug, Clone)]
pub struct AgglutinativeCorpus {
    pub stems: Vec<String>,
    pub suffixes: Vec<String>,
    pub sentences: Vec<SentenceTokens>,
}

/// Builds `n_stems` five-letter stems and `n_suffixes` suffixes of two or
/// three letters with pairwise distinct first letters. Every one of the
/// `n_stems * n_suffixes` forms occurs at least once; `extra_tokens` more
/// tokens are drawn with Zipf-distributed stem and suffix ranks.
pub fn agglutinative_corpus(
    seed: u64,
    n_stems: usize,
    n_suffixes: usize,
    extra_tokens: usize,
) -> AgglutinativeCorpus {
    assert!(n_suffixes <= LETTERS.len(), "at most 26 suffixes");
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let alphabet: Vec<char> = LETTERS.iter().map(|&b| b as char).collect();

    let mut stems = BTreeSet::new();
    while stems.len() < n_stems {
        stems.insert(random_string(&mut rng, &alphabet, 5));
    }
    let mut stems: Vec<String> = stems.into_iter().collect();
    stems.shuffle(&mut rng);

    let mut firsts = alphabet.clone();
    firsts.shuffle(&mut rng);
    let suffixes: Vec<String> = firsts[..n_suffixes]
        .iter()
        .map(|&c| {
            let len = rng.gen_range(1..=2);
            format!("{c}{}", random_string(&mut rng, &alphabet, len))
        })
        .collect();

    let mut tokens: Vec<String> = stems
        .iter()
        .flat_map(|s| suffixes.iter().map(move |x| format!("{s}{x}")))
        .collect();
    let stem_dist = WeightedIndex::new(zipf_weights(n_stems, 1.0)).unwrap();
    let suffix_dist = WeightedIndex::new(zipf_weights(n_suffixes, 1.0)).unwrap();
    for _ in 0..extra_tokens {
        let s = &stems[stem_dist.sample(&mut rng)];
        let x = &suffixes[suffix_dist.sample(&mut rng)];
        tokens.push(format!("{s}{x}"));
    }
    tokens.shuffle(&mut rng);

    let mut sentences = Vec::new();
    let mut rest = tokens.as_slice();
    while !rest.is_empty() {
        let len = rng.gen_range(4..=10).min(rest.len());
        let (head, tail) = rest.split_at(len);
        sentences.push(SentenceTokens::new(head).expect("generated tokens are valid"));
        rest = tail;
    }
    AgglutinativeCorpus {
        stems,
        suffixes,
        sentences,
    }
}

/// Sentences from a first-order Markov source over `vocab_size` words.
/// Each word prefers a handful of successors; otherwise the next word is
/// drawn from a Zipf unigram distribution.
pub fn markov_corpus(seed: u64, sentence_count: usize, vocab_size: usize) -> Vec<SentenceTokens> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let words: Vec<String> = (0..vocab_size).map(|i| format!("w{i:04}")).collect();
    let unigram = WeightedIndex::new(zipf_weights(vocab_size, 1.0)).unwrap();
    let successors: Vec<Vec<usize>> = (0..vocab_size)
        .map(|_| (0..4).map(|_| unigram.sample(&mut rng)).collect())
        .collect();
    (0..sentence_count)
        .map(|_| {
            let len = rng.gen_range(3..=12);
            let mut cur = unigram.sample(&mut rng);
            let mut tokens = vec![words[cur].clone()];
            for _ in 1..len {
                cur = if rng.gen_bool(0.7) {
                    *successors[cur].choose(&mut rng).unwrap()
                } else {
                    unigram.sample(&mut rng)
                };
                tokens.push(words[cur].clone());
            }
            SentenceTokens::new(tokens).expect("generated tokens are valid")
        })
        .collect()
}
