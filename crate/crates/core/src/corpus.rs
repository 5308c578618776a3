//! Corpus ingestion: tokenization, normalization, vocabulary and corpus
//! statistics.
//!
//! Corpora are plain UTF-8 text with one sentence per line and tokens
//! separated by whitespace. Every token is brought into Unicode canonical
//! composed form (NFC) on the way in so that code-point level splitting in
//! the stemmers sees stable sequences.

use std::collections::{BTreeSet, HashMap};
use std::fs::File;
use std::io::{BufRead, BufReader, Write};
use std::ops::Deref;
use std::path::Path;

use serde::{Deserialize, Serialize};
use unicode_normalization::{is_nfc, UnicodeNormalization};

use crate::error::{Error, Result};

pub const BOS: &str = "<s>";
pub const EOS: &str = "</s>";
pub const UNK: &str = "<unk>";

pub type TokenId = u32;

pub const BOS_ID: TokenId = 0;
pub const EOS_ID: TokenId = 1;
pub const UNK_ID: TokenId = 2;

const RESERVED: [&str; 3] = [BOS, EOS, UNK];

/// The tokens of one sentence, in order.
///
/// Tokens are never empty, never contain whitespace and are NFC-normalized.
#[derive(Debug, Clone, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct SentenceTokens(Vec<String>);

impl SentenceTokens {
    /// Validates and normalizes a list of tokens.
    pub fn new<I, S>(tokens: I) -> Result<Self>
    where
        I: IntoIterator<Item = S>,
        S: AsRef<str>,
    {
        let mut out = Vec::new();
        for token in tokens {
            let token = token.as_ref();
            if token.is_empty() {
                return Err(Error::data("empty token"));
            }
            if token.chars().any(char::is_whitespace) {
                return Err(Error::data(format!("token {token:?} contains whitespace")));
            }
            out.push(normalize(token));
        }
        Ok(SentenceTokens(out))
    }

    /// Caller guarantees the invariants (used by the splitters, whose output
    /// is built from already-normalized tokens).
    pub(crate) fn from_vec_unchecked(tokens: Vec<String>) -> Self {
        debug_assert!(tokens
            .iter()
            .all(|t| !t.is_empty() && !t.chars().any(char::is_whitespace)));
        SentenceTokens(tokens)
    }

    pub fn tokens(&self) -> &[String] {
        &self.0
    }

    pub fn into_tokens(self) -> Vec<String> {
        self.0
    }

    /// Tokens joined by single spaces; the inverse of [`tokenize_line`].
    pub fn to_line(&self) -> String {
        self.0.join(" ")
    }
}

impl Deref for SentenceTokens {
    type Target = [String];

    fn deref(&self) -> &[String] {
        &self.0
    }
}

impl<'a> IntoIterator for &'a SentenceTokens {
    type Item = &'a String;
    type IntoIter = std::slice::Iter<'a, String>;

    fn into_iter(self) -> Self::IntoIter {
        self.0.iter()
    }
}

fn normalize(token: &str) -> String {
    if is_nfc(token) {
        token.to_owned()
    } else {
        token.nfc().collect()
    }
}

/// Splits a line on whitespace runs and NFC-normalizes each token.
pub fn tokenize_line(text: &str) -> SentenceTokens {
    SentenceTokens(text.split_whitespace().map(normalize).collect())
}

/// Tokenizes raw bytes, rejecting invalid UTF-8 with the (1-based) line number.
pub fn tokenize_bytes(bytes: &[u8], line: usize) -> Result<SentenceTokens> {
    match std::str::from_utf8(bytes) {
        Ok(text) => Ok(tokenize_line(text)),
        Err(e) => Err(Error::data_at(
            line,
            format!("invalid UTF-8 at byte {}", e.valid_up_to()),
        )),
    }
}

/// Reads every line, including blank ones, as a sentence.
///
/// Use this where line correspondence matters (reference/hypothesis files).
pub fn read_lines<R: BufRead>(mut reader: R) -> Result<Vec<SentenceTokens>> {
    let mut out = Vec::new();
    let mut buf = Vec::new();
    let mut line = 0;
    loop {
        buf.clear();
        if reader.read_until(b'\n', &mut buf)? == 0 {
            break;
        }
        line += 1;
        while matches!(buf.last(), Some(b'\n' | b'\r')) {
            buf.pop();
        }
        out.push(tokenize_bytes(&buf, line)?);
    }
    Ok(out)
}

/// Reads a corpus, skipping blank lines.
pub fn read_corpus<R: BufRead>(reader: R) -> Result<Vec<SentenceTokens>> {
    let mut sentences = read_lines(reader)?;
    sentences.retain(|s| !s.is_empty());
    Ok(sentences)
}

pub fn read_corpus_file(path: impl AsRef<Path>) -> Result<Vec<SentenceTokens>> {
    let path = path.as_ref();
    let file = File::open(path).map_err(|e| {
        Error::Io(std::io::Error::new(
            e.kind(),
            format!("{}: {e}", path.display()),
        ))
    })?;
    read_corpus(BufReader::new(file))
}

pub fn write_corpus<'a, W, I>(mut sink: W, corpus: I) -> Result<()>
where
    W: Write,
    I: IntoIterator<Item = &'a SentenceTokens>,
{
    for sentence in corpus {
        writeln!(sink, "{}", sentence.to_line())?;
    }
    sink.flush()?;
    Ok(())
}

/// Bijection between token strings and dense ids.
///
/// Ids 0, 1 and 2 always belong to `<s>`, `</s>` and `<unk>`; the remaining
/// words follow in byte-lexicographic order, so two vocabularies built from
/// the same word set are identical regardless of input order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Vocabulary {
    tokens: Vec<String>,
    index: HashMap<String, TokenId>,
}

impl Vocabulary {
    /// Builds a vocabulary from arbitrary words; reserved symbols are
    /// injected and duplicates collapse.
    pub fn from_words<I, S>(words: I) -> Self
    where
        I: IntoIterator<Item = S>,
        S: AsRef<str>,
    {
        let set: BTreeSet<String> = words
            .into_iter()
            .map(|w| w.as_ref().to_owned())
            .filter(|w| !RESERVED.contains(&w.as_str()))
            .collect();
        let mut tokens: Vec<String> = RESERVED.iter().map(|s| s.to_string()).collect();
        tokens.extend(set);
        let index = tokens
            .iter()
            .enumerate()
            .map(|(i, t)| (t.clone(), i as TokenId))
            .collect();
        Vocabulary { tokens, index }
    }

    pub fn len(&self) -> usize {
        self.tokens.len()
    }

    /// Never true: the reserved symbols are always present.
    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn id(&self, token: &str) -> Option<TokenId> {
        self.index.get(token).copied()
    }

    /// Id of `token`, or the unknown-word id.
    pub fn id_or_unk(&self, token: &str) -> TokenId {
        self.id(token).unwrap_or(UNK_ID)
    }

    pub fn contains(&self, token: &str) -> bool {
        self.index.contains_key(token)
    }

    pub fn token(&self, id: TokenId) -> &str {
        &self.tokens[id as usize]
    }

    /// All tokens in id order, reserved symbols first.
    pub fn tokens(&self) -> &[String] {
        &self.tokens
    }

    /// Non-reserved words in id order.
    pub fn words(&self) -> impl Iterator<Item = &str> {
        self.tokens[RESERVED.len()..].iter().map(String::as_str)
    }

    /// Union of two vocabularies.
    pub fn merge(&self, other: &Vocabulary) -> Vocabulary {
        Vocabulary::from_words(self.words().chain(other.words()))
    }
}

/// Size statistics of a corpus.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct CorpusStats {
    pub sentence_count: u64,
    pub token_count: u64,
    pub unique_word_count: u64,
}

/// Streaming accumulator behind [`build_vocabulary`].
///
/// `merge` is associative and commutative, so shards may be ingested
/// independently and combined in any order.
#[derive(Debug, Clone, Default)]
pub struct VocabularyBuilder {
    words: BTreeSet<String>,
    sentence_count: u64,
    token_count: u64,
}

impl VocabularyBuilder {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn add_sentence(&mut self, sentence: &SentenceTokens) {
        self.sentence_count += 1;
        self.token_count += sentence.len() as u64;
        for token in sentence {
            if !self.words.contains(token) {
                self.words.insert(token.clone());
            }
        }
    }

    pub fn merge(mut self, other: VocabularyBuilder) -> Self {
        self.sentence_count += other.sentence_count;
        self.token_count += other.token_count;
        self.words.extend(other.words);
        self
    }

    pub fn finish(self) -> Result<(Vocabulary, CorpusStats)> {
        if self.token_count == 0 {
            return Err(Error::data("corpus contains no tokens"));
        }
        let stats = CorpusStats {
            sentence_count: self.sentence_count,
            token_count: self.token_count,
            unique_word_count: self.words.len() as u64,
        };
        Ok((Vocabulary::from_words(self.words), stats))
    }
}

/// Assigns an id to every distinct token and tallies corpus sizes.
pub fn build_vocabulary<'a, I>(corpus: I) -> Result<(Vocabulary, CorpusStats)>
where
    I: IntoIterator<Item = &'a SentenceTokens>,
{
    let mut builder = VocabularyBuilder::new();
    for sentence in corpus {
        builder.add_sentence(sentence);
    }
    builder.finish()
}

/// Number of distinct tokens in a corpus.
pub fn unique_word_count<'a, I>(corpus: I) -> usize
where
    I: IntoIterator<Item = &'a SentenceTokens>,
{
    let mut seen: BTreeSet<&str> = BTreeSet::new();
    for sentence in corpus {
        seen.extend(sentence.iter().map(String::as_str));
    }
    seen.len()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn s(line: &str) -> SentenceTokens {
        tokenize_line(line)
    }

    #[test]
    fn whitespace_runs_collapse() {
        assert_eq!(s("a  b").tokens(), ["a", "b"]);
        assert_eq!(s(" \ta\t b \n").tokens(), ["a", "b"]);
    }

    #[test]
    fn empty_line_is_empty_sentence() {
        assert!(s("").is_empty());
        assert!(s("   ").is_empty());
    }

    #[test]
    fn decomposed_input_is_composed() {
        // "e" + COMBINING ACUTE ACCENT composes to U+00E9.
        let t = s("caf\u{0065}\u{0301}");
        assert_eq!(t.len(), 1);
        assert_eq!(t[0], "caf\u{00e9}");
        // Telugu AI length mark: U+0C46 + U+0C56 composes to U+0C48.
        let t = s("\u{0C2A}\u{0C46}\u{0C56}\u{0C28}");
        assert_eq!(t[0], "\u{0C2A}\u{0C48}\u{0C28}");
    }

    #[test]
    fn invalid_utf8_reports_line() {
        let input: &[u8] = b"a b\nc \xff d\n";
        match read_lines(input) {
            Err(Error::Data { line: Some(2), .. }) => {}
            other => panic!("expected data error on line 2, got {other:?}"),
        }
    }

    #[test]
    fn read_corpus_skips_blank_lines_read_lines_keeps_them() {
        let input: &[u8] = b"a b\n\nc\r\n";
        assert_eq!(read_corpus(input).unwrap().len(), 2);
        assert_eq!(read_lines(input).unwrap().len(), 3);
    }

    #[test]
    fn vocabulary_counts_by_hand() {
        let corpus = vec![s("a b"), s("b c")];
        let (vocab, stats) = build_vocabulary(&corpus).unwrap();
        assert_eq!(
            stats,
            CorpusStats {
                sentence_count: 2,
                token_count: 4,
                unique_word_count: 3
            }
        );
        assert_eq!(vocab.len(), 6);
    }

    #[test]
    fn minimal_corpus_has_reserved_symbols() {
        let (vocab, _) = build_vocabulary(&[s("a")]).unwrap();
        assert_eq!(vocab.len(), 4);
        assert_eq!(vocab.id(BOS), Some(BOS_ID));
        assert_eq!(vocab.id(EOS), Some(EOS_ID));
        assert_eq!(vocab.id(UNK), Some(UNK_ID));
        assert_eq!(vocab.id("a"), Some(3));
        assert_eq!(vocab.id_or_unk("zzz"), UNK_ID);
    }

    #[test]
    fn empty_corpus_is_an_error() {
        assert!(build_vocabulary(&[]).is_err());
        assert!(build_vocabulary(&[s("")]).is_err());
    }

    #[test]
    fn new_rejects_bad_tokens() {
        assert!(SentenceTokens::new(["a", ""]).is_err());
        assert!(SentenceTokens::new(["a b"]).is_err());
        assert!(SentenceTokens::new(["ok"]).is_ok());
    }

    #[test]
    fn builder_merge_matches_single_pass() {
        let corpus = vec![s("a b"), s("b c d"), s("a")];
        let mut left = VocabularyBuilder::new();
        left.add_sentence(&corpus[0]);
        let mut right = VocabularyBuilder::new();
        right.add_sentence(&corpus[1]);
        right.add_sentence(&corpus[2]);
        let merged = right.merge(left).finish().unwrap();
        assert_eq!(merged, build_vocabulary(&corpus).unwrap());
    }

    mod props {
        use super::*;
        use proptest::prelude::*;

        fn token() -> impl Strategy<Value = String> {
            "[a-d\u{0C15}-\u{0C18}\u{0C41}]{1,4}"
        }

        proptest! {
            #[test]
            fn tokenize_round_trips(tokens in proptest::collection::vec(token(), 0..8)) {
                let sentence = SentenceTokens::new(&tokens).unwrap();
                prop_assert_eq!(tokenize_line(&sentence.to_line()), sentence);
            }

            #[test]
            fn stats_ignore_sentence_order(
                lines in proptest::collection::vec(proptest::collection::vec(token(), 1..5), 1..8),
                seed in any::<u64>(),
            ) {
                use rand::seq::SliceRandom;
                use rand::SeedableRng;
                let corpus: Vec<_> = lines.iter().map(|l| SentenceTokens::new(l).unwrap()).collect();
                let mut shuffled = corpus.clone();
                shuffled.shuffle(&mut rand_chacha::ChaCha8Rng::seed_from_u64(seed));
                let a = build_vocabulary(&corpus).unwrap();
                let b = build_vocabulary(&shuffled).unwrap();
                prop_assert_eq!(a.1, b.1);
                prop_assert_eq!(a.0, b.0);
            }
        }
    }
}
