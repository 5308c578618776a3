//! Vocabulary and corpus statistics.
//!
//! cargo run --example corpus_stats [CORPUS]

use stemlm::corpus::{build_vocabulary, read_corpus_file};
use stemlm::synthetic::markov_corpus;

fn main() -> stemlm::Result<()> {
    let corpus = match std::env::args().nth(1) {
        Some(path) => read_corpus_file(path)?,
        None => markov_corpus(1, 500, 200),
    };
    let (vocab, stats) = build_vocabulary(&corpus)?;
    println!("{}", serde_json::to_string_pretty(&stats).unwrap());
    let first: Vec<&str> = vocab.tokens().iter().take(8).map(String::as_str).collect();
    println!("first ids: {first:?}");
    Ok(())
}
