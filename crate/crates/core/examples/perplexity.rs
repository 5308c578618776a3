//! Perplexity, OOV rate and n-gram hit rates of a model on held-out text.
//!
//! cargo run --example perplexity [MODEL.arpa TEST]

use std::fs::File;
use std::io::BufReader;

use stemlm::arpa::read_arpa;
use stemlm::corpus::read_corpus_file;
use stemlm::eval::evaluate_perplexity;
use stemlm::smoothing::{train, SmoothingKind};
use stemlm::synthetic::markov_corpus;

fn main() -> stemlm::Result<()> {
    let args: Vec<String> = std::env::args().skip(1).collect();
    let (model, test) = match &args[..] {
        [model, test] => (read_arpa(BufReader::new(File::open(model)?))?, read_corpus_file(test)?),
        _ => {
            let corpus = markov_corpus(9, 1200, 500);
            let (train_part, test) = corpus.split_at(1000);
            let model = train(train_part, 3, &SmoothingKind::WittenBell.into())?.model;
            (model, test.to_vec())
        }
    };
    let report = evaluate_perplexity(&model, &test)?;
    println!("{}", serde_json::to_string_pretty(&report).unwrap());
    Ok(())
}
