//! Adds growing shares of the test text to the training text and reports
//! perplexity and OOVs on the full test set, as CSV.

use stemlm::cli::{inclusion_sweep, write_sweep_csv, DEFAULT_FRACTIONS};
use stemlm::smoothing::{SmoothingKind, SmoothingMethod};
use stemlm::synthetic::markov_corpus;

fn main() -> stemlm::Result<()> {
    let corpus = markov_corpus(7, 2000, 600);
    let (train_part, test) = corpus.split_at(1600);
    let method = SmoothingMethod::new(SmoothingKind::WittenBell);
    let rows = inclusion_sweep(train_part, test, 3, &method, &DEFAULT_FRACTIONS)?;
    write_sweep_csv(std::io::stdout().lock(), &rows, 3)
}
