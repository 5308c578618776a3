//! Writes a model in ARPA format, reads it back and compares.

use stemlm::arpa::{read_arpa, write_arpa};
use stemlm::smoothing::{train, SmoothingKind};
use stemlm::synthetic::markov_corpus;

fn main() -> stemlm::Result<()> {
    let corpus = markov_corpus(5, 50, 12);
    let model = train(&corpus, 2, &SmoothingKind::KneserNey.into())?.model;
    let mut text = Vec::new();
    write_arpa(&model, &mut text)?;
    let back = read_arpa(text.as_slice())?;

    let mut again = Vec::new();
    write_arpa(&back, &mut again)?;
    assert_eq!(text, again);

    let shown: String = String::from_utf8_lossy(&text).lines().take(14).collect::<Vec<_>>().join("\n");
    println!("{shown}\n...");
    println!("{} bytes; rewrite is byte-identical", text.len());
    Ok(())
}
