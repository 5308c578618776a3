//! N-gram counts, count-of-counts and continuation counts.

use stemlm::corpus::{build_vocabulary, tokenize_line};
use stemlm::counts::{count_ngrams, write_counts};

fn main() -> stemlm::Result<()> {
    let corpus: Vec<_> = ["the cat sat", "the cat ran", "a dog sat"]
        .iter()
        .map(|l| tokenize_line(l))
        .collect();
    let (vocab, _) = build_vocabulary(&corpus)?;
    let table = count_ngrams(&corpus, 3, &vocab)?;
    write_counts(std::io::stdout().lock(), &table, &vocab)?;
    for k in 1..=3 {
        println!("order {k}: count-of-counts {:?}", table.count_of_counts(k)?);
    }
    let sat = [vocab.id("sat").unwrap()];
    println!("distinct words before 'sat': {}", table.continuation_count(&sat));
    Ok(())
}
