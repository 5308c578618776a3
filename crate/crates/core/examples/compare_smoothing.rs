//! Trains all five smoothing methods on the same text and compares
//! held-out perplexity.

use stemlm::eval::evaluate_perplexity;
use stemlm::smoothing::{train, SmoothingKind};
use stemlm::synthetic::markov_corpus;

fn main() -> stemlm::Result<()> {
    let corpus = markov_corpus(3, 2500, 800);
    let (train_part, test) = corpus.split_at(2000);
    println!("{:<12} {:>10} {:>8} {:>8} {:>8}", "method", "perplexity", "3-gram%", "2-gram%", "1-gram%");
    for kind in SmoothingKind::ALL {
        let estimate = train(train_part, 3, &kind.into())?;
        if !estimate.warnings.is_empty() {
            eprintln!("{kind}: {} fallback warnings", estimate.warnings.len());
        }
        let r = evaluate_perplexity(&estimate.model, test)?;
        let hit = |k: usize| r.hits_per_order[&k].percent;
        println!(
            "{:<12} {:>10.2} {:>8.2} {:>8.2} {:>8.2}",
            kind.name(),
            r.perplexity,
            hit(3),
            hit(2),
            hit(1)
        );
    }
    Ok(())
}
