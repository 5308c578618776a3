//! Word error rate and word accuracy from an edit-distance alignment.

use stemlm::corpus::tokenize_line;
use stemlm::eval::{align_wer, alignment, WerReport};

fn main() -> stemlm::Result<()> {
    let reference = tokenize_line("a b c");
    let hypothesis = tokenize_line("a x c d");
    println!("{:?}", alignment(reference.tokens(), hypothesis.tokens()));
    println!("{}", serde_json::to_string_pretty(&align_wer(&reference, &hypothesis)).unwrap());

    // Error counts can also be turned into a report directly.
    let r = WerReport::from_counts(6814, 73, 437, 1001)?;
    println!(
        "{} words, {} errors: WER {:.2}%, accuracy {:.2}%, correct {}",
        r.reference_length,
        r.errors(),
        r.wer_percent,
        r.word_accuracy_percent,
        r.correct
    );
    Ok(())
}
