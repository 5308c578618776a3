//! Runs the four stemming variants on one train/test split and prints the
//! comparison CSV.
//!
//! cargo run --example experiment [TRAIN TEST]

use stemlm::cli::{experiment_rows, run_experiment, write_experiment_csv, ExperimentConfig};
use stemlm::synthetic::agglutinative_corpus;

fn main() -> stemlm::Result<()> {
    let args: Vec<String> = std::env::args().skip(1).collect();
    let rows = match &args[..] {
        [train, test] => run_experiment(&ExperimentConfig::new(train, test))?,
        _ => {
            let data = agglutinative_corpus(11, 50, 10, 6000);
            let (train, test) = data.sentences.split_at(data.sentences.len() * 4 / 5);
            experiment_rows(train, test, &ExperimentConfig::new("-", "-"))?
        }
    };
    write_experiment_csv(std::io::stdout().lock(), &rows, 3)
}
