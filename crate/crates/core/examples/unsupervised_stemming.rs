//! Learns stems and suffixes from a synthetic agglutinative corpus.
//!
//! cargo run --example unsupervised_stemming [T_STEM T_SUFFIX]

use std::collections::BTreeSet;

use stemlm::stem_unsup::{build_segmentation_graph, prune_graph, segment_corpus, StemThresholds};
use stemlm::synthetic::agglutinative_corpus;

fn main() -> stemlm::Result<()> {
    let args: Vec<usize> = std::env::args().skip(1).filter_map(|a| a.parse().ok()).collect();
    let (t_stem, t_suffix) = match args[..] {
        [a, b] => (a, b),
        _ => (3, 3),
    };
    let data = agglutinative_corpus(42, 50, 10, 20_000);
    let words: BTreeSet<&str> = data.sentences.iter().flatten().map(String::as_str).collect();

    let graph = build_segmentation_graph(&words);
    let pruned = prune_graph(&graph, StemThresholds::new(t_stem, t_suffix)?);
    println!(
        "graph: {} prefixes, {} suffixes, {} edges -> {} stems, {} suffixes, {} edges",
        graph.prefix_count(),
        graph.suffix_count(),
        graph.edge_count(),
        pruned.prefix_count(),
        pruned.suffix_count(),
        pruned.edge_count()
    );
    let found = data.suffixes.iter().filter(|s| pruned.contains_suffix(s)).count();
    println!("true suffixes recovered: {found}/{}", data.suffixes.len());
    println!("learned suffixes: {:?}", pruned.suffixes().collect::<Vec<_>>());

    let (segmented, report) = segment_corpus(&data.sentences, &pruned, '+');
    println!("{}", segmented[0].to_line());
    println!(
        "unique words {} -> {}",
        report.unique_words_before, report.unique_words_after
    );
    Ok(())
}
