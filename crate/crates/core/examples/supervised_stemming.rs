//! Splits Telugu words with the bundled suffix rules and joins them back.

use stemlm::corpus::tokenize_line;
use stemlm::postproc::{rejoin, RejoinConfig};
use stemlm::stem_rules::{split_corpus_supervised, split_word_supervised, SuffixRuleSet};

fn main() {
    let rules = SuffixRuleSet::telugu_default();
    println!("{} rules, marker '{}'", rules.len(), rules.marker());
    for word in ["చదువుచున్నాడు", "చదువుతారు", "ఆంధ్రప్రదేశ్గా", "ఆంధ్రప్రదేశ్లలోని", "పుస్తకం"] {
        println!("{word} -> {}", split_word_supervised(word, &rules).join(" | "));
    }

    let corpus = vec![tokenize_line("ఆంధ్రప్రదేశ్లో చదువుకున్నాను"), tokenize_line("ఆంధ్రప్రదేశ్కు")];
    let (split, report) = split_corpus_supervised(&corpus, &rules);
    for s in &split {
        println!("{}  =>  {}", s.to_line(), rejoin(s, RejoinConfig::default()).to_line());
    }
    println!("{report:?}");
}
