#![allow(dead_code)]

use std::collections::{BTreeMap, BTreeSet};

use stemlm::corpus::SentenceTokens;

pub const VERB_STEM: &str = "చదువు";

/// Verb suffixes listed for the stem చదువు.
pub const VERB_SUFFIXES: [&str; 27] = [
    "చున్నాడు", "చున్నది", "చున్నావు", "చున్నాను", "చున్నారు", "చున్నవి", "చున్నాము",
    "కున్నాడు", "కున్నది", "కున్నావు", "కున్నాను", "కున్నారు", "కున్నవి", "కున్నాము",
    "తున్నాడు", "తున్నది", "తున్నావు", "తున్నాను", "తున్నారు", "తున్నవి", "తున్నాము",
    "ట", "తాను", "తావు", "ము", "తాము", "తారు",
];

/// Case-marker inflections of a single base noun.
pub const CASE_MARKERS: [&str; 16] = [
    "గా", "తో", "పైన", "ను", "గానే", "లలోని", "తాము", "తాను",
    "లో", "కు", "లోని", "లోనే", "తోనే", "తోనూ", "తారు", "తావు",
];

/// Base nouns and inflected forms as printed, including the short spellings.
pub const NOUN_EXAMPLES: [(&str, &str); 12] = [
    ("ఆంధ్రప్రదేశ్", "గా"),
    ("ఆంధ్రప్రదేశ్", "లో"),
    ("ఆంధ్రప్రదేశ్", "పైన"),
    ("అంధ్రప్రదేశ్", "లోని"),
    ("అంధ్రప్రదేశ్", "లలోని"),
    ("అంధ్రప్రదేశ్", "తోనూ"),
    ("అంధ్రప్రదేశ్", "తో"),
    ("అంధ్రప్రదేశ్", "కు"),
    ("అంధ్రప్రదేశ్", "ను"),
    ("అంధ్రప్రదేశ్", "లోన"),
    ("అంధ్రప్రదేశ్", "గాన"),
    ("అంధ్రప్రదేశ్", "తోన"),
];

/// Every inflected example word, concatenated.
pub fn telugu_example_words() -> Vec<String> {
    let mut words: Vec<String> = VERB_SUFFIXES.iter().map(|s| format!("{VERB_STEM}{s}")).collect();
    words.extend(CASE_MARKERS.iter().map(|s| format!("ఆంధ్రప్రదేశ్{s}")));
    words.extend(NOUN_EXAMPLES.iter().map(|(b, s)| format!("{b}{s}")));
    words.push(VERB_STEM.to_owned());
    words
}

/// Packs words into sentences of at most `width` tokens.
pub fn sentences_of(words: &[String], width: usize) -> Vec<SentenceTokens> {
    words
        .chunks(width)
        .map(|c| SentenceTokens::new(c).unwrap())
        .collect()
}

pub type Edges = BTreeSet<(String, String)>;

/// All internal code-point splits of every word.
pub fn all_splits(words: &[String]) -> Edges {
    let mut edges = BTreeSet::new();
    for w in words {
        let chars: Vec<char> = w.chars().collect();
        for i in 1..chars.len() {
            edges.insert((chars[..i].iter().collect(), chars[i..].iter().collect()));
        }
    }
    edges
}

fn degrees(edges: &Edges) -> (BTreeMap<&str, usize>, BTreeMap<&str, usize>) {
    let mut p = BTreeMap::new();
    let mut s = BTreeMap::new();
    for (a, b) in edges {
        *p.entry(a.as_str()).or_insert(0) += 1;
        *s.entry(b.as_str()).or_insert(0) += 1;
    }
    (p, s)
}

/// Removes every violating vertex at once, round after round, until stable.
pub fn greatest_fixed_point(mut edges: Edges, t_stem: usize, t_suffix: usize) -> Edges {
    loop {
        let (p, s) = degrees(&edges);
        let kept: Edges = edges
            .iter()
            .filter(|(a, b)| p[a.as_str()] >= t_stem && s[b.as_str()] >= t_suffix)
            .cloned()
            .collect();
        if kept.len() == edges.len() {
            return kept;
        }
        edges = kept;
    }
}

/// Deletes one violating vertex at a time, chosen by `pick`.
pub fn peel_in_order<F>(mut edges: Edges, t_stem: usize, t_suffix: usize, mut pick: F) -> Edges
where
    F: FnMut(usize) -> usize,
{
    loop {
        let (p, s) = degrees(&edges);
        let mut violators: Vec<(bool, String)> = p
            .iter()
            .filter(|(_, &d)| d < t_stem)
            .map(|(v, _)| (true, v.to_string()))
            .chain(s.iter().filter(|(_, &d)| d < t_suffix).map(|(v, _)| (false, v.to_string())))
            .collect();
        if violators.is_empty() {
            return edges;
        }
        let (is_prefix, v) = violators.swap_remove(pick(violators.len()));
        edges.retain(|(a, b)| if is_prefix { *a != v } else { *b != v });
    }
}
