//! Unsupervised stem and suffix discovery.
//!
//! Every vocabulary word is split at every internal code-point boundary.
//! The resulting prefixes and suffixes form the two sides of a bipartite
//! graph whose edges are the splits of real words. Pruning then keeps the
//! largest subgraph in which every prefix has at least `t_stem` distinct
//! suffixes and every suffix has at least `t_suffix` distinct prefixes;
//! the survivors are the learned stems and suffixes.

use std::collections::{BTreeSet, HashMap, VecDeque};
use std::io::{BufRead, Write};

use crate::corpus::SentenceTokens;
use crate::error::{Error, Result};
use crate::stem_rules::{split_corpus_with, SplitReport};

/// Minimum degrees a prefix (stem) and a suffix need to survive pruning.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, serde::Serialize, serde::Deserialize)]
pub struct StemThresholds {
    pub t_stem: usize,
    pub t_suffix: usize,
}

impl StemThresholds {
    pub fn new(t_stem: usize, t_suffix: usize) -> Result<Self> {
        if t_stem < 1 || t_suffix < 1 {
            return Err(Error::usage("stem and suffix thresholds must be at least 1"));
        }
        Ok(StemThresholds { t_stem, t_suffix })
    }
}

/// Bipartite prefix/suffix graph. Vertices are kept in sorted order and
/// adjacency lists are sorted by the opposite side's ids.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct SegmentationGraph {
    prefixes: Vec<String>,
    suffixes: Vec<String>,
    prefix_ids: HashMap<String, u32>,
    suffix_ids: HashMap<String, u32>,
    prefix_adj: Vec<Vec<u32>>,
    suffix_adj: Vec<Vec<u32>>,
}

/// Byte offsets of the internal code-point boundaries of `word`.
fn split_points(word: &str) -> impl Iterator<Item = usize> + '_ {
    word.char_indices().map(|(i, _)| i).filter(|&i| i > 0)
}

impl SegmentationGraph {
    /// Builds the graph from explicit `(prefix, suffix)` edges.
    pub fn from_edges<I, P, S>(edges: I) -> Self
    where
        I: IntoIterator<Item = (P, S)>,
        P: Into<String>,
        S: Into<String>,
    {
        let edges: BTreeSet<(String, String)> = edges
            .into_iter()
            .map(|(p, s)| (p.into(), s.into()))
            .filter(|(p, s)| !p.is_empty() && !s.is_empty())
            .collect();
        let prefixes: Vec<String> = edges
            .iter()
            .map(|(p, _)| p.clone())
            .collect::<BTreeSet<_>>()
            .into_iter()
            .collect();
        let suffixes: Vec<String> = edges
            .iter()
            .map(|(_, s)| s.clone())
            .collect::<BTreeSet<_>>()
            .into_iter()
            .collect();
        let prefix_ids: HashMap<String, u32> = prefixes
            .iter()
            .enumerate()
            .map(|(i, p)| (p.clone(), i as u32))
            .collect();
        let suffix_ids: HashMap<String, u32> = suffixes
            .iter()
            .enumerate()
            .map(|(i, s)| (s.clone(), i as u32))
            .collect();
        let mut prefix_adj = vec![Vec::new(); prefixes.len()];
        let mut suffix_adj = vec![Vec::new(); suffixes.len()];
        for (p, s) in &edges {
            let (pi, si) = (prefix_ids[p], suffix_ids[s]);
            prefix_adj[pi as usize].push(si);
            suffix_adj[si as usize].push(pi);
        }
        prefix_adj.iter_mut().for_each(|a| a.sort_unstable());
        suffix_adj.iter_mut().for_each(|a| a.sort_unstable());
        SegmentationGraph {
            prefixes,
            suffixes,
            prefix_ids,
            suffix_ids,
            prefix_adj,
            suffix_adj,
        }
    }

    pub fn prefixes(&self) -> impl Iterator<Item = &str> {
        self.prefixes.iter().map(String::as_str)
    }

    pub fn suffixes(&self) -> impl Iterator<Item = &str> {
        self.suffixes.iter().map(String::as_str)
    }

    pub fn prefix_count(&self) -> usize {
        self.prefixes.len()
    }

    pub fn suffix_count(&self) -> usize {
        self.suffixes.len()
    }

    pub fn edge_count(&self) -> usize {
        self.prefix_adj.iter().map(Vec::len).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.prefixes.is_empty()
    }

    pub fn contains_prefix(&self, prefix: &str) -> bool {
        self.prefix_ids.contains_key(prefix)
    }

    pub fn contains_suffix(&self, suffix: &str) -> bool {
        self.suffix_ids.contains_key(suffix)
    }

    pub fn prefix_degree(&self, prefix: &str) -> Option<usize> {
        self.prefix_ids
            .get(prefix)
            .map(|&i| self.prefix_adj[i as usize].len())
    }

    pub fn suffix_degree(&self, suffix: &str) -> Option<usize> {
        self.suffix_ids
            .get(suffix)
            .map(|&i| self.suffix_adj[i as usize].len())
    }

    pub fn has_edge(&self, prefix: &str, suffix: &str) -> bool {
        match (self.prefix_ids.get(prefix), self.suffix_ids.get(suffix)) {
            (Some(&p), Some(&s)) => self.prefix_adj[p as usize].binary_search(&s).is_ok(),
            _ => false,
        }
    }

    /// All edges, sorted by prefix then suffix.
    pub fn edges(&self) -> impl Iterator<Item = (&str, &str)> {
        self.prefix_adj.iter().enumerate().flat_map(move |(p, adj)| {
            adj.iter()
                .map(move |&s| (self.prefixes[p].as_str(), self.suffixes[s as usize].as_str()))
        })
    }
}

/// Splits every word at every internal position.
pub fn build_segmentation_graph<I, S>(vocab: I) -> SegmentationGraph
where
    I: IntoIterator<Item = S>,
    S: AsRef<str>,
{
    let mut edges: Vec<(String, String)> = Vec::new();
    let words: BTreeSet<String> = vocab.into_iter().map(|w| w.as_ref().to_owned()).collect();
    for word in &words {
        for i in split_points(word) {
            edges.push((word[..i].to_owned(), word[i..].to_owned()));
        }
    }
    SegmentationGraph::from_edges(edges)
}

/// Iteratively deletes prefixes with degree below `t_stem` and suffixes with
/// degree below `t_suffix` until none is left; returns the surviving graph.
pub fn prune_graph(graph: &SegmentationGraph, thresholds: StemThresholds) -> SegmentationGraph {
    let np = graph.prefixes.len();
    let mut prefix_deg: Vec<usize> = graph.prefix_adj.iter().map(Vec::len).collect();
    let mut suffix_deg: Vec<usize> = graph.suffix_adj.iter().map(Vec::len).collect();
    let mut alive = vec![true; np + graph.suffixes.len()];
    // Vertex v < np is prefix v, otherwise suffix v - np.
    let mut queue: VecDeque<usize> = VecDeque::new();
    for (p, &d) in prefix_deg.iter().enumerate() {
        if d < thresholds.t_stem {
            queue.push_back(p);
        }
    }
    for (s, &d) in suffix_deg.iter().enumerate() {
        if d < thresholds.t_suffix {
            queue.push_back(np + s);
        }
    }
    while let Some(v) = queue.pop_front() {
        if !alive[v] {
            continue;
        }
        alive[v] = false;
        if v < np {
            for &s in &graph.prefix_adj[v] {
                let u = np + s as usize;
                if alive[u] {
                    suffix_deg[s as usize] -= 1;
                    if suffix_deg[s as usize] < thresholds.t_suffix {
                        queue.push_back(u);
                    }
                }
            }
        } else {
            for &p in &graph.suffix_adj[v - np] {
                let u = p as usize;
                if alive[u] {
                    prefix_deg[u] -= 1;
                    if prefix_deg[u] < thresholds.t_stem {
                        queue.push_back(u);
                    }
                }
            }
        }
    }
    let edges = graph.prefix_adj.iter().enumerate().flat_map(|(p, adj)| {
        let alive = &alive;
        adj.iter()
            .filter(move |&&s| alive[p] && alive[np + s as usize])
            .map(move |&s| {
                (
                    graph.prefixes[p].clone(),
                    graph.suffixes[s as usize].clone(),
                )
            })
    });
    SegmentationGraph::from_edges(edges.collect::<Vec<_>>())
}

/// Splits `word` at the longest prefix whose (prefix, suffix) edge survives
/// in `graph`; returns `[prefix, marker + suffix]` or `[word]`.
pub fn segment_word(word: &str, graph: &SegmentationGraph, marker: char) -> Vec<String> {
    let points: Vec<usize> = split_points(word).collect();
    for &i in points.iter().rev() {
        let (p, s) = word.split_at(i);
        if graph.has_edge(p, s) {
            return vec![p.to_owned(), format!("{marker}{s}")];
        }
    }
    vec![word.to_owned()]
}

/// Segments every token of a corpus.
pub fn segment_corpus(
    corpus: &[SentenceTokens],
    graph: &SegmentationGraph,
    marker: char,
) -> (Vec<SentenceTokens>, SplitReport) {
    split_corpus_with(corpus, |w| segment_word(w, graph, marker))
}

/// Writes one entry per line.
pub fn write_list<'a, W, I>(mut sink: W, items: I) -> Result<()>
where
    W: Write,
    I: IntoIterator<Item = &'a str>,
{
    for item in items {
        writeln!(sink, "{item}")?;
    }
    sink.flush()?;
    Ok(())
}

/// Writes `prefix<TAB>suffix` per edge.
pub fn write_edges<W: Write>(mut sink: W, graph: &SegmentationGraph) -> Result<()> {
    for (p, s) in graph.edges() {
        writeln!(sink, "{p}\t{s}")?;
    }
    sink.flush()?;
    Ok(())
}

/// Reads a file written by [`write_edges`].
pub fn read_edges<R: BufRead>(reader: R) -> Result<SegmentationGraph> {
    let mut edges = Vec::new();
    for (i, line) in reader.lines().enumerate() {
        let line = line.map_err(|e| Error::data_at(i + 1, e.to_string()))?;
        let line = line.trim_end_matches('\r');
        if line.is_empty() {
            continue;
        }
        match line.split_once('\t') {
            Some((p, s)) if !p.is_empty() && !s.is_empty() && !s.contains('\t') => {
                edges.push((p.to_owned(), s.to_owned()))
            }
            _ => return Err(Error::data_at(i + 1, "expected PREFIX<TAB>SUFFIX")),
        }
    }
    Ok(SegmentationGraph::from_edges(edges))
}
