//! Multi-pattern matching of gazetteer variants over token sequences.
//!
//! Variant surfaces are tokenized with the document tokenizer and their
//! lowercased tokens become the alphabet of an Aho-Corasick automaton, so a
//! pattern only ever matches whole tokens.

use alloc::collections::{BTreeMap, BTreeSet, VecDeque};
use alloc::string::String;
use alloc::vec::Vec;

use thiserror::Error;

use super::{Annotation, Category, Polarity, Source};
use crate::gazetteer::DatasetKind;
use crate::synonyms::LabelVariant;
use crate::text::{TokenizedDocument, Tokenizer};

#[derive(Debug, Error, PartialEq, Eq)]
pub enum LexiconBuildError {
    #[error("variant {surface:?} of {entry_id} has no tokens")]
    EmptyVariant { entry_id: String, surface: String },
    #[error("entry id {0:?} does not name a dataset (expected an 'A ', 'B ', 'C ' or 'K ' prefix)")]
    UnknownDataset(String),
}

#[derive(Debug, Clone, Default)]
struct Node {
    next: BTreeMap<u32, usize>,
    fail: usize,
    /// Pattern ending exactly here.
    output: Option<usize>,
    /// Nearest node on the failure chain that has an output.
    dict: Option<usize>,
}

#[derive(Debug, Clone)]
struct Pattern {
    len: usize,
    ids: BTreeSet<String>,
}

/// One occurrence of a pattern: tokens `start..end` of the document.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub struct LexiconMatch {
    pub sentence: usize,
    pub start: usize,
    pub end: usize,
    pub ids: BTreeSet<String>,
}

/// Immutable token-level automaton over expanded gazetteer variants.
#[derive(Debug, Clone)]
pub struct LexiconMatcher {
    symbols: BTreeMap<String, u32>,
    nodes: Vec<Node>,
    patterns: Vec<Pattern>,
    fingerprint: u64,
}

impl LexiconMatcher {
    pub fn build(variants: &[LabelVariant], tokenizer: &Tokenizer) -> Result<Self, LexiconBuildError> {
        let mut symbols: BTreeMap<String, u32> = BTreeMap::new();
        let mut nodes = alloc::vec![Node::default()];
        let mut patterns: Vec<Pattern> = Vec::new();

        for v in variants {
            if DatasetKind::from_id(&v.entry_id).is_none() {
                return Err(LexiconBuildError::UnknownDataset(v.entry_id.clone()));
            }
            let tokens = tokenizer.tokenize(&v.surface, &[(0, v.surface.len())]);
            if tokens.is_empty() {
                return Err(LexiconBuildError::EmptyVariant {
                    entry_id: v.entry_id.clone(),
                    surface: v.surface.clone(),
                });
            }
            let mut state = 0;
            for t in &tokens {
                let next_sym = symbols.len() as u32;
                let sym = *symbols.entry(t.lower.clone()).or_insert(next_sym);
                state = match nodes[state].next.get(&sym) {
                    Some(&n) => n,
                    None => {
                        nodes.push(Node::default());
                        let n = nodes.len() - 1;
                        nodes[state].next.insert(sym, n);
                        n
                    }
                };
            }
            let p = match nodes[state].output {
                Some(p) => p,
                None => {
                    patterns.push(Pattern { len: tokens.len(), ids: BTreeSet::new() });
                    nodes[state].output = Some(patterns.len() - 1);
                    patterns.len() - 1
                }
            };
            patterns[p].ids.insert(v.entry_id.clone());
        }

        // failure and dictionary links, breadth first
        let mut queue: VecDeque<usize> = nodes[0].next.values().copied().collect();
        while let Some(u) = queue.pop_front() {
            let edges: Vec<(u32, usize)> = nodes[u].next.iter().map(|(&s, &v)| (s, v)).collect();
            for (sym, v) in edges {
                let mut f = nodes[u].fail;
                let fail = loop {
                    if let Some(&n) = nodes[f].next.get(&sym) {
                        break n;
                    }
                    if f == 0 {
                        break 0;
                    }
                    f = nodes[f].fail;
                };
                nodes[v].fail = fail;
                nodes[v].dict = if nodes[fail].output.is_some() { Some(fail) } else { nodes[fail].dict };
                queue.push_back(v);
            }
        }

        Ok(LexiconMatcher { symbols, nodes, patterns, fingerprint: tokenizer.fingerprint() })
    }

    pub fn fingerprint(&self) -> u64 {
        self.fingerprint
    }

    pub fn pattern_count(&self) -> usize {
        self.patterns.len()
    }

    /// Every occurrence of every pattern, within sentences, ordered by
    /// start then end.
    pub fn find_all(&self, doc: &TokenizedDocument) -> Vec<LexiconMatch> {
        let mut out = Vec::new();
        for sentence in 0..doc.sentences.len() {
            let range = doc.sentence_tokens(sentence);
            let mut state = 0;
            for i in range.clone() {
                state = match self.symbols.get(&doc.tokens[i].lower) {
                    None => 0,
                    Some(&sym) => self.step(state, sym),
                };
                let mut at = if self.nodes[state].output.is_some() { Some(state) } else { self.nodes[state].dict };
                while let Some(n) = at {
                    let p = &self.patterns[self.nodes[n].output.expect("dictionary links point at outputs")];
                    out.push(LexiconMatch { sentence, start: i + 1 - p.len, end: i + 1, ids: p.ids.clone() });
                    at = self.nodes[n].dict;
                }
            }
        }
        out.sort();
        out
    }

    fn step(&self, mut state: usize, sym: u32) -> usize {
        loop {
            if let Some(&n) = self.nodes[state].next.get(&sym) {
                return n;
            }
            if state == 0 {
                return 0;
            }
            state = self.nodes[state].fail;
        }
    }

    /// [`find_all`](Self::find_all) after pruning: at each start token only
    /// the longest match survives, and a match strictly inside another
    /// survivor with the same id set is dropped.
    pub fn find(&self, doc: &TokenizedDocument) -> Vec<LexiconMatch> {
        prune(self.find_all(doc))
    }

    /// Lexicon annotations for a document. A match whose ids span several
    /// datasets yields one annotation per category.
    pub fn match_lexicon(&self, doc: &TokenizedDocument) -> Vec<Annotation> {
        let mut out = Vec::new();
        for m in self.find(doc) {
            let mut by_category: BTreeMap<Category, Vec<String>> = BTreeMap::new();
            for id in &m.ids {
                let dataset = DatasetKind::from_id(id).expect("checked at build");
                by_category.entry(Category::from_dataset(dataset)).or_default().push(id.clone());
            }
            for (category, ids) in by_category {
                out.push(Annotation::from_tokens(doc, category, Polarity::Positive, ids, m.start, m.end, Source::Lexicon));
            }
        }
        out
    }
}

fn prune(matches: Vec<LexiconMatch>) -> Vec<LexiconMatch> {
    // sorted by (sentence, start, end): the last of each start group is the longest
    let mut longest: Vec<LexiconMatch> = Vec::new();
    for m in matches {
        match longest.last_mut() {
            Some(last) if last.sentence == m.sentence && last.start == m.start => *last = m,
            _ => longest.push(m),
        }
    }
    let keep: Vec<bool> = longest
        .iter()
        .map(|m| {
            !longest.iter().any(|n| {
                n.sentence == m.sentence
                    && n.start <= m.start
                    && m.end <= n.end
                    && (n.start, n.end) != (m.start, m.end)
                    && n.ids == m.ids
            })
        })
        .collect();
    longest.into_iter().zip(keep).filter_map(|(m, k)| k.then_some(m)).collect()
}
