use std::collections::{BTreeMap, BTreeSet};

use rayon::prelude::*;

use crate::corpus::{BowCorpus, Document, Vocabulary};

/// The corpus a coherence measure estimates its probabilities from.
///
/// Document-level (boolean) statistics need only the set of terms per
/// document; windowed statistics need token order, so the reference keeps
/// both views. [`ReferenceCorpus::from_documents`] preserves the true token
/// order; [`ReferenceCorpus::from_bow`] reconstructs a stream by expanding
/// each bag in ascending term order, which is exact for boolean statistics
/// and for windows at least as long as the document, and an order-free
/// approximation otherwise.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ReferenceCorpus {
    doc_term_sets: Vec<Vec<u32>>,
    streams: Vec<Vec<u32>>,
    vocab_size: usize,
}

impl ReferenceCorpus {
    pub fn from_bow(corpus: &BowCorpus) -> ReferenceCorpus {
        let mut doc_term_sets = Vec::with_capacity(corpus.num_docs());
        let mut streams = Vec::with_capacity(corpus.num_docs());
        for doc in &corpus.docs {
            doc_term_sets.push(doc.counts.iter().map(|&(w, _)| w).collect());
            let mut stream = Vec::with_capacity(doc.total_tokens() as usize);
            for &(word, count) in &doc.counts {
                stream.extend(std::iter::repeat_n(word, count as usize));
            }
            streams.push(stream);
        }
        ReferenceCorpus {
            doc_term_sets,
            streams,
            vocab_size: corpus.vocab_size(),
        }
    }

    /// Build from token-level documents, keeping token order. Tokens outside
    /// the vocabulary are skipped; documents left empty are dropped, matching
    /// what [`crate::corpus::to_bow`] does.
    pub fn from_documents(docs: &[Document], vocabulary: &Vocabulary) -> ReferenceCorpus {
        let mut doc_term_sets = Vec::with_capacity(docs.len());
        let mut streams = Vec::with_capacity(docs.len());
        for doc in docs {
            let stream: Vec<u32> = doc
                .tokens
                .iter()
                .filter_map(|t| vocabulary.index_of(t))
                .collect();
            if stream.is_empty() {
                continue;
            }
            let set: BTreeSet<u32> = stream.iter().copied().collect();
            doc_term_sets.push(set.into_iter().collect());
            streams.push(stream);
        }
        ReferenceCorpus {
            doc_term_sets,
            streams,
            vocab_size: vocabulary.len(),
        }
    }

    pub fn num_docs(&self) -> usize {
        self.streams.len()
    }

    pub fn vocab_size(&self) -> usize {
        self.vocab_size
    }
}

/// How virtual co-occurrence units are formed.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ProbabilityMode {
    /// One boolean unit per document.
    BoolDoc,
    /// One boolean unit per sliding window of `width` tokens (stride 1);
    /// a document shorter than the window forms a single window.
    BoolWindow { width: usize },
}

/// Boolean occurrence statistics for a set of query words: in how many units
/// (documents or windows) each word, and each word pair, occurred.
///
/// Counts are exact integers; probabilities are the counts divided by the
/// total number of units. Words that never occur — including ids outside the
/// vocabulary — simply have count 0.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct ProbabilityTable {
    total_units: u64,
    marginal: BTreeMap<u32, u64>,
    joint: BTreeMap<(u32, u32), u64>,
}

impl ProbabilityTable {
    pub fn total_units(&self) -> u64 {
        self.total_units
    }

    /// Number of units containing `word`.
    pub fn marginal_count(&self, word: u32) -> u64 {
        self.marginal.get(&word).copied().unwrap_or(0)
    }

    /// Number of units containing both words. `joint_count(w, w)` is the
    /// marginal count: a word always co-occurs with itself.
    pub fn joint_count(&self, a: u32, b: u32) -> u64 {
        if a == b {
            return self.marginal_count(a);
        }
        let key = (a.min(b), a.max(b));
        self.joint.get(&key).copied().unwrap_or(0)
    }

    pub fn marginal(&self, word: u32) -> f64 {
        if self.total_units == 0 {
            return 0.0;
        }
        self.marginal_count(word) as f64 / self.total_units as f64
    }

    pub fn joint(&self, a: u32, b: u32) -> f64 {
        if self.total_units == 0 {
            return 0.0;
        }
        self.joint_count(a, b) as f64 / self.total_units as f64
    }

    fn merge(mut self, other: ProbabilityTable) -> ProbabilityTable {
        self.total_units += other.total_units;
        for (word, count) in other.marginal {
            *self.marginal.entry(word).or_insert(0) += count;
        }
        for (pair, count) in other.joint {
            *self.joint.entry(pair).or_insert(0) += count;
        }
        self
    }

    fn record_unit(&mut self, present: &[u32]) {
        self.total_units += 1;
        for (i, &a) in present.iter().enumerate() {
            *self.marginal.entry(a).or_insert(0) += 1;
            for &b in &present[i + 1..] {
                *self.joint.entry((a, b)).or_insert(0) += 1;
            }
        }
    }
}

/// Count in how many units each query word and word pair occurs.
///
/// Documents are processed independently and the partial counts merged by
/// integer addition, so the result is identical no matter how many worker
/// threads the ambient rayon pool provides.
pub fn estimate_probabilities(
    reference: &ReferenceCorpus,
    words: &BTreeSet<u32>,
    mode: ProbabilityMode,
) -> ProbabilityTable {
    match mode {
        ProbabilityMode::BoolDoc => reference
            .doc_term_sets
            .par_iter()
            .map(|set| {
                let mut table = ProbabilityTable::default();
                let present: Vec<u32> = set.iter().copied().filter(|w| words.contains(w)).collect();
                table.record_unit(&present);
                table
            })
            .reduce(ProbabilityTable::default, ProbabilityTable::merge),
        ProbabilityMode::BoolWindow { width } => {
            let width = width.max(1);
            reference
                .streams
                .par_iter()
                .map(|stream| {
                    let mut table = ProbabilityTable::default();
                    if stream.is_empty() {
                        return table;
                    }
                    let mut record = |tokens: &[u32]| {
                        let present: BTreeSet<u32> = tokens
                            .iter()
                            .copied()
                            .filter(|w| words.contains(w))
                            .collect();
                        let present: Vec<u32> = present.into_iter().collect();
                        table.record_unit(&present);
                    };
                    if stream.len() <= width {
                        record(stream);
                    } else {
                        for window in stream.windows(width) {
                            record(window);
                        }
                    }
                    table
                })
                .reduce(ProbabilityTable::default, ProbabilityTable::merge)
        }
    }
}
