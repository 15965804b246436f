use std::collections::{BTreeMap, HashMap};
use std::fs;
use std::path::Path;

use serde::{Deserialize, Serialize};

use super::Document;
use crate::{Error, Result};

/// Term dictionary shared by a corpus and every model trained on it.
///
/// Terms are stored in lexicographic (byte) order and a term's index is its
/// position in that order, so lookups are binary searches and serialization
/// is naturally deterministic.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Vocabulary {
    terms: Vec<String>,
    doc_freq: Vec<u32>,
    coll_freq: Vec<u64>,
}

impl Vocabulary {
    /// Assemble a vocabulary from parallel arrays. `terms` must be strictly
    /// ascending (lexicographic, no duplicates) and the arrays equally long.
    pub fn from_parts(terms: Vec<String>, doc_freq: Vec<u32>, coll_freq: Vec<u64>) -> Result<Vocabulary> {
        let vocabulary = Vocabulary {
            terms,
            doc_freq,
            coll_freq,
        };
        vocabulary.validate()?;
        Ok(vocabulary)
    }

    pub(crate) fn validate(&self) -> Result<()> {
        if self.terms.len() != self.doc_freq.len() || self.terms.len() != self.coll_freq.len() {
            return Err(Error::validation(
                "vocabulary arrays (terms, doc_freq, coll_freq) differ in length",
            ));
        }
        for pair in self.terms.windows(2) {
            if pair[0] >= pair[1] {
                return Err(Error::validation(format!(
                    "vocabulary terms must be strictly ascending: `{}` >= `{}`",
                    pair[0], pair[1]
                )));
            }
        }
        Ok(())
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> &[String] {
        &self.terms
    }

    pub fn term(&self, index: u32) -> Option<&str> {
        self.terms.get(index as usize).map(String::as_str)
    }

    /// Index of `term`, if retained. Binary search over the sorted terms.
    pub fn index_of(&self, term: &str) -> Option<u32> {
        self.terms
            .binary_search_by(|t| t.as_str().cmp(term))
            .ok()
            .map(|i| i as u32)
    }

    /// Number of documents the term occurred in.
    pub fn doc_freq(&self, index: u32) -> Option<u32> {
        self.doc_freq.get(index as usize).copied()
    }

    /// Total number of occurrences across the corpus.
    pub fn coll_freq(&self, index: u32) -> Option<u64> {
        self.coll_freq.get(index as usize).copied()
    }
}

/// Build the vocabulary of `docs`, keeping terms whose document frequency is
/// at least `min_df` and at most `max_df_ratio * docs.len()`. Indices are
/// assigned in lexicographic term order.
///
/// Fails with a validation error if no term survives — there is nothing
/// downstream code could do with an empty vocabulary.
pub fn build_vocabulary(docs: &[Document], min_df: u32, max_df_ratio: f64) -> Result<Vocabulary> {
    let mut stats: BTreeMap<&str, (u32, u64)> = BTreeMap::new();
    for doc in docs {
        let mut in_doc: HashMap<&str, u64> = HashMap::new();
        for token in &doc.tokens {
            *in_doc.entry(token.as_str()).or_insert(0) += 1;
        }
        for (term, count) in in_doc {
            let entry = stats.entry(term).or_insert((0, 0));
            entry.0 += 1;
            entry.1 += count;
        }
    }

    let max_df = max_df_ratio * docs.len() as f64;
    let mut terms = Vec::new();
    let mut doc_freq = Vec::new();
    let mut coll_freq = Vec::new();
    for (term, (df, cf)) in stats {
        if df >= min_df && df as f64 <= max_df {
            terms.push(term.to_string());
            doc_freq.push(df);
            coll_freq.push(cf);
        }
    }

    if terms.is_empty() {
        return Err(Error::validation(format!(
            "vocabulary is empty after frequency filtering (min_df={min_df}, max_df_ratio={max_df_ratio}, docs={})",
            docs.len()
        )));
    }
    Vocabulary::from_parts(terms, doc_freq, coll_freq)
}

/// Sparse term counts for one document. `counts` holds `(term_index, count)`
/// pairs sorted by term index; every stored count is >= 1.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct BowDocument {
    pub id: String,
    pub year: i32,
    pub counts: Vec<(u32, u32)>,
}

impl BowDocument {
    /// Total token count of the document.
    pub fn total_tokens(&self) -> u64 {
        self.counts.iter().map(|&(_, c)| c as u64).sum()
    }
}

/// A bag-of-words corpus: the vocabulary plus sparse counts per document.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct BowCorpus {
    pub vocabulary: Vocabulary,
    pub docs: Vec<BowDocument>,
}

impl BowCorpus {
    pub fn num_docs(&self) -> usize {
        self.docs.len()
    }

    pub fn vocab_size(&self) -> usize {
        self.vocabulary.len()
    }

    pub fn total_tokens(&self) -> u64 {
        self.docs.iter().map(BowDocument::total_tokens).sum()
    }

    /// Deterministic JSON rendering of the bundle (pretty-printed, fields in
    /// declaration order, trailing newline).
    pub fn to_json_string(&self) -> String {
        let mut out = serde_json::to_string_pretty(self).expect("corpus serialization cannot fail");
        out.push('\n');
        out
    }

    pub fn save_json(&self, path: &Path) -> Result<()> {
        fs::write(path, self.to_json_string()).map_err(|e| Error::io(path, e))
    }

    pub fn load_json(path: &Path) -> Result<BowCorpus> {
        let contents = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        let corpus: BowCorpus = serde_json::from_str(&contents)
            .map_err(|e| Error::parse(e.line(), "corpus", e.to_string()))?;
        corpus.validate()?;
        Ok(corpus)
    }

    /// Check the structural invariants of a bundle that may have come from
    /// disk: sorted vocabulary, sorted in-range term indices, positive
    /// counts.
    pub fn validate(&self) -> Result<()> {
        self.vocabulary.validate()?;
        let vocab_len = self.vocabulary.len() as u32;
        for doc in &self.docs {
            let mut previous: Option<u32> = None;
            for &(index, count) in &doc.counts {
                if index >= vocab_len {
                    return Err(Error::validation(format!(
                        "document `{}` references term index {index} outside the vocabulary (size {vocab_len})",
                        doc.id
                    )));
                }
                if count == 0 {
                    return Err(Error::validation(format!(
                        "document `{}` stores a zero count for term index {index}",
                        doc.id
                    )));
                }
                if let Some(prev) = previous {
                    if index <= prev {
                        return Err(Error::validation(format!(
                            "document `{}` has unsorted term indices ({prev} then {index})",
                            doc.id
                        )));
                    }
                }
                previous = Some(index);
            }
        }
        Ok(())
    }
}

/// Result of [`to_bow`]: the corpus plus ids of documents dropped because
/// none of their tokens were in the vocabulary.
#[derive(Debug, Clone, PartialEq)]
pub struct BowOutcome {
    pub corpus: BowCorpus,
    pub dropped_ids: Vec<String>,
}

/// Map token lists onto the vocabulary. Out-of-vocabulary tokens are
/// skipped; documents left without any in-vocabulary token are dropped and
/// reported. Token counts are conserved for in-vocabulary tokens.
pub fn to_bow(docs: &[Document], vocabulary: Vocabulary) -> BowOutcome {
    let mut bow_docs = Vec::with_capacity(docs.len());
    let mut dropped_ids = Vec::new();

    for doc in docs {
        let mut counts: BTreeMap<u32, u32> = BTreeMap::new();
        for token in &doc.tokens {
            if let Some(index) = vocabulary.index_of(token) {
                *counts.entry(index).or_insert(0) += 1;
            }
        }
        if counts.is_empty() {
            dropped_ids.push(doc.id.clone());
        } else {
            bow_docs.push(BowDocument {
                id: doc.id.clone(),
                year: doc.year,
                counts: counts.into_iter().collect(),
            });
        }
    }

    BowOutcome {
        corpus: BowCorpus {
            vocabulary,
            docs: bow_docs,
        },
        dropped_ids,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn doc(id: &str, tokens: &[&str]) -> Document {
        Document {
            id: id.to_string(),
            year: 2015,
            tokens: tokens.iter().map(|t| t.to_string()).collect(),
        }
    }

    #[test]
    fn vocabulary_indices_follow_lexicographic_order() {
        let docs = vec![doc("p1", &["beta", "alpha"]), doc("p2", &["gamma", "alpha"])];
        let vocab = build_vocabulary(&docs, 1, 1.0).unwrap();
        assert_eq!(vocab.terms(), &["alpha", "beta", "gamma"]);
        assert_eq!(vocab.index_of("alpha"), Some(0));
        assert_eq!(vocab.index_of("gamma"), Some(2));
        assert_eq!(vocab.index_of("delta"), None);
    }

    #[test]
    fn min_df_filters_rare_terms() {
        let docs = vec![doc("p1", &["a", "b"]), doc("p2", &["a"])];
        let vocab = build_vocabulary(&docs, 1, 1.0).unwrap();
        assert_eq!(vocab.len(), 2);

        let vocab = build_vocabulary(&docs, 2, 1.0).unwrap();
        assert_eq!(vocab.terms(), &["a"]);
        assert_eq!(vocab.doc_freq(0), Some(2));
        assert_eq!(vocab.coll_freq(0), Some(2));

        let err = build_vocabulary(&docs, 3, 1.0).unwrap_err();
        assert!(matches!(err, Error::Validation(_)));
    }

    #[test]
    fn max_df_ratio_filters_ubiquitous_terms() {
        let docs = vec![
            doc("p1", &["common", "x"]),
            doc("p2", &["common", "y"]),
            doc("p3", &["common", "x"]),
            doc("p4", &["common", "y"]),
        ];
        let vocab = build_vocabulary(&docs, 1, 0.75).unwrap();
        assert_eq!(vocab.terms(), &["x", "y"]);
    }

    #[test]
    fn collection_frequency_counts_every_occurrence() {
        let docs = vec![doc("p1", &["a", "a", "b"]), doc("p2", &["a"])];
        let vocab = build_vocabulary(&docs, 1, 1.0).unwrap();
        assert_eq!(vocab.coll_freq(vocab.index_of("a").unwrap()), Some(3));
        assert_eq!(vocab.doc_freq(vocab.index_of("a").unwrap()), Some(2));
    }

    #[test]
    fn to_bow_counts_tokens_sparsely() {
        let docs = vec![doc("p1", &["a", "b", "a"])];
        let vocab = build_vocabulary(&docs, 1, 1.0).unwrap();
        let outcome = to_bow(&docs, vocab);
        assert_eq!(outcome.corpus.docs[0].counts, vec![(0, 2), (1, 1)]);
        assert_eq!(outcome.corpus.docs[0].total_tokens(), 3);
    }

    #[test]
    fn out_of_vocabulary_documents_are_dropped_and_reported() {
        let docs = vec![doc("p1", &["a"]), doc("p2", &["zzz"])];
        let vocab = Vocabulary::from_parts(vec!["a".into()], vec![1], vec![1]).unwrap();
        let outcome = to_bow(&docs, vocab);
        assert_eq!(outcome.corpus.num_docs(), 1);
        assert_eq!(outcome.dropped_ids, vec!["p2".to_string()]);
    }

    #[test]
    fn empty_input_gives_empty_corpus() {
        let vocab = Vocabulary::from_parts(vec!["a".into()], vec![1], vec![1]).unwrap();
        let outcome = to_bow(&[], vocab);
        assert_eq!(outcome.corpus.num_docs(), 0);
        assert!(outcome.dropped_ids.is_empty());
    }

    #[test]
    fn in_vocabulary_token_counts_are_conserved() {
        let docs = vec![doc("p1", &["a", "b", "oov"]), doc("p2", &["b", "b"])];
        let vocab =
            Vocabulary::from_parts(vec!["a".into(), "b".into()], vec![1, 2], vec![1, 3]).unwrap();
        let outcome = to_bow(&docs, vocab);
        let in_vocab: u64 = docs
            .iter()
            .flat_map(|d| d.tokens.iter())
            .filter(|t| outcome.corpus.vocabulary.index_of(t).is_some())
            .count() as u64;
        assert_eq!(outcome.corpus.total_tokens(), in_vocab);
    }

    #[test]
    fn unsorted_vocabulary_is_rejected() {
        let err = Vocabulary::from_parts(vec!["b".into(), "a".into()], vec![1, 1], vec![1, 1])
            .unwrap_err();
        assert!(matches!(err, Error::Validation(_)));
    }

    #[test]
    fn json_round_trip_is_lossless_and_deterministic() {
        let docs = vec![doc("p1", &["a", "b", "a"]), doc("p2", &["b"])];
        let vocab = build_vocabulary(&docs, 1, 1.0).unwrap();
        let corpus = to_bow(&docs, vocab).corpus;

        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("corpus.json");
        corpus.save_json(&path).unwrap();
        let reloaded = BowCorpus::load_json(&path).unwrap();
        assert_eq!(corpus, reloaded);
        assert_eq!(corpus.to_json_string(), reloaded.to_json_string());
    }

    #[test]
    fn load_rejects_out_of_range_term_indices() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("corpus.json");
        let json = r#"{
            "vocabulary": {"terms": ["a"], "doc_freq": [1], "coll_freq": [1]},
            "docs": [{"id": "p1", "year": 2015, "counts": [[4, 1]]}]
        }"#;
        std::fs::write(&path, json).unwrap();
        let err = BowCorpus::load_json(&path).unwrap_err();
        assert!(matches!(err, Error::Validation(_)));
    }
}
