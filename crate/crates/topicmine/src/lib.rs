//! Text-mining pipeline for year-stamped document collections: corpus
//! preprocessing, LDA topic modeling with coherence-driven model selection,
//! and topic co-occurrence network / trend analysis.
//!
//! The pipeline runs in three stages:
//!
//! 1. [`corpus`] — load raw records, tokenize (English rules or forward
//!    maximum matching for Chinese), filter stopwords, and build a
//!    bag-of-words corpus over a frequency-filtered vocabulary.
//! 2. [`lda`] — train Latent Dirichlet Allocation by collapsed Gibbs
//!    sampling; [`coherence`] scores candidate topic counts so the number of
//!    topics can be chosen from data; [`distance`] validates that the chosen
//!    topics are distinct (KL divergence, cosine similarity).
//! 3. [`cooccur`] + [`trends`] — derive each document's main topics, build
//!    the weighted topic co-occurrence network (GEXF/CSV export), and emit
//!    per-year publication trends (CSV/SVG).
//!
//! Every stochastic step is driven by an explicitly seeded ChaCha8 stream, so
//! all results are reproducible byte-for-byte from a configuration and a seed.

pub mod coherence;
pub mod cooccur;
pub mod corpus;
pub mod distance;
pub mod lda;
pub mod trends;

mod error;

pub use error::{Error, Result};

#[cfg(doctest)]
mod book;
