//! Latent Dirichlet Allocation by collapsed Gibbs sampling.
//!
//! The generative model assumed throughout: each topic `k` has a word
//! distribution `phi_k ~ Dirichlet(beta)` over the vocabulary; each document
//! `d` has a topic distribution `theta_d ~ Dirichlet(alpha)`; every token is
//! drawn by first sampling a topic `z ~ Categorical(theta_d)` and then a word
//! `w ~ Categorical(phi_z)`.
//!
//! Training integrates `theta` and `phi` out and samples only the per-token
//! topic assignments ([`GibbsSampler`]). After the final sweep, point
//! estimates are read off the count tables:
//!
//! ```text
//! theta[d][k] = (n_dk + alpha) / (n_d + K * alpha)
//! phi[k][w]   = (n_kw + beta)  / (n_k + V * beta)
//! ```
//!
//! All randomness comes from a ChaCha8 stream seeded with the `u64` in
//! [`LdaConfig::seed`], and the sampler visits documents and tokens in a
//! fixed order, so a given configuration reproduces the same model
//! byte-for-byte on every run and platform.

mod sampler;
mod synthetic;

pub use sampler::{train_gibbs, GibbsSampler};
pub use synthetic::{generate_synthetic, SyntheticCorpus, SyntheticParams};

use std::fs;
use std::io::{Read, Write};
use std::path::Path;

use byteorder::{LittleEndian, ReadBytesExt, WriteBytesExt};
use serde::{Deserialize, Serialize};

use crate::corpus::{BowCorpus, Vocabulary};
use crate::{Error, Result};

/// Hyperparameters and run length for collapsed Gibbs training.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LdaConfig {
    pub num_topics: usize,
    /// Symmetric document-topic prior. [`LdaConfig::new`] defaults this to
    /// `50 / num_topics`.
    pub alpha: f64,
    /// Symmetric topic-word prior (default 0.01).
    pub beta: f64,
    /// Total number of Gibbs sweeps (default 1000).
    pub iterations: usize,
    /// Sweeps to discard before estimates may be averaged (default 200).
    pub burn_in: usize,
    pub seed: u64,
    /// Average the smoothed estimates over all post-burn-in sweeps instead
    /// of reading them off the final counts (off by default).
    pub average_after_burn_in: bool,
}

impl LdaConfig {
    pub fn new(num_topics: usize) -> LdaConfig {
        LdaConfig {
            num_topics,
            alpha: 50.0 / num_topics.max(1) as f64,
            beta: 0.01,
            iterations: 1000,
            burn_in: 200,
            seed: 0,
            average_after_burn_in: false,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.num_topics == 0 {
            return Err(Error::validation("num_topics must be at least 1"));
        }
        if !(self.alpha.is_finite() && self.alpha > 0.0) {
            return Err(Error::validation(format!(
                "alpha must be positive and finite, got {}",
                self.alpha
            )));
        }
        if !(self.beta.is_finite() && self.beta > 0.0) {
            return Err(Error::validation(format!(
                "beta must be positive and finite, got {}",
                self.beta
            )));
        }
        if self.iterations == 0 {
            return Err(Error::validation("iterations must be at least 1"));
        }
        if self.burn_in >= self.iterations {
            return Err(Error::validation(format!(
                "burn_in ({}) must be smaller than iterations ({})",
                self.burn_in, self.iterations
            )));
        }
        Ok(())
    }
}

/// A trained topic model: the final count tables plus the smoothed point
/// estimates. Document rows are aligned with the corpus the model was
/// trained on.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LdaModel {
    pub config: LdaConfig,
    pub vocab_size: usize,
    /// `n_dk`: tokens of document `d` assigned to topic `k` (D x K).
    pub doc_topic_counts: Vec<Vec<u32>>,
    /// `n_kw`: occurrences of word `w` assigned to topic `k` (K x V).
    pub topic_word_counts: Vec<Vec<u32>>,
    /// `n_k`: total tokens assigned to topic `k`.
    pub topic_totals: Vec<u64>,
    /// `n_d`: token count of each document.
    pub doc_lengths: Vec<u32>,
    /// Smoothed document-topic estimates; each row sums to 1.
    pub theta: Vec<Vec<f64>>,
    /// Smoothed topic-word estimates; each row sums to 1.
    pub phi: Vec<Vec<f64>>,
}

impl LdaModel {
    pub fn num_topics(&self) -> usize {
        self.config.num_topics
    }

    pub fn num_docs(&self) -> usize {
        self.theta.len()
    }

    /// Reorder topics: entry `j` of `permutation` names the old topic index
    /// that becomes topic `j`. Theta columns, phi rows, and all count tables
    /// move together, so downstream distances and graphs permute
    /// consistently.
    pub fn permute_topics(&self, permutation: &[usize]) -> Result<LdaModel> {
        let k = self.num_topics();
        if permutation.len() != k {
            return Err(Error::validation(format!(
                "permutation has length {} but the model has {k} topics",
                permutation.len()
            )));
        }
        let mut seen = vec![false; k];
        for &p in permutation {
            if p >= k || seen[p] {
                return Err(Error::validation(
                    "permutation must mention every topic index exactly once",
                ));
            }
            seen[p] = true;
        }

        let permute_row = |row: &Vec<u32>| -> Vec<u32> {
            permutation.iter().map(|&p| row[p]).collect()
        };
        let permute_row_f = |row: &Vec<f64>| -> Vec<f64> {
            permutation.iter().map(|&p| row[p]).collect()
        };

        Ok(LdaModel {
            config: self.config.clone(),
            vocab_size: self.vocab_size,
            doc_topic_counts: self.doc_topic_counts.iter().map(permute_row).collect(),
            topic_word_counts: permutation
                .iter()
                .map(|&p| self.topic_word_counts[p].clone())
                .collect(),
            topic_totals: permutation.iter().map(|&p| self.topic_totals[p]).collect(),
            doc_lengths: self.doc_lengths.clone(),
            theta: self.theta.iter().map(permute_row_f).collect(),
            phi: permutation.iter().map(|&p| self.phi[p].clone()).collect(),
        })
    }

    /// Structural checks for models loaded from disk: consistent shapes and
    /// estimate rows that sum to 1 within 1e-9.
    pub fn validate(&self) -> Result<()> {
        self.config.validate()?;
        let k = self.config.num_topics;
        let d = self.doc_topic_counts.len();
        if self.theta.len() != d || self.doc_lengths.len() != d {
            return Err(Error::validation("model document arrays differ in length"));
        }
        if self.topic_word_counts.len() != k || self.phi.len() != k || self.topic_totals.len() != k
        {
            return Err(Error::validation("model topic arrays differ in length"));
        }
        for row in &self.doc_topic_counts {
            if row.len() != k {
                return Err(Error::validation("doc_topic_counts row has wrong width"));
            }
        }
        for row in self.topic_word_counts.iter().chain(std::iter::empty()) {
            if row.len() != self.vocab_size {
                return Err(Error::validation("topic_word_counts row has wrong width"));
            }
        }
        for (name, rows, width) in [
            ("theta", &self.theta, k),
            ("phi", &self.phi, self.vocab_size),
        ] {
            for (i, row) in rows.iter().enumerate() {
                if row.len() != width {
                    return Err(Error::validation(format!("{name} row {i} has wrong width")));
                }
                let sum: f64 = row.iter().sum();
                if (sum - 1.0).abs() > 1e-9 {
                    return Err(Error::validation(format!(
                        "{name} row {i} sums to {sum}, expected 1 within 1e-9"
                    )));
                }
            }
        }
        Ok(())
    }

    /// Deterministic pretty-printed JSON rendering.
    pub fn to_json_string(&self) -> String {
        let mut out = serde_json::to_string_pretty(self).expect("model serialization cannot fail");
        out.push('\n');
        out
    }

    pub fn save_json(&self, path: &Path) -> Result<()> {
        fs::write(path, self.to_json_string()).map_err(|e| Error::io(path, e))
    }

    pub fn load_json(path: &Path) -> Result<LdaModel> {
        let contents = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        let model: LdaModel = serde_json::from_str(&contents)
            .map_err(|e| Error::parse(e.line(), "model", e.to_string()))?;
        model.validate()?;
        Ok(model)
    }

    /// Compact little-endian binary serialization. Floats are stored as raw
    /// IEEE-754 bits, so the round trip is exact.
    pub fn save_binary(&self, path: &Path) -> Result<()> {
        let mut buf = Vec::new();
        self.write_binary(&mut buf)
            .expect("in-memory write cannot fail");
        fs::write(path, buf).map_err(|e| Error::io(path, e))
    }

    pub fn load_binary(path: &Path) -> Result<LdaModel> {
        let bytes = fs::read(path).map_err(|e| Error::io(path, e))?;
        let model = LdaModel::read_binary(&mut bytes.as_slice()).map_err(|e| {
            Error::validation(format!("malformed model binary {}: {e}", path.display()))
        })?;
        model.validate()?;
        Ok(model)
    }

    fn write_binary<W: Write>(&self, mut w: W) -> std::io::Result<()> {
        w.write_all(MODEL_MAGIC)?;
        w.write_u32::<LittleEndian>(MODEL_VERSION)?;
        w.write_u64::<LittleEndian>(self.config.num_topics as u64)?;
        w.write_f64::<LittleEndian>(self.config.alpha)?;
        w.write_f64::<LittleEndian>(self.config.beta)?;
        w.write_u64::<LittleEndian>(self.config.iterations as u64)?;
        w.write_u64::<LittleEndian>(self.config.burn_in as u64)?;
        w.write_u64::<LittleEndian>(self.config.seed)?;
        w.write_u8(self.config.average_after_burn_in as u8)?;
        w.write_u64::<LittleEndian>(self.vocab_size as u64)?;
        w.write_u64::<LittleEndian>(self.doc_topic_counts.len() as u64)?;
        for &len in &self.doc_lengths {
            w.write_u32::<LittleEndian>(len)?;
        }
        for row in &self.doc_topic_counts {
            for &c in row {
                w.write_u32::<LittleEndian>(c)?;
            }
        }
        for row in &self.topic_word_counts {
            for &c in row {
                w.write_u32::<LittleEndian>(c)?;
            }
        }
        for &t in &self.topic_totals {
            w.write_u64::<LittleEndian>(t)?;
        }
        for row in &self.theta {
            for &v in row {
                w.write_u64::<LittleEndian>(v.to_bits())?;
            }
        }
        for row in &self.phi {
            for &v in row {
                w.write_u64::<LittleEndian>(v.to_bits())?;
            }
        }
        Ok(())
    }

    fn read_binary<R: Read>(mut r: R) -> std::io::Result<LdaModel> {
        let mut magic = [0u8; 4];
        r.read_exact(&mut magic)?;
        if &magic != MODEL_MAGIC {
            return Err(std::io::Error::new(
                std::io::ErrorKind::InvalidData,
                "bad magic bytes",
            ));
        }
        let version = r.read_u32::<LittleEndian>()?;
        if version != MODEL_VERSION {
            return Err(std::io::Error::new(
                std::io::ErrorKind::InvalidData,
                format!("unsupported model version {version}"),
            ));
        }
        let k = r.read_u64::<LittleEndian>()? as usize;
        let alpha = r.read_f64::<LittleEndian>()?;
        let beta = r.read_f64::<LittleEndian>()?;
        let iterations = r.read_u64::<LittleEndian>()? as usize;
        let burn_in = r.read_u64::<LittleEndian>()? as usize;
        let seed = r.read_u64::<LittleEndian>()?;
        let average_after_burn_in = r.read_u8()? != 0;
        let vocab_size = r.read_u64::<LittleEndian>()? as usize;
        let num_docs = r.read_u64::<LittleEndian>()? as usize;

        let mut doc_lengths = vec![0u32; num_docs];
        for len in &mut doc_lengths {
            *len = r.read_u32::<LittleEndian>()?;
        }
        let mut read_u32_matrix = |rows: usize, cols: usize| -> std::io::Result<Vec<Vec<u32>>> {
            let mut matrix = Vec::with_capacity(rows);
            for _ in 0..rows {
                let mut row = vec![0u32; cols];
                for v in &mut row {
                    *v = r.read_u32::<LittleEndian>()?;
                }
                matrix.push(row);
            }
            Ok(matrix)
        };
        let doc_topic_counts = read_u32_matrix(num_docs, k)?;
        let topic_word_counts = read_u32_matrix(k, vocab_size)?;
        let mut topic_totals = vec![0u64; k];
        for t in &mut topic_totals {
            *t = r.read_u64::<LittleEndian>()?;
        }
        let mut read_f64_matrix = |rows: usize, cols: usize| -> std::io::Result<Vec<Vec<f64>>> {
            let mut matrix = Vec::with_capacity(rows);
            for _ in 0..rows {
                let mut row = vec![0f64; cols];
                for v in &mut row {
                    *v = f64::from_bits(r.read_u64::<LittleEndian>()?);
                }
                matrix.push(row);
            }
            Ok(matrix)
        };
        let theta = read_f64_matrix(num_docs, k)?;
        let phi = read_f64_matrix(k, vocab_size)?;

        Ok(LdaModel {
            config: LdaConfig {
                num_topics: k,
                alpha,
                beta,
                iterations,
                burn_in,
                seed,
                average_after_burn_in,
            },
            vocab_size,
            doc_topic_counts,
            topic_word_counts,
            topic_totals,
            doc_lengths,
            theta,
            phi,
        })
    }
}

const MODEL_MAGIC: &[u8; 4] = b"TMLM";
const MODEL_VERSION: u32 = 1;

/// One ranked term of a topic, with its probability expressed in percent.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TopicTerm {
    pub term: String,
    pub probability_pct: f64,
}

/// The ranked top terms of one topic.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TopicSummary {
    pub topic: usize,
    pub label: Option<String>,
    pub terms: Vec<TopicTerm>,
}

/// The `n` highest-probability terms of `topic`, ties broken by ascending
/// term index. Asking for more terms than the vocabulary holds returns all
/// of them.
pub fn top_words(
    model: &LdaModel,
    vocabulary: &Vocabulary,
    topic: usize,
    n: usize,
) -> Result<TopicSummary> {
    if topic >= model.num_topics() {
        return Err(Error::validation(format!(
            "topic index {topic} out of range (model has {} topics)",
            model.num_topics()
        )));
    }
    if vocabulary.len() != model.vocab_size {
        return Err(Error::validation(format!(
            "vocabulary size {} does not match the model's {}",
            vocabulary.len(),
            model.vocab_size
        )));
    }

    let row = &model.phi[topic];
    let mut ranked: Vec<(usize, f64)> = row.iter().copied().enumerate().collect();
    ranked.sort_by(|a, b| b.1.total_cmp(&a.1).then(a.0.cmp(&b.0)));
    ranked.truncate(n.min(row.len()));

    Ok(TopicSummary {
        topic,
        label: None,
        terms: ranked
            .into_iter()
            .map(|(index, p)| TopicTerm {
                term: vocabulary
                    .term(index as u32)
                    .expect("phi width matches vocabulary")
                    .to_string(),
                probability_pct: p * 100.0,
            })
            .collect(),
    })
}

/// Joint log-likelihood of `corpus` under the model's point estimates:
/// `sum_d sum_tokens ln(sum_k theta[d][k] * phi[k][w])`, in nats. An empty
/// corpus scores 0.
pub fn log_likelihood(model: &LdaModel, corpus: &BowCorpus) -> Result<f64> {
    if corpus.num_docs() == 0 {
        return Ok(0.0);
    }
    if corpus.vocab_size() != model.vocab_size {
        return Err(Error::validation(format!(
            "corpus vocabulary size {} does not match the model's {}",
            corpus.vocab_size(),
            model.vocab_size
        )));
    }
    if corpus.num_docs() != model.num_docs() {
        return Err(Error::validation(format!(
            "corpus has {} documents but the model has theta rows for {}",
            corpus.num_docs(),
            model.num_docs()
        )));
    }
    log_likelihood_with(&model.theta, &model.phi, corpus)
}

/// [`log_likelihood`] against externally supplied estimates; used to monitor
/// a sampler mid-run.
pub fn log_likelihood_with(theta: &[Vec<f64>], phi: &[Vec<f64>], corpus: &BowCorpus) -> Result<f64> {
    let mut total = 0.0;
    for (d, doc) in corpus.docs.iter().enumerate() {
        let theta_row = theta.get(d).ok_or_else(|| {
            Error::validation(format!("theta has no row for document index {d}"))
        })?;
        for &(word, count) in &doc.counts {
            let mut p = 0.0;
            for (k, &t) in theta_row.iter().enumerate() {
                p += t * phi[k][word as usize];
            }
            total += count as f64 * p.ln();
        }
    }
    Ok(total)
}
