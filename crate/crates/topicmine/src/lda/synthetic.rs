use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Gamma};

use crate::corpus::{to_bow, BowCorpus, Document, Vocabulary};
use crate::{Error, Result};

/// Dimensions and priors for [`generate_synthetic`].
#[derive(Debug, Clone, PartialEq)]
pub struct SyntheticParams {
    pub num_topics: usize,
    pub vocab_size: usize,
    pub num_docs: usize,
    pub doc_len: usize,
    pub alpha: f64,
    pub beta: f64,
    pub seed: u64,
}

/// A corpus drawn from the LDA generative model, together with the planted
/// distributions that produced it.
#[derive(Debug, Clone, PartialEq)]
pub struct SyntheticCorpus {
    pub corpus: BowCorpus,
    /// Token-level documents, in generation order — kept because windowed
    /// coherence needs token sequences, not bags.
    pub documents: Vec<Document>,
    /// Planted document-topic distributions (D x K).
    pub theta: Vec<Vec<f64>>,
    /// Planted topic-word distributions (K x V).
    pub phi: Vec<Vec<f64>>,
}

/// Sample a corpus from the generative model: `phi_k ~ Dirichlet(beta)` for
/// every topic, then per document `theta_d ~ Dirichlet(alpha)` followed by
/// `doc_len` tokens drawn topic-first (`z ~ Cat(theta_d)`, `w ~ Cat(phi_z)`).
///
/// Draw order is fixed (all phi rows, then per document theta and tokens),
/// so a given seed always produces the same corpus. Terms are named
/// `term000`, `term001`, ... with enough zero padding that lexicographic
/// order equals index order; document years cycle deterministically through
/// 2013..=2020.
pub fn generate_synthetic(params: &SyntheticParams) -> Result<SyntheticCorpus> {
    validate(params)?;
    let mut rng = ChaCha8Rng::seed_from_u64(params.seed);

    let phi: Vec<Vec<f64>> = (0..params.num_topics)
        .map(|_| dirichlet(&mut rng, params.beta, params.vocab_size))
        .collect::<Result<_>>()?;

    let width = (params.vocab_size.max(2) - 1).to_string().len();
    let terms: Vec<String> = (0..params.vocab_size)
        .map(|w| format!("term{w:0width$}"))
        .collect();
    let id_width = (params.num_docs.max(2) - 1).to_string().len();

    let mut theta = Vec::with_capacity(params.num_docs);
    let mut documents = Vec::with_capacity(params.num_docs);
    for d in 0..params.num_docs {
        let theta_d = dirichlet(&mut rng, params.alpha, params.num_topics)?;
        let tokens: Vec<String> = (0..params.doc_len)
            .map(|_| {
                let z = categorical(&mut rng, &theta_d);
                let w = categorical(&mut rng, &phi[z]);
                terms[w].clone()
            })
            .collect();
        theta.push(theta_d);
        documents.push(Document {
            id: format!("doc{d:0id_width$}"),
            year: 2013 + (d % 8) as i32,
            tokens,
        });
    }

    // The vocabulary keeps all V terms (a planted topic may simply never
    // emit one), so phi columns stay aligned with term indices.
    let mut doc_freq = vec![0u32; params.vocab_size];
    let mut coll_freq = vec![0u64; params.vocab_size];
    for doc in &documents {
        let mut seen = vec![false; params.vocab_size];
        for token in &doc.tokens {
            let index = token[4..].parse::<usize>().expect("synthetic term name");
            coll_freq[index] += 1;
            seen[index] = true;
        }
        for (index, was_seen) in seen.iter().enumerate() {
            if *was_seen {
                doc_freq[index] += 1;
            }
        }
    }
    let vocabulary = Vocabulary::from_parts(terms, doc_freq, coll_freq)?;
    let outcome = to_bow(&documents, vocabulary);
    debug_assert!(outcome.dropped_ids.is_empty());

    Ok(SyntheticCorpus {
        corpus: outcome.corpus,
        documents,
        theta,
        phi,
    })
}

fn validate(params: &SyntheticParams) -> Result<()> {
    if params.num_topics == 0
        || params.vocab_size == 0
        || params.num_docs == 0
        || params.doc_len == 0
    {
        return Err(Error::validation(
            "num_topics, vocab_size, num_docs, and doc_len must all be at least 1",
        ));
    }
    for (name, value) in [("alpha", params.alpha), ("beta", params.beta)] {
        if !(value.is_finite() && value > 0.0) {
            return Err(Error::validation(format!(
                "{name} must be positive and finite, got {value}"
            )));
        }
    }
    Ok(())
}

/// Dirichlet draw by normalizing Gamma(concentration, 1) variates.
fn dirichlet(rng: &mut ChaCha8Rng, concentration: f64, dim: usize) -> Result<Vec<f64>> {
    let gamma = Gamma::new(concentration, 1.0)
        .map_err(|e| Error::validation(format!("invalid Dirichlet concentration: {e}")))?;
    let mut draws: Vec<f64> = (0..dim).map(|_| gamma.sample(rng)).collect();
    let sum: f64 = draws.iter().sum();
    if !(sum.is_finite() && sum > 0.0) {
        return Err(Error::validation(
            "Dirichlet draw degenerated to zero mass; use a larger concentration",
        ));
    }
    for v in &mut draws {
        *v /= sum;
    }
    Ok(draws)
}

/// Inverse-CDF draw from a normalized weight vector.
fn categorical(rng: &mut ChaCha8Rng, weights: &[f64]) -> usize {
    let u: f64 = rng.gen();
    let mut acc = 0.0;
    for (i, &w) in weights.iter().enumerate() {
        acc += w;
        if u < acc {
            return i;
        }
    }
    weights.len() - 1
}
