use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::{LdaConfig, LdaModel};
use crate::corpus::BowCorpus;
use crate::{Error, Result};

/// Collapsed Gibbs sampler over per-token topic assignments.
///
/// The sampler owns four count tables: `n_dk` (document-topic), `n_kw`
/// (topic-word), `n_k` (topic totals), and the implicit `n_d` (document
/// lengths). One [`run_sweep`](GibbsSampler::run_sweep) visits every token in
/// document order, removes it from the tables, draws a new topic from
///
/// ```text
/// p(z = k | rest) ∝ (n_dk + alpha) * (n_kw + beta) / (n_k + V * beta)
/// ```
///
/// (all counts excluding the token itself), and adds it back. Bags are
/// expanded to token sequences in ascending term order, and exactly one
/// uniform variate is drawn per token per sweep, so the whole run is a pure
/// function of the corpus and the seed.
pub struct GibbsSampler {
    config: LdaConfig,
    vocab_size: usize,
    doc_tokens: Vec<Vec<u32>>,
    assignments: Vec<Vec<u32>>,
    doc_topic: Vec<Vec<u32>>,
    topic_word: Vec<Vec<u32>>,
    topic_total: Vec<u64>,
    rng: ChaCha8Rng,
    weights: Vec<f64>,
    sweeps_done: usize,
    theta_sum: Vec<Vec<f64>>,
    phi_sum: Vec<Vec<f64>>,
    averaged_sweeps: usize,
}

impl GibbsSampler {
    /// Validate the configuration against the corpus and draw the initial
    /// uniform topic assignments.
    pub fn new(corpus: &BowCorpus, config: &LdaConfig) -> Result<GibbsSampler> {
        config.validate()?;
        if corpus.num_docs() == 0 {
            return Err(Error::validation("cannot train on an empty corpus"));
        }
        let total_tokens = corpus.total_tokens();
        if config.num_topics as u64 > total_tokens {
            return Err(Error::validation(format!(
                "num_topics ({}) exceeds the total token count ({total_tokens})",
                config.num_topics
            )));
        }

        let k = config.num_topics;
        let vocab_size = corpus.vocab_size();
        let doc_tokens: Vec<Vec<u32>> = corpus
            .docs
            .iter()
            .map(|doc| {
                let mut tokens = Vec::with_capacity(doc.total_tokens() as usize);
                for &(word, count) in &doc.counts {
                    tokens.extend(std::iter::repeat_n(word, count as usize));
                }
                tokens
            })
            .collect();

        let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
        let mut doc_topic = vec![vec![0u32; k]; doc_tokens.len()];
        let mut topic_word = vec![vec![0u32; vocab_size]; k];
        let mut topic_total = vec![0u64; k];
        let assignments: Vec<Vec<u32>> = doc_tokens
            .iter()
            .enumerate()
            .map(|(d, tokens)| {
                tokens
                    .iter()
                    .map(|&word| {
                        let z = rng.gen_range(0..k as u32);
                        doc_topic[d][z as usize] += 1;
                        topic_word[z as usize][word as usize] += 1;
                        topic_total[z as usize] += 1;
                        z
                    })
                    .collect()
            })
            .collect();

        Ok(GibbsSampler {
            config: config.clone(),
            vocab_size,
            doc_tokens,
            assignments,
            doc_topic,
            topic_word,
            topic_total,
            rng,
            weights: vec![0.0; k],
            sweeps_done: 0,
            theta_sum: Vec::new(),
            phi_sum: Vec::new(),
            averaged_sweeps: 0,
        })
    }

    pub fn config(&self) -> &LdaConfig {
        &self.config
    }

    pub fn sweeps_completed(&self) -> usize {
        self.sweeps_done
    }

    /// Resample every token once.
    pub fn run_sweep(&mut self) {
        let k = self.config.num_topics;
        let alpha = self.config.alpha;
        let beta = self.config.beta;
        let v_beta = self.vocab_size as f64 * beta;

        for d in 0..self.doc_tokens.len() {
            for i in 0..self.doc_tokens[d].len() {
                let word = self.doc_tokens[d][i] as usize;
                let old = self.assignments[d][i] as usize;

                self.doc_topic[d][old] -= 1;
                self.topic_word[old][word] -= 1;
                self.topic_total[old] -= 1;

                let mut total = 0.0;
                for topic in 0..k {
                    let weight = (self.doc_topic[d][topic] as f64 + alpha)
                        * (self.topic_word[topic][word] as f64 + beta)
                        / (self.topic_total[topic] as f64 + v_beta);
                    self.weights[topic] = weight;
                    total += weight;
                }
                let u = self.rng.gen::<f64>() * total;
                let mut acc = 0.0;
                let mut new = k - 1;
                for (topic, &weight) in self.weights.iter().enumerate() {
                    acc += weight;
                    if u < acc {
                        new = topic;
                        break;
                    }
                }

                self.doc_topic[d][new] += 1;
                self.topic_word[new][word] += 1;
                self.topic_total[new] += 1;
                self.assignments[d][i] = new as u32;
            }
        }

        self.sweeps_done += 1;
        if self.config.average_after_burn_in && self.sweeps_done > self.config.burn_in {
            self.accumulate_estimates();
        }
    }

    fn accumulate_estimates(&mut self) {
        let (theta, phi) = self.estimate();
        if self.averaged_sweeps == 0 {
            self.theta_sum = theta;
            self.phi_sum = phi;
        } else {
            for (sum_row, row) in self.theta_sum.iter_mut().zip(&theta) {
                for (s, v) in sum_row.iter_mut().zip(row) {
                    *s += v;
                }
            }
            for (sum_row, row) in self.phi_sum.iter_mut().zip(&phi) {
                for (s, v) in sum_row.iter_mut().zip(row) {
                    *s += v;
                }
            }
        }
        self.averaged_sweeps += 1;
    }

    /// Smoothed point estimates from the current count tables.
    pub fn estimate(&self) -> (Vec<Vec<f64>>, Vec<Vec<f64>>) {
        let k = self.config.num_topics;
        let alpha = self.config.alpha;
        let beta = self.config.beta;
        let k_alpha = k as f64 * alpha;
        let v_beta = self.vocab_size as f64 * beta;

        let theta: Vec<Vec<f64>> = self
            .doc_topic
            .iter()
            .zip(&self.doc_tokens)
            .map(|(row, tokens)| {
                let n_d = tokens.len() as f64;
                row.iter()
                    .map(|&n_dk| (n_dk as f64 + alpha) / (n_d + k_alpha))
                    .collect()
            })
            .collect();
        let phi: Vec<Vec<f64>> = self
            .topic_word
            .iter()
            .zip(&self.topic_total)
            .map(|(row, &n_k)| {
                row.iter()
                    .map(|&n_kw| (n_kw as f64 + beta) / (n_k as f64 + v_beta))
                    .collect()
            })
            .collect();
        (theta, phi)
    }

    /// Cross-check every count table against the raw assignments. Returns a
    /// validation error describing the first inconsistency found; a healthy
    /// sampler never produces one.
    pub fn verify_counts(&self) -> Result<()> {
        let k = self.config.num_topics;
        let mut doc_topic = vec![vec![0u32; k]; self.doc_tokens.len()];
        let mut topic_word = vec![vec![0u32; self.vocab_size]; k];
        let mut topic_total = vec![0u64; k];
        for (d, (tokens, assignments)) in self.doc_tokens.iter().zip(&self.assignments).enumerate()
        {
            if tokens.len() != assignments.len() {
                return Err(Error::validation(format!(
                    "document {d} has {} tokens but {} assignments",
                    tokens.len(),
                    assignments.len()
                )));
            }
            for (&word, &z) in tokens.iter().zip(assignments) {
                doc_topic[d][z as usize] += 1;
                topic_word[z as usize][word as usize] += 1;
                topic_total[z as usize] += 1;
            }
        }

        if doc_topic != self.doc_topic {
            return Err(Error::validation(
                "doc-topic counts diverge from the token assignments",
            ));
        }
        if topic_word != self.topic_word {
            return Err(Error::validation(
                "topic-word counts diverge from the token assignments",
            ));
        }
        if topic_total != self.topic_total {
            return Err(Error::validation(
                "topic totals diverge from the token assignments",
            ));
        }
        for (topic, row) in self.topic_word.iter().enumerate() {
            let sum: u64 = row.iter().map(|&c| c as u64).sum();
            if sum != self.topic_total[topic] {
                return Err(Error::validation(format!(
                    "topic {topic} total {} does not equal its word-count sum {sum}",
                    self.topic_total[topic]
                )));
            }
        }
        for (d, row) in self.doc_topic.iter().enumerate() {
            let sum: u64 = row.iter().map(|&c| c as u64).sum();
            if sum != self.doc_tokens[d].len() as u64 {
                return Err(Error::validation(format!(
                    "document {d} topic counts sum to {sum} but it has {} tokens",
                    self.doc_tokens[d].len()
                )));
            }
        }
        Ok(())
    }

    /// Finish: package counts and estimates into an [`LdaModel`]. When
    /// post-burn-in averaging is enabled and at least one post-burn-in sweep
    /// ran, the returned estimates are the running averages.
    pub fn into_model(self) -> LdaModel {
        let (theta, phi) = if self.config.average_after_burn_in && self.averaged_sweeps > 0 {
            let n = self.averaged_sweeps as f64;
            (
                self.theta_sum
                    .iter()
                    .map(|row| row.iter().map(|v| v / n).collect())
                    .collect(),
                self.phi_sum
                    .iter()
                    .map(|row| row.iter().map(|v| v / n).collect())
                    .collect(),
            )
        } else {
            self.estimate()
        };

        LdaModel {
            config: self.config,
            vocab_size: self.vocab_size,
            doc_topic_counts: self.doc_topic,
            topic_word_counts: self.topic_word,
            topic_totals: self.topic_total,
            doc_lengths: self.doc_tokens.iter().map(|t| t.len() as u32).collect(),
            theta,
            phi,
        }
    }
}

/// Run `config.iterations` full Gibbs sweeps over `corpus` and return the
/// trained model.
pub fn train_gibbs(corpus: &BowCorpus, config: &LdaConfig) -> Result<LdaModel> {
    let mut sampler = GibbsSampler::new(corpus, config)?;
    for _ in 0..config.iterations {
        sampler.run_sweep();
    }
    Ok(sampler.into_model())
}
