//! Topic coherence: scoring topics against a reference corpus and sweeping
//! candidate topic counts.
//!
//! Every measure here follows the same four-stage pipeline: (1) segment each
//! topic's top-word list into (subject, condition) pairs, (2) estimate
//! occurrence probabilities from the reference corpus, (3) compute a
//! confirmation value per segment, (4) aggregate by arithmetic mean.
//!
//! Two measures are provided:
//!
//! * [`CoherenceMeasure::UMass`] — document-level statistics, `one_pre`
//!   segments, log-ratio confirmation `ln((D(w_i, w_j) + eps) / D(w_j))`
//!   with `eps = 1`.
//! * [`CoherenceMeasure::CNpmiWindow`] — sliding-window statistics (default
//!   width 110), `one_set` segments, and NPMI context vectors compared by
//!   cosine. This is the default measure for model selection.

mod probability;

pub use probability::{estimate_probabilities, ProbabilityMode, ProbabilityTable, ReferenceCorpus};

use std::collections::BTreeSet;
use std::ops::RangeInclusive;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::corpus::BowCorpus;
use crate::lda::{train_gibbs, LdaConfig, LdaModel};
use crate::{Error, Result};

/// How a topic's top-word list is split into (subject, condition) segments.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SegmentScheme {
    /// Each word against every earlier-ranked word: for `[a, b, c]` the
    /// segments are `(b, a)`, `(c, a)`, `(c, b)`.
    OnePre,
    /// Each word against the full top-word set (itself included).
    OneSet,
}

/// A segment's condition: one earlier-ranked word or the whole list.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Condition {
    Word(usize),
    AllWords,
}

/// One (subject, condition) pair; both sides are positions in the top-word
/// list the segmentation was built from.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Segment {
    pub subject: usize,
    pub condition: Condition,
}

/// Segment a ranked list of `word_count` top words. A single-word list has
/// no `one_pre` segments and exactly one `one_set` segment.
pub fn segment(word_count: usize, scheme: SegmentScheme) -> Vec<Segment> {
    match scheme {
        SegmentScheme::OnePre => {
            let mut segments = Vec::new();
            for subject in 1..word_count {
                for condition in 0..subject {
                    segments.push(Segment {
                        subject,
                        condition: Condition::Word(condition),
                    });
                }
            }
            segments
        }
        SegmentScheme::OneSet => (0..word_count)
            .map(|subject| Segment {
                subject,
                condition: Condition::AllWords,
            })
            .collect(),
    }
}

/// Normalized pointwise mutual information with additive smoothing:
///
/// ```text
/// NPMI = ln((p_ij + eps) / (p_i * p_j)) / (-ln(p_ij + eps))
/// ```
///
/// clamped to `[-1, 1]`. Degenerate inputs are settled by convention: a zero
/// marginal returns 0 (no evidence either way), and a joint probability of 1
/// returns 1 (the words co-occur in every unit).
pub fn confirmation_npmi(p_ij: f64, p_i: f64, p_j: f64, epsilon: f64) -> f64 {
    if p_i <= 0.0 || p_j <= 0.0 {
        return 0.0;
    }
    let joint = p_ij + epsilon;
    let denominator = -joint.ln();
    if denominator <= 0.0 {
        return 1.0;
    }
    ((joint / (p_i * p_j)).ln() / denominator).clamp(-1.0, 1.0)
}

/// UMass log-ratio confirmation over document counts:
/// `ln((d_ij + eps) / d_j)` where `d_j` is the condition word's document
/// frequency. The caller must ensure `d_j > 0`.
pub fn confirmation_umass(d_ij: u64, d_j: u64, epsilon: f64) -> f64 {
    ((d_ij as f64 + epsilon) / d_j as f64).ln()
}

/// Which coherence measure to run.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CoherenceMeasure {
    UMass,
    CNpmiWindow,
}

/// Coherence scoring parameters. Construct via [`CoherenceConfig::u_mass`]
/// or [`CoherenceConfig::npmi_window`] to get the measure's conventional
/// smoothing epsilon (1 for UMass, 1e-12 for NPMI).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CoherenceConfig {
    pub measure: CoherenceMeasure,
    /// Number of top words scored per topic (default 10).
    pub top_n: usize,
    /// Sliding-window width for [`CoherenceMeasure::CNpmiWindow`]
    /// (default 110).
    pub window: usize,
    pub epsilon: f64,
}

impl CoherenceConfig {
    pub fn u_mass() -> CoherenceConfig {
        CoherenceConfig {
            measure: CoherenceMeasure::UMass,
            top_n: 10,
            window: 110,
            epsilon: 1.0,
        }
    }

    pub fn npmi_window() -> CoherenceConfig {
        CoherenceConfig {
            measure: CoherenceMeasure::CNpmiWindow,
            top_n: 10,
            window: 110,
            epsilon: 1e-12,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.top_n < 2 {
            return Err(Error::validation("coherence top_n must be at least 2"));
        }
        if matches!(self.measure, CoherenceMeasure::CNpmiWindow) && self.window < 2 {
            return Err(Error::validation(
                "coherence window must be at least 2 tokens",
            ));
        }
        if !(self.epsilon.is_finite() && self.epsilon > 0.0) {
            return Err(Error::validation(format!(
                "coherence epsilon must be positive and finite, got {}",
                self.epsilon
            )));
        }
        Ok(())
    }
}

impl Default for CoherenceConfig {
    /// The default measure is windowed NPMI.
    fn default() -> Self {
        CoherenceConfig::npmi_window()
    }
}

/// Per-topic coherence scores and their mean.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CoherenceResult {
    pub num_topics: usize,
    pub per_topic: Vec<f64>,
    /// Arithmetic mean of `per_topic`.
    pub aggregate: f64,
}

/// Score a trained model: each topic's `top_n` words (ties broken by
/// ascending term index) are evaluated against the reference corpus.
pub fn coherence_score(
    model: &LdaModel,
    reference: &ReferenceCorpus,
    config: &CoherenceConfig,
) -> Result<CoherenceResult> {
    config.validate()?;
    if config.top_n > model.vocab_size {
        return Err(Error::validation(format!(
            "top_n ({}) exceeds the vocabulary size ({})",
            config.top_n, model.vocab_size
        )));
    }
    let word_lists: Vec<Vec<u32>> = model.phi.iter().map(|row| top_ids(row, config.top_n)).collect();
    score_word_lists(&word_lists, reference, config)
}

/// The `n` highest-probability term indices, ties broken by ascending index.
fn top_ids(phi_row: &[f64], n: usize) -> Vec<u32> {
    let mut ranked: Vec<(usize, f64)> = phi_row.iter().copied().enumerate().collect();
    ranked.sort_by(|a, b| b.1.total_cmp(&a.1).then(a.0.cmp(&b.0)));
    ranked.truncate(n.min(phi_row.len()));
    ranked.into_iter().map(|(i, _)| i as u32).collect()
}

/// Score explicit top-word lists (term indices) against a reference corpus.
/// This is the core [`coherence_score`] delegates to; it is public so callers
/// can score word lists that did not come from an [`LdaModel`].
pub fn score_word_lists(
    word_lists: &[Vec<u32>],
    reference: &ReferenceCorpus,
    config: &CoherenceConfig,
) -> Result<CoherenceResult> {
    config.validate()?;
    if word_lists.is_empty() {
        return Err(Error::validation("cannot score an empty list of topics"));
    }
    for (topic, words) in word_lists.iter().enumerate() {
        if words.is_empty() {
            return Err(Error::validation(format!(
                "topic {topic} has an empty top-word list"
            )));
        }
    }

    let query: BTreeSet<u32> = word_lists.iter().flatten().copied().collect();
    let mode = match config.measure {
        CoherenceMeasure::UMass => ProbabilityMode::BoolDoc,
        CoherenceMeasure::CNpmiWindow => ProbabilityMode::BoolWindow {
            width: config.window,
        },
    };
    let table = estimate_probabilities(reference, &query, mode);

    let per_topic: Vec<f64> = word_lists
        .iter()
        .map(|words| match config.measure {
            CoherenceMeasure::UMass => umass_topic(words, &table, config.epsilon),
            CoherenceMeasure::CNpmiWindow => npmi_set_topic(words, &table, config.epsilon),
        })
        .collect();
    let aggregate = per_topic.iter().sum::<f64>() / per_topic.len() as f64;

    Ok(CoherenceResult {
        num_topics: word_lists.len(),
        per_topic,
        aggregate,
    })
}

/// UMass topic score: mean log-ratio confirmation over `one_pre` segments.
/// Segments whose condition word never occurs are skipped — the ratio is
/// undefined without a base document count.
fn umass_topic(words: &[u32], table: &ProbabilityTable, epsilon: f64) -> f64 {
    let mut total = 0.0;
    let mut evaluated = 0usize;
    for seg in segment(words.len(), SegmentScheme::OnePre) {
        let Condition::Word(condition) = seg.condition else {
            unreachable!("one_pre yields single-word conditions");
        };
        let d_j = table.marginal_count(words[condition]);
        if d_j == 0 {
            continue;
        }
        let d_ij = table.joint_count(words[seg.subject], words[condition]);
        total += confirmation_umass(d_ij, d_j, epsilon);
        evaluated += 1;
    }
    if evaluated == 0 {
        0.0
    } else {
        total / evaluated as f64
    }
}

/// Windowed-NPMI topic score with `one_set` segments: each word's NPMI
/// context vector (its NPMI against every top word, itself included) is
/// compared by cosine against the sum of all the topic's context vectors.
fn npmi_set_topic(words: &[u32], table: &ProbabilityTable, epsilon: f64) -> f64 {
    let n = words.len();
    let mut vectors = vec![vec![0.0; n]; n];
    for i in 0..n {
        for j in 0..n {
            vectors[i][j] = confirmation_npmi(
                table.joint(words[i], words[j]),
                table.marginal(words[i]),
                table.marginal(words[j]),
                epsilon,
            );
        }
    }
    let mut set_vector = vec![0.0; n];
    for vector in &vectors {
        for (s, v) in set_vector.iter_mut().zip(vector) {
            *s += v;
        }
    }

    let mut total = 0.0;
    for seg in segment(n, SegmentScheme::OneSet) {
        total += cosine_or_zero(&vectors[seg.subject], &set_vector);
    }
    total / n as f64
}

/// Cosine similarity, with all-zero vectors scoring 0 instead of NaN.
fn cosine_or_zero(a: &[f64], b: &[f64]) -> f64 {
    let dot: f64 = a.iter().zip(b).map(|(x, y)| x * y).sum();
    let norm_a: f64 = a.iter().map(|x| x * x).sum::<f64>().sqrt();
    let norm_b: f64 = b.iter().map(|x| x * x).sum::<f64>().sqrt();
    if norm_a == 0.0 || norm_b == 0.0 {
        return 0.0;
    }
    dot / (norm_a * norm_b)
}

/// Whether the sweep fixes alpha or rescales it per candidate K.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub enum AlphaChoice {
    /// `alpha = 50 / K` for each candidate (the usual heuristic).
    Auto,
    Fixed(f64),
}

/// Training template for [`sweep_topic_numbers`]: everything an
/// [`LdaConfig`] holds except the topic count and the per-run seed, which
/// the sweep derives itself.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepConfig {
    pub k_min: usize,
    pub k_max: usize,
    /// Independent Gibbs chains trained per candidate K (default 3).
    pub seeds_per_k: usize,
    pub alpha: AlphaChoice,
    pub beta: f64,
    pub iterations: usize,
    pub burn_in: usize,
    pub base_seed: u64,
    pub average_after_burn_in: bool,
}

impl SweepConfig {
    pub fn new(k_range: RangeInclusive<usize>) -> SweepConfig {
        SweepConfig {
            k_min: *k_range.start(),
            k_max: *k_range.end(),
            seeds_per_k: 3,
            alpha: AlphaChoice::Auto,
            beta: 0.01,
            iterations: 1000,
            burn_in: 200,
            base_seed: 0,
            average_after_burn_in: false,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.k_min < 1 || self.k_min > self.k_max {
            return Err(Error::validation(format!(
                "invalid K range [{}, {}]",
                self.k_min, self.k_max
            )));
        }
        if self.seeds_per_k == 0 {
            return Err(Error::validation("seeds_per_k must be at least 1"));
        }
        // The remaining fields are validated per run through LdaConfig.
        Ok(())
    }

    fn lda_config(&self, k: usize, replicate: usize) -> LdaConfig {
        LdaConfig {
            num_topics: k,
            alpha: match self.alpha {
                AlphaChoice::Auto => 50.0 / k as f64,
                AlphaChoice::Fixed(a) => a,
            },
            beta: self.beta,
            iterations: self.iterations,
            burn_in: self.burn_in,
            seed: derive_seed(self.base_seed, k, replicate),
            average_after_burn_in: self.average_after_burn_in,
        }
    }
}

/// One trained-and-scored chain within a sweep.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepRun {
    pub seed: u64,
    pub per_topic: Vec<f64>,
    pub coherence: f64,
}

/// All runs for one candidate K plus their mean coherence.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepEntry {
    pub k: usize,
    pub runs: Vec<SweepRun>,
    pub mean_coherence: f64,
}

/// Outcome of a sweep: per-K entries (ascending K) and the recommended K.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepResult {
    pub entries: Vec<SweepEntry>,
    pub best_k: usize,
}

/// Deterministic per-run seed: a SplitMix64 finalizer over the base seed and
/// the (K, replicate) coordinates, so every chain in the sweep gets its own
/// reproducible stream.
pub(crate) fn derive_seed(base: u64, k: usize, replicate: usize) -> u64 {
    let mut x = base
        .wrapping_add((k as u64).wrapping_mul(0x9E37_79B9_7F4A_7C15))
        .wrapping_add((replicate as u64).wrapping_mul(0xBF58_476D_1CE4_E5B9));
    x ^= x >> 30;
    x = x.wrapping_mul(0xBF58_476D_1CE4_E5B9);
    x ^= x >> 27;
    x = x.wrapping_mul(0x94D0_49BB_1331_11EB);
    x ^= x >> 31;
    x
}

/// Train `seeds_per_k` chains for every K in the range, score each against
/// `reference`, and recommend the K with the highest mean coherence (ties go
/// to the smallest K).
///
/// Runs are independent and collected in a fixed order, so the result does
/// not depend on the ambient rayon thread count.
pub fn sweep_topic_numbers(
    corpus: &BowCorpus,
    reference: &ReferenceCorpus,
    sweep: &SweepConfig,
    coherence: &CoherenceConfig,
) -> Result<SweepResult> {
    sweep.validate()?;
    coherence.validate()?;

    let jobs: Vec<(usize, usize)> = (sweep.k_min..=sweep.k_max)
        .flat_map(|k| (0..sweep.seeds_per_k).map(move |r| (k, r)))
        .collect();
    let runs: Vec<Result<(usize, SweepRun)>> = jobs
        .par_iter()
        .map(|&(k, replicate)| {
            let config = sweep.lda_config(k, replicate);
            let model = train_gibbs(corpus, &config)?;
            let result = coherence_score(&model, reference, coherence)?;
            Ok((
                k,
                SweepRun {
                    seed: config.seed,
                    per_topic: result.per_topic,
                    coherence: result.aggregate,
                },
            ))
        })
        .collect();

    let mut entries: Vec<SweepEntry> = Vec::new();
    for run in runs {
        let (k, run) = run?;
        match entries.last_mut() {
            Some(entry) if entry.k == k => entry.runs.push(run),
            _ => entries.push(SweepEntry {
                k,
                runs: vec![run],
                mean_coherence: 0.0,
            }),
        }
    }
    for entry in &mut entries {
        entry.mean_coherence =
            entry.runs.iter().map(|r| r.coherence).sum::<f64>() / entry.runs.len() as f64;
    }

    let best_k = pick_best(&entries);
    Ok(SweepResult { entries, best_k })
}

/// Argmax of mean coherence; on exact ties the smallest K wins. `entries`
/// must be sorted by ascending K, which [`sweep_topic_numbers`] guarantees.
fn pick_best(entries: &[SweepEntry]) -> usize {
    let mut best_k = entries[0].k;
    let mut best_mean = entries[0].mean_coherence;
    for entry in &entries[1..] {
        if entry.mean_coherence > best_mean {
            best_mean = entry.mean_coherence;
            best_k = entry.k;
        }
    }
    best_k
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corpus::{build_vocabulary, Document, Vocabulary};

    fn reference_from(token_lists: &[&[&str]]) -> (ReferenceCorpus, Vocabulary) {
        let docs: Vec<Document> = token_lists
            .iter()
            .enumerate()
            .map(|(i, tokens)| Document {
                id: format!("d{i}"),
                year: 2015,
                tokens: tokens.iter().map(|t| t.to_string()).collect(),
            })
            .collect();
        let vocab = build_vocabulary(&docs, 1, 1.0).unwrap();
        (ReferenceCorpus::from_documents(&docs, &vocab), vocab)
    }

    #[test]
    fn one_pre_pairs_each_word_with_every_earlier_word() {
        // For [a, b, c]: (b,a), (c,a), (c,b) in that order.
        let segments = segment(3, SegmentScheme::OnePre);
        let expected = vec![
            Segment { subject: 1, condition: Condition::Word(0) },
            Segment { subject: 2, condition: Condition::Word(0) },
            Segment { subject: 2, condition: Condition::Word(1) },
        ];
        assert_eq!(segments, expected);
    }

    #[test]
    fn one_set_pairs_each_word_with_the_full_set() {
        let segments = segment(2, SegmentScheme::OneSet);
        assert_eq!(segments.len(), 2);
        assert!(segments
            .iter()
            .enumerate()
            .all(|(i, s)| s.subject == i && s.condition == Condition::AllWords));
    }

    #[test]
    fn single_word_lists_have_no_one_pre_segments() {
        assert!(segment(1, SegmentScheme::OnePre).is_empty());
        assert_eq!(segment(1, SegmentScheme::OneSet).len(), 1);
    }

    #[test]
    fn npmi_of_a_never_cooccurring_pair_matches_the_closed_form() {
        // p_i = p_j = 0.5, p_ij = 0, eps = 1e-12:
        // ln(1e-12 / 0.25) / -ln(1e-12) = -0.9498283340560031.
        let value = confirmation_npmi(0.0, 0.5, 0.5, 1e-12);
        assert!((value - (-0.9498283340560031)).abs() < 1e-12);
    }

    #[test]
    fn npmi_of_perfect_association_is_one() {
        let value = confirmation_npmi(0.5, 0.5, 0.5, 1e-12);
        assert_eq!(value, 1.0);
        // Words present in every unit co-occur in every unit.
        assert_eq!(confirmation_npmi(1.0, 1.0, 1.0, 1e-12), 1.0);
    }

    #[test]
    fn npmi_of_independent_words_is_near_zero() {
        let value = confirmation_npmi(0.25, 0.5, 0.5, 1e-12);
        assert!(value.abs() < 1e-9, "got {value}");
    }

    #[test]
    fn npmi_with_a_zero_marginal_is_zero() {
        assert_eq!(confirmation_npmi(0.0, 0.0, 0.5, 1e-12), 0.0);
        assert_eq!(confirmation_npmi(0.0, 0.5, 0.0, 1e-12), 0.0);
    }

    #[test]
    fn umass_two_document_example_is_exactly_zero() {
        // Corpus: {a, b} and {a}. Topic words [a, b], eps = 1.
        // One segment (b, a): ln((D(b,a) + 1) / D(a)) = ln(2/2) = 0.
        let (reference, vocab) = reference_from(&[&["aa", "bb"], &["aa"]]);
        let a = vocab.index_of("aa").unwrap();
        let b = vocab.index_of("bb").unwrap();
        let result =
            score_word_lists(&[vec![a, b]], &reference, &CoherenceConfig::u_mass()).unwrap();
        assert_eq!(result.per_topic, vec![0.0]);
        assert_eq!(result.aggregate, 0.0);
    }

    #[test]
    fn cooccurring_words_score_higher_than_separated_words() {
        // "xx yy" always co-occur; "pp" and "qq" never do.
        let token_lists: &[&[&str]] = &[
            &["xx", "yy"],
            &["xx", "yy"],
            &["xx", "yy"],
            &["pp"],
            &["qq"],
            &["pp"],
            &["qq"],
        ];
        let (reference, vocab) = reference_from(token_lists);
        let ids = |terms: &[&str]| -> Vec<u32> {
            terms.iter().map(|t| vocab.index_of(t).unwrap()).collect()
        };
        let lists = vec![ids(&["xx", "yy"]), ids(&["pp", "qq"])];

        for config in [CoherenceConfig::u_mass(), CoherenceConfig::npmi_window()] {
            let result = score_word_lists(&lists, &reference, &config).unwrap();
            assert!(
                result.per_topic[0] > result.per_topic[1],
                "{:?}: {:?}",
                config.measure,
                result.per_topic
            );
        }
    }

    #[test]
    fn identical_word_lists_get_identical_scores() {
        let (reference, vocab) = reference_from(&[&["aa", "bb", "cc"], &["bb", "cc"], &["aa"]]);
        let list: Vec<u32> = ["aa", "bb", "cc"]
            .iter()
            .map(|t| vocab.index_of(t).unwrap())
            .collect();
        let result = score_word_lists(
            &[list.clone(), list],
            &reference,
            &CoherenceConfig::npmi_window(),
        )
        .unwrap();
        assert_eq!(result.per_topic[0], result.per_topic[1]);
        assert_eq!(result.aggregate, result.per_topic[0]);
    }

    #[test]
    fn npmi_topic_scores_stay_within_bounds() {
        let (reference, vocab) = reference_from(&[
            &["aa", "bb", "cc", "dd"],
            &["aa", "cc"],
            &["bb", "dd", "dd"],
            &["cc"],
        ]);
        let list: Vec<u32> = ["aa", "bb", "cc", "dd"]
            .iter()
            .map(|t| vocab.index_of(t).unwrap())
            .collect();
        let result =
            score_word_lists(&[list], &reference, &CoherenceConfig::npmi_window()).unwrap();
        assert!(result.per_topic[0] >= -1.0 && result.per_topic[0] <= 1.0);
    }

    #[test]
    fn top_n_larger_than_vocabulary_is_rejected() {
        let (reference, _) = reference_from(&[&["aa", "bb"]]);
        let corpus_docs: &[&[&str]] = &[&["aa", "bb"], &["aa"]];
        let (_, vocab) = reference_from(corpus_docs);
        let docs: Vec<Document> = corpus_docs
            .iter()
            .enumerate()
            .map(|(i, tokens)| Document {
                id: format!("d{i}"),
                year: 2015,
                tokens: tokens.iter().map(|t| t.to_string()).collect(),
            })
            .collect();
        let bow = crate::corpus::to_bow(&docs, vocab).corpus;
        let mut config = LdaConfig::new(1);
        config.iterations = 2;
        config.burn_in = 1;
        let model = train_gibbs(&bow, &config).unwrap();

        let mut coherence = CoherenceConfig::npmi_window();
        coherence.top_n = 50;
        let err = coherence_score(&model, &reference, &coherence).unwrap_err();
        assert!(matches!(err, Error::Validation(_)));
    }

    #[test]
    fn config_validation_catches_bad_values() {
        let mut config = CoherenceConfig::npmi_window();
        config.top_n = 1;
        assert!(config.validate().is_err());

        let mut config = CoherenceConfig::npmi_window();
        config.window = 1;
        assert!(config.validate().is_err());

        let mut config = CoherenceConfig::u_mass();
        config.window = 1; // irrelevant for document-level statistics
        assert!(config.validate().is_ok());

        let mut config = CoherenceConfig::u_mass();
        config.epsilon = 0.0;
        assert!(config.validate().is_err());
    }

    #[test]
    fn derived_seeds_are_distinct_across_runs() {
        let mut seen = std::collections::HashSet::new();
        for k in 2..=10 {
            for r in 0..5 {
                assert!(seen.insert(derive_seed(42, k, r)));
            }
        }
    }

    #[test]
    fn pick_best_breaks_ties_toward_the_smallest_k() {
        let entry = |k: usize, mean: f64| SweepEntry {
            k,
            runs: Vec::new(),
            mean_coherence: mean,
        };
        assert_eq!(pick_best(&[entry(2, 0.5), entry(3, 0.5), entry(4, 0.4)]), 2);
        assert_eq!(pick_best(&[entry(2, 0.1), entry(3, 0.5), entry(4, 0.5)]), 3);
        assert_eq!(pick_best(&[entry(2, 0.1), entry(3, 0.2), entry(4, 0.5)]), 4);
    }

    #[test]
    fn sweep_over_a_singleton_range_recommends_that_k() {
        let (reference, vocab) = reference_from(&[
            &["aa", "bb", "cc"],
            &["aa", "cc", "dd"],
            &["bb", "dd"],
            &["aa", "bb"],
        ]);
        let docs: Vec<Document> = [
            &["aa", "bb", "cc"][..],
            &["aa", "cc", "dd"][..],
            &["bb", "dd"][..],
            &["aa", "bb"][..],
        ]
        .iter()
        .enumerate()
        .map(|(i, tokens)| Document {
            id: format!("d{i}"),
            year: 2015,
            tokens: tokens.iter().map(|t| t.to_string()).collect(),
        })
        .collect();
        let corpus = crate::corpus::to_bow(&docs, vocab).corpus;

        let mut sweep = SweepConfig::new(2..=2);
        sweep.seeds_per_k = 2;
        sweep.iterations = 20;
        sweep.burn_in = 5;
        let mut coherence = CoherenceConfig::npmi_window();
        coherence.top_n = 2;

        let result = sweep_topic_numbers(&corpus, &reference, &sweep, &coherence).unwrap();
        assert_eq!(result.best_k, 2);
        assert_eq!(result.entries.len(), 1);
        assert_eq!(result.entries[0].runs.len(), 2);
        assert_eq!(
            result.entries[0].mean_coherence,
            (result.entries[0].runs[0].coherence + result.entries[0].runs[1].coherence) / 2.0
        );

        // Deterministic: the same sweep gives byte-identical results.
        let again = sweep_topic_numbers(&corpus, &reference, &sweep, &coherence).unwrap();
        assert_eq!(result, again);
    }

    #[test]
    fn sweep_rejects_an_empty_range() {
        let (reference, vocab) = reference_from(&[&["aa", "bb"]]);
        let docs = vec![Document {
            id: "d0".into(),
            year: 2015,
            tokens: vec!["aa".into(), "bb".into()],
        }];
        let corpus = crate::corpus::to_bow(&docs, vocab).corpus;
        let sweep = SweepConfig {
            k_min: 5,
            k_max: 2,
            ..SweepConfig::new(2..=2)
        };
        let err =
            sweep_topic_numbers(&corpus, &reference, &sweep, &CoherenceConfig::default())
                .unwrap_err();
        assert!(matches!(err, Error::Validation(_)));
    }
}
