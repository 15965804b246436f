//! Subcommand implementations. Each one is a pure function of the resolved
//! configuration plus the files it names: given the same inputs and seed it
//! writes byte-identical outputs.

use std::fmt::Write as _;
use std::fs;
use std::path::PathBuf;

use serde::Serialize;

use topicmine::coherence::{
    sweep_topic_numbers, AlphaChoice, CoherenceConfig, CoherenceMeasure, ReferenceCorpus,
    SweepConfig, SweepResult,
};
use topicmine::cooccur::{build_cooccurrence_graph, export_gexf, graph_metrics};
use topicmine::corpus::{
    build_vocabulary, load_records, preprocess, to_bow, BowCorpus, Lexicon, PreprocessOptions,
    StopwordList,
};
use topicmine::distance::{topic_distance_matrix, DistanceKind};
use topicmine::lda::{top_words, train_gibbs, LdaConfig, LdaModel};
use topicmine::trends::{
    annual_counts_from_years, emit_trend_outputs, topic_annual_counts, AttributionRule,
};
use topicmine::{Error, Result};

use crate::config::{AttributionChoice, PipelineConfig};

/// Load records, preprocess them, build the vocabulary, and write the corpus
/// bundle plus an ingest report.
pub fn cmd_ingest(config: &PipelineConfig) -> Result<()> {
    ingest_corpus(config)?;
    Ok(())
}

/// Train across the configured topic-count range and report the best one.
pub fn cmd_sweep(config: &PipelineConfig) -> Result<()> {
    let corpus = load_bundle(config)?;
    run_sweep(&corpus, config)?;
    Ok(())
}

/// Train at the configured topic count and emit the full artifact set.
pub fn cmd_analyze(config: &PipelineConfig) -> Result<()> {
    let corpus = load_bundle(config)?;
    let k = config.num_topics.ok_or_else(|| {
        Error::Validation(
            "num-topics is required for analyze (flag --num-topics or config key num-topics)"
                .to_string(),
        )
    })?;
    run_analyze(&corpus, k, config)
}

/// Re-emit the analysis artifacts from a saved model without retraining.
pub fn cmd_export(config: &PipelineConfig) -> Result<()> {
    let model_path = config.model.as_ref().ok_or_else(|| {
        Error::Validation(
            "model is required for export (flag --model or config key model)".to_string(),
        )
    })?;
    let model = if model_path.extension().is_some_and(|e| e == "bin") {
        LdaModel::load_binary(model_path)?
    } else {
        LdaModel::load_json(model_path)?
    };
    model.validate()?;

    let corpus = load_bundle(config)?;
    if model.vocab_size != corpus.vocab_size() || model.num_docs() != corpus.num_docs() {
        return Err(Error::Validation(format!(
            "model was trained on {} documents over {} terms, but the bundle has {} documents \
             over {} terms",
            model.num_docs(),
            model.vocab_size,
            corpus.num_docs(),
            corpus.vocab_size()
        )));
    }
    emit_artifacts(&model, &corpus, config)
}

/// The whole pipeline: ingest, pick a topic count (unless one is configured),
/// analyze.
pub fn cmd_run_all(config: &PipelineConfig) -> Result<()> {
    let corpus = ingest_corpus(config)?;
    let k = match config.num_topics {
        Some(k) => {
            println!("run-all: num-topics is set, skipping the sweep and using k={k}");
            k
        }
        None => run_sweep(&corpus, config)?.best_k,
    };
    run_analyze(&corpus, k, config)
}

#[derive(Serialize)]
struct IngestReport<'a> {
    records_in: usize,
    documents_kept: usize,
    dropped_empty_after_preprocess: &'a [String],
    dropped_empty_after_vocabulary: &'a [String],
    vocabulary_size: usize,
    total_tokens: u64,
}

fn ingest_corpus(config: &PipelineConfig) -> Result<BowCorpus> {
    let input = config.input.as_ref().ok_or_else(|| {
        Error::Validation(
            "input is required for ingest (flag --input or config key input)".to_string(),
        )
    })?;
    let records = load_records(input, config.format)?;

    let mut options = PreprocessOptions::default();
    if let Some(path) = &config.stopwords_en {
        options.stopwords_en = StopwordList::load(path)?;
    }
    if let Some(path) = &config.stopwords_zh {
        options.stopwords_zh = StopwordList::load(path)?;
    }
    if let Some(path) = &config.lexicon {
        options.lexicon = Some(Lexicon::load(path)?);
    }
    options.min_token_len_en = config.min_token_len_en;
    options.min_token_len_zh = config.min_token_len_zh;
    options.include_title = config.include_title;
    options.keep_numeric = config.keep_numeric;

    let outcome = preprocess(&records, &options);
    if outcome.documents.is_empty() {
        return Err(Error::Validation(
            "empty corpus: no document contains any tokens after preprocessing".to_string(),
        ));
    }
    let vocabulary = build_vocabulary(&outcome.documents, config.min_df, config.max_df_ratio)?;
    let bow = to_bow(&outcome.documents, vocabulary);
    if bow.corpus.docs.is_empty() {
        return Err(Error::Validation(
            "empty corpus: the vocabulary thresholds removed every token of every document"
                .to_string(),
        ));
    }

    create_out_dir(config)?;
    let bundle_path = config.out.join("corpus.json");
    bow.corpus.save_json(&bundle_path)?;
    let report = IngestReport {
        records_in: records.len(),
        documents_kept: bow.corpus.num_docs(),
        dropped_empty_after_preprocess: &outcome.dropped_ids,
        dropped_empty_after_vocabulary: &bow.dropped_ids,
        vocabulary_size: bow.corpus.vocab_size(),
        total_tokens: bow.corpus.total_tokens(),
    };
    write_json(config, "ingest_report.json", &report)?;

    println!(
        "ingest: kept {} of {} records ({} terms, {} tokens)",
        bow.corpus.num_docs(),
        records.len(),
        bow.corpus.vocab_size(),
        bow.corpus.total_tokens()
    );
    println!("ingest: corpus bundle written to {}", bundle_path.display());
    Ok(bow.corpus)
}

/// The bundle named by `--bundle`, defaulting to `<out>/corpus.json` so a
/// plain `ingest` → `sweep` → `analyze` sequence needs no extra flags.
fn load_bundle(config: &PipelineConfig) -> Result<BowCorpus> {
    let path = config
        .bundle
        .clone()
        .unwrap_or_else(|| config.out.join("corpus.json"));
    let corpus = BowCorpus::load_json(&path)?;
    corpus.validate()?;
    Ok(corpus)
}

fn lda_config(config: &PipelineConfig, k: usize) -> LdaConfig {
    LdaConfig {
        num_topics: k,
        alpha: config.alpha.unwrap_or(50.0 / k.max(1) as f64),
        beta: config.beta,
        iterations: config.iterations,
        burn_in: config.burn_in,
        seed: config.seed,
        average_after_burn_in: config.average,
    }
}

fn coherence_config(config: &PipelineConfig) -> CoherenceConfig {
    let mut coherence = match config.measure {
        CoherenceMeasure::UMass => CoherenceConfig::u_mass(),
        CoherenceMeasure::CNpmiWindow => CoherenceConfig::npmi_window(),
    };
    coherence.top_n = config.top_n;
    coherence.window = config.window;
    coherence
}

fn run_sweep(corpus: &BowCorpus, config: &PipelineConfig) -> Result<SweepResult> {
    let reference = ReferenceCorpus::from_bow(corpus);
    let mut sweep = SweepConfig::new(config.k_min..=config.k_max);
    sweep.seeds_per_k = config.seeds_per_k;
    sweep.alpha = match config.alpha {
        Some(alpha) => AlphaChoice::Fixed(alpha),
        None => AlphaChoice::Auto,
    };
    sweep.beta = config.beta;
    sweep.iterations = config.iterations;
    sweep.burn_in = config.burn_in;
    sweep.base_seed = config.seed;
    sweep.average_after_burn_in = config.average;

    let result = sweep_topic_numbers(corpus, &reference, &sweep, &coherence_config(config))?;

    create_out_dir(config)?;
    let mut runs_csv = String::from("k,replicate,seed,coherence\n");
    let mut summary_csv = String::from("k,mean_coherence\n");
    for entry in &result.entries {
        for (replicate, run) in entry.runs.iter().enumerate() {
            let _ = writeln!(
                runs_csv,
                "{},{replicate},{},{}",
                entry.k, run.seed, run.coherence
            );
        }
        let _ = writeln!(summary_csv, "{},{}", entry.k, entry.mean_coherence);
        println!(
            "sweep: k={} mean coherence {:.6} over {} runs",
            entry.k,
            entry.mean_coherence,
            entry.runs.len()
        );
    }
    write_text(config, "sweep.csv", &runs_csv)?;
    write_text(config, "sweep_summary.csv", &summary_csv)?;
    write_json(config, "sweep_result.json", &result)?;
    println!("sweep: recommended number of topics: {}", result.best_k);
    Ok(result)
}

fn run_analyze(corpus: &BowCorpus, k: usize, config: &PipelineConfig) -> Result<()> {
    let lda = lda_config(config, k);
    lda.validate()?;
    println!(
        "analyze: training {k} topics (alpha {:.4}, beta {}, {} sweeps, seed {})",
        lda.alpha, lda.beta, lda.iterations, lda.seed
    );
    let model = train_gibbs(corpus, &lda)?;
    emit_artifacts(&model, corpus, config)
}

#[derive(Serialize)]
struct NetworkReport {
    num_topics: usize,
    num_edges: usize,
    total_weight: u64,
    density: f64,
    density_defined: bool,
    degree: Vec<usize>,
    weighted_degree: Vec<u64>,
    node_documents: Vec<u64>,
}

/// Write every analysis artifact for a trained model into the output
/// directory under fixed names.
fn emit_artifacts(model: &LdaModel, corpus: &BowCorpus, config: &PipelineConfig) -> Result<()> {
    create_out_dir(config)?;
    let out = &config.out;

    model.save_json(&out.join("model.json"))?;
    model.save_binary(&out.join("model.bin"))?;

    // Ranked word table, one row per (topic, rank).
    let n = config.top_n;
    let mut words_csv = String::from("topic,rank,term,weight_pct\n");
    for topic in 0..model.num_topics() {
        let summary = top_words(model, &corpus.vocabulary, topic, n)?;
        for (rank, term) in summary.terms.iter().enumerate() {
            let _ = writeln!(
                words_csv,
                "{topic},{},{},{}",
                rank + 1,
                term.term,
                term.probability_pct
            );
        }
        let preview: Vec<&str> = summary
            .terms
            .iter()
            .take(6)
            .map(|t| t.term.as_str())
            .collect();
        println!("topic {topic}: {}", preview.join(" "));
    }
    write_text(config, "topic_top_words.csv", &words_csv)?;

    topic_distance_matrix(model, DistanceKind::Kl)?.save_csv(&out.join("distance_kl.csv"))?;
    topic_distance_matrix(model, DistanceKind::Cosine)?
        .save_csv(&out.join("distance_cosine.csv"))?;

    let graph = build_cooccurrence_graph(model, config.threshold)?;
    export_gexf(&graph, &out.join("cooccurrence.gexf"))?;
    graph.save_edges_csv(&out.join("cooccurrence_edges.csv"))?;
    let metrics = graph_metrics(&graph);
    let report = NetworkReport {
        num_topics: graph.num_topics,
        num_edges: graph.num_edges(),
        total_weight: graph.total_weight(),
        density: metrics.density,
        density_defined: metrics.density_defined,
        degree: metrics.degree,
        weighted_degree: metrics.weighted_degree,
        node_documents: graph.node_doc_counts.clone(),
    };
    write_json(config, "cooccurrence_metrics.json", &report)?;

    let all_years = annual_counts_from_years(corpus.docs.iter().map(|d| d.year));
    emit_trend_outputs(&all_years, &out.join("trends_all"))?;
    let rule = match config.attribution {
        AttributionChoice::Dominant => AttributionRule::Dominant,
        AttributionChoice::MainTopics => AttributionRule::MainTopics {
            threshold: config.threshold,
        },
    };
    let by_topic = topic_annual_counts(model, corpus, rule, None)?;
    emit_trend_outputs(&by_topic, &out.join("trends_topics"))?;

    println!(
        "analyze: {} topics, {} network edges, artifacts in {}",
        model.num_topics(),
        graph.num_edges(),
        out.display()
    );
    Ok(())
}

fn create_out_dir(config: &PipelineConfig) -> Result<()> {
    fs::create_dir_all(&config.out).map_err(|e| Error::Io {
        path: config.out.clone(),
        source: e,
    })
}

fn write_text(config: &PipelineConfig, name: &str, contents: &str) -> Result<()> {
    let path = config.out.join(name);
    fs::write(&path, contents).map_err(|e| Error::Io { path, source: e })
}

fn write_json<T: Serialize>(config: &PipelineConfig, name: &str, value: &T) -> Result<()> {
    let path: PathBuf = config.out.join(name);
    let mut text = serde_json::to_string_pretty(value).map_err(|e| {
        Error::Validation(format!("could not serialize {name}: {e}"))
    })?;
    text.push('\n');
    fs::write(&path, text).map_err(|e| Error::Io { path, source: e })
}
