//! Pipeline configuration: a key=value file merged with command-line flags.
//!
//! Every setting has a default, may be set in the configuration file, and may
//! be overridden by the flag of the same name — the flag always wins. Keys
//! use the flag spelling (`max-df-ratio`, not `max_df_ratio`); unknown keys
//! are rejected so typos fail loudly instead of silently using a default.

use std::collections::BTreeMap;
use std::fmt::Display;
use std::fs;
use std::path::PathBuf;
use std::str::FromStr;

use topicmine::coherence::CoherenceMeasure;
use topicmine::corpus::RecordFormat;
use topicmine::{Error, Result};

/// Every key the configuration file accepts.
pub const CONFIG_KEYS: &[&str] = &[
    "input",
    "format",
    "out",
    "stopwords-en",
    "stopwords-zh",
    "lexicon",
    "min-df",
    "max-df-ratio",
    "min-token-len-en",
    "min-token-len-zh",
    "include-title",
    "keep-numeric",
    "bundle",
    "model",
    "num-topics",
    "alpha",
    "beta",
    "iterations",
    "burn-in",
    "seed",
    "average",
    "k-min",
    "k-max",
    "seeds-per-k",
    "measure",
    "top-n",
    "window",
    "threshold",
    "attribution",
];

/// Raw `key = value` entries from a configuration file.
#[derive(Debug, Clone, Default)]
pub struct ConfigFile {
    entries: BTreeMap<String, String>,
}

impl ConfigFile {
    /// Parse configuration text: one `key = value` per line, `#` starts a
    /// comment, blank lines are ignored. Duplicate or unknown keys are
    /// errors.
    pub fn parse(text: &str) -> Result<ConfigFile> {
        let mut entries = BTreeMap::new();
        for (index, raw_line) in text.lines().enumerate() {
            let line = match raw_line.find('#') {
                Some(pos) => &raw_line[..pos],
                None => raw_line,
            }
            .trim();
            if line.is_empty() {
                continue;
            }
            let Some((key, value)) = line.split_once('=') else {
                return Err(Error::Parse {
                    line: index + 1,
                    field: "(config line)".to_string(),
                    message: format!("expected `key = value`, got {line:?}"),
                });
            };
            let key = key.trim().to_string();
            let value = value.trim().to_string();
            if !CONFIG_KEYS.contains(&key.as_str()) {
                return Err(Error::Parse {
                    line: index + 1,
                    field: key,
                    message: "unknown configuration key".to_string(),
                });
            }
            if entries.insert(key.clone(), value).is_some() {
                return Err(Error::Parse {
                    line: index + 1,
                    field: key,
                    message: "key set more than once".to_string(),
                });
            }
        }
        Ok(ConfigFile { entries })
    }

    pub fn load(path: &PathBuf) -> Result<ConfigFile> {
        let text = fs::read_to_string(path).map_err(|e| Error::Io {
            path: path.clone(),
            source: e,
        })?;
        ConfigFile::parse(&text)
    }
}

/// All flags shared by the subcommands. Anything left unset falls back to
/// the configuration file and then to the built-in default.
#[derive(Debug, Clone, Default, clap::Args)]
pub struct Overrides {
    /// Records file (JSON Lines or CSV).
    #[arg(long, value_name = "FILE")]
    pub input: Option<PathBuf>,
    /// Records format: jsonl or csv (default jsonl).
    #[arg(long, value_name = "FMT")]
    pub format: Option<String>,
    /// Output directory (default `out`).
    #[arg(long, value_name = "DIR")]
    pub out: Option<PathBuf>,
    /// English stopword list, one term per line.
    #[arg(long, value_name = "FILE")]
    pub stopwords_en: Option<PathBuf>,
    /// Chinese stopword list, one term per line.
    #[arg(long, value_name = "FILE")]
    pub stopwords_zh: Option<PathBuf>,
    /// Chinese segmentation lexicon, one term per line.
    #[arg(long, value_name = "FILE")]
    pub lexicon: Option<PathBuf>,
    /// Drop terms appearing in fewer than N documents (default 1).
    #[arg(long, value_name = "N")]
    pub min_df: Option<u32>,
    /// Drop terms appearing in more than this fraction of documents
    /// (default 1.0 = keep all).
    #[arg(long, value_name = "X")]
    pub max_df_ratio: Option<f64>,
    /// Minimum English token length (default 2).
    #[arg(long, value_name = "N")]
    pub min_token_len_en: Option<usize>,
    /// Minimum Chinese token length (default 1).
    #[arg(long, value_name = "N")]
    pub min_token_len_zh: Option<usize>,
    /// Prepend record titles to abstracts before tokenization.
    #[arg(long)]
    pub include_title: bool,
    /// Keep purely numeric tokens instead of dropping them.
    #[arg(long)]
    pub keep_numeric: bool,
    /// Corpus bundle written by `ingest` (default `<out>/corpus.json`).
    #[arg(long, value_name = "FILE")]
    pub bundle: Option<PathBuf>,
    /// Saved model file (.json or .bin) for `export`.
    #[arg(long, value_name = "FILE")]
    pub model: Option<PathBuf>,
    /// Number of topics for `analyze`.
    #[arg(long, value_name = "K")]
    pub num_topics: Option<usize>,
    /// Dirichlet document-topic prior: a number, or `auto` for 50/K
    /// (default auto).
    #[arg(long, value_name = "X|auto")]
    pub alpha: Option<String>,
    /// Dirichlet topic-word prior (default 0.01).
    #[arg(long, value_name = "X")]
    pub beta: Option<f64>,
    /// Gibbs sweeps (default 1000).
    #[arg(long, value_name = "N")]
    pub iterations: Option<usize>,
    /// Sweeps discarded before estimates are read (default 200).
    #[arg(long, value_name = "N")]
    pub burn_in: Option<usize>,
    /// Base random seed (default 42).
    #[arg(long, value_name = "N")]
    pub seed: Option<u64>,
    /// Average estimates over post-burn-in sweeps instead of using the
    /// final sweep.
    #[arg(long)]
    pub average: bool,
    /// Smallest candidate topic count for `sweep` (default 2).
    #[arg(long, value_name = "K")]
    pub k_min: Option<usize>,
    /// Largest candidate topic count for `sweep` (default 10).
    #[arg(long, value_name = "K")]
    pub k_max: Option<usize>,
    /// Independent training runs per candidate topic count (default 3).
    #[arg(long, value_name = "N")]
    pub seeds_per_k: Option<usize>,
    /// Coherence measure: c_npmi_window or u_mass (default c_npmi_window).
    #[arg(long, value_name = "M")]
    pub measure: Option<String>,
    /// Top words per topic for coherence and the word table (default 10).
    #[arg(long, value_name = "N")]
    pub top_n: Option<usize>,
    /// Sliding-window width for windowed coherence (default 110).
    #[arg(long, value_name = "N")]
    pub window: Option<usize>,
    /// Main-topic share threshold (default 0.10).
    #[arg(long, value_name = "X")]
    pub threshold: Option<f64>,
    /// Trend attribution rule: dominant or main_topics (default dominant).
    #[arg(long, value_name = "RULE")]
    pub attribution: Option<String>,
}

/// Trend attribution rule named in configuration.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum AttributionChoice {
    Dominant,
    MainTopics,
}

/// Fully resolved settings for one invocation.
#[derive(Debug, Clone)]
pub struct PipelineConfig {
    pub input: Option<PathBuf>,
    pub format: RecordFormat,
    pub out: PathBuf,
    pub stopwords_en: Option<PathBuf>,
    pub stopwords_zh: Option<PathBuf>,
    pub lexicon: Option<PathBuf>,
    pub min_df: u32,
    pub max_df_ratio: f64,
    pub min_token_len_en: usize,
    pub min_token_len_zh: usize,
    pub include_title: bool,
    pub keep_numeric: bool,
    pub bundle: Option<PathBuf>,
    pub model: Option<PathBuf>,
    pub num_topics: Option<usize>,
    /// `None` means the 50/K heuristic.
    pub alpha: Option<f64>,
    pub beta: f64,
    pub iterations: usize,
    pub burn_in: usize,
    pub seed: u64,
    pub average: bool,
    pub k_min: usize,
    pub k_max: usize,
    pub seeds_per_k: usize,
    pub measure: CoherenceMeasure,
    pub top_n: usize,
    pub window: usize,
    pub threshold: f64,
    pub attribution: AttributionChoice,
}

fn bad_value(key: &str, value: &str, expected: impl Display) -> Error {
    Error::Validation(format!(
        "configuration key `{key}`: cannot read {value:?} as {expected}"
    ))
}

fn parse_value<T: FromStr>(key: &str, value: &str, expected: &str) -> Result<T> {
    value
        .parse()
        .map_err(|_| bad_value(key, value, expected))
}

fn numeric<T: FromStr>(file: &ConfigFile, key: &str, expected: &str) -> Result<Option<T>> {
    match file.entries.get(key) {
        Some(value) => Ok(Some(parse_value(key, value, expected)?)),
        None => Ok(None),
    }
}

fn boolean(file: &ConfigFile, key: &str) -> Result<Option<bool>> {
    match file.entries.get(key).map(String::as_str) {
        None => Ok(None),
        Some("true") => Ok(Some(true)),
        Some("false") => Ok(Some(false)),
        Some(other) => Err(bad_value(key, other, "true or false")),
    }
}

fn path(file: &ConfigFile, key: &str) -> Option<PathBuf> {
    file.entries.get(key).map(PathBuf::from)
}

fn parse_format(value: &str) -> Result<RecordFormat> {
    match value {
        "jsonl" => Ok(RecordFormat::Jsonl),
        "csv" => Ok(RecordFormat::Csv),
        other => Err(bad_value("format", other, "jsonl or csv")),
    }
}

fn parse_measure(value: &str) -> Result<CoherenceMeasure> {
    match value {
        "c_npmi_window" => Ok(CoherenceMeasure::CNpmiWindow),
        "u_mass" => Ok(CoherenceMeasure::UMass),
        other => Err(bad_value("measure", other, "c_npmi_window or u_mass")),
    }
}

fn parse_attribution(value: &str) -> Result<AttributionChoice> {
    match value {
        "dominant" => Ok(AttributionChoice::Dominant),
        "main_topics" => Ok(AttributionChoice::MainTopics),
        other => Err(bad_value("attribution", other, "dominant or main_topics")),
    }
}

fn parse_alpha(value: &str) -> Result<Option<f64>> {
    if value == "auto" {
        return Ok(None);
    }
    let alpha: f64 = parse_value("alpha", value, "a number or `auto`")?;
    Ok(Some(alpha))
}

impl PipelineConfig {
    /// Merge flag overrides onto the configuration file onto the defaults.
    pub fn resolve(file: Option<&ConfigFile>, flags: &Overrides) -> Result<PipelineConfig> {
        let empty = ConfigFile::default();
        let file = file.unwrap_or(&empty);

        let format = match &flags.format {
            Some(value) => parse_format(value)?,
            None => match file.entries.get("format") {
                Some(value) => parse_format(value)?,
                None => RecordFormat::Jsonl,
            },
        };
        let measure = match &flags.measure {
            Some(value) => parse_measure(value)?,
            None => match file.entries.get("measure") {
                Some(value) => parse_measure(value)?,
                None => CoherenceMeasure::CNpmiWindow,
            },
        };
        let attribution = match &flags.attribution {
            Some(value) => parse_attribution(value)?,
            None => match file.entries.get("attribution") {
                Some(value) => parse_attribution(value)?,
                None => AttributionChoice::Dominant,
            },
        };
        let alpha = match &flags.alpha {
            Some(value) => parse_alpha(value)?,
            None => match file.entries.get("alpha") {
                Some(value) => parse_alpha(value)?,
                None => None,
            },
        };

        let config = PipelineConfig {
            input: flags.input.clone().or_else(|| path(file, "input")),
            format,
            out: flags
                .out
                .clone()
                .or_else(|| path(file, "out"))
                .unwrap_or_else(|| PathBuf::from("out")),
            stopwords_en: flags
                .stopwords_en
                .clone()
                .or_else(|| path(file, "stopwords-en")),
            stopwords_zh: flags
                .stopwords_zh
                .clone()
                .or_else(|| path(file, "stopwords-zh")),
            lexicon: flags.lexicon.clone().or_else(|| path(file, "lexicon")),
            min_df: flags
                .min_df
                .or(numeric(file, "min-df", "a positive integer")?)
                .unwrap_or(1),
            max_df_ratio: flags
                .max_df_ratio
                .or(numeric(file, "max-df-ratio", "a fraction")?)
                .unwrap_or(1.0),
            min_token_len_en: flags
                .min_token_len_en
                .or(numeric(file, "min-token-len-en", "a length")?)
                .unwrap_or(2),
            min_token_len_zh: flags
                .min_token_len_zh
                .or(numeric(file, "min-token-len-zh", "a length")?)
                .unwrap_or(1),
            include_title: flags.include_title || boolean(file, "include-title")?.unwrap_or(false),
            keep_numeric: flags.keep_numeric || boolean(file, "keep-numeric")?.unwrap_or(false),
            bundle: flags.bundle.clone().or_else(|| path(file, "bundle")),
            model: flags.model.clone().or_else(|| path(file, "model")),
            num_topics: flags
                .num_topics
                .or(numeric(file, "num-topics", "a positive integer")?),
            alpha,
            beta: flags
                .beta
                .or(numeric(file, "beta", "a number")?)
                .unwrap_or(0.01),
            iterations: flags
                .iterations
                .or(numeric(file, "iterations", "a positive integer")?)
                .unwrap_or(1000),
            burn_in: flags
                .burn_in
                .or(numeric(file, "burn-in", "a non-negative integer")?)
                .unwrap_or(200),
            seed: flags
                .seed
                .or(numeric(file, "seed", "a non-negative integer")?)
                .unwrap_or(42),
            average: flags.average || boolean(file, "average")?.unwrap_or(false),
            k_min: flags
                .k_min
                .or(numeric(file, "k-min", "a positive integer")?)
                .unwrap_or(2),
            k_max: flags
                .k_max
                .or(numeric(file, "k-max", "a positive integer")?)
                .unwrap_or(10),
            seeds_per_k: flags
                .seeds_per_k
                .or(numeric(file, "seeds-per-k", "a positive integer")?)
                .unwrap_or(3),
            measure,
            top_n: flags
                .top_n
                .or(numeric(file, "top-n", "a positive integer")?)
                .unwrap_or(10),
            window: flags
                .window
                .or(numeric(file, "window", "a positive integer")?)
                .unwrap_or(110),
            threshold: flags
                .threshold
                .or(numeric(file, "threshold", "a fraction")?)
                .unwrap_or(0.10),
            attribution,
        };

        if !(config.max_df_ratio > 0.0 && config.max_df_ratio <= 1.0) {
            return Err(Error::Validation(format!(
                "max-df-ratio must lie in (0, 1], got {}",
                config.max_df_ratio
            )));
        }
        if !(config.threshold > 0.0 && config.threshold < 1.0) {
            return Err(Error::Validation(format!(
                "threshold must lie strictly between 0 and 1, got {}",
                config.threshold
            )));
        }
        Ok(config)
    }
}
