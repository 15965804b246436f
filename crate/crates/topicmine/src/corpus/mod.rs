//! Corpus ingestion and preprocessing.
//!
//! This module turns raw records (id, year, language, title, abstract) into a
//! bag-of-words corpus:
//!
//! 1. [`load_records`] reads JSONL or CSV input and validates every row.
//! 2. [`preprocess`] tokenizes each abstract (per-record language rules),
//!    removes stopwords and short tokens, and drops documents that end up
//!    empty.
//! 3. [`build_vocabulary`] assigns indices to the terms that survive
//!    document-frequency filtering, in lexicographic term order.
//! 4. [`to_bow`] maps token lists to sparse per-document term counts.
//!
//! The resulting [`BowCorpus`] serializes to a documented JSON bundle so the
//! downstream modeling steps never need to re-run tokenization.

mod bow;
mod records;
mod tokenize;

pub use bow::{build_vocabulary, to_bow, BowCorpus, BowDocument, BowOutcome, Vocabulary};
pub use records::{load_records, Language, RawRecord, RecordFormat};
pub use tokenize::{tokenize, tokenize_with, Lexicon, StopwordList, TokenizeOptions};

use serde::{Deserialize, Serialize};

/// A preprocessed document: the token list that survived filtering.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Document {
    pub id: String,
    pub year: i32,
    pub tokens: Vec<String>,
}

/// Everything [`preprocess`] needs beyond the records themselves.
///
/// Stopword sets and minimum token lengths are per-language because the two
/// tokenizers produce very different tokens: Chinese segmentation yields
/// single characters when the lexicon has no longer match, so its default
/// minimum length is 1, while English defaults to 2 to shed stray letters.
#[derive(Debug, Clone)]
pub struct PreprocessOptions {
    pub stopwords_en: StopwordList,
    pub stopwords_zh: StopwordList,
    pub min_token_len_en: usize,
    pub min_token_len_zh: usize,
    /// Segmentation lexicon for Chinese records; without one, forward
    /// maximum matching degrades to per-character segmentation.
    pub lexicon: Option<Lexicon>,
    /// Prepend the title to the abstract before tokenizing (off by default).
    pub include_title: bool,
    /// Keep purely numeric tokens (dropped by default).
    pub keep_numeric: bool,
}

impl Default for PreprocessOptions {
    fn default() -> Self {
        PreprocessOptions {
            stopwords_en: StopwordList::default(),
            stopwords_zh: StopwordList::default(),
            min_token_len_en: 2,
            min_token_len_zh: 1,
            lexicon: None,
            include_title: false,
            keep_numeric: false,
        }
    }
}

/// Result of [`preprocess`]: the surviving documents plus the ids of records
/// whose token list came out empty.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PreprocessOutcome {
    pub documents: Vec<Document>,
    pub dropped_ids: Vec<String>,
}

/// Tokenize and filter every record, preserving input order.
///
/// Records whose language is neither `zh` nor `en` are treated with the
/// English rules (alphanumeric-run tokenization, English stopword set).
pub fn preprocess(records: &[RawRecord], options: &PreprocessOptions) -> PreprocessOutcome {
    let tokenize_options = TokenizeOptions {
        keep_numeric: options.keep_numeric,
    };
    let mut documents = Vec::new();
    let mut dropped_ids = Vec::new();

    for record in records {
        let text = if options.include_title {
            format!("{} {}", record.title, record.abstract_text)
        } else {
            record.abstract_text.clone()
        };
        let raw_tokens = tokenize_with(
            &text,
            record.language,
            options.lexicon.as_ref(),
            tokenize_options,
        );
        let (stopwords, min_len) = match record.language {
            Language::Zh => (&options.stopwords_zh, options.min_token_len_zh),
            Language::En | Language::Other => (&options.stopwords_en, options.min_token_len_en),
        };
        let tokens: Vec<String> = raw_tokens
            .into_iter()
            .filter(|t| t.chars().count() >= min_len && !stopwords.contains(t))
            .collect();
        if tokens.is_empty() {
            dropped_ids.push(record.id.clone());
        } else {
            documents.push(Document {
                id: record.id.clone(),
                year: record.year,
                tokens,
            });
        }
    }

    PreprocessOutcome {
        documents,
        dropped_ids,
    }
}
