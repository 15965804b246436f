use std::collections::HashSet;
use std::fs;
use std::path::Path;

use super::Language;
use crate::{Error, Result};

/// Segmentation lexicon for Chinese forward maximum matching: a set of
/// multi-character terms the tokenizer should keep whole.
#[derive(Debug, Clone, Default)]
pub struct Lexicon {
    terms: HashSet<String>,
    max_chars: usize,
}

impl Lexicon {
    pub fn from_terms<I, S>(terms: I) -> Lexicon
    where
        I: IntoIterator<Item = S>,
        S: Into<String>,
    {
        let mut lexicon = Lexicon::default();
        for term in terms {
            let term = term.into();
            let term = term.trim();
            if term.is_empty() {
                continue;
            }
            lexicon.max_chars = lexicon.max_chars.max(term.chars().count());
            lexicon.terms.insert(term.to_string());
        }
        lexicon
    }

    /// Load a lexicon from a plain text file, one term per line. Blank lines
    /// are skipped; surrounding whitespace is trimmed.
    pub fn load(path: &Path) -> Result<Lexicon> {
        let contents = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        Ok(Lexicon::from_terms(contents.lines()))
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn contains(&self, term: &str) -> bool {
        self.terms.contains(term)
    }

    /// Length in chars of the longest lexicon entry starting at
    /// `chars[start]`, if any.
    fn longest_match_at(&self, chars: &[char], start: usize) -> Option<usize> {
        let available = chars.len() - start;
        let upper = self.max_chars.min(available);
        let mut candidate = String::new();
        for len in (1..=upper).rev() {
            candidate.clear();
            candidate.extend(&chars[start..start + len]);
            if self.terms.contains(&candidate) {
                return Some(len);
            }
        }
        None
    }
}

/// Stopword set; terms are matched exactly against lowercased tokens.
#[derive(Debug, Clone, Default)]
pub struct StopwordList(HashSet<String>);

impl StopwordList {
    pub fn from_terms<I, S>(terms: I) -> StopwordList
    where
        I: IntoIterator<Item = S>,
        S: Into<String>,
    {
        StopwordList(
            terms
                .into_iter()
                .map(|t| t.into().trim().to_string())
                .filter(|t| !t.is_empty())
                .collect(),
        )
    }

    /// Load a stopword list from a plain text file, one term per line.
    pub fn load(path: &Path) -> Result<StopwordList> {
        let contents = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        Ok(StopwordList::from_terms(contents.lines()))
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn contains(&self, term: &str) -> bool {
        self.0.contains(term)
    }
}

/// Knobs for [`tokenize_with`].
#[derive(Debug, Clone, Copy, Default)]
pub struct TokenizeOptions {
    /// Keep tokens made up entirely of digits. Off by default: bare numbers
    /// (serial numbers, years, figure references) carry no topical signal.
    pub keep_numeric: bool,
}

/// Tokenize with default options (numeric tokens dropped).
pub fn tokenize(text: &str, language: Language, lexicon: Option<&Lexicon>) -> Vec<String> {
    tokenize_with(text, language, lexicon, TokenizeOptions::default())
}

/// Split `text` into lowercase tokens.
///
/// English (and `other`) rule: a token is a maximal run of alphanumeric
/// characters, so punctuation, special characters, and hyphens all act as
/// separators — `"Rule-Checking, BIM!"` becomes `["rule", "checking",
/// "bim"]`.
///
/// Chinese rule: forward maximum matching against `lexicon`. At each
/// position the longest matching lexicon entry is taken; when nothing
/// matches, a single character is emitted, so segmentation degrades to
/// per-character tokens without a lexicon. Embedded ASCII alphanumeric runs
/// are kept whole (a lexicon entry never matches across one).
///
/// Empty input yields an empty vector. Tokens that are entirely digits are
/// dropped unless [`TokenizeOptions::keep_numeric`] is set.
pub fn tokenize_with(
    text: &str,
    language: Language,
    lexicon: Option<&Lexicon>,
    options: TokenizeOptions,
) -> Vec<String> {
    let lowered = text.to_lowercase();
    let mut tokens = match language {
        Language::Zh => tokenize_zh(&lowered, lexicon),
        Language::En | Language::Other => tokenize_en(&lowered),
    };
    if !options.keep_numeric {
        tokens.retain(|t| !t.chars().all(|c| c.is_numeric()));
    }
    tokens
}

fn tokenize_en(text: &str) -> Vec<String> {
    text.split(|c: char| !c.is_alphanumeric())
        .filter(|s| !s.is_empty())
        .map(str::to_string)
        .collect()
}

fn tokenize_zh(text: &str, lexicon: Option<&Lexicon>) -> Vec<String> {
    let chars: Vec<char> = text.chars().collect();
    let mut tokens = Vec::new();
    let mut i = 0;
    while i < chars.len() {
        let c = chars[i];
        if c.is_ascii_alphanumeric() {
            let start = i;
            while i < chars.len() && chars[i].is_ascii_alphanumeric() {
                i += 1;
            }
            tokens.push(chars[start..i].iter().collect());
        } else if c.is_alphanumeric() {
            let matched = lexicon.and_then(|lex| lex.longest_match_at(&chars, i));
            match matched {
                Some(len) => {
                    tokens.push(chars[i..i + len].iter().collect());
                    i += len;
                }
                None => {
                    tokens.push(c.to_string());
                    i += 1;
                }
            }
        } else {
            i += 1;
        }
    }
    tokens
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn english_strips_punctuation_and_splits_hyphenated_compounds() {
        let tokens = tokenize("Rule-Checking, BIM!", Language::En, None);
        assert_eq!(tokens, vec!["rule", "checking", "bim"]);
    }

    #[test]
    fn english_strips_special_characters() {
        let tokens = tokenize("cost!% of$ the# design& project*?", Language::En, None);
        assert_eq!(tokens, vec!["cost", "of", "the", "design", "project"]);
    }

    #[test]
    fn empty_input_yields_no_tokens() {
        assert!(tokenize("", Language::En, None).is_empty());
        assert!(tokenize("", Language::Zh, None).is_empty());
        assert!(tokenize("  ,;! ", Language::En, None).is_empty());
    }

    #[test]
    fn forward_maximum_matching_prefers_the_longest_entry() {
        let lexicon = Lexicon::from_terms(["设计审查", "设计", "模块"]);
        let tokens = tokenize("设计审查模块", Language::Zh, Some(&lexicon));
        assert_eq!(tokens, vec!["设计审查", "模块"]);
    }

    #[test]
    fn chinese_without_lexicon_falls_back_to_single_characters() {
        let tokens = tokenize("设计审查", Language::Zh, None);
        assert_eq!(tokens, vec!["设", "计", "审", "查"]);
    }

    #[test]
    fn chinese_keeps_ascii_runs_whole_and_skips_punctuation() {
        let lexicon = Lexicon::from_terms(["模型"]);
        let tokens = tokenize("基于BIM的模型，审查。", Language::Zh, Some(&lexicon));
        assert_eq!(tokens, vec!["基", "于", "bim", "的", "模型", "审", "查"]);
    }

    #[test]
    fn numeric_tokens_are_dropped_by_default() {
        let tokens = tokenize("phase 2 covers 35 cases", Language::En, None);
        assert_eq!(tokens, vec!["phase", "covers", "cases"]);
    }

    #[test]
    fn keep_numeric_retains_digit_tokens() {
        let options = TokenizeOptions { keep_numeric: true };
        let tokens = tokenize_with("phase 2", Language::En, None, options);
        assert_eq!(tokens, vec!["phase", "2"]);
    }

    #[test]
    fn mixed_alphanumerics_are_not_numeric() {
        let tokens = tokenize("3d model iso19650", Language::En, None);
        assert_eq!(tokens, vec!["3d", "model", "iso19650"]);
    }

    #[test]
    fn other_language_uses_english_rules() {
        let tokens = tokenize("état de l'art", Language::Other, None);
        assert_eq!(tokens, vec!["état", "de", "l", "art"]);
    }

    #[test]
    fn lexicon_load_trims_and_skips_blank_lines() {
        let lexicon = Lexicon::from_terms(["  设计审查  ", "", "模块"]);
        assert_eq!(lexicon.len(), 2);
        assert!(lexicon.contains("设计审查"));
    }
}
