use std::collections::HashSet;
use std::fmt;
use std::fs;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::{Error, Result};

/// Language tag carried by every record. It selects the tokenizer rules and
/// the stopword set; anything that is not Chinese or English is tokenized
/// with the English rules.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Language {
    Zh,
    En,
    Other,
}

impl Language {
    pub fn parse(value: &str) -> Option<Language> {
        match value {
            "zh" => Some(Language::Zh),
            "en" => Some(Language::En),
            "other" => Some(Language::Other),
            _ => None,
        }
    }

    pub fn as_str(&self) -> &'static str {
        match self {
            Language::Zh => "zh",
            Language::En => "en",
            Language::Other => "other",
        }
    }
}

impl fmt::Display for Language {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// One raw input document, prior to any preprocessing.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RawRecord {
    pub id: String,
    pub year: i32,
    pub language: Language,
    pub title: String,
    #[serde(rename = "abstract")]
    pub abstract_text: String,
}

/// Supported input file formats for [`load_records`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RecordFormat {
    /// One JSON object per line with keys `id`, `year`, `language`, `title`,
    /// `abstract`.
    Jsonl,
    /// A header row naming the same five fields, in any column order.
    Csv,
}

impl RecordFormat {
    pub fn parse(value: &str) -> Option<RecordFormat> {
        match value {
            "jsonl" => Some(RecordFormat::Jsonl),
            "csv" => Some(RecordFormat::Csv),
            _ => None,
        }
    }
}

const YEAR_MIN: i32 = 1900;
const YEAR_MAX: i32 = 2100;

/// Load and validate raw records from `path`.
///
/// Every row must carry a non-empty unique `id`, a `year` within
/// [1900, 2100], and a `language` of `zh`, `en`, or `other`. A malformed row
/// fails the whole load with an error naming the line and the offending
/// field. An empty input file yields an empty vector.
pub fn load_records(path: &Path, format: RecordFormat) -> Result<Vec<RawRecord>> {
    let records = match format {
        RecordFormat::Jsonl => load_jsonl(path)?,
        RecordFormat::Csv => load_csv(path)?,
    };

    let mut seen: HashSet<&str> = HashSet::with_capacity(records.len());
    for record in &records {
        if !seen.insert(record.id.as_str()) {
            return Err(Error::validation(format!(
                "duplicate record id `{}` in {}",
                record.id,
                path.display()
            )));
        }
    }
    Ok(records)
}

fn load_jsonl(path: &Path) -> Result<Vec<RawRecord>> {
    let contents = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    let mut records = Vec::new();
    for (index, line) in contents.lines().enumerate() {
        let line_no = index + 1;
        if line.trim().is_empty() {
            continue;
        }
        let value: serde_json::Value = serde_json::from_str(line)
            .map_err(|e| Error::parse(line_no, "record", e.to_string()))?;
        records.push(record_from_value(&value, line_no)?);
    }
    Ok(records)
}

fn record_from_value(value: &serde_json::Value, line: usize) -> Result<RawRecord> {
    let object = value
        .as_object()
        .ok_or_else(|| Error::parse(line, "record", "expected a JSON object"))?;

    let field_str = |field: &str| -> Result<&str> {
        object
            .get(field)
            .ok_or_else(|| Error::parse(line, field, "missing field"))?
            .as_str()
            .ok_or_else(|| Error::parse(line, field, "expected a string"))
    };

    let id = field_str("id")?;
    if id.is_empty() {
        return Err(Error::parse(line, "id", "id must be non-empty"));
    }
    let year = object
        .get("year")
        .ok_or_else(|| Error::parse(line, "year", "missing field"))?
        .as_i64()
        .ok_or_else(|| Error::parse(line, "year", "expected an integer"))?;
    let year = validate_year(year, line)?;
    let language = parse_language(field_str("language")?, line)?;
    let title = field_str("title")?;
    let abstract_text = field_str("abstract")?;

    Ok(RawRecord {
        id: id.to_string(),
        year,
        language,
        title: title.to_string(),
        abstract_text: abstract_text.to_string(),
    })
}

fn load_csv(path: &Path) -> Result<Vec<RawRecord>> {
    let file = fs::File::open(path).map_err(|e| Error::io(path, e))?;
    let mut reader = csv::Reader::from_reader(file);

    let headers = reader
        .headers()
        .map_err(|e| Error::parse(1, "header", e.to_string()))?
        .clone();
    let column = |name: &str| -> Result<usize> {
        headers
            .iter()
            .position(|h| h == name)
            .ok_or_else(|| Error::parse(1, name, "missing column in header"))
    };
    let id_col = column("id")?;
    let year_col = column("year")?;
    let language_col = column("language")?;
    let title_col = column("title")?;
    let abstract_col = column("abstract")?;

    let mut records = Vec::new();
    for row in reader.records() {
        let row = match &row {
            Ok(row) => row,
            Err(e) => {
                let line = e.position().map(|p| p.line() as usize).unwrap_or(0);
                return Err(Error::parse(line, "record", e.to_string()));
            }
        };
        let line = row.position().map(|p| p.line() as usize).unwrap_or(0);
        let get = |col: usize, field: &str| -> Result<&str> {
            row.get(col)
                .ok_or_else(|| Error::parse(line, field, "missing value"))
        };

        let id = get(id_col, "id")?;
        if id.is_empty() {
            return Err(Error::parse(line, "id", "id must be non-empty"));
        }
        let year: i64 = get(year_col, "year")?
            .trim()
            .parse()
            .map_err(|_| Error::parse(line, "year", "expected an integer"))?;
        let year = validate_year(year, line)?;
        let language = parse_language(get(language_col, "language")?, line)?;

        records.push(RawRecord {
            id: id.to_string(),
            year,
            language,
            title: get(title_col, "title")?.to_string(),
            abstract_text: get(abstract_col, "abstract")?.to_string(),
        });
    }
    Ok(records)
}

fn validate_year(year: i64, line: usize) -> Result<i32> {
    if !(YEAR_MIN as i64..=YEAR_MAX as i64).contains(&year) {
        return Err(Error::parse(
            line,
            "year",
            format!("year {year} outside [{YEAR_MIN}, {YEAR_MAX}]"),
        ));
    }
    Ok(year as i32)
}

fn parse_language(value: &str, line: usize) -> Result<Language> {
    Language::parse(value).ok_or_else(|| {
        Error::parse(
            line,
            "language",
            format!("unknown language `{value}` (expected zh, en, or other)"),
        )
    })
}
