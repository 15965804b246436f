//! Annual publication trends: corpus-wide counts per year and per-topic
//! counts per year, with CSV and SVG bar-chart output.
//!
//! Year rows are always contiguous — gaps inside the observed range are
//! zero-filled — so downstream plots never silently skip a year.

use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::cooccur::main_topics;
use crate::corpus::{BowCorpus, Document};
use crate::lda::LdaModel;
use crate::{Error, Result};

/// Counts laid out as years x columns. `cells[r][c]` is the count for
/// `years[r]` under `columns[c]`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TrendTable {
    /// Contiguous ascending years; empty for an empty corpus.
    pub years: Vec<i32>,
    /// Column labels: `all` for corpus-wide counts, topic labels otherwise.
    pub columns: Vec<String>,
    pub cells: Vec<Vec<u64>>,
}

impl TrendTable {
    /// CSV with a `year,<label>,...` header and one row per year.
    pub fn to_csv_string(&self) -> String {
        let mut out = String::from("year");
        for label in &self.columns {
            let _ = write!(out, ",{label}");
        }
        out.push('\n');
        for (row, &year) in self.years.iter().enumerate() {
            let _ = write!(out, "{year}");
            for cell in &self.cells[row] {
                let _ = write!(out, ",{cell}");
            }
            out.push('\n');
        }
        out
    }

    pub fn save_csv(&self, path: &Path) -> Result<()> {
        fs::write(path, self.to_csv_string()).map_err(|e| Error::io(path, e))
    }

    /// Grouped-bar SVG chart, one group per year and one bar per column.
    /// Output bytes are a pure function of the table.
    pub fn to_svg_string(&self) -> String {
        render_svg(self)
    }

    pub fn save_svg(&self, path: &Path) -> Result<()> {
        fs::write(path, self.to_svg_string()).map_err(|e| Error::io(path, e))
    }
}

/// Zero-filled `[min_year, max_year]` scaffolding plus a year → row lookup.
fn year_rows(years: impl Iterator<Item = i32>) -> Vec<i32> {
    let (mut min_year, mut max_year) = (i32::MAX, i32::MIN);
    let mut any = false;
    for year in years {
        any = true;
        min_year = min_year.min(year);
        max_year = max_year.max(year);
    }
    if !any {
        return Vec::new();
    }
    (min_year..=max_year).collect()
}

/// Publication counts per calendar year over the whole corpus (a single
/// `all` column). An empty corpus yields a table with no year rows.
pub fn annual_counts(docs: &[Document]) -> TrendTable {
    annual_counts_from_years(docs.iter().map(|d| d.year))
}

/// [`annual_counts`] over bare years, for callers that only kept per-document
/// metadata (for example a bag-of-words corpus).
pub fn annual_counts_from_years(doc_years: impl IntoIterator<Item = i32> + Clone) -> TrendTable {
    let years = year_rows(doc_years.clone().into_iter());
    let mut cells = vec![vec![0u64]; years.len()];
    if let Some(&first) = years.first() {
        for year in doc_years {
            cells[(year - first) as usize][0] += 1;
        }
    }
    TrendTable {
        years,
        columns: vec!["all".to_string()],
        cells,
    }
}

/// How a document is attributed to topic columns.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", tag = "rule")]
pub enum AttributionRule {
    /// Each document counts once, under its highest-probability topic
    /// (ties go to the lowest index). Column sums partition the corpus.
    Dominant,
    /// Each document counts once per main topic (share strictly above the
    /// threshold), so column sums may exceed the document count.
    MainTopics { threshold: f64 },
}

/// Per-topic publication counts per year. Column `c` holds topic `c`'s
/// counts, labeled from `labels` when given (length K) or `topic_k`.
pub fn topic_annual_counts(
    model: &LdaModel,
    corpus: &BowCorpus,
    rule: AttributionRule,
    labels: Option<&[String]>,
) -> Result<TrendTable> {
    if corpus.docs.len() != model.num_docs() {
        return Err(Error::validation(format!(
            "model covers {} documents but the corpus has {}",
            model.num_docs(),
            corpus.docs.len()
        )));
    }
    let k = model.num_topics();
    if let Some(labels) = labels {
        if labels.len() != k {
            return Err(Error::validation(format!(
                "{} labels supplied for {k} topics",
                labels.len()
            )));
        }
    }
    if let AttributionRule::MainTopics { threshold } = rule {
        if !(threshold > 0.0 && threshold < 1.0) {
            return Err(Error::validation(format!(
                "main-topic threshold must lie strictly between 0 and 1, got {threshold}"
            )));
        }
    }

    let years = year_rows(corpus.docs.iter().map(|d| d.year));
    let mut cells = vec![vec![0u64; k]; years.len()];
    if let Some(&first) = years.first() {
        for (doc, theta_row) in corpus.docs.iter().zip(&model.theta) {
            let row = (doc.year - first) as usize;
            match rule {
                AttributionRule::Dominant => {
                    let dominant = theta_row
                        .iter()
                        .enumerate()
                        .max_by(|a, b| a.1.total_cmp(b.1).then(b.0.cmp(&a.0)))
                        .map(|(topic, _)| topic)
                        .expect("models have at least one topic");
                    cells[row][dominant] += 1;
                }
                AttributionRule::MainTopics { threshold } => {
                    for topic in main_topics(theta_row, threshold) {
                        cells[row][topic] += 1;
                    }
                }
            }
        }
    }

    let columns = match labels {
        Some(labels) => labels.to_vec(),
        None => (0..k).map(|topic| format!("topic_{topic}")).collect(),
    };
    Ok(TrendTable {
        years,
        columns,
        cells,
    })
}

/// Write `<prefix>.csv` and `<prefix>.svg`; returns the two paths.
pub fn emit_trend_outputs(table: &TrendTable, path_prefix: &Path) -> Result<(PathBuf, PathBuf)> {
    let csv_path = path_prefix.with_extension("csv");
    let svg_path = path_prefix.with_extension("svg");
    table.save_csv(&csv_path)?;
    table.save_svg(&svg_path)?;
    Ok((csv_path, svg_path))
}

const PALETTE: [&str; 10] = [
    "#4e79a7", "#f28e2b", "#e15759", "#76b7b2", "#59a14f", "#edc948", "#b07aa1", "#ff9da7",
    "#9c755f", "#bab0ac",
];

const CHART_HEIGHT: f64 = 320.0;
const MARGIN_LEFT: f64 = 56.0;
const MARGIN_RIGHT: f64 = 16.0;
const MARGIN_TOP: f64 = 48.0;
const MARGIN_BOTTOM: f64 = 36.0;
const BAR_WIDTH: f64 = 16.0;
const GROUP_GAP: f64 = 18.0;

fn render_svg(table: &TrendTable) -> String {
    if table.years.is_empty() {
        return concat!(
            "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"320\" height=\"120\" ",
            "viewBox=\"0 0 320 120\">\n",
            "  <rect width=\"320\" height=\"120\" fill=\"white\"/>\n",
            "  <text x=\"160\" y=\"64\" text-anchor=\"middle\" font-family=\"sans-serif\" ",
            "font-size=\"14\" fill=\"#666666\">no data</text>\n",
            "</svg>\n"
        )
        .to_string();
    }

    let group_width = table.columns.len() as f64 * BAR_WIDTH;
    let width = MARGIN_LEFT
        + table.years.len() as f64 * (group_width + GROUP_GAP)
        + MARGIN_RIGHT;
    let plot_height = CHART_HEIGHT - MARGIN_TOP - MARGIN_BOTTOM;
    let max_count = table
        .cells
        .iter()
        .flatten()
        .copied()
        .max()
        .unwrap_or(0)
        .max(1);
    // Round the axis ceiling up to a whole number of 4 tick steps.
    let tick_step = max_count.div_ceil(4);
    let axis_top = tick_step * 4;

    let mut svg = String::new();
    let _ = writeln!(
        svg,
        "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{width:.2}\" height=\"{CHART_HEIGHT:.2}\" viewBox=\"0 0 {width:.2} {CHART_HEIGHT:.2}\">"
    );
    let _ = writeln!(
        svg,
        "  <rect width=\"{width:.2}\" height=\"{CHART_HEIGHT:.2}\" fill=\"white\"/>"
    );

    // Horizontal gridlines and y-axis tick labels.
    for tick in 0..=4u64 {
        let value = tick * tick_step;
        let y = MARGIN_TOP + plot_height - (value as f64 / axis_top as f64) * plot_height;
        let _ = writeln!(
            svg,
            "  <line x1=\"{MARGIN_LEFT:.2}\" y1=\"{y:.2}\" x2=\"{:.2}\" y2=\"{y:.2}\" stroke=\"#dddddd\" stroke-width=\"1\"/>",
            width - MARGIN_RIGHT
        );
        let _ = writeln!(
            svg,
            "  <text x=\"{:.2}\" y=\"{:.2}\" text-anchor=\"end\" font-family=\"sans-serif\" font-size=\"11\" fill=\"#333333\">{value}</text>",
            MARGIN_LEFT - 6.0,
            y + 4.0
        );
    }

    // Legend: one swatch per column along the top.
    let mut legend_x = MARGIN_LEFT;
    for (c, label) in table.columns.iter().enumerate() {
        let color = PALETTE[c % PALETTE.len()];
        let _ = writeln!(
            svg,
            "  <rect x=\"{legend_x:.2}\" y=\"14.00\" width=\"10.00\" height=\"10.00\" fill=\"{color}\"/>"
        );
        let _ = writeln!(
            svg,
            "  <text x=\"{:.2}\" y=\"23.00\" font-family=\"sans-serif\" font-size=\"11\" fill=\"#333333\">{}</text>",
            legend_x + 14.0,
            escape_text(label)
        );
        legend_x += 14.0 + 7.0 * label.chars().count() as f64 + 12.0;
    }

    // Bars, grouped by year.
    for (r, &year) in table.years.iter().enumerate() {
        let group_x = MARGIN_LEFT + r as f64 * (group_width + GROUP_GAP) + GROUP_GAP / 2.0;
        for (c, &count) in table.cells[r].iter().enumerate() {
            let color = PALETTE[c % PALETTE.len()];
            let bar_height = (count as f64 / axis_top as f64) * plot_height;
            let x = group_x + c as f64 * BAR_WIDTH;
            let y = MARGIN_TOP + plot_height - bar_height;
            let _ = writeln!(
                svg,
                "  <rect x=\"{x:.2}\" y=\"{y:.2}\" width=\"{BAR_WIDTH:.2}\" height=\"{bar_height:.2}\" fill=\"{color}\"/>"
            );
        }
        let _ = writeln!(
            svg,
            "  <text x=\"{:.2}\" y=\"{:.2}\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"11\" fill=\"#333333\">{year}</text>",
            group_x + group_width / 2.0,
            MARGIN_TOP + plot_height + 16.0
        );
    }

    // Baseline.
    let _ = writeln!(
        svg,
        "  <line x1=\"{MARGIN_LEFT:.2}\" y1=\"{:.2}\" x2=\"{:.2}\" y2=\"{:.2}\" stroke=\"#333333\" stroke-width=\"1\"/>",
        MARGIN_TOP + plot_height,
        width - MARGIN_RIGHT,
        MARGIN_TOP + plot_height
    );
    svg.push_str("</svg>\n");
    svg
}

fn escape_text(s: &str) -> String {
    s.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corpus::{BowDocument, Vocabulary};
    use crate::lda::LdaConfig;

    fn doc(id: &str, year: i32) -> Document {
        Document {
            id: id.to_string(),
            year,
            tokens: vec!["word".to_string()],
        }
    }

    /// A corpus + model pair where only theta and the years matter.
    fn model_with_theta(theta: Vec<Vec<f64>>, years: &[i32]) -> (LdaModel, BowCorpus) {
        assert_eq!(theta.len(), years.len());
        let k = theta[0].len();
        let vocabulary =
            Vocabulary::from_parts(vec!["word".to_string()], vec![1], vec![1]).unwrap();
        let docs = years
            .iter()
            .enumerate()
            .map(|(i, &year)| BowDocument {
                id: format!("d{i}"),
                year,
                counts: vec![(0, 1)],
            })
            .collect();
        let model = LdaModel {
            config: LdaConfig::new(k),
            vocab_size: 1,
            doc_topic_counts: vec![vec![0; k]; theta.len()],
            topic_word_counts: vec![vec![0; 1]; k],
            topic_totals: vec![0; k],
            doc_lengths: vec![1; theta.len()],
            theta,
            phi: vec![vec![1.0]; k],
        };
        (model, BowCorpus { vocabulary, docs })
    }

    #[test]
    fn annual_counts_zero_fill_interior_years() {
        let docs = vec![doc("a", 2011), doc("b", 2011), doc("c", 2013)];
        let table = annual_counts(&docs);
        assert_eq!(table.years, vec![2011, 2012, 2013]);
        assert_eq!(table.columns, vec!["all"]);
        assert_eq!(table.cells, vec![vec![2], vec![0], vec![1]]);
    }

    #[test]
    fn empty_corpus_gives_an_empty_table() {
        let table = annual_counts(&[]);
        assert!(table.years.is_empty());
        assert_eq!(table.to_csv_string(), "year,all\n");
        assert!(table.to_svg_string().contains("no data"));
    }

    #[test]
    fn dominant_rule_counts_each_document_once() {
        let theta = vec![
            vec![0.7, 0.2, 0.1],
            vec![0.1, 0.8, 0.1],
            vec![0.6, 0.3, 0.1],
            vec![0.2, 0.3, 0.5],
        ];
        let (model, corpus) = model_with_theta(theta, &[2020, 2020, 2021, 2021]);
        let table =
            topic_annual_counts(&model, &corpus, AttributionRule::Dominant, None).unwrap();
        assert_eq!(table.years, vec![2020, 2021]);
        assert_eq!(table.cells, vec![vec![1, 1, 0], vec![1, 0, 1]]);
        // Partition property: cells sum to the document count.
        let total: u64 = table.cells.iter().flatten().sum();
        assert_eq!(total, 4);
    }

    #[test]
    fn dominant_ties_go_to_the_lowest_index() {
        let (model, corpus) = model_with_theta(vec![vec![0.5, 0.5]], &[2019]);
        let table =
            topic_annual_counts(&model, &corpus, AttributionRule::Dominant, None).unwrap();
        assert_eq!(table.cells, vec![vec![1, 0]]);
    }

    #[test]
    fn main_topics_rule_counts_each_membership() {
        // Main-topic sets {1,2}, {1,2}, {2,3}: six memberships in total.
        let theta = vec![
            vec![0.05, 0.45, 0.45, 0.05],
            vec![0.02, 0.50, 0.40, 0.08],
            vec![0.05, 0.05, 0.45, 0.45],
        ];
        let (model, corpus) = model_with_theta(theta, &[2020, 2020, 2021]);
        let table = topic_annual_counts(
            &model,
            &corpus,
            AttributionRule::MainTopics { threshold: 0.10 },
            None,
        )
        .unwrap();
        let total: u64 = table.cells.iter().flatten().sum();
        assert_eq!(total, 6);
        assert_eq!(table.cells, vec![vec![0, 2, 2, 0], vec![0, 0, 1, 1]]);
    }

    #[test]
    fn custom_labels_take_the_column_positions() {
        let (model, corpus) = model_with_theta(vec![vec![0.9, 0.1]], &[2018]);
        let labels = vec!["geometry".to_string(), "compliance".to_string()];
        let table =
            topic_annual_counts(&model, &corpus, AttributionRule::Dominant, Some(&labels))
                .unwrap();
        assert_eq!(table.columns, labels);

        let wrong = vec!["only-one".to_string()];
        assert!(topic_annual_counts(
            &model,
            &corpus,
            AttributionRule::Dominant,
            Some(&wrong)
        )
        .is_err());
    }

    #[test]
    fn document_count_mismatch_is_rejected() {
        let (model, mut corpus) = model_with_theta(vec![vec![1.0]], &[2018]);
        corpus.docs.push(BowDocument {
            id: "extra".to_string(),
            year: 2018,
            counts: vec![(0, 1)],
        });
        assert!(
            topic_annual_counts(&model, &corpus, AttributionRule::Dominant, None).is_err()
        );
    }

    #[test]
    fn csv_layout_matches_the_header_contract() {
        let table = TrendTable {
            years: vec![2020],
            columns: vec!["t0".to_string(), "t1".to_string()],
            cells: vec![vec![2, 0]],
        };
        assert_eq!(table.to_csv_string(), "year,t0,t1\n2020,2,0\n");
    }

    #[test]
    fn svg_draws_one_bar_per_cell_plus_legend_swatches() {
        let table = TrendTable {
            years: vec![2020, 2021],
            columns: vec!["t0".to_string(), "t1".to_string(), "t2".to_string()],
            cells: vec![vec![1, 2, 3], vec![0, 4, 1]],
        };
        let svg = table.to_svg_string();
        // Background + 6 bars + 3 legend swatches.
        assert_eq!(svg.matches("<rect ").count(), 1 + 6 + 3);
        assert!(svg.starts_with("<svg "));
        assert!(svg.ends_with("</svg>\n"));
    }

    #[test]
    fn emitted_files_are_deterministic() {
        let dir = tempfile::tempdir().unwrap();
        let table = annual_counts(&[doc("a", 2015), doc("b", 2017)]);

        let (csv_a, svg_a) = emit_trend_outputs(&table, &dir.path().join("first")).unwrap();
        let (csv_b, svg_b) = emit_trend_outputs(&table, &dir.path().join("second")).unwrap();
        assert_eq!(
            fs::read(&csv_a).unwrap(),
            fs::read(&csv_b).unwrap()
        );
        assert_eq!(
            fs::read(&svg_a).unwrap(),
            fs::read(&svg_b).unwrap()
        );
        assert!(csv_a.ends_with("first.csv") && svg_a.ends_with("first.svg"));
    }

    #[test]
    fn relabeling_topics_permutes_columns_without_changing_counts() {
        let theta = vec![vec![0.7, 0.2, 0.1], vec![0.1, 0.8, 0.1], vec![0.1, 0.2, 0.7]];
        let (model, corpus) = model_with_theta(theta, &[2020, 2020, 2021]);
        let table =
            topic_annual_counts(&model, &corpus, AttributionRule::Dominant, None).unwrap();

        let permuted = model.permute_topics(&[2, 0, 1]).unwrap();
        let permuted_table =
            topic_annual_counts(&permuted, &corpus, AttributionRule::Dominant, None).unwrap();

        // Same multiset of column totals, different positions.
        let mut totals: Vec<u64> = (0..3)
            .map(|c| table.cells.iter().map(|row| row[c]).sum())
            .collect();
        let mut permuted_totals: Vec<u64> = (0..3)
            .map(|c| permuted_table.cells.iter().map(|row| row[c]).sum())
            .collect();
        assert_ne!(table.cells, permuted_table.cells);
        totals.sort_unstable();
        permuted_totals.sort_unstable();
        assert_eq!(totals, permuted_totals);
    }
}
