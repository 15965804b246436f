//! Main-topic extraction and the topic co-occurrence network.
//!
//! A topic is one of a document's *main* topics when its share of the
//! document-topic distribution strictly exceeds a threshold (default 10%).
//! Documents with several main topics link those topics; the network's edge
//! weights count how many documents contain each pair. The graph exports to
//! GEXF 1.2 for network-visualization tools and to a plain edge-list CSV.

mod gexf;

pub use gexf::{export_gexf, load_gexf, parse_gexf, to_gexf_string};

use std::collections::BTreeMap;
use std::fs;
use std::path::Path;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::lda::LdaModel;
use crate::{Error, Result};

/// Default main-topic threshold: a topic must account for more than 10% of
/// a document to count as one of its main topics.
pub const MAIN_TOPIC_THRESHOLD: f64 = 0.10;

/// Indices of the topics whose share strictly exceeds `threshold`, in
/// ascending order. A share exactly at the threshold is excluded.
pub fn main_topics(theta_row: &[f64], threshold: f64) -> Vec<usize> {
    theta_row
        .iter()
        .enumerate()
        .filter(|&(_, &share)| share > threshold)
        .map(|(k, _)| k)
        .collect()
}

/// Undirected weighted topic co-occurrence network. Every topic is a node
/// even when isolated; edges are stored with `i < j` endpoints.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TopicGraph {
    pub num_topics: usize,
    /// Node labels, `topic_k` unless overwritten.
    pub labels: Vec<String>,
    /// Per-topic count of documents having it as a main topic (a node
    /// attribute in exports; no further interpretation is attached).
    pub node_doc_counts: Vec<u64>,
    /// Edge weights keyed by `(i, j)` with `i < j`: the number of documents
    /// whose main topics include both.
    pub edges: BTreeMap<(usize, usize), u64>,
}

impl TopicGraph {
    /// An edgeless graph over `num_topics` nodes with default labels.
    pub fn new(num_topics: usize) -> TopicGraph {
        TopicGraph {
            num_topics,
            labels: (0..num_topics).map(|k| format!("topic_{k}")).collect(),
            node_doc_counts: vec![0; num_topics],
            edges: BTreeMap::new(),
        }
    }

    pub fn num_edges(&self) -> usize {
        self.edges.len()
    }

    pub fn total_weight(&self) -> u64 {
        self.edges.values().sum()
    }

    /// Check structural invariants: label/count vectors sized to the node
    /// set, edge endpoints in range and normalized `i < j` (which rules out
    /// self-loops), and strictly positive weights.
    pub fn validate(&self) -> Result<()> {
        if self.labels.len() != self.num_topics || self.node_doc_counts.len() != self.num_topics {
            return Err(Error::validation(format!(
                "graph has {} topics but {} labels and {} document counts",
                self.num_topics,
                self.labels.len(),
                self.node_doc_counts.len()
            )));
        }
        for (&(i, j), &weight) in &self.edges {
            if i >= j {
                return Err(Error::validation(format!(
                    "edge ({i}, {j}) is not normalized to i < j"
                )));
            }
            if j >= self.num_topics {
                return Err(Error::validation(format!(
                    "edge ({i}, {j}) references a topic outside 0..{}",
                    self.num_topics
                )));
            }
            if weight == 0 {
                return Err(Error::validation(format!(
                    "edge ({i}, {j}) has zero weight"
                )));
            }
        }
        Ok(())
    }

    /// Edge list as CSV: `source,target,weight`, edges in ascending
    /// `(i, j)` order.
    pub fn edges_to_csv_string(&self) -> String {
        let mut out = String::from("source,target,weight\n");
        for (&(i, j), &weight) in &self.edges {
            out.push_str(&format!("{i},{j},{weight}\n"));
        }
        out
    }

    pub fn save_edges_csv(&self, path: &Path) -> Result<()> {
        fs::write(path, self.edges_to_csv_string()).map_err(|e| Error::io(path, e))
    }
}

/// Accumulator for one document's contribution: its main-topic pairs and
/// main-topic memberships.
#[derive(Default)]
struct GraphCounts {
    edges: BTreeMap<(usize, usize), u64>,
    node_docs: BTreeMap<usize, u64>,
}

impl GraphCounts {
    fn absorb(mut self, other: GraphCounts) -> GraphCounts {
        for (pair, weight) in other.edges {
            *self.edges.entry(pair).or_insert(0) += weight;
        }
        for (node, count) in other.node_docs {
            *self.node_docs.entry(node).or_insert(0) += count;
        }
        self
    }
}

/// Build the co-occurrence network from raw document-topic rows. Every row
/// must have `num_topics` entries. Each document contributes one count to
/// every unordered pair of its main topics.
pub fn build_graph_from_theta(
    theta: &[Vec<f64>],
    num_topics: usize,
    threshold: f64,
) -> Result<TopicGraph> {
    if !(threshold > 0.0 && threshold < 1.0) {
        return Err(Error::validation(format!(
            "main-topic threshold must lie strictly between 0 and 1, got {threshold}"
        )));
    }
    if let Some(row) = theta.iter().find(|row| row.len() != num_topics) {
        return Err(Error::validation(format!(
            "document-topic row has {} entries, expected {num_topics}",
            row.len()
        )));
    }

    // Per-document extraction is independent; the merge is an additive map
    // union, so the result does not depend on evaluation order.
    let counts = theta
        .par_iter()
        .map(|row| {
            let main = main_topics(row, threshold);
            let mut counts = GraphCounts::default();
            for &k in &main {
                *counts.node_docs.entry(k).or_insert(0) += 1;
            }
            for a in 0..main.len() {
                for b in (a + 1)..main.len() {
                    *counts.edges.entry((main[a], main[b])).or_insert(0) += 1;
                }
            }
            counts
        })
        .reduce(GraphCounts::default, GraphCounts::absorb);

    let mut graph = TopicGraph::new(num_topics);
    graph.edges = counts.edges;
    for (node, count) in counts.node_docs {
        graph.node_doc_counts[node] = count;
    }
    Ok(graph)
}

/// Build the co-occurrence network from a trained model's document-topic
/// estimates.
pub fn build_cooccurrence_graph(model: &LdaModel, threshold: f64) -> Result<TopicGraph> {
    build_graph_from_theta(&model.theta, model.num_topics(), threshold)
}

/// Degree, weighted degree, and density summary of a [`TopicGraph`].
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GraphMetrics {
    /// Incident edge count per node.
    pub degree: Vec<usize>,
    /// Sum of incident edge weights per node.
    pub weighted_degree: Vec<u64>,
    /// `2|E| / (K(K-1))`; 0 when undefined.
    pub density: f64,
    /// False for K < 2, where density has no meaning.
    pub density_defined: bool,
}

pub fn graph_metrics(graph: &TopicGraph) -> GraphMetrics {
    let k = graph.num_topics;
    let mut degree = vec![0usize; k];
    let mut weighted_degree = vec![0u64; k];
    for (&(i, j), &weight) in &graph.edges {
        degree[i] += 1;
        degree[j] += 1;
        weighted_degree[i] += weight;
        weighted_degree[j] += weight;
    }
    let density_defined = k >= 2;
    let density = if density_defined {
        2.0 * graph.num_edges() as f64 / (k as f64 * (k as f64 - 1.0))
    } else {
        0.0
    };
    GraphMetrics {
        degree,
        weighted_degree,
        density,
        density_defined,
    }
}
