//! GEXF 1.2 export and import for [`TopicGraph`].
//!
//! The writer produces byte-stable output: nodes in ascending index order,
//! edges in ascending `(i, j)` order, fixed attribute order, no timestamps.
//! The parser accepts what the writer emits plus the obvious variations a
//! hand-edited or tool-produced undirected GEXF file may contain (either
//! endpoint order, missing labels, missing weights).

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::fs;
use std::path::Path;

use quick_xml::escape::escape;
use quick_xml::events::{BytesStart, Event};
use quick_xml::Reader;

use super::TopicGraph;
use crate::{Error, Result};

/// Render the graph as GEXF 1.2 XML. Output is deterministic for equal
/// graphs. Each node carries a `documents` attribute with its main-topic
/// document count.
pub fn to_gexf_string(graph: &TopicGraph) -> String {
    let mut out = String::new();
    out.push_str("<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n");
    out.push_str("<gexf xmlns=\"http://www.gexf.net/1.2draft\" version=\"1.2\">\n");
    out.push_str("  <meta>\n");
    out.push_str("    <creator>topicmine</creator>\n");
    out.push_str("    <description>topic co-occurrence network</description>\n");
    out.push_str("  </meta>\n");
    out.push_str("  <graph defaultedgetype=\"undirected\">\n");
    out.push_str("    <attributes class=\"node\">\n");
    out.push_str("      <attribute id=\"0\" title=\"documents\" type=\"long\"/>\n");
    out.push_str("    </attributes>\n");
    out.push_str("    <nodes>\n");
    for k in 0..graph.num_topics {
        let _ = writeln!(
            out,
            "      <node id=\"{k}\" label=\"{}\">",
            escape(graph.labels[k].as_str())
        );
        out.push_str("        <attvalues>\n");
        let _ = writeln!(
            out,
            "          <attvalue for=\"0\" value=\"{}\"/>",
            graph.node_doc_counts[k]
        );
        out.push_str("        </attvalues>\n");
        out.push_str("      </node>\n");
    }
    out.push_str("    </nodes>\n");
    out.push_str("    <edges>\n");
    for (edge_id, (&(i, j), &weight)) in graph.edges.iter().enumerate() {
        let _ = writeln!(
            out,
            "      <edge id=\"{edge_id}\" source=\"{i}\" target=\"{j}\" weight=\"{weight}\"/>"
        );
    }
    out.push_str("    </edges>\n");
    out.push_str("  </graph>\n");
    out.push_str("</gexf>\n");
    out
}

/// Validate and write the graph as GEXF.
pub fn export_gexf(graph: &TopicGraph, path: &Path) -> Result<()> {
    graph.validate()?;
    fs::write(path, to_gexf_string(graph)).map_err(|e| Error::io(path, e))
}

pub fn load_gexf(path: &Path) -> Result<TopicGraph> {
    let xml = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    parse_gexf(&xml)
}

fn attribute(element: &BytesStart<'_>, name: &str) -> Result<Option<String>> {
    match element.try_get_attribute(name) {
        Ok(Some(value)) => value
            .unescape_value()
            .map(|v| Some(v.into_owned()))
            .map_err(|e| Error::validation(format!("malformed GEXF attribute {name}: {e}"))),
        Ok(None) => Ok(None),
        Err(e) => Err(Error::validation(format!(
            "malformed GEXF attributes: {e}"
        ))),
    }
}

fn required(element: &BytesStart<'_>, name: &str, context: &str) -> Result<String> {
    attribute(element, name)?
        .ok_or_else(|| Error::validation(format!("GEXF {context} is missing attribute {name}")))
}

fn parse_index(value: &str, context: &str) -> Result<usize> {
    value
        .parse()
        .map_err(|_| Error::validation(format!("GEXF {context} {value:?} is not a topic index")))
}

/// Parse GEXF produced by [`to_gexf_string`] (or a compatible undirected
/// file) back into a [`TopicGraph`]. Node ids must form the contiguous
/// range `0..K`; self-loops, directed graphs, and duplicate edges are
/// rejected.
pub fn parse_gexf(xml: &str) -> Result<TopicGraph> {
    let mut reader = Reader::from_str(xml);

    let mut nodes: BTreeMap<usize, (String, u64)> = BTreeMap::new();
    let mut edges: BTreeMap<(usize, usize), u64> = BTreeMap::new();
    let mut saw_graph = false;
    // The id of the node attribute titled "documents", once declared.
    let mut docs_attr_id: Option<String> = None;
    let mut current_node: Option<usize> = None;

    loop {
        let event = reader
            .read_event()
            .map_err(|e| Error::validation(format!("malformed GEXF XML: {e}")))?;
        match event {
            Event::Start(e) | Event::Empty(e) => match e.local_name().as_ref() {
                b"graph" => {
                    saw_graph = true;
                    let kind = attribute(&e, "defaultedgetype")?;
                    if kind.as_deref() != Some("undirected") {
                        return Err(Error::validation(
                            "GEXF graph must declare defaultedgetype=\"undirected\"",
                        ));
                    }
                }
                b"attribute" => {
                    if attribute(&e, "title")?.as_deref() == Some("documents") {
                        docs_attr_id = attribute(&e, "id")?;
                    }
                }
                b"node" => {
                    let id = parse_index(&required(&e, "id", "node")?, "node id")?;
                    let label = attribute(&e, "label")?.unwrap_or_else(|| format!("topic_{id}"));
                    if nodes.insert(id, (label, 0)).is_some() {
                        return Err(Error::validation(format!("duplicate GEXF node id {id}")));
                    }
                    current_node = Some(id);
                }
                b"attvalue" => {
                    if let (Some(node), Some(docs_id)) = (current_node, docs_attr_id.as_deref()) {
                        if attribute(&e, "for")?.as_deref() == Some(docs_id) {
                            let raw = required(&e, "value", "attvalue")?;
                            let count = raw.parse().map_err(|_| {
                                Error::validation(format!(
                                    "GEXF document count {raw:?} is not a non-negative integer"
                                ))
                            })?;
                            nodes.get_mut(&node).expect("current node exists").1 = count;
                        }
                    }
                }
                b"edge" => {
                    let source = parse_index(&required(&e, "source", "edge")?, "edge source")?;
                    let target = parse_index(&required(&e, "target", "edge")?, "edge target")?;
                    if source == target {
                        return Err(Error::validation(format!(
                            "GEXF edge {source} -> {target} is a self-loop"
                        )));
                    }
                    let weight = match attribute(&e, "weight")? {
                        None => 1,
                        Some(raw) => {
                            let value: f64 = raw.parse().map_err(|_| {
                                Error::validation(format!("GEXF edge weight {raw:?} is not numeric"))
                            })?;
                            if value < 1.0 || value.fract() != 0.0 || value > u64::MAX as f64 {
                                return Err(Error::validation(format!(
                                    "GEXF edge weight {raw:?} is not a positive document count"
                                )));
                            }
                            value as u64
                        }
                    };
                    let pair = (source.min(target), source.max(target));
                    if edges.insert(pair, weight).is_some() {
                        return Err(Error::validation(format!(
                            "duplicate GEXF edge between {} and {}",
                            pair.0, pair.1
                        )));
                    }
                }
                _ => {}
            },
            Event::End(e) => {
                if e.local_name().as_ref() == b"node" {
                    current_node = None;
                }
            }
            Event::Eof => break,
            _ => {}
        }
    }

    if !saw_graph {
        return Err(Error::validation("GEXF file contains no graph element"));
    }
    let num_topics = nodes.len();
    for (expected, &actual) in nodes.keys().enumerate() {
        if actual != expected {
            return Err(Error::validation(format!(
                "GEXF node ids must form the range 0..{num_topics}, found {actual}"
            )));
        }
    }

    let mut graph = TopicGraph::new(num_topics);
    for (id, (label, docs)) in nodes {
        graph.labels[id] = label;
        graph.node_doc_counts[id] = docs;
    }
    graph.edges = edges;
    graph.validate()?;
    Ok(graph)
}
