//! Graph serialization: JSON, Graphviz DOT and GraphML.

use std::collections::BTreeSet;
use std::fmt::Write;
use std::path::Path;

use gmapper::mapper::{MapperGraph, MapperNode};

use crate::config::Format;
use crate::error::CliError;

pub fn render(graph: &MapperGraph, format: Format) -> String {
    match format {
        Format::Json => to_json(graph),
        Format::Dot => to_dot(graph),
        Format::Graphml => to_graphml(graph),
    }
}

pub fn to_json(graph: &MapperGraph) -> String {
    let mut s = serde_json::to_string_pretty(graph).expect("graph serializes");
    s.push('\n');
    s
}

pub fn parse_json(text: &str, path: &Path) -> Result<MapperGraph, CliError> {
    serde_json::from_str(text).map_err(|e| CliError::GraphParse {
        path: path.to_path_buf(),
        offset: byte_offset(text, e.line(), e.column()),
        message: e.to_string(),
    })
}

/// Converts serde_json's 1-based line and column into a byte offset.
fn byte_offset(text: &str, line: usize, column: usize) -> usize {
    if line == 0 {
        return 0;
    }
    let start: usize = text.split_inclusive('\n').take(line - 1).map(str::len).sum();
    (start + column.saturating_sub(1)).min(text.len())
}

/// Colour on a blue-to-red rainbow for `t` in [0, 1].
fn rainbow(t: f64) -> String {
    let hue = 0.7 * (1.0 - t.clamp(0.0, 1.0));
    format!("{hue:.3} 0.850 0.950")
}

/// A fixed palette keyed by the sorted set of labels in the graph.
fn palette(graph: &MapperGraph) -> Vec<String> {
    let labels: BTreeSet<&String> = graph.nodes.iter().flat_map(|n| n.label_histogram.keys()).collect();
    labels.into_iter().cloned().collect()
}

fn label_colour(index: usize, count: usize) -> String {
    rainbow(if count > 1 { index as f64 / (count - 1) as f64 } else { 0.5 })
}

fn lens_span(graph: &MapperGraph) -> (f64, f64) {
    graph
        .nodes
        .iter()
        .fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), n| (lo.min(n.mean_lens), hi.max(n.mean_lens)))
}

fn node_colour(node: &MapperNode, (lo, hi): (f64, f64)) -> String {
    rainbow(if hi > lo { (node.mean_lens - lo) / (hi - lo) } else { 0.5 })
}

fn pie(node: &MapperNode) -> String {
    node.label_histogram
        .iter()
        .map(|(label, count)| format!("{label}:{count}"))
        .collect::<Vec<_>>()
        .join(";")
}

fn dot_escape(s: &str) -> String {
    s.replace('\\', "\\\\").replace('"', "\\\"")
}

/// Undirected DOT graph. Nodes are labelled with their mean lens value;
/// labelled data is drawn as pie charts (`style=wedged`), otherwise nodes
/// are filled on a rainbow scale of the mean lens value.
pub fn to_dot(graph: &MapperGraph) -> String {
    let labels = palette(graph);
    let span = lens_span(graph);
    let mut out = String::from("graph mapper {\n  node [shape=circle];\n");
    for node in &graph.nodes {
        let total = node.size.max(1) as f64;
        let (style, fill) = if node.label_histogram.is_empty() {
            ("filled".to_string(), node_colour(node, span))
        } else {
            let wedges: Vec<String> = node
                .label_histogram
                .iter()
                .map(|(label, count)| {
                    let k = labels.iter().position(|l| l == label).unwrap_or(0);
                    format!("{};{:.4}", label_colour(k, labels.len()), *count as f64 / total)
                })
                .collect();
            ("wedged".to_string(), wedges.join(":"))
        };
        let _ = writeln!(
            out,
            "  {} [label=\"{:.3}\", style={style}, fillcolor=\"{}\", interval={}, size={}, pie=\"{}\"];",
            node.id,
            node.mean_lens,
            fill,
            node.interval_index,
            node.size,
            dot_escape(&pie(node))
        );
    }
    for e in &graph.edges {
        let _ = writeln!(out, "  {} -- {} [weight={}, shared={}];", e.a, e.b, e.shared, e.shared);
    }
    out.push_str("}\n");
    out
}

fn xml_escape(s: &str) -> String {
    let mut out = String::with_capacity(s.len());
    for c in s.chars() {
        match c {
            '&' => out.push_str("&amp;"),
            '<' => out.push_str("&lt;"),
            '>' => out.push_str("&gt;"),
            '"' => out.push_str("&quot;"),
            '\'' => out.push_str("&apos;"),
            c => out.push(c),
        }
    }
    out
}

pub fn to_graphml(graph: &MapperGraph) -> String {
    let span = lens_span(graph);
    let mut out = String::from(concat!(
        "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n",
        "<graphml xmlns=\"http://graphml.graphdrawing.org/xmlns\">\n",
        "  <key id=\"interval\" for=\"node\" attr.name=\"interval\" attr.type=\"int\"/>\n",
        "  <key id=\"size\" for=\"node\" attr.name=\"size\" attr.type=\"int\"/>\n",
        "  <key id=\"mean_lens\" for=\"node\" attr.name=\"mean_lens\" attr.type=\"double\"/>\n",
        "  <key id=\"label\" for=\"node\" attr.name=\"label\" attr.type=\"string\"/>\n",
        "  <key id=\"color\" for=\"node\" attr.name=\"color\" attr.type=\"string\"/>\n",
        "  <key id=\"pie\" for=\"node\" attr.name=\"pie\" attr.type=\"string\"/>\n",
        "  <key id=\"shared\" for=\"edge\" attr.name=\"shared\" attr.type=\"int\"/>\n",
        "  <graph id=\"mapper\" edgedefault=\"undirected\">\n",
    ));
    for node in &graph.nodes {
        let _ = writeln!(out, "    <node id=\"n{}\">", node.id);
        let _ = writeln!(out, "      <data key=\"interval\">{}</data>", node.interval_index);
        let _ = writeln!(out, "      <data key=\"size\">{}</data>", node.size);
        let _ = writeln!(out, "      <data key=\"mean_lens\">{}</data>", node.mean_lens);
        let _ = writeln!(out, "      <data key=\"label\">{:.3}</data>", node.mean_lens);
        let _ = writeln!(out, "      <data key=\"color\">{}</data>", node_colour(node, span));
        let _ = writeln!(out, "      <data key=\"pie\">{}</data>", xml_escape(&pie(node)));
        out.push_str("    </node>\n");
    }
    for (k, e) in graph.edges.iter().enumerate() {
        let _ = writeln!(
            out,
            "    <edge id=\"e{k}\" source=\"n{}\" target=\"n{}\"><data key=\"shared\">{}</data></edge>",
            e.a, e.b, e.shared
        );
    }
    out.push_str("  </graph>\n</graphml>\n");
    out
}
