//! DOT and JSON renderings of a graph. Both are deterministic: vertices in
//! first-occurrence order, arcs in construction order.

use std::fmt::Write;

use serde::Serialize;

use crate::analysis::{degrees, strongly_connected};
use crate::graph::DirectedGraph;
use crate::word::{Source, Word};

pub fn to_dot(g: &DirectedGraph) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "digraph \"{}\" {{", g.kind());
    let _ = writeln!(out, "  graph [k={}, ell={}];", g.k(), g.ell());
    for v in g.vertices() {
        let _ = writeln!(out, "  \"{v}\" [label=\"{v}\"];");
    }
    for a in g.arcs() {
        let _ = writeln!(
            out,
            "  \"{}\" -> \"{}\" [label=\"{}\"];",
            g.vertices()[a.from],
            g.vertices()[a.to],
            a.label
        );
    }
    out.push_str("}\n");
    out
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ArcRecord {
    pub from: usize,
    pub to: usize,
    pub label: Word,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct DegreeRow {
    pub vertex: Word,
    #[serde(rename = "in")]
    pub in_degree: usize,
    #[serde(rename = "out")]
    pub out_degree: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Analyses {
    pub scc_count: usize,
    pub strongly_connected: bool,
    pub degree_table: Vec<DegreeRow>,
}

/// JSON document for one graph. Arc endpoints are 1-based vertex indices.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct GraphDocument {
    pub word_source: Option<String>,
    pub kind: String,
    pub k: usize,
    pub ell: usize,
    pub vertices: Vec<Word>,
    pub arcs: Vec<ArcRecord>,
    pub analyses: Analyses,
}

impl GraphDocument {
    pub fn new(g: &DirectedGraph, source: Option<&Source>) -> Self {
        let scc = strongly_connected(g);
        let deg = degrees(g);
        GraphDocument {
            word_source: source.map(|s| s.to_string()),
            kind: g.kind().to_string(),
            k: g.k(),
            ell: g.ell(),
            vertices: g.vertices().to_vec(),
            arcs: g
                .arcs()
                .iter()
                .map(|a| ArcRecord {
                    from: a.from + 1,
                    to: a.to + 1,
                    label: a.label.clone(),
                })
                .collect(),
            analyses: Analyses {
                scc_count: scc.count(),
                strongly_connected: scc.is_strongly_connected(),
                degree_table: g
                    .vertices()
                    .iter()
                    .enumerate()
                    .map(|(i, v)| DegreeRow {
                        vertex: v.clone(),
                        in_degree: deg.in_degree[i],
                        out_degree: deg.out_degree[i],
                    })
                    .collect(),
            },
        }
    }
}

pub fn to_json(g: &DirectedGraph, source: Option<&Source>) -> String {
    let mut s = serde_json::to_string_pretty(&GraphDocument::new(g, source)).expect("graph document serializes");
    s.push('\n');
    s
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::build_l_rauzy;

    fn fib42() -> DirectedGraph {
        let w = Source::Fibonacci.prefix_for_factors(6).unwrap();
        build_l_rauzy(&w, 4, 2).unwrap()
    }

    #[test]
    fn dot_lists_every_vertex_and_arc() {
        let dot = to_dot(&fib42());
        assert!(dot.starts_with("digraph \"l-rauzy\" {\n"));
        assert_eq!(dot.matches(" -> ").count(), 7);
        assert_eq!(dot.lines().filter(|l| l.ends_with("\"];") && !l.contains("->")).count(), 5);
        assert!(dot.contains("  \"0100\" -> \"0010\" [label=\"010010\"];\n"));
    }

    #[test]
    fn json_document_fields() {
        let doc = GraphDocument::new(&fib42(), Some(&Source::Fibonacci));
        let v: serde_json::Value = serde_json::to_value(&doc).unwrap();
        assert_eq!(v["word_source"], "fibonacci");
        assert_eq!(v["k"], 4);
        assert_eq!(v["ell"], 2);
        assert_eq!(v["vertices"].as_array().unwrap().len(), 5);
        assert_eq!(v["arcs"][0], serde_json::json!({"from": 1, "to": 3, "label": "010010"}));
        assert_eq!(v["analyses"]["scc_count"], 1);
        assert_eq!(v["analyses"]["strongly_connected"], true);
        assert_eq!(
            v["analyses"]["degree_table"][1],
            serde_json::json!({"vertex": "1001", "in": 2, "out": 2})
        );
    }

    #[test]
    fn output_is_deterministic() {
        assert_eq!(to_dot(&fib42()), to_dot(&fib42()));
        assert_eq!(to_json(&fib42(), None), to_json(&fib42(), None));
    }
}
