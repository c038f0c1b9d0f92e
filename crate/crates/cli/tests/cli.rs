use std::collections::BTreeSet;
use std::process::{Command, Output};

use pest::iterators::Pair;
use pest::Parser;
use pest_derive::Parser;

/// The DOT language grammar as published with Graphviz (HTML strings and
/// comments included, keywords case-insensitive).
#[derive(Parser)]
#[grammar_inline = r##"
WHITESPACE = _{ " " | "\t" | "\r" | "\n" }
COMMENT    = _{ "/*" ~ (!"*/" ~ ANY)* ~ "*/" | ("//" | "#") ~ (!"\n" ~ ANY)* }

file      = { SOI ~ graph ~ EOI }
graph     = { ^"strict"? ~ kind ~ id? ~ "{" ~ stmt_list ~ "}" }
kind      = { ^"digraph" | ^"graph" }
stmt_list = { (stmt ~ ";"?)* }
stmt      = _{ attr_stmt | edge_stmt | assign | node_stmt | subgraph }
assign    = { id ~ "=" ~ id }
attr_stmt = { (^"graph" | ^"node" | ^"edge") ~ attr_list }
attr_list = { ("[" ~ a_list? ~ "]")+ }
a_list    = { (id ~ "=" ~ id ~ (";" | ",")?)+ }
edge_stmt = { (node_id | subgraph) ~ (edgeop ~ (node_id | subgraph))+ ~ attr_list? }
edgeop    = { "->" | "--" }
node_stmt = { node_id ~ attr_list? }
node_id   = { id ~ port? }
port      = { ":" ~ id ~ (":" ~ id)? }
subgraph  = { (^"subgraph" ~ id?)? ~ "{" ~ stmt_list ~ "}" }

id      = ${ quoted | numeral | ident | html }
ident   = @{ (ASCII_ALPHA | "_") ~ (ASCII_ALPHANUMERIC | "_")* }
numeral = @{ "-"? ~ ("." ~ ASCII_DIGIT+ | ASCII_DIGIT+ ~ ("." ~ ASCII_DIGIT*)?) }
quoted  = @{ "\"" ~ ("\\\"" | !"\"" ~ ANY)* ~ "\"" }
html    = @{ "<" ~ (html | !">" ~ ANY)* ~ ">" }
"##]
struct Dot;

fn lrauzy(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_lrauzy"))
        .args(args)
        .env_remove("LRAUZY_MAX_PREFIX")
        .env("RUST_BACKTRACE", "0")
        .output()
        .expect("binary runs")
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).unwrap()
}

fn unquote(id: Pair<Rule>) -> String {
    id.as_str().trim_matches('"').to_string()
}

fn node_name(pair: Pair<Rule>) -> String {
    assert_eq!(pair.as_rule(), Rule::node_id);
    unquote(pair.into_inner().next().unwrap())
}

/// Nodes and (from, to) pairs of a DOT document, via the reference grammar.
fn parse_dot(text: &str) -> (BTreeSet<String>, Vec<(String, String)>) {
    let file = Dot::parse(Rule::file, text).unwrap_or_else(|e| panic!("DOT does not parse:\n{e}"));
    let graph = file.into_iter().next().unwrap().into_inner().next().unwrap();
    let mut inner = graph.into_inner();
    assert_eq!(inner.next().unwrap().as_str(), "digraph");
    let mut nodes = BTreeSet::new();
    let mut edges = Vec::new();
    let stmts = inner.find(|p| p.as_rule() == Rule::stmt_list).unwrap();
    for stmt in stmts.into_inner() {
        match stmt.as_rule() {
            Rule::node_stmt => {
                nodes.insert(node_name(stmt.into_inner().next().unwrap()));
            }
            Rule::edge_stmt => {
                let ends: Vec<String> = stmt
                    .into_inner()
                    .filter(|p| p.as_rule() == Rule::node_id)
                    .map(node_name)
                    .collect();
                assert_eq!(ends.len(), 2, "one arc per statement");
                edges.push((ends[0].clone(), ends[1].clone()));
            }
            _ => {}
        }
    }
    (nodes, edges)
}

#[test]
fn grammar_accepts_and_rejects() {
    assert!(Dot::parse(Rule::file, "strict digraph g { a -> b -> c; subgraph s { x } n [a=1, b=\"q\"] }").is_ok());
    assert!(Dot::parse(Rule::file, "digraph { \"a\" -> }").is_err());
    assert!(Dot::parse(Rule::file, "digraph { \"a\" [label=\"x\"; }").is_err());
}

#[test]
fn build_fibonacci_dot_round_trips() {
    let out = lrauzy(&["build", "--word", "fibonacci", "--k", "4", "--ell", "2", "--format", "dot"]);
    assert!(out.status.success());
    let (nodes, edges) = parse_dot(&stdout(&out));
    assert_eq!(nodes.len(), 5);
    assert_eq!(edges.len(), 7);
    assert!(edges.iter().all(|(a, b)| nodes.contains(a) && nodes.contains(b)));
    assert!(nodes.contains("0101"));
}

#[test]
fn every_graph_kind_emits_parseable_dot() {
    let cases: &[&[&str]] = &[
        &["--graph", "rauzy", "--k", "6"],
        &["--graph", "debruijn", "--k", "3"],
        &["--graph", "hrr-even", "--k", "6"],
        &["--graph", "hrr-odd-i", "--k", "7"],
        &["--graph", "hrr-odd-ii", "--k", "7"],
        &["--word", "thue-morse", "--k", "5", "--ell", "2"],
        &["--word", "fibonacci-c", "--k", "12", "--ell", "5"],
    ];
    for case in cases {
        let mut args = vec!["build"];
        args.extend_from_slice(case);
        let out = lrauzy(&args);
        assert!(out.status.success(), "{case:?}");
        let (nodes, edges) = parse_dot(&stdout(&out));
        assert!(!nodes.is_empty() && !edges.is_empty(), "{case:?}");
    }
}

#[test]
fn thue_morse_json_has_ten_vertices() {
    let out = lrauzy(&["build", "--word", "thue-morse", "--k", "4", "--ell", "2", "--format", "json"]);
    assert!(out.status.success());
    let doc: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(doc["vertices"].as_array().unwrap().len(), 10);
    assert_eq!(doc["word_source"], "thue-morse");
    assert_eq!(doc["analyses"]["strongly_connected"], false);
}

#[test]
fn periodic_word_gives_three_loops() {
    let out = lrauzy(&["build", "--word", "periodic:010", "--k", "4", "--ell", "1"]);
    assert!(out.status.success());
    let (nodes, edges) = parse_dot(&stdout(&out));
    assert_eq!(nodes.len(), 3);
    assert_eq!(edges.len(), 3);
    assert!(edges.iter().all(|(a, b)| a == b));
}

#[test]
fn build_is_byte_identical_across_runs() {
    for format in ["dot", "json"] {
        let args = ["build", "--k", "12", "--ell", "5", "--format", format];
        assert_eq!(lrauzy(&args).stdout, lrauzy(&args).stdout);
    }
}

#[test]
fn build_writes_to_out_path() {
    let path = std::env::temp_dir().join(format!("lrauzy-cli-test-{}.json", std::process::id()));
    let out = lrauzy(&["build", "--k", "4", "--ell", "1", "--format", "json", "--out", path.to_str().unwrap()]);
    assert!(out.status.success());
    let doc: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(&path).unwrap()).unwrap();
    std::fs::remove_file(&path).ok();
    assert_eq!(doc["arcs"].as_array().unwrap().len(), 8);
}

#[test]
fn invalid_parameters_exit_nonzero() {
    for args in [
        &["build", "--k", "4", "--ell", "4"][..],
        &["build", "--k", "4"],
        &["build", "--word", "nonsense", "--k", "4", "--ell", "1"],
        &["build", "--graph", "hrr-even", "--k", "5"],
        &["verify", "--k-max", "1"],
        &["verify", "--k-max", "3", "--checks", "bogus"],
        &["witness", "--k", "4", "--ell", "0"],
    ] {
        let out = lrauzy(args);
        assert!(!out.status.success(), "{args:?}");
        assert!(!out.stderr.is_empty(), "{args:?}");
    }
}

#[test]
fn unwritable_out_path_is_an_error() {
    let out = lrauzy(&["build", "--k", "4", "--ell", "1", "--out", "/nonexistent-dir/x.dot"]);
    assert!(!out.status.success());
}

#[test]
fn prefix_cap_is_enforced() {
    let out = Command::new(env!("CARGO_BIN_EXE_lrauzy"))
        .args(["build", "--k", "40", "--ell", "3"])
        .env("LRAUZY_MAX_PREFIX", "100")
        .env("RUST_BACKTRACE", "0")
        .output()
        .unwrap();
    assert!(!out.status.success());
    assert!(String::from_utf8_lossy(&out.stderr).contains("LRAUZY_MAX_PREFIX"));
}

fn json_lines(out: &Output) -> Vec<serde_json::Value> {
    stdout(out).lines().map(|l| serde_json::from_str(l).unwrap()).collect()
}

#[test]
fn verify_counts_and_connectivity_to_30_passes() {
    let out = lrauzy(&["verify", "--word", "fibonacci", "--k-max", "30", "--checks", "counts,connectivity"]);
    assert!(out.status.success());
    let lines = json_lines(&out);
    assert_eq!(lines.len(), 2 + 435);
    assert_eq!(lines.last().unwrap()["summary"]["passed"], true);
    // deterministic (k, ell) order
    let order: Vec<(u64, u64)> = lines[1..lines.len() - 1]
        .iter()
        .map(|l| (l["k"].as_u64().unwrap(), l["ell"].as_u64().unwrap()))
        .collect();
    let mut sorted = order.clone();
    sorted.sort();
    assert_eq!(order, sorted);
}

#[test]
fn verify_smallest_instance_passes() {
    let out = lrauzy(&["verify", "--word", "fibonacci", "--k-max", "2"]);
    assert!(out.status.success());
    let lines = json_lines(&out);
    assert_eq!(lines[1]["k"], 2);
    assert_eq!(lines[1]["ell"], 1);
    assert_eq!(lines[1]["passed"], true);
}

#[test]
fn verify_thue_morse_marks_expected_deviation() {
    let out = lrauzy(&["verify", "--word", "thue-morse", "--k-max", "4", "--checks", "connectivity"]);
    assert!(out.status.success());
    let lines = json_lines(&out);
    let inst = lines.iter().find(|l| l["k"] == 4 && l["ell"] == 2).unwrap();
    assert_eq!(inst["results"][0]["status"], "expected-deviation");
    assert!(inst["results"][0]["detail"].as_str().unwrap().contains("not strongly connected"));
}

#[test]
fn verify_failure_exits_nonzero_with_reproduction() {
    // the walk-count law breaks at (3,1)
    let out = lrauzy(&["verify", "--k-max", "3", "--checks", "psi"]);
    assert!(!out.status.success());
    let lines = json_lines(&out);
    let bad = lines.iter().find(|l| l["passed"] == false).unwrap();
    assert_eq!((bad["k"].as_u64(), bad["ell"].as_u64()), (Some(3), Some(1)));
    assert!(bad["reproduce"].as_str().unwrap().contains("--k-min 3 --k-max 3"));
}

#[test]
fn locate_examples() {
    let out = lrauzy(&["locate", "1010", "--t-max", "1"]);
    assert!(out.status.success());
    let text = stdout(&out);
    assert!(text.contains("(b, c, d) = (5, 3, 5)"));
    assert!(text.contains("positions 5, 13"));
    assert!(text.contains("verified"));

    let out = lrauzy(&["locate", "0100", "--t-max", "3", "--format", "json"]);
    let v: serde_json::Value = serde_json::from_str(stdout(&out).trim()).unwrap();
    assert_eq!(v["positions"], serde_json::json!([1, 6, 9, 14]));
    assert_eq!(v["scan_verified"], true);
}

#[test]
fn locate_rejects_non_factor() {
    let out = lrauzy(&["locate", "11"]);
    assert!(!out.status.success());
    assert!(String::from_utf8_lossy(&out.stderr).contains("not a factor"));
}

#[test]
fn witness_examples() {
    for (k, ell, n) in [("4", "2", 5), ("3", "2", 4), ("2", "1", 3)] {
        let out = lrauzy(&["witness", "--k", k, "--ell", ell, "--format", "json"]);
        assert!(out.status.success());
        let ws = json_lines(&out);
        assert_eq!(ws.len(), n);
        assert!(ws.iter().all(|w| w["verified"] == true));
    }
    let out = lrauzy(&["witness", "--k", "2", "--ell", "1", "--format", "json"]);
    let pos: Vec<u64> = json_lines(&out).iter().map(|w| w["position"].as_u64().unwrap()).collect();
    assert_eq!(pos, [1, 2, 3]);
}

#[test]
fn witness_bound_exhaustion_is_loud() {
    let out = lrauzy(&["witness", "--k", "4", "--ell", "2", "--search-bound", "0"]);
    assert!(!out.status.success());
    assert!(String::from_utf8_lossy(&out.stderr).contains("witness search failed"));
}

#[test]
fn factors_lists_first_occurrences() {
    let out = lrauzy(&["factors", "--k", "4"]);
    assert!(out.status.success());
    assert_eq!(stdout(&out), "1\t0100\t1\n2\t1001\t2\n3\t0010\t3\n4\t0101\t4\n5\t1010\t5\n");
}
