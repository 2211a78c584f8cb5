//! Graphviz export.

use std::fmt::Write;

use crate::graph::MorseGraph;
use crate::harmonic::edge_mark;

fn quote(s: &str) -> String {
    format!("\"{}\"", s.replace('\\', "\\\\").replace('"', "\\\""))
}

/// Marked edges are drawn through a diamond node labelled `A` or `R`; the
/// edge label sits on the first half.
pub fn export_dot(g: &MorseGraph) -> String {
    let mut s = format!("digraph {} {{\n", quote(g.name()));
    for v in g.vertices() {
        writeln!(s, "  {} [label=\"idx={}@{}\"];", quote(&v.name), v.kind.short(), v.angle).unwrap();
    }
    let strands = g.strands();
    for (e, edge) in g.edges().iter().enumerate() {
        let label = format!("g={},b={},chi-={}", edge.genus, edge.boundary, edge.chi_minus());
        let (t, h) = (quote(&g.vertex(edge.tail).name), quote(&g.vertex(edge.head).name));
        match edge_mark(g, &strands, e) {
            Some(mark) => {
                let mid = quote(&format!("{}:{}", edge.name, mark.letter()));
                writeln!(s, "  {mid} [shape=diamond,label=\"{}\"];", mark.letter()).unwrap();
                writeln!(s, "  {t} -> {mid} [label=\"{label}\"];").unwrap();
                writeln!(s, "  {mid} -> {h};").unwrap();
            }
            None => writeln!(s, "  {t} -> {h} [label=\"{label}\"];").unwrap(),
        }
    }
    s.push_str("}\n");
    s
}
