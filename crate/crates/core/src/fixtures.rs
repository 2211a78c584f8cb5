//! Small named graphs used throughout tests, benches and the CLI.

use num_rational::Ratio;

use crate::angle::Angle;
use crate::graph::{MorseGraph, VertexKind};

fn at(p: i64, q: i64) -> Angle {
    Angle::new(p, q).expect("fixture angle in range")
}

/// The twister loop `T(n)`: `a` (index 1) at 1/4, `b` (index 2) at 3/4,
/// edge `e_ba` of genus `n` and `e_ab` of genus `n + 1`, both with
/// `boundary` boundary circles.
pub fn twister_graph(n: u32, boundary: u32) -> MorseGraph {
    let mut g = MorseGraph::new(format!("T{n}"));
    let a = g.add_vertex("a", at(1, 4), VertexKind::Index1).unwrap();
    let b = g.add_vertex("b", at(3, 4), VertexKind::Index2).unwrap();
    g.add_edge("e_ba", b, a, n, boundary).unwrap();
    g.add_edge("e_ab", a, b, n + 1, boundary).unwrap();
    g
}

/// `Θ(p,q)`: two edges `v2 -> v1` of genera `p`, `q` and one edge
/// `v1 -> v2` of genus `p + q`.
pub fn theta(p: u32, q: u32) -> MorseGraph {
    let mut g = MorseGraph::new(format!("theta{p}_{q}"));
    let v1 = g.add_vertex("v1", at(1, 4), VertexKind::Index1).unwrap();
    let v2 = g.add_vertex("v2", at(3, 4), VertexKind::Index2).unwrap();
    g.add_edge("e1", v2, v1, p, 0).unwrap();
    g.add_edge("e2", v2, v1, q, 0).unwrap();
    g.add_edge("e3", v1, v2, p + q, 0).unwrap();
    g
}

/// A fibration: one marker with a loop edge of the given genus.
pub fn fibration_loop(genus: u32) -> MorseGraph {
    let mut g = MorseGraph::new(format!("fib{genus}"));
    let m = g.add_vertex("m", Angle::zero(), VertexKind::Regular).unwrap();
    g.add_edge("e", m, m, genus, 0).unwrap();
    g
}

/// Two twister-like loops joined by a one-way torus edge. The fiber takes
/// the values 4 and 2 only, and the `bridge` edge lies on no directed cycle.
pub fn non_harmonic() -> MorseGraph {
    let mut g = MorseGraph::new("nonharmonic");
    let p1 = g.add_vertex("p1", at(1, 10), VertexKind::Index1).unwrap();
    let p2 = g.add_vertex("p2", at(3, 10), VertexKind::Index2).unwrap();
    let q1 = g.add_vertex("q1", at(1, 2), VertexKind::Index1).unwrap();
    let q2 = g.add_vertex("q2", at(7, 10), VertexKind::Index2).unwrap();
    g.add_edge("up", p1, p2, 2, 0).unwrap();
    g.add_edge("back", p2, p1, 1, 0).unwrap();
    g.add_edge("bridge", p2, q1, 1, 0).unwrap();
    g.add_edge("down", q2, q1, 2, 0).unwrap();
    g.add_edge("over", q1, q2, 3, 0).unwrap();
    g
}

/// Disjoint union. Names from `b` that clash with `a` get a `'` suffix;
/// `b` is rotated by `shift` so the angles stay distinct when chosen well.
pub fn disjoint_union(a: &MorseGraph, b: &MorseGraph, shift: Ratio<i64>) -> MorseGraph {
    let mut g = a.clone();
    g.set_name(format!("{}+{}", a.name(), b.name()));
    let b = b.rotated(shift);
    let fresh = |taken: &dyn Fn(&str) -> bool, name: &str| {
        let mut n = name.to_string();
        while taken(&n) {
            n.push('\'');
        }
        n
    };
    let mut map = Vec::new();
    for v in b.vertices() {
        let name = fresh(&|n| g.vertex_index(n).is_some(), &v.name);
        map.push(g.add_vertex(name, v.angle, v.kind).unwrap());
    }
    for e in b.edges() {
        let name = fresh(&|n| g.edge_index(n).is_some(), &e.name);
        g.add_edge(name, map[e.tail], map[e.head], e.genus, e.boundary).unwrap();
    }
    g
}
