//! Graph rewrites: move A on the twister loop, same-index reorders, 1-handle
//! attachment and conditioning of fibration markers.

use crate::angle::{Angle, Rational};
use crate::error::{Error, Result};
use crate::graph::{chi_minus, MorseGraph, VertexKind};
use crate::harmonic::{edge_mark, is_calabi, marked_points, MarkKind};
use crate::vertical::{var_capital, vertical_norm, VerticalClass};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum MoveKind {
    MoveA,
    Reorder,
    AttachHandle,
    ConditionFibration,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MoveRecord {
    pub kind: MoveKind,
    /// Vertices created or moved, by name.
    pub vertices: Vec<String>,
    /// Edges created or changed, by name.
    pub edges: Vec<String>,
    /// Per-edge change of `τ_g`, by edge name; edges that vanished count as removed.
    pub delta_genus: Vec<(String, i64)>,
    pub delta_chi_minus: Vec<(String, i64)>,
    pub repeller_delta: i64,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Moved {
    pub graph: MorseGraph,
    pub record: MoveRecord,
}

fn record(kind: MoveKind, before: &MorseGraph, after: &MorseGraph, vertices: Vec<String>) -> MoveRecord {
    let mut delta_genus = Vec::new();
    let mut delta_chi_minus = Vec::new();
    let mut edges = Vec::new();
    let value = |g: &MorseGraph, name: &str| {
        g.edge_index(name).map(|e| (g.edge(e).genus as i64, g.edge(e).chi_minus())).unwrap_or((0, 0))
    };
    let mut names: Vec<&str> = before.edges().iter().map(|e| e.name.as_str()).collect();
    names.extend(after.edges().iter().map(|e| e.name.as_str()).filter(|n| before.edge_index(n).is_none()));
    for name in names {
        let (g0, c0) = value(before, name);
        let (g1, c1) = value(after, name);
        let changed = match (before.edge_index(name), after.edge_index(name)) {
            (Some(a), Some(b)) => {
                before.edge(a) != after.edge(b)
                    || before.vertex(before.edge(a).tail).name != after.vertex(after.edge(b).tail).name
            }
            _ => true,
        };
        if changed {
            edges.push(name.to_string());
        }
        if g1 != g0 {
            delta_genus.push((name.to_string(), g1 - g0));
        }
        if c1 != c0 {
            delta_chi_minus.push((name.to_string(), c1 - c0));
        }
    }
    let repeller_delta = marked_points(after).repellers.len() as i64 - marked_points(before).repellers.len() as i64;
    MoveRecord { kind, vertices, edges, delta_genus, delta_chi_minus, repeller_delta }
}

/// Sends the index-2 vertex of a two-vertex loop once around the circle:
/// both edge genera go up by one.
pub fn move_a_roundtrip(g: &MorseGraph) -> Result<Moved> {
    let shape = g.vertices().len() == 2
        && g.edges().len() == 2
        && {
            let kinds = [g.vertex(0).kind, g.vertex(1).kind];
            kinds.contains(&VertexKind::Index1) && kinds.contains(&VertexKind::Index2)
        }
        && g.edges().iter().all(|e| e.tail != e.head)
        && g.edge(0).tail == g.edge(1).head;
    if !shape {
        return Err(Error::PatternMismatch(format!("{} is not a two-vertex twister loop", g.name())));
    }
    let mut out = g.clone();
    for e in 0..2 {
        out.edge_mut(e).genus += 1;
    }
    let b = (0..2).find(|&v| g.vertex(v).kind == VertexKind::Index2).unwrap();
    let rec = record(MoveKind::MoveA, g, &out, vec![g.vertex(b).name.clone()]);
    Ok(Moved { graph: out, record: rec })
}

/// Swaps the angles of two same-index vertices that are neighbours in the
/// circular order and share no edge.
pub fn reorder_same_index(g: &MorseGraph, v1: usize, v2: usize) -> Result<Moved> {
    let (a, b) = (g.vertex(v1), g.vertex(v2));
    if a.kind != b.kind || !a.kind.is_critical() || v1 == v2 {
        return Err(Error::IndexMismatch(a.name.clone(), b.name.clone()));
    }
    let mut order: Vec<usize> = (0..g.vertices().len()).collect();
    order.sort_by_key(|&v| (g.vertex(v).angle, v));
    let n = order.len();
    let i = order.iter().position(|&v| v == v1).unwrap();
    if order[(i + 1) % n] != v2 && order[(i + n - 1) % n] != v2 {
        return Err(Error::NotAdjacent(a.name.clone(), b.name.clone()));
    }
    if g.edges().iter().any(|e| (e.tail == v1 && e.head == v2) || (e.tail == v2 && e.head == v1)) {
        return Err(Error::SharedEdge(a.name.clone(), b.name.clone()));
    }
    let mut out = g.clone();
    out.vertex_mut(v1).angle = b.angle;
    out.vertex_mut(v2).angle = a.angle;
    let rec = record(MoveKind::Reorder, g, &out, vec![a.name.clone(), b.name.clone()]);
    debug_assert!(rec.delta_genus.is_empty() && rec.repeller_delta == 0);
    Ok(Moved { graph: out, record: rec })
}

fn fresh(taken: impl Fn(&str) -> bool, base: &str) -> String {
    if !taken(base) {
        return base.to_string();
    }
    (1..).map(|i| format!("{base}{i}")).find(|n| !taken(n)).unwrap()
}

/// Splits `e` at `at` with a new vertex of the given kind; the second half
/// gets a fresh name. Returns the new vertex.
fn split_edge(g: &mut MorseGraph, e: usize, at: Angle, kind: VertexKind, vname: &str) -> Result<usize> {
    let name = fresh(|n| g.vertex_index(n).is_some(), vname);
    let v = g.add_vertex(name, at, kind)?;
    let edge = g.edge(e).clone();
    let second = fresh(|n| g.edge_index(n).is_some(), &format!("{}_2", edge.name));
    g.edge_mut(e).head = v;
    g.add_edge(second, v, edge.head, edge.genus, edge.boundary)?;
    Ok(v)
}

fn check_position(g: &MorseGraph, e: usize, at: Angle) -> Result<()> {
    let edge = g.edge(e);
    let inside = at.in_open_arc(g.vertex(edge.tail).angle, g.vertex(edge.head).angle)
        || (edge.tail == edge.head && at != g.vertex(edge.tail).angle);
    if !inside || g.vertices().iter().any(|v| v.angle == at) {
        return Err(Error::PositionOnVertex(edge.name.clone(), at.to_string()));
    }
    Ok(())
}

/// Attaches a 1-handle running from a point of `src` to a later point of
/// `dst`. The source point becomes a trivalent index-2 vertex, the target a
/// trivalent index-1 vertex, and the sphere family through the handle an edge
/// between them carrying a new attractor.
pub fn attach_handle(g: &MorseGraph, src: (usize, Angle), dst: (usize, Angle)) -> Result<Moved> {
    let (es, at_s) = src;
    let (ed, at_d) = dst;
    check_position(g, es, at_s)?;
    check_position(g, ed, at_d)?;
    if at_s >= at_d {
        return Err(Error::NonPositiveHandle(at_s.to_string(), at_d.to_string()));
    }
    let mut out = g.clone();
    let q = split_edge(&mut out, es, at_s, VertexKind::Index2, "hq")?;
    // the destination may sit on either half of a freshly split edge
    let ed = if ed == es && !out.edge_crosses(es, at_d) { out.edges().len() - 1 } else { ed };
    let p = split_edge(&mut out, ed, at_d, VertexKind::Index1, "hp")?;
    let h = fresh(|n| out.edge_index(n).is_some(), "handle");
    let he = out.add_edge(h, q, p, 0, 0)?;
    let before = marked_points(g).repellers.len();
    let after = marked_points(&out).repellers.len();
    if after != before {
        return Err(Error::RepellerCreated(g.edge(if after > before { es } else { ed }).name.clone()));
    }
    debug_assert_eq!(edge_mark(&out, &out.strands(), he), Some(MarkKind::Attractor));
    let rec = record(MoveKind::AttachHandle, g, &out, vec![out.vertex(q).name.clone(), out.vertex(p).name.clone()]);
    Ok(Moved { graph: out, record: rec })
}

/// Replaces a regular marker by a cancelling pair: the marker becomes an
/// index-1 vertex and an index-2 vertex appears halfway along its out-edge,
/// with one extra handle in between.
pub fn condition_fibration(g: &MorseGraph, marker: usize) -> Result<Moved> {
    let m = g.vertex(marker);
    let outs = g.out_edges(marker);
    if m.kind != VertexKind::Regular || outs.len() != 1 || g.in_edges(marker).len() != 1 {
        return Err(Error::PatternMismatch(format!("{} is not a regular marker", m.name)));
    }
    let e = outs[0];
    let head = g.vertex(g.edge(e).head).angle;
    let mid = m.angle.midpoint_to(head);
    let mut out = g.clone();
    out.vertex_mut(marker).kind = VertexKind::Index1;
    let b = split_edge(&mut out, e, mid, VertexKind::Index2, &format!("{}_b", m.name))?;
    out.edge_mut(e).genus += 1;
    let rec = record(MoveKind::ConditionFibration, g, &out, vec![m.name.clone(), out.vertex(b).name.clone()]);
    Ok(Moved { graph: out, record: rec })
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TwisterReport {
    pub n: u32,
    pub k: u32,
    pub genus_arc_ba: u32,
    pub genus_arc_ab: u32,
    pub var: i64,
    pub var_capital: i64,
    /// `χ₋` of the best fiber component (the `(b, a)` edge).
    pub chi_best: i64,
    pub is_calabi: bool,
    /// Same loop with one boundary circle per fiber: `χ₋` of its best fiber
    /// (`2m − 1` for genus `m`) next to the value `2m` quoted for that example.
    pub chi_best_one_boundary: i64,
    pub chi_best_one_boundary_quoted: i64,
    pub var_capital_one_boundary: i64,
    /// `(‖[F]‖ − T) / Var` for a given Thurston value `T` of the fiber class.
    pub rho_lower_bound: Option<Rational>,
}

/// `T(n)` after `k` applications of move A.
pub fn twister_graph_after(n: u32, k: u32) -> Result<MorseGraph> {
    let mut g = crate::fixtures::twister_graph(n, 0);
    for _ in 0..k {
        g = move_a_roundtrip(&g)?.graph;
    }
    Ok(g)
}

pub fn twister(n: u32, k: u32, thurston: Option<i64>) -> Result<(MorseGraph, TwisterReport)> {
    let g = twister_graph_after(n, k)?;
    let ba = g.find_edge("e_ba")?;
    let ab = g.find_edge("e_ab")?;
    let m = g.edge(ba).genus;
    let mut bounded = g.clone();
    for e in 0..2 {
        bounded.edge_mut(e).boundary = 1;
    }
    let var_capital_g = var_capital(&g)?;
    let rho_lower_bound = match thurston {
        Some(t) if var_capital_g != 0 => {
            let fiber = VerticalClass::from_edges(&g, &[(ab, 1)]);
            Some(Rational::new(vertical_norm(&g, &fiber)? - t, var_capital_g))
        }
        Some(_) => return Err(Error::ZeroVariation),
        None => None,
    };
    let report = TwisterReport {
        n,
        k,
        genus_arc_ba: m,
        genus_arc_ab: g.edge(ab).genus,
        var: g.variations().var,
        var_capital: var_capital_g,
        chi_best: g.edge(ba).chi_minus(),
        is_calabi: is_calabi(&g).0,
        chi_best_one_boundary: chi_minus(m, 1),
        chi_best_one_boundary_quoted: 2 * m as i64,
        var_capital_one_boundary: var_capital(&bounded)?,
        rho_lower_bound,
    };
    Ok((g, report))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures::{disjoint_union, fibration_loop, theta, twister_graph};
    use num_rational::Ratio;

    fn at(p: i64, q: i64) -> Angle {
        Angle::new(p, q).unwrap()
    }

    #[test]
    fn move_a_raises_both_genera() {
        let m = move_a_roundtrip(&twister_graph(2, 0)).unwrap();
        assert_eq!(m.graph, {
            let mut t = twister_graph(3, 0);
            t.set_name("T2");
            t
        });
        assert_eq!(m.record.delta_genus, vec![("e_ba".into(), 1), ("e_ab".into(), 1)]);
        assert_eq!(m.record.repeller_delta, 0);
        assert!(matches!(move_a_roundtrip(&theta(1, 1)), Err(Error::PatternMismatch(_))));
        let g = twister_graph_after(1, 5).unwrap();
        assert_eq!((g.edge(0).genus, g.edge(1).genus), (6, 7));
    }

    fn two_index1() -> MorseGraph {
        // two twister loops interleaved on the circle
        let a = twister_graph(1, 0);
        disjoint_union(&a, &a, Ratio::new(1, 8))
    }

    #[test]
    fn reorders() {
        let g = two_index1();
        let (a, a2) = (g.vertex_index("a").unwrap(), g.vertex_index("a'").unwrap());
        let m = reorder_same_index(&g, a, a2).unwrap();
        assert!(m.graph.validate().is_valid());
        assert_eq!(m.graph.tau_chains(), g.tau_chains());
        assert_eq!(marked_points(&m.graph), marked_points(&g));
        let back = reorder_same_index(&m.graph, a, a2).unwrap();
        assert_eq!(back.graph, g);
        let b = g.vertex_index("b").unwrap();
        assert!(matches!(reorder_same_index(&g, a, b), Err(Error::IndexMismatch(..))));
        let b2 = g.vertex_index("b'").unwrap();
        assert!(matches!(reorder_same_index(&g, a, b2), Err(Error::IndexMismatch(..))));
        let mut h = MorseGraph::new("pair");
        let x = h.add_vertex("x", at(1, 8), VertexKind::Index1).unwrap();
        let y = h.add_vertex("y", at(1, 4), VertexKind::Index1).unwrap();
        h.add_edge("xy", x, y, 1, 0).unwrap();
        assert!(matches!(reorder_same_index(&h, x, y), Err(Error::SharedEdge(..))));
    }

    #[test]
    fn handle_between_twisters() {
        let g = disjoint_union(&twister_graph(1, 0), &twister_graph(1, 0), Ratio::new(1, 8));
        let src = g.find_edge("e_ab").unwrap(); // a@1/4 -> b@3/4
        let dst = g.find_edge("e_ab'").unwrap(); // a'@3/8 -> b'@7/8
                                                 // the repeller on each split edge survives on one of its halves
        let m = attach_handle(&g, (src, at(1, 2)), (dst, at(5, 8))).unwrap();
        assert!(m.graph.validate().is_valid());
        assert_eq!(marked_points(&m.graph).repellers.len(), 2);
        let (a2, p) = (m.graph.vertex_index("a'").unwrap(), m.graph.vertex_index("hp").unwrap());
        assert!(matches!(reorder_same_index(&m.graph, a2, p), Err(Error::NotAdjacent(..))));
        // a' -> hp runs between two index-1 vertices; a handle leaving it adds a repeller
        let e = m.graph.find_edge("e_ab'").unwrap();
        let far = m.graph.find_edge("e_ba").unwrap();
        let err = attach_handle(&m.graph, (e, at(7, 16)), (far, at(15, 16))).unwrap_err();
        assert!(matches!(err, Error::RepellerCreated(_)));
        let src = g.find_edge("e_ba").unwrap(); // b@3/4 -> a@1/4
        let dst = g.find_edge("e_ab'").unwrap();
        let out = attach_handle(&g, (src, at(13, 16)), (dst, at(1, 2))).unwrap_err();
        assert!(matches!(out, Error::NonPositiveHandle(..)));
        let dst = g.find_edge("e_ba'").unwrap(); // b'@7/8 -> a'@3/8
        let m = attach_handle(&g, (src, at(13, 16)), (dst, at(15, 16))).unwrap();
        assert!(m.graph.validate().is_valid());
        let mp = marked_points(&m.graph);
        assert_eq!((mp.repellers.len(), mp.attractors.len()), (2, 3));
        assert_eq!(m.record.repeller_delta, 0);
        assert!(matches!(attach_handle(&g, (src, at(1, 4)), (dst, at(15, 16))), Err(Error::PositionOnVertex(..))));
    }

    #[test]
    fn handle_on_one_edge() {
        let g = twister_graph(2, 0);
        let e = g.find_edge("e_ba").unwrap(); // 3/4 -> 1/4 through 0
        let m = attach_handle(&g, (e, at(1, 16)), (e, at(1, 8))).unwrap();
        assert!(m.graph.validate().is_valid());
        assert_eq!(marked_points(&m.graph).repellers.len(), 1);
    }

    #[test]
    fn conditioning_and_fibration_handles() {
        let f = fibration_loop(2);
        let c = condition_fibration(&f, 0).unwrap();
        assert!(c.graph.validate().is_valid());
        assert_eq!(c.record.repeller_delta, 1);
        assert_eq!(c.graph.edge(0).genus, 3);
        let mut two = disjoint_union(&fibration_loop(1), &fibration_loop(1), Ratio::new(1, 4));
        two = condition_fibration(&two, 0).unwrap().graph;
        two = condition_fibration(&two, 1).unwrap().graph;
        assert!(two.validate().is_valid());
        let mp = marked_points(&two);
        let (src, dst) = (mp.attractors[0], mp.attractors[1]);
        let joined = attach_handle(&two, (src, at(5, 8)), (dst, at(7, 8))).unwrap().graph;
        assert!(joined.validate().is_valid());
        let mp = marked_points(&joined);
        assert_eq!((mp.repellers.len(), mp.attractors.len()), (2, 3));
        assert!(matches!(condition_fibration(&twister_graph(1, 0), 0), Err(Error::PatternMismatch(_))));
    }

    #[test]
    fn twister_report() {
        let (_, r) = twister(1, 3, None).unwrap();
        assert_eq!((r.genus_arc_ba, r.genus_arc_ab, r.var_capital, r.is_calabi), (4, 5, 2, true));
        assert_eq!((r.chi_best_one_boundary, r.chi_best_one_boundary_quoted), (7, 8));
        assert_eq!(r.var_capital_one_boundary, 2);
        let (_, r) = twister(0, 0, None).unwrap();
        assert_eq!((r.var, r.var_capital), (0, 0));
        let (_, r) = twister(0, 4, Some(0)).unwrap();
        assert_eq!(r.rho_lower_bound, Some(Rational::new(6, 2)));
    }
}
