//! Calabi property, attractors and repellers, repeller trees and loop integrals.

use std::collections::{BTreeSet, VecDeque};

use crate::error::{Error, Result};
use crate::graph::{MorseGraph, Strand, Strands, VertexKind};
use crate::lattice;
use crate::scc;
use crate::vertical::{cycle_basis, lattice_matrix};

/// Whether every edge lies on a directed cycle, with the first offending edge otherwise.
pub fn is_calabi(g: &MorseGraph) -> (bool, Option<usize>) {
    let comp = scc::components(g.vertices().len(), &g.arcs());
    let witness = g.edges().iter().position(|e| comp[e.tail] != comp[e.head]);
    (witness.is_none(), witness)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum MarkKind {
    Attractor,
    Repeller,
}

impl MarkKind {
    pub fn letter(self) -> &'static str {
        match self {
            MarkKind::Attractor => "A",
            MarkKind::Repeller => "R",
        }
    }
}

/// Marked points, identified by the edge that carries them.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct MarkedPoints {
    pub attractors: Vec<usize>,
    pub repellers: Vec<usize>,
}

pub(crate) fn strand_mark(g: &MorseGraph, s: &Strand) -> Option<MarkKind> {
    let kind = |v: Option<usize>| v.map(|v| g.vertex(v).kind);
    match (kind(s.tail), kind(s.head)) {
        (Some(VertexKind::Index1), Some(VertexKind::Index2)) => Some(MarkKind::Repeller),
        (Some(VertexKind::Index2), Some(VertexKind::Index1)) => Some(MarkKind::Attractor),
        _ => None,
    }
}

/// Mark carried by edge `e` itself (markers push it to the first edge of the run).
pub fn edge_mark(g: &MorseGraph, strands: &Strands, e: usize) -> Option<MarkKind> {
    let s = &strands.list[strands.of_edge[e]];
    if s.first() == e {
        strand_mark(g, s)
    } else {
        None
    }
}

pub fn marked_points(g: &MorseGraph) -> MarkedPoints {
    let st = g.strands();
    let mut m = MarkedPoints::default();
    for s in &st.list {
        match strand_mark(g, s) {
            Some(MarkKind::Attractor) => m.attractors.push(s.first()),
            Some(MarkKind::Repeller) => m.repellers.push(s.first()),
            None => {}
        }
    }
    m.attractors.sort_unstable();
    m.repellers.sort_unstable();
    m
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Direction {
    Forward,
    Backward,
}

/// Which part of an edge a tree covers; marked edges are cut at the mark.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Part {
    Whole,
    BeforeMark,
    AfterMark,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Segment {
    pub edge: usize,
    pub part: Part,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RepellerTree {
    /// Edge carrying the repeller.
    pub root: usize,
    pub direction: Direction,
    /// Interior vertices, in visiting order.
    pub vertices: Vec<usize>,
    /// Edge paths from the root to each leaf, in visiting order.
    pub branches: Vec<Vec<usize>>,
    /// Attractor edges reached.
    pub leaves: Vec<usize>,
    pub segments: Vec<Segment>,
}

fn whole(edges: &[usize]) -> impl Iterator<Item = Segment> + '_ {
    edges.iter().map(|&edge| Segment { edge, part: Part::Whole })
}

/// Breadth-first traversal from a repeller, stopping at the first attractor
/// on each branch. Any revisited vertex or attractor is reported.
pub fn build_tree(g: &MorseGraph, r: usize, dir: Direction) -> Result<RepellerTree> {
    let st = g.strands();
    let root_strand = &st.list[st.of_edge[r]];
    if strand_mark(g, root_strand) != Some(MarkKind::Repeller) {
        return Err(Error::TreePropertyViolation(format!("edge {} carries no repeller", g.edge(r).name)));
    }
    let root = root_strand.first();
    let forward = dir == Direction::Forward;
    let mut segments = Vec::new();
    let start = if forward {
        segments.push(Segment { edge: root, part: Part::AfterMark });
        segments.extend(whole(&root_strand.edges[1..]));
        root_strand.head
    } else {
        segments.push(Segment { edge: root, part: Part::BeforeMark });
        root_strand.tail
    };
    let start = start.expect("repeller strands have critical ends");
    let mut tree = RepellerTree {
        root,
        direction: dir,
        vertices: vec![start],
        branches: Vec::new(),
        leaves: Vec::new(),
        segments,
    };
    let mut seen_vertices = BTreeSet::from([start]);
    let mut seen_leaves = BTreeSet::new();
    let mut queue = VecDeque::from([(start, root_strand.edges.clone())]);
    while let Some((v, path)) = queue.pop_front() {
        let mut next = if forward { st.starting_at(v) } else { st.ending_at(v) };
        next.sort_by_key(|&s| st.list[s].first());
        if next.is_empty() {
            return Err(Error::TreePropertyViolation(format!("dead end at {}", g.vertex(v).name)));
        }
        for s in next {
            let strand = &st.list[s];
            let mut p = path.clone();
            p.extend(&strand.edges);
            match strand_mark(g, strand) {
                Some(MarkKind::Attractor) => {
                    if !seen_leaves.insert(s) {
                        return Err(Error::TreePropertyViolation(format!(
                            "two routes to the attractor on {}",
                            g.edge(strand.first()).name
                        )));
                    }
                    if forward {
                        tree.segments.push(Segment { edge: strand.first(), part: Part::BeforeMark });
                    } else {
                        tree.segments.push(Segment { edge: strand.first(), part: Part::AfterMark });
                        tree.segments.extend(whole(&strand.edges[1..]));
                    }
                    tree.leaves.push(strand.first());
                    tree.branches.push(p);
                }
                Some(MarkKind::Repeller) => {
                    return Err(Error::TreePropertyViolation(format!(
                        "repeller on {} reached inside a tree",
                        g.edge(strand.first()).name
                    )));
                }
                None => {
                    let w = if forward { strand.head } else { strand.tail };
                    let Some(w) = w else {
                        return Err(Error::TreePropertyViolation("marker loop inside a tree".into()));
                    };
                    if !seen_vertices.insert(w) {
                        return Err(Error::TreePropertyViolation(format!(
                            "cycle through {} without an attractor",
                            g.vertex(w).name
                        )));
                    }
                    tree.segments.extend(whole(&strand.edges));
                    tree.vertices.push(w);
                    queue.push_back((w, p));
                }
            }
        }
    }
    Ok(tree)
}

/// Rejects graphs with a directed loop whose critical vertices all share one
/// index (marker-only loops included); trees are only defined without them.
pub fn check_tree_hypotheses(g: &MorseGraph) -> Result<()> {
    match g.same_index_loop_vertices().first() {
        None => Ok(()),
        Some(&v) => Err(Error::TreePropertyViolation(format!(
            "directed loop through {} meets a single Morse index",
            g.vertex(v).name
        ))),
    }
}

/// Every edge piece: marked edges contribute the parts on either side of the mark.
pub fn all_segments(g: &MorseGraph) -> Vec<Segment> {
    let st = g.strands();
    let mut out = Vec::new();
    for s in &st.list {
        if strand_mark(g, s).is_some() {
            out.push(Segment { edge: s.first(), part: Part::BeforeMark });
            out.push(Segment { edge: s.first(), part: Part::AfterMark });
            out.extend(whole(&s.edges[1..]));
        } else {
            out.extend(whole(&s.edges));
        }
    }
    out.sort();
    out
}

pub fn all_trees(g: &MorseGraph) -> Result<Vec<RepellerTree>> {
    check_tree_hypotheses(g)?;
    let mut trees = Vec::new();
    for r in marked_points(g).repellers {
        trees.push(build_tree(g, r, Direction::Forward)?);
        trees.push(build_tree(g, r, Direction::Backward)?);
    }
    Ok(trees)
}

pub fn tree_cover_check(g: &MorseGraph) -> Result<bool> {
    let covered: BTreeSet<Segment> = all_trees(g)?.into_iter().flat_map(|t| t.segments).collect();
    Ok(all_segments(g).iter().all(|s| covered.contains(s)))
}

/// Signed count of marked points of one kind along a closed edge walk.
/// Each step is `(edge, +1)` for a traversal along the edge, `(edge, -1)` against it.
pub fn loop_integral(g: &MorseGraph, cycle: &[(usize, i8)], kind: MarkKind) -> Result<i64> {
    let ends = |&(e, s): &(usize, i8)| {
        let edge = g.edge(e);
        if s > 0 {
            (edge.tail, edge.head)
        } else {
            (edge.head, edge.tail)
        }
    };
    for i in 0..cycle.len() {
        let (_, end) = ends(&cycle[i]);
        let (start, _) = ends(&cycle[(i + 1) % cycle.len()]);
        if end != start {
            return Err(Error::CycleNotClosed(i));
        }
    }
    let st = g.strands();
    Ok(cycle
        .iter()
        .filter(|&&(e, _)| edge_mark(g, &st, e) == Some(kind))
        .map(|&(_, s)| if s > 0 { 1 } else { -1 })
        .sum())
}

/// Nonzero nonnegative attractor combination with zero intersection against
/// every basis cycle, searched in `[0, bx]`. Such a vector obstructs
/// harmonicity; finding none is only evidence within the box.
pub fn positive_kernel_witness(g: &MorseGraph, bx: i64) -> Option<Vec<(usize, i64)>> {
    let attractors = marked_points(g).attractors;
    let m = lattice_matrix(g, &cycle_basis(g), &attractors);
    lattice::nonnegative_kernel_vector(&m, attractors.len(), bx)
        .map(|k| attractors.into_iter().zip(k).filter(|&(_, x)| x != 0).collect())
}
