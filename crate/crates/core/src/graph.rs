//! The fiber graph of a circle-valued Morse map: vertices at critical values,
//! edges carrying the genus and boundary count of their fiber component family.

use std::collections::BTreeSet;
use std::fmt;

use crate::angle::{Angle, Rational};
use crate::error::{Error, Result};
use crate::scc;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum VertexKind {
    Index1,
    Index2,
    /// Pass-through marker used to give fibration loops a vertex.
    Regular,
}

impl VertexKind {
    /// Spelling used by the text format.
    pub fn as_str(self) -> &'static str {
        match self {
            VertexKind::Index1 => "1",
            VertexKind::Index2 => "2",
            VertexKind::Regular => "regular",
        }
    }

    pub fn short(self) -> &'static str {
        match self {
            VertexKind::Regular => "reg",
            k => k.as_str(),
        }
    }

    pub fn is_critical(self) -> bool {
        self != VertexKind::Regular
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Vertex {
    pub name: String,
    pub angle: Angle,
    pub kind: VertexKind,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Edge {
    pub name: String,
    pub tail: usize,
    pub head: usize,
    pub genus: u32,
    pub boundary: u32,
}

/// `|χ|` after discarding sphere and disk components.
pub fn chi_minus(genus: u32, boundary: u32) -> i64 {
    if genus == 0 && boundary <= 1 {
        0
    } else {
        2 * genus as i64 + boundary as i64 - 2
    }
}

impl Edge {
    pub fn euler(&self) -> i64 {
        2 - 2 * self.genus as i64 - self.boundary as i64
    }

    pub fn chi_minus(&self) -> i64 {
        chi_minus(self.genus, self.boundary)
    }

    pub fn is_sphere_or_disk(&self) -> bool {
        self.genus == 0 && self.boundary <= 1
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MorseGraph {
    name: String,
    vertices: Vec<Vertex>,
    edges: Vec<Edge>,
}

impl MorseGraph {
    pub fn new(name: impl Into<String>) -> Self {
        MorseGraph { name: name.into(), vertices: Vec::new(), edges: Vec::new() }
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn set_name(&mut self, name: impl Into<String>) {
        self.name = name.into();
    }

    pub fn vertices(&self) -> &[Vertex] {
        &self.vertices
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn vertex(&self, v: usize) -> &Vertex {
        &self.vertices[v]
    }

    pub fn edge(&self, e: usize) -> &Edge {
        &self.edges[e]
    }

    pub fn vertex_index(&self, name: &str) -> Option<usize> {
        self.vertices.iter().position(|v| v.name == name)
    }

    pub fn edge_index(&self, name: &str) -> Option<usize> {
        self.edges.iter().position(|e| e.name == name)
    }

    pub fn find_edge(&self, name: &str) -> Result<usize> {
        self.edge_index(name).ok_or_else(|| Error::UnknownEdge(name.to_string()))
    }

    pub fn find_vertex(&self, name: &str) -> Result<usize> {
        self.vertex_index(name).ok_or_else(|| Error::UnknownVertex(name.to_string()))
    }

    pub fn add_vertex(&mut self, name: impl Into<String>, angle: Angle, kind: VertexKind) -> Result<usize> {
        let name = name.into();
        if self.vertex_index(&name).is_some() {
            return Err(Error::InvalidGraph(format!("duplicate vertex id {name}")));
        }
        self.vertices.push(Vertex { name, angle, kind });
        Ok(self.vertices.len() - 1)
    }

    pub fn add_edge(
        &mut self,
        name: impl Into<String>,
        tail: usize,
        head: usize,
        genus: u32,
        boundary: u32,
    ) -> Result<usize> {
        let name = name.into();
        if self.edge_index(&name).is_some() {
            return Err(Error::InvalidGraph(format!("duplicate edge id {name}")));
        }
        if tail >= self.vertices.len() || head >= self.vertices.len() {
            return Err(Error::InvalidGraph(format!("edge {name} references a missing vertex")));
        }
        self.edges.push(Edge { name, tail, head, genus, boundary });
        Ok(self.edges.len() - 1)
    }

    pub fn add_edge_named(
        &mut self,
        name: impl Into<String>,
        tail: &str,
        head: &str,
        genus: u32,
        boundary: u32,
    ) -> Result<usize> {
        let t = self.find_vertex(tail)?;
        let h = self.find_vertex(head)?;
        self.add_edge(name, t, h, genus, boundary)
    }

    pub(crate) fn vertex_mut(&mut self, v: usize) -> &mut Vertex {
        &mut self.vertices[v]
    }

    pub(crate) fn edge_mut(&mut self, e: usize) -> &mut Edge {
        &mut self.edges[e]
    }

    pub fn out_edges(&self, v: usize) -> Vec<usize> {
        (0..self.edges.len()).filter(|&e| self.edges[e].tail == v).collect()
    }

    pub fn in_edges(&self, v: usize) -> Vec<usize> {
        (0..self.edges.len()).filter(|&e| self.edges[e].head == v).collect()
    }

    pub fn arc_length(&self, e: usize) -> Rational {
        let edge = &self.edges[e];
        self.vertices[edge.tail].angle.arc_to(self.vertices[edge.head].angle)
    }

    /// True when `theta` lies strictly inside the positive arc of `e`.
    pub fn edge_crosses(&self, e: usize, theta: Angle) -> bool {
        let edge = &self.edges[e];
        theta.in_open_arc(self.vertices[edge.tail].angle, self.vertices[edge.head].angle)
    }

    /// A vertex is bubbling when a sphere or disk family touches it.
    pub fn is_bubbling(&self, v: usize) -> bool {
        self.edges.iter().any(|e| (e.tail == v || e.head == v) && e.is_sphere_or_disk())
    }

    /// Same graph with every angle shifted by `by`.
    pub fn rotated(&self, by: Rational) -> MorseGraph {
        let mut g = self.clone();
        for v in &mut g.vertices {
            v.angle = v.angle.shift(by);
        }
        g
    }

    /// Vertex angles, sorted and deduplicated.
    pub fn critical_angles(&self) -> Vec<Angle> {
        let set: BTreeSet<Angle> = self.vertices.iter().map(|v| v.angle).collect();
        set.into_iter().collect()
    }

    /// One sample angle strictly between each pair of cyclically consecutive vertex angles.
    pub fn sample_angles(&self) -> Vec<Angle> {
        let angles = self.critical_angles();
        let n = angles.len();
        (0..n).map(|i| angles[i].midpoint_to(angles[(i + 1) % n])).collect()
    }

    pub fn arcs(&self) -> Vec<(usize, usize)> {
        self.edges.iter().map(|e| (e.tail, e.head)).collect()
    }

    /// Decomposes the edges into maximal runs joined through regular markers.
    pub fn strands(&self) -> Strands {
        let n_e = self.edges.len();
        let mut of_edge = vec![usize::MAX; n_e];
        let mut list = Vec::new();
        let through = |v: usize| -> Option<usize> {
            if self.vertices[v].kind.is_critical() {
                return None;
            }
            let outs = self.out_edges(v);
            let ins = self.in_edges(v);
            if outs.len() == 1 && ins.len() == 1 {
                Some(outs[0])
            } else {
                None
            }
        };
        let is_start = |e: usize| through(self.edges[e].tail).is_none();
        for e in 0..n_e {
            if !is_start(e) {
                continue;
            }
            let id = list.len();
            let mut edges = vec![e];
            of_edge[e] = id;
            let mut cur = e;
            let head = loop {
                let h = self.edges[cur].head;
                match through(h) {
                    Some(next) if of_edge[next] == usize::MAX => {
                        of_edge[next] = id;
                        edges.push(next);
                        cur = next;
                    }
                    _ => break h,
                }
            };
            list.push(Strand { edges, tail: Some(self.edges[e].tail), head: Some(head) });
        }
        // what is left are loops made of markers only
        for e in 0..n_e {
            if of_edge[e] != usize::MAX {
                continue;
            }
            let id = list.len();
            let mut edges = vec![e];
            of_edge[e] = id;
            let mut cur = e;
            while let Some(next) = through(self.edges[cur].head) {
                if of_edge[next] != usize::MAX {
                    break;
                }
                of_edge[next] = id;
                edges.push(next);
                cur = next;
            }
            list.push(Strand { edges, tail: None, head: None });
        }
        Strands { list, of_edge }
    }

    pub fn validate(&self) -> ValidationReport {
        let mut issues = Vec::new();
        let mut order: Vec<usize> = (0..self.vertices.len()).collect();
        order.sort_by_key(|&v| (self.vertices[v].angle, v));
        for w in order.windows(2) {
            if self.vertices[w[0]].angle == self.vertices[w[1]].angle {
                issues.push(Issue::AngleCollision {
                    first: self.vertices[w[0]].name.clone(),
                    second: self.vertices[w[1]].name.clone(),
                });
            }
        }
        for e in &self.edges {
            if e.tail == e.head && self.vertices[e.tail].kind.is_critical() {
                issues.push(Issue::SelfLoop { edge: e.name.clone() });
            }
        }
        for v in 0..self.vertices.len() {
            self.check_vertex(v, &mut issues);
        }
        let warnings = self
            .same_index_loop_vertices()
            .into_iter()
            .filter(|&v| self.vertices[v].kind.is_critical() && !self.is_bubbling(v))
            .map(|v| Warning::SameIndexLoop { vertex: self.vertices[v].name.clone() })
            .collect();
        ValidationReport { issues, warnings }
    }

    fn check_vertex(&self, v: usize, issues: &mut Vec<Issue>) {
        let vert = &self.vertices[v];
        let ins = self.in_edges(v);
        let outs = self.out_edges(v);
        let ok_degree = matches!(
            (vert.kind, ins.len(), outs.len()),
            (VertexKind::Index1, 1, 1)
                | (VertexKind::Index1, 2, 1)
                | (VertexKind::Index2, 1, 1)
                | (VertexKind::Index2, 1, 2)
                | (VertexKind::Regular, 1, 1)
        );
        if !ok_degree {
            issues.push(Issue::DegreeSignature {
                vertex: vert.name.clone(),
                kind: vert.kind,
                indegree: ins.len(),
                outdegree: outs.len(),
            });
            return;
        }
        let g = |es: &[usize]| es.iter().map(|&e| self.edges[e].genus as i64).sum::<i64>();
        let b = |es: &[usize]| es.iter().map(|&e| self.edges[e].boundary as i64).sum::<i64>();
        let (gi, go, bi, bo) = (g(&ins), g(&outs), b(&ins), b(&outs));
        let bivalent = ins.len() == 1 && outs.len() == 1;
        // (expected, found) pairs; the split rule reads in terms of the incoming side
        let (genus, bound) = match (vert.kind, bivalent) {
            (VertexKind::Regular, _) => ((gi, go), (bi, bo)),
            (VertexKind::Index1, true) => ((gi + 1, go), (bi, bo)),
            (VertexKind::Index2, true) => ((gi - 1, go), (bi, bo)),
            (VertexKind::Index1, false) => ((gi, go), (bi, bo)),
            (VertexKind::Index2, false) => ((gi, go), (bi, bo)),
        };
        if genus.0 != genus.1 {
            issues.push(Issue::GenusRule { vertex: vert.name.clone(), expected: genus.0, found: genus.1 });
        }
        if bound.0 != bound.1 {
            issues.push(Issue::BoundaryRule { vertex: vert.name.clone(), expected: bound.0, found: bound.1 });
        }
    }

    /// Vertices lying on a directed cycle all of whose critical vertices share
    /// one Morse index (markers are transparent). Marker-only loops count too.
    pub fn same_index_loop_vertices(&self) -> Vec<usize> {
        let mut hits = BTreeSet::new();
        for kind in [VertexKind::Index1, VertexKind::Index2] {
            let keep = |v: usize| {
                let k = self.vertices[v].kind;
                k == kind || k == VertexKind::Regular
            };
            let arcs: Vec<(usize, usize)> = self.arcs().into_iter().filter(|&(u, w)| keep(u) && keep(w)).collect();
            let cyc = scc::on_cycle(self.vertices.len(), &arcs);
            hits.extend((0..self.vertices.len()).filter(|&v| cyc[v] && keep(v)));
        }
        hits.into_iter().collect()
    }

    pub fn fiber_at(&self, theta: Angle) -> Result<FiberSlice> {
        if self.vertices.iter().any(|v| v.angle == theta) {
            return Err(Error::ThetaOnCriticalValue(theta.to_string()));
        }
        let edges: Vec<usize> = (0..self.edges.len()).filter(|&e| self.edge_crosses(e, theta)).collect();
        Ok(FiberSlice {
            genus: edges.iter().map(|&e| self.edges[e].genus as i64).sum(),
            chi_minus: edges.iter().map(|&e| self.edges[e].chi_minus()).sum(),
            components: edges.len(),
            edges,
        })
    }

    pub fn variations(&self) -> Variations {
        let samples: Vec<i64> = self
            .sample_angles()
            .into_iter()
            .map(|t| self.fiber_at(t).expect("sample avoids vertex angles").chi_minus)
            .collect();
        let n = samples.len();
        let cyclic: i64 = (0..n).map(|i| (samples[(i + 1) % n] - samples[i]).abs()).sum();
        let osc = match (samples.iter().max(), samples.iter().min()) {
            (Some(hi), Some(lo)) => hi - lo,
            _ => 0,
        };
        let nonbubbling =
            (0..self.vertices.len()).filter(|&v| self.vertices[v].kind.is_critical() && !self.is_bubbling(v)).count();
        Variations { var: cyclic / 2, osc, nonbubbling }
    }

    pub fn tau_chains(&self) -> (EdgeChain, EdgeChain) {
        (
            EdgeChain(self.edges.iter().map(|e| e.genus as i64).collect()),
            EdgeChain(self.edges.iter().map(|e| e.chi_minus()).collect()),
        )
    }
}

/// Maximal run of edges joined through regular markers. `tail`/`head` are
/// the critical (or otherwise non pass-through) endpoints; both are `None`
/// for a loop of markers only.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Strand {
    pub edges: Vec<usize>,
    pub tail: Option<usize>,
    pub head: Option<usize>,
}

impl Strand {
    /// Edge that carries the strand's marked point, if any.
    pub fn first(&self) -> usize {
        self.edges[0]
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Strands {
    pub list: Vec<Strand>,
    pub of_edge: Vec<usize>,
}

impl Strands {
    pub fn starting_at(&self, v: usize) -> Vec<usize> {
        (0..self.list.len()).filter(|&s| self.list[s].tail == Some(v)).collect()
    }

    pub fn ending_at(&self, v: usize) -> Vec<usize> {
        (0..self.list.len()).filter(|&s| self.list[s].head == Some(v)).collect()
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Issue {
    AngleCollision { first: String, second: String },
    SelfLoop { edge: String },
    DegreeSignature { vertex: String, kind: VertexKind, indegree: usize, outdegree: usize },
    GenusRule { vertex: String, expected: i64, found: i64 },
    BoundaryRule { vertex: String, expected: i64, found: i64 },
}

impl fmt::Display for Issue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Issue::AngleCollision { first, second } => write!(f, "angle-collision {first} {second}"),
            Issue::SelfLoop { edge } => write!(f, "self-loop {edge}"),
            Issue::DegreeSignature { vertex, kind, indegree, outdegree } => {
                write!(f, "degree-signature {vertex} index={} in={indegree} out={outdegree}", kind.as_str())
            }
            Issue::GenusRule { vertex, expected, found } => {
                write!(f, "genus-rule {vertex} expected={expected} found={found}")
            }
            Issue::BoundaryRule { vertex, expected, found } => {
                write!(f, "boundary-rule {vertex} expected={expected} found={found}")
            }
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Warning {
    /// Non-bubbling vertex on a loop whose critical vertices share one index.
    SameIndexLoop { vertex: String },
}

impl fmt::Display for Warning {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Warning::SameIndexLoop { vertex } => write!(f, "same-index-loop {vertex}"),
        }
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct ValidationReport {
    pub issues: Vec<Issue>,
    pub warnings: Vec<Warning>,
}

impl ValidationReport {
    pub fn is_valid(&self) -> bool {
        self.issues.is_empty()
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FiberSlice {
    pub edges: Vec<usize>,
    pub genus: i64,
    pub chi_minus: i64,
    pub components: usize,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Variations {
    pub var: i64,
    pub osc: i64,
    pub nonbubbling: usize,
}

/// Integer 1-chain, indexed by edge.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EdgeChain(pub Vec<i64>);

/// Integer 0-chain, indexed by vertex.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct VertexChain(pub Vec<i64>);

impl EdgeChain {
    pub fn l1(&self) -> i64 {
        self.0.iter().map(|x| x.abs()).sum()
    }

    /// Outgoing minus incoming values at each vertex.
    pub fn boundary(&self, g: &MorseGraph) -> VertexChain {
        let mut b = vec![0; g.vertices().len()];
        for (e, edge) in g.edges().iter().enumerate() {
            b[edge.tail] += self.0[e];
            b[edge.head] -= self.0[e];
        }
        VertexChain(b)
    }
}

impl VertexChain {
    pub fn l1(&self) -> i64 {
        self.0.iter().map(|x| x.abs()).sum()
    }
}

/// Boundary of `c` together with `‖c‖₁` and `‖∂c‖₁`.
pub fn boundary_and_norms(c: &EdgeChain, g: &MorseGraph) -> (VertexChain, i64, i64) {
    let b = c.boundary(g);
    let nb = b.l1();
    (b, c.l1(), nb)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures::{fibration_loop, theta, twister_graph};

    fn angle(p: i64, q: i64) -> Angle {
        Angle::new(p, q).unwrap()
    }

    #[test]
    fn chi_minus_table() {
        assert_eq!(chi_minus(0, 0), 0);
        assert_eq!(chi_minus(0, 1), 0);
        assert_eq!(chi_minus(1, 0), 0);
        assert_eq!(chi_minus(0, 2), 0);
        assert_eq!(chi_minus(2, 0), 2);
        assert_eq!(chi_minus(1, 1), 1);
        assert_eq!(chi_minus(0, 3), 1);
    }

    #[test]
    fn fixtures_validate() {
        for n in 0..4 {
            assert!(twister_graph(n, 0).validate().is_valid());
        }
        assert!(theta(1, 1).validate().is_valid());
        assert!(theta(2, 3).validate().is_valid());
        assert!(fibration_loop(0).validate().is_valid());
    }

    #[test]
    fn wrong_genus_on_twister_is_flagged_at_a() {
        let mut g = twister_graph(1, 0);
        let e = g.edge_index("e_ab").unwrap();
        g.edge_mut(e).genus = 3;
        let report = g.validate();
        assert!(report.issues.contains(&Issue::GenusRule { vertex: "a".into(), expected: 2, found: 3 }));
    }

    #[test]
    fn degree_and_collision_issues() {
        let mut g = MorseGraph::new("bad");
        let a = g.add_vertex("a", angle(1, 4), VertexKind::Index1).unwrap();
        let b = g.add_vertex("b", angle(1, 4), VertexKind::Index2).unwrap();
        g.add_edge("e", a, b, 1, 0).unwrap();
        let report = g.validate();
        assert!(matches!(report.issues[0], Issue::AngleCollision { .. }));
        assert_eq!(report.issues.len(), 3);
    }

    #[test]
    fn tau_chains_and_boundaries() {
        let g = twister_graph(2, 0);
        let (tg, tc) = g.tau_chains();
        assert_eq!(tg.0, vec![2, 3]);
        assert_eq!(tc.0, vec![2, 4]);
        let (b, _, nb) = boundary_and_norms(&tg, &g);
        assert_eq!(b.0, vec![1, -1]);
        assert_eq!(nb, 2);

        let t = theta(1, 1);
        let (_, tc) = t.tau_chains();
        assert_eq!(tc.0, vec![0, 0, 2]);
        let (b, _, nb) = boundary_and_norms(&tc, &t);
        assert_eq!(b.0, vec![2, -2]);
        assert_eq!(nb, 4);

        let (b, l, nb) = boundary_and_norms(&EdgeChain(vec![0, 0, 0]), &t);
        assert_eq!((b.0, l, nb), (vec![0, 0], 0, 0));

        let (tg, tc) = fibration_loop(0).tau_chains();
        assert_eq!((tg.0, tc.0), (vec![0], vec![0]));
    }

    #[test]
    fn fiber_slices() {
        let g = twister_graph(2, 0);
        let s = g.fiber_at(angle(1, 2)).unwrap();
        assert_eq!((s.components, s.genus, s.chi_minus), (1, 3, 4));
        let s = g.fiber_at(Angle::zero()).unwrap();
        assert_eq!((s.components, s.genus, s.chi_minus), (1, 2, 2));
        assert!(matches!(g.fiber_at(angle(1, 4)), Err(Error::ThetaOnCriticalValue(_))));

        let t = theta(1, 1);
        let s = t.fiber_at(angle(1, 2)).unwrap();
        assert_eq!(s.edges, vec![2]);
        assert_eq!(s.chi_minus, 2);
    }

    #[test]
    fn variation_examples() {
        let v = twister_graph(2, 0).variations();
        assert_eq!((v.var, v.osc, v.nonbubbling), (2, 2, 2));
        let v = theta(1, 1).variations();
        assert_eq!((v.var, v.osc), (2, 2));
        let v = fibration_loop(3).variations();
        assert_eq!((v.var, v.osc, v.nonbubbling), (0, 0, 0));
        // sphere edge makes both vertices bubbling
        let v = twister_graph(0, 0).variations();
        assert_eq!((v.var, v.osc, v.nonbubbling), (0, 0, 0));
        let v = MorseGraph::new("empty").variations();
        assert_eq!((v.var, v.osc, v.nonbubbling), (0, 0, 0));
    }

    #[test]
    fn strands_pass_through_markers() {
        let mut g = MorseGraph::new("m");
        let a = g.add_vertex("a", angle(1, 8), VertexKind::Index1).unwrap();
        let m = g.add_vertex("m", angle(3, 8), VertexKind::Regular).unwrap();
        let b = g.add_vertex("b", angle(5, 8), VertexKind::Index2).unwrap();
        g.add_edge("x", a, m, 2, 0).unwrap();
        g.add_edge("y", m, b, 2, 0).unwrap();
        g.add_edge("z", b, a, 1, 0).unwrap();
        assert!(g.validate().is_valid());
        let s = g.strands();
        assert_eq!(s.list.len(), 2);
        assert_eq!(s.list[0].edges, vec![0, 1]);
        assert_eq!((s.list[0].tail, s.list[0].head), (Some(a), Some(b)));

        let f = fibration_loop(1).strands();
        assert_eq!(f.list, vec![Strand { edges: vec![0], tail: None, head: None }]);
    }

    #[test]
    fn same_index_loops() {
        assert!(twister_graph(1, 0).same_index_loop_vertices().is_empty());
        assert_eq!(fibration_loop(1).same_index_loop_vertices(), vec![0]);
    }
}
