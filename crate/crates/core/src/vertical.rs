//! Vertical classes, their reduction to attractors, the vertical semi-norm
//! and the twist-dependent lower bounds built from it.

use std::collections::VecDeque;

use num_rational::Ratio;

use crate::angle::Angle;
use crate::error::{Error, Result};
use crate::graph::MorseGraph;
use crate::harmonic::{check_tree_hypotheses, marked_points, strand_mark, MarkKind};
use crate::lattice::{self, BoxPolicy, LatticeProblem};

/// Closed edge walk; `(edge, +1)` runs along the edge, `(edge, -1)` against it.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Cycle(pub Vec<(usize, i8)>);

#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct CycleBasis {
    pub cycles: Vec<Cycle>,
}

impl CycleBasis {
    pub fn len(&self) -> usize {
        self.cycles.len()
    }

    pub fn is_empty(&self) -> bool {
        self.cycles.is_empty()
    }
}

/// Fundamental cycles of a breadth-first spanning forest, one per non-tree
/// edge. Roots and neighbours are taken in id order.
pub fn cycle_basis(g: &MorseGraph) -> CycleBasis {
    let n = g.vertices().len();
    let mut incident = vec![Vec::new(); n];
    for (e, edge) in g.edges().iter().enumerate() {
        incident[edge.tail].push(e);
        if edge.head != edge.tail {
            incident[edge.head].push(e);
        }
    }
    // parent edge and depth per vertex
    let mut parent: Vec<Option<usize>> = vec![None; n];
    let mut depth = vec![usize::MAX; n];
    let mut tree_edge = vec![false; g.edges().len()];
    for root in 0..n {
        if depth[root] != usize::MAX {
            continue;
        }
        depth[root] = 0;
        let mut queue = VecDeque::from([root]);
        while let Some(v) = queue.pop_front() {
            for &e in &incident[v] {
                let edge = g.edge(e);
                let w = if edge.tail == v { edge.head } else { edge.tail };
                if depth[w] == usize::MAX {
                    depth[w] = depth[v] + 1;
                    parent[w] = Some(e);
                    tree_edge[e] = true;
                    queue.push_back(w);
                }
            }
        }
    }
    // one step towards the root: (edge, sign of moving child -> parent), new vertex
    let up = |v: usize| -> ((usize, i8), usize) {
        let e = parent[v].expect("non-root vertex");
        let edge = g.edge(e);
        if edge.tail == v {
            ((e, 1), edge.head)
        } else {
            ((e, -1), edge.tail)
        }
    };
    let mut cycles = Vec::new();
    for (e, edge) in g.edges().iter().enumerate() {
        if tree_edge[e] {
            continue;
        }
        let mut walk = vec![(e, 1)];
        let (mut a, mut b) = (edge.head, edge.tail);
        let mut from_tail = Vec::new();
        while a != b {
            if depth[a] >= depth[b] {
                let (step, next) = up(a);
                walk.push(step);
                a = next;
            } else {
                let ((f, s), next) = up(b);
                from_tail.push((f, -s));
                b = next;
            }
        }
        walk.extend(from_tail.into_iter().rev());
        cycles.push(Cycle(walk));
    }
    CycleBasis { cycles }
}

/// Entry `(k, j)`: signed number of traversals of `columns[j]` by cycle `k`.
pub fn lattice_matrix(g: &MorseGraph, basis: &CycleBasis, columns: &[usize]) -> Vec<Vec<i64>> {
    let mut pos = vec![None; g.edges().len()];
    for (j, &e) in columns.iter().enumerate() {
        pos[e] = Some(j);
    }
    basis
        .cycles
        .iter()
        .map(|c| {
            let mut row = vec![0; columns.len()];
            for &(e, s) in &c.0 {
                if let Some(j) = pos[e] {
                    row[j] += s as i64;
                }
            }
            row
        })
        .collect()
}

/// Integer combination of edge fiber families, stored densely by edge.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct VerticalClass(pub Vec<i64>);

impl VerticalClass {
    pub fn zero(g: &MorseGraph) -> Self {
        VerticalClass(vec![0; g.edges().len()])
    }

    pub fn from_edges(g: &MorseGraph, pairs: &[(usize, i64)]) -> Self {
        let mut c = Self::zero(g);
        for &(e, w) in pairs {
            c.0[e] += w;
        }
        c
    }

    /// Parses `e3=1,e1=-2`. Repeated edges add up; the empty string is zero.
    pub fn parse(g: &MorseGraph, spec: &str) -> Result<Self> {
        let mut c = Self::zero(g);
        for item in spec.split(',').map(str::trim).filter(|s| !s.is_empty()) {
            let (name, w) = item
                .split_once('=')
                .ok_or_else(|| Error::parse(0, format!("class entry {item:?} is not edge=weight")))?;
            let e = g.find_edge(name.trim())?;
            let w: i64 =
                w.trim().parse().map_err(|_| Error::parse(0, format!("bad weight in class entry {item:?}")))?;
            c.0[e] += w;
        }
        Ok(c)
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(|&x| x == 0)
    }

    pub fn add(&self, other: &Self) -> Self {
        VerticalClass(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect())
    }

    pub fn scale(&self, k: i64) -> Self {
        VerticalClass(self.0.iter().map(|a| a * k).collect())
    }

    pub fn support(&self) -> Vec<(usize, i64)> {
        self.0.iter().enumerate().filter(|(_, &w)| w != 0).map(|(e, &w)| (e, w)).collect()
    }

    pub fn format(&self, g: &MorseGraph) -> String {
        let items: Vec<String> = self.support().iter().map(|&(e, w)| format!("{}={w}", g.edge(e).name)).collect();
        items.join(",")
    }
}

pub fn intersection_vector(g: &MorseGraph, c: &VerticalClass, basis: &CycleBasis) -> Vec<i64> {
    let all: Vec<usize> = (0..g.edges().len()).collect();
    lattice_matrix(g, basis, &all).iter().map(|row| row.iter().zip(&c.0).map(|(a, w)| a * w).sum()).collect()
}

/// Integer weights on the attractor edges of a graph.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AttractorVector {
    pub attractors: Vec<usize>,
    pub kappa: Vec<i64>,
}

impl AttractorVector {
    /// `Σ |κ(a)| χ₋(F_a)`.
    pub fn norm(&self, g: &MorseGraph) -> i64 {
        self.attractors.iter().zip(&self.kappa).map(|(&a, k)| k.abs() * g.edge(a).chi_minus()).sum()
    }

    pub fn to_class(&self, g: &MorseGraph) -> VerticalClass {
        let pairs: Vec<(usize, i64)> = self.attractors.iter().copied().zip(self.kappa.iter().copied()).collect();
        VerticalClass::from_edges(g, &pairs)
    }

    pub fn nonzero(&self) -> Vec<(usize, i64)> {
        self.attractors.iter().copied().zip(self.kappa.iter().copied()).filter(|&(_, k)| k != 0).collect()
    }
}

/// Pushes every edge weight to the first attractors met: forward through
/// index-2 heads, backward through index-1 tails.
pub fn reduce_to_attractors(g: &MorseGraph, c: &VerticalClass) -> Result<AttractorVector> {
    check_tree_hypotheses(g)?;
    let st = g.strands();
    let attractors = marked_points(g).attractors;
    let col = |e: usize| attractors.binary_search(&e).ok();
    let n_att = attractors.len();

    enum State {
        Todo,
        Busy,
        Done(Vec<i64>),
    }
    let mut memo: Vec<State> = st.list.iter().map(|_| State::Todo).collect();

    fn visit(
        g: &MorseGraph,
        st: &crate::graph::Strands,
        s: usize,
        memo: &mut Vec<State>,
        col: &dyn Fn(usize) -> Option<usize>,
        n_att: usize,
    ) -> Result<Vec<i64>> {
        match &memo[s] {
            State::Done(v) => return Ok(v.clone()),
            State::Busy => {
                return Err(Error::TreePropertyViolation(format!(
                    "reduction of {} runs into a cycle",
                    g.edge(st.list[s].first()).name
                )))
            }
            State::Todo => {}
        }
        memo[s] = State::Busy;
        let strand = &st.list[s];
        let mut out = vec![0; n_att];
        if strand_mark(g, strand) == Some(MarkKind::Attractor) {
            out[col(strand.first()).expect("attractor column")] = 1;
        } else {
            let kind = |v: Option<usize>| v.map(|v| g.vertex(v).kind);
            let next = if kind(strand.head) == Some(crate::graph::VertexKind::Index2) {
                st.starting_at(strand.head.unwrap())
            } else if kind(strand.tail) == Some(crate::graph::VertexKind::Index1) {
                st.ending_at(strand.tail.unwrap())
            } else {
                return Err(Error::TreePropertyViolation(format!(
                    "edge {} reaches no attractor",
                    g.edge(strand.first()).name
                )));
            };
            for t in next {
                for (o, x) in out.iter_mut().zip(visit(g, st, t, memo, col, n_att)?) {
                    *o += x;
                }
            }
        }
        memo[s] = State::Done(out.clone());
        Ok(out)
    }

    let mut kappa = vec![0i64; n_att];
    for (e, &w) in c.0.iter().enumerate() {
        if w == 0 {
            continue;
        }
        let v = visit(g, &st, st.of_edge[e], &mut memo, &col, n_att)?;
        for (k, x) in kappa.iter_mut().zip(v) {
            *k = x.checked_mul(w).and_then(|y| k.checked_add(y)).ok_or(Error::Overflow)?;
        }
    }
    Ok(AttractorVector { attractors, kappa })
}

/// The system `{κ ∈ ℤ[A] : ∫_C κ = ∫_C c}` over the fundamental cycles.
pub fn lattice_problem(g: &MorseGraph, c: &VerticalClass) -> (LatticeProblem, Vec<usize>) {
    let basis = cycle_basis(g);
    let attractors = marked_points(g).attractors;
    let matrix = lattice_matrix(g, &basis, &attractors);
    let target = intersection_vector(g, c, &basis);
    let weights = attractors.iter().map(|&a| g.edge(a).chi_minus()).collect();
    (LatticeProblem::new(matrix, target, weights), attractors)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NormResult {
    pub value: i64,
    pub kappa: AttractorVector,
    pub box_used: i64,
    pub box_too_small: bool,
}

/// Vertical norm with its minimizer. The reduction to attractors seeds the
/// search when the graph admits it.
pub fn vertical_norm_with(g: &MorseGraph, c: &VerticalClass, policy: BoxPolicy) -> Result<NormResult> {
    let (p, attractors) = lattice_problem(g, c);
    let seed = reduce_to_attractors(g, c).ok().map(|a| a.kappa);
    let r = lattice::minimize_adaptive(&p, policy, seed.as_deref())?;
    Ok(NormResult {
        value: r.solution.value,
        kappa: AttractorVector { attractors, kappa: r.solution.kappa },
        box_used: r.box_used,
        box_too_small: r.box_too_small,
    })
}

pub fn vertical_norm(g: &MorseGraph, c: &VerticalClass) -> Result<i64> {
    vertical_norm_with(g, c, BoxPolicy::default()).map(|r| r.value)
}

fn class_on(g: &MorseGraph, edges: &[usize]) -> VerticalClass {
    let pairs: Vec<(usize, i64)> = edges.iter().map(|&e| (e, 1)).collect();
    VerticalClass::from_edges(g, &pairs)
}

/// `[F_R]`: one copy of every repeller component.
pub fn repeller_class(g: &MorseGraph) -> VerticalClass {
    class_on(g, &marked_points(g).repellers)
}

/// `[F_A]`: one copy of every attractor component.
pub fn attractor_class(g: &MorseGraph) -> VerticalClass {
    class_on(g, &marked_points(g).attractors)
}

/// Class of the fiber over a regular value.
pub fn fiber_class(g: &MorseGraph, theta: Angle) -> Result<VerticalClass> {
    Ok(class_on(g, &g.fiber_at(theta)?.edges))
}

/// `χ₋` summed over a set of edges.
pub fn chi_minus_of(g: &MorseGraph, edges: &[usize]) -> i64 {
    edges.iter().map(|&e| g.edge(e).chi_minus()).sum()
}

/// `χ₋(F_R) − ‖[F_A]‖`.
pub fn var_capital(g: &MorseGraph) -> Result<i64> {
    let m = marked_points(g);
    Ok(chi_minus_of(g, &m.repellers) - vertical_norm(g, &attractor_class(g))?)
}

/// Intersection vector positively proportional to that of `[F_R]`.
pub fn is_balanced(g: &MorseGraph, c: &VerticalClass) -> bool {
    let basis = cycle_basis(g);
    let v = intersection_vector(g, c, &basis);
    let w = intersection_vector(g, &repeller_class(g), &basis);
    let zero = |x: &[i64]| x.iter().all(|&a| a == 0);
    match (zero(&v), zero(&w)) {
        (true, true) => true,
        (false, false) => {
            let dot: i128 = v.iter().zip(&w).map(|(&a, &b)| a as i128 * b as i128).sum();
            let parallel =
                (0..v.len()).all(|i| (0..v.len()).all(|j| v[i] as i128 * w[j] as i128 == v[j] as i128 * w[i] as i128));
            parallel && dot > 0
        }
        _ => false,
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ThurstonBound {
    /// Floored at 0.
    pub value: i64,
    pub balanced: bool,
    /// Set when the class is not balanced and the per-repeller form was used.
    pub fallback: bool,
}

/// Lower bound on `χ₋` of any surface in class `c` with twist `rho` and
/// sphere/disk defect `mu` against the repeller components.
pub fn thurston_lower_bound(g: &MorseGraph, c: &VerticalClass, rho: i64, mu: i64) -> Result<ThurstonBound> {
    let balanced = is_balanced(g, c);
    let raw = if balanced {
        vertical_norm(g, c)? - rho * var_capital(g)? - mu
    } else {
        let m = marked_points(g);
        let twisted: Vec<(usize, i64)> = m.repellers.iter().map(|&r| (r, rho)).collect();
        per_repeller_rhs(g, c, &twisted, mu)?
    };
    Ok(ThurstonBound { value: raw.max(0), balanced, fallback: !balanced })
}

fn per_repeller_rhs(g: &MorseGraph, c: &VerticalClass, rho: &[(usize, i64)], mu: i64) -> Result<i64> {
    let shifted = c.add(&VerticalClass::from_edges(g, rho));
    let spent: i64 = rho.iter().map(|&(r, k)| k * g.edge(r).chi_minus()).sum();
    Ok(vertical_norm(g, &shifted)? - spent - mu)
}

/// `(‖c‖ − thurston_value) / Var`.
pub fn rho_lower_bound(g: &MorseGraph, c: &VerticalClass, thurston_value: i64) -> Result<Ratio<i64>> {
    let var = var_capital(g)?;
    if var == 0 {
        return Err(Error::ZeroVariation);
    }
    Ok(Ratio::new(vertical_norm(g, c)? - thurston_value, var))
}

/// Height after `k`-fold winding of `q` turns from an initial height `l`.
pub fn height_bounds(l: i64, k: i64, q: i64, clockwise: bool) -> i64 {
    if clockwise {
        l + k * q
    } else {
        l + 2 * k * q
    }
}

/// Twist data of a probe surface against the repeller components.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct TwistData {
    /// `(repeller edge, ρ°_r)`; repellers not listed have twist 0.
    pub per_repeller: Vec<(usize, i64)>,
    pub mu: i64,
    /// Breadth; ρ° is used when absent.
    pub breadth: Option<i64>,
    /// Height; ρ° and ρ° + 1 are both reported when absent.
    pub height: Option<i64>,
}

impl TwistData {
    pub fn uniform(g: &MorseGraph, rho: i64, mu: i64) -> Self {
        TwistData {
            per_repeller: marked_points(g).repellers.into_iter().map(|r| (r, rho)).collect(),
            mu,
            breadth: None,
            height: None,
        }
    }

    /// `ρ°(Σ, F_R)`, the maximum over repellers.
    pub fn rho(&self) -> i64 {
        self.per_repeller.iter().map(|&(_, k)| k).max().unwrap_or(0)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BoundLine {
    pub name: String,
    /// Right-hand side, not floored.
    pub value: i64,
    /// Hypotheses of the inequality that the inputs do not meet.
    pub unmet: Vec<String>,
}

/// Whether repeller `r`'s component is a whole fiber: some regular value
/// inside its arc crosses no other edge.
pub fn repeller_is_fiber(g: &MorseGraph, r: usize) -> bool {
    g.sample_angles()
        .into_iter()
        .filter(|&t| g.edge_crosses(r, t))
        .any(|t| g.fiber_at(t).map(|s| s.edges == [r]).unwrap_or(false))
}

/// Every lower bound on `χ₋(Σ)` available from the twist data, with the
/// hypotheses each one needs that the inputs do not satisfy.
pub fn bound_suite(g: &MorseGraph, c: &VerticalClass, data: &TwistData) -> Result<Vec<BoundLine>> {
    let m = marked_points(g);
    let norm = vertical_norm(g, c)?;
    let var = var_capital(g)?;
    let rho = data.rho();
    let mut general = Vec::new();
    if (0..g.vertices().len()).any(|v| g.vertex(v).kind.is_critical() && g.is_bubbling(v)) {
        general.push("no bubbling vertices".to_string());
    }
    let mut balanced = general.clone();
    if !is_balanced(g, c) {
        balanced.push("class is balanced".into());
    }
    let mut positioned = balanced.clone();
    if data.mu != 0 {
        positioned.push("well-positioned (mu = 0)".into());
    }
    let mut fibers = positioned.clone();
    if !m.repellers.iter().all(|&r| repeller_is_fiber(g, r)) {
        fibers.push("every repeller component is a fiber".into());
    }

    let line =
        |name: &str, value: i64, unmet: &Vec<String>| BoundLine { name: name.into(), value, unmet: unmet.clone() };
    let mut out = vec![
        line("per_repeller", per_repeller_rhs(g, c, &data.per_repeller, data.mu)?, &general),
        line("balanced_twist", norm - rho * var - data.mu, &balanced),
    ];
    let b = data.breadth.unwrap_or(rho);
    out.push(line("breadth", norm - b * var, &positioned));
    out.push(line("breadth_thurston", norm - b * var, &positioned));
    let heights = match data.height {
        Some(h) => vec![h],
        None => vec![rho, rho + 1],
    };
    for h in heights {
        out.push(line(&format!("height[h={h}]"), norm - h * var, &positioned));
        out.push(line(&format!("height_thurston[h={h}]"), norm - h * var, &positioned));
    }
    let excess: i64 = m.repellers.iter().map(|&r| g.edge(r).chi_minus() - norm).sum();
    out.push(line("fiber_repellers", norm - rho * excess, &fibers));
    out.push(line("fiber_repellers_thurston", norm - rho * excess, &fibers));
    Ok(out)
}
