//! Dual graphs of intersection patterns between a probe surface and a fiber:
//! potential, twist, resolution and the 2-surgery table.

use std::collections::{BTreeMap, BTreeSet, VecDeque};

use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum CurveKind {
    Loop,
    Arc,
}

impl CurveKind {
    pub fn as_str(self) -> &'static str {
        match self {
            CurveKind::Loop => "loop",
            CurveKind::Arc => "arc",
        }
    }
}

/// Component of the fiber cut along the curves.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Region {
    pub name: String,
    pub euler: i64,
    /// Boundary circles of the region that run partly along the fiber boundary.
    pub boundary_arcs: i64,
    pub fcomp: String,
}

/// Crossing the curve along the positive normal goes from `from` to `to`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Curve {
    pub name: String,
    pub from: usize,
    pub to: usize,
    pub kind: CurveKind,
    pub disk_in_f: bool,
    pub disk_in_s: bool,
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct CurveSystem {
    pub name: String,
    pub regions: Vec<Region>,
    pub curves: Vec<Curve>,
}

impl CurveSystem {
    pub fn new(name: impl Into<String>) -> Self {
        CurveSystem { name: name.into(), ..Default::default() }
    }

    pub fn region_index(&self, name: &str) -> Option<usize> {
        self.regions.iter().position(|r| r.name == name)
    }

    pub fn curve_index(&self, name: &str) -> Option<usize> {
        self.curves.iter().position(|c| c.name == name)
    }

    pub fn add_region(
        &mut self,
        name: impl Into<String>,
        euler: i64,
        boundary_arcs: i64,
        fcomp: impl Into<String>,
    ) -> Result<usize> {
        let name = name.into();
        if self.region_index(&name).is_some() {
            return Err(Error::InvalidCurveSystem(format!("duplicate region id {name}")));
        }
        if boundary_arcs < 0 {
            return Err(Error::InvalidCurveSystem(format!("region {name} has negative boundary_arcs")));
        }
        self.regions.push(Region { name, euler, boundary_arcs, fcomp: fcomp.into() });
        Ok(self.regions.len() - 1)
    }

    pub fn add_curve(
        &mut self,
        name: impl Into<String>,
        from: usize,
        to: usize,
        kind: CurveKind,
        disk_in_f: bool,
        disk_in_s: bool,
    ) -> Result<usize> {
        let name = name.into();
        if self.curve_index(&name).is_some() {
            return Err(Error::InvalidCurveSystem(format!("duplicate curve id {name}")));
        }
        let (Some(rf), Some(rt)) = (self.regions.get(from), self.regions.get(to)) else {
            return Err(Error::InvalidCurveSystem(format!("curve {name} references a missing region")));
        };
        if rf.fcomp != rt.fcomp {
            return Err(Error::InvalidCurveSystem(format!("curve {name} joins two fiber components")));
        }
        if kind == CurveKind::Arc && (rf.boundary_arcs == 0 || rt.boundary_arcs == 0) {
            return Err(Error::InvalidCurveSystem(format!("arc {name} ends on a region without boundary arcs")));
        }
        self.curves.push(Curve { name, from, to, kind, disk_in_f, disk_in_s });
        Ok(self.curves.len() - 1)
    }

    pub fn fcomps(&self) -> BTreeSet<&str> {
        self.regions.iter().map(|r| r.fcomp.as_str()).collect()
    }

    /// `χ` of the fiber: region Euler characteristics minus one per arc.
    pub fn f_euler(&self) -> i64 {
        let arcs = self.curves.iter().filter(|c| c.kind == CurveKind::Arc).count() as i64;
        self.regions.iter().map(|r| r.euler).sum::<i64>() - arcs
    }

    /// Boundary circles of region `r`: loop sides plus boundary-arc circles.
    pub fn region_degree(&self, r: usize) -> i64 {
        let loops = self
            .curves
            .iter()
            .filter(|c| c.kind == CurveKind::Loop)
            .map(|c| (c.from == r) as i64 + (c.to == r) as i64)
            .sum::<i64>();
        loops + self.regions[r].boundary_arcs
    }

    /// Region of positive genus: `d(U) < 2 − χ(U)`.
    pub fn has_handle(&self, r: usize) -> bool {
        self.region_degree(r) < 2 - self.regions[r].euler
    }
}

struct UnionFind(Vec<usize>);

impl UnionFind {
    fn new(n: usize) -> Self {
        UnionFind((0..n).collect())
    }

    fn find(&mut self, x: usize) -> usize {
        let mut r = x;
        while self.0[r] != r {
            r = self.0[r];
        }
        let mut y = x;
        while self.0[y] != r {
            let next = self.0[y];
            self.0[y] = r;
            y = next;
        }
        r
    }

    fn union(&mut self, a: usize, b: usize) {
        let (a, b) = (self.find(a), self.find(b));
        // smaller index stays the representative
        if a < b {
            self.0[b] = a;
        } else {
            self.0[a] = b;
        }
    }
}

/// Deletes the flagged curves and glues the regions across them. A removed
/// loop glues in an annulus (χ unchanged), a removed arc a band (χ − 1).
fn merge_across(cs: &CurveSystem, remove: &[bool]) -> CurveSystem {
    let n = cs.regions.len();
    let mut uf = UnionFind::new(n);
    for (c, curve) in cs.curves.iter().enumerate() {
        if remove[c] {
            uf.union(curve.from, curve.to);
        }
    }
    let mut euler = vec![0i64; n];
    let mut barcs = vec![0i64; n];
    let mut arcs_cut = vec![0i64; n];
    for r in 0..n {
        let root = uf.find(r);
        euler[root] += cs.regions[r].euler;
        barcs[root] += cs.regions[r].boundary_arcs;
    }
    for (c, curve) in cs.curves.iter().enumerate() {
        if remove[c] && curve.kind == CurveKind::Arc {
            arcs_cut[uf.find(curve.from)] += 1;
        }
    }
    let mut new_index = vec![usize::MAX; n];
    let mut out = CurveSystem::new(cs.name.clone());
    for r in 0..n {
        if uf.find(r) != r {
            continue;
        }
        new_index[r] = out.regions.len();
        let b = if barcs[r] > 0 { (barcs[r] - arcs_cut[r]).max(1) } else { 0 };
        out.regions.push(Region {
            name: cs.regions[r].name.clone(),
            euler: euler[r] - arcs_cut[r],
            boundary_arcs: b,
            fcomp: cs.regions[r].fcomp.clone(),
        });
    }
    for (c, curve) in cs.curves.iter().enumerate() {
        if !remove[c] {
            out.curves.push(Curve {
                from: new_index[uf.find(curve.from)],
                to: new_index[uf.find(curve.to)],
                ..curve.clone()
            });
        }
    }
    debug_assert_eq!(out.f_euler(), cs.f_euler());
    out
}

/// Integer potential with `u(to) = u(from) + 1` on every curve.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Potential {
    pub u: Vec<i64>,
}

/// Solves `c = δu` by breadth-first propagation and synchronizes: within a
/// fiber component every connected piece is shifted so that all pieces share
/// the same maximum, the width of the widest piece.
pub fn potential(cs: &CurveSystem) -> Result<Potential> {
    let n = cs.regions.len();
    let mut adj = vec![Vec::new(); n];
    for (c, curve) in cs.curves.iter().enumerate() {
        adj[curve.from].push((c, curve.to, 1));
        adj[curve.to].push((c, curve.from, -1));
    }
    let mut u: Vec<Option<i64>> = vec![None; n];
    let mut pieces: Vec<Vec<usize>> = Vec::new();
    for root in 0..n {
        if u[root].is_some() {
            continue;
        }
        u[root] = Some(0);
        let mut piece = vec![root];
        let mut queue = VecDeque::from([root]);
        while let Some(v) = queue.pop_front() {
            let uv = u[v].unwrap();
            for &(c, w, step) in &adj[v] {
                match u[w] {
                    None => {
                        u[w] = Some(uv + step);
                        piece.push(w);
                        queue.push_back(w);
                    }
                    Some(uw) if uw != uv + step => {
                        return Err(Error::CocycleViolation(cs.curves[c].name.clone()));
                    }
                    Some(_) => {}
                }
            }
        }
        pieces.push(piece);
    }
    let mut u: Vec<i64> = u.into_iter().map(|x| x.unwrap()).collect();
    let mut top: BTreeMap<&str, i64> = BTreeMap::new();
    let span = |p: &[usize], u: &[i64]| {
        let hi = p.iter().map(|&r| u[r]).max().unwrap();
        let lo = p.iter().map(|&r| u[r]).min().unwrap();
        (lo, hi)
    };
    for p in &pieces {
        let (lo, hi) = span(p, &u);
        let w = top.entry(cs.regions[p[0]].fcomp.as_str()).or_insert(0);
        *w = (*w).max(hi - lo);
    }
    for p in &pieces {
        let (_, hi) = span(p, &u);
        let shift = top[cs.regions[p[0]].fcomp.as_str()] - hi;
        for &r in p {
            u[r] += shift;
        }
    }
    Ok(Potential { u })
}

/// `ρ`: per fiber component, one less than the number of distinct values of
/// the synchronized potential; the maximum over components.
pub fn rho(cs: &CurveSystem) -> Result<i64> {
    let pot = potential(cs)?;
    let mut values: BTreeMap<&str, BTreeSet<i64>> = BTreeMap::new();
    for (r, region) in cs.regions.iter().enumerate() {
        values.entry(region.fcomp.as_str()).or_default().insert(pot.u[r]);
    }
    Ok(values.values().map(|s| s.len() as i64 - 1).max().unwrap_or(0))
}

/// Removes every curve bounding a disk in the fiber.
pub fn discard_disk_curves(cs: &CurveSystem) -> CurveSystem {
    let remove: Vec<bool> = cs.curves.iter().map(|c| c.disk_in_f).collect();
    merge_across(cs, &remove)
}

/// `(ρ, ρ°)`.
pub fn twist(cs: &CurveSystem) -> Result<(i64, i64)> {
    Ok((rho(cs)?, rho(&discard_disk_curves(cs))?))
}

/// One resolution pass: glue every top-level region to its neighbours one
/// level down, deleting the curves between them.
pub fn resolve_step(cs: &CurveSystem) -> Result<CurveSystem> {
    let cs = discard_disk_curves(cs);
    if rho(&cs)? == 0 {
        return Err(Error::NothingToResolve);
    }
    let pot = potential(&cs)?;
    let mut top: BTreeMap<&str, i64> = BTreeMap::new();
    for (r, region) in cs.regions.iter().enumerate() {
        let t = top.entry(region.fcomp.as_str()).or_insert(i64::MIN);
        *t = (*t).max(pot.u[r]);
    }
    let at_top = |r: usize| pot.u[r] == top[cs.regions[r].fcomp.as_str()];
    let remove: Vec<bool> = cs.curves.iter().map(|c| at_top(c.to) || at_top(c.from)).collect();
    Ok(merge_across(&cs, &remove))
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TraceStep {
    pub iteration: i64,
    /// `ρ°` after this pass.
    pub rho_circ: i64,
    /// `χ₋(Σ) + i·χ₋(F) + μ`-term.
    pub budget: i64,
    pub f_euler: i64,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ResolutionTrace {
    pub initial_rho_circ: i64,
    pub mu_term: i64,
    pub steps: Vec<TraceStep>,
    pub last: CurveSystem,
}

/// Resolves until no curve is left. The `μ` term is the exact defect when it
/// is known and `2ν°` otherwise.
pub fn resolve_all(cs: &CurveSystem, chi_sigma: i64, chi_f: i64) -> Result<ResolutionTrace> {
    let (_, k) = twist(cs)?;
    let mu = well_positioned_and_mu(cs);
    let mu_term = mu.mu_exact.unwrap_or(mu.mu_bound);
    let f_euler = cs.f_euler();
    let mut cur = discard_disk_curves(cs);
    let mut steps = Vec::new();
    for i in 1..=k {
        cur = resolve_step(&cur)?;
        let rho_circ = twist(&cur)?.1;
        assert_eq!(rho_circ, k - i, "each pass lowers the twist by one");
        assert_eq!(cur.f_euler(), f_euler, "Euler characteristic of the fiber is additive");
        steps.push(TraceStep {
            iteration: i,
            rho_circ,
            budget: chi_sigma + i * chi_f + mu_term,
            f_euler: cur.f_euler(),
        });
    }
    Ok(ResolutionTrace { initial_rho_circ: k, mu_term, steps, last: cur })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct MuReport {
    pub well_positioned: bool,
    /// Curves bounding a disk in the surface but not in the fiber.
    pub nu: i64,
    pub mu_bound: i64,
    pub mu_exact: Option<i64>,
}

pub fn well_positioned_and_mu(cs: &CurveSystem) -> MuReport {
    let rest = discard_disk_curves(cs);
    let well_positioned = rest.curves.iter().all(|c| !c.disk_in_s);
    let nu = cs.curves.iter().filter(|c| c.disk_in_s && !c.disk_in_f).count() as i64;
    let all_handles = (0..rest.regions.len()).all(|r| rest.has_handle(r));
    let mu_exact = (well_positioned || all_handles).then_some(0);
    MuReport { well_positioned, nu, mu_bound: 2 * nu, mu_exact }
}

/// Joins two regions on the same level by a band. `ρ` is unchanged, and so is
/// `ρ°` as long as neither region is a disk cut off by a disk-bounding curve.
pub fn canal_merge(cs: &CurveSystem, a: usize, b: usize) -> Result<CurveSystem> {
    let pot = potential(cs)?;
    let (ra, rb) = (&cs.regions[a], &cs.regions[b]);
    if a == b || ra.fcomp != rb.fcomp || pot.u[a] != pot.u[b] {
        return Err(Error::LevelMismatch(ra.name.clone(), rb.name.clone()));
    }
    let mut out = CurveSystem::new(cs.name.clone());
    let (keep, gone) = (a.min(b), a.max(b));
    let remap = |r: usize| match r.cmp(&gone) {
        std::cmp::Ordering::Less => r,
        std::cmp::Ordering::Equal => keep,
        std::cmp::Ordering::Greater => r - 1,
    };
    for (r, region) in cs.regions.iter().enumerate() {
        if r == gone {
            continue;
        }
        let mut region = region.clone();
        if r == keep {
            region.euler = ra.euler + rb.euler - 1;
            region.boundary_arcs = ra.boundary_arcs + rb.boundary_arcs;
        }
        out.regions.push(region);
    }
    for c in &cs.curves {
        out.curves.push(Curve { from: remap(c.from), to: remap(c.to), ..c.clone() });
    }
    Ok(out)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum SurgeryCase {
    Nullhomotopic,
    Separating,
    Nonseparating,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum SurfaceType {
    /// Sphere for loops, disk for arcs.
    SphereLike,
    /// Torus for loops, annulus for arcs.
    TorusLike,
    General,
}

/// `(Δg, Δχ, Δχ₋)` of cutting along a loop (filling both sides with disks)
/// or along an arc.
pub fn surgery_effect(kind: CurveKind, case: SurgeryCase, surface: SurfaceType) -> Result<(i64, i64, i64)> {
    use CurveKind::*;
    use SurfaceType::*;
    use SurgeryCase::*;
    let row = match (kind, case, surface) {
        (Loop, Nullhomotopic, _) => (0, 2, 0),
        (Loop, Separating, General) => (0, 2, -2),
        (Loop, Nonseparating, TorusLike) => (-1, 2, 0),
        (Loop, Nonseparating, General) => (-1, 2, -2),
        (Arc, Nullhomotopic, _) => (0, 1, 0),
        (Arc, Separating, General) => (0, 1, -1),
        (Arc, Nonseparating, TorusLike) => (-1, 1, 0),
        (Arc, Nonseparating, General) => (-1, 1, -1),
        _ => {
            return Err(Error::InvalidCase(format!("{} {:?} on {:?}", kind.as_str(), case, surface)));
        }
    };
    Ok(row)
}
