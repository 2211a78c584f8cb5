//! Random instances for property tests, acceptance runs and benchmarks.

use rand::seq::SliceRandom;
use rand::Rng;

use crate::angle::Angle;
use crate::curves::{CurveKind, CurveSystem};
use crate::graph::{MorseGraph, VertexKind};
use crate::harmonic::{check_tree_hypotheses, is_calabi};
use crate::lattice::LatticeProblem;

#[derive(Clone, Copy, Debug)]
pub struct SweepParams {
    pub max_vertices: usize,
    pub max_sheets: usize,
    pub max_genus: u32,
    /// Free events before the sweep is steered back to its start.
    pub free_events: usize,
    pub require_calabi: bool,
}

impl Default for SweepParams {
    fn default() -> Self {
        SweepParams { max_vertices: 20, max_sheets: 3, max_genus: 3, free_events: 8, require_calabi: false }
    }
}

#[derive(Clone, Copy)]
enum Event {
    Up(usize),
    Down(usize),
    Merge(usize, usize),
    Split(usize, u32),
}

#[derive(Clone, Copy)]
struct Sheet {
    /// Vertex the open edge leaves from; `None` while still on its starting slot.
    from: Option<usize>,
    slot: usize,
    genus: u32,
}

/// Sweeps the circle once: sheets of closed surfaces pick up or lose handles,
/// merge and split, and end where they started. The resulting graphs have no
/// boundary, satisfy every local rule and contain no single-index loops.
pub fn sweep_graph<R: Rng>(rng: &mut R, p: &SweepParams) -> MorseGraph {
    loop {
        if let Some(g) = sweep_attempt(rng, p) {
            let small = g.vertices().len() <= p.max_vertices;
            if small
                && g.validate().is_valid()
                && check_tree_hypotheses(&g).is_ok()
                && (!p.require_calabi || is_calabi(&g).0)
            {
                return g;
            }
        }
    }
}

fn sweep_attempt<R: Rng>(rng: &mut R, p: &SweepParams) -> Option<MorseGraph> {
    let n0 = rng.gen_range(1..=p.max_sheets);
    let initial: Vec<u32> = (0..n0).map(|_| rng.gen_range(0..=p.max_genus)).collect();
    let mut sheets: Vec<Sheet> =
        initial.iter().enumerate().map(|(i, &g)| Sheet { from: None, slot: i, genus: g }).collect();
    let mut touched = vec![false; n0];
    let mut events = Vec::new();

    // free phase
    for _ in 0..rng.gen_range(0..=p.free_events) {
        let n = sheets.len();
        let ev = match rng.gen_range(0..4) {
            0 => Event::Up(rng.gen_range(0..n)),
            1 => {
                let i = rng.gen_range(0..n);
                if sheets[i].genus == 0 {
                    continue;
                }
                Event::Down(i)
            }
            2 if n >= 2 => {
                let mut ix: Vec<usize> = (0..n).collect();
                ix.shuffle(rng);
                Event::Merge(ix[0], ix[1])
            }
            3 if n < p.max_sheets + 1 => {
                let i = rng.gen_range(0..n);
                Event::Split(i, rng.gen_range(0..=sheets[i].genus))
            }
            _ => continue,
        };
        apply(&mut sheets, &mut touched, &mut events, ev);
    }
    // every starting slot needs a vertex on it
    while let Some(i) = sheets.iter().position(|s| s.from.is_none()) {
        apply(&mut sheets, &mut touched, &mut events, Event::Up(i));
    }
    debug_assert!(touched.iter().all(|&t| t));
    while sheets.len() > n0 {
        let n = sheets.len();
        apply(&mut sheets, &mut touched, &mut events, Event::Merge(n - 2, n - 1));
    }
    while sheets.len() < n0 {
        let i = rng.gen_range(0..sheets.len());
        let g = rng.gen_range(0..=sheets[i].genus);
        apply(&mut sheets, &mut touched, &mut events, Event::Split(i, g));
    }
    // open sheets close onto the starting slots in a random order
    let mut order: Vec<usize> = (0..n0).collect();
    order.shuffle(rng);
    for (i, &slot) in order.iter().enumerate() {
        while sheets[i].genus < initial[slot] {
            apply(&mut sheets, &mut touched, &mut events, Event::Up(i));
        }
        while sheets[i].genus > initial[slot] {
            apply(&mut sheets, &mut touched, &mut events, Event::Down(i));
        }
    }
    build(&events, &initial, &order, p)
}

/// Records an event; the graph is assembled once all angles are known.
fn apply(sheets: &mut Vec<Sheet>, touched: &mut [bool], events: &mut Vec<(Event, Vec<Sheet>)>, ev: Event) {
    let v = events.len();
    let hit = |s: &Sheet| Sheet { from: Some(v), slot: s.slot, genus: s.genus };
    let before = sheets.clone();
    let mark = |touched: &mut [bool], s: &Sheet| {
        if s.from.is_none() {
            touched[s.slot] = true;
        }
    };
    match ev {
        Event::Up(i) => {
            mark(touched, &sheets[i]);
            sheets[i] = Sheet { genus: sheets[i].genus + 1, ..hit(&sheets[i]) };
        }
        Event::Down(i) => {
            mark(touched, &sheets[i]);
            sheets[i] = Sheet { genus: sheets[i].genus - 1, ..hit(&sheets[i]) };
        }
        Event::Merge(i, j) => {
            mark(touched, &sheets[i]);
            mark(touched, &sheets[j]);
            let g = sheets[i].genus + sheets[j].genus;
            let (lo, hi) = (i.min(j), i.max(j));
            sheets.remove(hi);
            sheets[lo] = Sheet { genus: g, ..hit(&sheets[lo]) };
        }
        Event::Split(i, g) => {
            mark(touched, &sheets[i]);
            let rest = sheets[i].genus - g;
            sheets[i] = Sheet { genus: g, ..hit(&sheets[i]) };
            let extra = Sheet { genus: rest, ..sheets[i] };
            sheets.push(extra);
        }
    }
    events.push((ev, before));
}

fn build(events: &[(Event, Vec<Sheet>)], initial: &[u32], order: &[usize], p: &SweepParams) -> Option<MorseGraph> {
    let t = events.len();
    if t == 0 || t > p.max_vertices {
        return None;
    }
    let mut g = MorseGraph::new("sweep");
    for (k, (ev, _)) in events.iter().enumerate() {
        let kind = match ev {
            Event::Up(_) | Event::Merge(..) => VertexKind::Index1,
            Event::Down(_) | Event::Split(..) => VertexKind::Index2,
        };
        let angle = Angle::new(2 * k as i64 + 1, 2 * t as i64).unwrap();
        g.add_vertex(format!("v{k}"), angle, kind).ok()?;
    }
    // first vertex met by each starting slot, and the edges whose tail is open
    let mut first = vec![None; initial.len()];
    let mut pending: Vec<(usize, usize, u32)> = Vec::new(); // (slot, head, genus)
    let mut n_edges = 0;
    let mut edge = |g: &mut MorseGraph, tail: usize, head: usize, genus: u32| {
        g.add_edge(format!("e{n_edges}"), tail, head, genus, 0).unwrap();
        n_edges += 1;
    };
    for (v, (ev, before)) in events.iter().enumerate() {
        let incoming: Vec<usize> = match *ev {
            Event::Up(i) | Event::Down(i) | Event::Split(i, _) => vec![i],
            Event::Merge(i, j) => vec![i, j],
        };
        for i in incoming {
            let s = before[i];
            match s.from {
                Some(u) => edge(&mut g, u, v, s.genus),
                None => {
                    first[s.slot] = Some(v);
                    pending.push((s.slot, v, s.genus));
                }
            }
        }
    }
    let last = &events.last()?.1;
    let mut finals = last.clone();
    // replay the last event to get the closing sheets
    {
        let mut touched = vec![false; initial.len()];
        let mut scratch = Vec::new();
        apply(&mut finals, &mut touched, &mut scratch, events.last()?.0);
        for s in &mut finals {
            if s.from == Some(0) {
                s.from = Some(t - 1);
            }
        }
    }
    for (i, &slot) in order.iter().enumerate() {
        let s = finals[i];
        let head = first[slot]?;
        let (_, _, genus) = pending.iter().find(|&&(sl, _, _)| sl == slot)?;
        if *genus != s.genus {
            return None;
        }
        edge(&mut g, s.from?, head, s.genus);
    }
    Some(g)
}

/// Arbitrary digraph on markers, at most `max_edges` edges; only its arcs matter.
pub fn random_digraph<R: Rng>(rng: &mut R, max_edges: usize) -> MorseGraph {
    let n = rng.gen_range(1..=6);
    let m = rng.gen_range(0..=max_edges);
    let mut g = MorseGraph::new("digraph");
    for v in 0..n {
        g.add_vertex(format!("v{v}"), Angle::new(v as i64, n as i64).unwrap(), VertexKind::Regular).unwrap();
    }
    for e in 0..m {
        g.add_edge(format!("e{e}"), rng.gen_range(0..n), rng.gen_range(0..n), 1, 0).unwrap();
    }
    g
}

/// Entries in `[-entry, entry]`, weights in `[0, 4]`. Half of the targets are
/// images of a small integer vector, the rest arbitrary.
pub fn random_lattice_problem<R: Rng>(rng: &mut R, max_cols: usize, entry: i64) -> LatticeProblem {
    let rows = rng.gen_range(1..=3);
    let cols = rng.gen_range(1..=max_cols);
    let matrix: Vec<Vec<i64>> = (0..rows).map(|_| (0..cols).map(|_| rng.gen_range(-entry..=entry)).collect()).collect();
    let weights: Vec<i64> = (0..cols).map(|_| rng.gen_range(0..=4)).collect();
    let target = if rng.gen_bool(0.5) {
        let k: Vec<i64> = (0..cols).map(|_| rng.gen_range(-2..=2)).collect();
        matrix.iter().map(|r| r.iter().zip(&k).map(|(a, b)| a * b).sum()).collect()
    } else {
        (0..rows).map(|_| rng.gen_range(-4..=4)).collect()
    };
    LatticeProblem::new(matrix, target, weights)
}

/// Curve systems built level by level, so the orientation cochain is always
/// a coboundary. Disk-bounding curves in the fiber only cut off leaf disks.
pub fn random_curve_system<R: Rng>(rng: &mut R) -> CurveSystem {
    let mut cs = CurveSystem::new("random");
    let fcomps = rng.gen_range(1..=2);
    let mut nc = 0;
    for f in 0..fcomps {
        let fname = format!("F{f}");
        for piece in 0..rng.gen_range(1..=2) {
            let levels = rng.gen_range(0..=4);
            let mut by_level: Vec<Vec<usize>> = Vec::new();
            for l in 0..=levels {
                let mut here = Vec::new();
                for i in 0..rng.gen_range(1..=3) {
                    let b = if rng.gen_bool(0.3) { rng.gen_range(1..=2) } else { 0 };
                    let r = cs
                        .add_region(format!("R{f}_{piece}_{l}_{i}"), rng.gen_range(-4..=0), b, fname.clone())
                        .unwrap();
                    here.push(r);
                }
                by_level.push(here);
            }
            let mut curve = |cs: &mut CurveSystem, rng: &mut R, from: usize, to: usize| {
                let arc = cs.regions[from].boundary_arcs > 0 && cs.regions[to].boundary_arcs > 0 && rng.gen_bool(0.5);
                let kind = if arc { CurveKind::Arc } else { CurveKind::Loop };
                cs.add_curve(format!("c{nc}"), from, to, kind, false, rng.gen_bool(0.2)).unwrap();
                nc += 1;
            };
            // spanning curves keep the piece connected
            for l in 1..=levels {
                for i in 0..by_level[l].len() {
                    let from = *by_level[l - 1].choose(rng).unwrap();
                    curve(&mut cs, rng, from, by_level[l][i]);
                }
                for i in 1..by_level[l - 1].len() {
                    let to = *by_level[l].choose(rng).unwrap();
                    curve(&mut cs, rng, by_level[l - 1][i], to);
                }
                for _ in 0..rng.gen_range(0..=2) {
                    let from = *by_level[l - 1].choose(rng).unwrap();
                    let to = *by_level[l].choose(rng).unwrap();
                    curve(&mut cs, rng, from, to);
                }
            }
            // leaf disks hanging off random regions
            for _ in 0..rng.gen_range(0..=2) {
                let l = rng.gen_range(0..=levels);
                let host = *by_level[l].choose(rng).unwrap();
                let d = cs.add_region(format!("D{f}_{piece}_{nc}"), 1, 0, fname.clone()).unwrap();
                let (from, to) = if rng.gen_bool(0.5) { (host, d) } else { (d, host) };
                cs.add_curve(format!("c{nc}"), from, to, CurveKind::Loop, true, rng.gen_bool(0.3)).unwrap();
                nc += 1;
            }
        }
    }
    cs
}
