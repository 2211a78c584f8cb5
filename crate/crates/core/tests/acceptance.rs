//! Acceptance suite: one PASS/FAIL line per criterion, with the checks done
//! against oracles written here rather than the library's own helpers.

use std::collections::{BTreeMap, BTreeSet, VecDeque};
use std::process::ExitCode;
use std::time::{Duration, Instant};

use fibergraph::curves::{discard_disk_curves, resolve_all, resolve_step, surgery_effect, SurfaceType, SurgeryCase};
use fibergraph::fixtures::{disjoint_union, theta};
use fibergraph::harmonic::{all_trees, edge_mark, is_calabi, loop_integral, marked_points, Direction, Part, Segment};
use fibergraph::lattice::{enumerate_box, minimize_l1, minimize_l1_with, ZeroWeights};
use fibergraph::moves::{attach_handle, twister};
use fibergraph::random::{random_curve_system, random_digraph, random_lattice_problem, sweep_graph, SweepParams};
use fibergraph::tangency::{region_check, signs_agree, TangencyData};
use fibergraph::vertical::{cycle_basis, fiber_class, vertical_norm};
use fibergraph::{Angle, CurveKind, CurveSystem, Error, MarkKind, MorseGraph, Rational, VertexKind};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

type Outcome = Result<String, String>;
type Criterion = (&'static str, fn() -> Outcome);

macro_rules! ensure {
    ($cond:expr, $($fmt:tt)+) => {
        if !$cond {
            return Err(format!($($fmt)+));
        }
    };
}

fn graphs(n: usize, seed: u64, calabi: bool) -> Vec<MorseGraph> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let p = SweepParams { require_calabi: calabi, ..SweepParams::default() };
    (0..n).map(|_| sweep_graph(&mut rng, &p)).collect()
}

fn frac(r: Rational) -> Rational {
    r - r.floor()
}

/// Counterclockwise arc length from `a` to `b`, a full turn when they agree.
fn arc(a: Angle, b: Angle) -> Rational {
    let d = frac(b.ratio() - a.ratio());
    if d == Rational::from_integer(0) {
        Rational::from_integer(1)
    } else {
        d
    }
}

fn crosses(g: &MorseGraph, e: usize, theta: Rational) -> bool {
    let edge = g.edge(e);
    let t = g.vertex(edge.tail).angle;
    let d = frac(theta - t.ratio());
    d > Rational::from_integer(0) && d < arc(t, g.vertex(edge.head).angle)
}

/// Half the cyclic sum of fiber-χ₋ jumps, sampled between consecutive vertex angles.
fn oracle_var(g: &MorseGraph) -> Result<i64, String> {
    let mut angles: Vec<Rational> = g.vertices().iter().map(|v| v.angle.ratio()).collect();
    angles.sort();
    angles.dedup();
    let n = angles.len();
    let samples: Vec<i64> = (0..n)
        .map(|i| {
            let next = if i + 1 < n { angles[i + 1] } else { angles[0] + 1 };
            let theta = (angles[i] + next) / 2;
            (0..g.edges().len()).filter(|&e| crosses(g, e, theta)).map(|e| g.edge(e).chi_minus()).sum()
        })
        .collect();
    let total: i64 = (0..n).map(|i| (samples[(i + 1) % n] - samples[i]).abs()).sum();
    ensure!(total % 2 == 0, "odd cyclic jump sum {total}");
    Ok(total / 2)
}

/// Marks found by walking each edge out to the nearest critical vertices;
/// the mark sits on the first edge of a run through markers.
fn oracle_marks(g: &MorseGraph) -> (BTreeSet<usize>, BTreeSet<usize>) {
    let (mut att, mut rep) = (BTreeSet::new(), BTreeSet::new());
    let pass =
        |v: usize| g.vertex(v).kind == VertexKind::Regular && g.in_edges(v).len() == 1 && g.out_edges(v).len() == 1;
    for e in 0..g.edges().len() {
        let tail = g.edge(e).tail;
        if pass(tail) {
            continue;
        }
        let mut head = g.edge(e).head;
        let mut steps = 0;
        while pass(head) && steps <= g.edges().len() {
            head = g.edge(g.out_edges(head)[0]).head;
            steps += 1;
        }
        match (g.vertex(tail).kind, g.vertex(head).kind) {
            (VertexKind::Index1, VertexKind::Index2) => {
                rep.insert(e);
            }
            (VertexKind::Index2, VertexKind::Index1) => {
                att.insert(e);
            }
            _ => {}
        }
    }
    (att, rep)
}

fn bubbling(g: &MorseGraph, v: usize) -> bool {
    g.edges().iter().any(|e| (e.tail == v || e.head == v) && e.genus == 0 && e.boundary <= 1)
}

fn c1_var_identity() -> Outcome {
    let t = Instant::now();
    let gs = graphs(200, 101, false);
    let (mut max_var, mut max_v, mut with_bubbles) = (0, 0, 0);
    for (i, g) in gs.iter().enumerate() {
        max_v = max_v.max(g.vertices().len());
        with_bubbles += (0..g.vertices().len()).any(|v| bubbling(g, v)) as usize;
        ensure!(g.vertices().len() <= 20, "graph {i} has {} vertices", g.vertices().len());
        let var = oracle_var(g)?;
        let (att, rep) = oracle_marks(g);
        let fr: i64 = rep.iter().map(|&e| g.edge(e).chi_minus()).sum();
        let fa: i64 = att.iter().map(|&e| g.edge(e).chi_minus()).sum();
        let nb = (0..g.vertices().len()).filter(|&v| g.vertex(v).kind != VertexKind::Regular && !bubbling(g, v)).count()
            as i64;
        let lib = g.variations();
        ensure!(var == fr - fa && var == nb, "graph {i}: var={var} FR-FA={} nonbubbling={nb}", fr - fa);
        ensure!(
            lib.var == var && lib.nonbubbling as i64 == nb,
            "graph {i}: library var {} differs from {var}",
            lib.var
        );
        max_var = max_var.max(var);
    }
    let el = t.elapsed();
    ensure!(el < Duration::from_secs(5), "took {el:?}");
    Ok(format!(
        "200 graphs (up to {max_v} vertices, {with_bubbles} with bubbling vertices), max var {max_var}, {:.2}s",
        el.as_secs_f64()
    ))
}

fn c2_integrals() -> Outcome {
    let gs = graphs(200, 101, false);
    let mut cycles = 0;
    for (i, g) in gs.iter().enumerate() {
        let (att, rep) = oracle_marks(g);
        for c in cycle_basis(g).cycles {
            let own = |set: &BTreeSet<usize>| {
                c.0.iter().filter(|(e, _)| set.contains(e)).map(|&(_, s)| s as i64).sum::<i64>()
            };
            let (a, r) = (own(&att), own(&rep));
            let la = loop_integral(g, &c.0, MarkKind::Attractor).map_err(|e| e.to_string())?;
            let lr = loop_integral(g, &c.0, MarkKind::Repeller).map_err(|e| e.to_string())?;
            ensure!(a == r, "graph {i}: cycle {:?} has A={a} R={r}", c.0);
            ensure!((la, lr) == (a, r), "graph {i}: library integrals ({la},{lr}) vs ({a},{r})");
            cycles += 1;
        }
    }
    Ok(format!("{cycles} fundamental cycles"))
}

fn c3_tree_cover() -> Outcome {
    let mut gs = graphs(200, 101, false);
    gs.retain(|g| is_calabi(g).0);
    let from_mixed = gs.len();
    gs.extend(graphs(200, 303, true));
    let mut n_trees = 0;
    for (i, g) in gs.iter().enumerate() {
        let (att, rep) = oracle_marks(g);
        let trees = all_trees(g).map_err(|e| format!("graph {i}: {e}"))?;
        ensure!(trees.len() == 2 * rep.len(), "graph {i}: {} trees for {} repellers", trees.len(), rep.len());
        let mut covered = BTreeSet::new();
        for t in &trees {
            ensure!(rep.contains(&t.root), "graph {i}: root {} is not a repeller", t.root);
            for b in &t.branches {
                ensure!(b.first() == Some(&t.root), "graph {i}: branch does not start at the root");
                let leaf = *b.last().unwrap();
                ensure!(b.len() >= 2 && att.contains(&leaf), "graph {i}: branch ends at non-attractor {leaf}");
                ensure!(
                    b[1..b.len() - 1].iter().all(|e| !att.contains(e) && !rep.contains(e)),
                    "graph {i}: marked edge inside a branch"
                );
                let mut seen = BTreeSet::new();
                for w in b.windows(2) {
                    let (x, y) = (g.edge(w[0]), g.edge(w[1]));
                    let joint = match t.direction {
                        Direction::Forward => x.head == y.tail,
                        Direction::Backward => x.tail == y.head,
                    };
                    ensure!(joint, "graph {i}: branch is not a directed path");
                    let v = if t.direction == Direction::Forward { x.head } else { x.tail };
                    ensure!(seen.insert(v), "graph {i}: branch revisits vertex {v}");
                }
            }
            ensure!(t.leaves.iter().all(|l| att.contains(l)), "graph {i}: non-attractor leaf");
            ensure!(!segments_close_up(g, &t.segments), "graph {i}: tree from {} has a cycle", t.root);
            covered.extend(t.segments.iter().copied());
            n_trees += 1;
        }
        for e in 0..g.edges().len() {
            let need: &[Part] = if att.contains(&e) || rep.contains(&e) {
                &[Part::BeforeMark, Part::AfterMark]
            } else {
                &[Part::Whole]
            };
            for &p in need {
                ensure!(covered.iter().any(|s| s.edge == e && s.part == p), "graph {i}: segment {e}:{p:?} uncovered");
            }
        }
    }
    Ok(format!("{} harmonic graphs ({from_mixed} from the mixed set), {n_trees} trees", gs.len()))
}

/// Whether the segments contain a cycle, directions ignored. Marked edges
/// are cut at a midpoint node, so a half-edge ends there.
fn segments_close_up(g: &MorseGraph, segs: &[Segment]) -> bool {
    let n = g.vertices().len();
    let mut parent: Vec<usize> = (0..n + g.edges().len()).collect();
    fn find(p: &mut [usize], x: usize) -> usize {
        let mut r = x;
        while p[r] != r {
            r = p[r];
        }
        p[x] = r;
        r
    }
    let mut seen = BTreeSet::new();
    for s in segs {
        if !seen.insert(*s) {
            continue;
        }
        let e = g.edge(s.edge);
        let mid = n + s.edge;
        let (x, y) = match s.part {
            Part::Whole => (e.tail, e.head),
            Part::BeforeMark => (e.tail, mid),
            Part::AfterMark => (mid, e.head),
        };
        let (rx, ry) = (find(&mut parent, x), find(&mut parent, y));
        if rx == ry {
            return true;
        }
        parent[rx] = ry;
    }
    false
}

fn c4_twister() -> Outcome {
    for n in 0..=3u32 {
        for k in 0..=20u32 {
            if n + k == 0 {
                continue;
            }
            let (_, r) = twister(n, k, None).map_err(|e| e.to_string())?;
            ensure!(
                (r.genus_arc_ba, r.genus_arc_ab) == (n + k, n + k + 1),
                "n={n} k={k}: genera {} {}",
                r.genus_arc_ba,
                r.genus_arc_ab
            );
            ensure!(r.var_capital == 2 && r.is_calabi, "n={n} k={k}: Var={} calabi={}", r.var_capital, r.is_calabi);
        }
    }
    let t = Instant::now();
    let (_, r) = twister(1, 10_000, None).map_err(|e| e.to_string())?;
    let el = t.elapsed();
    ensure!((r.genus_arc_ba, r.genus_arc_ab, r.var_capital) == (10_001, 10_002, 2), "k=10^4 report {r:?}");
    ensure!(el < Duration::from_secs(1), "k=10^4 took {el:?}");
    Ok(format!("n<=3, k<=20 exact; k=10^4 in {:.3}s", el.as_secs_f64()))
}

fn c5_lattice() -> Outcome {
    let t = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(505);
    let (mut feasible, mut own_checked) = (0, 0);
    for i in 0..100 {
        let p = random_lattice_problem(&mut rng, 6, 3);
        let bb = minimize_l1_with(&p, 5, ZeroWeights::Boxed, None);
        let ex = enumerate_box(&p, 5);
        match (&bb, &ex) {
            (Ok(a), Ok(b)) => {
                ensure!(a.value == b.value && a.kappa == b.kappa, "problem {i}: {a:?} vs {b:?}");
                feasible += 1;
            }
            (Err(Error::Infeasible), Err(Error::Infeasible)) => {}
            _ => return Err(format!("problem {i}: {bb:?} vs {ex:?}")),
        }
        // the exact mode may leave the box only through zero-weight columns
        if let (Ok(b), Ok(x)) = (&ex, minimize_l1(&p, 5)) {
            ensure!(x.value <= b.value && p.is_feasible(&x.kappa), "problem {i}: exact {x:?} above box {b:?}");
        }
        if p.cols() <= 4 {
            let own = brute_min(&p.matrix, &p.target, &p.weights, 5);
            ensure!(own == ex.as_ref().ok().map(|s| s.value), "problem {i}: own oracle {own:?}");
            own_checked += 1;
        }
    }
    let el = t.elapsed();
    ensure!(el < Duration::from_secs(30), "took {el:?}");
    Ok(format!("100 problems, {feasible} feasible, {own_checked} also by nested loops, {:.2}s", el.as_secs_f64()))
}

fn brute_min(m: &[Vec<i64>], target: &[i64], w: &[i64], bx: i64) -> Option<i64> {
    let cols = w.len();
    let side = (2 * bx + 1) as usize;
    let mut best: Option<i64> = None;
    for code in 0..side.pow(cols as u32) {
        let mut c = code;
        let k: Vec<i64> = (0..cols)
            .map(|_| {
                let d = (c % side) as i64 - bx;
                c /= side;
                d
            })
            .collect();
        if m.iter().zip(target).all(|(row, &t)| row.iter().zip(&k).map(|(a, b)| a * b).sum::<i64>() == t) {
            let v: i64 = k.iter().zip(w).map(|(a, b)| a.abs() * b).sum();
            best = Some(best.map_or(v, |b| b.min(v)));
        }
    }
    best
}

/// Cheapest integer combination of fiber edges equal to `c` modulo the
/// vertex relations (incoming minus outgoing at each vertex).
fn brute_vertical_norm(g: &MorseGraph, c: &[i64], bx: i64) -> Option<i64> {
    let (ne, nv) = (g.edges().len(), g.vertices().len());
    let mut rel = vec![vec![0i64; ne]; nv];
    for (e, edge) in g.edges().iter().enumerate() {
        rel[edge.head][e] += 1;
        rel[edge.tail][e] -= 1;
    }
    let side = (2 * bx + 1) as usize;
    let decode = |mut code: usize, n: usize| -> Vec<i64> {
        (0..n)
            .map(|_| {
                let d = (code % side) as i64 - bx;
                code /= side;
                d
            })
            .collect()
    };
    let mut best: Option<i64> = None;
    for kc in 0..side.pow(ne as u32) {
        let k = decode(kc, ne);
        let v: i64 = k.iter().enumerate().map(|(e, x)| x.abs() * g.edge(e).chi_minus()).sum();
        if best.is_some_and(|b| v >= b) {
            continue;
        }
        let diff: Vec<i64> = (0..ne).map(|e| c[e] - k[e]).collect();
        let hit = (0..side.pow(nv as u32)).any(|lc| {
            let l = decode(lc, nv);
            (0..ne).all(|e| (0..nv).map(|u| l[u] * rel[u][e]).sum::<i64>() == diff[e])
        });
        if hit {
            best = Some(v);
        }
    }
    best
}

fn c6_theta() -> Outcome {
    let half = Angle::new(1, 2).unwrap();
    let mut out = Vec::new();
    for ((p, q), want) in [((2, 2), 4), ((1, 1), 0)] {
        let g = theta(p, q);
        let c: Vec<i64> = (0..g.edges().len()).map(|e| crosses(&g, e, half.ratio()) as i64).collect();
        let own = brute_vertical_norm(&g, &c, 4);
        ensure!(own == Some(want), "theta({p},{q}): brute force gives {own:?}, expected {want}");
        let class = fiber_class(&g, half).map_err(|e| e.to_string())?;
        ensure!(class.0 == c, "theta({p},{q}): fiber class {:?} vs {c:?}", class.0);
        let lib = vertical_norm(&g, &class).map_err(|e| e.to_string())?;
        ensure!(lib == want, "theta({p},{q}): vertical_norm {lib}, expected {want}");
        out.push(format!("theta({p},{q})={lib}"));
    }
    Ok(out.join(" "))
}

/// ρ° straight from the definition: drop disk curves, solve for the
/// potential on each connected piece and take the widest range.
fn oracle_rho_circ(cs: &CurveSystem) -> Result<i64, String> {
    let n = cs.regions.len();
    let live: Vec<_> = cs.curves.iter().filter(|c| !c.disk_in_f).collect();
    let mut u: Vec<Option<i64>> = vec![None; n];
    let mut widest = 0;
    for s in 0..n {
        if u[s].is_some() {
            continue;
        }
        u[s] = Some(0);
        let (mut lo, mut hi) = (0, 0);
        let mut q = VecDeque::from([s]);
        while let Some(r) = q.pop_front() {
            for c in &live {
                let (other, want) = if c.from == r {
                    (c.to, u[r].unwrap() + 1)
                } else if c.to == r {
                    (c.from, u[r].unwrap() - 1)
                } else {
                    continue;
                };
                match u[other] {
                    Some(x) if x != want => return Err(format!("curve {} breaks the potential", c.name)),
                    Some(_) => {}
                    None => {
                        u[other] = Some(want);
                        lo = lo.min(want);
                        hi = hi.max(want);
                        q.push_back(other);
                    }
                }
            }
        }
        widest = widest.max(hi - lo);
    }
    Ok(widest)
}

fn euler_sum(cs: &CurveSystem) -> i64 {
    cs.regions.iter().map(|r| r.euler).sum()
}

fn arcs(cs: &CurveSystem) -> i64 {
    cs.curves.iter().filter(|c| c.kind == CurveKind::Arc).count() as i64
}

fn c7_resolution() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(707);
    let (mut passes, mut max_rho) = (0, 0);
    for i in 0..500 {
        let cs = random_curve_system(&mut rng);
        let k = oracle_rho_circ(&cs).map_err(|e| format!("system {i}: {e}"))?;
        max_rho = max_rho.max(k);
        let mut cur = discard_disk_curves(&cs);
        ensure!(
            euler_sum(&cur) == euler_sum(&cs) - (arcs(&cs) - arcs(&cur)),
            "system {i}: disk discard breaks additivity"
        );
        ensure!(oracle_rho_circ(&cur)? == k, "system {i}: discarding disks changed the twist");
        for step in 1..=k {
            let next = resolve_step(&cur).map_err(|e| format!("system {i} step {step}: {e}"))?;
            let got = oracle_rho_circ(&next).map_err(|e| format!("system {i} step {step}: {e}"))?;
            ensure!(got == k - step, "system {i} step {step}: twist {got}, expected {}", k - step);
            ensure!(
                euler_sum(&next) == euler_sum(&cur) - (arcs(&cur) - arcs(&next)),
                "system {i} step {step}: Euler characteristic not additive"
            );
            cur = next;
            passes += 1;
        }
        ensure!(cur.curves.is_empty(), "system {i}: {} curves left after {k} passes", cur.curves.len());
        ensure!(matches!(resolve_step(&cur), Err(Error::NothingToResolve)), "system {i}: extra pass possible");
        let trace = resolve_all(&cs, 0, 0).map_err(|e| format!("system {i}: {e}"))?;
        ensure!(
            trace.steps.len() as i64 == k && trace.last.curves.is_empty(),
            "system {i}: resolve_all took {} passes",
            trace.steps.len()
        );
    }
    Ok(format!("500 systems, {passes} passes, max rho° {max_rho}"))
}

fn c8_surgery_tables() -> Outcome {
    use SurfaceType::*;
    use SurgeryCase::*;
    let list_a = [
        (Nullhomotopic, SphereLike, (0, 2, 0)),
        (Nullhomotopic, TorusLike, (0, 2, 0)),
        (Nullhomotopic, General, (0, 2, 0)),
        (Separating, General, (0, 2, -2)),
        (Nonseparating, TorusLike, (-1, 2, 0)),
        (Nonseparating, General, (-1, 2, -2)),
    ];
    let list_b = [
        (Nullhomotopic, SphereLike, (0, 1, 0)),
        (Nullhomotopic, TorusLike, (0, 1, 0)),
        (Nullhomotopic, General, (0, 1, 0)),
        (Separating, General, (0, 1, -1)),
        (Nonseparating, TorusLike, (-1, 1, 0)),
        (Nonseparating, General, (-1, 1, -1)),
    ];
    for (kind, list) in [(CurveKind::Loop, &list_a), (CurveKind::Arc, &list_b)] {
        for &(case, surface, row) in list {
            let got = surgery_effect(kind, case, surface).map_err(|e| e.to_string())?;
            ensure!(got == row, "{kind:?} {case:?} {surface:?}: {got:?} vs {row:?}");
        }
        for case in [Nullhomotopic, Separating, Nonseparating] {
            for surface in [SphereLike, TorusLike, General] {
                if list.iter().any(|&(c, s, _)| c == case && s == surface) {
                    continue;
                }
                ensure!(
                    matches!(surgery_effect(kind, case, surface), Err(Error::InvalidCase(_))),
                    "{kind:?} {case:?} {surface:?} should be rejected"
                );
            }
        }
    }
    Ok("6 + 6 rows, 6 invalid combinations rejected".into())
}

fn c9_calabi() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(909);
    let mut yes = 0;
    for i in 0..1000 {
        let g = random_digraph(&mut rng, 12);
        let reaches = |from: usize, to: usize| {
            let mut seen = vec![false; g.vertices().len()];
            let mut stack = vec![from];
            while let Some(v) = stack.pop() {
                if v == to {
                    return true;
                }
                if std::mem::replace(&mut seen[v], true) {
                    continue;
                }
                stack.extend(g.edges().iter().filter(|e| e.tail == v).map(|e| e.head));
            }
            false
        };
        let own = g.edges().iter().all(|e| reaches(e.head, e.tail));
        let (lib, _) = is_calabi(&g);
        ensure!(own == lib, "digraph {i}: oracle {own}, library {lib}");
        yes += own as usize;
    }
    Ok(format!("1000 digraphs, {yes} Calabi"))
}

fn c10_handles() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(1010);
    let p = SweepParams { max_vertices: 10, ..SweepParams::default() };
    let (mut done, mut tries) = (0, 0);
    let mut rejected: BTreeMap<&'static str, usize> = BTreeMap::new();
    while done < 100 {
        tries += 1;
        ensure!(tries < 100_000, "only {done} handles attached in {tries} tries");
        let a = sweep_graph(&mut rng, &p);
        let b = sweep_graph(&mut rng, &p);
        let (ta, tb) = (a.vertices().len() as i64, b.vertices().len() as i64);
        // the sweep puts vertices at odd multiples of 1/2T
        let shift = Rational::new(1, 4 * ta * tb);
        let g = disjoint_union(&a, &b, shift);
        let b_shifted = b.rotated(shift);
        let ea = rng.gen_range(0..a.edges().len());
        let eb = a.edges().len() + rng.gen_range(0..b.edges().len());
        let (es, ed) = if rng.gen_bool(0.5) { (ea, eb) } else { (eb, ea) };
        let point = |rng: &mut ChaCha8Rng, e: usize| {
            let t = g.vertex(g.edge(e).tail).angle;
            let len = arc(t, g.vertex(g.edge(e).head).angle);
            Angle::wrap(t.ratio() + len * Rational::new(rng.gen_range(1..64), 64))
        };
        let (ps, pd) = (point(&mut rng, es), point(&mut rng, ed));
        let m = match attach_handle(&g, (es, ps), (ed, pd)) {
            Ok(m) => m,
            Err(e) => {
                *rejected.entry(e.code()).or_default() += 1;
                continue;
            }
        };
        let out = &m.graph;
        ensure!(out.validate().is_valid(), "handle {done}: output invalid: {:?}", out.validate().issues);
        let before: BTreeSet<String> = marked_points(&g).repellers.iter().map(|&e| g.edge(e).name.clone()).collect();
        let after: BTreeSet<String> = marked_points(out)
            .repellers
            .iter()
            .map(|&e| {
                let n = &out.edge(e).name;
                match n.strip_suffix("_2") {
                    Some(base) if g.edge_index(n).is_none() => base.to_string(),
                    _ => n.clone(),
                }
            })
            .collect();
        ensure!(before == after, "handle {done}: repellers {before:?} became {after:?}");
        let h = out.find_edge("handle").map_err(|e| e.to_string())?;
        ensure!(
            edge_mark(out, &out.strands(), h) == Some(MarkKind::Attractor),
            "handle {done}: handle edge is not an attractor"
        );
        // a fiber away from the handle: its norm on the glued graph is at most
        // the sum over the two pieces
        let Some(theta) = (1..16)
            .map(|j| Angle::new(2 * j - 1, 32).unwrap())
            .find(|th| !th.in_open_arc(ps, pd) && out.vertices().iter().all(|v| v.angle != *th))
        else {
            continue;
        };
        let norm = |h: &MorseGraph| -> Result<i64, String> {
            let c = fiber_class(h, theta).map_err(|e| e.to_string())?;
            vertical_norm(h, &c).map_err(|e| e.to_string())
        };
        let glued = norm(out)?;
        let (na, nb) = (norm(&a)?, norm(&b_shifted)?);
        ensure!(glued <= na + nb, "handle {done}: glued norm {glued} > {na} + {nb}");
        done += 1;
    }
    Ok(format!("100 handles in {tries} tries, rejected {rejected:?}"))
}

fn c11_tangency() -> Outcome {
    let mut cases = 0;
    for ip in -50..=50i64 {
        for im in -50..=50i64 {
            let sign = signs_agree(ip, im);
            let via_abs = (ip + im).abs() >= (ip - im).abs();
            ensure!(
                sign == via_abs && sign == (ip * im >= 0),
                "I=({ip},{im}): signs_agree={sign}, |sum|>=|diff| {via_abs}"
            );
            let t = TangencyData::new(ip.max(0), (-ip).max(0), im.max(0), (-im).max(0));
            let mut prev = false;
            for var in 0..=4 {
                for rho in 0..=3 {
                    let a = var * rho;
                    let r = region_check(var, rho, &t);
                    let first = a >= (ip - im).abs() - (ip + im).abs();
                    let second = Rational::new(a, 2) >= Rational::from_integer(im);
                    let third = ip <= 0;
                    ensure!(
                        (r.first, r.second, r.third, r.feasible) == (first, second, third, first && second && third),
                        "I=({ip},{im}) a={a}: {r:?}"
                    );
                    cases += 1;
                }
            }
            // enlarging a never loses feasibility
            for a in 0..=20 {
                let f = region_check(a, 1, &t).feasible;
                ensure!(!prev || f, "I=({ip},{im}): feasibility lost at a={a}");
                prev = f;
            }
        }
    }
    Ok(format!("{} index pairs, {cases} region checks", 101 * 101))
}

fn main() -> ExitCode {
    let criteria: [Criterion; 11] = [
        ("var identity", c1_var_identity),
        ("attractor and repeller integrals agree", c2_integrals),
        ("repeller trees cover", c3_tree_cover),
        ("harmonic twister", c4_twister),
        ("branch-and-bound matches box enumeration", c5_lattice),
        ("theta fixtures", c6_theta),
        ("resolution contract", c7_resolution),
        ("surgery tables", c8_surgery_tables),
        ("calabi oracle", c9_calabi),
        ("1-surgery", c10_handles),
        ("tangency region", c11_tangency),
    ];
    let mut failed = 0;
    for (i, (name, f)) in criteria.iter().enumerate() {
        let t = Instant::now();
        let r = std::panic::catch_unwind(f).unwrap_or_else(|p| {
            let msg = p.downcast_ref::<String>().cloned().or_else(|| p.downcast_ref::<&str>().map(|s| s.to_string()));
            Err(format!("panicked: {}", msg.unwrap_or_default()))
        });
        let secs = t.elapsed().as_secs_f64();
        match r {
            Ok(detail) => println!("criterion {:>2} PASS {name}: {detail} [{secs:.2}s]", i + 1),
            Err(why) => {
                failed += 1;
                println!("criterion {:>2} FAIL {name}: {why} [{secs:.2}s]", i + 1);
            }
        }
    }
    println!("acceptance: {} passed, {failed} failed", criteria.len() - failed);
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
