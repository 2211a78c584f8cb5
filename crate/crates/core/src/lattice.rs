//! Weighted ℓ1 minimization over the affine integer lattice `{κ : Mκ = t}`.
//!
//! The search branches on positive-weight columns in decreasing weight order
//! and prunes with the accumulated objective, a per-row reach bound, and
//! exact lattice membership of the residual. Zero-weight columns never
//! affect the objective; in [`ZeroWeights::Exact`] mode they are left
//! unbounded and solved from an echelon form at the leaves.

use std::cmp::Ordering;

use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LatticeProblem {
    /// Row-major, `rows x cols`.
    pub matrix: Vec<Vec<i64>>,
    pub target: Vec<i64>,
    pub weights: Vec<i64>,
}

impl LatticeProblem {
    pub fn new(matrix: Vec<Vec<i64>>, target: Vec<i64>, weights: Vec<i64>) -> Self {
        assert_eq!(matrix.len(), target.len(), "one target entry per row");
        assert!(matrix.iter().all(|r| r.len() == weights.len()), "one weight per column");
        assert!(weights.iter().all(|&w| w >= 0), "weights are nonnegative");
        LatticeProblem { matrix, target, weights }
    }

    pub fn rows(&self) -> usize {
        self.target.len()
    }

    pub fn cols(&self) -> usize {
        self.weights.len()
    }

    pub fn column(&self, j: usize) -> Vec<i64> {
        self.matrix.iter().map(|r| r[j]).collect()
    }

    pub fn objective(&self, kappa: &[i64]) -> i64 {
        kappa.iter().zip(&self.weights).map(|(k, w)| k.abs() * w).sum()
    }

    pub fn is_feasible(&self, kappa: &[i64]) -> bool {
        self.matrix
            .iter()
            .zip(&self.target)
            .all(|(row, &t)| row.iter().zip(kappa).map(|(a, k)| a * k).sum::<i64>() == t)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ZeroWeights {
    /// Zero-weight coordinates are unbounded integers.
    Exact,
    /// Every coordinate respects the box.
    Boxed,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Solution {
    pub kappa: Vec<i64>,
    pub value: i64,
    /// Some boxed coordinate sits at `±box`.
    pub touches_box: bool,
}

/// Box-growth policy for [`minimize_adaptive`].
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct BoxPolicy {
    pub start: i64,
    pub cap: i64,
}

impl Default for BoxPolicy {
    fn default() -> Self {
        BoxPolicy { start: 16, cap: 1024 }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Adaptive {
    pub solution: Solution,
    pub box_used: i64,
    /// Set when the minimizer still touches the box at the cap.
    pub box_too_small: bool,
}

/// Branch-and-bound with exact zero-weight handling.
pub fn minimize_l1(p: &LatticeProblem, bx: i64) -> Result<Solution> {
    minimize_l1_with(p, bx, ZeroWeights::Exact, None)
}

/// Branch-and-bound. `incumbent`, when feasible and inside the box, seeds the
/// upper bound. Ties go to the lexicographically smallest κ; in exact mode
/// the comparison ignores zero-weight coordinates, which are then filled in
/// from the echelon form.
pub fn minimize_l1_with(p: &LatticeProblem, bx: i64, mode: ZeroWeights, incumbent: Option<&[i64]>) -> Result<Solution> {
    assert!(bx >= 1, "box radius must be positive");
    let mut s = Search::new(p, bx, mode)?;
    if let Some(k) = incumbent {
        s.seed(k);
    }
    let mut r = p.target.clone();
    let mut kappa = vec![0; p.cols()];
    s.dfs(0, &mut r, 0, &mut kappa);
    let (value, kappa) = s.best.ok_or(Error::Infeasible)?;
    let touches_box = s.order.iter().any(|&j| kappa[j].abs() == bx);
    Ok(Solution { kappa, value, touches_box })
}

/// Exhaustive enumeration of the whole box; the oracle for the search above.
pub fn enumerate_box(p: &LatticeProblem, bx: i64) -> Result<Solution> {
    fn rec(
        p: &LatticeProblem,
        bx: i64,
        j: usize,
        r: &mut Vec<i64>,
        kappa: &mut Vec<i64>,
        best: &mut Option<(i64, Vec<i64>)>,
    ) {
        if j == p.cols() {
            if r.iter().all(|&x| x == 0) {
                let v = p.objective(kappa);
                let better = match best {
                    None => true,
                    Some((bv, bk)) => v < *bv || (v == *bv && kappa.as_slice() < bk.as_slice()),
                };
                if better {
                    *best = Some((v, kappa.clone()));
                }
            }
            return;
        }
        for v in -bx..=bx {
            kappa[j] = v;
            for (i, row) in p.matrix.iter().enumerate() {
                r[i] -= v * row[j];
            }
            rec(p, bx, j + 1, r, kappa, best);
            for (i, row) in p.matrix.iter().enumerate() {
                r[i] += v * row[j];
            }
        }
        kappa[j] = 0;
    }
    let mut best = None;
    let mut r = p.target.clone();
    let mut kappa = vec![0; p.cols()];
    rec(p, bx, 0, &mut r, &mut kappa, &mut best);
    let (value, kappa) = best.ok_or(Error::Infeasible)?;
    let touches_box = kappa.iter().any(|k| k.abs() == bx);
    Ok(Solution { kappa, value, touches_box })
}

/// Exact mode, doubling the box while the minimizer touches it or nothing is found.
pub fn minimize_adaptive(p: &LatticeProblem, policy: BoxPolicy, incumbent: Option<&[i64]>) -> Result<Adaptive> {
    let mut bx = policy.start.max(1);
    loop {
        let last = bx.saturating_mul(2) > policy.cap;
        match minimize_l1_with(p, bx, ZeroWeights::Exact, incumbent) {
            Ok(solution) if !solution.touches_box || last => {
                let box_too_small = solution.touches_box;
                return Ok(Adaptive { solution, box_used: bx, box_too_small });
            }
            Err(Error::Infeasible) if last => return Err(Error::Infeasible),
            Err(e @ Error::Overflow) => return Err(e),
            _ => bx *= 2,
        }
    }
}

/// Lexicographically smallest nonzero `κ ∈ [0, bx]^n` with `Mκ = 0`.
pub fn nonnegative_kernel_vector(matrix: &[Vec<i64>], cols: usize, bx: i64) -> Option<Vec<i64>> {
    fn rec(m: &[Vec<i64>], bx: i64, j: usize, r: &mut [i64], k: &mut Vec<i64>, reach: &[Vec<i64>]) -> bool {
        if j == k.len() {
            return r.iter().all(|&x| x == 0) && k.iter().any(|&x| x != 0);
        }
        if r.iter().zip(&reach[j]).any(|(x, lim)| x.abs() > *lim) {
            return false;
        }
        for v in 0..=bx {
            k[j] = v;
            for (i, row) in m.iter().enumerate() {
                r[i] += v * row[j];
            }
            let found = rec(m, bx, j + 1, r, k, reach);
            for (i, row) in m.iter().enumerate() {
                r[i] -= v * row[j];
            }
            if found {
                return true;
            }
        }
        k[j] = 0;
        false
    }
    let rows = matrix.len();
    let reach: Vec<Vec<i64>> = (0..=cols)
        .map(|d| (0..rows).map(|i| bx * (d..cols).map(|j| matrix[i][j].abs()).sum::<i64>()).collect())
        .collect();
    let mut r = vec![0; rows];
    let mut k = vec![0; cols];
    rec(matrix, bx, 0, &mut r, &mut k, &reach).then_some(k)
}

struct Search<'a> {
    p: &'a LatticeProblem,
    cols: Vec<Vec<i64>>,
    bx: i64,
    mode: ZeroWeights,
    /// Branching order.
    order: Vec<usize>,
    /// Unbounded zero-weight columns (exact mode only).
    free: Vec<usize>,
    /// Lattice spanned by `order[d..]` and `free`, per depth.
    suffix: Vec<IntLattice>,
    /// Lattice spanned by the zero-weight columns among `order[d..]` and `free`.
    zero_suffix: Vec<IntLattice>,
    /// `bx * Σ|M_ij|` over `order[d..]`, per depth and row.
    reach: Vec<Vec<i64>>,
    /// Smallest positive weight among `order[d..]`.
    min_w: Vec<i64>,
    best: Option<(i64, Vec<i64>)>,
}

impl<'a> Search<'a> {
    fn new(p: &'a LatticeProblem, bx: i64, mode: ZeroWeights) -> Result<Self> {
        let n = p.cols();
        let cols: Vec<Vec<i64>> = (0..n).map(|j| p.column(j)).collect();
        let mut order: Vec<usize> = (0..n).collect();
        order.sort_by_key(|&j| (std::cmp::Reverse(p.weights[j]), j));
        let free: Vec<usize> = match mode {
            ZeroWeights::Exact => order.iter().copied().filter(|&j| p.weights[j] == 0).collect(),
            ZeroWeights::Boxed => Vec::new(),
        };
        order.retain(|j| !free.contains(j));
        let mut suffix = Vec::new();
        let mut zero_suffix = Vec::new();
        let mut reach = Vec::new();
        let mut min_w = Vec::new();
        for d in 0..=order.len() {
            let span: Vec<usize> = order[d..].iter().chain(&free).copied().collect();
            let zeros: Vec<usize> = span.iter().copied().filter(|&j| p.weights[j] == 0).collect();
            suffix.push(IntLattice::new(&span.iter().map(|&j| cols[j].clone()).collect::<Vec<_>>(), p.rows())?);
            zero_suffix.push(IntLattice::new(&zeros.iter().map(|&j| cols[j].clone()).collect::<Vec<_>>(), p.rows())?);
            reach.push(
                (0..p.rows())
                    .map(|i| bx.saturating_mul(order[d..].iter().map(|&j| p.matrix[i][j].abs()).sum::<i64>()))
                    .collect(),
            );
            min_w.push(order[d..].iter().map(|&j| p.weights[j]).filter(|&w| w > 0).min().unwrap_or(0));
        }
        Ok(Search { p, cols, bx, mode, order, free, suffix, zero_suffix, reach, min_w, best: None })
    }

    fn key_cmp(&self, a: &[i64], b: &[i64]) -> Ordering {
        match self.mode {
            ZeroWeights::Boxed => a.cmp(b),
            ZeroWeights::Exact => {
                let mask = |k: &[i64]| -> Vec<i64> {
                    k.iter().enumerate().map(|(j, &x)| if self.free.contains(&j) { 0 } else { x }).collect()
                };
                mask(a).cmp(&mask(b))
            }
        }
    }

    fn consider(&mut self, value: i64, kappa: &[i64]) {
        let better = match &self.best {
            None => true,
            Some((bv, bk)) => value < *bv || (value == *bv && self.key_cmp(kappa, bk) == Ordering::Less),
        };
        if better {
            self.best = Some((value, kappa.to_vec()));
        }
    }

    fn seed(&mut self, k: &[i64]) {
        if k.len() != self.p.cols() || !self.p.is_feasible(k) {
            return;
        }
        if self.order.iter().any(|&j| k[j].abs() > self.bx) {
            return;
        }
        let mut kappa = k.to_vec();
        if !self.free.is_empty() {
            let mut r = self.p.target.clone();
            for &j in &self.order {
                for (ri, cj) in r.iter_mut().zip(&self.cols[j]) {
                    *ri -= kappa[j] * cj;
                }
            }
            match self.suffix[self.order.len()].solve(&r) {
                Some(x) => {
                    for (&j, &v) in self.free.iter().zip(&x) {
                        match i64::try_from(v) {
                            Ok(v) => kappa[j] = v,
                            Err(_) => return,
                        }
                    }
                }
                None => return,
            }
        }
        let v = self.p.objective(&kappa);
        self.consider(v, &kappa);
    }

    fn bound(&self) -> Option<i64> {
        self.best.as_ref().map(|b| b.0)
    }

    fn dfs(&mut self, d: usize, r: &mut Vec<i64>, acc: i64, kappa: &mut Vec<i64>) {
        if self.bound().is_some_and(|b| acc > b) {
            return;
        }
        if !self.suffix[d].contains(r) {
            return;
        }
        if self.free.is_empty() && r.iter().zip(&self.reach[d]).any(|(x, lim)| x.abs() > *lim) {
            return;
        }
        let nonzero = r.iter().any(|&x| x != 0);
        let lb = if nonzero && !self.zero_suffix[d].contains(r) { self.min_w[d] } else { 0 };
        if self.bound().is_some_and(|b| acc + lb > b) {
            return;
        }
        if self.suffix[d].independent() || d == self.order.len() {
            // the remaining coordinates are pinned down (up to the echelon choice)
            let Some(x) = self.suffix[d].solve(r) else { return };
            let span: Vec<usize> = self.order[d..].iter().chain(&self.free).copied().collect();
            let mut cost = acc;
            for (&j, &v) in span.iter().zip(&x) {
                let Ok(v) = i64::try_from(v) else { return };
                if !self.free.contains(&j) && v.abs() > self.bx {
                    for &j in &span {
                        kappa[j] = 0;
                    }
                    return;
                }
                kappa[j] = v;
                cost += self.p.weights[j] * v.abs();
            }
            self.consider(cost, kappa);
            for &j in &span {
                kappa[j] = 0;
            }
            return;
        }
        let j = self.order[d];
        let w = self.p.weights[j];
        let mut mag = self.bx;
        if let (Some(b), true) = (self.bound(), w > 0) {
            mag = mag.min((b - acc) / w);
        }
        // values in the order 0, -1, 1, -2, 2, ...
        for step in 0..=2 * mag {
            let v = if step % 2 == 1 { -(step + 1) / 2 } else { step / 2 };
            kappa[j] = v;
            for (ri, cj) in r.iter_mut().zip(&self.cols[j]) {
                *ri -= v * cj;
            }
            self.dfs(d + 1, r, acc + w * v.abs(), kappa);
            for (ri, cj) in r.iter_mut().zip(&self.cols[j]) {
                *ri += v * cj;
            }
        }
        kappa[j] = 0;
    }
}

/// Row-echelon basis of the integer span of a set of generators, with the
/// combination that produced each basis row.
#[derive(Clone, Debug)]
pub(crate) struct IntLattice {
    rows: Vec<Vec<i128>>,
    pivots: Vec<usize>,
    coeffs: Vec<Vec<i128>>,
    n_gens: usize,
}

impl IntLattice {
    pub(crate) fn new(gens: &[Vec<i64>], dim: usize) -> Result<Self> {
        let n = gens.len();
        let mut rows: Vec<Vec<i128>> = gens.iter().map(|g| g.iter().map(|&x| x as i128).collect()).collect();
        let mut coeffs: Vec<Vec<i128>> = (0..n).map(|i| (0..n).map(|j| (i == j) as i128).collect()).collect();
        let mut pivots = Vec::new();
        let mut top = 0;
        for c in 0..dim {
            loop {
                let pick = (top..n).filter(|&i| rows[i][c] != 0).min_by_key(|&i| (rows[i][c].abs(), i));
                let Some(pi) = pick else { break };
                rows.swap(top, pi);
                coeffs.swap(top, pi);
                let mut done = true;
                for i in top + 1..n {
                    if rows[i][c] == 0 {
                        continue;
                    }
                    let q = rows[i][c] / rows[top][c];
                    sub_scaled(&mut rows, i, top, q)?;
                    sub_scaled(&mut coeffs, i, top, q)?;
                    if rows[i][c] != 0 {
                        done = false;
                    }
                }
                if done {
                    break;
                }
            }
            if top < n && rows[top][c] != 0 {
                if rows[top][c] < 0 {
                    rows[top].iter_mut().for_each(|x| *x = -*x);
                    coeffs[top].iter_mut().for_each(|x| *x = -*x);
                }
                pivots.push(c);
                top += 1;
            }
        }
        rows.truncate(top);
        coeffs.truncate(top);
        Ok(IntLattice { rows, pivots, coeffs, n_gens: n })
    }

    pub(crate) fn independent(&self) -> bool {
        self.rows.len() == self.n_gens
    }

    pub(crate) fn contains(&self, v: &[i64]) -> bool {
        self.reduce(v).is_some()
    }

    fn reduce(&self, v: &[i64]) -> Option<Vec<i128>> {
        let mut r: Vec<i128> = v.iter().map(|&x| x as i128).collect();
        let mut y = Vec::with_capacity(self.rows.len());
        for (row, &c) in self.rows.iter().zip(&self.pivots) {
            if r[..c].iter().any(|&x| x != 0) || r[c] % row[c] != 0 {
                return None;
            }
            let q = r[c] / row[c];
            for (ri, xi) in r.iter_mut().zip(row) {
                *ri -= q * xi;
            }
            y.push(q);
        }
        r.iter().all(|&x| x == 0).then_some(y)
    }

    /// Coefficients on the generators reproducing `v`.
    pub(crate) fn solve(&self, v: &[i64]) -> Option<Vec<i128>> {
        let y = self.reduce(v)?;
        let mut x = vec![0i128; self.n_gens];
        for (q, co) in y.iter().zip(&self.coeffs) {
            for (xi, ci) in x.iter_mut().zip(co) {
                *xi += q * ci;
            }
        }
        Some(x)
    }
}

fn sub_scaled(m: &mut [Vec<i128>], i: usize, top: usize, q: i128) -> Result<()> {
    let (lo, hi) = m.split_at_mut(i);
    for (a, b) in hi[0].iter_mut().zip(&lo[top]) {
        *a = q.checked_mul(*b).and_then(|p| a.checked_sub(p)).ok_or(Error::Overflow)?;
    }
    Ok(())
}
