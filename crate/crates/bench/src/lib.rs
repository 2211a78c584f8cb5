//! Seeded inputs shared by the benchmarks.

use fibergraph::lattice::LatticeProblem;
use fibergraph::random::{random_curve_system, random_lattice_problem, sweep_graph, SweepParams};
use fibergraph::{CurveSystem, MorseGraph};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

pub fn graphs(n: usize, seed: u64) -> Vec<MorseGraph> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..n).map(|_| sweep_graph(&mut rng, &SweepParams::default())).collect()
}

pub fn lattice_problems(n: usize, cols: usize, seed: u64) -> Vec<LatticeProblem> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..n).map(|_| random_lattice_problem(&mut rng, cols, 3)).collect()
}

pub fn curve_systems(n: usize, seed: u64) -> Vec<CurveSystem> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..n).map(|_| random_curve_system(&mut rng)).collect()
}
