//! Seeded random instances. All randomness in the tool comes from one
//! `ChaCha8Rng` per command, seeded from `--seed`.

use pcc_core::graph::LabeledGraph;
use pcc_core::{Cell, PartialMatrix};
use rand::Rng;
use rand_chacha::ChaCha8Rng;

pub use rand::SeedableRng;

pub type Generator = ChaCha8Rng;

pub fn generator(seed: u64) -> Generator {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Default probability of a star cell.
pub const STAR_DENSITY: f64 = 0.3;

/// A class with `1..=max_points` points and `1..=max_concepts` concepts;
/// each cell is `*` with probability `density`, otherwise a fair bit.
pub fn partial_class(rng: &mut Generator, max_points: usize, max_concepts: usize, density: f64) -> PartialMatrix {
    let n = rng.gen_range(1..=max_points);
    let k = rng.gen_range(1..=max_concepts);
    let rows = (0..k)
        .map(|_| {
            (0..n)
                .map(|_| {
                    if rng.gen_bool(density) {
                        Cell::Star
                    } else {
                        Cell::from_bit(rng.gen_bool(0.5))
                    }
                })
                .collect()
        })
        .collect();
    PartialMatrix::new(n, rows).expect("rows have n cells")
}

/// `G(n, p)` with `n` drawn from `1..=max_n`.
pub fn graph(rng: &mut Generator, max_n: usize, p: f64) -> LabeledGraph {
    let n = rng.gen_range(1..=max_n);
    let mut g = LabeledGraph::new(n);
    for u in 0..n {
        for v in u + 1..n {
            if rng.gen_bool(p) {
                g.add_edge(u, v).expect("in range");
            }
        }
    }
    g
}
