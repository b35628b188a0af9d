#![allow(dead_code)]

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rank2d_core::DirectedGraph;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn names(n: usize) -> Vec<String> {
    (0..n).map(|i| format!("n{i}")).collect()
}

/// Erdős–Rényi style multigraph: every ordered pair (self-loops included)
/// gets an edge with probability `density`, multiplicity 1..=3.
pub fn random_graph(n: usize, density: f64, seed: u64) -> DirectedGraph {
    let mut r = rng(seed);
    let mut edges = Vec::new();
    for s in 0..n as u32 {
        for t in 0..n as u32 {
            if r.gen::<f64>() < density {
                edges.push((s, t, r.gen_range(1..=3)));
            }
        }
    }
    DirectedGraph::from_edges(names(n), edges).unwrap()
}

pub fn l1(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y).abs()).sum()
}
