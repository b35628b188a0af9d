mod common;

use nalgebra::{DMatrix, DVector};
use proptest::prelude::*;
use rand::Rng;
use rank2d_core::{apply_google, cheirank, invert, pagerank, DirectedGraph, SolverOptions};

use common::{l1, names, random_graph, rng};

/// Dense Google matrix built entry by entry from the edge list.
fn dense_google(g: &DirectedGraph, alpha: f64) -> DMatrix<f64> {
    let n = g.n_nodes();
    let mut s = DMatrix::<f64>::zeros(n, n);
    for (src, dst, m) in g.edges() {
        s[(dst as usize, src as usize)] += m as f64;
    }
    for j in 0..n {
        let col: f64 = s.column(j).sum();
        for i in 0..n {
            s[(i, j)] = if col == 0.0 {
                1.0 / n as f64
            } else {
                s[(i, j)] / col
            };
        }
    }
    s * alpha + DMatrix::from_element(n, n, (1.0 - alpha) / n as f64)
}

/// Solves (I − αS) P = (1 − α)/N · 1.
fn dense_pagerank(g: &DirectedGraph, alpha: f64) -> Vec<f64> {
    let n = g.n_nodes();
    let teleport = (1.0 - alpha) / n as f64;
    let s = (dense_google(g, alpha) - DMatrix::from_element(n, n, teleport)) / alpha;
    let a = DMatrix::<f64>::identity(n, n) - s * alpha;
    let b = DVector::from_element(n, teleport);
    a.lu().solve(&b).unwrap().iter().copied().collect()
}

fn random_distribution(n: usize, seed: u64) -> Vec<f64> {
    let mut r = rng(seed);
    let v: Vec<f64> = (0..n).map(|_| r.gen::<f64>()).collect();
    let t: f64 = v.iter().sum();
    v.into_iter().map(|x| x / t).collect()
}

#[test]
fn operator_matches_dense_matrix() {
    for seed in 0..5 {
        let g = random_graph(20, 0.12, seed);
        let v = random_distribution(20, 100 + seed);
        for alpha in [0.5, 0.85, 1.0] {
            let fast = apply_google(&g, alpha, &v).unwrap();
            let dense = dense_google(&g, alpha) * DVector::from_vec(v.clone());
            for (a, b) in fast.iter().zip(dense.iter()) {
                assert!(
                    (a - b).abs() < 1e-12,
                    "seed {seed} alpha {alpha}: {a} vs {b}"
                );
            }
        }
    }
}

#[test]
fn single_edge_against_linear_solve() {
    let g = DirectedGraph::from_edges(names(2), vec![(0, 1, 1)]).unwrap();
    let dense = dense_pagerank(&g, 0.85);
    // (1 - 0.425) P_a = 0.425 (1 - P_a) ... gives P_a = 0.5 / 1.425
    assert!((dense[0] - 0.5 / 1.425).abs() < 1e-15);
    assert!((dense[0] - 0.350877).abs() < 1e-6);
    assert!((dense[1] - 0.649123).abs() < 1e-6);
    let p = pagerank(&g, 0.85, &SolverOptions::default()).unwrap();
    assert!(l1(&p.values, &dense) < 1e-9);
}

#[test]
fn fifty_node_graphs_match_dense_solve() {
    for seed in 0..10 {
        let g = random_graph(50, 0.1, 1000 + seed);
        let dense = dense_pagerank(&g, 0.85);
        let p = pagerank(&g, 0.85, &SolverOptions::default()).unwrap();
        assert!(
            l1(&p.values, &dense) < 1e-9,
            "seed {seed}: {}",
            l1(&p.values, &dense)
        );
        let dense_star = dense_pagerank(&invert(&g), 0.85);
        let q = cheirank(&g, 0.85, &SolverOptions::default()).unwrap();
        assert!(l1(&q.values, &dense_star) < 1e-9);
    }
}

#[test]
fn cheirank_is_pagerank_of_inverse() {
    for seed in 0..5 {
        let g = random_graph(50, 0.1, 50 + seed);
        let opts = SolverOptions::default();
        let q = cheirank(&g, 0.7, &opts).unwrap();
        let p = pagerank(&invert(&g), 0.7, &opts).unwrap();
        assert_eq!(q.values, p.values);
        assert_eq!(q.iterations, p.iterations);
    }
}

#[test]
fn star_hub_tops_cheirank() {
    let g = DirectedGraph::from_edges(names(6), (1..6).map(|t| (0, t, 1)).collect()).unwrap();
    let q = cheirank(&g, 0.85, &SolverOptions::default()).unwrap();
    let dense = dense_pagerank(&invert(&g), 0.85);
    for leaf in 1..6 {
        assert!(q.values[0] > q.values[leaf]);
        assert!(dense[0] > dense[leaf]);
    }
    assert!(l1(&q.values, &dense) < 1e-9);
}

#[test]
fn worker_counts_agree() {
    let g = rank2d_core::netstats::generate_scale_free(50_000, 2.2, 2.7, 5.0, 2).unwrap();
    let run = |w| {
        let opts = SolverOptions {
            workers: Some(w),
            ..Default::default()
        };
        pagerank(&g, 0.85, &opts).unwrap().values
    };
    assert!(l1(&run(1), &run(8)) < 1e-10);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn mass_is_conserved(seed in 0u64..10_000, n in 1usize..40, density in 0.0f64..0.3, alpha in 0.05f64..1.0) {
        let g = random_graph(n, density, seed);
        let v = random_distribution(n, seed ^ 0xabcdef);
        let out = apply_google(&g, alpha, &v).unwrap();
        let total: f64 = out.iter().sum();
        prop_assert!((total - 1.0).abs() < 1e-12);
        prop_assert!(out.iter().all(|&x| x >= 0.0));
    }

    #[test]
    fn converged_vectors_are_positive_and_contract(seed in 0u64..10_000, n in 2usize..40, density in 0.0f64..0.3, alpha in 0.1f64..0.95) {
        let g = random_graph(n, density, seed);
        let p = pagerank(&g, alpha, &SolverOptions::default()).unwrap();
        let floor = (1.0 - alpha) / n as f64;
        prop_assert!(p.values.iter().all(|&x| x >= floor * (1.0 - 1e-12)));
        prop_assert!((p.sum() - 1.0).abs() < 1e-12);
        for w in p.residual_history.windows(2) {
            prop_assert!(w[1] <= alpha * w[0] + 1e-14, "{:?}", w);
        }
        if n <= 50 {
            prop_assert!(l1(&p.values, &dense_pagerank(&g, alpha)) < 1e-9);
        }
    }
}
