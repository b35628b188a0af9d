mod common;

use rand::Rng;
use rand_chacha::ChaCha8Rng;
use rank2d_core::netstats::{
    correlator_sweep, density_grid, fit_power_law, generate_scale_free, kappa, sample_independent,
    slice_density, DensityGrid, DiscretePowerLaw, FitData, SweepMode,
};
use rank2d_core::{
    cheirank, degree_distribution, pagerank, DirectedGraph, Direction, RankKind, RankTable,
    RankVector, SolverOptions, TableMeta, Weighting,
};

use common::{random_graph, rng};

fn vector(kind: RankKind, values: Vec<f64>) -> RankVector {
    RankVector {
        kind,
        alpha: 0.85,
        values,
        iterations: 1,
        residual: 0.0,
        residual_history: Vec::new(),
    }
}

fn normalized(v: Vec<f64>) -> Vec<f64> {
    let t: f64 = v.iter().sum();
    v.into_iter().map(|x| x / t).collect()
}

fn random_table(n: usize, seed: u64) -> RankTable {
    let mut r = rng(seed);
    let p = normalized((0..n).map(|_| r.gen::<f64>()).collect());
    let q = normalized((0..n).map(|_| r.gen::<f64>()).collect());
    RankTable::build(
        common::names(n),
        &vector(RankKind::PageRank, p),
        &vector(RankKind::CheiRank, q),
        TableMeta::default(),
    )
    .unwrap()
}

#[test]
fn grid_matches_naive_binning() {
    let n = 10_000;
    let table = random_table(n, 4);
    let cells = 100;
    let grid = density_grid(&table, cells).unwrap();
    let lmax = (n as f64).ln();
    let mut naive = vec![vec![0u64; cells]; cells];
    for node in 0..n {
        let k = table.k().positions()[node] as f64;
        let ks = table.k_star().positions()[node] as f64;
        let i = ((k.ln() / lmax * cells as f64) as usize).min(cells - 1);
        let j = ((ks.ln() / lmax * cells as f64) as usize).min(cells - 1);
        naive[i][j] += 1;
    }
    for i in 0..cells {
        for j in 0..cells {
            assert_eq!(grid.count(i, j), naive[i][j], "cell ({i}, {j})");
        }
    }
    assert!((grid.mass() - 1.0).abs() < 1e-12);
    // rank 1 sits in the first cell, rank N in the last
    assert_eq!(grid.cell_of(0.0), 0);
    assert_eq!(grid.cell_of(lmax), cells - 1);
}

#[test]
fn symmetric_bump_gives_symmetric_slice() {
    let cells = 60;
    let lmax = 12.0;
    let h = lmax / cells as f64;
    let mut w = vec![0.0; cells * cells];
    for i in 0..cells {
        for j in 0..cells {
            let (x, y) = ((i as f64 + 0.5) * h, (j as f64 + 0.5) * h);
            w[i * cells + j] = (-((x - 5.0).powi(2) + (y - 5.0).powi(2)) / 4.0).exp()
                + 0.3 * (-(x - y).powi(2)).exp();
        }
    }
    let grid = DensityGrid::from_weights(cells, lmax, w).unwrap();
    for x0 in [3.0, 5.0, 6.0, 7.3] {
        let slice = slice_density(&grid, x0).unwrap();
        for s in &slice.samples {
            let mirror = slice.at(-s.eta).expect("mirror sample");
            assert!(
                (mirror.density - s.density).abs() < 1e-15,
                "x0 {x0} eta {}",
                s.eta
            );
            assert_eq!(mirror.cell, (s.cell.1, s.cell.0));
        }
        // intervals tile the slice without gaps
        for w in slice.samples.windows(2) {
            assert!((w[0].eta_end - w[1].eta_start).abs() < 1e-12);
        }
    }
}

#[test]
fn sampler_follows_analytic_cdf() {
    let law = DiscretePowerLaw::new(2.1, 0.0, 100_000).unwrap();
    let z: f64 = (1..=100_000u64).map(|k| (k as f64).powf(-2.1)).sum();
    let mut r: ChaCha8Rng = rng(11);
    let draws = 100_000;
    let mut hist = std::collections::BTreeMap::new();
    for _ in 0..draws {
        *hist.entry(law.sample(&mut r)).or_insert(0u64) += 1;
    }
    // Kolmogorov distance against the closed-form CDF
    let mut cum = 0u64;
    let mut analytic = 0.0;
    let mut worst = 0.0f64;
    for k in 1..=1000u64 {
        cum += hist.get(&k).copied().unwrap_or(0);
        analytic += (k as f64).powf(-2.1) / z;
        assert!((law.cdf(k) - analytic).abs() < 1e-12);
        worst = worst.max((cum as f64 / draws as f64 - analytic).abs());
    }
    assert!(worst < 1.63 / (draws as f64).sqrt(), "KS distance {worst}");

    let pairs: Vec<(u64, u64)> = hist.into_iter().collect();
    let fit = fit_power_law(FitData::Histogram(&pairs), (1.0, 100.0)).unwrap();
    assert!((fit.exponent - 2.1).abs() < 0.15, "{}", fit.exponent);
}

#[test]
fn null_model_marginals() {
    let curve = normalized((1..=100).map(|k| (k as f64).powf(-0.7)).collect());
    let flat = vec![0.01; 100];
    let n = 1_000_000;
    let pairs = sample_independent(&curve, &flat, n, 2024).unwrap();
    let mut first = vec![0u64; 100];
    let mut second = vec![0u64; 100];
    for &(k, ks) in &pairs {
        first[k as usize - 1] += 1;
        second[ks as usize - 1] += 1;
    }
    let mut chi2 = 0.0;
    for r in 0..100 {
        for (count, p) in [(first[r], curve[r]), (second[r], 0.01)] {
            let expected = n as f64 * p;
            let sigma = (expected * (1.0 - p)).sqrt();
            assert!(
                (count as f64 - expected).abs() < 4.5 * sigma,
                "rank {}",
                r + 1
            );
            chi2 += (count as f64 - expected).powi(2) / expected;
        }
    }
    // two independent chi-square variables with 99 degrees of freedom each
    assert!(chi2 < 198.0 + 5.0 * (2.0 * 198.0f64).sqrt(), "chi2 {chi2}");
}

#[test]
fn sweep_matches_independent_solves() {
    let g = random_graph(200, 0.03, 8);
    let opts = SolverOptions::default();
    let values = vec![0.5, 0.65, 0.85, 0.95];
    let modes = [
        SweepMode::Diagonal(values.clone()),
        SweepMode::FixAlpha {
            alpha: 0.85,
            alpha_stars: values.clone(),
        },
        SweepMode::FixAlphaStar {
            alpha_star: 0.85,
            alphas: values.clone(),
        },
    ];
    for mode in &modes {
        for point in correlator_sweep(&g, mode, &opts).unwrap() {
            let p = pagerank(&g, point.alpha, &opts).unwrap();
            let q = cheirank(&g, point.alpha_star, &opts).unwrap();
            let n = p.len() as f64;
            let direct: f64 = n * p
                .values
                .iter()
                .zip(&q.values)
                .map(|(a, b)| a * b)
                .sum::<f64>()
                - 1.0;
            assert!(point.converged);
            assert!((point.kappa.unwrap() - direct).abs() < 1e-9);
        }
    }
}

#[test]
fn symmetric_graph_correlator() {
    let base = random_graph(150, 0.04, 21);
    let mut edges: Vec<(u32, u32, u64)> = base.edges().collect();
    edges.extend(base.edges().map(|(s, t, m)| (t, s, m)));
    let g = DirectedGraph::from_edges(common::names(150), edges).unwrap();
    let opts = SolverOptions::default();
    let p = pagerank(&g, 0.85, &opts).unwrap();
    let q = cheirank(&g, 0.85, &opts).unwrap();
    let sum_sq: f64 = p.values.iter().map(|x| x * x).sum();
    let k = kappa(&p.values, &q.values).unwrap();
    assert!((k - (150.0 * sum_sq - 1.0)).abs() < 1e-9);
    assert!(k >= -1e-12);
}

#[test]
fn correlator_of_uniform_vector_is_zero() {
    for n in [1usize, 3, 49, 100, 1000, 3_282_257] {
        let u = vec![1.0 / n as f64; n];
        assert_eq!(kappa(&u, &u).unwrap(), 0.0, "n = {n}");
    }
    let u = vec![0.01; 100];
    let mut r = rng(1);
    let v = normalized((0..100).map(|_| r.gen::<f64>()).collect());
    assert_eq!(kappa(&u, &v).unwrap(), 0.0);
    assert_eq!(kappa(&v, &u).unwrap(), 0.0);
}

#[test]
fn correlator_matches_direct_formula() {
    let mut r = rng(2);
    for n in [2usize, 10, 500] {
        let p = normalized((0..n).map(|_| r.gen::<f64>()).collect());
        let q = normalized((0..n).map(|_| r.gen::<f64>().powi(4)).collect());
        let direct = n as f64 * p.iter().zip(&q).map(|(a, b)| a * b).sum::<f64>() - 1.0;
        assert!((kappa(&p, &q).unwrap() - direct).abs() < 1e-12);
    }
}

#[test]
fn exact_power_law_curve_is_recovered() {
    let points: Vec<(f64, f64)> = (1..=10_000)
        .map(|k| (k as f64, 3.0 * (k as f64).powf(-0.92)))
        .collect();
    let fit = fit_power_law(FitData::Curve(&points), (1.0, 10_000.0)).unwrap();
    assert!((fit.exponent - 0.92).abs() < 1e-12);
    assert!(fit.stderr < 1e-10);
    assert!((fit.predict(50.0) - 3.0 * 50f64.powf(-0.92)).abs() < 1e-9);
}

#[test]
fn generator_recovers_in_degree_exponent() {
    let g = generate_scale_free(100_000, 2.1, 2.76, 5.0, 77).unwrap();
    let hist = degree_distribution(&g, Direction::In, Weighting::Multiplicity);
    let pairs: Vec<(u64, u64)> = hist.counts.iter().map(|(&k, &c)| (k, c)).collect();
    let fit = fit_power_law(FitData::Histogram(&pairs), (1.0, 100.0)).unwrap();
    assert!((fit.exponent - 2.1).abs() < 0.15, "mu_in {}", fit.exponent);
    assert_eq!(hist.total(), 100_000);
}
