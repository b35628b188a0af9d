use std::io::Write;

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::googlerank::{power_iterate, GoogleOperator, RankKind, RankVector, SolverOptions};
use crate::graph::{invert, DirectedGraph};
use crate::sum::compensated_sum;

/// Reference value for the English Wikipedia network of August 2009 at
/// `α = α* = 0.85`. Not reproducible here; kept for documentation only.
pub const WIKIPEDIA_2009_KAPPA: f64 = 4.08;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Correlator {
    pub kappa: f64,
    pub alpha: f64,
    pub alpha_star: f64,
}

/// `N Σ p_i q_i − 1` of the normalized vectors.
///
/// Evaluated in the centred form `Σ (N p_i − S_p)(N q_i − S_q) / (N S_p S_q)`,
/// which avoids cancellation near zero and gives exactly 0 for constant vectors.
pub fn kappa(p: &[f64], q: &[f64]) -> Result<f64> {
    if p.len() != q.len() {
        return Err(Error::contract(format!(
            "vectors have {} and {} entries",
            p.len(),
            q.len()
        )));
    }
    if p.is_empty() {
        return Err(Error::contract("empty vectors"));
    }
    let n = p.len() as f64;
    let sp = compensated_sum(p.iter().copied());
    let sq = compensated_sum(q.iter().copied());
    if !(sp > 0.0 && sq > 0.0) {
        return Err(Error::contract("vectors must have positive mass"));
    }
    let cov = compensated_sum(p.iter().zip(q).map(|(a, b)| (n * a - sp) * (n * b - sq)));
    Ok(cov / (n * sp * sq))
}

pub fn correlator(p: &RankVector, p_star: &RankVector) -> Result<Correlator> {
    Ok(Correlator {
        kappa: kappa(&p.values, &p_star.values)?,
        alpha: p.alpha,
        alpha_star: p_star.alpha,
    })
}

#[derive(Debug, Clone, PartialEq)]
pub enum SweepMode {
    /// `α = α*` for each value.
    Diagonal(Vec<f64>),
    /// Fixed `α`, varying `α*`.
    FixAlpha { alpha: f64, alpha_stars: Vec<f64> },
    /// Fixed `α*`, varying `α`.
    FixAlphaStar { alpha_star: f64, alphas: Vec<f64> },
}

impl SweepMode {
    fn points(&self) -> Vec<(f64, f64)> {
        match self {
            SweepMode::Diagonal(v) => v.iter().map(|&a| (a, a)).collect(),
            SweepMode::FixAlpha { alpha, alpha_stars } => {
                alpha_stars.iter().map(|&s| (*alpha, s)).collect()
            }
            SweepMode::FixAlphaStar { alpha_star, alphas } => {
                alphas.iter().map(|&a| (a, *alpha_star)).collect()
            }
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SweepPoint {
    pub alpha: f64,
    pub alpha_star: f64,
    /// `None` when either solve failed to converge.
    pub kappa: Option<f64>,
    pub converged: bool,
}

/// Computes κ at every parameter point from freshly converged vectors.
/// Points that fail to converge are reported, not fatal.
pub fn correlator_sweep(
    g: &DirectedGraph,
    mode: &SweepMode,
    opts: &SolverOptions,
) -> Result<Vec<SweepPoint>> {
    let points = mode.points();
    if let Some((a, s)) = points
        .iter()
        .find(|(a, s)| !(*a > 0.0 && *a < 1.0 && *s > 0.0 && *s < 1.0))
    {
        return Err(Error::contract(format!(
            "sweep damping values must lie in (0, 1), got ({a}, {s})"
        )));
    }
    let forward = GoogleOperator::new(g);
    let backward = GoogleOperator::new(&invert(g));
    let opts = SolverOptions {
        workers: None,
        ..*opts
    };
    Ok(points
        .par_iter()
        .map(|&(alpha, alpha_star)| {
            let p = power_iterate(&forward, RankKind::PageRank, alpha, &opts);
            let q = power_iterate(&backward, RankKind::CheiRank, alpha_star, &opts);
            match (p, q) {
                (Ok(p), Ok(q)) => SweepPoint {
                    alpha,
                    alpha_star,
                    kappa: Some(kappa(&p.values, &q.values).expect("same graph")),
                    converged: true,
                },
                _ => SweepPoint {
                    alpha,
                    alpha_star,
                    kappa: None,
                    converged: false,
                },
            }
        })
        .collect())
}

/// CSV `alpha,alpha_star,kappa,converged`; failed points have an empty κ.
pub fn write_sweep_csv<W: Write>(points: &[SweepPoint], mut out: W) -> Result<()> {
    writeln!(out, "alpha,alpha_star,kappa,converged")?;
    for p in points {
        let k = p.kappa.map(|k| format!("{k:e}")).unwrap_or_default();
        writeln!(out, "{},{},{},{}", p.alpha, p.alpha_star, k, p.converged)?;
    }
    out.flush()?;
    Ok(())
}
