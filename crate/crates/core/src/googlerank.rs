//! Google matrix power iteration.
//!
//! For a graph with `N` nodes the Google matrix is `G = α S + (1 − α)/N`,
//! where `S` is the column-stochastic adjacency: column `j` holds
//! `mult(j → i) / outweight(j)`, and columns of dangling nodes (no outgoing
//! links) are uniform `1/N`. The matrix is never built; applying it costs one
//! pass over the edges plus two reductions:
//!
//! ```text
//! (G v)_i = α Σ_{j→i} v_j mult(j→i)/outweight(j) + (α d + 1 − α)/N
//! ```
//!
//! with `d` the total mass currently sitting on dangling nodes.
//!
//! PageRank is the fixed point of `G`; CheiRank is the fixed point of the
//! Google matrix of the inverted graph.
//!
//! The operator is evaluated in pull form over fixed-size node chunks, and
//! every reduction sums per-chunk partials in chunk order, so results are
//! bit-identical for any number of worker threads.

use std::fmt;
use std::io::{BufRead, Write};

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::graph::{invert, DirectedGraph};
use crate::sum::compensated_sum;

const CHUNK: usize = 4096;

/// Tolerance on `|Σv − 1|` accepted by [`apply_google`].
pub const INPUT_NORMALIZATION_TOL: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum RankKind {
    PageRank,
    CheiRank,
}

impl fmt::Display for RankKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            RankKind::PageRank => "pagerank",
            RankKind::CheiRank => "cheirank",
        })
    }
}

impl std::str::FromStr for RankKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "pagerank" => Ok(RankKind::PageRank),
            "cheirank" => Ok(RankKind::CheiRank),
            other => Err(Error::contract(format!("unknown rank kind {other:?}"))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DampingParams {
    pub alpha: f64,
    pub alpha_star: f64,
}

impl Default for DampingParams {
    fn default() -> Self {
        Self {
            alpha: 0.85,
            alpha_star: 0.85,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SolverOptions {
    /// Stop when the L1 distance between successive iterates drops below this.
    pub tol: f64,
    pub max_iter: usize,
    /// Worker threads; `None` uses the global rayon pool.
    pub workers: Option<usize>,
}

impl Default for SolverOptions {
    fn default() -> Self {
        Self {
            tol: 1e-10,
            max_iter: 1000,
            workers: None,
        }
    }
}

/// A probability vector over the nodes of a graph.
#[derive(Debug, Clone, PartialEq)]
pub struct RankVector {
    pub kind: RankKind,
    pub alpha: f64,
    pub values: Vec<f64>,
    pub iterations: usize,
    /// L1 distance between the last two iterates.
    pub residual: f64,
    /// Residual after each iteration.
    pub residual_history: Vec<f64>,
}

impl RankVector {
    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn sum(&self) -> f64 {
        compensated_sum(self.values.iter().copied())
    }

    /// Writes `name TAB probability` rows in node-index order after a `#` header.
    pub fn write_tsv<W: Write>(&self, names: &[String], mut out: W) -> Result<()> {
        if names.len() != self.values.len() {
            return Err(Error::contract("name table does not match rank vector"));
        }
        writeln!(
            out,
            "# kind={} alpha={} iterations={} residual={:e}",
            self.kind, self.alpha, self.iterations, self.residual
        )?;
        for (name, p) in names.iter().zip(&self.values) {
            writeln!(out, "{name}\t{p:e}")?;
        }
        out.flush()?;
        Ok(())
    }

    /// Reads the format produced by [`RankVector::write_tsv`]; returns names and vector.
    pub fn read_tsv<R: BufRead>(reader: R) -> Result<(Vec<String>, RankVector)> {
        let mut lines = reader.lines().enumerate();
        let header = match lines.next() {
            Some((_, line)) => line?,
            None => return Err(Error::EmptyInput("rank vector file is empty".into())),
        };
        let fields = parse_header(&header, 1)?;
        let get = |key: &str| {
            fields
                .iter()
                .find(|(k, _)| k == key)
                .map(|(_, v)| v.as_str())
                .ok_or_else(|| Error::parse(1, format!("header is missing {key}")))
        };
        let kind: RankKind = get("kind")?
            .parse()
            .map_err(|_| Error::parse(1, "bad kind"))?;
        let alpha = parse_num::<f64>(get("alpha")?, 1)?;
        let iterations = parse_num::<usize>(get("iterations")?, 1)?;
        let residual = parse_num::<f64>(get("residual")?, 1)?;

        let mut names = Vec::new();
        let mut values = Vec::new();
        for (i, line) in lines {
            let line = line?;
            if line.is_empty() {
                continue;
            }
            let (name, p) = line
                .split_once('\t')
                .ok_or_else(|| Error::parse(i + 1, "expected name TAB probability"))?;
            names.push(name.to_owned());
            values.push(parse_num::<f64>(p, i + 1)?);
        }
        Ok((
            names,
            RankVector {
                kind,
                alpha,
                values,
                iterations,
                residual,
                residual_history: Vec::new(),
            },
        ))
    }
}

pub(crate) fn parse_header(line: &str, lineno: usize) -> Result<Vec<(String, String)>> {
    let body = line
        .strip_prefix('#')
        .ok_or_else(|| Error::parse(lineno, "expected '#' header line"))?;
    body.split_whitespace()
        .filter(|tok| tok.contains('='))
        .map(|tok| {
            let (k, v) = tok.split_once('=').unwrap();
            Ok((k.to_owned(), v.to_owned()))
        })
        .collect()
}

pub(crate) fn parse_num<T: std::str::FromStr>(raw: &str, lineno: usize) -> Result<T> {
    raw.trim()
        .parse()
        .map_err(|_| Error::parse(lineno, format!("invalid number {raw:?}")))
}

/// Pull-form representation of the column-normalized adjacency.
#[derive(Debug, Clone)]
pub struct GoogleOperator {
    n: usize,
    offsets: Vec<usize>,
    sources: Vec<u32>,
    coefficients: Vec<f64>,
    dangling: Vec<u32>,
}

impl GoogleOperator {
    pub fn new(g: &DirectedGraph) -> Self {
        let out_weight = g.out_weights();
        let transposed = invert(g);
        let n = g.n_nodes();
        let mut offsets = Vec::with_capacity(n + 1);
        let mut sources = Vec::with_capacity(transposed.n_edges());
        let mut coefficients = Vec::with_capacity(transposed.n_edges());
        offsets.push(0);
        for i in 0..n {
            let (src, mult) = transposed.successors(i);
            for (&j, &m) in src.iter().zip(mult) {
                sources.push(j);
                coefficients.push(m as f64 / out_weight[j as usize] as f64);
            }
            offsets.push(sources.len());
        }
        let dangling = (0..n as u32)
            .filter(|&j| out_weight[j as usize] == 0)
            .collect();
        Self {
            n,
            offsets,
            sources,
            coefficients,
            dangling,
        }
    }

    pub fn n_nodes(&self) -> usize {
        self.n
    }

    pub fn dangling_nodes(&self) -> &[u32] {
        &self.dangling
    }

    /// Writes `G v` into `out`. `v` is assumed non-negative with unit sum.
    pub fn apply_into(&self, alpha: f64, v: &[f64], out: &mut [f64]) {
        debug_assert_eq!(v.len(), self.n);
        debug_assert_eq!(out.len(), self.n);
        let dangling_mass = compensated_sum(self.dangling.iter().map(|&j| v[j as usize]));
        let uniform = (alpha * dangling_mass + (1.0 - alpha)) / self.n as f64;
        out.par_chunks_mut(CHUNK)
            .enumerate()
            .for_each(|(c, chunk)| {
                let base = c * CHUNK;
                for (k, slot) in chunk.iter_mut().enumerate() {
                    let i = base + k;
                    let range = self.offsets[i]..self.offsets[i + 1];
                    let pushed: f64 = self.sources[range.clone()]
                        .iter()
                        .zip(&self.coefficients[range])
                        .map(|(&j, &c)| c * v[j as usize])
                        .sum();
                    *slot = alpha * pushed + uniform;
                }
            });
    }
}

/// Sums `f(i)` over `0..n` with per-chunk partials combined in chunk order.
fn chunked_sum<F: Fn(usize) -> f64 + Sync>(n: usize, f: F) -> f64 {
    let partials: Vec<f64> = (0..n.div_ceil(CHUNK))
        .into_par_iter()
        .map(|c| {
            let lo = c * CHUNK;
            let hi = (lo + CHUNK).min(n);
            compensated_sum((lo..hi).map(&f))
        })
        .collect();
    compensated_sum(partials)
}

fn check_alpha(alpha: f64) -> Result<()> {
    if !(alpha > 0.0 && alpha <= 1.0) {
        return Err(Error::contract(format!(
            "damping factor must lie in (0, 1], got {alpha}"
        )));
    }
    Ok(())
}

fn check_distribution(v: &[f64], n: usize) -> Result<()> {
    if v.len() != n {
        return Err(Error::contract(format!(
            "vector has {} entries for {n} nodes",
            v.len()
        )));
    }
    if let Some(x) = v.iter().find(|x| !(**x >= 0.0) || !x.is_finite()) {
        return Err(Error::contract(format!("vector has invalid entry {x}")));
    }
    let total = compensated_sum(v.iter().copied());
    if (total - 1.0).abs() > INPUT_NORMALIZATION_TOL {
        return Err(Error::contract(format!(
            "vector is not normalized: sum = {total}"
        )));
    }
    Ok(())
}

/// One application of the Google matrix of `g` to the probability vector `v`.
pub fn apply_google(g: &DirectedGraph, alpha: f64, v: &[f64]) -> Result<Vec<f64>> {
    check_alpha(alpha)?;
    if g.n_nodes() == 0 {
        return Err(Error::contract("graph has no nodes"));
    }
    check_distribution(v, g.n_nodes())?;
    let op = GoogleOperator::new(g);
    let mut out = vec![0.0; g.n_nodes()];
    op.apply_into(alpha, v, &mut out);
    Ok(out)
}

fn with_workers<T: Send>(workers: Option<usize>, f: impl FnOnce() -> T + Send) -> Result<T> {
    match workers {
        None => Ok(f()),
        Some(0) => Err(Error::contract("worker count must be positive")),
        Some(w) => {
            let pool = rayon::ThreadPoolBuilder::new()
                .num_threads(w)
                .build()
                .map_err(|e| Error::contract(format!("cannot build thread pool: {e}")))?;
            Ok(pool.install(f))
        }
    }
}

/// Power iteration from the uniform vector until the L1 step falls below `opts.tol`.
pub fn power_iterate(
    op: &GoogleOperator,
    kind: RankKind,
    alpha: f64,
    opts: &SolverOptions,
) -> Result<RankVector> {
    check_alpha(alpha)?;
    if !(opts.tol > 0.0) {
        return Err(Error::contract("tolerance must be positive"));
    }
    let n = op.n_nodes();
    if n == 0 {
        return Err(Error::contract("graph has no nodes"));
    }

    with_workers(opts.workers, || {
        let mut current = vec![1.0 / n as f64; n];
        let mut next = vec![0.0; n];
        let mut history = Vec::new();
        let mut residual = f64::INFINITY;
        for _ in 0..opts.max_iter {
            op.apply_into(alpha, &current, &mut next);
            let total = chunked_sum(n, |i| next[i]);
            next.par_iter_mut().for_each(|x| *x /= total);
            residual = chunked_sum(n, |i| (next[i] - current[i]).abs());
            history.push(residual);
            std::mem::swap(&mut current, &mut next);
            if residual < opts.tol {
                break;
            }
        }
        let rv = RankVector {
            kind,
            alpha,
            values: current,
            iterations: history.len(),
            residual,
            residual_history: history,
        };
        if rv.residual < opts.tol {
            Ok(rv)
        } else {
            Err(Error::NotConverged { last: Box::new(rv) })
        }
    })?
}

/// PageRank: stationary vector of the Google matrix of `g`.
pub fn pagerank(g: &DirectedGraph, alpha: f64, opts: &SolverOptions) -> Result<RankVector> {
    power_iterate(&GoogleOperator::new(g), RankKind::PageRank, alpha, opts)
}

/// CheiRank: PageRank of the graph with every link reversed.
pub fn cheirank(g: &DirectedGraph, alpha_star: f64, opts: &SolverOptions) -> Result<RankVector> {
    let inverted = invert(g);
    let mut rv = pagerank(&inverted, alpha_star, opts).map_err(|e| match e {
        Error::NotConverged { mut last } => {
            last.kind = RankKind::CheiRank;
            Error::NotConverged { last }
        }
        other => other,
    })?;
    rv.kind = RankKind::CheiRank;
    Ok(rv)
}
