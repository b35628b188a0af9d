use std::io::{BufRead, Write};

use crate::error::{Error, Result};
use crate::googlerank::{parse_header, parse_num};
use crate::sum::compensated_sum;
use crate::twodrank::RankTable;

/// Node counts on a `cells x cells` equidistant grid over `[0, ln N]^2` in
/// the `(ln K, ln K*)` plane. Cell `(i, j)` covers `ln K` in
/// `[i h, (i + 1) h)` and `ln K*` in `[j h, (j + 1) h)`, `h = ln N / cells`;
/// the last cell on each axis is closed.
#[derive(Debug, Clone, PartialEq)]
pub struct DensityGrid {
    cells: usize,
    axis_max: f64,
    /// Number of binned points, or 0 for grids built from raw weights.
    total: u64,
    counts: Vec<u64>,
    weights: Vec<f64>,
}

impl DensityGrid {
    /// Bins `(K, K*)` pairs with ranks in `1..=n_ranks`.
    pub fn from_pairs(pairs: &[(u32, u32)], n_ranks: usize, cells: usize) -> Result<Self> {
        if n_ranks < 2 {
            return Err(Error::contract("density grid needs at least two ranks"));
        }
        if cells < 2 {
            return Err(Error::contract(
                "density grid needs at least 2 cells per axis",
            ));
        }
        if pairs.is_empty() {
            return Err(Error::contract("no points to bin"));
        }
        let axis_max = (n_ranks as f64).ln();
        let mut counts = vec![0u64; cells * cells];
        for &(k, ks) in pairs {
            if k == 0 || ks == 0 || k as usize > n_ranks || ks as usize > n_ranks {
                return Err(Error::contract(format!(
                    "rank pair ({k}, {ks}) outside 1..={n_ranks}"
                )));
            }
            let i = cell_index((k as f64).ln(), axis_max, cells);
            let j = cell_index((ks as f64).ln(), axis_max, cells);
            counts[i * cells + j] += 1;
        }
        let total = pairs.len() as u64;
        let weights = counts.iter().map(|&c| c as f64 / total as f64).collect();
        Ok(Self {
            cells,
            axis_max,
            total,
            counts,
            weights,
        })
    }

    /// A grid from arbitrary non-negative weights (row-major, `i` along `ln K`),
    /// normalized to unit mass.
    pub fn from_weights(cells: usize, axis_max: f64, weights: Vec<f64>) -> Result<Self> {
        if cells < 2 || weights.len() != cells * cells {
            return Err(Error::contract("weights must form a cells x cells grid"));
        }
        if !(axis_max > 0.0) {
            return Err(Error::contract("axis range must be positive"));
        }
        if weights.iter().any(|w| !(*w >= 0.0)) {
            return Err(Error::contract("weights must be non-negative"));
        }
        let mass = compensated_sum(weights.iter().copied());
        if !(mass > 0.0) {
            return Err(Error::contract("weights have zero mass"));
        }
        Ok(Self {
            cells,
            axis_max,
            total: 0,
            counts: vec![0; cells * cells],
            weights: weights.into_iter().map(|w| w / mass).collect(),
        })
    }

    pub fn cells(&self) -> usize {
        self.cells
    }

    /// Upper end of both axes, `ln N`.
    pub fn axis_max(&self) -> f64 {
        self.axis_max
    }

    pub fn cell_width(&self) -> f64 {
        self.axis_max / self.cells as f64
    }

    pub fn total(&self) -> u64 {
        self.total
    }

    pub fn count(&self, i: usize, j: usize) -> u64 {
        self.counts[i * self.cells + j]
    }

    /// Fraction of points in cell `(i, j)`.
    pub fn weight(&self, i: usize, j: usize) -> f64 {
        self.weights[i * self.cells + j]
    }

    pub fn counts(&self) -> &[u64] {
        &self.counts
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn mass(&self) -> f64 {
        compensated_sum(self.weights.iter().copied())
    }

    /// Cell index along either axis for a log-rank coordinate.
    pub fn cell_of(&self, log_rank: f64) -> usize {
        cell_index(log_rank, self.axis_max, self.cells)
    }

    /// Weight per unit area of the `(K, K*)` plane, `dN / (N dK dK*)`.
    pub fn density_per_area(&self, i: usize, j: usize) -> f64 {
        let h = self.cell_width();
        let extent = |c: usize| ((c + 1) as f64 * h).exp() - (c as f64 * h).exp();
        self.weight(i, j) / (extent(i) * extent(j))
    }

    /// CSV: `#` header with `n`, `cells` and the axis range, then
    /// `i,j,count,W,density_per_area` for every cell.
    pub fn write_csv<W: Write>(&self, mut out: W) -> Result<()> {
        writeln!(
            out,
            "# n={} cells={} axis_min=0 axis_max={}",
            self.total, self.cells, self.axis_max
        )?;
        writeln!(out, "i,j,count,W,density_per_area")?;
        for i in 0..self.cells {
            for j in 0..self.cells {
                writeln!(
                    out,
                    "{i},{j},{},{:e},{:e}",
                    self.count(i, j),
                    self.weight(i, j),
                    self.density_per_area(i, j)
                )?;
            }
        }
        out.flush()?;
        Ok(())
    }

    pub fn read_csv<R: BufRead>(reader: R) -> Result<Self> {
        let mut lines = reader.lines().enumerate();
        let header = match lines.next() {
            Some((_, l)) => l?,
            None => return Err(Error::EmptyInput("density grid file is empty".into())),
        };
        let fields = parse_header(&header, 1)?;
        let get = |key: &str| {
            fields
                .iter()
                .find(|(k, _)| k == key)
                .map(|(_, v)| v.as_str())
                .ok_or_else(|| Error::parse(1, format!("header is missing {key}")))
        };
        let total: u64 = parse_num(get("n")?, 1)?;
        let cells: usize = parse_num(get("cells")?, 1)?;
        let axis_max: f64 = parse_num(get("axis_max")?, 1)?;
        lines.next();
        let mut counts = vec![0u64; cells * cells];
        let mut weights = vec![0f64; cells * cells];
        let mut seen = 0usize;
        for (i, line) in lines {
            let lineno = i + 1;
            let line = line?;
            if line.is_empty() {
                continue;
            }
            let cols: Vec<&str> = line.split(',').collect();
            if cols.len() != 5 {
                return Err(Error::parse(lineno, "expected 5 columns"));
            }
            let ci: usize = parse_num(cols[0], lineno)?;
            let cj: usize = parse_num(cols[1], lineno)?;
            if ci >= cells || cj >= cells {
                return Err(Error::parse(lineno, "cell index out of range"));
            }
            counts[ci * cells + cj] = parse_num(cols[2], lineno)?;
            weights[ci * cells + cj] = parse_num(cols[3], lineno)?;
            seen += 1;
        }
        if seen != cells * cells {
            return Err(Error::parse(
                1,
                format!("expected {} cells, found {seen}", cells * cells),
            ));
        }
        Ok(Self {
            cells,
            axis_max,
            total,
            counts,
            weights,
        })
    }
}

fn cell_index(log_rank: f64, axis_max: f64, cells: usize) -> usize {
    let c = (log_rank / axis_max * cells as f64).floor();
    if c <= 0.0 {
        0
    } else {
        (c as usize).min(cells - 1)
    }
}

/// Bins every node of the table at `(ln K, ln K*)`.
pub fn density_grid(table: &RankTable, cells: usize) -> Result<DensityGrid> {
    DensityGrid::from_pairs(&table.rank_pairs(), table.len(), cells)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EtaSample {
    /// Midpoint of the η interval spent inside the cell.
    pub eta: f64,
    pub eta_start: f64,
    pub eta_end: f64,
    pub cell: (usize, usize),
    pub density: f64,
}

/// Grid weights along `ln K = x0 + η/2, ln K* = x0 − η/2`.
#[derive(Debug, Clone, PartialEq)]
pub struct EtaSlice {
    pub x0: f64,
    pub samples: Vec<EtaSample>,
}

impl EtaSlice {
    /// The sample whose η interval contains `eta`.
    pub fn at(&self, eta: f64) -> Option<&EtaSample> {
        self.samples
            .iter()
            .find(|s| s.eta_start <= eta && eta <= s.eta_end)
    }

    pub fn write_csv<W: Write>(&self, mut out: W) -> Result<()> {
        writeln!(out, "eta,density")?;
        for s in &self.samples {
            writeln!(out, "{},{:e}", s.eta, s.density)?;
        }
        out.flush()?;
        Ok(())
    }
}

/// Walks the η-line through the grid, one sample per cell crossed.
pub fn slice_density(grid: &DensityGrid, x0: f64) -> Result<EtaSlice> {
    let l = grid.axis_max();
    if !(0.0..=l).contains(&x0) {
        return Err(Error::contract(format!("x0 = {x0} outside [0, {l}]")));
    }
    let lo = (-2.0 * x0).max(2.0 * (x0 - l));
    let hi = (2.0 * (l - x0)).min(2.0 * x0);
    let h = grid.cell_width();

    let mut cuts = vec![lo, hi];
    for m in 1..grid.cells() {
        let line = m as f64 * h;
        for eta in [2.0 * (line - x0), 2.0 * (x0 - line)] {
            if eta > lo && eta < hi {
                cuts.push(eta);
            }
        }
    }
    cuts.sort_by(f64::total_cmp);
    cuts.dedup_by(|a, b| (*a - *b).abs() <= 1e-12 * (1.0 + l));

    let sample = |start: f64, end: f64| {
        let eta = 0.5 * (start + end);
        let i = grid.cell_of(x0 + eta / 2.0);
        let j = grid.cell_of(x0 - eta / 2.0);
        EtaSample {
            eta,
            eta_start: start,
            eta_end: end,
            cell: (i, j),
            density: grid.weight(i, j),
        }
    };
    let samples = if cuts.len() < 2 {
        vec![sample(lo, hi)]
    } else {
        cuts.windows(2).map(|w| sample(w[0], w[1])).collect()
    };
    Ok(EtaSlice { x0, samples })
}
