//! Least-squares power-law fits on logarithmically binned data.
//!
//! The fit range is always explicit. Points are grouped into bins of equal
//! width in `log10 x` (default 10 per decade) starting at the lower end of the
//! range, and a straight line is fitted to the per-bin `(ln x, ln y)` centroids.
//!
//! Two kinds of input are supported. A [`FitData::Curve`] is a sampled
//! function (for instance `P(K)` over ranks); each bin averages `ln x` and
//! `ln y` over its points, which keeps an exact power law exact. A
//! [`FitData::Histogram`] holds integer-valued observations with counts; each
//! bin's value is its total count divided by the number of integers it spans
//! and by the total count, placed at the geometric mean of those integers.

use std::io::Write;

use crate::error::{Error, Result};

/// Exponents reported for the English Wikipedia network of August 2009.
pub mod wikipedia_2009 {
    pub const MU_IN: f64 = 2.09;
    pub const MU_IN_ERR: f64 = 0.04;
    pub const MU_OUT: f64 = 2.76;
    pub const MU_OUT_ERR: f64 = 0.06;
    pub const BETA_PAGERANK: f64 = 0.92;
    pub const BETA_CHEIRANK: f64 = 0.57;
}

pub const DEFAULT_BINS_PER_DECADE: usize = 10;
pub const MIN_FIT_POINTS: usize = 5;

#[derive(Debug, Clone, Copy)]
pub enum FitData<'a> {
    /// `(x, y)` samples of a function.
    Curve(&'a [(f64, f64)]),
    /// `(value, count)` pairs, for example a degree histogram.
    Histogram(&'a [(u64, u64)]),
}

#[derive(Debug, Clone, PartialEq)]
pub struct PowerLawFit {
    /// `γ` in `y ∝ x^(−γ)`; positive for decaying laws.
    pub exponent: f64,
    pub stderr: f64,
    pub fit_range: (f64, f64),
    pub r_squared: f64,
    /// Binned `(x, y)` points the line was fitted to.
    pub points: Vec<(f64, f64)>,
    /// `ln y = intercept − exponent · ln x`.
    pub intercept: f64,
}

impl PowerLawFit {
    pub fn predict(&self, x: f64) -> f64 {
        (self.intercept - self.exponent * x.ln()).exp()
    }

    /// CSV `x,y` of the binned points, preceded by a `#` line with the fit.
    pub fn write_csv<W: Write>(&self, mut out: W) -> Result<()> {
        writeln!(
            out,
            "# exponent={} stderr={} r_squared={} fit_min={} fit_max={}",
            self.exponent, self.stderr, self.r_squared, self.fit_range.0, self.fit_range.1
        )?;
        writeln!(out, "x,y")?;
        for (x, y) in &self.points {
            writeln!(out, "{x:e},{y:e}")?;
        }
        out.flush()?;
        Ok(())
    }
}

pub fn fit_power_law(data: FitData<'_>, fit_range: (f64, f64)) -> Result<PowerLawFit> {
    fit_power_law_with(data, fit_range, DEFAULT_BINS_PER_DECADE)
}

pub fn fit_power_law_with(
    data: FitData<'_>,
    fit_range: (f64, f64),
    bins_per_decade: usize,
) -> Result<PowerLawFit> {
    let (lo, hi) = fit_range;
    if !(lo > 0.0 && hi > lo && hi.is_finite()) {
        return Err(Error::contract(format!(
            "fit range must satisfy 0 < min < max, got [{lo}, {hi}]"
        )));
    }
    if bins_per_decade == 0 {
        return Err(Error::contract("bins per decade must be positive"));
    }
    let n_bins = (((hi / lo).log10() * bins_per_decade as f64).ceil() as usize).max(1);
    let bin_of = |x: f64| {
        let b = ((x / lo).log10() * bins_per_decade as f64).floor();
        if b <= 0.0 {
            0
        } else {
            (b as usize).min(n_bins - 1)
        }
    };

    let mut points = Vec::new();
    match data {
        FitData::Curve(samples) => {
            let mut acc = vec![(0.0f64, 0.0f64, 0usize); n_bins];
            for &(x, y) in samples {
                if !(x >= lo && x <= hi) {
                    continue;
                }
                if !(y > 0.0) {
                    return Err(Error::contract(format!(
                        "non-positive value {y} at x = {x} inside the fit range"
                    )));
                }
                let a = &mut acc[bin_of(x)];
                a.0 += x.ln();
                a.1 += y.ln();
                a.2 += 1;
            }
            points.extend(
                acc.into_iter()
                    .filter(|a| a.2 > 0)
                    .map(|(lx, ly, c)| ((lx / c as f64).exp(), (ly / c as f64).exp())),
            );
        }
        FitData::Histogram(hist) => {
            let total: u64 = hist.iter().map(|&(_, c)| c).sum();
            if total == 0 {
                return Err(Error::contract("histogram is empty"));
            }
            let mut mass = vec![0u64; n_bins];
            for &(k, c) in hist {
                let x = k as f64;
                if x >= lo && x <= hi {
                    mass[bin_of(x)] += c;
                }
            }
            // integers spanned by each bin within the fit range
            let mut span = vec![(0u64, 0.0f64); n_bins];
            let first = lo.ceil() as u64;
            let last = hi.floor() as u64;
            for k in first..=last {
                let s = &mut span[bin_of(k as f64)];
                s.0 += 1;
                s.1 += (k as f64).ln();
            }
            for b in 0..n_bins {
                let (width, log_sum) = span[b];
                if width == 0 {
                    continue;
                }
                if mass[b] == 0 {
                    let x = (log_sum / width as f64).exp();
                    return Err(Error::contract(format!(
                        "empty bin around x = {x:.1} inside the fit range"
                    )));
                }
                points.push((
                    (log_sum / width as f64).exp(),
                    mass[b] as f64 / width as f64 / total as f64,
                ));
            }
        }
    }

    if points.len() < MIN_FIT_POINTS {
        return Err(Error::contract(format!(
            "need at least {MIN_FIT_POINTS} binned points in the fit range, found {}",
            points.len()
        )));
    }
    let line = least_squares(points.iter().map(|&(x, y)| (x.ln(), y.ln())));
    Ok(PowerLawFit {
        exponent: -line.slope,
        stderr: line.slope_stderr,
        fit_range,
        r_squared: line.r_squared,
        points,
        intercept: line.intercept,
    })
}

struct Line {
    slope: f64,
    intercept: f64,
    slope_stderr: f64,
    r_squared: f64,
}

fn least_squares<I: Iterator<Item = (f64, f64)> + Clone>(xy: I) -> Line {
    let n = xy.clone().count() as f64;
    let (sx, sy) = xy.clone().fold((0.0, 0.0), |(a, b), (x, y)| (a + x, b + y));
    let (mx, my) = (sx / n, sy / n);
    let (mut sxx, mut sxy, mut syy) = (0.0, 0.0, 0.0);
    for (x, y) in xy.clone() {
        sxx += (x - mx) * (x - mx);
        sxy += (x - mx) * (y - my);
        syy += (y - my) * (y - my);
    }
    let slope = sxy / sxx;
    let intercept = my - slope * mx;
    let ssr: f64 = xy
        .map(|(x, y)| {
            let r = y - (intercept + slope * x);
            r * r
        })
        .sum();
    let slope_stderr = if n > 2.0 {
        (ssr / (n - 2.0) / sxx).sqrt()
    } else {
        f64::NAN
    };
    let r_squared = if syy > 0.0 { 1.0 - ssr / syy } else { 1.0 };
    Line {
        slope,
        intercept,
        slope_stderr,
        r_squared,
    }
}
