use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::sum::compensated_sum;

/// Draws per seeded stream in [`sample_independent`].
const SAMPLE_CHUNK: usize = 1 << 16;

/// Inverse-CDF sampler over `0..weights.len()`.
#[derive(Debug, Clone)]
pub struct InverseCdf {
    cdf: Vec<f64>,
}

impl InverseCdf {
    pub fn new(weights: &[f64]) -> Result<Self> {
        if weights.is_empty() {
            return Err(Error::contract("no weights"));
        }
        if let Some(w) = weights.iter().find(|w| !(**w >= 0.0) || !w.is_finite()) {
            return Err(Error::contract(format!("invalid weight {w}")));
        }
        let mut cdf = Vec::with_capacity(weights.len());
        let mut acc = 0.0;
        let mut comp = 0.0;
        for &w in weights {
            // compensated running sum
            let y = w - comp;
            let t = acc + y;
            comp = (t - acc) - y;
            acc = t;
            cdf.push(acc);
        }
        if !(acc > 0.0) {
            return Err(Error::contract("weights have zero mass"));
        }
        Ok(Self { cdf })
    }

    pub fn len(&self) -> usize {
        self.cdf.len()
    }

    pub fn is_empty(&self) -> bool {
        self.cdf.is_empty()
    }

    pub fn total(&self) -> f64 {
        *self.cdf.last().unwrap()
    }

    /// Cumulative probability of indices `0..=i`.
    pub fn cumulative(&self, i: usize) -> f64 {
        self.cdf[i] / self.total()
    }

    /// Zero-based index whose cumulative interval contains `u * total`, `u` in `[0, 1)`.
    pub fn invert(&self, u: f64) -> usize {
        let target = u * self.total();
        self.cdf
            .partition_point(|&c| c <= target)
            .min(self.cdf.len() - 1)
    }

    pub fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> usize {
        self.invert(rng.gen::<f64>())
    }
}

/// Discrete power law `p(k) ∝ (k + shift)^(−exponent)` on `k = 1..=k_max`.
///
/// With `shift = 0` this is the plain truncated zeta distribution; a nonzero
/// shift moves the mean while keeping the tail exponent.
#[derive(Debug, Clone)]
pub struct DiscretePowerLaw {
    pub exponent: f64,
    pub shift: f64,
    pub k_max: u64,
    table: InverseCdf,
}

impl DiscretePowerLaw {
    pub fn new(exponent: f64, shift: f64, k_max: u64) -> Result<Self> {
        if !(exponent > 0.0) || !(shift > -1.0) || k_max == 0 {
            return Err(Error::contract(format!(
                "invalid power law: exponent {exponent}, shift {shift}, k_max {k_max}"
            )));
        }
        let weights: Vec<f64> = (1..=k_max)
            .map(|k| (k as f64 + shift).powf(-exponent))
            .collect();
        Ok(Self {
            exponent,
            shift,
            k_max,
            table: InverseCdf::new(&weights)?,
        })
    }

    /// Chooses the shift so that the distribution has the requested mean.
    pub fn with_mean(exponent: f64, mean: f64, k_max: u64) -> Result<Self> {
        let infeasible = || {
            Error::contract(format!(
                "mean {mean} is not reachable with exponent {exponent} and cutoff {k_max}"
            ))
        };
        let mean_at = |shift: f64| -> f64 {
            let (mut num, mut den) = (0.0, 0.0);
            for k in 1..=k_max {
                let w = (k as f64 + shift).powf(-exponent);
                num += k as f64 * w;
                den += w;
            }
            num / den
        };
        let mut lo = -1.0 + 1e-9;
        if !(mean > mean_at(lo)) {
            return Err(infeasible());
        }
        let mut hi = 1.0;
        while mean_at(hi) < mean {
            hi *= 2.0;
            if hi > k_max as f64 * 1e3 {
                return Err(infeasible());
            }
        }
        for _ in 0..100 {
            let mid = 0.5 * (lo + hi);
            if mean_at(mid) < mean {
                lo = mid;
            } else {
                hi = mid;
            }
            if hi - lo < 1e-12 * (1.0 + hi.abs()) {
                break;
            }
        }
        Self::new(exponent, 0.5 * (lo + hi), k_max)
    }

    pub fn mean(&self) -> f64 {
        let mut num = 0.0;
        let mut prev = 0.0;
        for k in 1..=self.k_max {
            let c = self.cdf(k);
            num += k as f64 * (c - prev);
            prev = c;
        }
        num
    }

    /// `P(X <= k)`.
    pub fn cdf(&self, k: u64) -> f64 {
        if k == 0 {
            0.0
        } else {
            self.table.cumulative((k.min(self.k_max) - 1) as usize)
        }
    }

    pub fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> u64 {
        self.table.sample(rng) as u64 + 1
    }
}

fn check_curve(curve: &[f64], what: &str) -> Result<InverseCdf> {
    let total = compensated_sum(curve.iter().copied());
    if (total - 1.0).abs() > 1e-9 {
        return Err(Error::contract(format!(
            "{what} curve is not normalized: sum = {total}"
        )));
    }
    InverseCdf::new(curve)
}

/// Draws `n` rank pairs `(K, K*)` with `K ~ p_curve`, `K* ~ p_star_curve`
/// independently; `curve[r - 1]` is the probability of rank `r`.
///
/// Draws are split into fixed-size blocks, each with its own ChaCha stream
/// derived from `seed`, so the output does not depend on thread count.
pub fn sample_independent(
    p_curve: &[f64],
    p_star_curve: &[f64],
    n: usize,
    seed: u64,
) -> Result<Vec<(u32, u32)>> {
    if n == 0 {
        return Err(Error::contract("sample size must be positive"));
    }
    let first = check_curve(p_curve, "P")?;
    let second = check_curve(p_star_curve, "P*")?;
    let mut out = vec![(0u32, 0u32); n];
    out.par_chunks_mut(SAMPLE_CHUNK)
        .enumerate()
        .for_each(|(block, chunk)| {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            rng.set_stream(block as u64);
            for slot in chunk {
                let k = first.sample(&mut rng) as u32 + 1;
                let ks = second.sample(&mut rng) as u32 + 1;
                *slot = (k, ks);
            }
        });
    Ok(out)
}
