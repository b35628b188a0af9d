//! Overlap between ranked lists of names.
//!
//! Names are matched by exact string equality.

use std::collections::{HashMap, HashSet};
use std::io::{BufRead, Write};

use crate::error::{Error, Result};

/// Distinct names, best first.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RankedList {
    names: Vec<String>,
}

impl RankedList {
    pub fn new(names: Vec<String>) -> Result<Self> {
        let mut seen = HashSet::with_capacity(names.len());
        if let Some(dup) = names.iter().find(|n| !seen.insert(n.as_str())) {
            return Err(Error::contract(format!(
                "duplicate name {dup:?} in ranked list"
            )));
        }
        Ok(Self { names })
    }

    /// One name per line, best first; blank lines and `#` comments skipped.
    pub fn read<R: BufRead>(reader: R) -> Result<Self> {
        let mut names = Vec::new();
        let mut seen = HashMap::new();
        for (i, line) in reader.lines().enumerate() {
            let line = line?;
            let name = line.trim();
            if name.is_empty() || name.starts_with('#') {
                continue;
            }
            if let Some(first) = seen.insert(name.to_owned(), i + 1) {
                return Err(Error::parse(
                    i + 1,
                    format!("duplicate name {name:?} (first on line {first})"),
                ));
            }
            names.push(name.to_owned());
        }
        Ok(Self { names })
    }

    pub fn len(&self) -> usize {
        self.names.len()
    }

    pub fn is_empty(&self) -> bool {
        self.names.is_empty()
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn top(&self, k: usize) -> &[String] {
        &self.names[..k]
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum OverlapKind {
    CumulativeF,
    WindowFw,
    SubsetFw,
}

#[derive(Debug, Clone, PartialEq)]
pub struct OverlapSeries {
    pub kind: OverlapKind,
    /// `(x, f)`: rank depth for cumulative curves, window centre otherwise.
    pub points: Vec<(f64, f64)>,
    pub window: Option<usize>,
}

impl OverlapSeries {
    pub fn write_csv<W: Write>(&self, mut out: W) -> Result<()> {
        writeln!(out, "x,f")?;
        for (x, f) in &self.points {
            writeln!(out, "{x},{f}")?;
        }
        out.flush()?;
        Ok(())
    }

    pub fn mean(&self) -> f64 {
        self.points.iter().map(|p| p.1).sum::<f64>() / self.points.len() as f64
    }
}

fn check_depth(a: &RankedList, b: &RankedList, ks: usize, what: &str) -> Result<()> {
    let depth = a.len().min(b.len());
    if ks == 0 || ks > depth {
        return Err(Error::contract(format!(
            "{what} {ks} must lie in 1..={depth}"
        )));
    }
    Ok(())
}

/// Fraction of names shared by the top `ks` entries of both lists.
pub fn overlap_fraction(a: &RankedList, b: &RankedList, ks: usize) -> Result<f64> {
    check_depth(a, b, ks, "depth")?;
    let top_a: HashSet<&str> = a.top(ks).iter().map(String::as_str).collect();
    let shared = b
        .top(ks)
        .iter()
        .filter(|n| top_a.contains(n.as_str()))
        .count();
    Ok(shared as f64 / ks as f64)
}

/// `f(ks)` for `ks = 1..=ks_max`, maintained incrementally.
pub fn overlap_curve(a: &RankedList, b: &RankedList, ks_max: usize) -> Result<OverlapSeries> {
    check_depth(a, b, ks_max, "depth")?;
    let mut seen_a: HashSet<&str> = HashSet::with_capacity(ks_max);
    let mut seen_b: HashSet<&str> = HashSet::with_capacity(ks_max);
    let mut shared = 0usize;
    let mut points = Vec::with_capacity(ks_max);
    for ks in 1..=ks_max {
        let x = a.names[ks - 1].as_str();
        let y = b.names[ks - 1].as_str();
        seen_a.insert(x);
        seen_b.insert(y);
        if x == y {
            shared += 1;
        } else {
            shared += usize::from(seen_b.contains(x)) + usize::from(seen_a.contains(y));
        }
        points.push((ks as f64, shared as f64 / ks as f64));
    }
    Ok(OverlapSeries {
        kind: OverlapKind::CumulativeF,
        points,
        window: None,
    })
}

/// Window starts `0, w, 2w, …` that fit entirely within `len`.
fn tiles(len: usize, window: usize) -> impl Iterator<Item = usize> {
    (0..len / window).map(move |t| t * window)
}

/// Shared-name fraction inside consecutive non-overlapping windows of size
/// `window`; points sit at the window centre. A trailing partial window is dropped.
pub fn window_overlap(a: &RankedList, b: &RankedList, window: usize) -> Result<OverlapSeries> {
    check_depth(a, b, window, "window")?;
    let depth = a.len().min(b.len());
    let points = tiles(depth, window)
        .map(|m| {
            let wa: HashSet<&str> = a.names[m..m + window].iter().map(String::as_str).collect();
            let shared = b.names[m..m + window]
                .iter()
                .filter(|n| wa.contains(n.as_str()))
                .count();
            (
                m as f64 + window as f64 / 2.0,
                shared as f64 / window as f64,
            )
        })
        .collect();
    Ok(OverlapSeries {
        kind: OverlapKind::WindowFw,
        points,
        window: Some(window),
    })
}

/// Fraction of entries in each window that belong to `members`.
pub fn subset_window_fraction<S: AsRef<str>>(
    ranking: &RankedList,
    members: &[S],
    window: usize,
) -> Result<OverlapSeries> {
    if members.is_empty() {
        return Err(Error::contract("subset is empty"));
    }
    if window == 0 || window > ranking.len() {
        return Err(Error::contract(format!(
            "window {window} must lie in 1..={}",
            ranking.len()
        )));
    }
    let in_ranking: HashSet<&str> = ranking.names.iter().map(String::as_str).collect();
    let mut subset = HashSet::with_capacity(members.len());
    for m in members {
        let m = m.as_ref();
        if !in_ranking.contains(m) {
            return Err(Error::contract(format!(
                "subset member {m:?} is not in the ranking"
            )));
        }
        subset.insert(m);
    }
    let points = tiles(ranking.len(), window)
        .map(|m| {
            let hits = ranking.names[m..m + window]
                .iter()
                .filter(|n| subset.contains(n.as_str()))
                .count();
            (m as f64 + window as f64 / 2.0, hits as f64 / window as f64)
        })
        .collect();
    Ok(OverlapSeries {
        kind: OverlapKind::SubsetFw,
        points,
        window: Some(window),
    })
}
