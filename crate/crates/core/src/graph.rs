//! Directed multigraphs in compressed sparse row form.
//!
//! Nodes are identified by a dense index in `[0, N)` and by a unique
//! canonical name. Edges are stored per source, sorted by target, with
//! merged multiplicities.

use std::collections::{BTreeMap, HashMap, HashSet};
use std::fmt;
use std::io::{BufRead, Write};

use sha2::{Digest, Sha256};

use crate::error::{Error, Result};

/// Dense node index.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct NodeId(pub u32);

impl NodeId {
    #[inline]
    pub fn index(self) -> usize {
        self.0 as usize
    }
}

impl fmt::Display for NodeId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "#{}", self.0)
    }
}

/// Anything that can resolve a canonical name to a node.
pub trait NameLookup {
    fn lookup(&self, name: &str) -> Option<NodeId>;
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DirectedGraph {
    names: Vec<String>,
    index: HashMap<String, u32>,
    offsets: Vec<usize>,
    targets: Vec<u32>,
    multiplicities: Vec<u64>,
    total_edge_weight: u64,
}

/// Counters reported while reading an edge list.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct IngestStats {
    pub records: u64,
    pub self_loops: u64,
    pub merged_duplicates: u64,
}

impl DirectedGraph {
    /// Builds a graph from node names and `(source, target, multiplicity)`
    /// triples. Repeated pairs are merged by summing multiplicities.
    pub fn from_edges(names: Vec<String>, edges: Vec<(u32, u32, u64)>) -> Result<Self> {
        let n = names.len();
        let mut index = HashMap::with_capacity(n);
        for (i, name) in names.iter().enumerate() {
            if index.insert(name.clone(), i as u32).is_some() {
                return Err(Error::contract(format!("duplicate node name {name:?}")));
            }
        }
        if n > u32::MAX as usize {
            return Err(Error::contract("too many nodes"));
        }
        let mut counts = vec![0usize; n + 1];
        for &(s, t, m) in &edges {
            if s as usize >= n || t as usize >= n {
                return Err(Error::contract(format!("edge ({s}, {t}) out of range")));
            }
            if m == 0 {
                return Err(Error::contract("edge multiplicity must be positive"));
            }
            counts[s as usize + 1] += 1;
        }
        for i in 0..n {
            counts[i + 1] += counts[i];
        }
        let mut cursor = counts.clone();
        let mut raw = vec![(0u32, 0u64); edges.len()];
        for (s, t, m) in edges {
            let slot = &mut cursor[s as usize];
            raw[*slot] = (t, m);
            *slot += 1;
        }

        let mut offsets = Vec::with_capacity(n + 1);
        let mut targets = Vec::with_capacity(raw.len());
        let mut multiplicities = Vec::with_capacity(raw.len());
        let mut total = 0u64;
        offsets.push(0);
        for s in 0..n {
            let row = &mut raw[counts[s]..counts[s + 1]];
            row.sort_unstable_by_key(|&(t, _)| t);
            let mut last: Option<u32> = None;
            for &(t, m) in row.iter() {
                if last == Some(t) {
                    let acc = multiplicities.last_mut().unwrap();
                    *acc = u64::checked_add(*acc, m)
                        .ok_or_else(|| Error::contract("multiplicity overflow"))?;
                } else {
                    targets.push(t);
                    multiplicities.push(m);
                    last = Some(t);
                }
                total = total
                    .checked_add(m)
                    .ok_or_else(|| Error::contract("total edge weight overflow"))?;
            }
            offsets.push(targets.len());
        }

        Ok(Self {
            names,
            index,
            offsets,
            targets,
            multiplicities,
            total_edge_weight: total,
        })
    }

    #[inline]
    pub fn n_nodes(&self) -> usize {
        self.names.len()
    }

    /// Number of distinct `(source, target)` pairs.
    #[inline]
    pub fn n_edges(&self) -> usize {
        self.targets.len()
    }

    #[inline]
    pub fn total_edge_weight(&self) -> u64 {
        self.total_edge_weight
    }

    pub fn name(&self, node: NodeId) -> &str {
        &self.names[node.index()]
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn node(&self, name: &str) -> Option<NodeId> {
        self.index.get(name).map(|&i| NodeId(i))
    }

    /// Targets and multiplicities of the outgoing edges of `node`, sorted by target.
    #[inline]
    pub fn successors(&self, node: usize) -> (&[u32], &[u64]) {
        let range = self.offsets[node]..self.offsets[node + 1];
        (&self.targets[range.clone()], &self.multiplicities[range])
    }

    /// Iterates over all `(source, target, multiplicity)` triples.
    pub fn edges(&self) -> impl Iterator<Item = (u32, u32, u64)> + '_ {
        (0..self.n_nodes()).flat_map(move |s| {
            let (t, m) = self.successors(s);
            t.iter().zip(m).map(move |(&t, &m)| (s as u32, t, m))
        })
    }

    /// Multiplicity-weighted out-degree of every node.
    pub fn out_weights(&self) -> Vec<u64> {
        (0..self.n_nodes())
            .map(|s| self.successors(s).1.iter().sum())
            .collect()
    }

    pub fn has_self_loops(&self) -> bool {
        self.edges().any(|(s, t, _)| s == t)
    }

    /// SHA-256 over the canonical edge-list serialization.
    pub fn content_hash(&self) -> String {
        let mut hasher = Sha256::new();
        hasher.update((self.n_nodes() as u64).to_le_bytes());
        for name in &self.names {
            hasher.update(name.as_bytes());
            hasher.update([0u8]);
        }
        for (s, t, m) in self.edges() {
            hasher.update(s.to_le_bytes());
            hasher.update(t.to_le_bytes());
            hasher.update(m.to_le_bytes());
        }
        hex::encode(hasher.finalize())
    }
}

impl NameLookup for DirectedGraph {
    fn lookup(&self, name: &str) -> Option<NodeId> {
        self.node(name)
    }
}

/// Field separator accepted by [`load_edge_list`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum EdgeListFormat {
    /// Exactly one TAB between fields.
    #[default]
    Tab,
    /// Any run of ASCII whitespace between fields; names cannot contain spaces.
    Whitespace,
}

/// Reads an edge list: `source TAB target [TAB multiplicity]` per line,
/// `#` comments and blank lines skipped. Nodes are numbered in order of
/// first appearance.
pub fn load_edge_list<R: BufRead>(
    reader: R,
    format: EdgeListFormat,
) -> Result<(DirectedGraph, IngestStats)> {
    let mut names: Vec<String> = Vec::new();
    let mut index: HashMap<String, u32> = HashMap::new();
    let mut edges = Vec::new();
    let mut stats = IngestStats::default();

    let mut intern = |name: &str, names: &mut Vec<String>| -> u32 {
        if let Some(&i) = index.get(name) {
            return i;
        }
        let i = names.len() as u32;
        names.push(name.to_owned());
        index.insert(name.to_owned(), i);
        i
    };

    for (lineno, line) in reader.lines().enumerate() {
        let lineno = lineno + 1;
        let line = line?;
        let line = line.strip_suffix('\r').unwrap_or(&line);
        if line.trim().is_empty() || line.starts_with('#') {
            continue;
        }
        let fields: Vec<&str> = match format {
            EdgeListFormat::Tab => line.split('\t').collect(),
            EdgeListFormat::Whitespace => line.split_ascii_whitespace().collect(),
        };
        if fields.len() != 2 && fields.len() != 3 {
            return Err(Error::parse(
                lineno,
                format!("expected 2 or 3 fields, found {}", fields.len()),
            ));
        }
        let source = fields[0].trim();
        let target = fields[1].trim();
        if source.is_empty() || target.is_empty() {
            return Err(Error::parse(lineno, "empty node name"));
        }
        let multiplicity = match fields.get(2) {
            None => 1,
            Some(raw) => parse_multiplicity(raw.trim()).map_err(|m| Error::parse(lineno, m))?,
        };
        let s = intern(source, &mut names);
        let t = intern(target, &mut names);
        if s == t {
            stats.self_loops += 1;
        }
        stats.records += 1;
        edges.push((s, t, multiplicity));
    }

    if edges.is_empty() {
        return Err(Error::EmptyInput("edge list contains no edges".into()));
    }
    let graph = DirectedGraph::from_edges(names, edges)?;
    stats.merged_duplicates = stats.records - graph.n_edges() as u64;
    Ok((graph, stats))
}

fn parse_multiplicity(raw: &str) -> std::result::Result<u64, String> {
    if raw.starts_with('-') {
        return Err(format!("multiplicity must be positive, got {raw:?}"));
    }
    match raw.parse::<u64>() {
        Ok(0) => Err("multiplicity must be positive, got 0".into()),
        Ok(m) => Ok(m),
        Err(_) => Err(format!("invalid multiplicity {raw:?}")),
    }
}

/// Writes the graph in TAB-separated edge-list form, always with an
/// explicit multiplicity column.
pub fn write_edge_list<W: Write>(g: &DirectedGraph, mut out: W) -> Result<()> {
    for (s, t, m) in g.edges() {
        writeln!(
            out,
            "{}\t{}\t{}",
            g.names[s as usize], g.names[t as usize], m
        )?;
    }
    out.flush()?;
    Ok(())
}

/// Reverses every edge, keeping multiplicities and the node table.
pub fn invert(g: &DirectedGraph) -> DirectedGraph {
    let n = g.n_nodes();
    let mut offsets = vec![0usize; n + 1];
    for &t in &g.targets {
        offsets[t as usize + 1] += 1;
    }
    for i in 0..n {
        offsets[i + 1] += offsets[i];
    }
    let mut cursor = offsets.clone();
    let mut targets = vec![0u32; g.targets.len()];
    let mut multiplicities = vec![0u64; g.targets.len()];
    // Sources are visited in increasing order, so every inverted row ends up sorted.
    for (s, t, m) in g.edges() {
        let slot = &mut cursor[t as usize];
        targets[*slot] = s;
        multiplicities[*slot] = m;
        *slot += 1;
    }
    DirectedGraph {
        names: g.names.clone(),
        index: g.index.clone(),
        offsets,
        targets,
        multiplicities,
        total_edge_weight: g.total_edge_weight,
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Direction {
    In,
    Out,
}

/// How an edge of multiplicity `m` contributes to a degree.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Weighting {
    /// Contributes `m`.
    #[default]
    Multiplicity,
    /// Contributes 1 regardless of `m`.
    Distinct,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DegreeHistogram {
    pub direction: Direction,
    pub weighting: Weighting,
    /// degree -> number of nodes with that degree (degree 0 included).
    pub counts: BTreeMap<u64, u64>,
}

impl DegreeHistogram {
    pub fn total(&self) -> u64 {
        self.counts.values().sum()
    }

    /// `(k, w(k))` with `w(k)` the fraction of nodes of degree `k`, for `k >= 1`.
    pub fn fractions(&self) -> Vec<(f64, f64)> {
        let total = self.total() as f64;
        self.counts
            .iter()
            .filter(|(&k, _)| k > 0)
            .map(|(&k, &c)| (k as f64, c as f64 / total))
            .collect()
    }
}

/// Per-node degrees in the given direction.
pub fn degrees(g: &DirectedGraph, direction: Direction, weighting: Weighting) -> Vec<u64> {
    let contribution = |m: u64| match weighting {
        Weighting::Multiplicity => m,
        Weighting::Distinct => 1,
    };
    let mut deg = vec![0u64; g.n_nodes()];
    for (s, t, m) in g.edges() {
        let node = match direction {
            Direction::Out => s,
            Direction::In => t,
        };
        deg[node as usize] += contribution(m);
    }
    deg
}

pub fn degree_distribution(
    g: &DirectedGraph,
    direction: Direction,
    weighting: Weighting,
) -> DegreeHistogram {
    let mut counts = BTreeMap::new();
    for d in degrees(g, direction, weighting) {
        *counts.entry(d).or_insert(0) += 1;
    }
    DegreeHistogram {
        direction,
        weighting,
        counts,
    }
}

/// A named, ordered set of distinct nodes (a category).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NodeSubset {
    pub label: String,
    pub members: Vec<NodeId>,
}

impl NodeSubset {
    pub fn new(label: impl Into<String>, members: Vec<NodeId>) -> Result<Self> {
        let mut seen = HashSet::with_capacity(members.len());
        if let Some(dup) = members.iter().find(|m| !seen.insert(**m)) {
            return Err(Error::contract(format!("duplicate subset member {dup}")));
        }
        Ok(Self {
            label: label.into(),
            members,
        })
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Resolution {
    /// Any unknown name is an error.
    #[default]
    Strict,
    /// Unknown names are collected and skipped.
    Lenient,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SubsetLoad {
    pub subset: NodeSubset,
    /// `(line, name)` of every name that did not resolve.
    pub unresolved: Vec<(usize, String)>,
    /// Number of repeated names dropped (first occurrence kept).
    pub duplicates: usize,
}

/// Reads one node name per line and resolves it against `nodes`.
pub fn load_node_subset<R: BufRead, L: NameLookup + ?Sized>(
    reader: R,
    nodes: &L,
    label: &str,
    resolution: Resolution,
) -> Result<SubsetLoad> {
    let mut members = Vec::new();
    let mut seen = HashSet::new();
    let mut unresolved = Vec::new();
    let mut duplicates = 0;
    for (lineno, line) in reader.lines().enumerate() {
        let lineno = lineno + 1;
        let line = line?;
        let name = line.trim();
        if name.is_empty() || name.starts_with('#') {
            continue;
        }
        match nodes.lookup(name) {
            Some(id) => {
                if seen.insert(id) {
                    members.push(id);
                } else {
                    duplicates += 1;
                }
            }
            None => match resolution {
                Resolution::Strict => {
                    return Err(Error::parse(lineno, format!("unknown node {name:?}")))
                }
                Resolution::Lenient => unresolved.push((lineno, name.to_owned())),
            },
        }
    }
    Ok(SubsetLoad {
        subset: NodeSubset {
            label: label.to_owned(),
            members,
        },
        unresolved,
        duplicates,
    })
}
