//! Rank permutations and the 2DRank ordering.
//!
//! `K` orders nodes by decreasing PageRank, `K*` by decreasing CheiRank
//! (ties broken by ascending node index). `K2` orders nodes by the step at
//! which they enter the growing square `[1, k] x [1, k]` of the `(K, K*)`
//! plane: at step `k` the node with `K = k, K* <= k` (right edge, corner
//! included) enters first, then the node with `K* = k, K < k` (top edge).

use std::collections::HashMap;
use std::fmt;
use std::io::{BufRead, Write};

use crate::error::{Error, Result};
use crate::googlerank::{parse_header, parse_num, RankKind, RankVector};
use crate::graph::{NameLookup, NodeId, NodeSubset};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum RankIndexKind {
    K,
    KStar,
    K2,
}

impl fmt::Display for RankIndexKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            RankIndexKind::K => "K",
            RankIndexKind::KStar => "K*",
            RankIndexKind::K2 => "K2",
        })
    }
}

/// A ranking of `N` nodes as a pair of mutually inverse permutations.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RankIndex {
    pub kind: RankIndexKind,
    /// `order[r - 1]` is the node at rank `r`.
    order: Vec<u32>,
    /// `position[node]` is the 1-based rank of `node`.
    position: Vec<u32>,
}

impl RankIndex {
    /// Builds the index from node order, best first.
    pub fn from_order(kind: RankIndexKind, order: Vec<u32>) -> Result<Self> {
        let n = order.len();
        let mut position = vec![0u32; n];
        for (r, &node) in order.iter().enumerate() {
            let slot = position
                .get_mut(node as usize)
                .ok_or_else(|| Error::contract(format!("node {node} out of range")))?;
            if *slot != 0 {
                return Err(Error::contract(format!("node {node} ranked twice")));
            }
            *slot = r as u32 + 1;
        }
        Ok(Self {
            kind,
            order,
            position,
        })
    }

    /// Builds the index from per-node 1-based ranks.
    pub fn from_positions(kind: RankIndexKind, position: Vec<u32>) -> Result<Self> {
        let n = position.len();
        let mut order = vec![u32::MAX; n];
        for (node, &r) in position.iter().enumerate() {
            if r == 0 || r as usize > n {
                return Err(Error::contract(format!("rank {r} outside 1..={n}")));
            }
            let slot = &mut order[r as usize - 1];
            if *slot != u32::MAX {
                return Err(Error::contract(format!("rank {r} assigned twice")));
            }
            *slot = node as u32;
        }
        Ok(Self {
            kind,
            order,
            position,
        })
    }

    /// Sorts by decreasing value, ties by ascending node index.
    pub fn from_values(kind: RankIndexKind, values: &[f64]) -> Self {
        let mut order: Vec<u32> = (0..values.len() as u32).collect();
        order.sort_by(|&a, &b| {
            values[b as usize]
                .total_cmp(&values[a as usize])
                .then(a.cmp(&b))
        });
        Self::from_order(kind, order).expect("argsort is a permutation")
    }

    pub fn len(&self) -> usize {
        self.order.len()
    }

    pub fn is_empty(&self) -> bool {
        self.order.is_empty()
    }

    /// Node at 1-based rank `r`.
    pub fn node_at(&self, r: usize) -> NodeId {
        NodeId(self.order[r - 1])
    }

    /// 1-based rank of `node`.
    pub fn rank_of(&self, node: NodeId) -> u32 {
        self.position[node.index()]
    }

    pub fn order(&self) -> &[u32] {
        &self.order
    }

    pub fn positions(&self) -> &[u32] {
        &self.position
    }
}

/// `K` for a PageRank vector, `K*` for a CheiRank vector.
pub fn rank_indices(v: &RankVector) -> RankIndex {
    let kind = match v.kind {
        RankKind::PageRank => RankIndexKind::K,
        RankKind::CheiRank => RankIndexKind::KStar,
    };
    RankIndex::from_values(kind, &v.values)
}

/// Square-expansion 2DRank.
pub fn two_d_rank(k: &RankIndex, k_star: &RankIndex) -> Result<RankIndex> {
    if k.len() != k_star.len() {
        return Err(Error::contract(format!(
            "rank indices cover {} and {} nodes",
            k.len(),
            k_star.len()
        )));
    }
    let n = k.len();
    let mut order = Vec::with_capacity(n);
    for step in 1..=n as u32 {
        let right = k.order[step as usize - 1];
        if k_star.position[right as usize] <= step {
            order.push(right);
        }
        let top = k_star.order[step as usize - 1];
        if k.position[top as usize] < step {
            order.push(top);
        }
    }
    debug_assert_eq!(order.len(), n);
    RankIndex::from_order(RankIndexKind::K2, order)
}

/// Provenance recorded in a rank table header.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct TableMeta {
    pub graph_hash: String,
    pub alpha: f64,
    pub alpha_star: f64,
    pub tol: f64,
    pub max_iter: usize,
}

/// Per-node `(P, K, P*, K*, K2)`.
#[derive(Debug, Clone, PartialEq)]
pub struct RankTable {
    pub meta: TableMeta,
    names: Vec<String>,
    p: Vec<f64>,
    p_star: Vec<f64>,
    k: RankIndex,
    k_star: RankIndex,
    k2: RankIndex,
    lookup: HashMap<String, u32>,
}

/// One row of a [`RankTable`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RankRow<'a> {
    pub name: &'a str,
    pub p: f64,
    pub k: u32,
    pub p_star: f64,
    pub k_star: u32,
    pub k2: u32,
}

impl RankTable {
    pub fn build(
        names: Vec<String>,
        pagerank: &RankVector,
        cheirank: &RankVector,
        meta: TableMeta,
    ) -> Result<Self> {
        if pagerank.len() != names.len() || cheirank.len() != names.len() {
            return Err(Error::contract("rank vectors do not match the node table"));
        }
        let k = RankIndex::from_values(RankIndexKind::K, &pagerank.values);
        let k_star = RankIndex::from_values(RankIndexKind::KStar, &cheirank.values);
        Self::assemble(
            meta,
            names,
            pagerank.values.clone(),
            cheirank.values.clone(),
            k,
            k_star,
        )
    }

    fn assemble(
        meta: TableMeta,
        names: Vec<String>,
        p: Vec<f64>,
        p_star: Vec<f64>,
        k: RankIndex,
        k_star: RankIndex,
    ) -> Result<Self> {
        let k2 = two_d_rank(&k, &k_star)?;
        let mut lookup = HashMap::with_capacity(names.len());
        for (i, name) in names.iter().enumerate() {
            if lookup.insert(name.clone(), i as u32).is_some() {
                return Err(Error::contract(format!("duplicate node name {name:?}")));
            }
        }
        Ok(Self {
            meta,
            names,
            p,
            p_star,
            k,
            k_star,
            k2,
            lookup,
        })
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

    pub fn pagerank(&self) -> &[f64] {
        &self.p
    }

    pub fn cheirank(&self) -> &[f64] {
        &self.p_star
    }

    pub fn k(&self) -> &RankIndex {
        &self.k
    }

    pub fn k_star(&self) -> &RankIndex {
        &self.k_star
    }

    pub fn k2(&self) -> &RankIndex {
        &self.k2
    }

    pub fn row(&self, node: NodeId) -> RankRow<'_> {
        let i = node.index();
        RankRow {
            name: &self.names[i],
            p: self.p[i],
            k: self.k.rank_of(node),
            p_star: self.p_star[i],
            k_star: self.k_star.rank_of(node),
            k2: self.k2.rank_of(node),
        }
    }

    /// Probabilities sorted by their own rank (`P(K)` for `K = 1..N`).
    pub fn pagerank_curve(&self) -> Vec<f64> {
        self.k.order().iter().map(|&i| self.p[i as usize]).collect()
    }

    /// `P*(K*)` for `K* = 1..N`.
    pub fn cheirank_curve(&self) -> Vec<f64> {
        self.k_star
            .order()
            .iter()
            .map(|&i| self.p_star[i as usize])
            .collect()
    }

    /// `(K, K*)` for every node in node order.
    pub fn rank_pairs(&self) -> Vec<(u32, u32)> {
        self.k
            .positions()
            .iter()
            .zip(self.k_star.positions())
            .map(|(&a, &b)| (a, b))
            .collect()
    }

    /// Names best first under the given ranking.
    pub fn ranked_names(&self, kind: RankIndexKind) -> Vec<String> {
        let index = match kind {
            RankIndexKind::K => &self.k,
            RankIndexKind::KStar => &self.k_star,
            RankIndexKind::K2 => &self.k2,
        };
        index
            .order()
            .iter()
            .map(|&i| self.names[i as usize].clone())
            .collect()
    }

    /// TSV: `#` metadata line, column header, then one row per node sorted by `K`.
    pub fn write_tsv<W: Write>(&self, mut out: W) -> Result<()> {
        let m = &self.meta;
        writeln!(
            out,
            "# rank-table n={} graph={} alpha={} alpha_star={} tol={:e} max_iter={}",
            self.len(),
            if m.graph_hash.is_empty() {
                "-"
            } else {
                &m.graph_hash
            },
            m.alpha,
            m.alpha_star,
            m.tol,
            m.max_iter
        )?;
        writeln!(out, "name\tP\tK\tP*\tK*\tK2")?;
        for &node in self.k.order() {
            let r = self.row(NodeId(node));
            writeln!(
                out,
                "{}\t{:e}\t{}\t{:e}\t{}\t{}",
                r.name, r.p, r.k, r.p_star, r.k_star, r.k2
            )?;
        }
        out.flush()?;
        Ok(())
    }

    /// Reads a table written by [`RankTable::write_tsv`]. Rows become nodes in
    /// file order; the stored `K`, `K*` and `K2` columns are validated against
    /// a recomputation.
    pub fn read_tsv<R: BufRead>(reader: R) -> Result<Self> {
        let mut lines = reader.lines().enumerate();
        let header = match lines.next() {
            Some((_, l)) => l?,
            None => return Err(Error::EmptyInput("rank table is empty".into())),
        };
        let fields = parse_header(&header, 1)?;
        let get = |key: &str| {
            fields
                .iter()
                .find(|(k, _)| k == key)
                .map(|(_, v)| v.as_str())
                .ok_or_else(|| Error::parse(1, format!("header is missing {key}")))
        };
        let graph_hash = match get("graph")? {
            "-" => String::new(),
            h => h.to_owned(),
        };
        let meta = TableMeta {
            graph_hash,
            alpha: parse_num(get("alpha")?, 1)?,
            alpha_star: parse_num(get("alpha_star")?, 1)?,
            tol: parse_num(get("tol")?, 1)?,
            max_iter: parse_num(get("max_iter")?, 1)?,
        };
        let declared_n: usize = parse_num(get("n")?, 1)?;
        let columns = match lines.next() {
            Some((_, l)) => l?,
            None => String::new(),
        };
        if columns.split('\t').ne(["name", "P", "K", "P*", "K*", "K2"]) {
            return Err(Error::parse(2, "missing or malformed column header"));
        }

        let mut names = Vec::new();
        let (mut p, mut p_star) = (Vec::new(), Vec::new());
        let (mut k, mut k_star, mut k2) = (Vec::new(), Vec::new(), Vec::new());
        for (i, line) in lines {
            let lineno = i + 1;
            let line = line?;
            if line.is_empty() {
                continue;
            }
            let cols: Vec<&str> = line.split('\t').collect();
            if cols.len() != 6 {
                return Err(Error::parse(
                    lineno,
                    format!("expected 6 columns, found {}", cols.len()),
                ));
            }
            names.push(cols[0].to_owned());
            p.push(parse_num::<f64>(cols[1], lineno)?);
            k.push(parse_num::<u32>(cols[2], lineno)?);
            p_star.push(parse_num::<f64>(cols[3], lineno)?);
            k_star.push(parse_num::<u32>(cols[4], lineno)?);
            k2.push(parse_num::<u32>(cols[5], lineno)?);
        }
        if names.len() != declared_n {
            return Err(Error::parse(
                1,
                format!("header declares {declared_n} rows, found {}", names.len()),
            ));
        }
        let k = RankIndex::from_positions(RankIndexKind::K, k)?;
        let k_star = RankIndex::from_positions(RankIndexKind::KStar, k_star)?;
        let stored_k2 = RankIndex::from_positions(RankIndexKind::K2, k2)?;
        if !is_descending(&p, &k) || !is_descending(&p_star, &k_star) {
            return Err(Error::contract("rank columns disagree with probabilities"));
        }
        let table = Self::assemble(meta, names, p, p_star, k, k_star)?;
        if table.k2 != stored_k2 {
            return Err(Error::contract("K2 column disagrees with K and K*"));
        }
        Ok(table)
    }
}

fn is_descending(values: &[f64], index: &RankIndex) -> bool {
    index
        .order()
        .windows(2)
        .all(|w| values[w[0] as usize] >= values[w[1] as usize])
}

impl NameLookup for RankTable {
    fn lookup(&self, name: &str) -> Option<NodeId> {
        self.lookup.get(name).map(|&i| NodeId(i))
    }
}

/// Re-ranks a category densely: members are ordered by their global `K`
/// (respectively `K*`), which reproduces the global tie rule, and `K2` is
/// recomputed on the dense sub-ranks. Rows follow the subset's member order.
pub fn subset_rank(subset: &NodeSubset, table: &RankTable) -> Result<RankTable> {
    if subset.is_empty() {
        return Err(Error::contract("subset is empty"));
    }
    if let Some(m) = subset.members.iter().find(|m| m.index() >= table.len()) {
        return Err(Error::contract(format!(
            "subset member {m} is not in the table"
        )));
    }
    let members = &subset.members;
    let dense = |global: &RankIndex, kind| {
        let mut local: Vec<u32> = (0..members.len() as u32).collect();
        local.sort_by_key(|&i| global.rank_of(members[i as usize]));
        RankIndex::from_order(kind, local)
    };
    let k = dense(&table.k, RankIndexKind::K)?;
    let k_star = dense(&table.k_star, RankIndexKind::KStar)?;
    let names = members
        .iter()
        .map(|m| table.names[m.index()].clone())
        .collect();
    let p = members.iter().map(|m| table.p[m.index()]).collect();
    let p_star = members.iter().map(|m| table.p_star[m.index()]).collect();
    RankTable::assemble(table.meta.clone(), names, p, p_star, k, k_star)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn index(kind: RankIndexKind, ranks: &[u32]) -> RankIndex {
        RankIndex::from_positions(kind, ranks.to_vec()).unwrap()
    }

    #[test]
    fn ranks_by_decreasing_probability() {
        let k = RankIndex::from_values(RankIndexKind::K, &[0.2, 0.5, 0.3]);
        assert_eq!(k.positions(), &[3, 1, 2]);
        assert_eq!(k.node_at(1), NodeId(1));
    }

    #[test]
    fn ties_follow_node_index() {
        let k = RankIndex::from_values(RankIndexKind::K, &[0.25; 4]);
        assert_eq!(k.positions(), &[1, 2, 3, 4]);
    }

    #[test]
    fn diagonal_two_d_rank_equals_k() {
        let k = index(RankIndexKind::K, &[3, 1, 4, 2]);
        let ks = index(RankIndexKind::KStar, &[3, 1, 4, 2]);
        assert_eq!(two_d_rank(&k, &ks).unwrap().positions(), k.positions());
    }

    #[test]
    fn right_edge_before_top_edge() {
        // a:(1,2), b:(2,1), c:(3,3)
        let k = index(RankIndexKind::K, &[1, 2, 3]);
        let ks = index(RankIndexKind::KStar, &[2, 1, 3]);
        let k2 = two_d_rank(&k, &ks).unwrap();
        assert_eq!(k2.positions(), &[2, 1, 3]);
    }

    #[test]
    fn mismatched_sizes_rejected() {
        let k = index(RankIndexKind::K, &[1, 2]);
        let ks = index(RankIndexKind::KStar, &[1, 2, 3]);
        assert!(two_d_rank(&k, &ks).is_err());
    }

    #[test]
    fn invalid_permutations_rejected() {
        assert!(RankIndex::from_positions(RankIndexKind::K, vec![1, 1]).is_err());
        assert!(RankIndex::from_positions(RankIndexKind::K, vec![0, 1]).is_err());
        assert!(RankIndex::from_order(RankIndexKind::K, vec![0, 0]).is_err());
    }

    fn rv(kind: RankKind, values: Vec<f64>) -> RankVector {
        RankVector {
            kind,
            alpha: 0.85,
            values,
            iterations: 1,
            residual: 0.0,
            residual_history: vec![],
        }
    }

    fn sample_table() -> RankTable {
        let names = ["a", "b", "c", "d"].map(String::from).to_vec();
        RankTable::build(
            names,
            &rv(RankKind::PageRank, vec![0.1, 0.4, 0.4, 0.1]),
            &rv(RankKind::CheiRank, vec![0.3, 0.1, 0.2, 0.4]),
            TableMeta {
                graph_hash: "abc".into(),
                alpha: 0.85,
                alpha_star: 0.85,
                tol: 1e-10,
                max_iter: 1000,
            },
        )
        .unwrap()
    }

    #[test]
    fn table_tsv_round_trip() {
        let t = sample_table();
        let mut buf = Vec::new();
        t.write_tsv(&mut buf).unwrap();
        let text = String::from_utf8(buf.clone()).unwrap();
        assert!(text.lines().nth(2).unwrap().starts_with("b\t"));
        let back = RankTable::read_tsv(buf.as_slice()).unwrap();
        assert_eq!(back.meta, t.meta);
        for name in t.names() {
            let a = t.row(t.lookup(name).unwrap());
            let b = back.row(back.lookup(name).unwrap());
            assert_eq!(a, b);
        }
    }

    #[test]
    fn read_rejects_inconsistent_k2() {
        let t = sample_table();
        let mut buf = Vec::new();
        t.write_tsv(&mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        let mut lines: Vec<String> = text.lines().map(String::from).collect();
        // swap K2 values of the first two data rows
        let a: Vec<String> = lines[2].split('\t').map(String::from).collect();
        let b: Vec<String> = lines[3].split('\t').map(String::from).collect();
        lines[2] = [&a[..5], &b[5..]].concat().join("\t");
        lines[3] = [&b[..5], &a[5..]].concat().join("\t");
        let broken = lines.join("\n");
        assert!(RankTable::read_tsv(broken.as_bytes()).is_err());
    }

    #[test]
    fn whole_subset_is_identity() {
        let t = sample_table();
        let all = NodeSubset::new("all", (0..4).map(NodeId).collect()).unwrap();
        let s = subset_rank(&all, &t).unwrap();
        assert_eq!(s.k(), t.k());
        assert_eq!(s.k_star(), t.k_star());
        assert_eq!(s.k2(), t.k2());
        assert_eq!(s.pagerank(), t.pagerank());
    }

    #[test]
    fn singleton_subset() {
        let t = sample_table();
        let one = NodeSubset::new("one", vec![NodeId(2)]).unwrap();
        let s = subset_rank(&one, &t).unwrap();
        let r = s.row(NodeId(0));
        assert_eq!((r.k, r.k_star, r.k2), (1, 1, 1));
        assert_eq!(r.name, "c");
    }

    #[test]
    fn empty_subset_rejected() {
        let t = sample_table();
        let none = NodeSubset::new("none", vec![]).unwrap();
        assert!(subset_rank(&none, &t).is_err());
    }
}
