//! Two-dimensional ranking of directed networks.
//!
//! The crate computes PageRank (popularity through ingoing links), CheiRank
//! (PageRank of the link-inverted network, i.e. communicativity through
//! outgoing links) and the combined 2DRank ordering, together with the
//! statistics used to study how the two rankings interact:
//!
//! - [`graph`]: compressed directed multigraph, edge-list ingestion, link
//!   inversion and degree histograms.
//! - [`googlerank`]: matrix-free Google matrix operator and power iteration.
//! - [`twodrank`]: rank permutations `K`, `K*` and the square-expansion `K2`.
//! - [`netstats`]: correlator, rank-plane density grids, power-law fits and
//!   a seeded scale-free generator.
//! - [`overlap`]: top-k overlap and windowed overlap between ranked lists.

// `!(x > 0.0)` style checks are used on purpose so that NaN is rejected too.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod error;
pub mod googlerank;
pub mod graph;
pub mod netstats;
pub mod overlap;
pub mod twodrank;

mod sum;

pub use error::{Error, ErrorClass, Result};
pub use googlerank::{
    apply_google, cheirank, pagerank, power_iterate, DampingParams, GoogleOperator, RankKind,
    RankVector, SolverOptions,
};
pub use graph::{
    degree_distribution, invert, load_edge_list, load_node_subset, write_edge_list,
    DegreeHistogram, DirectedGraph, Direction, EdgeListFormat, IngestStats, NameLookup, NodeId,
    NodeSubset, Resolution, SubsetLoad, Weighting,
};
pub use overlap::{
    overlap_curve, overlap_fraction, subset_window_fraction, window_overlap, OverlapKind,
    OverlapSeries, RankedList,
};
pub use twodrank::{
    rank_indices, subset_rank, two_d_rank, RankIndex, RankIndexKind, RankRow, RankTable, TableMeta,
};
