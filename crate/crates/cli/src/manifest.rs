use std::path::Path;

use serde::Serialize;
use sha2::{Digest, Sha256};

#[derive(Debug, Serialize)]
pub struct RunConfig {
    pub alpha: f64,
    pub alpha_star: f64,
    pub tol: f64,
    pub max_iter: usize,
}

#[derive(Debug, Serialize)]
pub struct InputRecord {
    /// File name only, so reruns from different directories agree.
    pub file: String,
    pub sha256: String,
    pub bytes: u64,
}

impl InputRecord {
    pub fn new(path: &Path, content: &[u8]) -> Self {
        Self {
            file: path
                .file_name()
                .map(|f| f.to_string_lossy().into_owned())
                .unwrap_or_default(),
            sha256: sha256_hex(content),
            bytes: content.len() as u64,
        }
    }
}

#[derive(Debug, Serialize)]
pub struct GraphRecord {
    pub nodes: usize,
    pub distinct_edges: usize,
    pub total_edge_weight: u64,
    pub self_loop_records: u64,
    pub merged_duplicates: u64,
    pub content_hash: String,
}

#[derive(Debug, Serialize)]
pub struct SolveRecord {
    pub iterations: usize,
    pub residual: f64,
}

#[derive(Debug, Serialize)]
pub struct RankManifest {
    pub command: &'static str,
    pub input: InputRecord,
    pub graph: GraphRecord,
    pub config: RunConfig,
    pub pagerank: SolveRecord,
    pub cheirank: SolveRecord,
    pub kappa: f64,
    pub outputs: Vec<String>,
}

pub fn sha256_hex(bytes: &[u8]) -> String {
    hex::encode(Sha256::digest(bytes))
}
