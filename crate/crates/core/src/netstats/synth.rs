use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use super::sampling::DiscretePowerLaw;
use crate::error::{Error, Result};
use crate::graph::DirectedGraph;

/// Directed configuration-model graph with power-law degree sequences.
///
/// In- and out-degrees are i.i.d. draws from [`DiscretePowerLaw`]s on
/// `1..=n` with tail exponents `mu_in`, `mu_out` and the requested mean.
/// Excess stubs on the heavier side are removed uniformly at random, then
/// out-stubs are matched to a uniform shuffle of in-stubs. Repeated pairs
/// become multiplicities; self-loops are kept. Nodes are named `v0..v{n-1}`.
pub fn generate_scale_free(
    n: usize,
    mu_in: f64,
    mu_out: f64,
    mean_degree: f64,
    seed: u64,
) -> Result<DirectedGraph> {
    if n < 100 {
        return Err(Error::contract(format!("need at least 100 nodes, got {n}")));
    }
    if n > u32::MAX as usize {
        return Err(Error::contract("too many nodes"));
    }
    if !(mu_in > 2.0 && mu_out > 2.0) {
        return Err(Error::contract(format!(
            "degree exponents must exceed 2, got {mu_in} and {mu_out}"
        )));
    }
    let in_law = DiscretePowerLaw::with_mean(mu_in, mean_degree, n as u64)?;
    let out_law = DiscretePowerLaw::with_mean(mu_out, mean_degree, n as u64)?;

    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let in_deg: Vec<u64> = (0..n).map(|_| in_law.sample(&mut rng)).collect();
    let out_deg: Vec<u64> = (0..n).map(|_| out_law.sample(&mut rng)).collect();

    let stubs = |deg: &[u64]| -> Vec<u32> {
        let mut s = Vec::with_capacity(deg.iter().sum::<u64>() as usize);
        for (node, &d) in deg.iter().enumerate() {
            s.extend(std::iter::repeat_n(node as u32, d as usize));
        }
        s
    };
    let mut out_stubs = stubs(&out_deg);
    let mut in_stubs = stubs(&in_deg);

    if out_stubs.len() > in_stubs.len() {
        out_stubs.shuffle(&mut rng);
        out_stubs.truncate(in_stubs.len());
    } else if in_stubs.len() > out_stubs.len() {
        in_stubs.shuffle(&mut rng);
        in_stubs.truncate(out_stubs.len());
    }
    in_stubs.shuffle(&mut rng);

    let edges = out_stubs
        .into_iter()
        .zip(in_stubs)
        .map(|(s, t)| (s, t, 1))
        .collect();
    let names = (0..n).map(|i| format!("v{i}")).collect();
    DirectedGraph::from_edges(names, edges)
}
