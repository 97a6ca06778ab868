use rand::Rng;

use super::{GenParams, Graph, NetworkModel};
use crate::error::{Error, Result};
use crate::rng::rng_from_seed;

/// Dorogovtsev–Mendes–Samukhin growth from a triangle: every new node picks
/// one existing edge uniformly at random and links to both endpoints.
///
/// One edge is chosen per step, so the "distinct edges per step" condition
/// holds trivially, and the new node cannot duplicate a link.
pub fn generate_dms(params: &GenParams) -> Result<Graph> {
    if params.model != NetworkModel::Dms {
        return Err(Error::param("generate_dms called with a non-DMS model"));
    }
    params.validate()?;
    let n = params.n;
    let mut rng = rng_from_seed(params.seed);

    let mut edges = Vec::with_capacity(params.expected_edges());
    edges.extend_from_slice(&[(0, 1), (0, 2), (1, 2)]);
    for node in 3..n {
        let (a, b) = edges[rng.random_range(0..edges.len() as u64) as usize];
        edges.push((a, node));
        edges.push((b, node));
    }
    Ok(Graph::from_edges_unchecked(n, &edges))
}
