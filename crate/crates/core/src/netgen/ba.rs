use rand::Rng;

use super::{GenParams, Graph, NetworkModel};
use crate::error::{Error, Result};
use crate::rng::rng_from_seed;

/// Barabási–Albert growth from a complete graph on `m0` nodes.
///
/// Each new node draws `m` distinct targets with probability proportional to
/// degree. All draws of one step use the degree snapshot taken before the
/// node is added; a draw that repeats an already chosen target is rejected.
pub fn generate_ba(params: &GenParams) -> Result<Graph> {
    if params.model != NetworkModel::Ba {
        return Err(Error::param("generate_ba called with a non-BA model"));
    }
    params.validate()?;
    let (n, m, m0) = (params.n, params.m, params.m0);
    let mut rng = rng_from_seed(params.seed);

    let mut edges = Vec::with_capacity(params.expected_edges());
    // Every edge endpoint appears once, so a uniform draw is degree-proportional.
    let mut endpoints: Vec<u32> = Vec::with_capacity(2 * params.expected_edges());
    for i in 0..m0 {
        for j in i + 1..m0 {
            edges.push((i, j));
            endpoints.push(i as u32);
            endpoints.push(j as u32);
        }
    }

    let mut targets = Vec::with_capacity(m);
    for node in m0..n {
        sample_preferential(&mut rng, &endpoints, m, &mut targets);
        for &t in &targets {
            edges.push((t, node));
            endpoints.push(t as u32);
            endpoints.push(node as u32);
        }
    }
    Ok(Graph::from_edges_unchecked(n, &edges))
}

/// Draws `m` distinct node ids from an endpoint pool, where each node occurs
/// once per incident edge. Results are written to `out` in draw order.
pub fn sample_preferential<R: Rng + ?Sized>(rng: &mut R, endpoints: &[u32], m: usize, out: &mut Vec<usize>) {
    out.clear();
    while out.len() < m {
        let pick = endpoints[rng.random_range(0..endpoints.len() as u64) as usize] as usize;
        if !out.contains(&pick) {
            out.push(pick);
        }
    }
}
