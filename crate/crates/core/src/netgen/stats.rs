use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use super::Graph;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GraphStats {
    pub node_count: usize,
    pub edge_count: usize,
    pub mean_degree: f64,
    pub max_degree: usize,
    pub triangles: u64,
    /// Transitivity: three times the triangle count over the number of
    /// connected triples.
    pub global_clustering: f64,
    /// Mean of per-node clustering; nodes of degree < 2 contribute zero.
    pub mean_local_clustering: f64,
    pub degree_histogram: BTreeMap<usize, usize>,
}

/// Per-node triangle counts, one entry per node.
///
/// Edges are oriented from lower to higher (degree, id) rank, so each
/// triangle is found exactly once from its lowest-ranked corner.
pub fn triangles_per_node(g: &Graph) -> Vec<u64> {
    let n = g.node_count();
    let rank = |v: usize| (g.degree(v), v);
    let forward: Vec<Vec<u32>> =
        (0..n).map(|u| g.neighbours(u).iter().copied().filter(|&v| rank(v as usize) > rank(u)).collect()).collect();

    let mut per_node = vec![0u64; n];
    let mut mark = vec![false; n];
    for u in 0..n {
        for &v in &forward[u] {
            mark[v as usize] = true;
        }
        for &v in &forward[u] {
            for &w in &forward[v as usize] {
                if mark[w as usize] {
                    per_node[u] += 1;
                    per_node[v as usize] += 1;
                    per_node[w as usize] += 1;
                }
            }
        }
        for &v in &forward[u] {
            mark[v as usize] = false;
        }
    }
    per_node
}

pub fn count_triangles(g: &Graph) -> u64 {
    triangles_per_node(g).iter().sum::<u64>() / 3
}

pub fn compute_stats(g: &Graph) -> GraphStats {
    let n = g.node_count();
    let per_node = triangles_per_node(g);
    let triangles = per_node.iter().sum::<u64>() / 3;

    let mut triples = 0u64;
    let mut local_sum = 0.0;
    let mut histogram = BTreeMap::new();
    for (v, d) in g.degrees().enumerate() {
        *histogram.entry(d).or_insert(0) += 1;
        let pairs = (d * d.saturating_sub(1) / 2) as u64;
        triples += pairs;
        if pairs > 0 {
            local_sum += per_node[v] as f64 / pairs as f64;
        }
    }
    let global_clustering = if triples == 0 { 0.0 } else { 3.0 * triangles as f64 / triples as f64 };

    GraphStats {
        node_count: n,
        edge_count: g.edge_count(),
        mean_degree: 2.0 * g.edge_count() as f64 / n as f64,
        max_degree: g.max_degree(),
        triangles,
        global_clustering,
        mean_local_clustering: local_sum / n as f64,
        degree_histogram: histogram,
    }
}
