use std::collections::HashSet;

use crate::error::{Error, Result};

/// Static simple undirected graph in compressed adjacency form.
///
/// Neighbour lists are sorted ascending, so two graphs with the same edge
/// set compare equal.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Graph {
    offsets: Vec<usize>,
    neighbours: Vec<u32>,
    max_degree: usize,
}

impl Graph {
    /// Builds a graph from an edge list, rejecting self-loops, duplicates and
    /// out-of-range ids. Edge orientation and order do not matter.
    pub fn from_edges(node_count: usize, edges: &[(usize, usize)]) -> Result<Self> {
        if node_count == 0 {
            return Err(Error::param("graph must have at least one node"));
        }
        if node_count > u32::MAX as usize {
            return Err(Error::param("node count exceeds u32 range"));
        }
        let mut seen = HashSet::with_capacity(edges.len());
        for &(a, b) in edges {
            if a >= node_count || b >= node_count {
                return Err(Error::param(format!("edge ({a}, {b}) references a node >= {node_count}")));
            }
            if a == b {
                return Err(Error::param(format!("self-loop on node {a}")));
            }
            if !seen.insert((a.min(b), a.max(b))) {
                return Err(Error::param(format!("duplicate edge ({a}, {b})")));
            }
        }
        Ok(Self::from_edges_unchecked(node_count, edges))
    }

    /// Caller guarantees the edges are simple and in range.
    pub(crate) fn from_edges_unchecked(node_count: usize, edges: &[(usize, usize)]) -> Self {
        let mut degree = vec![0usize; node_count];
        for &(a, b) in edges {
            degree[a] += 1;
            degree[b] += 1;
        }
        let mut offsets = Vec::with_capacity(node_count + 1);
        offsets.push(0);
        for d in &degree {
            offsets.push(offsets.last().unwrap() + d);
        }
        let mut cursor = offsets[..node_count].to_vec();
        let mut neighbours = vec![0u32; 2 * edges.len()];
        for &(a, b) in edges {
            neighbours[cursor[a]] = b as u32;
            cursor[a] += 1;
            neighbours[cursor[b]] = a as u32;
            cursor[b] += 1;
        }
        for i in 0..node_count {
            neighbours[offsets[i]..offsets[i + 1]].sort_unstable();
        }
        let max_degree = degree.iter().copied().max().unwrap_or(0);
        Graph { offsets, neighbours, max_degree }
    }

    /// Complete graph on `n` nodes.
    pub fn complete(n: usize) -> Self {
        let mut edges = Vec::with_capacity(n * n.saturating_sub(1) / 2);
        for i in 0..n {
            for j in i + 1..n {
                edges.push((i, j));
            }
        }
        Self::from_edges_unchecked(n.max(1), &edges)
    }

    /// Star with node 0 as hub.
    pub fn star(leaves: usize) -> Self {
        let edges: Vec<_> = (1..=leaves).map(|leaf| (0, leaf)).collect();
        Self::from_edges_unchecked(leaves + 1, &edges)
    }

    pub fn path(n: usize) -> Self {
        let edges: Vec<_> = (1..n).map(|i| (i - 1, i)).collect();
        Self::from_edges_unchecked(n.max(1), &edges)
    }

    pub fn node_count(&self) -> usize {
        self.offsets.len() - 1
    }

    pub fn edge_count(&self) -> usize {
        self.neighbours.len() / 2
    }

    pub fn degree(&self, node: usize) -> usize {
        self.offsets[node + 1] - self.offsets[node]
    }

    pub fn degrees(&self) -> impl Iterator<Item = usize> + '_ {
        self.offsets.windows(2).map(|w| w[1] - w[0])
    }

    pub fn max_degree(&self) -> usize {
        self.max_degree
    }

    /// Neighbours of `node`, ascending.
    pub fn neighbours(&self, node: usize) -> &[u32] {
        &self.neighbours[self.offsets[node]..self.offsets[node + 1]]
    }

    pub fn has_edge(&self, a: usize, b: usize) -> bool {
        self.neighbours(a).binary_search(&(b as u32)).is_ok()
    }

    /// Edges as `(i, j)` with `i < j`, in ascending lexicographic order.
    pub fn edges(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        (0..self.node_count()).flat_map(move |i| {
            self.neighbours(i).iter().map(|&j| j as usize).filter(move |&j| j > i).map(move |j| (i, j))
        })
    }

    /// Checks symmetry, simplicity and connectivity.
    pub fn validate(&self) -> Result<()> {
        let n = self.node_count();
        for i in 0..n {
            let nbrs = self.neighbours(i);
            for w in nbrs.windows(2) {
                if w[0] >= w[1] {
                    return Err(Error::contract(format!("node {i}: neighbour list not strictly ascending")));
                }
            }
            for &j in nbrs {
                let j = j as usize;
                if j >= n {
                    return Err(Error::contract(format!("node {i}: neighbour {j} out of range")));
                }
                if j == i {
                    return Err(Error::contract(format!("node {i}: self-loop")));
                }
                if !self.has_edge(j, i) {
                    return Err(Error::contract(format!("edge ({i}, {j}) not symmetric")));
                }
            }
        }
        if self.max_degree != self.degrees().max().unwrap_or(0) {
            return Err(Error::contract("cached max degree is stale"));
        }
        if !self.is_connected() {
            return Err(Error::contract("graph is not connected"));
        }
        Ok(())
    }

    pub fn is_connected(&self) -> bool {
        let n = self.node_count();
        let mut visited = vec![false; n];
        let mut stack = vec![0usize];
        visited[0] = true;
        let mut reached = 1;
        while let Some(i) = stack.pop() {
            for &j in self.neighbours(i) {
                let j = j as usize;
                if !visited[j] {
                    visited[j] = true;
                    reached += 1;
                    stack.push(j);
                }
            }
        }
        reached == n
    }
}
