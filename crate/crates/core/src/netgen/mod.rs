//! Scale-free network construction and structural statistics.

mod ba;
mod dms;
mod edgelist;
mod graph;
mod stats;

pub use ba::{generate_ba, sample_preferential};
pub use dms::generate_dms;
pub use edgelist::{load_edgelist, read_edgelist, save_edgelist, write_edgelist};
pub use graph::Graph;
pub use stats::{compute_stats, count_triangles, GraphStats};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum NetworkModel {
    /// Barabási–Albert preferential attachment.
    Ba,
    /// Dorogovtsev–Mendes–Samukhin edge-endpoint attachment.
    Dms,
}

impl NetworkModel {
    pub fn name(self) -> &'static str {
        match self {
            NetworkModel::Ba => "ba",
            NetworkModel::Dms => "dms",
        }
    }
}

impl std::str::FromStr for NetworkModel {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "ba" => Ok(NetworkModel::Ba),
            "dms" => Ok(NetworkModel::Dms),
            other => Err(Error::param(format!("unknown network model `{other}` (expected ba or dms)"))),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GenParams {
    pub model: NetworkModel,
    /// Final node count.
    pub n: usize,
    /// Edges added per new node. DMS always uses 2.
    pub m: usize,
    /// Size of the BA seed clique. Ignored by DMS, which grows from a triangle.
    pub m0: usize,
    pub seed: u64,
}

impl GenParams {
    /// BA parameters with the smallest admissible seed clique, `m0 = m + 1`.
    pub fn ba(n: usize, m: usize, seed: u64) -> Self {
        GenParams { model: NetworkModel::Ba, n, m, m0: m + 1, seed }
    }

    pub fn dms(n: usize, seed: u64) -> Self {
        GenParams { model: NetworkModel::Dms, n, m: 2, m0: 3, seed }
    }

    pub fn with_seed(&self, seed: u64) -> Self {
        GenParams { seed, ..self.clone() }
    }

    pub fn validate(&self) -> Result<()> {
        match self.model {
            NetworkModel::Ba => {
                if self.m < 1 {
                    return Err(Error::param(format!("m must be at least 1 (got m = {})", self.m)));
                }
                if self.m0 < 2 {
                    return Err(Error::param(format!("m0 must be at least 2 (got m0 = {})", self.m0)));
                }
                if self.m > self.m0 {
                    return Err(Error::param(format!("m must not exceed m0 (got m = {}, m0 = {})", self.m, self.m0)));
                }
                // n == m0 is the bare seed clique.
                if self.n < self.m0 {
                    return Err(Error::param(format!("n must be at least m0 (got n = {}, m0 = {})", self.n, self.m0)));
                }
            }
            NetworkModel::Dms => {
                if self.n < 3 {
                    return Err(Error::param(format!("DMS requires n >= 3 (got n = {})", self.n)));
                }
                if self.m != 2 {
                    return Err(Error::param(format!("DMS attaches exactly 2 edges per node (got m = {})", self.m)));
                }
            }
        }
        Ok(())
    }

    /// Exact edge count of the generated graph.
    pub fn expected_edges(&self) -> usize {
        match self.model {
            NetworkModel::Ba => self.m0 * (self.m0 - 1) / 2 + self.m * (self.n - self.m0),
            NetworkModel::Dms => 3 + 2 * (self.n - 3),
        }
    }
}

/// Dispatches on `params.model`.
pub fn generate(params: &GenParams) -> Result<Graph> {
    match params.model {
        NetworkModel::Ba => generate_ba(params),
        NetworkModel::Dms => generate_dms(params),
    }
}
