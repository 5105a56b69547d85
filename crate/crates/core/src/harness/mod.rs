//! Workload generation, brute-force checking and benchmarking.

mod bench;
mod generate;
mod oracle;
pub mod sample;
mod verify;

pub use bench::{bench, filter_stats, run_algorithm, Algorithm, BenchRow, StatsRow};
pub use generate::{gen_random, gen_trajectory, generate, inject_absence, trajectory_network, Waypoint};
pub use oracle::{oracle_enumerate, OracleAnswer, ORACLE_MAX_NODES};
pub use verify::{verify, Divergence, OracleReport, VerifyOptions};

use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum GenKind {
    RandomSeries,
    /// Nodes move through `waypoints` random positions in a 100 x 100 square;
    /// pairs closer than `radius` at some sample instant are linked.
    Trajectory {
        waypoints: usize,
        radius: u32,
    },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct GenSpec {
    pub nodes: usize,
    pub edges: usize,
    pub horizon: u32,
    pub seed: u64,
    /// Inclusive range of integer sample values.
    #[serde(default = "default_weight_range")]
    pub weight_range: (i64, i64),
    #[serde(default = "default_kind")]
    pub kind: GenKind,
}

fn default_weight_range() -> (i64, i64) {
    (1, 100)
}

fn default_kind() -> GenKind {
    GenKind::RandomSeries
}

impl GenSpec {
    pub fn random(nodes: usize, edges: usize, horizon: u32, seed: u64) -> Self {
        GenSpec { nodes, edges, horizon, seed, weight_range: default_weight_range(), kind: GenKind::RandomSeries }
    }
}
