use std::fmt;
use std::str::FromStr;
use std::time::Instant;

use serde::{Deserialize, Serialize};

use super::{generate, GenSpec};
use crate::eio::{eio_with, EioOptions, EioStats};
use crate::error::{Error, Result};
use crate::model::TemporalNetwork;
use crate::result::TsmstResult;
use crate::tso::{tso, tso_incremental_sort};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Algorithm {
    Tso,
    TsoIncremental,
    Eio,
    /// EIO with every exchange on the add/delete-heaviest path.
    EioGeneral,
}

impl Algorithm {
    pub const ALL: [Algorithm; 4] = [Algorithm::Tso, Algorithm::TsoIncremental, Algorithm::Eio, Algorithm::EioGeneral];

    pub fn name(self) -> &'static str {
        match self {
            Algorithm::Tso => "tso",
            Algorithm::TsoIncremental => "tso-incremental",
            Algorithm::Eio => "eio",
            Algorithm::EioGeneral => "eio-general",
        }
    }
}

impl fmt::Display for Algorithm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Algorithm {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Algorithm::ALL
            .into_iter()
            .find(|a| a.name() == s)
            .ok_or_else(|| Error::Invalid(format!("unknown algorithm `{s}`")))
    }
}

/// Solve with the chosen algorithm; EIO variants also return their counters.
pub fn run_algorithm(net: &TemporalNetwork, algo: Algorithm) -> Result<(TsmstResult, Option<EioStats>)> {
    match algo {
        Algorithm::Tso => Ok((tso(net)?, None)),
        Algorithm::TsoIncremental => Ok((tso_incremental_sort(net)?, None)),
        Algorithm::Eio | Algorithm::EioGeneral => {
            let options = EioOptions { fast_path: algo == Algorithm::Eio, ..EioOptions::default() };
            let run = eio_with(net, &options)?;
            Ok((run.result, Some(run.stats)))
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BenchRow {
    pub algo: String,
    pub nodes: usize,
    pub edges: usize,
    pub horizon: u32,
    pub seed: u64,
    pub events: usize,
    pub intervals: usize,
    pub pruned_only_tree: usize,
    pub pruned_only_non_tree: usize,
    pub pruned_different_bcc: usize,
    pub pruned_mixed_groups: usize,
    pub pruned_no_order_change: usize,
    pub active: usize,
    pub wall_ms: f64,
}

/// One row per `(spec, algorithm)`. Each run is timed on a single worker;
/// the time covers event computation and solving, not generation.
pub fn bench(specs: &[GenSpec], algos: &[Algorithm]) -> Result<Vec<BenchRow>> {
    let pool = rayon::ThreadPoolBuilder::new().num_threads(1).build().map_err(|e| Error::Internal(e.to_string()))?;
    let mut rows = Vec::new();
    for spec in specs {
        let net = generate(spec)?;
        for &algo in algos {
            let started = Instant::now();
            let (result, stats) = pool.install(|| run_algorithm(&net, algo))?;
            let wall_ms = started.elapsed().as_secs_f64() * 1000.0;
            let s = stats.unwrap_or_default();
            rows.push(BenchRow {
                algo: algo.name().into(),
                nodes: net.node_count(),
                edges: net.edge_count(),
                horizon: net.horizon(),
                seed: spec.seed,
                events: result.metadata.event_count,
                intervals: result.intervals.len(),
                pruned_only_tree: s.pruned_all_tree,
                pruned_only_non_tree: s.pruned_all_non_tree,
                pruned_different_bcc: s.pruned_cross_bcc,
                pruned_mixed_groups: s.pruned_mixed_groups,
                pruned_no_order_change: s.pruned_same_order,
                active: s.active,
                wall_ms,
            });
        }
    }
    Ok(rows)
}

/// Share of filtered events per filter, in percent.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StatsRow {
    pub nodes: usize,
    pub edges: usize,
    pub horizon: u32,
    pub only_tree: f64,
    pub only_non_tree: f64,
    pub different_bcc: f64,
    pub no_order_change: f64,
    /// Percentage pruned by all filters together.
    pub total: f64,
    pub mixed_groups: f64,
    pub active: f64,
    pub events: usize,
}

impl StatsRow {
    pub fn from_stats(net: &TemporalNetwork, s: &EioStats) -> Self {
        let pct = |x: usize| {
            if s.events == 0 {
                0.0
            } else {
                100.0 * x as f64 / s.events as f64
            }
        };
        StatsRow {
            nodes: net.node_count(),
            edges: net.edge_count(),
            horizon: net.horizon(),
            only_tree: pct(s.pruned_all_tree),
            only_non_tree: pct(s.pruned_all_non_tree),
            different_bcc: pct(s.pruned_cross_bcc),
            no_order_change: pct(s.pruned_same_order),
            total: pct(s.pruned()),
            mixed_groups: pct(s.pruned_mixed_groups),
            active: pct(s.active),
            events: s.events,
        }
    }
}

pub fn filter_stats(net: &TemporalNetwork) -> Result<StatsRow> {
    let run = eio_with(net, &EioOptions::default())?;
    Ok(StatsRow::from_stats(net, &run.stats))
}
