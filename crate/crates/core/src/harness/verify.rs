use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::oracle::oracle_enumerate;
use crate::error::Result;
use crate::geometry::{timeline_intersections, Timeline};
use crate::model::{EdgeId, TemporalNetwork};
use crate::rational::Rational;
use crate::result::TsmstResult;
use crate::static_mst::{kruskal_at, SpanningTree};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct VerifyOptions {
    /// Random oracle samples per reported interval.
    pub samples_per_interval: usize,
    /// Networks with more nodes skip the oracle.
    pub oracle_max_nodes: usize,
    pub seed: u64,
}

impl Default for VerifyOptions {
    fn default() -> Self {
        VerifyOptions { samples_per_interval: 25, oracle_max_nodes: 7, seed: 0 }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Divergence {
    pub kind: &'static str,
    pub time: Option<Rational>,
    pub expected: Vec<EdgeId>,
    pub got: Vec<EdgeId>,
    pub detail: String,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OracleReport {
    pub matched: bool,
    pub divergence: Option<Divergence>,
    /// Edge-order-interval midpoints compared against Kruskal.
    pub samples_checked: usize,
    /// Random interior times compared against enumeration.
    pub oracle_samples: usize,
}

fn diverged(
    kind: &'static str,
    time: Option<Rational>,
    expected: Vec<EdgeId>,
    got: Vec<EdgeId>,
    detail: String,
) -> Divergence {
    Divergence { kind, time, expected, got, detail }
}

fn ids(tree: &SpanningTree) -> Vec<EdgeId> {
    tree.edges().collect()
}

/// Check a solver result: partition and maximality, spanning trees, Kruskal
/// at every edge-order-interval midpoint, no absent member, and on small
/// networks brute-force optimality at random interior times.
pub fn verify(net: &TemporalNetwork, result: &TsmstResult, options: &VerifyOptions) -> Result<OracleReport> {
    let mut report = OracleReport { matched: true, divergence: None, samples_checked: 0, oracle_samples: 0 };
    if let Some(d) = check(net, result, options, &mut report)? {
        report.matched = false;
        report.divergence = Some(d);
    }
    Ok(report)
}

fn check(
    net: &TemporalNetwork,
    result: &TsmstResult,
    options: &VerifyOptions,
    report: &mut OracleReport,
) -> Result<Option<Divergence>> {
    if let Err(e) = result.check_partition(net.horizon()) {
        return Ok(Some(diverged("partition", None, vec![], vec![], e.to_string())));
    }
    let endpoints: Vec<(usize, usize)> = net.edges().iter().map(|e| (e.u, e.v)).collect();
    for iv in &result.intervals {
        if let Err(msg) = iv.tree.check_spanning(net.node_count(), &endpoints) {
            return Ok(Some(diverged("spanning", Some(iv.start.clone()), vec![], ids(&iv.tree), msg)));
        }
    }

    let tl = Timeline::new(net)?;
    let (start, end) = (net.horizon_start(), net.horizon_end());
    let mut cuts: Vec<Rational> = tl.breaks().to_vec();
    cuts.extend(timeline_intersections(&tl).into_iter().map(|e| e.time));
    cuts.retain(|t| t >= &start && t <= &end);
    cuts.sort();
    cuts.dedup();

    for w in cuts.windows(2) {
        let mid = Rational::midpoint(&w[0], &w[1]);
        let Some(i) = result.interval_index_at(&mid) else {
            return Ok(Some(diverged("coverage", Some(mid), vec![], vec![], "time not covered".into())));
        };
        let got = &result.intervals[i].tree;
        if let Some(e) = got.edges().find(|&e| !net.edge(e).is_present_at(&mid)) {
            return Ok(Some(diverged("absent-edge", Some(mid), vec![], ids(got), format!("edge {e} is absent"))));
        }
        let expected = kruskal_at(net, &mid)?;
        report.samples_checked += 1;
        if &expected != got {
            return Ok(Some(diverged("kruskal", Some(mid), ids(&expected), ids(got), String::new())));
        }
    }

    if net.node_count() > options.oracle_max_nodes || options.samples_per_interval == 0 {
        return Ok(None);
    }
    let mut rng = ChaCha8Rng::seed_from_u64(options.seed);
    for iv in &result.intervals {
        let width = &iv.end - &iv.start;
        let mut times = Vec::with_capacity(options.samples_per_interval);
        let mut attempts = 0;
        while times.len() < options.samples_per_interval && attempts < 20 * options.samples_per_interval {
            attempts += 1;
            let t = &iv.start + &width * Rational::new(rng.gen_range(1..10_000), 10_000);
            if cuts.binary_search(&t).is_err() {
                times.push(t);
            }
        }
        for ans in oracle_enumerate(net, &times)? {
            report.oracle_samples += 1;
            if ans.tree != iv.tree {
                return Ok(Some(diverged("oracle", Some(ans.time), ids(&ans.tree), ids(&iv.tree), String::new())));
            }
            if !ans.is_strict() {
                let detail = format!("{} trees share the minimum cost {}", ans.optimal_count, ans.cost);
                return Ok(Some(diverged("tie", Some(ans.time), ids(&ans.tree), ids(&iv.tree), detail)));
            }
        }
    }
    Ok(None)
}
