use std::collections::{BTreeSet, HashMap};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::One;

use super::{EdgeId, TemporalNetwork};
use crate::error::{Error, Result};
use crate::geometry::Timeline;
use crate::rational::Rational;
use crate::static_mst::UnionFind;

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct ValidationReport {
    /// Edges whose series does not span exactly `[1, K]`.
    pub horizon_mismatch: Vec<EdgeId>,
    /// Open time intervals on which the present edges do not connect all nodes.
    pub disconnected: Vec<(Rational, Rational)>,
    /// Pairs of edges whose weight functions coincide over a whole segment.
    pub coincident_pairs: Vec<(EdgeId, EdgeId)>,
}

impl ValidationReport {
    pub fn is_valid(&self) -> bool {
        self.horizon_mismatch.is_empty() && self.disconnected.is_empty() && self.coincident_pairs.is_empty()
    }

    /// True when coincidences are the only problem, i.e. perturbation can fix it.
    pub fn only_degenerate(&self) -> bool {
        self.horizon_mismatch.is_empty() && self.disconnected.is_empty() && !self.coincident_pairs.is_empty()
    }

    pub fn summary(&self) -> String {
        let mut parts = Vec::new();
        if let Some(e) = self.horizon_mismatch.first() {
            parts.push(format!("{} edge(s) not sampled over the horizon (first: {e})", self.horizon_mismatch.len()));
        }
        if let Some((a, b)) = self.disconnected.first() {
            parts.push(format!("disconnected on {} interval(s), first ({a}, {b})", self.disconnected.len()));
        }
        if let Some((a, b)) = self.coincident_pairs.first() {
            parts.push(format!("{} coincident pair(s), first ({a}, {b})", self.coincident_pairs.len()));
        }
        if parts.is_empty() {
            "valid".into()
        } else {
            parts.join("; ")
        }
    }

    pub fn into_result(self) -> Result<()> {
        if self.is_valid() {
            Ok(())
        } else {
            Err(Error::Invalid(self.summary()))
        }
    }
}

pub fn validate(net: &TemporalNetwork) -> ValidationReport {
    validate_with_timeline(net).0
}

/// Timeline of a network that passes validation.
pub(crate) fn checked_timeline(net: &TemporalNetwork) -> Result<Timeline> {
    let (report, tl) = validate_with_timeline(net);
    report.into_result()?;
    tl.ok_or_else(|| Error::Internal("valid network without timeline".into()))
}

fn validate_with_timeline(net: &TemporalNetwork) -> (ValidationReport, Option<Timeline>) {
    let mut report = ValidationReport::default();
    let (start, end) = (net.horizon_start(), net.horizon_end());
    for e in net.edges() {
        if e.weights.first_instant() != &start || e.weights.last_instant() != &end {
            report.horizon_mismatch.push(e.id);
        }
    }
    if !report.horizon_mismatch.is_empty() {
        return (report, None);
    }
    let tl = match Timeline::new(net) {
        Ok(tl) => tl,
        Err(_) => {
            report.horizon_mismatch = net.edges().iter().map(|e| e.id).collect();
            return (report, None);
        }
    };
    report.disconnected = disconnected_slabs(&tl);
    report.coincident_pairs = coincident_pairs(&tl);
    (report, Some(tl))
}

fn disconnected_slabs(tl: &Timeline) -> Vec<(Rational, Rational)> {
    let mut out = Vec::new();
    for j in 0..tl.slab_count() {
        let mut uf = UnionFind::new(tl.node_count());
        let mut components = tl.node_count();
        for e in tl.present_edges(j) {
            let (u, v) = tl.endpoints(e);
            if uf.union(u, v) {
                components -= 1;
            }
        }
        if components > 1 {
            let (a, b) = tl.slab(j);
            out.push((a.clone(), b.clone()));
        }
    }
    out
}

fn coincident_pairs(tl: &Timeline) -> Vec<(EdgeId, EdgeId)> {
    let mut pairs = BTreeSet::new();
    for j in 0..tl.slab_count() {
        let mut buckets: HashMap<(&Rational, &Rational), Vec<EdgeId>> = HashMap::new();
        for e in tl.present_edges(j) {
            let line = tl.line(e, j).expect("present edge has a line");
            buckets.entry((&line.start, &line.end)).or_default().push(e);
        }
        for ids in buckets.values().filter(|ids| ids.len() > 1) {
            for (i, &a) in ids.iter().enumerate() {
                for &b in &ids[i + 1..] {
                    pairs.insert((a.min(b), a.max(b)));
                }
            }
        }
    }
    pairs.into_iter().collect()
}

/// `1 / (2 * D * m * K)` where `D` is the least common multiple of all sample
/// denominators.
pub fn perturbation_epsilon(net: &TemporalNetwork) -> Rational {
    let mut lcm = BigInt::one();
    for e in net.edges() {
        for v in e.weights.values() {
            lcm = lcm.lcm(&v.denom());
        }
    }
    let scale = lcm * BigInt::from(2) * BigInt::from(net.edge_count().max(1)) * BigInt::from(net.horizon());
    Rational::from(BigRational::new(BigInt::one(), scale))
}

/// Shift the higher-id edge of every coincident pair up by epsilon, repeating
/// until no coincidence remains. Fails after `m` passes.
pub fn perturb_degenerate(net: &TemporalNetwork) -> Result<TemporalNetwork> {
    let eps = perturbation_epsilon(net);
    let mut current = net.clone();
    for _pass in 0..net.edge_count().max(1) {
        let report = validate(&current);
        if !report.horizon_mismatch.is_empty() {
            return Err(Error::Invalid(report.summary()));
        }
        if report.coincident_pairs.is_empty() {
            return Ok(current);
        }
        let shifted: BTreeSet<EdgeId> = report.coincident_pairs.iter().map(|&(_, b)| b).collect();
        current = current.map_weights(|e| {
            if !shifted.contains(&e.id) {
                return Ok(e.weights.clone());
            }
            let samples = e.weights.samples().iter().map(|(t, w)| (t.clone(), w + &eps)).collect();
            super::WeightSeries::new(samples, e.weights.absence().to_vec())
        })?;
        current.meta.perturbed = true;
    }
    if validate(&current).coincident_pairs.is_empty() {
        Ok(current)
    } else {
        Err(Error::UnresolvedDegeneracy { passes: net.edge_count() })
    }
}
