//! Solver output: the time-sub-intervals and their trees.

use crate::error::{Error, Result};
use crate::geometry::Timeline;
use crate::model::{EdgeId, TemporalNetwork};
use crate::rational::Rational;
use crate::static_mst::SpanningTree;

/// One linear piece of a tree's total cost: `slope * t + offset` on `[from, to]`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CostPiece {
    pub from: Rational,
    pub to: Rational,
    pub slope: Rational,
    pub offset: Rational,
}

impl CostPiece {
    pub fn eval(&self, t: &Rational) -> Rational {
        &self.slope * t + &self.offset
    }
}

/// A maximal interval with a single MST. Interior boundaries are half-open:
/// the interval covers `[start, end)`, except that the last one also covers
/// the horizon end.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TimeSubIntervalMST {
    pub start: Rational,
    pub end: Rational,
    pub tree: SpanningTree,
    pub cost: Vec<CostPiece>,
}

impl TimeSubIntervalMST {
    pub fn tree_edges(&self) -> Vec<EdgeId> {
        self.tree.edges().collect()
    }

    pub fn cost_at(&self, t: &Rational) -> Option<Rational> {
        self.cost.iter().find(|p| &p.from <= t && t <= &p.to).map(|p| p.eval(t))
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ResultMetadata {
    pub algorithm: String,
    /// Intersection events with time in `[1, K)`.
    pub event_count: usize,
    pub perturbed: bool,
    pub nodes: usize,
    pub edges: usize,
    pub horizon: u32,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TsmstResult {
    pub intervals: Vec<TimeSubIntervalMST>,
    pub metadata: ResultMetadata,
}

impl TsmstResult {
    /// Assemble a result from `(start, tree)` runs; each run ends where the
    /// next begins and the last ends at `K`.
    pub(crate) fn from_runs(
        tl: &Timeline,
        net: &TemporalNetwork,
        runs: Vec<(Rational, SpanningTree)>,
        algorithm: &str,
        event_count: usize,
    ) -> Self {
        let end = net.horizon_end();
        let mut intervals = Vec::with_capacity(runs.len());
        let mut it = runs.into_iter().peekable();
        while let Some((start, tree)) = it.next() {
            let stop = it.peek().map_or(end.clone(), |(s, _)| s.clone());
            let cost = cost_pieces(tl, &tree, &start, &stop);
            intervals.push(TimeSubIntervalMST { start, end: stop, tree, cost });
        }
        TsmstResult {
            intervals,
            metadata: ResultMetadata {
                algorithm: algorithm.to_string(),
                event_count,
                perturbed: net.meta.perturbed,
                nodes: net.node_count(),
                edges: net.edge_count(),
                horizon: net.horizon(),
            },
        }
    }

    /// Index of the interval whose tree is the MST at `t`.
    pub fn interval_index_at(&self, t: &Rational) -> Option<usize> {
        let first = self.intervals.first()?;
        let last = self.intervals.last()?;
        if t < &first.start || t > &last.end {
            return None;
        }
        let i = self.intervals.partition_point(|iv| &iv.end <= t);
        Some(i.min(self.intervals.len() - 1))
    }

    pub fn tree_at(&self, t: &Rational) -> Option<&SpanningTree> {
        self.interval_index_at(t).map(|i| &self.intervals[i].tree)
    }

    /// Same boundaries and same trees.
    pub fn same_partition(&self, other: &TsmstResult) -> bool {
        self.intervals.len() == other.intervals.len()
            && self
                .intervals
                .iter()
                .zip(&other.intervals)
                .all(|(a, b)| a.start == b.start && a.end == b.end && a.tree == b.tree)
    }

    /// Partition of `[1, K]`, positive lengths, distinct adjacent trees.
    pub fn check_partition(&self, horizon: u32) -> Result<()> {
        let fail = |msg: String| Err(Error::Structure(msg));
        let (Some(first), Some(last)) = (self.intervals.first(), self.intervals.last()) else {
            return fail("no intervals".into());
        };
        if first.start != Rational::one() {
            return fail(format!("first interval starts at {}", first.start));
        }
        if last.end != Rational::from_int(horizon as i64) {
            return fail(format!("last interval ends at {}", last.end));
        }
        for (i, iv) in self.intervals.iter().enumerate() {
            if iv.start >= iv.end {
                return fail(format!("interval {i} is empty: [{}, {}]", iv.start, iv.end));
            }
        }
        for (i, w) in self.intervals.windows(2).enumerate() {
            if w[0].end != w[1].start {
                return fail(format!("gap between intervals {i} and {}", i + 1));
            }
            if w[0].tree == w[1].tree {
                return fail(format!("intervals {i} and {} carry the same tree", i + 1));
            }
        }
        Ok(())
    }
}

fn cost_pieces(tl: &Timeline, tree: &SpanningTree, start: &Rational, stop: &Rational) -> Vec<CostPiece> {
    let breaks = tl.breaks();
    let first = breaks.partition_point(|b| b <= start).saturating_sub(1);
    let mut pieces: Vec<CostPiece> = Vec::new();
    for j in first..tl.slab_count() {
        let (b0, b1) = tl.slab(j);
        if b0 >= stop {
            break;
        }
        let from = if b0 > start { b0.clone() } else { start.clone() };
        let to = if b1 < stop { b1.clone() } else { stop.clone() };
        let mut slope = Rational::zero();
        let mut offset = Rational::zero();
        for e in tree.edges() {
            // Members are present on every slab the interval overlaps.
            let Some(line) = tl.line(e, j) else { continue };
            offset = offset + &line.start - &line.slope * b0;
            slope = slope + &line.slope;
        }
        match pieces.last_mut() {
            Some(p) if p.slope == slope && p.offset == offset => p.to = to,
            _ => pieces.push(CostPiece { from, to, slope, offset }),
        }
    }
    pieces
}
