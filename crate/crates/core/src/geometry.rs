//! Arrangement of edge weight functions: intersection events, edge-order
//! intervals and one-sided orderings around an instant.
//!
//! Every computation runs on a [`Timeline`], which cuts `[1, K]` at every
//! sample instant and every absence boundary. Between two consecutive cuts
//! ("slabs") each edge is either absent or a single line segment.

use std::cmp::Ordering;

use rayon::prelude::*;
use smallvec::SmallVec;

use crate::error::{Error, Result};
use crate::model::{EdgeId, NodeId, TemporalNetwork};
use crate::rational::Rational;

/// A linear piece of an edge weight function over one slab.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Line {
    pub start: Rational,
    pub end: Rational,
    pub slope: Rational,
}

#[derive(Debug, Clone)]
pub struct Timeline {
    breaks: Vec<Rational>,
    /// `lines[edge][slab]`, `None` while the edge is absent.
    lines: Vec<Vec<Option<Line>>>,
    endpoints: Vec<(NodeId, NodeId)>,
    gaps: Vec<Vec<(Rational, Rational)>>,
    nodes: usize,
}

impl Timeline {
    pub fn new(net: &TemporalNetwork) -> Result<Self> {
        let (start, end) = (net.horizon_start(), net.horizon_end());
        let mut breaks: Vec<Rational> = (1..=net.horizon() as i64).map(Rational::from_int).collect();
        let mut expanded = Vec::with_capacity(net.edge_count());
        let mut gaps = Vec::with_capacity(net.edge_count());
        for e in net.edges() {
            if e.weights.first_instant() != &start || e.weights.last_instant() != &end {
                return Err(Error::Invalid(format!(
                    "edge {} is sampled over [{}, {}], expected [{start}, {end}]",
                    e.id,
                    e.weights.first_instant(),
                    e.weights.last_instant()
                )));
            }
            let series = e.weights.expand_absence()?;
            breaks.extend(series.samples().iter().map(|(t, _)| t.clone()));
            let g = e.weights.gaps();
            for (lo, hi) in &g {
                for b in [lo, hi] {
                    if b > &start && b < &end {
                        breaks.push(b.clone());
                    }
                }
            }
            expanded.push(series);
            gaps.push(g);
        }
        breaks.sort();
        breaks.dedup();

        let lines = expanded
            .iter()
            .zip(&gaps)
            .map(|(series, g)| {
                breaks
                    .windows(2)
                    .map(|w| {
                        let mid = Rational::midpoint(&w[0], &w[1]);
                        if g.iter().any(|(lo, hi)| lo < &mid && &mid < hi) {
                            return Ok(None);
                        }
                        let s = series.interpolate(&w[0])?;
                        let f = series.interpolate(&w[1])?;
                        let slope = (&f - &s) / (&w[1] - &w[0]);
                        Ok(Some(Line { start: s, end: f, slope }))
                    })
                    .collect::<Result<Vec<_>>>()
            })
            .collect::<Result<Vec<_>>>()?;

        Ok(Timeline {
            breaks,
            lines,
            endpoints: net.edges().iter().map(|e| (e.u, e.v)).collect(),
            gaps,
            nodes: net.node_count(),
        })
    }

    pub fn breaks(&self) -> &[Rational] {
        &self.breaks
    }

    pub fn slab_count(&self) -> usize {
        self.breaks.len() - 1
    }

    pub fn slab(&self, j: usize) -> (&Rational, &Rational) {
        (&self.breaks[j], &self.breaks[j + 1])
    }

    pub fn node_count(&self) -> usize {
        self.nodes
    }

    pub fn edge_count(&self) -> usize {
        self.lines.len()
    }

    pub fn endpoints(&self, e: EdgeId) -> (NodeId, NodeId) {
        self.endpoints[e]
    }

    pub fn all_endpoints(&self) -> &[(NodeId, NodeId)] {
        &self.endpoints
    }

    pub fn line(&self, e: EdgeId, slab: usize) -> Option<&Line> {
        self.lines[e][slab].as_ref()
    }

    /// Weight of `e` at `t`, where `t` lies in the closed slab.
    pub fn value_on(&self, e: EdgeId, slab: usize, t: &Rational) -> Option<Rational> {
        let line = self.lines[e][slab].as_ref()?;
        Some(&line.start + &line.slope * (t - &self.breaks[slab]))
    }

    pub fn present_on_slab(&self, e: EdgeId, slab: usize) -> bool {
        self.lines[e][slab].is_some()
    }

    /// Padded absence gaps of edge `e` as open intervals.
    pub fn gaps(&self, e: EdgeId) -> &[(Rational, Rational)] {
        &self.gaps[e]
    }

    /// Edges present throughout slab `j`.
    pub fn present_edges(&self, slab: usize) -> impl Iterator<Item = EdgeId> + '_ {
        (0..self.lines.len()).filter(move |&e| self.lines[e][slab].is_some())
    }

    pub fn probe(&self, t: &Rational) -> Probe<'_> {
        let j = self.breaks.partition_point(|b| b <= t);
        let last = self.breaks.len() - 1;
        let (left, right) = if j == 0 || j > last && t > &self.breaks[last] {
            (None, None)
        } else if &self.breaks[j - 1] == t {
            let k = j - 1;
            (k.checked_sub(1), (k < last).then_some(k))
        } else {
            (Some(j - 1), Some(j - 1))
        };
        let offset = |s: Option<usize>| s.map(|s| t - &self.breaks[s]);
        Probe { tl: self, t: t.clone(), left, right, left_offset: offset(left), right_offset: offset(right) }
    }

    /// All pairwise crossings inside the closed slab `j`, merged by
    /// `(time, value)` and sorted.
    pub fn slab_crossings(&self, slab: usize) -> Vec<IntersectionEvent> {
        let (b0, b1) = self.slab(slab);
        let width = b1 - b0;
        let present: Vec<(EdgeId, &Line)> =
            (0..self.lines.len()).filter_map(|e| self.lines[e][slab].as_ref().map(|l| (e, l))).collect();
        let mut raw: Vec<(Rational, Rational, EdgeId, EdgeId)> = Vec::new();
        for (i, &(a, la)) in present.iter().enumerate() {
            for &(b, lb) in &present[i + 1..] {
                let c0 = la.start.cmp(&lb.start);
                let c1 = la.end.cmp(&lb.end);
                if c0 == c1 && c0 != Ordering::Equal {
                    continue;
                }
                let point = match (c0, c1) {
                    // Coincident segments are rejected by validation.
                    (Ordering::Equal, Ordering::Equal) => continue,
                    (Ordering::Equal, _) => (b0.clone(), la.start.clone()),
                    (_, Ordering::Equal) => (b1.clone(), la.end.clone()),
                    _ => {
                        let d0 = &la.start - &lb.start;
                        let d1 = &la.end - &lb.end;
                        let dx = &d0 / (&d0 - &d1) * &width;
                        let v = &la.start + &la.slope * &dx;
                        (b0 + &dx, v)
                    }
                };
                raw.push((point.0, point.1, a, b));
            }
        }
        raw.sort_unstable_by(|x, y| x.0.cmp(&y.0).then_with(|| x.1.cmp(&y.1)));
        merge_points(raw.into_iter().map(|(t, v, a, b)| (t, v, [a, b])))
    }

    /// Crossings of slab `j` with `t < b_{j+1}`: together over all slabs these
    /// cover `[1, K)` exactly once.
    pub fn slab_events(&self, slab: usize) -> Vec<IntersectionEvent> {
        let end = &self.breaks[slab + 1];
        let mut events = self.slab_crossings(slab);
        events.retain(|e| &e.time < end);
        events
    }
}

fn merge_points<const N: usize>(
    sorted: impl Iterator<Item = (Rational, Rational, [EdgeId; N])>,
) -> Vec<IntersectionEvent> {
    let mut out: Vec<IntersectionEvent> = Vec::new();
    for (t, v, edges) in sorted {
        match out.last_mut() {
            Some(last) if last.time == t && last.value == v => last.edges.extend(edges),
            _ => out.push(IntersectionEvent { time: t, value: v, edges: edges.into_iter().collect() }),
        }
    }
    for ev in &mut out {
        ev.edges.sort_unstable();
        ev.edges.dedup();
    }
    out
}

/// Evaluation of the arrangement at one instant, with one-sided slopes.
#[derive(Debug, Clone)]
pub struct Probe<'a> {
    tl: &'a Timeline,
    pub t: Rational,
    left: Option<usize>,
    right: Option<usize>,
    left_offset: Option<Rational>,
    right_offset: Option<Rational>,
}

/// Sort key of an edge on one side of an instant: ascending keys are
/// ascending weights just before/after the instant.
pub type OrderKey = (Rational, Rational, EdgeId);

impl<'a> Probe<'a> {
    fn left_line(&self, e: EdgeId) -> Option<&'a Line> {
        self.left.and_then(|s| self.tl.lines[e][s].as_ref())
    }

    fn right_line(&self, e: EdgeId) -> Option<&'a Line> {
        self.right.and_then(|s| self.tl.lines[e][s].as_ref())
    }

    pub fn present_before(&self, e: EdgeId) -> bool {
        self.left_line(e).is_some()
    }

    pub fn present_after(&self, e: EdgeId) -> bool {
        self.right_line(e).is_some()
    }

    pub fn present_at(&self, e: EdgeId) -> bool {
        let t = &self.t;
        !self.tl.gaps[e].iter().any(|(lo, hi)| lo < t && t < hi)
    }

    /// Exact value at the probe instant, `None` while absent.
    pub fn value(&self, e: EdgeId) -> Option<Rational> {
        if let (Some(l), Some(off)) = (self.right_line(e), &self.right_offset) {
            return Some(&l.start + &l.slope * off);
        }
        if let (Some(l), Some(off)) = (self.left_line(e), &self.left_offset) {
            return Some(&l.start + &l.slope * off);
        }
        None
    }

    pub fn left_slope(&self, e: EdgeId) -> Option<&'a Rational> {
        self.left_line(e).map(|l| &l.slope)
    }

    pub fn right_slope(&self, e: EdgeId) -> Option<&'a Rational> {
        self.right_line(e).map(|l| &l.slope)
    }

    /// Weight order just after the instant: `(value, right slope, id)`.
    pub fn after_key(&self, e: EdgeId) -> Option<OrderKey> {
        let l = self.right_line(e)?;
        let v = &l.start + &l.slope * self.right_offset.as_ref()?;
        Some((v, l.slope.clone(), e))
    }

    /// Weight order just before the instant: `(value, -left slope, id)`.
    pub fn before_key(&self, e: EdgeId) -> Option<OrderKey> {
        let l = self.left_line(e)?;
        let v = &l.start + &l.slope * self.left_offset.as_ref()?;
        Some((v, -&l.slope, e))
    }

    fn ordered(&self, edges: &[EdgeId], key: impl Fn(EdgeId) -> Option<OrderKey>) -> Result<Vec<EdgeId>> {
        let mut keyed = edges
            .iter()
            .map(|&e| key(e).ok_or_else(|| Error::EdgeAbsent { edge: e, t: self.t.clone() }))
            .collect::<Result<Vec<_>>>()?;
        keyed.sort_unstable_by(|a, b| b.cmp(a));
        Ok(keyed.into_iter().map(|k| k.2).collect())
    }

    /// Decreasing weight order just before the instant.
    pub fn order_before(&self, edges: &[EdgeId]) -> Result<Vec<EdgeId>> {
        self.ordered(edges, |e| self.before_key(e))
    }

    /// Decreasing weight order just after the instant.
    pub fn order_after(&self, edges: &[EdgeId]) -> Result<Vec<EdgeId>> {
        self.ordered(edges, |e| self.after_key(e))
    }
}

/// A point `(time, value)` shared by two or more weight functions.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IntersectionEvent {
    pub time: Rational,
    pub value: Rational,
    pub edges: SmallVec<[EdgeId; 4]>,
}

/// All intersection events sharing one time coordinate.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EventGroup {
    pub time: Rational,
    pub events: Vec<IntersectionEvent>,
}

/// An open interval with no intersection event inside it.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EdgeOrderInterval {
    pub start: Rational,
    pub end: Rational,
}

impl EdgeOrderInterval {
    pub fn midpoint(&self) -> Rational {
        Rational::midpoint(&self.start, &self.end)
    }
}

/// Every intersection point of the network's weight functions, sorted by
/// time and then value. Points shared by several pairs are merged into one
/// event. Slabs are processed in parallel; output does not depend on the
/// worker count.
pub fn find_intersections(net: &TemporalNetwork) -> Result<Vec<IntersectionEvent>> {
    let tl = Timeline::new(net)?;
    Ok(timeline_intersections(&tl))
}

pub fn timeline_intersections(tl: &Timeline) -> Vec<IntersectionEvent> {
    let per_slab: Vec<Vec<IntersectionEvent>> =
        (0..tl.slab_count()).into_par_iter().map(|j| tl.slab_crossings(j)).collect();
    let mut all: Vec<IntersectionEvent> = per_slab.into_iter().flatten().collect();
    // Only events on shared slab boundaries can repeat.
    all.sort_by(|a, b| a.time.cmp(&b.time).then_with(|| a.value.cmp(&b.value)));
    let mut out: Vec<IntersectionEvent> = Vec::with_capacity(all.len());
    for ev in all {
        match out.last_mut() {
            Some(last) if last.time == ev.time && last.value == ev.value => {
                last.edges.extend(ev.edges);
                last.edges.sort_unstable();
                last.edges.dedup();
            }
            _ => out.push(ev),
        }
    }
    out
}

/// Consecutive pairs of `1, t_1, t_2, ..., K` over the distinct event times
/// strictly inside the horizon.
pub fn build_intervals(events: &[IntersectionEvent], horizon: u32) -> Vec<EdgeOrderInterval> {
    let start = Rational::one();
    let end = Rational::from_int(horizon as i64);
    let mut cuts = vec![start.clone()];
    for ev in events {
        if ev.time > start && ev.time < end && cuts.last() != Some(&ev.time) {
            cuts.push(ev.time.clone());
        }
    }
    cuts.push(end);
    cuts.windows(2).map(|w| EdgeOrderInterval { start: w[0].clone(), end: w[1].clone() }).collect()
}

/// Partition sorted events by exact time.
pub fn group_events(events: Vec<IntersectionEvent>) -> Vec<EventGroup> {
    let mut groups: Vec<EventGroup> = Vec::new();
    for ev in events {
        match groups.last_mut() {
            Some(g) if g.time == ev.time => g.events.push(ev),
            _ => groups.push(EventGroup { time: ev.time.clone(), events: vec![ev] }),
        }
    }
    groups
}

/// Decreasing weight orderings of `edges` just before and just after `t`,
/// decided by value at `t`, then one-sided slope, then edge id.
pub fn order_around(net: &TemporalNetwork, edges: &[EdgeId], t: &Rational) -> Result<(Vec<EdgeId>, Vec<EdgeId>)> {
    let tl = Timeline::new(net)?;
    let probe = tl.probe(t);
    Ok((probe.order_before(edges)?, probe.order_after(edges)?))
}
