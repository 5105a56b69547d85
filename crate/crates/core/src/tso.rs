//! Baseline solver: one Kruskal run per edge-order-interval.

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::geometry::{OrderKey, Probe, Timeline};
use crate::model::{checked_timeline, EdgeId, TemporalNetwork};
use crate::rational::Rational;
use crate::result::TsmstResult;
use crate::static_mst::{kruskal_by_keys, kruskal_in_order, SpanningTree};

/// Recompute the MST at the midpoint of every edge-order-interval and merge
/// runs of equal trees. Slabs are solved in parallel.
pub fn tso(net: &TemporalNetwork) -> Result<TsmstResult> {
    let tl = checked_timeline(net)?;
    let per_slab = (0..tl.slab_count()).into_par_iter().map(|j| slab_runs(&tl, j)).collect::<Result<Vec<_>>>()?;
    let mut event_count = 0;
    let mut runs: Vec<(Rational, SpanningTree)> = Vec::new();
    for (events, slab) in per_slab {
        event_count += events;
        for (start, tree) in slab {
            push_run(&mut runs, start, tree);
        }
    }
    Ok(TsmstResult::from_runs(&tl, net, runs, "tso", event_count))
}

fn push_run(runs: &mut Vec<(Rational, SpanningTree)>, start: Rational, tree: SpanningTree) {
    if runs.last().is_none_or(|(_, last)| *last != tree) {
        runs.push((start, tree));
    }
}

fn slab_runs(tl: &Timeline, j: usize) -> Result<(usize, Vec<(Rational, SpanningTree)>)> {
    let (b0, b1) = tl.slab(j);
    let events = tl.slab_events(j);
    let mut cuts = vec![b0.clone()];
    for ev in &events {
        if cuts.last() != Some(&ev.time) {
            cuts.push(ev.time.clone());
        }
    }
    cuts.push(b1.clone());
    let present: Vec<EdgeId> = tl.present_edges(j).collect();
    let scaled = ScaledSlab::new(tl, j, &present);
    let width = b1 - b0;
    let mut runs = Vec::new();
    for w in cuts.windows(2) {
        let mid = Rational::midpoint(&w[0], &w[1]);
        let fraction = ((&mid - b0) / &width).as_small();
        let tree = match (&scaled, fraction) {
            (Some(s), Some((p, q))) => kruskal_by_keys(tl.node_count(), tl.all_endpoints(), s.keys(p, q)),
            _ => {
                let keyed = present.iter().map(|&e| (tl.value_on(e, j, &mid).expect("present on slab"), e)).collect();
                kruskal_by_keys(tl.node_count(), tl.all_endpoints(), keyed)
            }
        }
        .ok_or_else(|| Error::Disconnected { t: mid.clone() })?;
        push_run(&mut runs, w[0].clone(), tree);
    }
    Ok((events.len(), runs))
}

/// Lines of one slab scaled to a common integer denominator `D`: at slab
/// fraction `p/q` an edge weighs `(start * q + rise * p) / (D * q)`.
struct ScaledSlab {
    lines: Vec<(i64, i64, EdgeId)>,
}

impl ScaledSlab {
    const LIMIT: i64 = 1 << 60;

    fn new(tl: &Timeline, j: usize, present: &[EdgeId]) -> Option<Self> {
        let mut small = Vec::with_capacity(present.len());
        let mut d: i64 = 1;
        for &e in present {
            let line = tl.line(e, j)?;
            let (s, rise) = (line.start.as_small()?, (&line.end - &line.start).as_small()?);
            for den in [s.1, rise.1] {
                d = d.checked_mul(den / num_integer::gcd(d, den))?;
            }
            small.push((s, rise, e));
        }
        let scale = |(n, den): (i64, i64)| n.checked_mul(d / den).filter(|v| v.abs() < Self::LIMIT);
        let lines =
            small.into_iter().map(|(s, rise, e)| Some((scale(s)?, scale(rise)?, e))).collect::<Option<Vec<_>>>()?;
        Some(ScaledSlab { lines })
    }

    fn keys(&self, p: i64, q: i64) -> Vec<(i128, EdgeId)> {
        self.lines.iter().map(|&(s, rise, e)| (s as i128 * q as i128 + rise as i128 * p as i128, e)).collect()
    }
}

/// Same result as [`tso`], but keeps one sorted edge order across the
/// horizon and re-sorts only the edges involved in each event.
pub fn tso_incremental_sort(net: &TemporalNetwork) -> Result<TsmstResult> {
    let tl = checked_timeline(net)?;
    let mut order = IncrementalOrder::new(&tl);
    let mut runs: Vec<(Rational, SpanningTree)> = Vec::new();
    let mut event_count = 0;
    let start = net.horizon_start();
    runs.push((start.clone(), order.kruskal(&start)?));
    for j in 0..tl.slab_count() {
        let events = tl.slab_events(j);
        event_count += events.len();
        let b0 = tl.slab(j).0.clone();
        let mut i = 0;
        if j > 0 {
            let probe = tl.probe(&b0);
            order.remove_vanishing(&probe);
            while i < events.len() && events[i].time == b0 {
                order.resort_block(&probe, &events[i].edges)?;
                i += 1;
            }
            order.insert_appearing(&probe);
            push_run(&mut runs, b0.clone(), order.kruskal(&b0)?);
        } else {
            // The initial order already reflects the instant just after the start.
            while i < events.len() && events[i].time == b0 {
                i += 1;
            }
        }
        while i < events.len() {
            let t = events[i].time.clone();
            let probe = tl.probe(&t);
            while i < events.len() && events[i].time == t {
                order.resort_block(&probe, &events[i].edges)?;
                i += 1;
            }
            push_run(&mut runs, t.clone(), order.kruskal(&t)?);
        }
    }
    Ok(TsmstResult::from_runs(&tl, net, runs, "tso-incremental", event_count))
}

/// Present edges in ascending weight order, maintained across events.
#[derive(Debug, Clone)]
pub struct IncrementalOrder<'a> {
    tl: &'a Timeline,
    order: Vec<EdgeId>,
    /// Position in `order`, `usize::MAX` while absent.
    pos: Vec<usize>,
}

impl<'a> IncrementalOrder<'a> {
    /// Order just after the horizon start.
    pub fn new(tl: &'a Timeline) -> Self {
        let probe = tl.probe(&tl.breaks()[0]);
        let mut keyed: Vec<OrderKey> = (0..tl.edge_count()).filter_map(|e| probe.after_key(e)).collect();
        keyed.sort_unstable();
        let order: Vec<EdgeId> = keyed.into_iter().map(|k| k.2).collect();
        let mut this = IncrementalOrder { tl, order, pos: vec![usize::MAX; tl.edge_count()] };
        this.reindex(0);
        this
    }

    pub fn order(&self) -> &[EdgeId] {
        &self.order
    }

    fn reindex(&mut self, from: usize) {
        for (i, &e) in self.order.iter().enumerate().skip(from) {
            self.pos[e] = i;
        }
    }

    fn remove_vanishing(&mut self, probe: &Probe) {
        let before = self.order.len();
        let pos = &mut self.pos;
        self.order.retain(|&e| {
            let keep = probe.present_after(e);
            if !keep {
                pos[e] = usize::MAX;
            }
            keep
        });
        if self.order.len() != before {
            self.reindex(0);
        }
    }

    fn insert_appearing(&mut self, probe: &Probe) {
        for e in 0..self.tl.edge_count() {
            if self.pos[e] != usize::MAX || !probe.present_after(e) {
                continue;
            }
            let key = probe.after_key(e).expect("present after");
            let at = self.order.partition_point(|&x| probe.after_key(x).expect("present after") < key);
            self.order.insert(at, e);
            self.reindex(at);
        }
    }

    /// Re-sort the edges of one intersection point by their order just
    /// after the instant. They occupy consecutive positions beforehand.
    pub fn resort_block(&mut self, probe: &Probe, edges: &[EdgeId]) -> Result<()> {
        let mut slots: Vec<usize> = edges.iter().map(|&e| self.pos[e]).filter(|&p| p != usize::MAX).collect();
        if slots.len() < 2 {
            return Ok(());
        }
        slots.sort_unstable();
        let (lo, hi) = (slots[0], slots[slots.len() - 1]);
        if hi - lo + 1 != slots.len() {
            return Err(Error::Internal(format!("edges of the event at {} are not adjacent in the order", probe.t)));
        }
        let mut keyed: Vec<OrderKey> =
            self.order[lo..=hi].iter().map(|&e| probe.after_key(e).expect("present after")).collect();
        keyed.sort_unstable();
        for (i, k) in keyed.into_iter().enumerate() {
            self.order[lo + i] = k.2;
            self.pos[k.2] = lo + i;
        }
        Ok(())
    }

    fn kruskal(&self, t: &Rational) -> Result<SpanningTree> {
        kruskal_in_order(self.tl.node_count(), self.tl.all_endpoints(), self.order.iter().copied())
            .ok_or_else(|| Error::Disconnected { t: t.clone() })
    }
}
