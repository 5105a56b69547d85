//! Incremental solver: build the MST once, then patch it at each
//! intersection point that can change it.

mod filters;

pub use filters::{apply_filters, Disposition, FilterOutcome};

use std::collections::HashSet;

use fixedbitset::FixedBitSet;

use crate::error::{Error, Result};
use crate::geometry::{IntersectionEvent, OrderKey, Probe, Timeline};
use crate::model::{checked_timeline, EdgeId, TemporalNetwork};
use crate::rational::Rational;
use crate::result::TsmstResult;
use crate::static_mst::{bcc_labels, reverse_delete_by, EdgeTable, FcycleTable, SpanningTree, TreeIndex};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EioOptions {
    /// Swap the two edges directly when they share one recorded cycle.
    pub fast_path: bool,
    /// Keep a per-event record of every filtered intersection point.
    pub trace: bool,
}

impl Default for EioOptions {
    fn default() -> Self {
        EioOptions { fast_path: true, trace: false }
    }
}

/// Per-run counters. `events` counts intersection points examined by the
/// filters; each lands in exactly one disposition bucket.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct EioStats {
    pub events: usize,
    pub pruned_all_tree: usize,
    pub pruned_all_non_tree: usize,
    pub pruned_cross_bcc: usize,
    pub pruned_mixed_groups: usize,
    pub pruned_same_order: usize,
    pub active: usize,
    /// Points with fewer than two edges present on both sides.
    pub skipped: usize,
    pub fast_swaps: usize,
    pub general_exchanges: usize,
    pub absence_starts: usize,
    pub absence_ends: usize,
    pub bcc_recomputations: usize,
}

impl EioStats {
    fn record(&mut self, d: Disposition) {
        self.events += 1;
        *match d {
            Disposition::PrunedAllTree => &mut self.pruned_all_tree,
            Disposition::PrunedAllNonTree => &mut self.pruned_all_non_tree,
            Disposition::PrunedCrossBcc => &mut self.pruned_cross_bcc,
            Disposition::PrunedMixedGroups => &mut self.pruned_mixed_groups,
            Disposition::PrunedSameOrder => &mut self.pruned_same_order,
            Disposition::Active => &mut self.active,
        } += 1;
    }

    pub fn pruned(&self) -> usize {
        self.events - self.active
    }

    pub fn merge(&mut self, other: &EioStats) {
        self.events += other.events;
        self.pruned_all_tree += other.pruned_all_tree;
        self.pruned_all_non_tree += other.pruned_all_non_tree;
        self.pruned_cross_bcc += other.pruned_cross_bcc;
        self.pruned_mixed_groups += other.pruned_mixed_groups;
        self.pruned_same_order += other.pruned_same_order;
        self.active += other.active;
        self.skipped += other.skipped;
        self.fast_swaps += other.fast_swaps;
        self.general_exchanges += other.general_exchanges;
        self.absence_starts += other.absence_starts;
        self.absence_ends += other.absence_ends;
        self.bcc_recomputations += other.bcc_recomputations;
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TraceEntry {
    pub time: Rational,
    pub value: Rational,
    /// Involved edges present on both sides of `time`.
    pub edges: Vec<EdgeId>,
    pub disposition: Disposition,
    /// Tree just before this point was processed.
    pub tree_before: SpanningTree,
}

#[derive(Debug, Clone)]
pub struct EioRun {
    pub result: TsmstResult,
    pub stats: EioStats,
    pub trace: Vec<TraceEntry>,
    pub fcycles: FcycleTable,
}

pub fn eio(net: &TemporalNetwork) -> Result<TsmstResult> {
    eio_with(net, &EioOptions::default()).map(|run| run.result)
}

pub fn eio_with(net: &TemporalNetwork, options: &EioOptions) -> Result<EioRun> {
    let tl = checked_timeline(net)?;
    let mut state = EioState::new(&tl, options.clone())?;
    let mut runs = vec![(net.horizon_start(), state.tree.clone())];
    let mut event_count = 0;
    for j in 0..tl.slab_count() {
        let events = tl.slab_events(j);
        event_count += events.len();
        let b0 = tl.slab(j).0;
        let mut instants: Vec<&[IntersectionEvent]> = events.chunk_by(|a, b| a.time == b.time).collect();
        let starts_with_b0 = instants.first().is_some_and(|c| &c[0].time == b0);
        if j > 0 && !starts_with_b0 {
            instants.insert(0, &[]);
        }
        for chunk in instants {
            let t = chunk.first().map_or(b0, |e| &e.time).clone();
            let boundary = &t == b0;
            if j == 0 && boundary {
                // The initial tree already reflects the order just after the start.
                continue;
            }
            state.process_instant(&t, chunk, boundary)?;
            if runs.last().is_some_and(|(_, last)| *last != state.tree) {
                runs.push((t, state.tree.clone()));
            }
        }
    }
    let result = TsmstResult::from_runs(&tl, net, runs, "eio", event_count);
    Ok(EioRun { result, stats: state.stats, trace: state.trace, fcycles: state.fcycles })
}

/// Solver state between intersection points.
pub struct EioState<'a> {
    tl: &'a Timeline,
    options: EioOptions,
    tree: SpanningTree,
    index: TreeIndex,
    fcycles: FcycleTable,
    table: EdgeTable,
    present: FixedBitSet,
    bcc_dirty: bool,
    absent_tree: HashSet<EdgeId>,
    /// Edges of intersection points at the current instant not yet processed.
    pending: FixedBitSet,
    stats: EioStats,
    trace: Vec<TraceEntry>,
}

impl<'a> EioState<'a> {
    /// MST just after the horizon start, from modified reverse-delete.
    pub fn new(tl: &'a Timeline, options: EioOptions) -> Result<Self> {
        let start = tl.breaks()[0].clone();
        let probe = tl.probe(&start);
        let m = tl.edge_count();
        let keys: Vec<Option<OrderKey>> = (0..m).map(|e| probe.after_key(e)).collect();
        let (tree, fcycles) =
            reverse_delete_by(tl.node_count(), tl.all_endpoints(), &keys).ok_or(Error::Disconnected { t: start })?;
        let mut present = FixedBitSet::with_capacity(m);
        present.extend((0..m).filter(|&e| keys[e].is_some()));
        let bcc = bcc_labels(tl.node_count(), tl.all_endpoints(), |e| present.contains(e));
        let table = EdgeTable::build(tl.all_endpoints(), &bcc, &fcycles);
        let index = TreeIndex::new(tl.node_count(), tl.all_endpoints(), &tree);
        Ok(EioState {
            tl,
            options,
            tree,
            index,
            fcycles,
            table,
            present,
            bcc_dirty: false,
            absent_tree: HashSet::new(),
            pending: FixedBitSet::with_capacity(m),
            stats: EioStats::default(),
            trace: Vec::new(),
        })
    }

    pub fn tree(&self) -> &SpanningTree {
        &self.tree
    }

    pub fn edge_table(&self) -> &EdgeTable {
        &self.table
    }

    pub fn fcycle_table(&self) -> &FcycleTable {
        &self.fcycles
    }

    pub fn absent_tree_edges(&self) -> &HashSet<EdgeId> {
        &self.absent_tree
    }

    pub fn stats(&self) -> &EioStats {
        &self.stats
    }

    /// Process everything that happens at `t`: absence starts, then the
    /// intersection points in ascending value, then reappearances.
    pub fn process_instant(&mut self, t: &Rational, events: &[IntersectionEvent], boundary: bool) -> Result<()> {
        let probe = self.tl.probe(t);
        if boundary {
            self.absence_start(&probe)?;
        }
        let blocks: Vec<(Rational, Vec<EdgeId>)> = events
            .iter()
            .map(|ev| {
                let edges =
                    ev.edges.iter().copied().filter(|&e| probe.present_before(e) && probe.present_after(e)).collect();
                (ev.value.clone(), edges)
            })
            .collect();
        for (_, edges) in &blocks {
            for &e in edges {
                self.pending.insert(e);
            }
        }
        for (value, edges) in blocks {
            for &e in &edges {
                self.pending.set(e, false);
            }
            if edges.len() < 2 {
                self.stats.skipped += 1;
                continue;
            }
            self.process_point(&probe, value, edges)?;
        }
        if boundary {
            self.absence_end(&probe)?;
        }
        Ok(())
    }

    fn refresh_bcc(&mut self) {
        if !self.bcc_dirty {
            return;
        }
        let present = &self.present;
        let labels = bcc_labels(self.tl.node_count(), self.tl.all_endpoints(), |e| present.contains(e));
        for (entry, label) in self.table.entries.iter_mut().zip(labels) {
            entry.bcc = label;
        }
        self.bcc_dirty = false;
        self.stats.bcc_recomputations += 1;
    }

    fn process_point(&mut self, probe: &Probe, value: Rational, edges: Vec<EdgeId>) -> Result<()> {
        let in_tree = edges.iter().filter(|&&e| self.tree.contains(e)).count();
        if in_tree > 0 && in_tree < edges.len() {
            self.refresh_bcc();
        }
        let table = &self.table;
        let outcome = apply_filters(&edges, &self.tree, |e| table.entries[e].bcc, probe)?;
        self.stats.record(outcome.disposition);
        if self.options.trace {
            self.trace.push(TraceEntry {
                time: probe.t.clone(),
                value,
                edges: edges.clone(),
                disposition: outcome.disposition,
                tree_before: self.tree.clone(),
            });
        }
        for group in outcome.active_groups {
            self.exchange(probe, &group)?;
        }
        Ok(())
    }

    /// Order key at the current instant: pending points still use the order
    /// just before it.
    fn key(&self, probe: &Probe, e: EdgeId) -> OrderKey {
        let k = if self.pending.contains(e) { probe.before_key(e) } else { probe.after_key(e) };
        k.expect("exchange only involves present edges")
    }

    fn swap(&mut self, out: EdgeId, inn: EdgeId) {
        self.tree.remove(out);
        self.index.remove(out);
        self.tree.insert(inn);
        self.index.insert(inn);
    }

    /// Insert `e` and drop the heaviest edge of the cycle it closes.
    fn add_and_delete_heaviest(&mut self, probe: &Probe, e: EdgeId) -> Result<()> {
        let (u, v) = self.tl.endpoints(e);
        let path = self
            .index
            .path(u, v)
            .ok_or_else(|| Error::Internal(format!("tree does not connect the endpoints of edge {e}")))?;
        let mut heaviest = e;
        let mut heaviest_key = self.key(probe, e);
        for &f in &path {
            let k = self.key(probe, f);
            if k > heaviest_key {
                heaviest = f;
                heaviest_key = k;
            }
        }
        if heaviest != e {
            self.swap(heaviest, e);
        }
        Ok(())
    }

    pub fn exchange(&mut self, probe: &Probe, group: &[EdgeId]) -> Result<()> {
        if self.options.fast_path && group.len() == 2 {
            let (a, b) = if self.tree.contains(group[0]) { (group[0], group[1]) } else { (group[1], group[0]) };
            let shared = self.table.shared_fcycles(a, b);
            if shared == 1 {
                let (u, v) = self.tl.endpoints(b);
                let on_cycle = self.index.path(u, v).is_some_and(|p| p.contains(&a));
                if on_cycle && self.key(probe, b) < self.key(probe, a) {
                    self.swap(a, b);
                    self.stats.fast_swaps += 1;
                    return Ok(());
                }
            }
        }
        self.stats.general_exchanges += 1;
        let mut non_tree: Vec<EdgeId> = group.iter().copied().filter(|&e| !self.tree.contains(e)).collect();
        non_tree.sort_unstable_by_key(|&e| std::cmp::Reverse(self.key(probe, e)));
        for e in non_tree {
            self.add_and_delete_heaviest(probe, e)?;
        }
        Ok(())
    }

    fn absence_start(&mut self, probe: &Probe) -> Result<()> {
        let vanishing: Vec<EdgeId> = self.present.ones().filter(|&e| !probe.present_after(e)).collect();
        if vanishing.is_empty() {
            return Ok(());
        }
        self.stats.absence_starts += vanishing.len();
        for &e in &vanishing {
            self.present.set(e, false);
            if self.tree.contains(e) {
                self.absent_tree.insert(e);
            }
        }
        self.bcc_dirty = true;
        if self.absent_tree.is_empty() {
            return Ok(());
        }
        let mut candidates: Vec<OrderKey> = self
            .present
            .ones()
            .filter(|&e| !self.tree.contains(e))
            .map(|e| probe.before_key(e).expect("present before"))
            .collect();
        candidates.sort_unstable();
        for (_, _, f) in candidates {
            if self.absent_tree.is_empty() {
                break;
            }
            let (u, v) = self.tl.endpoints(f);
            let Some(path) = self.index.path(u, v) else {
                continue;
            };
            if let Some(&gone) = path.iter().filter(|e| self.absent_tree.contains(e)).min() {
                self.absent_tree.remove(&gone);
                self.swap(gone, f);
            }
        }
        if !self.absent_tree.is_empty() {
            return Err(Error::Disconnected { t: probe.t.clone() });
        }
        Ok(())
    }

    fn absence_end(&mut self, probe: &Probe) -> Result<()> {
        let m = self.tl.edge_count();
        let appearing: Vec<EdgeId> = (0..m).filter(|&e| !self.present.contains(e) && probe.present_after(e)).collect();
        if appearing.is_empty() {
            return Ok(());
        }
        self.stats.absence_ends += appearing.len();
        for &e in &appearing {
            self.present.insert(e);
        }
        self.bcc_dirty = true;
        for e in appearing {
            self.add_and_delete_heaviest(probe, e)?;
        }
        Ok(())
    }
}
