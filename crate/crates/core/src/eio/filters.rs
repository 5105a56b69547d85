use std::collections::BTreeMap;

use crate::error::Result;
use crate::geometry::Probe;
use crate::model::EdgeId;
use crate::static_mst::SpanningTree;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Disposition {
    PrunedAllTree,
    PrunedAllNonTree,
    PrunedCrossBcc,
    PrunedMixedGroups,
    PrunedSameOrder,
    Active,
}

impl Disposition {
    pub fn is_pruned(self) -> bool {
        self != Disposition::Active
    }

    pub fn label(self) -> &'static str {
        match self {
            Disposition::PrunedAllTree => "only_tree",
            Disposition::PrunedAllNonTree => "only_non_tree",
            Disposition::PrunedCrossBcc => "different_bcc",
            Disposition::PrunedMixedGroups => "mixed_groups",
            Disposition::PrunedSameOrder => "no_order_change",
            Disposition::Active => "active",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FilterOutcome {
    pub disposition: Disposition,
    /// Per-component edge groups that need an exchange; empty unless active.
    pub active_groups: Vec<Vec<EdgeId>>,
}

impl FilterOutcome {
    fn pruned(disposition: Disposition) -> Self {
        FilterOutcome { disposition, active_groups: Vec::new() }
    }
}

/// Classify one intersection point. `edges` are the involved edges present
/// on both sides of the instant; `bcc[e]` is the component label of `e` in
/// the current graph.
pub fn apply_filters(
    edges: &[EdgeId],
    tree: &SpanningTree,
    bcc: impl Fn(EdgeId) -> Option<usize>,
    probe: &Probe,
) -> Result<FilterOutcome> {
    let in_tree = edges.iter().filter(|&&e| tree.contains(e)).count();
    if in_tree == edges.len() {
        return Ok(FilterOutcome::pruned(Disposition::PrunedAllTree));
    }
    if in_tree == 0 {
        return Ok(FilterOutcome::pruned(Disposition::PrunedAllNonTree));
    }

    let mut groups: BTreeMap<Option<usize>, Vec<EdgeId>> = BTreeMap::new();
    for &e in edges {
        groups.entry(bcc(e)).or_default().push(e);
    }
    if groups.values().all(|g| g.len() == 1) {
        return Ok(FilterOutcome::pruned(Disposition::PrunedCrossBcc));
    }

    let mixed: Vec<Vec<EdgeId>> = groups
        .into_values()
        .filter(|g| {
            let t = g.iter().filter(|&&e| tree.contains(e)).count();
            t > 0 && t < g.len()
        })
        .collect();
    if mixed.is_empty() {
        return Ok(FilterOutcome::pruned(Disposition::PrunedMixedGroups));
    }

    let mut active = Vec::new();
    for g in mixed {
        if probe.order_before(&g)? != probe.order_after(&g)? {
            active.push(g);
        }
    }
    if active.is_empty() {
        return Ok(FilterOutcome::pruned(Disposition::PrunedSameOrder));
    }
    Ok(FilterOutcome { disposition: Disposition::Active, active_groups: active })
}
