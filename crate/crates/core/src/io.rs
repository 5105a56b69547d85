//! Text formats: the network and result JSON documents, and row types for
//! the CSV outputs.
//!
//! Rationals are written as strings. Network weights use a terminating
//! decimal when one exists and `p/q` otherwise; result times always use
//! `p/q` with a decimal approximation alongside.

use serde::{Deserialize, Serialize};

use crate::eio::EioStats;
use crate::error::{Error, Result};
use crate::geometry::IntersectionEvent;
use crate::model::{EdgeId, NetworkMeta, NodeId, TemporalEdge, TemporalNetwork, WeightSeries};
use crate::rational::Rational;
use crate::result::{CostPiece, ResultMetadata, TimeSubIntervalMST, TsmstResult};
use crate::static_mst::{EdgeTable, FcycleTable, SpanningTree};

/// A rational that serializes as a decimal when it terminates.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Exact(pub Rational);

impl Serialize for Exact {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.0.to_exact_string())
    }
}

impl<'de> Deserialize<'de> for Exact {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        Rational::deserialize(d).map(Exact)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct EdgeDoc {
    pub id: EdgeId,
    pub u: NodeId,
    pub v: NodeId,
    /// Samples at instants `1..=K`.
    pub weights: Vec<Exact>,
    /// Closed intervals during which the edge does not exist.
    #[serde(default)]
    pub absent: Vec<[Exact; 2]>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct NetworkDoc {
    pub horizon: u32,
    pub nodes: usize,
    pub edges: Vec<EdgeDoc>,
    #[serde(default)]
    pub meta: NetworkMeta,
}

impl NetworkDoc {
    pub fn from_network(net: &TemporalNetwork) -> Result<Self> {
        let edges = net
            .edges()
            .iter()
            .map(|e| {
                let samples = e.weights.samples();
                let integer_instants = samples.len() == net.horizon() as usize
                    && samples.iter().enumerate().all(|(k, (t, _))| *t == Rational::from_int(k as i64 + 1));
                if !integer_instants {
                    return Err(Error::Series(format!("edge {} is not sampled at the integer instants 1..=K", e.id)));
                }
                Ok(EdgeDoc {
                    id: e.id,
                    u: e.u,
                    v: e.v,
                    weights: samples.iter().map(|(_, w)| Exact(w.clone())).collect(),
                    absent: e.weights.absence().iter().map(|(a, b)| [Exact(a.clone()), Exact(b.clone())]).collect(),
                })
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(NetworkDoc { horizon: net.horizon(), nodes: net.node_count(), edges, meta: net.meta.clone() })
    }

    pub fn into_network(self) -> Result<TemporalNetwork> {
        let horizon = self.horizon;
        let mut edges = Vec::with_capacity(self.edges.len());
        for (i, e) in self.edges.into_iter().enumerate() {
            let at = |field: &str, msg: String| Error::Parse { path: format!("edges[{i}].{field}"), msg };
            if e.weights.len() != horizon as usize {
                return Err(at("weights", format!("expected {horizon} samples, found {}", e.weights.len())));
            }
            let absence = e.absent.into_iter().map(|[a, b]| (a.0, b.0)).collect();
            let series = WeightSeries::from_values(e.weights.into_iter().map(|w| w.0).collect())
                .and_then(|s| s.with_absence(absence))
                .map_err(|err| at("absent", err.to_string()))?;
            edges.push(TemporalEdge::new(e.id, e.u, e.v, series));
        }
        Ok(TemporalNetwork::new(self.nodes, horizon, edges)?.with_meta(self.meta))
    }
}

fn parse_json<T: serde::de::DeserializeOwned>(text: &str) -> Result<T> {
    let de = &mut serde_json::Deserializer::from_str(text);
    serde_path_to_error::deserialize(de).map_err(|err| {
        let path = err.path().to_string();
        let inner = err.into_inner();
        Error::Parse { path, msg: inner.to_string() }
    })
}

/// Parse a network document. Errors name the offending field and position.
pub fn read_network(text: &str) -> Result<TemporalNetwork> {
    parse_json::<NetworkDoc>(text)?.into_network()
}

pub fn write_network(net: &TemporalNetwork) -> Result<String> {
    let doc = NetworkDoc::from_network(net)?;
    serde_json::to_string_pretty(&doc).map_err(|e| Error::Internal(e.to_string()))
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CostPieceDoc {
    pub from: Rational,
    pub to: Rational,
    pub slope: Rational,
    pub offset: Rational,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct IntervalDoc {
    pub start: Rational,
    pub end: Rational,
    pub start_approx: f64,
    pub end_approx: f64,
    pub tree: Vec<EdgeId>,
    pub cost: Vec<CostPieceDoc>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MetadataDoc {
    pub algorithm: String,
    pub event_count: usize,
    pub perturbed: bool,
    pub nodes: usize,
    pub edges: usize,
    pub horizon: u32,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ResultDoc {
    pub intervals: Vec<IntervalDoc>,
    pub metadata: MetadataDoc,
}

impl IntervalDoc {
    pub fn from_interval(iv: &TimeSubIntervalMST) -> Self {
        IntervalDoc {
            start: iv.start.clone(),
            end: iv.end.clone(),
            start_approx: iv.start.to_f64(),
            end_approx: iv.end.to_f64(),
            tree: iv.tree_edges(),
            cost: iv
                .cost
                .iter()
                .map(|p| CostPieceDoc {
                    from: p.from.clone(),
                    to: p.to.clone(),
                    slope: p.slope.clone(),
                    offset: p.offset.clone(),
                })
                .collect(),
        }
    }
}

impl MetadataDoc {
    pub fn from_metadata(m: &ResultMetadata) -> Self {
        MetadataDoc {
            algorithm: m.algorithm.clone(),
            event_count: m.event_count,
            perturbed: m.perturbed,
            nodes: m.nodes,
            edges: m.edges,
            horizon: m.horizon,
        }
    }
}

impl ResultDoc {
    pub fn from_result(result: &TsmstResult) -> Self {
        ResultDoc {
            intervals: result.intervals.iter().map(IntervalDoc::from_interval).collect(),
            metadata: MetadataDoc::from_metadata(&result.metadata),
        }
    }

    /// Rebuild a result. Tree edge ids must be below `metadata.edges`.
    pub fn into_result(self) -> Result<TsmstResult> {
        let m = self.metadata.edges;
        let intervals = self
            .intervals
            .into_iter()
            .enumerate()
            .map(|(i, iv)| {
                if let Some(&bad) = iv.tree.iter().find(|&&e| e >= m) {
                    let path = format!("intervals[{i}].tree");
                    return Err(Error::Parse { path, msg: format!("edge {bad} out of range for {m} edges") });
                }
                Ok(TimeSubIntervalMST {
                    start: iv.start,
                    end: iv.end,
                    tree: SpanningTree::from_edges(m, iv.tree),
                    cost: iv
                        .cost
                        .into_iter()
                        .map(|p| CostPiece { from: p.from, to: p.to, slope: p.slope, offset: p.offset })
                        .collect(),
                })
            })
            .collect::<Result<Vec<_>>>()?;
        let md = self.metadata;
        let metadata = ResultMetadata {
            algorithm: md.algorithm,
            event_count: md.event_count,
            perturbed: md.perturbed,
            nodes: md.nodes,
            edges: md.edges,
            horizon: md.horizon,
        };
        Ok(TsmstResult { intervals, metadata })
    }
}

pub fn read_result(text: &str) -> Result<TsmstResult> {
    parse_json::<ResultDoc>(text)?.into_result()
}

pub fn write_result(result: &TsmstResult) -> String {
    serde_json::to_string_pretty(&ResultDoc::from_result(result)).expect("result documents always serialize")
}

/// One intersection event. `edge_ids` is space-separated.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct EventRow {
    pub time: Rational,
    pub time_decimal: f64,
    pub value: Rational,
    pub value_decimal: f64,
    pub edge_ids: String,
}

impl EventRow {
    pub fn from_event(ev: &IntersectionEvent) -> Self {
        EventRow {
            time: ev.time.clone(),
            time_decimal: ev.time.to_f64(),
            value: ev.value.clone(),
            value_decimal: ev.value.to_f64(),
            edge_ids: join(ev.edges.iter()),
        }
    }
}

/// One row of the edge table. `bcc` is empty for edges absent at the start;
/// `fcycles` lists fundamental-cycle ids, space-separated.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct EdgeTableRow {
    pub edge: EdgeId,
    pub u: NodeId,
    pub v: NodeId,
    pub bcc: Option<usize>,
    pub fcycles: String,
}

pub fn edge_table_rows(table: &EdgeTable) -> Vec<EdgeTableRow> {
    table
        .entries
        .iter()
        .map(|e| EdgeTableRow { edge: e.edge, u: e.u, v: e.v, bcc: e.bcc, fcycles: join(e.fcycles.ones()) })
        .collect()
}

/// One fundamental cycle: its id, the non-tree edge that closes it, and all
/// of its edges.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct FcycleRow {
    pub fcycle: usize,
    pub non_tree_edge: EdgeId,
    pub edges: String,
}

pub fn fcycle_table_rows(table: &FcycleTable, tree: &SpanningTree) -> Vec<FcycleRow> {
    table
        .entries
        .iter()
        .map(|c| FcycleRow {
            fcycle: c.id,
            non_tree_edge: c.edges.iter().copied().find(|&e| !tree.contains(e)).unwrap_or(usize::MAX),
            edges: join(c.edges.iter()),
        })
        .collect()
}

/// Filter counters of one EIO run, in the layout of the filter tables.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct StatsCountRow {
    pub only_tree: usize,
    pub only_non_tree: usize,
    pub different_bcc: usize,
    pub no_order_change: usize,
    pub total: usize,
    pub mixed_groups: usize,
    pub active: usize,
    pub events: usize,
}

impl StatsCountRow {
    pub fn from_stats(s: &EioStats) -> Self {
        StatsCountRow {
            only_tree: s.pruned_all_tree,
            only_non_tree: s.pruned_all_non_tree,
            different_bcc: s.pruned_cross_bcc,
            no_order_change: s.pruned_same_order,
            total: s.pruned(),
            mixed_groups: s.pruned_mixed_groups,
            active: s.active,
            events: s.events,
        }
    }
}

fn join<T: ToString>(items: impl Iterator<Item = T>) -> String {
    items.map(|x| x.to_string()).collect::<Vec<_>>().join(" ")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::harness::sample::{sensor_network, sensor_network_perturbed};
    use crate::harness::{gen_random, inject_absence, GenSpec};
    use crate::tso::tso;

    #[test]
    fn network_round_trip_is_exact() {
        let net = inject_absence(&gen_random(&GenSpec::random(8, 14, 6, 3)).unwrap(), 2, 1).unwrap();
        let text = write_network(&net).unwrap();
        assert_eq!(read_network(&text).unwrap(), net);
    }

    #[test]
    fn weights_are_decimal_strings() {
        let text = write_network(&sensor_network()).unwrap();
        let doc: serde_json::Value = serde_json::from_str(&text).unwrap();
        assert_eq!(doc["edges"][0]["weights"][0], serde_json::json!("3"));
    }

    #[test]
    fn parse_errors_name_the_field() {
        let text = r#"{"horizon": 2, "nodes": 2, "edges": [{"id": 0, "u": 0, "v": 1, "weights": ["1", "x"]}]}"#;
        match read_network(text) {
            Err(Error::Parse { path, msg }) => {
                assert_eq!(path, "edges[0].weights[1]");
                assert!(msg.ends_with("line 1 column 83"), "{msg}");
            }
            other => panic!("{other:?}"),
        }
        let short = r#"{"horizon": 3, "nodes": 2, "edges": [{"id": 0, "u": 0, "v": 1, "weights": ["1", "2"]}]}"#;
        assert!(matches!(read_network(short), Err(Error::Parse { path, .. }) if path == "edges[0].weights"));
        let unknown = r#"{"horizon": 2, "nodes": 2, "edges": [], "colour": 1}"#;
        assert!(matches!(read_network(unknown), Err(Error::Parse { .. })));
    }

    #[test]
    fn result_round_trip() {
        let result = tso(&gen_random(&GenSpec::random(6, 9, 5, 2)).unwrap()).unwrap();
        let back = read_result(&write_result(&result)).unwrap();
        assert_eq!(back, result);
    }

    #[test]
    fn result_lists_intervals_first() {
        let text = write_result(&tso(&sensor_network_perturbed()).unwrap());
        assert!(text.find("\"intervals\"").unwrap() < text.find("\"metadata\"").unwrap());
    }
}
