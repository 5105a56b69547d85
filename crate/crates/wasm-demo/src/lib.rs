use serde::Serialize;
use wasm_bindgen::prelude::*;

use tsmst_core::eio::{eio_with, EioOptions};
use tsmst_core::geometry::{timeline_intersections, Timeline};
use tsmst_core::harness::{generate, inject_absence, GenSpec};
use tsmst_core::io::{read_network, write_network, ResultDoc, StatsCountRow};
use tsmst_core::model::perturb_degenerate;
use tsmst_core::tso::tso;

fn js(e: impl std::fmt::Display) -> JsError {
    JsError::new(&e.to_string())
}

/// Seeded random network as network JSON.
#[wasm_bindgen]
pub fn generate_network(
    nodes: usize,
    edges: usize,
    horizon: u32,
    seed: u64,
    absences: usize,
) -> Result<String, JsError> {
    let mut net = generate(&GenSpec::random(nodes, edges, horizon, seed)).map_err(js)?;
    if absences > 0 {
        net = inject_absence(&net, absences, seed).map_err(js)?;
    }
    write_network(&net).map_err(js)
}

#[derive(Serialize)]
struct EventPoint {
    time: f64,
    value: f64,
    exact: String,
    edges: Vec<usize>,
}

/// Intersection points of the weight curves.
#[wasm_bindgen]
pub fn events(network: &str) -> Result<String, JsError> {
    let net = perturb_degenerate(&read_network(network).map_err(js)?).map_err(js)?;
    let tl = Timeline::new(&net).map_err(js)?;
    let points: Vec<EventPoint> = timeline_intersections(&tl)
        .into_iter()
        .map(|ev| EventPoint {
            time: ev.time.to_f64(),
            value: ev.value.to_f64(),
            exact: ev.time.to_string(),
            edges: ev.edges.to_vec(),
        })
        .collect();
    serde_json::to_string(&points).map_err(js)
}

#[derive(Serialize)]
struct Solved {
    result: ResultDoc,
    stats: Option<StatsCountRow>,
}

/// Solve with `"tso"` or `"eio"`; EIO also reports its filter counters.
#[wasm_bindgen]
pub fn solve(network: &str, algo: &str) -> Result<String, JsError> {
    let net = perturb_degenerate(&read_network(network).map_err(js)?).map_err(js)?;
    let solved = match algo {
        "tso" => Solved { result: ResultDoc::from_result(&tso(&net).map_err(js)?), stats: None },
        "eio" => {
            let run = eio_with(&net, &EioOptions::default()).map_err(js)?;
            Solved { result: ResultDoc::from_result(&run.result), stats: Some(StatsCountRow::from_stats(&run.stats)) }
        }
        other => return Err(JsError::new(&format!("unknown algorithm `{other}`"))),
    };
    serde_json::to_string(&solved).map_err(js)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn solvers_agree_through_the_json_boundary() {
        let net = generate_network(7, 12, 5, 3, 1).unwrap();
        let tso: serde_json::Value = serde_json::from_str(&solve(&net, "tso").unwrap()).unwrap();
        let eio: serde_json::Value = serde_json::from_str(&solve(&net, "eio").unwrap()).unwrap();
        assert_eq!(tso["result"]["intervals"], eio["result"]["intervals"]);
        assert!(tso["stats"].is_null());
        assert!(eio["stats"]["events"].as_u64().unwrap() >= eio["stats"]["total"].as_u64().unwrap());
        let points: Vec<serde_json::Value> = serde_json::from_str(&events(&net).unwrap()).unwrap();
        assert!(points.iter().all(|p| p["edges"].as_array().unwrap().len() >= 2));
    }
}
