use std::io::Write;
use std::path::Path;
use std::process::{Command, Output, Stdio};

fn tsmst(args: &[&str], stdin: Option<&[u8]>) -> Output {
    let mut child = Command::new(env!("CARGO_BIN_EXE_tsmst"))
        .args(args)
        .env_remove("TSMST_THREADS")
        .stdin(Stdio::piped())
        .stdout(Stdio::piped())
        .stderr(Stdio::piped())
        .spawn()
        .expect("binary runs");
    let mut pipe = child.stdin.take().unwrap();
    pipe.write_all(stdin.unwrap_or_default()).unwrap();
    drop(pipe);
    child.wait_with_output().unwrap()
}

fn ok(args: &[&str], stdin: Option<&[u8]>) -> Vec<u8> {
    let out = tsmst(args, stdin);
    assert!(out.status.success(), "{args:?}: {}", String::from_utf8_lossy(&out.stderr));
    out.stdout
}

fn generated(dir: &Path, seed: &str) -> String {
    let path = dir.join(format!("net{seed}.json"));
    let p = path.to_str().unwrap().to_string();
    ok(&["gen", "--nodes", "7", "--edges", "12", "--horizon", "6", "--seed", seed, "--out", &p], None);
    p
}

fn without_algorithm(json: &[u8]) -> serde_json::Value {
    let mut v: serde_json::Value = serde_json::from_slice(json).unwrap();
    v["metadata"]["algorithm"] = serde_json::Value::Null;
    v
}

#[test]
fn gen_pipes_into_solve() {
    let net = ok(&["gen", "--nodes", "5", "--edges", "6", "--horizon", "4", "--seed", "7"], None);
    let result = ok(&["solve", "--algo", "eio"], Some(&net));
    let doc: serde_json::Value = serde_json::from_slice(&result).unwrap();
    let intervals = doc["intervals"].as_array().unwrap();
    assert!(!intervals.is_empty());
    assert_eq!(intervals[0]["start"], "1");
    assert_eq!(intervals.last().unwrap()["end"], "4");
    for iv in intervals {
        assert_eq!(iv["tree"].as_array().unwrap().len(), 4);
    }
}

#[test]
fn solvers_agree_byte_for_byte_apart_from_the_algorithm() {
    let dir = tempfile::tempdir().unwrap();
    for seed in ["1", "2", "3"] {
        let net = generated(dir.path(), seed);
        let tso = ok(&["solve", "--algo", "tso", "--in", &net], None);
        let inc = ok(&["solve", "--algo", "tso", "--incremental-sort", "--in", &net], None);
        let eio = ok(&["solve", "--algo", "eio", "--in", &net], None);
        let general = ok(&["solve", "--algo", "eio", "--no-fast-path", "--in", &net], None);
        let strip = |b: &[u8]| {
            String::from_utf8(b.to_vec())
                .unwrap()
                .replace("\"algorithm\": \"tso\"", "")
                .replace("\"algorithm\": \"eio\"", "")
        };
        assert_eq!(strip(&tso), strip(&eio));
        assert_eq!(without_algorithm(&tso), without_algorithm(&inc));
        assert_eq!(without_algorithm(&eio), without_algorithm(&general));
    }
}

#[test]
fn gen_is_deterministic_and_round_trips() {
    let args = ["gen", "--nodes", "6", "--edges", "9", "--horizon", "5", "--seed", "11", "--absences", "2"];
    assert_eq!(ok(&args, None), ok(&args, None));
    let traj = ["gen", "--nodes", "6", "--horizon", "5", "--seed", "3", "--trajectory", "--radius", "60"];
    let net = ok(&traj, None);
    ok(&["solve", "--algo", "tso"], Some(&net));
}

#[test]
fn stats_and_tables() {
    let dir = tempfile::tempdir().unwrap();
    let net = generated(dir.path(), "5");
    let stats = dir.path().join("stats.csv");
    let tables = dir.path().join("tables");
    let s = format!("--stats={}", stats.display());
    ok(&["solve", "--in", &net, &s, "--dump-tables", tables.to_str().unwrap()], None);
    let text = std::fs::read_to_string(&stats).unwrap();
    assert!(text.starts_with("only_tree,only_non_tree,different_bcc,no_order_change,total,"));
    let edges = std::fs::read_to_string(tables.join("edge_table.csv")).unwrap();
    assert_eq!(edges.lines().count(), 13);
    let cycles = std::fs::read_to_string(tables.join("fcycle_table.csv")).unwrap();
    assert_eq!(cycles.lines().count(), 1 + 12 - 7 + 1);

    let pct = String::from_utf8(ok(&["stats", "--in", &net], None)).unwrap();
    assert!(pct.starts_with("nodes,edges,horizon,only_tree,"));
}

#[test]
fn events_csv_has_exact_and_decimal_columns() {
    let dir = tempfile::tempdir().unwrap();
    let net = generated(dir.path(), "4");
    let text = String::from_utf8(ok(&["events", "--in", &net], None)).unwrap();
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("time,time_decimal,value,value_decimal,edge_ids"));
    for line in lines {
        let cols: Vec<&str> = line.split(',').collect();
        assert_eq!(cols.len(), 5);
        assert!(cols[4].split(' ').count() >= 2);
    }
}

#[test]
fn verify_accepts_solver_output_and_rejects_tampering() {
    let dir = tempfile::tempdir().unwrap();
    let net = generated(dir.path(), "8");
    let result = ok(&["solve", "--algo", "tso", "--in", &net], None);
    let good = dir.path().join("good.json");
    std::fs::write(&good, &result).unwrap();
    ok(&["verify", "--in", &net, "--result", good.to_str().unwrap(), "--samples", "5"], None);

    let mut doc: serde_json::Value = serde_json::from_slice(&result).unwrap();
    let tree = doc["intervals"][0]["tree"].as_array_mut().unwrap();
    tree.pop();
    let bad = dir.path().join("bad.json");
    std::fs::write(&bad, serde_json::to_vec(&doc).unwrap()).unwrap();
    let out = tsmst(&["verify", "--in", &net, "--result", bad.to_str().unwrap()], None);
    assert_eq!(out.status.code(), Some(1));
    let report: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(report["matched"], false);
    assert_eq!(report["divergence"]["kind"], "spanning");
}

#[test]
fn bench_writes_one_row_per_spec_and_algorithm() {
    let dir = tempfile::tempdir().unwrap();
    let specs = dir.path().join("specs.json");
    std::fs::write(
        &specs,
        r#"[{"nodes": 6, "edges": 10, "horizon": 5, "seed": 1}, {"nodes": 8, "edges": 12, "horizon": 4, "seed": 2}]"#,
    )
    .unwrap();
    let text = String::from_utf8(ok(
        &["bench", "--spec-file", specs.to_str().unwrap(), "--algos", "tso,eio,eio-general"],
        None,
    ))
    .unwrap();
    let mut lines = text.lines();
    assert!(lines.next().unwrap().starts_with("algo,nodes,edges,horizon,seed,events,intervals,"));
    assert_eq!(lines.count(), 6);
}

#[test]
fn exit_codes() {
    assert_eq!(tsmst(&["solve", "--bogus"], None).status.code(), Some(2));
    assert_eq!(tsmst(&[], None).status.code(), Some(2));
    assert_eq!(tsmst(&["--version"], None).status.code(), Some(0));

    let malformed = br#"{"horizon": 2, "nodes": 2, "edges": [{"id": 0, "u": 0, "v": 1, "weights": ["1", "oops"]}]}"#;
    let out = tsmst(&["solve"], Some(malformed));
    assert_eq!(out.status.code(), Some(1));
    let stderr = String::from_utf8(out.stderr).unwrap();
    assert_eq!(stderr.lines().count(), 1);
    let err: serde_json::Value = serde_json::from_str(&stderr).unwrap();
    assert_eq!(err["error"], "parse");
    assert!(err["message"].as_str().unwrap().contains("edges[0].weights[1]"));

    let disconnected = br#"{"horizon": 2, "nodes": 3, "edges": [{"id": 0, "u": 0, "v": 1, "weights": ["1", "2"]}]}"#;
    assert_eq!(tsmst(&["solve"], Some(disconnected)).status.code(), Some(1));
}

#[test]
fn thread_count_does_not_change_output() {
    let dir = tempfile::tempdir().unwrap();
    let net = generated(dir.path(), "9");
    let one = ok(&["--threads", "1", "solve", "--algo", "tso", "--in", &net], None);
    let four = ok(&["--threads", "4", "solve", "--algo", "tso", "--in", &net], None);
    assert_eq!(one, four);
}
