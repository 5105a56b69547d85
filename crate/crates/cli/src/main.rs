use std::fs;
use std::io::{self, Read, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use serde::Serialize;

use tsmst_core::eio::{eio_with, EioOptions, EioState};
use tsmst_core::geometry::{timeline_intersections, Timeline};
use tsmst_core::harness::{
    bench, filter_stats, generate, inject_absence, run_algorithm, verify, Algorithm, GenKind, GenSpec, VerifyOptions,
};
use tsmst_core::io::{
    edge_table_rows, fcycle_table_rows, read_network, read_result, write_network, write_result, EventRow, StatsCountRow,
};
use tsmst_core::model::{perturb_degenerate, TemporalNetwork};
use tsmst_core::result::TsmstResult;
use tsmst_core::Error;

/// Time-sub-interval minimum spanning trees of spatio-temporal networks.
#[derive(Debug, Parser)]
#[command(name = "tsmst", version, about)]
struct Cli {
    /// Worker threads; affects speed only, never output.
    #[arg(long, global = true, env = "TSMST_THREADS")]
    threads: Option<usize>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Generate a seeded random network.
    Gen(GenArgs),
    /// List intersection events as CSV.
    Events(InOut),
    /// Compute the time-sub-interval MSTs.
    Solve(SolveArgs),
    /// Check a result against Kruskal and brute-force enumeration.
    Verify(VerifyArgs),
    /// Time solvers on generated workloads.
    Bench(BenchArgs),
    /// Filter shares of one EIO run as CSV.
    Stats(InOut),
}

#[derive(Debug, Args)]
struct InOut {
    /// Network file, `-` for standard input.
    #[arg(long = "in", default_value = "-")]
    input: PathBuf,
    /// Output file, `-` for standard output.
    #[arg(long, default_value = "-")]
    out: PathBuf,
    /// Fail on coincident segments instead of perturbing them.
    #[arg(long)]
    no_perturb: bool,
}

#[derive(Debug, Args)]
struct GenArgs {
    #[arg(long)]
    nodes: usize,
    /// Edge count; ignored with `--trajectory`.
    #[arg(long, default_value_t = 0)]
    edges: usize,
    #[arg(long)]
    horizon: u32,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Nodes move between random waypoints; edges link nodes within `--radius`.
    #[arg(long)]
    trajectory: bool,
    #[arg(long, default_value_t = 3, requires = "trajectory")]
    waypoints: usize,
    #[arg(long, default_value_t = 40, requires = "trajectory")]
    radius: u32,
    /// Inclusive range of integer weight samples.
    #[arg(long, num_args = 2, value_names = ["LO", "HI"], default_values_t = [1, 100])]
    weights: Vec<i64>,
    /// Absence intervals to inject, kept only where the network stays connected.
    #[arg(long, default_value_t = 0)]
    absences: usize,
    #[arg(long, default_value = "-")]
    out: PathBuf,
}

#[derive(Debug, Args)]
struct SolveArgs {
    #[command(flatten)]
    io: InOut,
    #[arg(long, default_value = "eio", value_parser = ["tso", "eio"])]
    algo: String,
    /// TSO only: keep one sorted order and re-sort event edges.
    #[arg(long)]
    incremental_sort: bool,
    /// EIO only: use add/delete-heaviest for every exchange.
    #[arg(long)]
    no_fast_path: bool,
    /// EIO only: write filter counters as CSV to FILE, or standard error.
    #[arg(long, value_name = "FILE", num_args = 0..=1, default_missing_value = "-")]
    stats: Option<PathBuf>,
    /// Write edge_table.csv and fcycle_table.csv for the start of the horizon.
    #[arg(long, value_name = "DIR")]
    dump_tables: Option<PathBuf>,
}

#[derive(Debug, Args)]
struct VerifyArgs {
    #[command(flatten)]
    io: InOut,
    /// Result to check; solved with `--algo` when omitted.
    #[arg(long)]
    result: Option<PathBuf>,
    #[arg(long, default_value = "eio")]
    algo: Algorithm,
    /// Oracle samples per reported interval.
    #[arg(long, default_value_t = 25)]
    samples: usize,
    /// Largest network handed to the brute-force oracle.
    #[arg(long, default_value_t = 7)]
    oracle_max_nodes: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
}

#[derive(Debug, Args)]
struct BenchArgs {
    /// JSON array of generator specs.
    #[arg(long)]
    spec_file: PathBuf,
    /// Comma-separated algorithms.
    #[arg(long, value_delimiter = ',', default_value = "tso,eio")]
    algos: Vec<Algorithm>,
    #[arg(long, default_value = "-")]
    out: PathBuf,
}

#[derive(Debug, Serialize)]
struct Failure<'a> {
    error: &'a str,
    message: String,
}

#[derive(Debug)]
enum CliError {
    Core(Error),
    Io(String, io::Error),
    Csv(csv::Error),
    Mismatch(String),
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        CliError::Core(e)
    }
}

impl From<csv::Error> for CliError {
    fn from(e: csv::Error) -> Self {
        CliError::Csv(e)
    }
}

impl CliError {
    fn failure(&self) -> Failure<'_> {
        match self {
            CliError::Core(e) => Failure { error: kind(e), message: e.to_string() },
            CliError::Io(path, e) => Failure { error: "io", message: format!("{path}: {e}") },
            CliError::Csv(e) => Failure { error: "io", message: e.to_string() },
            CliError::Mismatch(msg) => Failure { error: "mismatch", message: msg.clone() },
        }
    }
}

fn kind(e: &Error) -> &'static str {
    match e {
        Error::Domain { .. } => "domain",
        Error::EdgeAbsent { .. } => "edge-absent",
        Error::Disconnected { .. } => "disconnected",
        Error::Structure(_) => "structure",
        Error::Series(_) => "series",
        Error::Invalid(_) => "invalid",
        Error::UnresolvedDegeneracy { .. } => "degeneracy",
        Error::EdgeInTree { .. } => "edge-in-tree",
        Error::NodeOutOfRange { .. } => "node-out-of-range",
        Error::Generator(_) => "generator",
        Error::OracleRefused(_) => "oracle-refused",
        Error::Parse { .. } => "parse",
        Error::Internal(_) => "internal",
    }
}

type CliResult<T = ()> = Result<T, CliError>;

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Some(n) = cli.threads {
        // A second initialisation only fails if a pool already exists.
        let _ = rayon::ThreadPoolBuilder::new().num_threads(n).build_global();
    }
    match run(cli.command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            let line = serde_json::to_string(&e.failure()).expect("failure serializes");
            eprintln!("{line}");
            ExitCode::from(1)
        }
    }
}

fn run(command: Command) -> CliResult {
    match command {
        Command::Gen(args) => gen(args),
        Command::Events(args) => events(args),
        Command::Solve(args) => solve(args),
        Command::Verify(args) => verify_cmd(args),
        Command::Bench(args) => bench_cmd(args),
        Command::Stats(args) => stats(args),
    }
}

fn read_text(path: &Path) -> CliResult<String> {
    let mut text = String::new();
    if path == Path::new("-") {
        io::stdin().read_to_string(&mut text).map_err(|e| CliError::Io("<stdin>".into(), e))?;
    } else {
        text = fs::read_to_string(path).map_err(|e| CliError::Io(path.display().to_string(), e))?;
    }
    Ok(text)
}

fn writer(path: &Path) -> CliResult<Box<dyn Write>> {
    if path == Path::new("-") {
        Ok(Box::new(io::stdout().lock()))
    } else {
        let file = fs::File::create(path).map_err(|e| CliError::Io(path.display().to_string(), e))?;
        Ok(Box::new(io::BufWriter::new(file)))
    }
}

fn write_text(path: &Path, text: &str) -> CliResult {
    let mut w = writer(path)?;
    writeln!(w, "{text}").and_then(|_| w.flush()).map_err(|e| CliError::Io(path.display().to_string(), e))
}

fn write_csv<T: Serialize>(w: Box<dyn Write>, rows: &[T]) -> CliResult {
    let mut out = csv::Writer::from_writer(w);
    for row in rows {
        out.serialize(row)?;
    }
    out.flush().map_err(|e| CliError::Io("csv output".into(), e))
}

fn load(args: &InOut) -> CliResult<TemporalNetwork> {
    let net = read_network(&read_text(&args.input)?)?;
    if args.no_perturb {
        Ok(net)
    } else {
        Ok(perturb_degenerate(&net)?)
    }
}

fn gen(args: GenArgs) -> CliResult {
    let kind = if args.trajectory {
        GenKind::Trajectory { waypoints: args.waypoints, radius: args.radius }
    } else {
        GenKind::RandomSeries
    };
    let spec = GenSpec {
        nodes: args.nodes,
        edges: args.edges,
        horizon: args.horizon,
        seed: args.seed,
        weight_range: (args.weights[0], args.weights[1]),
        kind,
    };
    let mut net = generate(&spec)?;
    if args.absences > 0 {
        net = inject_absence(&net, args.absences, args.seed)?;
    }
    write_text(&args.out, &write_network(&net)?)
}

fn events(args: InOut) -> CliResult {
    let net = load(&args)?;
    let tl = Timeline::new(&net)?;
    let rows: Vec<EventRow> = timeline_intersections(&tl).iter().map(EventRow::from_event).collect();
    write_csv(writer(&args.out)?, &rows)
}

fn solve(args: SolveArgs) -> CliResult {
    let net = load(&args.io)?;
    if let Some(dir) = &args.dump_tables {
        dump_tables(&net, dir)?;
    }
    let result: TsmstResult = match args.algo.as_str() {
        "tso" => {
            let algo = if args.incremental_sort { Algorithm::TsoIncremental } else { Algorithm::Tso };
            run_algorithm(&net, algo)?.0
        }
        _ => {
            let options = EioOptions { fast_path: !args.no_fast_path, ..EioOptions::default() };
            let run = eio_with(&net, &options)?;
            if let Some(path) = &args.stats {
                let w: Box<dyn Write> = if path == Path::new("-") { Box::new(io::stderr()) } else { writer(path)? };
                write_csv(w, &[StatsCountRow::from_stats(&run.stats)])?;
            }
            run.result
        }
    };
    write_text(&args.io.out, &write_result(&result))
}

fn dump_tables(net: &TemporalNetwork, dir: &Path) -> CliResult {
    fs::create_dir_all(dir).map_err(|e| CliError::Io(dir.display().to_string(), e))?;
    let tl = Timeline::new(net)?;
    let state = EioState::new(&tl, EioOptions::default())?;
    write_csv(writer(&dir.join("edge_table.csv"))?, &edge_table_rows(state.edge_table()))?;
    write_csv(writer(&dir.join("fcycle_table.csv"))?, &fcycle_table_rows(state.fcycle_table(), state.tree()))
}

#[derive(Debug, Serialize)]
struct VerifyDoc {
    matched: bool,
    samples_checked: usize,
    oracle_samples: usize,
    divergence: Option<DivergenceDoc>,
}

#[derive(Debug, Serialize)]
struct DivergenceDoc {
    kind: &'static str,
    time: Option<String>,
    expected: Vec<usize>,
    got: Vec<usize>,
    detail: String,
}

fn verify_cmd(args: VerifyArgs) -> CliResult {
    let net = load(&args.io)?;
    let result = match &args.result {
        Some(path) => read_result(&read_text(path)?)?,
        None => run_algorithm(&net, args.algo)?.0,
    };
    let options =
        VerifyOptions { samples_per_interval: args.samples, oracle_max_nodes: args.oracle_max_nodes, seed: args.seed };
    let report = verify(&net, &result, &options)?;
    let doc = VerifyDoc {
        matched: report.matched,
        samples_checked: report.samples_checked,
        oracle_samples: report.oracle_samples,
        divergence: report.divergence.map(|d| DivergenceDoc {
            kind: d.kind,
            time: d.time.map(|t| t.to_string()),
            expected: d.expected,
            got: d.got,
            detail: d.detail,
        }),
    };
    write_text(&args.io.out, &serde_json::to_string_pretty(&doc).expect("report serializes"))?;
    if doc.matched {
        Ok(())
    } else {
        let kind = doc.divergence.as_ref().map_or("unknown", |d| d.kind);
        Err(CliError::Mismatch(format!("result diverges from the reference ({kind})")))
    }
}

fn bench_cmd(args: BenchArgs) -> CliResult {
    let text = read_text(&args.spec_file)?;
    let specs: Vec<GenSpec> = serde_json::from_str(&text)
        .map_err(|e| Error::Parse { path: args.spec_file.display().to_string(), msg: e.to_string() })?;
    let rows = bench(&specs, &args.algos)?;
    write_csv(writer(&args.out)?, &rows)
}

fn stats(args: InOut) -> CliResult {
    let net = load(&args)?;
    write_csv(writer(&args.out)?, &[filter_stats(&net)?])
}
