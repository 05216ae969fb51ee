//! Batch command-line interface: `color` runs the engine on an edge list,
//! `verify` checks a coloring file against a graph, `bench` sweeps seeded
//! random instances into a CSV report.
//!
//! Exit codes are a stable contract: 0 success, 1 I/O failure, 2 input
//! parse failure, 3 verification failure.

use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use rayon::prelude::*;
use thiserror::Error;

use vizing_core::gen::{derive_seed, random_graph};
use vizing_core::msva::MsvaParams;
use vizing_core::sim::{
    color_sequential, parse_coloring_text, simulate_coloring, verify_output, write_coloring_text,
    SeqConfig, SimConfig, SimOutput, Summary,
};
use vizing_core::{Graph, MisAlgorithm, MsvaTrace, VerifyReport};

const BENCH_SCHEMA: &str = "vizing-bench-v1";

#[derive(Parser)]
#[command(name = "vizing", version, about = "(Δ+1)-edge-coloring engine")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Color a graph and write the coloring plus a JSON summary.
    Color(ColorArgs),
    /// Verify a coloring file against a graph: totality, properness, palette.
    Verify(VerifyArgs),
    /// Run a corpus of seeded random instances and emit a CSV report.
    Bench(BenchArgs),
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Mode {
    /// One edge at a time through the retrying multi-step construction.
    Sequential,
    /// Phase simulator: parallel growth, conflict MIS, batch augmentation.
    Distributed,
}

impl std::fmt::Display for Mode {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Mode::Sequential => "sequential",
            Mode::Distributed => "distributed",
        })
    }
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Switch {
    On,
    Off,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum MisChoice {
    Luby,
    Greedy,
}

impl From<MisChoice> for MisAlgorithm {
    fn from(m: MisChoice) -> Self {
        match m {
            MisChoice::Luby => MisAlgorithm::Luby,
            MisChoice::Greedy => MisAlgorithm::GreedyById,
        }
    }
}

#[derive(Args)]
struct ColorArgs {
    /// Edge-list input: one "u v" pair per line, '#' comments allowed.
    #[arg(long)]
    input: PathBuf,
    #[arg(long, value_enum, default_value_t = Mode::Distributed)]
    mode: Mode,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Override the truncation window ℓ (default: per-graph).
    #[arg(long)]
    ell: Option<usize>,
    /// Override the step cap T (default: per-graph).
    #[arg(long = "steps-T")]
    steps_t: Option<usize>,
    /// Fraction ε in the default step cap T = max(8, ⌊ε ln n⌋).
    #[arg(long, default_value_t = 1.0 / 16.0)]
    epsilon: f64,
    #[arg(long, value_enum, default_value_t = MisChoice::Luby)]
    mis: MisChoice,
    /// Retry budget per edge in sequential mode.
    #[arg(long, default_value_t = 32)]
    max_retries: usize,
    /// Single-step fallback (per edge when sequential, per stalled phase
    /// when distributed).
    #[arg(long, value_enum, default_value_t = Switch::On)]
    fallback: Switch,
    /// Write per-run step traces as JSON lines.
    #[arg(long)]
    trace: Option<PathBuf>,
    /// Write phase stats (JSON lines) plus a final ledger object.
    #[arg(long)]
    stats_out: Option<PathBuf>,
    /// Coloring output path ("edge_id color" lines); stdout when omitted.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Summary JSON path; stdout when omitted.
    #[arg(long)]
    summary_out: Option<PathBuf>,
}

#[derive(Args)]
struct VerifyArgs {
    /// Edge-list graph path.
    #[arg(long)]
    graph: PathBuf,
    /// Coloring file path ("edge_id color" lines).
    #[arg(long)]
    coloring: PathBuf,
}

#[derive(Args)]
struct BenchArgs {
    /// Corpus case "n:delta:mode:seeds", repeatable.
    #[arg(long = "case", required = true)]
    cases: Vec<CaseSpec>,
    /// Master seed mixed into every run seed.
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// CSV report path; stdout when omitted.
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = MisChoice::Luby)]
    mis: MisChoice,
    #[arg(long, default_value_t = 1.0 / 16.0)]
    epsilon: f64,
}

#[derive(Clone)]
struct CaseSpec {
    n: usize,
    delta: usize,
    mode: Mode,
    seeds: u64,
}

impl std::str::FromStr for CaseSpec {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let parts: Vec<&str> = s.split(':').collect();
        let [n, delta, mode, seeds] = parts.as_slice() else {
            return Err(format!("expected n:delta:mode:seeds, got {s:?}"));
        };
        let mode = match *mode {
            "sequential" => Mode::Sequential,
            "distributed" => Mode::Distributed,
            other => return Err(format!("unknown mode {other:?}")),
        };
        Ok(CaseSpec {
            n: n.parse().map_err(|e| format!("bad n: {e}"))?,
            delta: delta.parse().map_err(|e| format!("bad delta: {e}"))?,
            mode,
            seeds: seeds.parse().map_err(|e| format!("bad seeds: {e}"))?,
        })
    }
}

impl std::fmt::Display for CaseSpec {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}:{}:{}:{}", self.n, self.delta, self.mode, self.seeds)
    }
}

#[derive(Debug, Error)]
enum CliError {
    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        source: std::io::Error,
    },
    #[error("{path}: {message}")]
    Parse { path: PathBuf, message: String },
    #[error("verification failed: {0}")]
    Verification(String),
}

impl CliError {
    fn exit_code(&self) -> u8 {
        match self {
            CliError::Io { .. } => 1,
            CliError::Parse { .. } => 2,
            CliError::Verification(_) => 3,
        }
    }
}

fn read_file(path: &Path) -> Result<String, CliError> {
    fs::read_to_string(path).map_err(|source| CliError::Io {
        path: path.to_path_buf(),
        source,
    })
}

fn write_file(path: &Path, contents: &str) -> Result<(), CliError> {
    fs::write(path, contents).map_err(|source| CliError::Io {
        path: path.to_path_buf(),
        source,
    })
}

fn emit(path: Option<&Path>, contents: &str) -> Result<(), CliError> {
    match path {
        Some(p) => write_file(p, contents),
        None => {
            print!("{contents}");
            Ok(())
        }
    }
}

fn load_graph(path: &Path) -> Result<Graph, CliError> {
    let text = read_file(path)?;
    Graph::parse(&text).map_err(|e| CliError::Parse {
        path: path.to_path_buf(),
        message: e.to_string(),
    })
}

/// Resolved configuration of one `color` invocation.
struct RunManifest {
    input: PathBuf,
    mode: Mode,
    seed: u64,
    params: Option<MsvaParams>,
    epsilon: f64,
    mis: MisAlgorithm,
    max_retries: usize,
    fallback: bool,
    trace: Option<PathBuf>,
    stats_out: Option<PathBuf>,
    out: Option<PathBuf>,
    summary_out: Option<PathBuf>,
}

impl RunManifest {
    fn resolve(args: ColorArgs, graph: &Graph) -> Self {
        let defaults = MsvaParams::for_graph(graph, args.epsilon);
        let params = match (args.ell, args.steps_t) {
            (None, None) => None,
            (ell, t) => Some(MsvaParams::new(
                ell.unwrap_or(defaults.ell),
                t.unwrap_or(defaults.step_cap),
            )),
        };
        RunManifest {
            input: args.input,
            mode: args.mode,
            seed: args.seed,
            params,
            epsilon: args.epsilon,
            mis: args.mis.into(),
            max_retries: args.max_retries,
            fallback: args.fallback == Switch::On,
            trace: args.trace,
            stats_out: args.stats_out,
            out: args.out,
            summary_out: args.summary_out,
        }
    }
}

fn trace_lines(traces: &[MsvaTrace]) -> String {
    let mut out = String::new();
    for t in traces {
        out.push_str(&serde_json::to_string(t).expect("traces serialize"));
        out.push('\n');
    }
    out
}

fn tagged_json<T: serde::Serialize>(kind: &str, value: &T) -> String {
    let mut v = serde_json::to_value(value).expect("stats serialize");
    v.as_object_mut()
        .expect("stats are objects")
        .insert("kind".into(), kind.into());
    serde_json::to_string(&v).expect("stats serialize")
}

fn cmd_color(args: ColorArgs) -> Result<(), CliError> {
    let graph = load_graph(&args.input)?;
    let manifest = RunManifest::resolve(args, &graph);

    let (assignment, stats_text, traces) = match manifest.mode {
        Mode::Distributed => {
            let config = SimConfig {
                params: manifest.params,
                epsilon: manifest.epsilon,
                mis: manifest.mis,
                master_seed: manifest.seed,
                straggler_fallback: manifest.fallback,
                trace: manifest.trace.is_some(),
                ..SimConfig::default()
            };
            let SimOutput {
                coloring,
                phases,
                ledger,
                traces,
            } = simulate_coloring(&graph, &config)
                .map_err(|e| CliError::Verification(e.to_string()))?;
            let mut stats = String::new();
            for p in &phases {
                let _ = writeln!(stats, "{}", tagged_json("phase", p));
            }
            let _ = writeln!(stats, "{}", tagged_json("ledger", &ledger));
            (coloring.assignment().to_vec(), stats, traces)
        }
        Mode::Sequential => {
            let config = SeqConfig {
                params: manifest.params,
                epsilon: manifest.epsilon,
                max_retries: manifest.max_retries,
                fallback: manifest.fallback,
                seed: manifest.seed,
                trace: manifest.trace.is_some(),
            };
            let out = color_sequential(&graph, &config)
                .map_err(|e| CliError::Verification(e.to_string()))?;
            let stats = format!("{}\n", tagged_json("sequential", &out.stats));
            (out.coloring.assignment().to_vec(), stats, out.traces)
        }
    };

    emit(manifest.out.as_deref(), &write_coloring_text(&assignment))?;
    let report = verify_output(&graph, &assignment);
    let summary = Summary::new(&graph, &assignment);
    emit(
        manifest.summary_out.as_deref(),
        &format!("{}\n", serde_json::to_string(&summary).expect("summary")),
    )?;
    if let Some(path) = &manifest.stats_out {
        write_file(path, &stats_text)?;
    }
    if let Some(path) = &manifest.trace {
        write_file(path, &trace_lines(&traces))?;
    }
    if report.ok() {
        Ok(())
    } else {
        Err(CliError::Verification(format!(
            "{}: {}",
            manifest.input.display(),
            describe_failure(&report)
        )))
    }
}

fn describe_failure(report: &VerifyReport) -> String {
    if let Some((a, b)) = report.first_clash {
        format!("edges {a} and {b} share an endpoint and a color")
    } else if let Some(e) = report.first_blank {
        format!("edge {e} is uncolored")
    } else if let Some((e, c)) = report.first_overflow {
        format!("edge {e} carries color {c} outside the palette 1..={}", report.palette)
    } else {
        "unknown".into()
    }
}

fn cmd_verify(args: VerifyArgs) -> Result<(), CliError> {
    let graph = load_graph(&args.graph)?;
    let text = read_file(&args.coloring)?;
    let assignment =
        parse_coloring_text(&text, graph.edge_count()).map_err(|e| CliError::Parse {
            path: args.coloring.clone(),
            message: e.to_string(),
        })?;
    let report = verify_output(&graph, &assignment);
    println!("{}", serde_json::to_string(&report).expect("report"));
    if report.ok() {
        Ok(())
    } else {
        Err(CliError::Verification(describe_failure(&report)))
    }
}

/// One bench run reduced to its report row.
struct BenchRow {
    case: String,
    n: usize,
    delta: usize,
    mode: Mode,
    seed: u64,
    lucky_fraction: f64,
    mean_chain_len: f64,
    max_chain_len: usize,
    phases: usize,
    fallbacks: usize,
    rounds_total: u64,
    colored: usize,
    proper: bool,
}

fn bench_run(case: &CaseSpec, case_id: usize, seed_idx: u64, args: &BenchArgs) -> BenchRow {
    let run_seed = derive_seed(args.seed, case_id as u64, seed_idx);
    let graph = random_graph(case.n, case.delta, run_seed);
    match case.mode {
        Mode::Distributed => {
            let config = SimConfig {
                mis: args.mis.into(),
                epsilon: args.epsilon,
                master_seed: run_seed,
                ..SimConfig::default()
            };
            let out = simulate_coloring(&graph, &config).expect("fallback guarantees progress");
            let attempts: usize = out.phases.iter().map(|p| p.uncolored_before).sum();
            let lucky: usize = out.phases.iter().map(|p| p.lucky).sum();
            let chain_len_sum: usize = out.phases.iter().map(|p| p.chain_len_sum).sum();
            let report = verify_output(&graph, out.coloring.assignment());
            BenchRow {
                case: case.to_string(),
                n: case.n,
                delta: case.delta,
                mode: case.mode,
                seed: seed_idx,
                lucky_fraction: if attempts > 0 {
                    lucky as f64 / attempts as f64
                } else {
                    1.0
                },
                mean_chain_len: if lucky > 0 {
                    chain_len_sum as f64 / lucky as f64
                } else {
                    0.0
                },
                max_chain_len: out.phases.iter().map(|p| p.max_chain_len).max().unwrap_or(0),
                phases: out.phases.len(),
                fallbacks: out.phases.iter().map(|p| p.fallback_count).sum(),
                rounds_total: out.ledger.total,
                colored: report.colored_count,
                proper: report.proper && report.palette_ok && report.total,
            }
        }
        Mode::Sequential => {
            let config = SeqConfig {
                epsilon: args.epsilon,
                seed: run_seed,
                ..SeqConfig::default()
            };
            let out = color_sequential(&graph, &config).expect("fallback guarantees progress");
            let report = verify_output(&graph, out.coloring.assignment());
            BenchRow {
                case: case.to_string(),
                n: case.n,
                delta: case.delta,
                mode: case.mode,
                seed: seed_idx,
                lucky_fraction: if out.stats.edges_colored > 0 {
                    out.stats.msva_successes as f64 / out.stats.edges_colored as f64
                } else {
                    1.0
                },
                mean_chain_len: out.stats.mean_chain_len,
                max_chain_len: out.stats.max_chain_len,
                phases: 0,
                fallbacks: out.stats.fallbacks,
                rounds_total: 0,
                colored: report.colored_count,
                proper: report.proper && report.palette_ok && report.total,
            }
        }
    }
}

fn fmt_f64(x: f64) -> String {
    format!("{x:.6}")
}

fn cmd_bench(args: BenchArgs) -> Result<(), CliError> {
    let specs: Vec<(usize, u64)> = args
        .cases
        .iter()
        .enumerate()
        .flat_map(|(i, c)| (0..c.seeds).map(move |s| (i, s)))
        .collect();
    // One run per worker; rows merged back in run order.
    let rows: Vec<BenchRow> = specs
        .par_iter()
        .map(|&(case_id, seed_idx)| bench_run(&args.cases[case_id], case_id, seed_idx, &args))
        .collect();

    let mut csv = String::new();
    csv.push_str(
        "schema,row_kind,case,n,delta,mode,seed,lucky_fraction,mean_chain_len,max_chain_len,\
         phases,fallbacks,rounds_total,colored,proper\n",
    );
    for r in &rows {
        let _ = writeln!(
            csv,
            "{BENCH_SCHEMA},run,{},{},{},{},{},{},{},{},{},{},{},{},{}",
            r.case,
            r.n,
            r.delta,
            r.mode,
            r.seed,
            fmt_f64(r.lucky_fraction),
            fmt_f64(r.mean_chain_len),
            r.max_chain_len,
            r.phases,
            r.fallbacks,
            r.rounds_total,
            r.colored,
            r.proper
        );
    }
    // Mean and standard-deviation rows per case, column-aligned with the
    // run rows; emitted only when a case has several runs.
    for case in &args.cases {
        if case.seeds < 2 {
            continue;
        }
        let case_key = case.to_string();
        let case_rows: Vec<&BenchRow> = rows.iter().filter(|r| r.case == case_key).collect();
        let cols: [Box<dyn Fn(&BenchRow) -> f64>; 6] = [
            Box::new(|r| r.lucky_fraction),
            Box::new(|r| r.mean_chain_len),
            Box::new(|r| r.max_chain_len as f64),
            Box::new(|r| r.phases as f64),
            Box::new(|r| r.fallbacks as f64),
            Box::new(|r| r.rounds_total as f64),
        ];
        let stats: Vec<(f64, f64)> = cols
            .iter()
            .map(|get| {
                let vals: Vec<f64> = case_rows.iter().map(|r| get(r)).collect();
                let mean = vals.iter().sum::<f64>() / vals.len() as f64;
                let var = vals.iter().map(|v| (v - mean) * (v - mean)).sum::<f64>()
                    / vals.len() as f64;
                (mean, var.sqrt())
            })
            .collect();
        for (kind, pick) in [
            ("aggregate_mean", 0usize),
            ("aggregate_sd", 1usize),
        ] {
            let v = |i: usize| {
                let (mean, sd) = stats[i];
                fmt_f64(if pick == 0 { mean } else { sd })
            };
            let _ = writeln!(
                csv,
                "{BENCH_SCHEMA},{kind},{case_key},{},{},{},,{},{},{},{},{},{},,",
                case.n,
                case.delta,
                case.mode,
                v(0),
                v(1),
                v(2),
                v(3),
                v(4),
                v(5),
            );
        }
    }
    emit(args.out.as_deref(), &csv)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Color(args) => cmd_color(args),
        Command::Verify(args) => cmd_verify(args),
        Command::Bench(args) => cmd_bench(args),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
