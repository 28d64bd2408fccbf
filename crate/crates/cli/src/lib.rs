//! Command implementations behind the `mgrq` binary.

use std::collections::HashSet;
use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};
use std::time::{Duration, Instant};

use clap::{Args, Parser, Subcommand, ValueEnum};
use mgrq::generate::grid;
use mgrq::oracle::OracleError;
use mgrq::{
    contract_degree2, load_graph, oracle_front, run_bidi, run_uni, write_graph, CoordMode,
    CostGainGraph, GainPolicy, LoadError, NodeId, Query, QueryError, QueryResult, RcConfig,
    SearchMode,
};
use serde::Serialize;
use thiserror::Error;

pub const BENCH_HEADER: &str =
    "algo,mode,k,tau,time_ms,nodes_visited,ways_expanded,front_size,timed_out";

#[derive(Debug, Parser)]
#[command(
    name = "mgrq",
    version,
    about = "Maximum gain round trip queries on cost-gain networks"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Compute the Pareto front of round trips from one start node.
    Query(QueryArgs),
    /// Sweep budgets, algorithms and redundancy levels and emit a CSV table.
    Bench(BenchArgs),
    /// Assign gains from maxspeed tags and contract degree-2 chains.
    Convert(ConvertArgs),
    /// Write a synthetic square grid graph.
    GenGrid(GenGridArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Algo {
    Uni,
    Bidi,
    Oracle,
}

impl Algo {
    fn as_str(self) -> &'static str {
        match self {
            Algo::Uni => "uni",
            Algo::Bidi => "bidi",
            Algo::Oracle => "oracle",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ModeArg {
    Plain,
    Rc,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum OutputFormat {
    Json,
    Csv,
}

#[derive(Debug, Args)]
pub struct QueryArgs {
    #[arg(long)]
    pub graph: PathBuf,
    /// Name of the start node.
    #[arg(long)]
    pub start: String,
    #[arg(long)]
    pub tau: f64,
    #[arg(long, value_enum, default_value = "bidi")]
    pub algo: Algo,
    #[arg(long, value_enum, default_value = "plain")]
    pub mode: ModeArg,
    #[arg(long, default_value_t = 1)]
    pub k: u32,
    #[arg(long, default_value_t = true, action = clap::ArgAction::Set)]
    pub dominance_pruning: bool,
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[arg(long, value_enum, default_value = "json")]
    pub format: OutputFormat,
    #[arg(long)]
    pub timeout_secs: Option<u64>,
    /// Maximum number of ways the oracle may enumerate.
    #[arg(long, default_value_t = 10_000_000)]
    pub oracle_budget: usize,
}

#[derive(Debug, Args)]
pub struct BenchArgs {
    #[arg(long)]
    pub graph: PathBuf,
    #[arg(long)]
    pub start: String,
    #[arg(long)]
    pub tau_min: f64,
    #[arg(long)]
    pub tau_max: f64,
    #[arg(long)]
    pub tau_step: f64,
    #[arg(long, value_enum, value_delimiter = ',', default_value = "uni,bidi")]
    pub algos: Vec<Algo>,
    #[arg(long, value_enum, default_value = "plain")]
    pub mode: ModeArg,
    #[arg(long, value_delimiter = ',', default_value = "1")]
    pub k_list: Vec<u32>,
    #[arg(long, default_value_t = true, action = clap::ArgAction::Set)]
    pub dominance_pruning: bool,
    #[arg(long, default_value_t = 60)]
    pub timeout_secs: u64,
    #[arg(long, default_value_t = 3)]
    pub repeat: usize,
    #[arg(long, default_value_t = 10_000_000)]
    pub oracle_budget: usize,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct ConvertArgs {
    #[arg(long = "in")]
    pub input: PathBuf,
    #[arg(long)]
    pub out: PathBuf,
    /// Node names that must survive contraction.
    #[arg(long, value_delimiter = ',')]
    pub keep: Vec<String>,
    #[arg(long, default_value_t = 30.0)]
    pub gain_threshold_kmh: f64,
    /// Speed assumed for edges without a maxspeed value.
    #[arg(long, default_value_t = 50.0)]
    pub default_maxspeed_kmh: f64,
}

#[derive(Debug, Args)]
pub struct GenGridArgs {
    #[arg(long)]
    pub side: usize,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Probability that a segment carries gain 1.
    #[arg(long, default_value_t = 0.5)]
    pub p_gain: f64,
    #[arg(long)]
    pub out: PathBuf,
}

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error("cannot load graph: {0}")]
    Load(#[from] LoadError),
    #[error("{0}")]
    Io(String),
    #[error("{0}")]
    Run(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) => 2,
            CliError::Load(_) => 3,
            CliError::Io(_) | CliError::Run(_) => 1,
        }
    }
}

fn io_error(path: &Path, err: std::io::Error) -> CliError {
    CliError::Io(format!("{}: {err}", path.display()))
}

pub fn run(cli: Cli) -> Result<(), CliError> {
    match cli.command {
        Command::Query(args) => cmd_query(&args),
        Command::Bench(args) => cmd_bench(&args),
        Command::Convert(args) => cmd_convert(&args),
        Command::GenGrid(args) => cmd_gen_grid(&args),
    }
}

fn resolve_start(graph: &CostGainGraph, name: &str) -> Result<NodeId, CliError> {
    graph
        .node_id(name)
        .ok_or_else(|| CliError::Usage(format!("unknown start node {name:?}")))
}

fn search_mode(
    graph: &CostGainGraph,
    mode: ModeArg,
    k: u32,
    pruning: bool,
) -> Result<SearchMode, CliError> {
    match mode {
        ModeArg::Plain => Ok(SearchMode::Plain),
        ModeArg::Rc => {
            if graph.is_contracted() {
                return Err(CliError::Usage(
                    "redundancy control is not supported on a contracted graph: merged chains hide the segments \
                     they traverse, so segment limits cannot be enforced; use the uncontracted graph"
                        .into(),
                ));
            }
            RcConfig::new(k, pruning)
                .map(SearchMode::Rc)
                .ok_or_else(|| CliError::Usage("--k must be at least 1".into()))
        }
    }
}

fn check_tau(tau: f64) -> Result<(), CliError> {
    if tau.is_finite() && tau > 0.0 {
        Ok(())
    } else {
        Err(CliError::Usage(format!(
            "budget must be positive and finite, got {tau}"
        )))
    }
}

enum Outcome {
    Done(QueryResult),
    TimedOut,
}

fn execute(
    graph: &CostGainGraph,
    algo: Algo,
    query: &Query,
    oracle_budget: usize,
) -> Result<Outcome, CliError> {
    let result = match algo {
        Algo::Uni => run_uni(graph, query),
        Algo::Bidi => run_bidi(graph, query),
        Algo::Oracle => match oracle_front(graph, query, oracle_budget) {
            Ok(r) => Ok(r),
            Err(OracleError::Query(e)) => Err(e),
            Err(e @ OracleError::BudgetExceeded(_)) => return Err(CliError::Run(e.to_string())),
        },
    };
    match result {
        Ok(r) => Ok(Outcome::Done(r)),
        Err(QueryError::TimedOut) => Ok(Outcome::TimedOut),
        Err(e) => Err(CliError::Usage(e.to_string())),
    }
}

#[derive(Serialize)]
struct FrontRecord {
    cost: f64,
    gain: f64,
    nodes: Vec<String>,
}

fn front_records(graph: &CostGainGraph, result: &QueryResult) -> Vec<FrontRecord> {
    result
        .front
        .iter()
        .map(|entry| FrontRecord {
            cost: entry.cost,
            gain: entry.gain,
            nodes: entry
                .trip
                .way()
                .nodes(graph)
                .into_iter()
                .map(|n| graph.node(n).name.clone())
                .collect(),
        })
        .collect()
}

pub fn render_front(graph: &CostGainGraph, result: &QueryResult, format: OutputFormat) -> String {
    let records = front_records(graph, result);
    match format {
        OutputFormat::Json => {
            let mut s = serde_json::to_string_pretty(&records).expect("plain data");
            s.push('\n');
            s
        }
        OutputFormat::Csv => {
            let mut s = String::from("cost,gain,node_path\n");
            for r in records {
                writeln!(s, "{},{},{}", r.cost, r.gain, r.nodes.join(">")).unwrap();
            }
            s
        }
    }
}

fn emit(out: Option<&Path>, text: &str) -> Result<(), CliError> {
    match out {
        Some(path) => fs::write(path, text).map_err(|e| io_error(path, e)),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

pub fn cmd_query(args: &QueryArgs) -> Result<(), CliError> {
    check_tau(args.tau)?;
    let graph = load_graph(&args.graph, CoordMode::None)?;
    let start = resolve_start(&graph, &args.start)?;
    let mode = search_mode(&graph, args.mode, args.k, args.dominance_pruning)?;
    let mut query = Query {
        start,
        tau: args.tau,
        mode,
        deadline: None,
    };
    let began = Instant::now();
    if let Some(secs) = args.timeout_secs {
        query = query.with_deadline(began + Duration::from_secs(secs));
    }
    let result = match execute(&graph, args.algo, &query, args.oracle_budget)? {
        Outcome::Done(r) => r,
        Outcome::TimedOut => return Err(CliError::Run("query timed out".into())),
    };
    let elapsed = began.elapsed();
    eprintln!(
        "nodes_visited={} ways_expanded={} wall_time_ms={:.3}",
        result.stats.nodes_visited,
        result.stats.ways_expanded,
        elapsed.as_secs_f64() * 1e3
    );
    emit(
        args.out.as_deref(),
        &render_front(&graph, &result, args.format),
    )
}

/// Budgets `tau_min, tau_min + step, ...` up to `tau_max` inclusive.
pub fn tau_sweep(min: f64, max: f64, step: f64) -> Result<Vec<f64>, CliError> {
    if !(step.is_finite() && step > 0.0 && min.is_finite() && max.is_finite()) || min > max {
        return Err(CliError::Usage(format!(
            "empty budget sweep {min}..={max} step {step}"
        )));
    }
    let slack = step * 1e-9;
    let taus: Vec<f64> = (0..)
        .map(|i| min + i as f64 * step)
        .take_while(|&t| t <= max + slack)
        .collect();
    for &t in &taus {
        check_tau(t)?;
    }
    Ok(taus)
}

fn median(mut xs: Vec<f64>) -> f64 {
    xs.sort_by(f64::total_cmp);
    let n = xs.len();
    if n % 2 == 1 {
        xs[n / 2]
    } else {
        (xs[n / 2 - 1] + xs[n / 2]) / 2.0
    }
}

pub fn cmd_bench(args: &BenchArgs) -> Result<(), CliError> {
    let taus = tau_sweep(args.tau_min, args.tau_max, args.tau_step)?;
    if args.algos.is_empty() {
        return Err(CliError::Usage("--algos is empty".into()));
    }
    if args.repeat == 0 {
        return Err(CliError::Usage("--repeat must be at least 1".into()));
    }
    let graph = load_graph(&args.graph, CoordMode::None)?;
    let start = resolve_start(&graph, &args.start)?;
    let ks: Vec<Option<u32>> = match args.mode {
        ModeArg::Plain => vec![None],
        ModeArg::Rc if args.k_list.is_empty() => {
            return Err(CliError::Usage("--k-list is empty".into()))
        }
        ModeArg::Rc => args.k_list.iter().map(|&k| Some(k)).collect(),
    };
    let mode_name = match args.mode {
        ModeArg::Plain => "plain",
        ModeArg::Rc if args.dominance_pruning => "rc",
        ModeArg::Rc => "rc-nopruning",
    };
    let timeout = Duration::from_secs(args.timeout_secs);

    let mut out = format!("{BENCH_HEADER}\n");
    for &algo in &args.algos {
        for &k in &ks {
            let mode = search_mode(&graph, args.mode, k.unwrap_or(1), args.dominance_pruning)?;
            for &tau in &taus {
                let mut times = Vec::with_capacity(args.repeat);
                let mut last = None;
                let mut timed_out = false;
                for _ in 0..args.repeat {
                    let began = Instant::now();
                    let query = Query {
                        start,
                        tau,
                        mode,
                        deadline: Some(began + timeout),
                    };
                    match execute(&graph, algo, &query, args.oracle_budget)? {
                        Outcome::Done(r) => last = Some(r),
                        Outcome::TimedOut => timed_out = true,
                    }
                    times.push(began.elapsed().as_secs_f64() * 1e3);
                    if timed_out {
                        break;
                    }
                }
                let k_col = k.map_or_else(|| "-".to_string(), |k| k.to_string());
                let counters = match (&last, timed_out) {
                    (Some(r), false) => format!(
                        "{},{},{}",
                        r.stats.nodes_visited,
                        r.stats.ways_expanded,
                        r.front.len()
                    ),
                    _ => ",,".to_string(),
                };
                writeln!(
                    out,
                    "{},{mode_name},{k_col},{tau},{:.3},{counters},{timed_out}",
                    algo.as_str(),
                    median(times)
                )
                .unwrap();
            }
        }
    }
    emit(args.out.as_deref(), &out)
}

pub fn cmd_convert(args: &ConvertArgs) -> Result<(), CliError> {
    if !(args.gain_threshold_kmh >= 0.0 && args.default_maxspeed_kmh >= 0.0) {
        return Err(CliError::Usage("speeds must be non-negative".into()));
    }
    let graph = load_graph(&args.input, CoordMode::None)?;
    let keep = args
        .keep
        .iter()
        .map(|name| {
            graph
                .node_id(name)
                .ok_or_else(|| CliError::Usage(format!("unknown node {name:?} in --keep")))
        })
        .collect::<Result<HashSet<NodeId>, _>>()?;
    let policy = GainPolicy {
        threshold_kmh: args.gain_threshold_kmh,
        default_maxspeed_kmh: args.default_maxspeed_kmh,
    };
    let converted = contract_degree2(&graph.assign_gain_policy(&policy), &keep);
    eprintln!(
        "nodes {} -> {}, edges {} -> {}",
        graph.num_nodes(),
        converted.num_nodes(),
        graph.num_edges(),
        converted.num_edges()
    );
    fs::write(&args.out, write_graph(&converted)).map_err(|e| io_error(&args.out, e))
}

pub fn cmd_gen_grid(args: &GenGridArgs) -> Result<(), CliError> {
    if args.side == 0 {
        return Err(CliError::Usage("--side must be at least 1".into()));
    }
    if !(0.0..=1.0).contains(&args.p_gain) {
        return Err(CliError::Usage("--p-gain must lie in [0, 1]".into()));
    }
    let g = grid(args.side, args.seed, args.p_gain);
    fs::write(&args.out, write_graph(&g)).map_err(|e| io_error(&args.out, e))
}
