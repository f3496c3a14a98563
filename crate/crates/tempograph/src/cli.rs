//! Command-line entry point.

use std::ffi::OsString;
use std::fs;
use std::io::{self, Write};
use std::path::{Path, PathBuf};
use std::sync::Arc;
use std::time::Duration;

use clap::{Args, CommandFactory, Parser, Subcommand, ValueEnum};
use serde::Serialize;
use tempograph_core::components::largest_component_ratio_series;
use tempograph_core::estimation::{EstimateReport, EstimationConfig, Estimator, RNG_ALGORITHM};
use tempograph_core::inference::{followback_order_histogram, infer_edge_times};
use tempograph_core::metrics::registry::{evaluate, run_strategy};
use tempograph_core::synth::{generate_follow_stream, generate_random_digraph, StreamParams};
use tempograph_core::timeline::{run_evolution, split_eras, EraSpec, Granularity, MetricSpec};
use tempograph_core::{
    build_snapshot, CreationIndex, MetricName, MetricParams, MetricValue, Mode, Snapshot, Strategy, TemporalEdgeList,
    TimeUnit, TimedEdge,
};

use crate::bench::bench_metrics;
use crate::exec::{RayonExecutor, RunClock};
use crate::io::{self as tio, ReadError};
use crate::output::{self, fmt_f64};

/// Environment variable that supplies `--budget-seconds` when the flag is absent.
pub const BUDGET_ENV: &str = "TEMPOGRAPH_BUDGET_SECONDS";

#[derive(Debug)]
pub enum CliError {
    /// Bad invocation or unusable input path; exit code 1.
    Usage(String),
    /// Malformed or unsuitable input data; exit code 2.
    Data(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) => 1,
            CliError::Data(_) => 2,
        }
    }
}

impl From<ReadError> for CliError {
    fn from(e: ReadError) -> Self {
        match e {
            ReadError::Io { .. } => CliError::Usage(e.to_string()),
            ReadError::Data(d) => CliError::Data(d.to_string()),
        }
    }
}

impl From<io::Error> for CliError {
    fn from(e: io::Error) -> Self {
        CliError::Usage(format!("write failed: {e}"))
    }
}

type CliResult = Result<(), CliError>;

fn data(e: impl std::fmt::Display) -> CliError {
    CliError::Data(e.to_string())
}

fn usage(e: impl std::fmt::Display) -> CliError {
    CliError::Usage(e.to_string())
}

#[derive(Parser, Debug)]
#[command(name = "tempograph", version, about = "Temporal follow-graph reconstruction and metric evolution")]
struct Cli {
    /// Flat `key = value` file supplying flags for the subcommand; flags on the command line win
    #[arg(long, global = true, value_name = "FILE")]
    config: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Estimate edge creation times from follower lists and write an edge dump
    InferTimes(InferArgs),
    /// Histogram of followback orders
    Followbacks(FollowbackArgs),
    /// Largest weakly connected component ratio as edges arrive
    Components(ComponentArgs),
    /// Summary (and optional edge dump) of the graph at one time point
    Snapshot(SnapshotArgs),
    /// Evaluate one metric at one time point
    Metric(MetricArgs),
    /// Evaluate metrics over cumulative eras
    Evolve(EvolveArgs),
    /// Write a synthetic follow stream or random digraph
    Generate(GenerateArgs),
    /// Time exact metric evaluations on growing snapshots
    Bench(BenchArgs),
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
enum UnitArg {
    Rank,
    Epoch,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
enum ModeArg {
    In,
    Out,
    All,
}

impl From<ModeArg> for Mode {
    fn from(m: ModeArg) -> Mode {
        match m {
            ModeArg::In => Mode::In,
            ModeArg::Out => Mode::Out,
            ModeArg::All => Mode::All,
        }
    }
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
enum Format {
    Csv,
    Json,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
enum MetricFormat {
    Text,
    Csv,
    Json,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
enum GranularityArg {
    Edges,
    Month,
    Day,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
enum Kind {
    Stream,
    Digraph,
}

#[derive(Args, Debug)]
struct IndexArgs {
    /// Creation index file (`id<TAB>timestamp`); ids are their own ranks without one
    #[arg(long, value_name = "FILE")]
    index: Option<PathBuf>,
    /// Unit of timestamps in the index and of edge times
    #[arg(long, value_enum, default_value = "rank")]
    time_unit: UnitArg,
    /// Follower lists in the file are newest first
    #[arg(long)]
    newest_first: bool,
}

impl IndexArgs {
    fn unit(&self) -> TimeUnit {
        match self.time_unit {
            UnitArg::Rank => TimeUnit::Rank,
            UnitArg::Epoch => TimeUnit::EpochSeconds,
        }
    }

    fn load(&self) -> Result<CreationIndex, CliError> {
        match &self.index {
            Some(p) => Ok(tio::load_creation_index(p, self.unit())?),
            None if self.unit() == TimeUnit::Rank => Ok(CreationIndex::identity()),
            None => Ok(CreationIndex::from_pairs([], self.unit())),
        }
    }
}

#[derive(Args, Debug)]
struct EdgeInput {
    /// Edge dump (`src<TAB>dst<TAB>est_time`)
    #[arg(long, value_name = "FILE", conflicts_with = "lists")]
    edges: Option<PathBuf>,
    /// Follower lists (`target:U1,U2,...`); edge times are inferred
    #[arg(long, value_name = "FILE")]
    lists: Option<PathBuf>,
    #[command(flatten)]
    index: IndexArgs,
}

impl EdgeInput {
    fn load(&self) -> Result<TemporalEdgeList, CliError> {
        match (&self.edges, &self.lists) {
            (Some(p), _) => Ok(tio::load_edge_dump(p)?),
            (None, Some(p)) => {
                let lists = tio::load_follower_lists(p, self.index.newest_first)?;
                infer_edge_times(&lists, &self.index.load()?).map_err(data)
            }
            (None, None) => Err(usage("one of --edges or --lists is required")),
        }
    }

    /// Index used for calendar eras: epoch unit, possibly without entries.
    fn calendar(&self) -> CreationIndex {
        CreationIndex::from_pairs([], self.index.unit())
    }
}

#[derive(Args, Debug)]
struct InferArgs {
    #[arg(long, value_name = "FILE")]
    lists: PathBuf,
    #[command(flatten)]
    index: IndexArgs,
    #[arg(short, long, value_name = "FILE")]
    output: Option<PathBuf>,
}

#[derive(Args, Debug)]
struct FollowbackArgs {
    #[command(flatten)]
    input: EdgeInput,
    #[arg(long, value_enum, default_value = "csv")]
    format: Format,
    #[arg(short, long, value_name = "FILE")]
    output: Option<PathBuf>,
}

#[derive(Args, Debug)]
struct ComponentArgs {
    #[command(flatten)]
    input: EdgeInput,
    /// Evenly spaced checkpoints over the edge stream
    #[arg(long, default_value_t = 100)]
    checkpoints: usize,
    #[arg(short, long, value_name = "FILE")]
    output: Option<PathBuf>,
}

#[derive(Args, Debug)]
struct SnapshotArgs {
    #[command(flatten)]
    input: EdgeInput,
    /// Keep edges with est_time at most this; defaults to all edges
    #[arg(long)]
    time: Option<u64>,
    /// Also write the snapshot's edges as an edge dump
    #[arg(long, value_name = "FILE")]
    dump: Option<PathBuf>,
    #[arg(short, long, value_name = "FILE")]
    output: Option<PathBuf>,
}

#[derive(Args, Debug, Clone)]
struct EstArgs {
    /// Top-level seed for every random draw
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long)]
    sample_size: Option<usize>,
    #[arg(long)]
    ci_level: Option<f64>,
    /// Stop once the CI width is at most this fraction of |mean|
    #[arg(long)]
    ci_ratio: Option<f64>,
    /// Wall-clock budget per estimate; 0 disables it. Default 7200 unless --max-rounds is given
    #[arg(long)]
    budget_seconds: Option<f64>,
    /// Cap on sampling rounds per estimate
    #[arg(long)]
    max_rounds: Option<u32>,
    #[arg(long)]
    n_subgraphs: Option<usize>,
    #[arg(long)]
    subgraph_start: Option<usize>,
    #[arg(long)]
    growth_factor: Option<f64>,
    #[arg(long)]
    cutoff_start: Option<u32>,
    #[arg(long)]
    cutoff_max: Option<u32>,
    /// Worker threads; 0 uses every core
    #[arg(long, default_value_t = 0)]
    workers: usize,
}

impl EstArgs {
    fn config(&self) -> Result<EstimationConfig, CliError> {
        let d = EstimationConfig::default();
        let budget_seconds = match (self.budget_seconds, self.max_rounds) {
            (Some(b), _) if b <= 0.0 => None,
            (Some(b), _) => Some(b),
            (None, Some(_)) => None,
            (None, None) => d.budget_seconds,
        };
        let cfg = EstimationConfig {
            sample_size: self.sample_size.unwrap_or(d.sample_size),
            ci_level: self.ci_level.unwrap_or(d.ci_level),
            ci_ratio_threshold: self.ci_ratio.unwrap_or(d.ci_ratio_threshold),
            budget_seconds,
            max_rounds: self.max_rounds,
            n_subgraphs: self.n_subgraphs.unwrap_or(d.n_subgraphs),
            subgraph_start: self.subgraph_start.unwrap_or(d.subgraph_start),
            growth_factor: self.growth_factor.unwrap_or(d.growth_factor),
            cutoff_start: self.cutoff_start.unwrap_or(d.cutoff_start),
            cutoff_max: self.cutoff_max,
            rng_seed: self.seed,
        };
        cfg.validate().map_err(usage)?;
        Ok(cfg)
    }

    fn executor(&self) -> Result<RayonExecutor, CliError> {
        RayonExecutor::new(self.workers).map_err(usage)
    }
}

#[derive(Args, Debug, Clone)]
struct ParamArgs {
    /// Edge direction; defaults per metric
    #[arg(long, value_enum)]
    mode: Option<ModeArg>,
    /// Neighborhood order
    #[arg(long)]
    order: Option<u32>,
    /// PageRank damping factor
    #[arg(long)]
    damping: Option<f64>,
    /// Per-level RAND-ESU probabilities, comma separated
    #[arg(long, value_delimiter = ',')]
    motif_probs: Option<Vec<f64>>,
}

impl ParamArgs {
    fn params(&self, seed: u64) -> MetricParams {
        let mut p = MetricParams { mode: self.mode.map(Mode::from), seed, ..MetricParams::default() };
        if let Some(o) = self.order {
            p.neighborhood_order = o;
        }
        if let Some(d) = self.damping {
            p.pagerank.damping = d;
        }
        p.motif_probs = self.motif_probs.clone();
        p
    }
}

#[derive(Args, Debug)]
struct MetricArgs {
    #[command(flatten)]
    input: EdgeInput,
    /// Registry name of the metric
    #[arg(long)]
    name: MetricName,
    /// Evaluate at this est_time; defaults to all edges
    #[arg(long)]
    time: Option<u64>,
    /// none, rnd_nodes, subgraph or cutoff; defaults per metric
    #[arg(long)]
    strategy: Option<Strategy>,
    /// Print every node's value (exact strategy only)
    #[arg(long)]
    per_node: bool,
    #[arg(long, value_enum, default_value = "text")]
    format: MetricFormat,
    #[command(flatten)]
    params: ParamArgs,
    #[command(flatten)]
    est: EstArgs,
    #[arg(short, long, value_name = "FILE")]
    output: Option<PathBuf>,
}

#[derive(Args, Debug)]
struct EvolveArgs {
    #[command(flatten)]
    input: EdgeInput,
    /// Comma-separated metric names; defaults to the whole registry
    #[arg(long, value_delimiter = ',')]
    metrics: Option<Vec<String>>,
    /// Strategy overrides as `metric=strategy`, comma separated
    #[arg(long = "strategy", value_delimiter = ',', value_name = "METRIC=STRATEGY")]
    strategies: Vec<String>,
    #[arg(long, value_enum, default_value = "edges")]
    granularity: GranularityArg,
    /// Edges per era for `--granularity edges`
    #[arg(long, default_value_t = 1000)]
    step: usize,
    /// Range start: epoch seconds for calendar eras, edge index otherwise
    #[arg(long)]
    range_start: Option<u64>,
    #[arg(long)]
    range_end: Option<u64>,
    #[arg(long, value_enum, default_value = "csv")]
    format: Format,
    #[command(flatten)]
    params: ParamArgs,
    #[command(flatten)]
    est: EstArgs,
    #[arg(short, long, value_name = "FILE")]
    output: Option<PathBuf>,
}

#[derive(Args, Debug)]
struct GenerateArgs {
    #[arg(long, value_enum, default_value = "stream")]
    kind: Kind,
    /// Directory receiving the generated files
    #[arg(long, value_name = "DIR")]
    out_dir: PathBuf,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, default_value_t = 10_000)]
    users: usize,
    #[arg(long)]
    arrivals: Option<f64>,
    #[arg(long)]
    follows_per_tick: Option<f64>,
    #[arg(long)]
    attach_exponent: Option<f64>,
    #[arg(long)]
    p_followback: Option<f64>,
    #[arg(long)]
    ticks: Option<u64>,
    /// Node count for `--kind digraph`
    #[arg(long, default_value_t = 1000)]
    nodes: usize,
    /// Edge probability for `--kind digraph`
    #[arg(long, default_value_t = 0.01)]
    p_edge: f64,
}

#[derive(Args, Debug)]
struct BenchArgs {
    #[command(flatten)]
    input: EdgeInput,
    /// Comma-separated metric names; defaults to the whole registry
    #[arg(long, value_delimiter = ',')]
    metrics: Option<Vec<String>>,
    /// Number of growing prefixes of the edge stream
    #[arg(long, default_value_t = 5)]
    snapshots: usize,
    /// Per-cell timeout in seconds
    #[arg(long)]
    timeout: Option<f64>,
    #[command(flatten)]
    params: ParamArgs,
    #[arg(short, long, value_name = "FILE")]
    output: Option<PathBuf>,
}

fn parse_metrics(names: &Option<Vec<String>>) -> Result<Vec<MetricName>, CliError> {
    match names {
        None => Ok(MetricName::ALL.to_vec()),
        Some(v) => v.iter().filter(|s| !s.trim().is_empty()).map(|s| s.trim().parse().map_err(usage)).collect(),
    }
}

fn checked(name: MetricName, strategy: Strategy) -> Result<Strategy, CliError> {
    if name.supports(strategy) {
        Ok(strategy)
    } else {
        Err(usage(format!("metric {name} does not support strategy {}", strategy.as_str())))
    }
}

fn run_infer(a: InferArgs) -> CliResult {
    let lists = tio::load_follower_lists(&a.lists, a.index.newest_first)?;
    let edges = infer_edge_times(&lists, &a.index.load()?).map_err(data)?;
    tio::write_edge_dump(tio::output(a.output.as_deref())?, &edges)?;
    Ok(())
}

fn run_followbacks(a: FollowbackArgs) -> CliResult {
    let hist = followback_order_histogram(&a.input.load()?);
    let mut w = tio::output(a.output.as_deref())?;
    match a.format {
        Format::Csv => {
            writeln!(w, "order,count")?;
            for (k, c) in &hist {
                writeln!(w, "{k},{c}")?;
            }
        }
        Format::Json => {
            #[derive(Serialize)]
            struct Bucket {
                order: u64,
                count: u64,
            }
            let rows: Vec<Bucket> = hist.iter().map(|(&order, &count)| Bucket { order, count }).collect();
            serde_json::to_writer_pretty(&mut w, &rows).map_err(io::Error::from)?;
            writeln!(w)?;
        }
    }
    w.flush()?;
    Ok(())
}

/// `n` evenly spaced prefix lengths ending at `m`.
fn even_checkpoints(m: usize, n: usize) -> Vec<usize> {
    let mut cs: Vec<usize> = (1..=n).map(|i| ((i as u128 * m as u128) / n as u128) as usize).collect();
    cs.dedup();
    cs
}

fn run_components(a: ComponentArgs) -> CliResult {
    if a.checkpoints == 0 {
        return Err(usage("--checkpoints must be positive"));
    }
    let edges = a.input.load()?;
    let series = largest_component_ratio_series(&edges, &even_checkpoints(edges.edge_count(), a.checkpoints)).map_err(data)?;
    let mut w = tio::output(a.output.as_deref())?;
    writeln!(w, "e_count,ratio")?;
    for (c, r) in series {
        writeln!(w, "{c},{}", fmt_f64(r))?;
    }
    w.flush()?;
    Ok(())
}

fn snapshot_at(edges: &TemporalEdgeList, time: Option<u64>) -> (Snapshot, usize) {
    match time {
        Some(t) => (build_snapshot(edges, t), edges.count_until(t)),
        None => (Snapshot::from_prefix(edges, edges.edge_count()), edges.edge_count()),
    }
}

fn run_snapshot(a: SnapshotArgs) -> CliResult {
    let edges = a.input.load()?;
    let (snap, count) = snapshot_at(&edges, a.time);
    let ratio = largest_component_ratio_series(&edges, &[count]).map_err(data)?[0].1;
    let mut w = tio::output(a.output.as_deref())?;
    if let Some(t) = a.time {
        writeln!(w, "time={t}")?;
    }
    writeln!(w, "v_count={}", snap.node_count())?;
    writeln!(w, "e_count={}", snap.edge_count())?;
    writeln!(w, "max_in_degree={}", snap.max_degree(Mode::In))?;
    writeln!(w, "max_out_degree={}", snap.max_degree(Mode::Out))?;
    writeln!(w, "largest_component_ratio={}", fmt_f64(ratio))?;
    w.flush()?;
    if let Some(p) = &a.dump {
        tio::write_edges(tio::output(Some(p))?, &edges.edges()[..count])?;
    }
    Ok(())
}

#[derive(Serialize)]
struct MetricJson<'a> {
    metric: &'a str,
    strategy: &'a str,
    time: Option<u64>,
    v_count: usize,
    e_count: usize,
    reports: &'a [EstimateReport],
}

fn run_metric(a: MetricArgs) -> CliResult {
    let strategy = checked(a.name, a.strategy.unwrap_or(a.name.default_strategy()))?;
    let cfg = a.est.config()?;
    let params = a.params.params(a.est.seed);
    let edges = a.input.load()?;
    let (snap, _) = snapshot_at(&edges, a.time);
    let mut w = tio::output(a.output.as_deref())?;

    if a.per_node {
        if strategy != Strategy::Exact {
            return Err(usage("--per-node needs the exact strategy"));
        }
        match evaluate(a.name, &snap, &params).map_err(data)? {
            MetricValue::PerNode(m) => {
                writeln!(w, "id,value")?;
                for (id, v) in m.iter() {
                    writeln!(w, "{id},{}", fmt_f64(v))?;
                }
            }
            MetricValue::Histogram(h) => {
                writeln!(w, "value,count")?;
                for (k, c) in h {
                    writeln!(w, "{k},{c}")?;
                }
            }
            MetricValue::Scalar(v) => writeln!(w, "{}", fmt_f64(v))?,
        }
        w.flush()?;
        return Ok(());
    }

    let exec = a.est.executor()?;
    let clock = RunClock::for_budget(cfg.budget_seconds);
    let est = Estimator::new(&cfg, &exec, &clock);
    let reports = run_strategy(a.name, strategy, &snap, &params, &est).map_err(data)?;
    match a.format {
        MetricFormat::Text if strategy == Strategy::Exact => writeln!(w, "{}", fmt_f64(reports[0].mean))?,
        MetricFormat::Text | MetricFormat::Csv => {
            writeln!(w, "param,mean,ci_low,ci_high,n_samples,rounds,converged,skipped")?;
            for r in &reports {
                writeln!(
                    w,
                    "{},{},{},{},{},{},{},{}",
                    r.param.map(|p| p.to_string()).unwrap_or_default(),
                    fmt_f64(r.mean),
                    fmt_f64(r.ci_low),
                    fmt_f64(r.ci_high),
                    r.n_samples,
                    r.rounds,
                    r.converged,
                    r.skipped
                )?;
            }
        }
        MetricFormat::Json => {
            let doc = MetricJson {
                metric: a.name.as_str(),
                strategy: strategy.as_str(),
                time: a.time,
                v_count: snap.node_count(),
                e_count: snap.edge_count(),
                reports: &reports,
            };
            serde_json::to_writer_pretty(&mut w, &doc).map_err(io::Error::from)?;
            writeln!(w)?;
        }
    }
    w.flush()?;
    Ok(())
}

fn run_evolve(a: EvolveArgs) -> CliResult {
    let names = parse_metrics(&a.metrics)?;
    let mut specs: Vec<MetricSpec> = names.iter().map(|&n| MetricSpec::new(n)).collect();
    let params = a.params.params(a.est.seed);
    for s in &mut specs {
        s.params = params.clone();
    }
    for o in a.strategies.iter().filter(|s| !s.trim().is_empty()) {
        let (m, st) = o.split_once('=').ok_or_else(|| usage(format!("strategy override {o:?} is not metric=strategy")))?;
        let m: MetricName = m.trim().parse().map_err(usage)?;
        let st: Strategy = st.trim().parse().map_err(usage)?;
        let spec = specs.iter_mut().find(|s| s.name == m).ok_or_else(|| usage(format!("{m} is not among --metrics")))?;
        spec.strategy = checked(m, st)?;
    }
    let cfg = a.est.config()?;
    let granularity = match a.granularity {
        GranularityArg::Edges => Granularity::PerEdgeCount(a.step),
        GranularityArg::Month => Granularity::PerMonth,
        GranularityArg::Day => Granularity::PerDay,
    };
    let range = match (a.range_start, a.range_end) {
        (None, None) => None,
        (s, e) => Some((s.unwrap_or(0), e.unwrap_or(u64::MAX))),
    };
    let edges = a.input.load()?;
    let calendar = a.input.calendar();
    let eras = split_eras(&edges, &EraSpec { granularity, range }, Some(&calendar)).map_err(usage)?;

    let exec = a.est.executor()?;
    let clock = RunClock::for_budget(cfg.budget_seconds);
    let series = run_evolution(&edges, &specs, &eras, &cfg, &exec, &clock);
    let w = tio::output(a.output.as_deref())?;
    match a.format {
        Format::Csv => output::write_csv(w, &series)?,
        Format::Json => output::write_json(w, &series, cfg.rng_seed)?,
    }
    Ok(())
}

#[derive(Serialize)]
struct GenerateMeta<'a> {
    kind: &'a str,
    rng: &'static str,
    seed: u64,
    #[serde(skip_serializing_if = "Option::is_none")]
    stream: Option<&'a StreamParams>,
    #[serde(skip_serializing_if = "Option::is_none")]
    nodes: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    p_edge: Option<f64>,
    edges: usize,
}

fn write_meta(dir: &Path, meta: &GenerateMeta<'_>) -> CliResult {
    let mut w = tio::output(Some(&dir.join("meta.json")))?;
    serde_json::to_writer_pretty(&mut w, meta).map_err(io::Error::from)?;
    writeln!(w)?;
    w.flush()?;
    Ok(())
}

fn run_generate(a: GenerateArgs) -> CliResult {
    fs::create_dir_all(&a.out_dir).map_err(|e| usage(format!("cannot create {}: {e}", a.out_dir.display())))?;
    match a.kind {
        Kind::Stream => {
            let d = StreamParams::new(a.users, a.seed);
            let p = StreamParams {
                arrivals: a.arrivals.unwrap_or(d.arrivals),
                follows_per_tick: a.follows_per_tick.unwrap_or(d.follows_per_tick),
                attach_exponent: a.attach_exponent.unwrap_or(d.attach_exponent),
                p_followback: a.p_followback.unwrap_or(d.p_followback),
                ticks: a.ticks.unwrap_or(d.ticks),
                ..d
            };
            let s = generate_follow_stream(&p).map_err(usage)?;
            tio::write_follower_lists(tio::output(Some(&a.out_dir.join("lists.txt")))?, &s.lists)?;
            tio::write_creation_index(tio::output(Some(&a.out_dir.join("index.tsv")))?, &s.idx)?;
            tio::write_edges(tio::output(Some(&a.out_dir.join("truth.tsv")))?, &s.truth)?;
            let meta = GenerateMeta {
                kind: "stream",
                rng: RNG_ALGORITHM,
                seed: a.seed,
                stream: Some(&p),
                nodes: None,
                p_edge: None,
                edges: s.truth.len(),
            };
            write_meta(&a.out_dir, &meta)
        }
        Kind::Digraph => {
            let g = generate_random_digraph(a.nodes, a.p_edge, a.seed).map_err(usage)?;
            let edges: Vec<TimedEdge> = g
                .edges()
                .enumerate()
                .map(|(i, (u, v))| TimedEdge { src: g.id(u), dst: g.id(v), est_time: i as u64, seq: i as u64 })
                .collect();
            tio::write_edges(tio::output(Some(&a.out_dir.join("edges.tsv")))?, &edges)?;
            let meta = GenerateMeta {
                kind: "digraph",
                rng: RNG_ALGORITHM,
                seed: a.seed,
                stream: None,
                nodes: Some(a.nodes),
                p_edge: Some(a.p_edge),
                edges: edges.len(),
            };
            write_meta(&a.out_dir, &meta)
        }
    }
}

fn run_bench(a: BenchArgs) -> CliResult {
    let metrics = parse_metrics(&a.metrics)?;
    if a.snapshots == 0 {
        return Err(usage("--snapshots must be positive"));
    }
    let timeout = match a.timeout {
        Some(t) if !(t > 0.0 && t.is_finite()) => return Err(usage("--timeout must be positive")),
        t => t.map(Duration::from_secs_f64),
    };
    let edges = a.input.load()?;
    let snaps: Vec<Arc<Snapshot>> = even_checkpoints(edges.edge_count(), a.snapshots)
        .into_iter()
        .map(|c| Arc::new(Snapshot::from_prefix(&edges, c)))
        .collect();
    let rows = bench_metrics(&snaps, &metrics, &a.params.params(0), timeout);
    let mut w = tio::output(a.output.as_deref())?;
    writeln!(w, "metric,v_count,e_count,seconds")?;
    for r in rows {
        writeln!(w, "{},{},{},{}", r.metric, r.v_count, r.e_count, r.cell)?;
    }
    w.flush()?;
    Ok(())
}

/// Removes `--config FILE` / `--config=FILE` from `args`.
fn take_config(args: &mut Vec<OsString>) -> Result<Option<PathBuf>, CliError> {
    let Some(i) = args.iter().position(|a| a == "--config" || a.to_str().is_some_and(|s| s.starts_with("--config="))) else {
        return Ok(None);
    };
    let arg = args.remove(i);
    if let Some(v) = arg.to_str().and_then(|s| s.strip_prefix("--config=")) {
        return Ok(Some(PathBuf::from(v)));
    }
    if i < args.len() {
        Ok(Some(PathBuf::from(args.remove(i))))
    } else {
        Err(usage("--config needs a file"))
    }
}

/// Folds the environment budget and the config file into the argument list.
fn prepare(mut args: Vec<OsString>) -> Result<Vec<OsString>, CliError> {
    let config = take_config(&mut args)?;
    let root = Cli::command();
    let sub = args.iter().skip(1).filter_map(|a| a.to_str()).find(|a| !a.starts_with('-')).map(str::to_string);
    let Some(cmd) = sub.as_deref().and_then(|s| root.find_subcommand(s)) else {
        return Ok(args);
    };
    if let Ok(v) = std::env::var(BUDGET_ENV) {
        config::default_flag(&mut args, cmd, "budget-seconds", &v);
    }
    if let Some(path) = config {
        let file = fs::File::open(&path).map_err(|e| usage(format!("cannot read {}: {e}", path.display())))?;
        let entries = config::parse(io::BufReader::new(file)).map_err(|e| usage(format!("{}:{e}", path.display())))?;
        config::merge(&mut args, cmd, &entries).map_err(|e| usage(format!("{}:{e}", path.display())))?;
    }
    Ok(args)
}

use crate::config;

fn dispatch(cli: Cli) -> CliResult {
    match cli.command {
        Command::InferTimes(a) => run_infer(a),
        Command::Followbacks(a) => run_followbacks(a),
        Command::Components(a) => run_components(a),
        Command::Snapshot(a) => run_snapshot(a),
        Command::Metric(a) => run_metric(a),
        Command::Evolve(a) => run_evolve(a),
        Command::Generate(a) => run_generate(a),
        Command::Bench(a) => run_bench(a),
    }
}

/// Runs the tool and returns the process exit code.
pub fn run<I>(argv: I) -> i32
where
    I: IntoIterator,
    I::Item: Into<OsString>,
{
    let args = match prepare(argv.into_iter().map(Into::into).collect()) {
        Ok(a) => a,
        Err(e) => {
            eprintln!("error: {}", match &e {
                CliError::Usage(m) | CliError::Data(m) => m,
            });
            return e.exit_code();
        }
    };
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { 1 } else { 0 };
        }
    };
    match dispatch(cli) {
        Ok(()) => 0,
        Err(e) => {
            let (CliError::Usage(m) | CliError::Data(m)) = &e;
            eprintln!("error: {m}");
            e.exit_code()
        }
    }
}
