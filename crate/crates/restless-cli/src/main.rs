//! Batch frontend for restless reachability queries, path extraction, the
//! immunization case study, generators, and runtime sweeps.

use std::fs::File;
use std::io::{self, BufReader, BufWriter, Write};
use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Instant;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand};

use restless::brute;
use restless::extract::{self, RestlessPath};
use restless::ff::{stream, Field, RandomTape};
use restless::gen;
use restless::reach::{self, OracleParams, QueryMode, ReachQuery, ReachReport};
use restless::sieve::ColorMultiset;
use restless::tgraph::{
    self, parse_coloring, parse_edge_list, parse_resting_times, RestingTimes, TemporalGraph,
};

#[derive(Parser)]
#[command(
    name = "restless",
    version,
    about = "Restless (waiting-time-restricted) reachability in temporal graphs"
)]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Reachability from one or more sources; writes a "v min_time" table.
    Reach(ReachArgs),
    /// Extract an explicit optimal restless path between two vertices.
    Extract(ExtractArgs),
    /// Reachability time series under a separator (immunization) strategy.
    Immunize(ImmunizeArgs),
    /// Exhaustive-search reference solver, for head-to-head comparison.
    Baseline(BaselineArgs),
    /// Generate a d-regular configuration-model temporal graph.
    GenRegular(GenRegularArgs),
    /// Generate a power-law configuration-model temporal graph.
    GenPowerlaw(GenPowerlawArgs),
    /// Runtime sweeps over k, edges, delta, or density; writes CSV.
    Bench(BenchArgs),
}

#[derive(Args)]
struct CommonArgs {
    /// Edge-list file: "n m tau" header, then m lines "u v t" (1-based).
    #[arg(short, long)]
    input: PathBuf,
    /// Master seed for all randomized parts.
    #[arg(long, default_value_t = 1)]
    seed: u64,
    /// Field width b in bits: 8, 16, 32, or 64.
    #[arg(long, default_value_t = 64)]
    field_bits: u32,
    /// Subsets evaluated per dynamic-programming pass.
    #[arg(long, default_value_t = 8)]
    lane_width: usize,
    /// Worker thread cap (0 = all cores). Outputs do not depend on it.
    #[arg(long, default_value_t = 0)]
    threads: usize,
}

#[derive(Args)]
struct DeltaArgs {
    /// Constant resting time for every vertex.
    #[arg(long, group = "delta_source")]
    delta: Option<u32>,
    /// Per-vertex resting times from a file of "v delta" lines.
    #[arg(long, group = "delta_source")]
    delta_file: Option<PathBuf>,
    /// Resting times drawn uniformly from 1..=MAX, keyed by --seed.
    #[arg(long, value_name = "MAX", group = "delta_source")]
    delta_random: Option<u32>,
    /// Override the source's resting time to tau.
    #[arg(long)]
    source_rests_forever: bool,
}

#[derive(Args)]
struct ReachArgs {
    #[command(flatten)]
    common: CommonArgs,
    #[command(flatten)]
    delta: DeltaArgs,
    /// Source vertex (1-based). Repeat for a multi-source query.
    #[arg(short, long = "source", required = true)]
    sources: Vec<u32>,
    /// Paths of length exactly K-1.
    #[arg(long, conflicts_with = "max_k")]
    exact_k: Option<usize>,
    /// Paths of length at most K-1. Without this (or --exact-k) the query
    /// is unbounded and cost grows as 2^k per length step.
    #[arg(long)]
    max_k: Option<usize>,
    /// Vertex-color file of "v color" lines; requires --motif.
    #[arg(long, requires = "motif")]
    colors: Option<PathBuf>,
    /// Color multiset "c1:m1,c2:m2,..."; requires --colors.
    #[arg(long, requires = "colors")]
    motif: Option<String>,
    /// Write the per-vertex min-time table here instead of stdout.
    #[arg(short, long)]
    output: Option<PathBuf>,
    /// Also write the full 0/1 reachability matrix (one row per vertex).
    #[arg(long)]
    matrix: Option<PathBuf>,
    /// Also write a "t,fraction_reachable" time series.
    #[arg(long)]
    csv: Option<PathBuf>,
}

#[derive(Args)]
struct ExtractArgs {
    #[command(flatten)]
    common: CommonArgs,
    #[command(flatten)]
    delta: DeltaArgs,
    /// Source vertex (1-based).
    #[arg(short, long)]
    source: u32,
    /// Destination vertex (1-based).
    #[arg(short, long)]
    dest: u32,
    /// Number of path vertices (path length k-1). Ignored with --motif.
    #[arg(short, long)]
    k: Option<usize>,
    #[arg(long, requires = "motif")]
    colors: Option<PathBuf>,
    #[arg(long, requires = "colors")]
    motif: Option<String>,
    #[arg(short, long)]
    output: Option<PathBuf>,
}

#[derive(Args)]
struct ImmunizeArgs {
    #[command(flatten)]
    common: CommonArgs,
    #[command(flatten)]
    delta: DeltaArgs,
    /// Source vertex (1-based).
    #[arg(short, long)]
    source: u32,
    /// Paths of length at most K-1.
    #[arg(long)]
    max_k: usize,
    /// Separator selection strategy.
    #[arg(long, value_parser = ["random", "top-degree", "explicit"])]
    strategy: String,
    /// Percentage of vertices to immunize (random / top-degree).
    #[arg(long)]
    percent: Option<f64>,
    /// Explicit separator list "a,b,c" (1-based).
    #[arg(long)]
    separators: Option<String>,
    /// Write the "t,fraction_reachable" series here instead of stdout.
    #[arg(short, long)]
    output: Option<PathBuf>,
}

#[derive(Args)]
struct BaselineArgs {
    #[command(flatten)]
    common: CommonArgs,
    #[command(flatten)]
    delta: DeltaArgs,
    /// Source vertex (1-based).
    #[arg(short, long)]
    source: u32,
    /// Paths of length at most K-1.
    #[arg(short, long)]
    k: usize,
    #[arg(short, long)]
    output: Option<PathBuf>,
}

#[derive(Args)]
struct GenRegularArgs {
    #[arg(short, long)]
    n: usize,
    /// Per-vertex degree.
    #[arg(short, long)]
    d: u32,
    #[arg(short, long)]
    tau: u32,
    /// Emit both directions of every stub pair instead of one random one.
    #[arg(long)]
    undirected: bool,
    #[arg(long, default_value_t = 1)]
    seed: u64,
    #[arg(short, long)]
    output: Option<PathBuf>,
}

#[derive(Args)]
struct GenPowerlawArgs {
    #[arg(short, long)]
    n: usize,
    /// Target mean degree D; the degree sum lands on D*n.
    #[arg(short = 'D', long)]
    mean_degree: u32,
    /// Number of geometrically spaced degree support points.
    #[arg(short, long, default_value_t = 100)]
    w: u32,
    /// Power-law exponent (negative).
    #[arg(short, long, default_value_t = -1.0, allow_hyphen_values = true)]
    alpha: f64,
    #[arg(short, long)]
    tau: u32,
    #[arg(long)]
    undirected: bool,
    #[arg(long, default_value_t = 1)]
    seed: u64,
    #[arg(short, long)]
    output: Option<PathBuf>,
}

#[derive(Args)]
struct BenchArgs {
    /// Sweep axis.
    #[arg(long, value_parser = ["k", "edges", "delta", "density"])]
    axis: String,
    /// Generator family for the test instances.
    #[arg(long, default_value = "regular", value_parser = ["regular", "powerlaw"])]
    family: String,
    /// Comma-separated axis values (k values, vertex counts, deltas, or
    /// degrees depending on the axis).
    #[arg(long)]
    values: String,
    /// Base vertex count (k / delta axes) or edge budget (density axis).
    #[arg(long, default_value_t = 1000)]
    n: usize,
    /// Base degree.
    #[arg(short, long, default_value_t = 8)]
    d: u32,
    #[arg(long, default_value_t = 50)]
    tau: u32,
    /// Resting time (constant over vertices) where not swept.
    #[arg(long, default_value_t = 5)]
    delta: u32,
    /// Path vertex count where not swept.
    #[arg(short, long, default_value_t = 8)]
    k: usize,
    /// Timing repetitions per point; the median is reported.
    #[arg(long, default_value_t = 3)]
    repeats: usize,
    #[arg(long, default_value_t = 1)]
    seed: u64,
    #[arg(long, default_value_t = 8)]
    lane_width: usize,
    #[arg(short, long)]
    output: Option<PathBuf>,
}

/// Marker for operator mistakes (bad ids, malformed specs); these exit with
/// the usage status, runtime failures with 1.
#[derive(Debug)]
struct Usage(String);

impl std::fmt::Display for Usage {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(&self.0)
    }
}

impl std::error::Error for Usage {}

fn usage(msg: String) -> anyhow::Error {
    anyhow::Error::new(Usage(msg))
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => code,
        Err(err) => {
            eprintln!("error: {err:#}");
            if err.downcast_ref::<Usage>().is_some() {
                ExitCode::from(2)
            } else {
                ExitCode::from(1)
            }
        }
    }
}

fn run(cli: Cli) -> Result<ExitCode> {
    match cli.cmd {
        Cmd::Reach(args) => cmd_reach(args),
        Cmd::Extract(args) => cmd_extract(args),
        Cmd::Immunize(args) => cmd_immunize(args),
        Cmd::Baseline(args) => cmd_baseline(args),
        Cmd::GenRegular(args) => cmd_gen_regular(args),
        Cmd::GenPowerlaw(args) => cmd_gen_powerlaw(args),
        Cmd::Bench(args) => cmd_bench(args),
    }
}

fn init_threads(threads: usize) {
    if threads > 0 {
        let _ = rayon::ThreadPoolBuilder::new()
            .num_threads(threads)
            .build_global();
    }
}

fn load_graph(path: &PathBuf) -> Result<TemporalGraph> {
    let file = File::open(path).with_context(|| format!("opening {}", path.display()))?;
    let parsed = parse_edge_list(BufReader::new(file))
        .with_context(|| format!("parsing {}", path.display()))?;
    if parsed.stats.self_loops_dropped + parsed.stats.duplicates_dropped > 0 {
        eprintln!(
            "note: dropped {} self-loops and {} duplicate edges",
            parsed.stats.self_loops_dropped, parsed.stats.duplicates_dropped
        );
    }
    Ok(parsed.graph)
}

fn resolve_delta(
    g: &TemporalGraph,
    args: &DeltaArgs,
    seed: u64,
    sources: &[u32],
) -> Result<RestingTimes> {
    let mut rest = match (&args.delta, &args.delta_file, &args.delta_random) {
        (Some(d), None, None) => RestingTimes::uniform(g.n(), *d),
        (None, Some(path), None) => {
            let file =
                File::open(path).with_context(|| format!("opening {}", path.display()))?;
            parse_resting_times(BufReader::new(file), g.n(), g.tau())?
        }
        (None, None, Some(max)) => {
            if *max == 0 || *max > g.tau() {
                return Err(usage(format!("--delta-random must lie in 1..=tau ({})", g.tau())));
            }
            RestingTimes::random_uniform(g.n(), *max, &RandomTape::new(seed))
        }
        _ => {
            return Err(usage(
                "exactly one of --delta, --delta-file, --delta-random is required".into(),
            ))
        }
    };
    if args.source_rests_forever {
        for &s in sources {
            rest.set(s, g.tau());
        }
    }
    if !rest.valid_for(g.tau()) {
        return Err(usage(format!("resting times must lie in 1..=tau ({})", g.tau())));
    }
    Ok(rest)
}

fn parse_vertex(raw: u32, n: usize) -> Result<u32> {
    if raw == 0 || raw as usize > n {
        return Err(usage(format!("vertex {raw} out of range 1..={n}")));
    }
    Ok(raw - 1)
}

fn parse_vertex_list(spec: &str, n: usize) -> Result<Vec<u32>> {
    spec.split(',')
        .filter(|tok| !tok.is_empty())
        .map(|tok| {
            let raw: u32 = tok
                .trim()
                .parse()
                .map_err(|_| usage(format!("bad vertex id {tok:?}")))?;
            parse_vertex(raw, n)
        })
        .collect()
}

fn parse_motif(spec: &str) -> Result<ColorMultiset> {
    let mut pairs = Vec::new();
    for tok in spec.split(',').filter(|t| !t.is_empty()) {
        let (c, m) = tok
            .split_once(':')
            .ok_or_else(|| usage(format!("bad multiset entry {tok:?}, expected color:mult")))?;
        let c: u32 = c.trim().parse().map_err(|_| usage(format!("bad color {c:?}")))?;
        let m: u32 = m.trim().parse().map_err(|_| usage(format!("bad multiplicity {m:?}")))?;
        if c == 0 || m == 0 {
            return Err(usage(format!("colors and multiplicities are positive, got {tok:?}")));
        }
        pairs.push((c, m));
    }
    if pairs.is_empty() {
        return Err(usage("empty color multiset".into()));
    }
    Ok(ColorMultiset::from_pairs(pairs))
}

fn out_writer(path: &Option<PathBuf>) -> Result<Box<dyn Write>> {
    Ok(match path {
        Some(p) => Box::new(BufWriter::new(
            File::create(p).with_context(|| format!("creating {}", p.display()))?,
        )),
        None => Box::new(BufWriter::new(io::stdout())),
    })
}

fn params_for(common: &CommonArgs) -> Result<OracleParams> {
    let field = Field::new(common.field_bits).map_err(|e| usage(e.to_string()))?;
    Ok(OracleParams {
        field,
        seed: common.seed,
        lane_width: common.lane_width,
    })
}

fn write_min_times(w: &mut dyn Write, min_time: &[Option<u32>]) -> Result<()> {
    for (v, t) in min_time.iter().enumerate() {
        match t {
            Some(t) => writeln!(w, "{} {}", v + 1, t)?,
            None => writeln!(w, "{} -1", v + 1)?,
        }
    }
    Ok(())
}

/// Fraction of vertices reached by time t, counting a vertex from its
/// earliest reach time onward; the denominator excludes `excluded` vertices.
fn write_fraction_csv(
    w: &mut dyn Write,
    min_time: &[Option<u32>],
    tau: u32,
    excluded: usize,
) -> Result<()> {
    let denom = (min_time.len() - excluded) as f64;
    writeln!(w, "t,fraction_reachable")?;
    for t in 0..=tau {
        let count = min_time
            .iter()
            .filter(|mt| mt.is_some_and(|x| x <= t))
            .count();
        writeln!(w, "{},{}", t, count as f64 / denom)?;
    }
    Ok(())
}

fn cmd_reach(args: ReachArgs) -> Result<ExitCode> {
    init_threads(args.common.threads);
    let g = load_graph(&args.common.input)?;
    let sources: Vec<u32> = args
        .sources
        .iter()
        .map(|&s| parse_vertex(s, g.n()))
        .collect::<Result<_>>()?;
    let rest = resolve_delta(&g, &args.delta, args.common.seed, &sources)?;
    let params = params_for(&args.common)?;

    let motif = match (&args.colors, &args.motif) {
        (Some(colors_path), Some(motif_spec)) => {
            let file = File::open(colors_path)
                .with_context(|| format!("opening {}", colors_path.display()))?;
            let coloring = parse_coloring(BufReader::new(file), g.n())?;
            Some((parse_motif(motif_spec)?, coloring))
        }
        _ => None,
    };

    let mode = match (args.exact_k, args.max_k) {
        (Some(k), _) => QueryMode::Exact(k),
        (None, Some(k)) => QueryMode::AtMost(k),
        (None, None) => {
            if motif.is_none() {
                eprintln!(
                    "note: unbounded query; cost doubles per length step up to k={}",
                    g.n()
                );
            }
            QueryMode::Unbounded
        }
    };

    let query = ReachQuery {
        sources,
        mode,
        motif,
        separators: vec![],
        keep_per_k: false,
        max_k: args.max_k,
    };
    let report = reach::solve(&g, &rest, &query, &params)?;

    let mut w = out_writer(&args.output)?;
    write_min_times(&mut w, &report.min_time)?;
    w.flush()?;

    if let Some(path) = &args.matrix {
        let mut w = out_writer(&Some(path.clone()))?;
        for v in 0..g.n() as u32 {
            let row: Vec<&str> = (1..=g.tau())
                .map(|t| if report.r.get(v, t) { "1" } else { "0" })
                .collect();
            writeln!(w, "{}", row.join(" "))?;
        }
        w.flush()?;
    }
    if let Some(path) = &args.csv {
        let mut w = out_writer(&Some(path.clone()))?;
        write_fraction_csv(&mut w, &report.min_time, g.tau(), 0)?;
        w.flush()?;
    }
    Ok(ExitCode::SUCCESS)
}

fn write_path(w: &mut dyn Write, path: &RestlessPath) -> Result<()> {
    writeln!(w, "path {} {}", path.len() + 1, path.end_time())?;
    for e in path.edges() {
        writeln!(w, "{} {} {}", e.src + 1, e.dst + 1, e.t)?;
    }
    Ok(())
}

fn cmd_extract(args: ExtractArgs) -> Result<ExitCode> {
    init_threads(args.common.threads);
    let g = load_graph(&args.common.input)?;
    let s = parse_vertex(args.source, g.n())?;
    let dest = parse_vertex(args.dest, g.n())?;
    let rest = resolve_delta(&g, &args.delta, args.common.seed, &[s])?;
    let params = params_for(&args.common)?;

    let outcome = match (&args.colors, &args.motif) {
        (Some(colors_path), Some(motif_spec)) => {
            let file = File::open(colors_path)
                .with_context(|| format!("opening {}", colors_path.display()))?;
            let coloring = parse_coloring(BufReader::new(file), g.n())?;
            let motif = parse_motif(motif_spec)?;
            extract::extract_optimal_path(&g, &rest, &coloring, &motif, s, dest, &params)?
        }
        _ => {
            let k = args
                .k
                .ok_or_else(|| usage("--k is required without --motif".into()))?;
            extract::extract_optimal_path_plain(&g, &rest, k, s, dest, &params)?
        }
    };

    let mut w = out_writer(&args.output)?;
    match outcome.path {
        Some(path) => {
            write_path(&mut w, &path)?;
            w.flush()?;
            Ok(ExitCode::SUCCESS)
        }
        None => {
            writeln!(w, "none")?;
            w.flush()?;
            Ok(ExitCode::from(3))
        }
    }
}

/// Temporal degree: total incident temporal edge count, in plus out.
fn temporal_degrees(g: &TemporalGraph) -> Vec<usize> {
    let mut deg = vec![0usize; g.n()];
    for e in g.edges() {
        deg[e.src as usize] += 1;
        deg[e.dst as usize] += 1;
    }
    deg
}

fn pick_separators(
    g: &TemporalGraph,
    strategy: &str,
    percent: Option<f64>,
    explicit: &Option<String>,
    source: u32,
    seed: u64,
) -> Result<Vec<u32>> {
    let eligible: Vec<u32> = (0..g.n() as u32).filter(|&v| v != source).collect();
    match strategy {
        "explicit" => {
            let spec = explicit
                .as_ref()
                .ok_or_else(|| usage("--separators is required with --strategy explicit".into()))?;
            let seps = parse_vertex_list(spec, g.n())?;
            if seps.contains(&source) {
                return Err(usage("the source cannot be a separator".into()));
            }
            Ok(seps)
        }
        _ => {
            let percent = percent
                .ok_or_else(|| usage(format!("--percent is required with --strategy {strategy}")))?;
            if !(0.0..=100.0).contains(&percent) {
                return Err(usage("--percent must lie in [0, 100]".into()));
            }
            let count = (percent / 100.0 * g.n() as f64).round() as usize;
            if percent > 0.0 && (count == 0 || eligible.is_empty()) {
                bail!("{percent}% selects no eligible vertices");
            }
            let count = count.min(eligible.len());
            match strategy {
                "random" => {
                    let tape = RandomTape::new(seed);
                    let mut pool = eligible;
                    for i in (1..pool.len()).rev() {
                        let j =
                            tape.uniform(stream::INSTANCE, &[i as u64], i as u64 + 1) as usize;
                        pool.swap(i, j);
                    }
                    pool.truncate(count);
                    pool.sort_unstable();
                    Ok(pool)
                }
                "top-degree" => {
                    let deg = temporal_degrees(g);
                    let mut pool = eligible;
                    pool.sort_by_key(|&v| (std::cmp::Reverse(deg[v as usize]), v));
                    pool.truncate(count);
                    pool.sort_unstable();
                    Ok(pool)
                }
                other => bail!("unknown strategy {other}"),
            }
        }
    }
}

fn cmd_immunize(args: ImmunizeArgs) -> Result<ExitCode> {
    init_threads(args.common.threads);
    let g = load_graph(&args.common.input)?;
    let s = parse_vertex(args.source, g.n())?;
    let rest = resolve_delta(&g, &args.delta, args.common.seed, &[s])?;
    let params = params_for(&args.common)?;

    let separators = pick_separators(
        &g,
        &args.strategy,
        args.percent,
        &args.separators,
        s,
        args.common.seed,
    )?;
    eprintln!(
        "separators ({}): {}",
        separators.len(),
        separators
            .iter()
            .map(|v| (v + 1).to_string())
            .collect::<Vec<_>>()
            .join(",")
    );

    let report: ReachReport = if separators.is_empty() {
        reach::atm_k_restless_reach(&g, &rest, s, args.max_k, &params, false)?
    } else {
        reach::with_separators(&g, &rest, s, args.max_k, &separators, &params)?
    };

    let mut w = out_writer(&args.output)?;
    write_fraction_csv(&mut w, &report.min_time, g.tau(), separators.len())?;
    w.flush()?;
    Ok(ExitCode::SUCCESS)
}

fn cmd_baseline(args: BaselineArgs) -> Result<ExitCode> {
    init_threads(args.common.threads);
    let g = load_graph(&args.common.input)?;
    let s = parse_vertex(args.source, g.n())?;
    let rest = resolve_delta(&g, &args.delta, args.common.seed, &[s])?;

    let start = Instant::now();
    let r = brute::brute_force_reach(&g, &rest, s, args.k);
    let elapsed = start.elapsed().as_secs_f64();
    eprintln!("baseline_seconds {elapsed:.6}");

    let min_time = reach::min_reach_times(&r, &[s]);
    let mut w = out_writer(&args.output)?;
    write_min_times(&mut w, &min_time)?;
    w.flush()?;
    Ok(ExitCode::SUCCESS)
}

fn write_graph(g: &TemporalGraph, output: &Option<PathBuf>, stats: gen::GenStats) -> Result<()> {
    let mut w = out_writer(output)?;
    tgraph::write_edge_list(g, &mut w)?;
    w.flush()?;
    eprintln!(
        "generated n={} m={} tau={} (pairs={}, dropped {} self-loops, {} duplicates)",
        g.n(),
        g.num_edges(),
        g.tau(),
        stats.stub_pairs,
        stats.self_loops_dropped,
        stats.duplicates_dropped
    );
    Ok(())
}

fn cmd_gen_regular(args: GenRegularArgs) -> Result<ExitCode> {
    let (g, stats) = gen::gen_regular(args.n, args.d, args.tau, !args.undirected, args.seed)?;
    write_graph(&g, &args.output, stats)?;
    Ok(ExitCode::SUCCESS)
}

fn cmd_gen_powerlaw(args: GenPowerlawArgs) -> Result<ExitCode> {
    let (g, stats) = gen::gen_powerlaw(
        args.n,
        args.mean_degree,
        args.w,
        args.alpha,
        args.tau,
        !args.undirected,
        args.seed,
    )?;
    write_graph(&g, &args.output, stats)?;
    Ok(ExitCode::SUCCESS)
}

/// Rough working-set size of one oracle call, in bytes: two DP buffers over
/// the active cells per lane, the per-position edge coefficients, and the
/// slot table.
fn peak_bytes_estimate(g: &TemporalGraph, k: usize, lane_width: usize) -> u64 {
    let cells = g.num_cells() as u64;
    let m = g.num_edges() as u64;
    let n = g.n() as u64;
    let lanes = lane_width as u64;
    8 * (2 * lanes * cells + lanes * n + (k as u64) * n + (k as u64) * m + cells)
        + 24 * m
}

fn cmd_bench(args: BenchArgs) -> Result<ExitCode> {
    init_threads(0);
    let values: Vec<u64> = args
        .values
        .split(',')
        .filter(|t| !t.is_empty())
        .map(|t| t.trim().parse().map_err(|_| usage(format!("bad value {t:?}"))))
        .collect::<Result<_>>()?;
    if values.is_empty() {
        bail!("--values must list at least one point");
    }

    let generate = |n: usize, d: u32, seed: u64| -> Result<TemporalGraph> {
        let spec = match args.family.as_str() {
            "regular" => gen::GenSpec::Regular { n, d, tau: args.tau, directed: true, seed },
            _ => gen::GenSpec::Powerlaw {
                n,
                mean_degree: d,
                w: 50.min(d.max(2)),
                alpha: -1.0,
                tau: args.tau,
                directed: true,
                seed,
            },
        };
        Ok(spec.generate()?.0)
    };

    let time_reach = |g: &TemporalGraph, k: usize, delta: u32, seed: u64| -> Result<f64> {
        let rest = RestingTimes::uniform(g.n(), delta.min(g.tau()));
        let params = OracleParams {
            field: Field::gf64(),
            seed,
            lane_width: args.lane_width,
        };
        let mut samples = Vec::with_capacity(args.repeats);
        for rep in 0..args.repeats.max(1) {
            let s = RandomTape::new(seed).uniform(stream::INSTANCE, &[rep as u64], g.n() as u64)
                as u32;
            let start = Instant::now();
            let r = reach::k_restless_reach(g, &rest, s, k, &params)?;
            let dt = start.elapsed().as_secs_f64();
            std::hint::black_box(r);
            samples.push(dt);
        }
        samples.sort_by(|a, b| a.partial_cmp(b).unwrap());
        Ok(samples[samples.len() / 2])
    };

    let mut w = out_writer(&args.output)?;
    writeln!(w, "axis_value,seconds,peak_bytes_estimate")?;
    match args.axis.as_str() {
        "k" => {
            let g = generate(args.n, args.d, args.seed)?;
            for &k in &values {
                let secs = time_reach(&g, k as usize, args.delta, args.seed)?;
                let bytes = peak_bytes_estimate(&g, k as usize, args.lane_width);
                writeln!(w, "{k},{secs:.6},{bytes}")?;
            }
        }
        "edges" => {
            for &n in &values {
                let g = generate(n as usize, args.d, args.seed)?;
                let secs = time_reach(&g, args.k, args.delta, args.seed)?;
                let bytes = peak_bytes_estimate(&g, args.k, args.lane_width);
                writeln!(w, "{},{secs:.6},{bytes}", g.num_edges())?;
            }
        }
        "delta" => {
            let g = generate(args.n, args.d, args.seed)?;
            for &d in &values {
                let secs = time_reach(&g, args.k, d as u32, args.seed)?;
                let bytes = peak_bytes_estimate(&g, args.k, args.lane_width);
                writeln!(w, "{d},{secs:.6},{bytes}")?;
            }
        }
        "density" => {
            // Fixed edge budget spread over fewer, denser vertices.
            for &d in &values {
                let n = (args.n / d as usize).max(d as usize + 1);
                let g = generate(n, d as u32, args.seed)?;
                let secs = time_reach(&g, args.k, args.delta, args.seed)?;
                let bytes = peak_bytes_estimate(&g, args.k, args.lane_width);
                writeln!(w, "{d},{secs:.6},{bytes}")?;
            }
        }
        other => bail!("unknown axis {other}"),
    }
    w.flush()?;
    Ok(ExitCode::SUCCESS)
}
