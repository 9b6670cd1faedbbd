//! Problem-level reductions over the fine-grained oracle: exact-length,
//! bounded-length, and unbounded restless reachability, color-constrained
//! (motif) queries, multi-source wrapping, and separator exclusion.
//!
//! Every reduction colors vertices so that the query's source discipline is
//! enforced by the multiset constraint, then delegates to
//! [`sieve::evaluate_oracle`].

use thiserror::Error;

use crate::ff::{stream, Field, RandomTape};
use crate::sieve::{
    self, ColorMultiset, ReachabilityResult, SieveConfig, SieveError, SieveMode,
    DEFAULT_LANE_WIDTH,
};
use crate::tgraph::{RestingTimes, TemporalEdge, TemporalGraph};

/// Field, seed, and lane width shared by the oracle calls of one query.
#[derive(Debug, Clone, Copy)]
pub struct OracleParams {
    pub field: Field,
    pub seed: u64,
    pub lane_width: usize,
}

impl OracleParams {
    pub fn new(seed: u64) -> OracleParams {
        OracleParams {
            field: Field::gf64(),
            seed,
            lane_width: DEFAULT_LANE_WIDTH,
        }
    }
}

#[derive(Debug, Error)]
pub enum ReachError {
    #[error(transparent)]
    Sieve(#[from] SieveError),
    #[error("k={k} out of range, need 2 <= k <= n={n}")]
    BadK { k: usize, n: usize },
    #[error("vertex {0} out of range")]
    BadVertex(u32),
    #[error("source set must be nonempty")]
    NoSources,
    #[error("sources and separators must be disjoint")]
    SourceIsSeparator,
    #[error("motif queries take exactly one source and no separators")]
    MotifShape,
    #[error("separator queries run in at-most-k mode from a single source")]
    SeparatorShape,
}

/// Length discipline of a reachability query.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum QueryMode {
    /// Paths of length exactly k-1.
    Exact(usize),
    /// Paths of length at most k-1.
    AtMost(usize),
    /// Any length, capped only by the vertex count (or an explicit budget).
    Unbounded,
}

/// Union reachability across the queried lengths, with per-vertex earliest
/// reach times. Sources count as reached at time 0 by convention; their
/// matrix rows only ever hold genuine hits from other sources.
#[derive(Debug, Clone)]
pub struct ReachReport {
    pub r: ReachabilityResult,
    pub sources: Vec<u32>,
    pub min_time: Vec<Option<u32>>,
    pub per_k: Option<Vec<(usize, ReachabilityResult)>>,
    pub oracle_calls: usize,
}

impl ReachReport {
    /// The set D' of reached vertices, sources included.
    pub fn reached(&self) -> Vec<u32> {
        (0..self.min_time.len() as u32)
            .filter(|&v| self.min_time[v as usize].is_some())
            .collect()
    }
}

/// Earliest reach timestamp per vertex: 0 for sources, the smallest set
/// column otherwise, None when unreached.
pub fn min_reach_times(r: &ReachabilityResult, sources: &[u32]) -> Vec<Option<u32>> {
    let mut out: Vec<Option<u32>> = (0..r.n() as u32).map(|v| r.min_time(v)).collect();
    for &s in sources {
        out[s as usize] = Some(0);
    }
    out
}

fn finalize(
    r: ReachabilityResult,
    sources: Vec<u32>,
    per_k: Option<Vec<(usize, ReachabilityResult)>>,
    oracle_calls: usize,
) -> ReachReport {
    let min_time = min_reach_times(&r, &sources);
    ReachReport { r, sources, min_time, per_k, oracle_calls }
}

fn check_vertex(g: &TemporalGraph, v: u32) -> Result<(), ReachError> {
    if (v as usize) < g.n() {
        Ok(())
    } else {
        Err(ReachError::BadVertex(v))
    }
}

fn call_config(params: &OracleParams, k: usize, motif: ColorMultiset, coloring: Vec<u32>) -> SieveConfig {
    // Calls at different lengths get independent draw streams.
    let seed = RandomTape::new(params.seed).draw64(stream::STEP, &[k as u64]);
    SieveConfig {
        k,
        field: params.field,
        seed,
        lane_width: params.lane_width,
        mode: SieveMode::Constrained { motif, coloring },
    }
}

/// Induced temporal subgraph on the vertices whose color occurs in the
/// multiset; n is unchanged, edges touching excluded vertices are dropped.
/// Oracle answers are unaffected, the excluded vertices cannot lie on an
/// agreeing path.
pub fn prune_by_colors(
    g: &TemporalGraph,
    coloring: &[u32],
    motif: &ColorMultiset,
) -> TemporalGraph {
    g.filtered(|e| {
        motif.contains(coloring[e.src as usize]) && motif.contains(coloring[e.dst as usize])
    })
}

/// Vertices reachable from s via a restless path whose colors agree with
/// the multiset: super-source construction with a fresh color enforcing the
/// origin. The returned matrix certifies end times per vertex.
pub fn k_restless_motif_reach(
    g: &TemporalGraph,
    rest: &RestingTimes,
    coloring: &[u32],
    motif: &ColorMultiset,
    s: u32,
    params: &OracleParams,
) -> Result<ReachabilityResult, ReachError> {
    check_vertex(g, s)?;
    let k = motif.total();
    // Reach problems ask for at least one edge.
    if k < 2 {
        return Ok(ReachabilityResult::new_empty(g.n(), g.tau()));
    }
    let pruned = prune_by_colors(g, coloring, motif);
    let departures: Vec<u32> = {
        let mut ts: Vec<u32> = pruned
            .edges()
            .iter()
            .filter(|e| e.src == s)
            .map(|e| e.t)
            .collect();
        ts.sort_unstable();
        ts.dedup();
        ts
    };
    if departures.is_empty() {
        return Ok(ReachabilityResult::new_empty(g.n(), g.tau()));
    }

    let super_source = pruned.n() as u32;
    let extra: Vec<TemporalEdge> = departures
        .iter()
        .map(|&t| TemporalEdge::new(super_source, s, t))
        .collect();
    let g2 = pruned.with_extra_vertex(extra);

    let fresh = coloring
        .iter()
        .copied()
        .chain(motif.iter().map(|(c, _)| c))
        .max()
        .unwrap_or(0)
        + 1;
    let mut coloring2 = coloring.to_vec();
    coloring2.push(fresh);
    let mut motif2 = motif.clone();
    motif2.insert(fresh);
    let mut rest2 = rest.clone();
    rest2.push(g.tau());

    let cfg = call_config(params, k + 1, motif2, coloring2);
    let r = sieve::evaluate_oracle(&g2, &rest2, &cfg)?;
    Ok(r.restricted(g.n()))
}

/// Vertices reachable from s via a restless path of length exactly k-1:
/// two colors, the source unique and its in-edges removed.
pub fn k_restless_reach(
    g: &TemporalGraph,
    rest: &RestingTimes,
    s: u32,
    k: usize,
    params: &OracleParams,
) -> Result<ReachabilityResult, ReachError> {
    check_vertex(g, s)?;
    if k < 2 || k > g.n() {
        return Err(ReachError::BadK { k, n: g.n() });
    }
    let g2 = g.filtered(|e| e.dst != s);
    let mut coloring = vec![1u32; g.n()];
    coloring[s as usize] = 2;
    let motif = ColorMultiset::from_pairs([(1, k as u32 - 1), (2, 1)]);
    let cfg = call_config(params, k, motif, coloring);
    Ok(sieve::evaluate_oracle(&g2, rest, &cfg)?)
}

/// Shared union loop for bounded and unbounded single-source queries,
/// optionally excluding separator vertices via a third color. Stops early
/// once some exact length yields nothing: every longer restless path has a
/// restless prefix of every shorter length.
fn union_over_lengths(
    g: &TemporalGraph,
    rest: &RestingTimes,
    s: u32,
    max_vertices: usize,
    separators: &[u32],
    params: &OracleParams,
    keep_per_k: bool,
) -> Result<ReachReport, ReachError> {
    check_vertex(g, s)?;
    for &v in separators {
        check_vertex(g, v)?;
        if v == s {
            return Err(ReachError::SourceIsSeparator);
        }
    }
    let g2 = g.filtered(|e| e.dst != s);
    let mut base_coloring = vec![1u32; g.n()];
    base_coloring[s as usize] = 2;
    for &v in separators {
        base_coloring[v as usize] = 3;
    }

    let cap = max_vertices.min(g.n());
    let mut union = ReachabilityResult::new_empty(g.n(), g.tau());
    let mut per_k = keep_per_k.then(Vec::new);
    let mut calls = 0usize;
    for len in 2..=cap {
        let motif = ColorMultiset::from_pairs([(1, len as u32 - 1), (2, 1)]);
        let cfg = call_config(params, len, motif, base_coloring.clone());
        let r = sieve::evaluate_oracle(&g2, rest, &cfg)?;
        calls += 1;
        let empty = r.is_all_zero();
        union.union_with(&r);
        if let Some(per) = per_k.as_mut() {
            per.push((len, r));
        }
        if empty {
            break;
        }
    }
    Ok(finalize(union, vec![s], per_k, calls))
}

/// Restless reachability from s at any path length.
pub fn restless_reach(
    g: &TemporalGraph,
    rest: &RestingTimes,
    s: u32,
    params: &OracleParams,
    max_k: Option<usize>,
) -> Result<ReachReport, ReachError> {
    union_over_lengths(g, rest, s, max_k.unwrap_or(g.n()), &[], params, false)
}

/// Restless reachability from s with paths of length at most k-1.
pub fn atm_k_restless_reach(
    g: &TemporalGraph,
    rest: &RestingTimes,
    s: u32,
    k: usize,
    params: &OracleParams,
    keep_per_k: bool,
) -> Result<ReachReport, ReachError> {
    if k < 2 {
        return Err(ReachError::BadK { k, n: g.n() });
    }
    union_over_lengths(g, rest, s, k, &[], params, keep_per_k)
}

/// At-most-k reachability that forbids the separator vertices from lying on
/// any path: separators get a color outside the multiset, so their rows stay
/// zero and no certified path crosses them.
pub fn with_separators(
    g: &TemporalGraph,
    rest: &RestingTimes,
    s: u32,
    k: usize,
    separators: &[u32],
    params: &OracleParams,
) -> Result<ReachReport, ReachError> {
    if k < 2 {
        return Err(ReachError::BadK { k, n: g.n() });
    }
    union_over_lengths(g, rest, s, k, separators, params, false)
}

/// Multi-source reachability: a super-source adjacent to every source at its
/// departure times, queried with the length budget shifted by one, then
/// restricted back to the original vertices. Sources are reported reachable
/// at time 0.
pub fn multi_source_wrap(
    g: &TemporalGraph,
    rest: &RestingTimes,
    sources: &[u32],
    mode: QueryMode,
    params: &OracleParams,
    max_k: Option<usize>,
) -> Result<ReachReport, ReachError> {
    if sources.is_empty() {
        return Err(ReachError::NoSources);
    }
    let mut sources: Vec<u32> = sources.to_vec();
    sources.sort_unstable();
    sources.dedup();
    for &s in &sources {
        check_vertex(g, s)?;
    }

    let super_source = g.n() as u32;
    let mut extra: Vec<TemporalEdge> = Vec::new();
    for &s in &sources {
        let mut ts: Vec<u32> = g.edges().iter().filter(|e| e.src == s).map(|e| e.t).collect();
        ts.sort_unstable();
        ts.dedup();
        extra.extend(ts.into_iter().map(|t| TemporalEdge::new(super_source, s, t)));
    }
    let g2 = g.with_extra_vertex(extra);
    let mut rest2 = rest.clone();
    rest2.push(g.tau());

    let mut coloring = vec![1u32; g2.n()];
    coloring[super_source as usize] = 2;

    // Original length l maps to a super-source walk of l+2 vertices; the
    // two-vertex walk (the super edge alone) is the time-0 convention, not a
    // matrix entry, so lengths start at 3.
    let (lo, hi) = match mode {
        QueryMode::Exact(k) => {
            if k < 2 || k > g.n() {
                return Err(ReachError::BadK { k, n: g.n() });
            }
            (k + 1, k + 1)
        }
        QueryMode::AtMost(k) => {
            if k < 2 {
                return Err(ReachError::BadK { k, n: g.n() });
            }
            (3, (k + 1).min(g2.n()))
        }
        QueryMode::Unbounded => (3, max_k.map(|k| k + 1).unwrap_or(g2.n()).min(g2.n())),
    };

    let mut union = ReachabilityResult::new_empty(g2.n(), g2.tau());
    let mut calls = 0usize;
    for len in lo..=hi {
        let motif = ColorMultiset::from_pairs([(1, len as u32 - 1), (2, 1)]);
        let cfg = call_config(params, len, motif, coloring.clone());
        let r = sieve::evaluate_oracle(&g2, &rest2, &cfg)?;
        calls += 1;
        let empty = r.is_all_zero();
        union.union_with(&r);
        if empty {
            break;
        }
    }
    Ok(finalize(union.restricted(g.n()), sources, None, calls))
}

/// A fully described reachability query; mirrors the CLI surface.
#[derive(Debug, Clone)]
pub struct ReachQuery {
    pub sources: Vec<u32>,
    pub mode: QueryMode,
    pub motif: Option<(ColorMultiset, Vec<u32>)>,
    pub separators: Vec<u32>,
    pub keep_per_k: bool,
    pub max_k: Option<usize>,
}

/// Dispatches a query to the matching reduction.
pub fn solve(
    g: &TemporalGraph,
    rest: &RestingTimes,
    q: &ReachQuery,
    params: &OracleParams,
) -> Result<ReachReport, ReachError> {
    if q.sources.is_empty() {
        return Err(ReachError::NoSources);
    }
    if q.sources.iter().any(|s| q.separators.contains(s)) {
        return Err(ReachError::SourceIsSeparator);
    }

    if let Some((motif, coloring)) = &q.motif {
        if q.sources.len() != 1 || !q.separators.is_empty() {
            return Err(ReachError::MotifShape);
        }
        let s = q.sources[0];
        let r = k_restless_motif_reach(g, rest, coloring, motif, s, params)?;
        return Ok(finalize(r, vec![s], None, 1));
    }

    if !q.separators.is_empty() {
        let k = match q.mode {
            QueryMode::AtMost(k) => k,
            QueryMode::Unbounded => q.max_k.unwrap_or(g.n()),
            QueryMode::Exact(_) => return Err(ReachError::SeparatorShape),
        };
        if q.sources.len() != 1 {
            return Err(ReachError::SeparatorShape);
        }
        return with_separators(g, rest, q.sources[0], k, &q.separators, params);
    }

    if q.sources.len() > 1 {
        return multi_source_wrap(g, rest, &q.sources, q.mode, params, q.max_k);
    }

    let s = q.sources[0];
    match q.mode {
        QueryMode::Exact(k) => {
            let r = k_restless_reach(g, rest, s, k, params)?;
            Ok(finalize(r, vec![s], None, 1))
        }
        QueryMode::AtMost(k) => atm_k_restless_reach(g, rest, s, k, params, q.keep_per_k),
        QueryMode::Unbounded => restless_reach(g, rest, s, params, q.max_k),
    }
}
