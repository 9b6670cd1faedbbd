//! The algorithmic core: a generating-polynomial dynamic program over
//! restless walks, evaluated per (vertex, timestamp) as a multilinear sieve.
//!
//! A walk of k vertices is encoded as a monomial over per-vertex and
//! per-edge-use variables; the monomial is multilinear exactly when the walk
//! is a path. Summing evaluations over all 2^k subset substitutions of the
//! vertex variables cancels, in characteristic 2, every monomial that
//! repeats a vertex — and, with shaded color variables, every monomial whose
//! colors disagree with the query multiset. A nonzero accumulated cell
//! (u, i) therefore certifies a restless path of length k-1 ending at u at
//! time i; misses happen with probability at most (2k-1)/2^b per cell.
//!
//! Subsets are walked in Gray-code order (one slot flips per step, so the
//! substituted vertex values update incrementally) and evaluated in lanes of
//! `lane_width` subsets per dynamic-programming pass. The DP tables hold one
//! field element per lane per active cell, cells sorted by vertex and
//! time-contiguous within a vertex.

use std::collections::BTreeMap;
use std::ops::Range;

use rayon::prelude::*;
use thiserror::Error;

use crate::ff::{stream, Field, FieldElement, RandomTape};
use crate::tgraph::{RestingTimes, TemporalGraph};

/// Multiset of vertex colors a path must realize bijectively.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct ColorMultiset {
    counts: BTreeMap<u32, u32>,
}

impl ColorMultiset {
    pub fn new() -> ColorMultiset {
        ColorMultiset::default()
    }

    pub fn from_pairs(pairs: impl IntoIterator<Item = (u32, u32)>) -> ColorMultiset {
        let mut m = ColorMultiset::new();
        for (color, mult) in pairs {
            if mult > 0 {
                *m.counts.entry(color).or_insert(0) += mult;
            }
        }
        m
    }

    pub fn from_colors(colors: impl IntoIterator<Item = u32>) -> ColorMultiset {
        Self::from_pairs(colors.into_iter().map(|c| (c, 1)))
    }

    pub fn insert(&mut self, color: u32) {
        *self.counts.entry(color).or_insert(0) += 1;
    }

    /// Removes one occurrence; false if the color is absent.
    pub fn remove_one(&mut self, color: u32) -> bool {
        match self.counts.get_mut(&color) {
            Some(c) if *c > 1 => {
                *c -= 1;
                true
            }
            Some(_) => {
                self.counts.remove(&color);
                true
            }
            None => false,
        }
    }

    pub fn multiplicity(&self, color: u32) -> u32 {
        self.counts.get(&color).copied().unwrap_or(0)
    }

    pub fn contains(&self, color: u32) -> bool {
        self.multiplicity(color) > 0
    }

    /// Total size k = sum of multiplicities.
    pub fn total(&self) -> usize {
        self.counts.values().map(|&c| c as usize).sum()
    }

    pub fn iter(&self) -> impl Iterator<Item = (u32, u32)> + '_ {
        self.counts.iter().map(|(&c, &m)| (c, m))
    }
}

/// Disjoint shade-id ranges, one per color of the query multiset; color s
/// owns multiplicity-of-s consecutive shades, `total` shades overall.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ShadeTable {
    ranges: BTreeMap<u32, Range<u32>>,
    total: u32,
}

/// Assigns each color of `motif` its own contiguous block of shade ids.
pub fn assign_shades(motif: &ColorMultiset) -> ShadeTable {
    let mut ranges = BTreeMap::new();
    let mut next = 0u32;
    for (color, mult) in motif.iter() {
        ranges.insert(color, next..next + mult);
        next += mult;
    }
    ShadeTable { ranges, total: next }
}

impl ShadeTable {
    /// Shades of `color`; empty when the color is not in the multiset.
    pub fn shades_of(&self, color: u32) -> Range<u32> {
        self.ranges.get(&color).cloned().unwrap_or(0..0)
    }

    pub fn total(&self) -> u32 {
        self.total
    }
}

/// Boolean n x tau matrix R plus the derived reachable-vertex set: cell
/// (u, i) is set when a qualifying restless path ends at u at time i.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ReachabilityResult {
    n: usize,
    tau: u32,
    words: Vec<u64>,
}

impl ReachabilityResult {
    pub fn new_empty(n: usize, tau: u32) -> ReachabilityResult {
        let bits = n * tau as usize;
        ReachabilityResult {
            n,
            tau,
            words: vec![0; bits.div_ceil(64)],
        }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn tau(&self) -> u32 {
        self.tau
    }

    fn bit(&self, v: u32, t: u32) -> usize {
        debug_assert!(t >= 1 && t <= self.tau);
        v as usize * self.tau as usize + (t as usize - 1)
    }

    pub fn set(&mut self, v: u32, t: u32) {
        let b = self.bit(v, t);
        self.words[b / 64] |= 1 << (b % 64);
    }

    pub fn get(&self, v: u32, t: u32) -> bool {
        let b = self.bit(v, t);
        self.words[b / 64] >> (b % 64) & 1 == 1
    }

    pub fn union_with(&mut self, other: &ReachabilityResult) {
        assert_eq!((self.n, self.tau), (other.n, other.tau));
        for (w, o) in self.words.iter_mut().zip(&other.words) {
            *w |= o;
        }
    }

    pub fn is_all_zero(&self) -> bool {
        self.words.iter().all(|&w| w == 0)
    }

    /// Earliest set timestamp in row v.
    pub fn min_time(&self, v: u32) -> Option<u32> {
        (1..=self.tau).find(|&t| self.get(v, t))
    }

    /// The set D of vertices with any set cell.
    pub fn reached_vertices(&self) -> Vec<u32> {
        (0..self.n as u32)
            .filter(|&v| self.min_time(v).is_some())
            .collect()
    }

    /// Copy keeping only the rows of the first `n` vertices; used to strip
    /// helper vertices introduced by the problem reductions.
    pub fn restricted(&self, n: usize) -> ReachabilityResult {
        assert!(n <= self.n);
        let mut out = ReachabilityResult::new_empty(n, self.tau);
        for v in 0..n as u32 {
            for t in 1..=self.tau {
                if self.get(v, t) {
                    out.set(v, t);
                }
            }
        }
        out
    }

    /// All set (vertex, timestamp) cells, sorted.
    pub fn set_cells(&self) -> Vec<(u32, u32)> {
        let mut out = Vec::new();
        for v in 0..self.n as u32 {
            for t in 1..=self.tau {
                if self.get(v, t) {
                    out.push((v, t));
                }
            }
        }
        out
    }
}

/// Query mode: unconstrained path detection, or detection of paths whose
/// vertex colors agree with a multiset.
#[derive(Debug, Clone)]
pub enum SieveMode {
    /// Any restless path of the requested length; vertex variables are drawn
    /// directly per (vertex, slot).
    Plain,
    /// Paths whose colors agree with `motif`; vertex variables are built
    /// from shaded color products so disagreeing monomials cancel.
    Constrained { motif: ColorMultiset, coloring: Vec<u32> },
}

/// Parameters of one oracle evaluation.
#[derive(Debug, Clone)]
pub struct SieveConfig {
    /// Number of walk vertices; the path searched for has length k-1.
    pub k: usize,
    pub field: Field,
    pub seed: u64,
    /// Subsets evaluated per DP pass.
    pub lane_width: usize,
    pub mode: SieveMode,
}

pub const DEFAULT_LANE_WIDTH: usize = 8;

impl SieveConfig {
    pub fn plain(k: usize, seed: u64) -> SieveConfig {
        SieveConfig {
            k,
            field: Field::gf64(),
            seed,
            lane_width: DEFAULT_LANE_WIDTH,
            mode: SieveMode::Plain,
        }
    }

    pub fn constrained(
        k: usize,
        seed: u64,
        motif: ColorMultiset,
        coloring: Vec<u32>,
    ) -> SieveConfig {
        SieveConfig {
            k,
            field: Field::gf64(),
            seed,
            lane_width: DEFAULT_LANE_WIDTH,
            mode: SieveMode::Constrained { motif, coloring },
        }
    }
}

#[derive(Debug, Error)]
pub enum SieveError {
    #[error("k must be at least 1")]
    ZeroK,
    #[error("k={0} exceeds the supported maximum of 60")]
    KTooLarge(usize),
    #[error("coloring covers {got} vertices, graph has {expected}")]
    ColoringLength { expected: usize, got: usize },
    #[error("multiset size {total} does not match k={k}")]
    MotifSize { k: usize, total: usize },
    #[error("resting times cover {got} vertices, graph has {expected}")]
    RestingLength { expected: usize, got: usize },
    #[error("resting times must lie in 1..=tau")]
    RestingRange,
}

/// Per-(vertex, slot) substituted values z_{u,j}, laid out slot-major.
pub fn z_slot_table(
    mode: &SieveMode,
    n: usize,
    k: usize,
    field: &Field,
    tape: &RandomTape,
) -> Vec<FieldElement> {
    let mut table = vec![0u64; k * n];
    match mode {
        SieveMode::Plain => {
            for j in 0..k {
                for u in 0..n {
                    table[j * n + u] = tape.draw(field, stream::PLAIN_Z, &[u as u64, j as u64]);
                }
            }
        }
        SieveMode::Constrained { motif, coloring } => {
            let shades = assign_shades(motif);
            for u in 0..n {
                let range = shades.shades_of(coloring[u]);
                for d in range {
                    let gamma = tape.draw(field, stream::GAMMA, &[u as u64, d as u64]);
                    for j in 0..k {
                        let omega = tape.draw(field, stream::OMEGA, &[d as u64, j as u64]);
                        table[j * n + u] ^= field.mul(gamma, omega);
                    }
                }
            }
        }
    }
    table
}

/// Substituted vertex values for one subset L of slots (given as a bitmask):
/// z_u^L = sum over j in L of z_{u,j}. Evaluates the defining sum directly;
/// the oracle's incremental Gray-code updates must agree with it.
pub fn z_assignment(
    mode: &SieveMode,
    n: usize,
    k: usize,
    subset: u64,
    field: &Field,
    tape: &RandomTape,
) -> Vec<FieldElement> {
    let table = z_slot_table(mode, n, k, field, tape);
    let mut out = vec![0u64; n];
    for j in 0..k {
        if subset >> j & 1 == 1 {
            for u in 0..n {
                out[u] ^= table[j * n + u];
            }
        }
    }
    out
}

fn validate(
    g: &TemporalGraph,
    rest: &RestingTimes,
    cfg: &SieveConfig,
) -> Result<(), SieveError> {
    if cfg.k == 0 {
        return Err(SieveError::ZeroK);
    }
    if cfg.k > 60 {
        return Err(SieveError::KTooLarge(cfg.k));
    }
    if rest.len() != g.n() {
        return Err(SieveError::RestingLength { expected: g.n(), got: rest.len() });
    }
    if !rest.valid_for(g.tau()) {
        return Err(SieveError::RestingRange);
    }
    if let SieveMode::Constrained { motif, coloring } = &cfg.mode {
        if coloring.len() != g.n() {
            return Err(SieveError::ColoringLength {
                expected: g.n(),
                got: coloring.len(),
            });
        }
        let total = motif.total();
        if total != cfg.k {
            return Err(SieveError::MotifSize { k: cfg.k, total });
        }
    }
    Ok(())
}

/// The fine-grained decision oracle.
///
/// Returns the n x tau matrix with cell (u, i) set iff the accumulated
/// sieve evaluation at (u, i) is nonzero, which certifies — with zero false
/// positives — a restless path of length k-1 ending at u at time i whose
/// vertex colors agree with the query (constrained mode) or are arbitrary
/// (plain mode). Runs in O(2^k k m Delta) time with
/// O((lane_width + k)(n + m)) field elements of working state.
pub fn evaluate_oracle(
    g: &TemporalGraph,
    rest: &RestingTimes,
    cfg: &SieveConfig,
) -> Result<ReachabilityResult, SieveError> {
    validate(g, rest, cfg)?;
    let n = g.n();
    let tau = g.tau();
    let k = cfg.k;
    let field = cfg.field;
    let tape = RandomTape::new(cfg.seed);

    // More walk vertices than graph vertices: no path can exist.
    if k > n {
        return Ok(ReachabilityResult::new_empty(n, tau));
    }

    let zslot = z_slot_table(&cfg.mode, n, k, &field, &tape);

    if k == 1 {
        // Single-vertex walks: the accumulated evaluation over L in {{}, {1}}
        // is z_{u,1}, independent of the timestamp.
        let mut r = ReachabilityResult::new_empty(n, tau);
        for u in 0..n as u32 {
            if zslot[u as usize] != 0 {
                for t in 1..=tau {
                    r.set(u, t);
                }
            }
        }
        return Ok(r);
    }

    let cells = g.cells();
    let edges = g.edges();
    let num_cells = cells.len();
    let m = edges.len();

    // Paths of one or more edges need at least one in-edge cell.
    if num_cells == 0 {
        return Ok(ReachabilityResult::new_empty(n, tau));
    }

    // First-edge coefficients: the length-0 prefix ends at the edge source at
    // every timestamp, so each admissible fictitious arrival a contributes a
    // distinct draw keyed by (edge, position 1, a). Summed here once; lanes
    // only scale the total by z values.
    let mut first_y = vec![0u64; m];
    // Slot window per edge for the deeper stages: positions of the source's
    // cells whose time lies in [t - delta(src), t].
    let mut window = vec![(0u32, 0u32); m];
    for (ei, e) in edges.iter().enumerate() {
        let d = rest.get(e.src);
        let lo_t = e.t.saturating_sub(d).max(1);
        let mut acc = 0u64;
        for a in lo_t..=e.t {
            acc ^= tape.draw(
                &field,
                stream::EDGE_FIRST,
                &[e.src as u64, e.dst as u64, e.t as u64, a as u64],
            );
        }
        first_y[ei] = acc;

        let vc = g.vertex_cells(e.src);
        let cells_of_src = &cells[vc.clone()];
        let lo = cells_of_src.partition_point(|&(_, ct)| ct < lo_t);
        let hi = cells_of_src.partition_point(|&(_, ct)| ct <= e.t);
        window[ei] = ((vc.start + lo) as u32, (vc.start + hi) as u32);
    }

    // Edge-use coefficients for positions 2..k-1, keyed by edge identity.
    let deep_positions = k.saturating_sub(2);
    let mut deep_y = vec![0u64; deep_positions * m];
    for pos in 2..k {
        let row = &mut deep_y[(pos - 2) * m..(pos - 1) * m];
        for (ei, e) in edges.iter().enumerate() {
            row[ei] = tape.draw(
                &field,
                stream::EDGE_POS,
                &[e.src as u64, e.dst as u64, e.t as u64, pos as u64],
            );
        }
    }

    let subsets: u64 = 1 << k;
    let width = cfg.lane_width.max(1).min(subsets as usize);

    let mut running_z = vec![0u64; n]; // z^L for the Gray code at step 0: L = {}
    let mut zrow = vec![0u64; width * n];
    let mut prev = vec![0u64; width * num_cells];
    let mut cur = vec![0u64; width * num_cells];
    let mut acc = vec![0u64; num_cells];

    let mut subset_index = 0u64;
    while subset_index < subsets {
        let lanes = width.min((subsets - subset_index) as usize);
        for lane in 0..lanes {
            let s = subset_index + lane as u64;
            if s > 0 {
                let flipped = s.trailing_zeros() as usize;
                let slot_row = &zslot[flipped * n..(flipped + 1) * n];
                for (r, &z) in running_z.iter_mut().zip(slot_row) {
                    *r ^= z;
                }
            }
            zrow[lane * n..(lane + 1) * n].copy_from_slice(&running_z);
        }

        // Stage 2: walks of one edge, base-case prefixes folded into first_y.
        cur.par_chunks_mut(num_cells)
            .zip(zrow.par_chunks(n))
            .take(lanes)
            .for_each(|(lane_cur, z)| {
                for ci in 0..num_cells {
                    let (u, _) = cells[ci];
                    let er = g.cell_edge_range(ci);
                    let mut s = 0u64;
                    for (e, &y1) in edges[er.clone()].iter().zip(&first_y[er]) {
                        let zv = z[e.src as usize];
                        if zv != 0 {
                            s ^= field.mul(y1, zv);
                        }
                    }
                    lane_cur[ci] = if s == 0 { 0 } else { field.mul(z[u as usize], s) };
                }
            });

        for stage in 3..=k {
            std::mem::swap(&mut prev, &mut cur);
            let ytab = &deep_y[(stage - 3) * m..(stage - 2) * m];
            let prev_ref = &prev;
            cur.par_chunks_mut(num_cells)
                .zip(zrow.par_chunks(n))
                .take(lanes)
                .enumerate()
                .for_each(|(lane, (lane_cur, z))| {
                    let lane_prev = &prev_ref[lane * num_cells..(lane + 1) * num_cells];
                    for ci in 0..num_cells {
                        let (u, _) = cells[ci];
                        let er = g.cell_edge_range(ci);
                        let mut s = 0u64;
                        for (&(lo, hi), &y) in window[er.clone()].iter().zip(&ytab[er]) {
                            let mut tot = 0u64;
                            for &p in &lane_prev[lo as usize..hi as usize] {
                                tot ^= p;
                            }
                            if tot != 0 {
                                s ^= field.mul(y, tot);
                            }
                        }
                        lane_cur[ci] = if s == 0 { 0 } else { field.mul(z[u as usize], s) };
                    }
                });
        }

        for lane in 0..lanes {
            let lane_cur = &cur[lane * num_cells..(lane + 1) * num_cells];
            for (a, &c) in acc.iter_mut().zip(lane_cur) {
                *a ^= c;
            }
        }
        subset_index += lanes as u64;
    }

    let mut r = ReachabilityResult::new_empty(n, tau);
    for (ci, &a) in acc.iter().enumerate() {
        if a != 0 {
            let (v, t) = cells[ci];
            r.set(v, t);
        }
    }
    Ok(r)
}

/// Outcome of the small-field miss-rate measurement.
#[derive(Debug, Clone, Copy)]
pub struct FalseNegativeReport {
    pub trials: usize,
    pub misses: usize,
    pub false_positive_cells: usize,
}

impl FalseNegativeReport {
    pub fn miss_rate(&self) -> f64 {
        self.misses as f64 / self.trials as f64
    }
}

/// Runs `trials` random single-source instances that provably contain a
/// restless path of k-1 edges, queries the sieve at width `b_small`, and
/// counts how often the confirmed cell is missed. Every sieve-certified cell
/// is cross-checked against the exact search; disagreements count as false
/// positives (expected: none, at any width).
pub fn oracle_false_negative_rate(
    trials: usize,
    b_small: u32,
    k: usize,
    seed: u64,
) -> Result<FalseNegativeReport, SieveError> {
    use crate::{brute, gen, reach};

    let field = Field::new(b_small).map_err(|_| SieveError::ZeroK)?;
    let master = RandomTape::new(seed);
    let mut misses = 0usize;
    let mut false_positive_cells = 0usize;
    let mut done = 0usize;
    let mut attempt = 0u64;
    while done < trials {
        attempt += 1;
        let tape = master.descend(stream::INSTANCE, &[attempt]);
        let n = 6 + tape.uniform(1, &[0], 9) as usize;
        let m = n + tape.uniform(1, &[1], 2 * n as u64) as usize;
        let tau = 3 + tape.uniform(1, &[2], 6) as u32;
        let max_delta = 1 + tape.uniform(1, &[3], 3) as u32;
        let g = gen::gen_uniform(n, m, tau, tape.seed());
        let rest = RestingTimes::random_uniform(n, max_delta, &tape);
        let s = tape.uniform(1, &[4], n as u64) as u32;

        let uniform_coloring = vec![1u32; n];
        let motif = ColorMultiset::from_pairs([(1, k as u32)]);
        let exact = brute::brute_force_motif(&g, &rest, &uniform_coloring, &motif, s);
        let Some(&confirmed) = exact.iter().next() else {
            continue;
        };
        done += 1;

        let params = reach::OracleParams {
            field,
            seed: tape.draw64(stream::STEP, &[0]),
            lane_width: DEFAULT_LANE_WIDTH,
        };
        let r = reach::k_restless_reach(&g, &rest, s, k, &params)
            .expect("valid instance");
        if !r.get(confirmed.0, confirmed.1) {
            misses += 1;
        }
        for (v, t) in r.set_cells() {
            if !exact.contains(&(v, t)) {
                false_positive_cells += 1;
            }
        }
    }
    Ok(FalseNegativeReport { trials, misses, false_positive_cells })
}
