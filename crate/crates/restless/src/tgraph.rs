//! Temporal graph model: ingestion, in-neighbor indexing, delta-expansion,
//! and restless-walk reference reachability.
//!
//! Vertices are 0-based internally and 1-based in files. Timestamps run
//! 1..=tau. Duplicate (src, dst, t) triples and self-loops are dropped at
//! construction: duplicates would silently XOR-cancel in the sieve, and a
//! self-loop can never lie on a path.

use std::collections::VecDeque;
use std::io::{self, BufRead, Write};

use thiserror::Error;

use crate::ff::{stream, RandomTape};

/// Directed temporal edge (src, dst, t) with t in 1..=tau.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct TemporalEdge {
    pub src: u32,
    pub dst: u32,
    pub t: u32,
}

impl TemporalEdge {
    pub fn new(src: u32, dst: u32, t: u32) -> TemporalEdge {
        TemporalEdge { src, dst, t }
    }
}

#[derive(Debug, Error)]
pub enum GraphError {
    #[error("vertex {v} out of range for n={n}")]
    VertexOutOfRange { v: u32, n: usize },
    #[error("timestamp {t} out of range for tau={tau}")]
    TimestampOutOfRange { t: u32, tau: u32 },
    #[error("graph dimensions must satisfy n >= 1 and tau >= 1")]
    BadDimensions,
}

#[derive(Debug, Error)]
pub enum ParseError {
    #[error("read failed: {0}")]
    Io(#[from] io::Error),
    #[error("line {line}: {msg}")]
    Malformed { line: usize, msg: String },
    #[error("line {line}: {field} {value} out of range")]
    OutOfRange {
        line: usize,
        field: &'static str,
        value: i64,
    },
    #[error("missing header line \"n m tau\"")]
    MissingHeader,
    #[error("expected {expected} edge lines, found {found}")]
    WrongEdgeCount { expected: usize, found: usize },
}

/// Directed temporal graph with a per-(vertex, timestamp) in-neighbor index.
///
/// Edges are kept sorted by (dst, t, src). The distinct (dst, t) pairs form
/// the graph's "cells"; each cell owns a contiguous edge range, and each
/// vertex owns a contiguous, time-sorted cell range. The sieve's dynamic
/// program walks these ranges directly.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TemporalGraph {
    n: usize,
    tau: u32,
    edges: Vec<TemporalEdge>,
    cells: Vec<(u32, u32)>,
    cell_edge_start: Vec<u32>,
    vertex_cell_start: Vec<u32>,
}

/// Counts of records dropped while building a graph.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct LoadStats {
    pub self_loops_dropped: usize,
    pub duplicates_dropped: usize,
}

impl TemporalGraph {
    /// Builds a graph from raw edges, dropping self-loops and duplicates.
    pub fn from_edges(
        n: usize,
        tau: u32,
        edges: Vec<TemporalEdge>,
    ) -> Result<TemporalGraph, GraphError> {
        Ok(Self::from_edges_with_stats(n, tau, edges)?.0)
    }

    pub fn from_edges_with_stats(
        n: usize,
        tau: u32,
        mut edges: Vec<TemporalEdge>,
    ) -> Result<(TemporalGraph, LoadStats), GraphError> {
        if n == 0 || tau == 0 {
            return Err(GraphError::BadDimensions);
        }
        for e in &edges {
            if e.src as usize >= n {
                return Err(GraphError::VertexOutOfRange { v: e.src, n });
            }
            if e.dst as usize >= n {
                return Err(GraphError::VertexOutOfRange { v: e.dst, n });
            }
            if e.t == 0 || e.t > tau {
                return Err(GraphError::TimestampOutOfRange { t: e.t, tau });
            }
        }
        let mut stats = LoadStats::default();
        let before = edges.len();
        edges.retain(|e| e.src != e.dst);
        stats.self_loops_dropped = before - edges.len();
        edges.sort_unstable_by_key(|e| (e.dst, e.t, e.src));
        let before = edges.len();
        edges.dedup();
        stats.duplicates_dropped = before - edges.len();

        let mut cells: Vec<(u32, u32)> = Vec::new();
        let mut cell_edge_start: Vec<u32> = Vec::new();
        for (i, e) in edges.iter().enumerate() {
            if cells.last() != Some(&(e.dst, e.t)) {
                cells.push((e.dst, e.t));
                cell_edge_start.push(i as u32);
            }
        }
        cell_edge_start.push(edges.len() as u32);

        let mut vertex_cell_start = vec![0u32; n + 1];
        for &(v, _) in &cells {
            vertex_cell_start[v as usize + 1] += 1;
        }
        for v in 0..n {
            vertex_cell_start[v + 1] += vertex_cell_start[v];
        }

        Ok((
            TemporalGraph {
                n,
                tau,
                edges,
                cells,
                cell_edge_start,
                vertex_cell_start,
            },
            stats,
        ))
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn tau(&self) -> u32 {
        self.tau
    }

    pub fn num_edges(&self) -> usize {
        self.edges.len()
    }

    pub fn edges(&self) -> &[TemporalEdge] {
        &self.edges
    }

    /// Distinct (vertex, timestamp) pairs that have at least one in-edge,
    /// sorted by (vertex, timestamp).
    pub fn cells(&self) -> &[(u32, u32)] {
        &self.cells
    }

    pub fn num_cells(&self) -> usize {
        self.cells.len()
    }

    /// Edges arriving at cell index `ci`.
    pub fn cell_in_edges(&self, ci: usize) -> &[TemporalEdge] {
        &self.edges[self.cell_edge_range(ci)]
    }

    /// Indices into `edges()` of the edges arriving at cell `ci`.
    pub fn cell_edge_range(&self, ci: usize) -> std::ops::Range<usize> {
        self.cell_edge_start[ci] as usize..self.cell_edge_start[ci + 1] as usize
    }

    /// Range of cell indices belonging to vertex `v`, time-sorted.
    pub fn vertex_cells(&self, v: u32) -> std::ops::Range<usize> {
        self.vertex_cell_start[v as usize] as usize
            ..self.vertex_cell_start[v as usize + 1] as usize
    }

    /// Cell index of (v, t), if v has any in-edge at t.
    pub fn cell_index(&self, v: u32, t: u32) -> Option<usize> {
        let range = self.vertex_cells(v);
        let cells = &self.cells[range.clone()];
        cells
            .binary_search_by_key(&t, |&(_, ct)| ct)
            .ok()
            .map(|off| range.start + off)
    }

    /// Sources of edges (u, v, t); empty when there are none.
    pub fn in_neighbors(&self, v: u32, t: u32) -> impl Iterator<Item = u32> + '_ {
        self.cell_index(v, t)
            .map(|ci| self.cell_in_edges(ci))
            .unwrap_or(&[])
            .iter()
            .map(|e| e.src)
    }

    /// Graph with every edge mirrored; idempotent.
    pub fn symmetrize(&self) -> TemporalGraph {
        let mut edges = self.edges.clone();
        edges.extend(
            self.edges
                .iter()
                .map(|e| TemporalEdge::new(e.dst, e.src, e.t)),
        );
        TemporalGraph::from_edges(self.n, self.tau, edges)
            .expect("mirrored edges stay in range")
    }

    /// Copy keeping only edges accepted by `keep`; n and tau unchanged.
    pub fn filtered(&self, keep: impl Fn(&TemporalEdge) -> bool) -> TemporalGraph {
        let edges = self.edges.iter().copied().filter(keep).collect();
        TemporalGraph::from_edges(self.n, self.tau, edges)
            .expect("filtered edges stay in range")
    }

    /// Copy with all edges after `cap` dropped and tau lowered to `cap`.
    pub fn capped_at_time(&self, cap: u32) -> TemporalGraph {
        let edges = self
            .edges
            .iter()
            .copied()
            .filter(|e| e.t <= cap)
            .collect();
        TemporalGraph::from_edges(self.n, cap.max(1), edges)
            .expect("capped edges stay in range")
    }

    /// Copy with one extra vertex (id n) and the given extra edges.
    pub fn with_extra_vertex(&self, extra: Vec<TemporalEdge>) -> TemporalGraph {
        let mut edges = self.edges.clone();
        edges.extend(extra);
        TemporalGraph::from_edges(self.n + 1, self.tau, edges)
            .expect("extended edges stay in range")
    }

    /// Static digraph on (vertex, time) copies encoding restless-walk
    /// reachability: edge (u,v,t) yields arcs u^t -> v^{t+l} for every
    /// waiting offset l <= delta(v) with t+l <= tau.
    pub fn delta_expansion(&self, rest: &RestingTimes) -> StaticDigraph {
        let tau = self.tau as u64;
        let node = |v: u32, t: u32| v as u64 * tau + (t as u64 - 1);
        let mut arcs = Vec::new();
        for e in &self.edges {
            let d = rest.get(e.dst);
            for off in 0..=d {
                let tt = e.t + off;
                if tt > self.tau {
                    break;
                }
                arcs.push((node(e.src, e.t), node(e.dst, tt)));
            }
        }
        StaticDigraph {
            num_nodes: self.n as u64 * tau,
            arcs,
        }
    }

    /// Vertices reachable from s via a restless walk, by BFS over the
    /// delta-expansion started from every copy of s. The source is always
    /// included.
    pub fn walk_reachable(&self, rest: &RestingTimes, s: u32) -> Vec<bool> {
        let expansion = self.delta_expansion(rest);
        let tau = self.tau as u64;
        let starts: Vec<u64> = (0..tau).map(|i| s as u64 * tau + i).collect();
        let node_reached = expansion.reachable_from(&starts);
        let mut out = vec![false; self.n];
        out[s as usize] = true;
        for (node, hit) in node_reached.iter().enumerate() {
            if *hit {
                out[node / tau as usize] = true;
            }
        }
        out
    }
}

/// Per-vertex waiting-time bounds delta(v) in 1..=tau.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RestingTimes {
    delta: Vec<u32>,
}

impl RestingTimes {
    pub fn uniform(n: usize, delta: u32) -> RestingTimes {
        RestingTimes { delta: vec![delta; n] }
    }

    pub fn from_vec(delta: Vec<u32>) -> RestingTimes {
        RestingTimes { delta }
    }

    /// delta(v) drawn uniformly from 1..=max_delta, keyed by vertex id.
    pub fn random_uniform(n: usize, max_delta: u32, tape: &RandomTape) -> RestingTimes {
        let delta = (0..n)
            .map(|v| 1 + tape.uniform(stream::DELTA, &[v as u64], max_delta as u64) as u32)
            .collect();
        RestingTimes { delta }
    }

    pub fn len(&self) -> usize {
        self.delta.len()
    }

    pub fn is_empty(&self) -> bool {
        self.delta.is_empty()
    }

    pub fn get(&self, v: u32) -> u32 {
        self.delta[v as usize]
    }

    pub fn set(&mut self, v: u32, d: u32) {
        self.delta[v as usize] = d;
    }

    pub fn push(&mut self, d: u32) {
        self.delta.push(d);
    }

    pub fn max_delta(&self) -> u32 {
        self.delta.iter().copied().max().unwrap_or(1)
    }

    /// Copy with every bound clamped into 1..=tau. Waiting windows never
    /// reach below timestamp 1, so clamping preserves restless semantics on
    /// a time-capped instance.
    pub fn clamped_to(&self, tau: u32) -> RestingTimes {
        RestingTimes {
            delta: self.delta.iter().map(|&d| d.clamp(1, tau)).collect(),
        }
    }

    /// Checks 1 <= delta(v) <= tau for all v.
    pub fn valid_for(&self, tau: u32) -> bool {
        self.delta.iter().all(|&d| d >= 1 && d <= tau)
    }
}

/// Static directed graph produced by delta-expansion.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StaticDigraph {
    pub num_nodes: u64,
    pub arcs: Vec<(u64, u64)>,
}

impl StaticDigraph {
    pub fn reachable_from(&self, starts: &[u64]) -> Vec<bool> {
        let n = self.num_nodes as usize;
        let mut head = vec![0u32; n + 1];
        for &(u, _) in &self.arcs {
            head[u as usize + 1] += 1;
        }
        for i in 0..n {
            head[i + 1] += head[i];
        }
        let mut adj = vec![0u64; self.arcs.len()];
        let mut fill = head.clone();
        for &(u, v) in &self.arcs {
            adj[fill[u as usize] as usize] = v;
            fill[u as usize] += 1;
        }
        let mut seen = vec![false; n];
        let mut queue = VecDeque::new();
        for &s in starts {
            if !seen[s as usize] {
                seen[s as usize] = true;
                queue.push_back(s);
            }
        }
        while let Some(u) = queue.pop_front() {
            for i in head[u as usize]..head[u as usize + 1] {
                let v = adj[i as usize];
                if !seen[v as usize] {
                    seen[v as usize] = true;
                    queue.push_back(v);
                }
            }
        }
        seen
    }
}

/// Result of parsing an edge-list file.
#[derive(Debug)]
pub struct ParsedGraph {
    pub graph: TemporalGraph,
    pub stats: LoadStats,
}

/// Parses the "n m tau" / "u v t" edge-list format. Vertices are 1-based in
/// the file, timestamps 1-based, and lines starting with '%' are comments.
pub fn parse_edge_list(reader: impl BufRead) -> Result<ParsedGraph, ParseError> {
    let mut header: Option<(usize, usize, u32)> = None;
    let mut edges: Vec<TemporalEdge> = Vec::new();
    let mut data_lines = 0usize;

    for (lineno, line) in reader.lines().enumerate() {
        let line = line?;
        let lineno = lineno + 1;
        let trimmed = line.trim();
        if trimmed.is_empty() || trimmed.starts_with('%') {
            continue;
        }
        let mut fields = trimmed.split_whitespace();
        let mut next_int = |name: &'static str| -> Result<i64, ParseError> {
            let tok = fields.next().ok_or_else(|| ParseError::Malformed {
                line: lineno,
                msg: format!("missing {name}"),
            })?;
            tok.parse::<i64>().map_err(|_| ParseError::Malformed {
                line: lineno,
                msg: format!("{name} is not an integer: {tok:?}"),
            })
        };

        match header {
            None => {
                let n = next_int("n")?;
                let m = next_int("m")?;
                let tau = next_int("tau")?;
                if fields.next().is_some() {
                    return Err(ParseError::Malformed {
                        line: lineno,
                        msg: "trailing tokens after header".into(),
                    });
                }
                if n <= 0 {
                    return Err(ParseError::OutOfRange { line: lineno, field: "n", value: n });
                }
                if tau <= 0 {
                    return Err(ParseError::OutOfRange { line: lineno, field: "tau", value: tau });
                }
                if m < 0 {
                    return Err(ParseError::OutOfRange { line: lineno, field: "m", value: m });
                }
                header = Some((n as usize, m as usize, tau as u32));
            }
            Some((n, m, tau)) => {
                data_lines += 1;
                if data_lines > m {
                    return Err(ParseError::WrongEdgeCount {
                        expected: m,
                        found: data_lines,
                    });
                }
                let u = next_int("u")?;
                let v = next_int("v")?;
                let t = next_int("t")?;
                if fields.next().is_some() {
                    return Err(ParseError::Malformed {
                        line: lineno,
                        msg: "trailing tokens after edge".into(),
                    });
                }
                if u < 1 || u > n as i64 {
                    return Err(ParseError::OutOfRange { line: lineno, field: "u", value: u });
                }
                if v < 1 || v > n as i64 {
                    return Err(ParseError::OutOfRange { line: lineno, field: "v", value: v });
                }
                if t < 1 || t > tau as i64 {
                    return Err(ParseError::OutOfRange { line: lineno, field: "t", value: t });
                }
                edges.push(TemporalEdge::new(u as u32 - 1, v as u32 - 1, t as u32));
            }
        }
    }

    let (n, m, tau) = header.ok_or(ParseError::MissingHeader)?;
    if data_lines != m {
        return Err(ParseError::WrongEdgeCount { expected: m, found: data_lines });
    }
    let (graph, stats) = TemporalGraph::from_edges_with_stats(n, tau, edges)
        .expect("ranges already validated");
    Ok(ParsedGraph { graph, stats })
}

/// Writes the edge-list format accepted by [`parse_edge_list`].
pub fn write_edge_list(graph: &TemporalGraph, mut w: impl Write) -> io::Result<()> {
    writeln!(w, "{} {} {}", graph.n(), graph.num_edges(), graph.tau())?;
    for e in graph.edges() {
        writeln!(w, "{} {} {}", e.src + 1, e.dst + 1, e.t)?;
    }
    Ok(())
}

/// Parses "v delta" lines (1-based vertices) into resting times; every
/// vertex must be assigned exactly once.
pub fn parse_resting_times(
    reader: impl BufRead,
    n: usize,
    tau: u32,
) -> Result<RestingTimes, ParseError> {
    let mut delta = vec![0u32; n];
    for (lineno, line) in reader.lines().enumerate() {
        let line = line?;
        let lineno = lineno + 1;
        let trimmed = line.trim();
        if trimmed.is_empty() || trimmed.starts_with('%') {
            continue;
        }
        let toks: Vec<&str> = trimmed.split_whitespace().collect();
        if toks.len() != 2 {
            return Err(ParseError::Malformed {
                line: lineno,
                msg: "expected \"v delta\"".into(),
            });
        }
        let v: i64 = toks[0].parse().map_err(|_| ParseError::Malformed {
            line: lineno,
            msg: format!("vertex is not an integer: {:?}", toks[0]),
        })?;
        let d: i64 = toks[1].parse().map_err(|_| ParseError::Malformed {
            line: lineno,
            msg: format!("delta is not an integer: {:?}", toks[1]),
        })?;
        if v < 1 || v > n as i64 {
            return Err(ParseError::OutOfRange { line: lineno, field: "v", value: v });
        }
        if d < 1 || d > tau as i64 {
            return Err(ParseError::OutOfRange { line: lineno, field: "delta", value: d });
        }
        if delta[v as usize - 1] != 0 {
            return Err(ParseError::Malformed {
                line: lineno,
                msg: format!("vertex {v} assigned twice"),
            });
        }
        delta[v as usize - 1] = d as u32;
    }
    if let Some(v) = delta.iter().position(|&d| d == 0) {
        return Err(ParseError::Malformed {
            line: 0,
            msg: format!("vertex {} has no delta assignment", v + 1),
        });
    }
    Ok(RestingTimes::from_vec(delta))
}

/// Parses "v color" lines (1-based vertices, positive integer colors).
pub fn parse_coloring(reader: impl BufRead, n: usize) -> Result<Vec<u32>, ParseError> {
    let mut colors = vec![0u32; n];
    for (lineno, line) in reader.lines().enumerate() {
        let line = line?;
        let lineno = lineno + 1;
        let trimmed = line.trim();
        if trimmed.is_empty() || trimmed.starts_with('%') {
            continue;
        }
        let toks: Vec<&str> = trimmed.split_whitespace().collect();
        if toks.len() != 2 {
            return Err(ParseError::Malformed {
                line: lineno,
                msg: "expected \"v color\"".into(),
            });
        }
        let v: i64 = toks[0].parse().map_err(|_| ParseError::Malformed {
            line: lineno,
            msg: format!("vertex is not an integer: {:?}", toks[0]),
        })?;
        let c: i64 = toks[1].parse().map_err(|_| ParseError::Malformed {
            line: lineno,
            msg: format!("color is not an integer: {:?}", toks[1]),
        })?;
        if v < 1 || v > n as i64 {
            return Err(ParseError::OutOfRange { line: lineno, field: "v", value: v });
        }
        if c < 1 || c > u32::MAX as i64 {
            return Err(ParseError::OutOfRange { line: lineno, field: "color", value: c });
        }
        colors[v as usize - 1] = c as u32;
    }
    if let Some(v) = colors.iter().position(|&c| c == 0) {
        return Err(ParseError::Malformed {
            line: 0,
            msg: format!("vertex {} has no color assignment", v + 1),
        });
    }
    Ok(colors)
}

/// Five-vertex example graph shared across module tests: a chain
/// v1->v2->v3->v4 closing back to v2, then v2->v5 late enough that only a
/// walk (not a path) can use it under tight resting times.
#[cfg(test)]
pub(crate) fn fixture() -> TemporalGraph {
    let text = "5 5 5\n1 2 1\n2 3 2\n3 4 3\n4 2 4\n2 5 5\n";
    parse_edge_list(text.as_bytes()).unwrap().graph
}
