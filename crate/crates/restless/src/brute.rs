//! Exact exponential-time reference: depth-bounded temporal DFS that
//! enumerates restless paths outright. Ground truth for the randomized
//! sieve and the head-to-head baseline; intended for small instances.

use std::collections::BTreeSet;

use crate::sieve::{ColorMultiset, ReachabilityResult};
use crate::tgraph::{RestingTimes, TemporalGraph};

const MAX_BRUTE_VERTICES: usize = 128;

struct OutIndex {
    // Edges as (src, t, dst) sorted, with a CSR per source vertex.
    sorted: Vec<(u32, u32, u32)>,
    start: Vec<u32>,
}

impl OutIndex {
    fn build(g: &TemporalGraph) -> OutIndex {
        let mut sorted: Vec<(u32, u32, u32)> =
            g.edges().iter().map(|e| (e.src, e.t, e.dst)).collect();
        sorted.sort_unstable();
        let mut start = vec![0u32; g.n() + 1];
        for &(s, _, _) in &sorted {
            start[s as usize + 1] += 1;
        }
        for v in 0..g.n() {
            start[v + 1] += start[v];
        }
        OutIndex { sorted, start }
    }

    fn departures(&self, v: u32) -> &[(u32, u32, u32)] {
        &self.sorted[self.start[v as usize] as usize..self.start[v as usize + 1] as usize]
    }
}

/// Marks (u, i) for every restless path from s of length at most k-1 that
/// ends at u at time i. Exact; no randomness. The visited set never admits a
/// repeated vertex, and every hop obeys 0 <= wait <= delta(mid-vertex).
pub fn brute_force_reach(
    g: &TemporalGraph,
    rest: &RestingTimes,
    s: u32,
    k: usize,
) -> ReachabilityResult {
    assert!(g.n() <= MAX_BRUTE_VERTICES, "exact search is for small instances");
    let mut r = ReachabilityResult::new_empty(g.n(), g.tau());
    if k < 2 {
        return r;
    }
    let out = OutIndex::build(g);
    let mut stack: Vec<(u32, u32, u128, usize)> = Vec::new();
    // Departure from the source is unconstrained by waiting.
    for &(_, t, w) in out.departures(s) {
        r.set(w, t);
        stack.push((w, t, 1u128 << s | 1u128 << w, 1));
    }
    while let Some((v, arrived, visited, depth)) = stack.pop() {
        if depth + 1 > k - 1 {
            continue;
        }
        let max_wait = rest.get(v);
        for &(_, t, w) in out.departures(v) {
            if t < arrived || t - arrived > max_wait {
                continue;
            }
            if visited >> w & 1 == 1 {
                continue;
            }
            r.set(w, t);
            stack.push((w, t, visited | 1u128 << w, depth + 1));
        }
    }
    r
}

/// Exact set of (d, i) pairs admitting a restless path from s that ends at d
/// at time i and whose vertex colors agree with the multiset. Paths have at
/// least one edge, so a size-1 multiset yields nothing.
pub fn brute_force_motif(
    g: &TemporalGraph,
    rest: &RestingTimes,
    coloring: &[u32],
    motif: &ColorMultiset,
    s: u32,
) -> BTreeSet<(u32, u32)> {
    assert!(g.n() <= MAX_BRUTE_VERTICES, "exact search is for small instances");
    assert_eq!(coloring.len(), g.n());
    let k = motif.total();
    let mut found = BTreeSet::new();
    if k < 2 || !motif.contains(coloring[s as usize]) {
        return found;
    }
    let out = OutIndex::build(g);
    let mut remaining = motif.clone();
    remaining.remove_one(coloring[s as usize]);

    struct Search<'a> {
        out: &'a OutIndex,
        rest: &'a RestingTimes,
        coloring: &'a [u32],
        k: usize,
    }

    impl Search<'_> {
        // `arrived` is None at the source: departure is unconstrained.
        fn recurse(
            &self,
            v: u32,
            arrived: Option<u32>,
            visited: u128,
            used: usize,
            remaining: &mut ColorMultiset,
            found: &mut BTreeSet<(u32, u32)>,
        ) {
            if used == self.k {
                found.insert((v, arrived.expect("k >= 2 means at least one edge")));
                return;
            }
            let max_wait = self.rest.get(v);
            for &(_, t, w) in self.out.departures(v) {
                if let Some(a) = arrived {
                    if t < a || t - a > max_wait {
                        continue;
                    }
                }
                if visited >> w & 1 == 1 {
                    continue;
                }
                if !remaining.remove_one(self.coloring[w as usize]) {
                    continue;
                }
                self.recurse(w, Some(t), visited | 1u128 << w, used + 1, remaining, found);
                remaining.insert(self.coloring[w as usize]);
            }
        }
    }

    let search = Search { out: &out, rest, coloring, k };
    search.recurse(s, None, 1u128 << s, 1, &mut remaining, &mut found);
    found
}
