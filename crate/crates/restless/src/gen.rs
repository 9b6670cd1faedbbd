//! Configuration-model temporal graph generators (d-regular and power-law
//! degree sequences) plus a uniform sampler for test corpora.
//!
//! All randomness is tape-keyed: a fixed seed reproduces the same graph on
//! any platform and thread count.

use thiserror::Error;

use crate::ff::{stream, RandomTape};
use crate::tgraph::{LoadStats, TemporalEdge, TemporalGraph};

#[derive(Debug, Error)]
pub enum GenError {
    #[error("n*d must be even for stub pairing (n={n}, d={d})")]
    OddStubCount { n: usize, d: u32 },
    #[error("degree {d} must be smaller than n={n}")]
    DegreeTooLarge { d: u32, n: usize },
    #[error("mean degree {target} is not achievable on support 1..={max}")]
    InfeasibleSupport { target: u32, max: u32 },
    #[error("{0}")]
    BadParams(&'static str),
}

/// Pairing outcome counters; dropped records are reported, not re-paired.
#[derive(Debug, Clone, Copy, Default)]
pub struct GenStats {
    pub stub_pairs: usize,
    pub self_loops_dropped: usize,
    pub duplicates_dropped: usize,
}

impl From<LoadStats> for GenStats {
    fn from(s: LoadStats) -> GenStats {
        GenStats {
            stub_pairs: 0,
            self_loops_dropped: s.self_loops_dropped,
            duplicates_dropped: s.duplicates_dropped,
        }
    }
}

/// Uniformly shuffled stub list for a degree sequence: vertex v appears
/// degrees[v] times. Consecutive entries form the stub pairs.
fn shuffled_stubs(degrees: &[u32], tape: &RandomTape) -> Vec<u32> {
    let mut stubs: Vec<u32> = Vec::with_capacity(degrees.iter().map(|&d| d as usize).sum());
    for (v, &d) in degrees.iter().enumerate() {
        stubs.extend(std::iter::repeat_n(v as u32, d as usize));
    }
    for i in (1..stubs.len()).rev() {
        let j = tape.uniform(stream::STUB, &[i as u64], i as u64 + 1) as usize;
        stubs.swap(i, j);
    }
    stubs
}

/// Pairs stubs, stamps each pair with a uniform timestamp, and orients it:
/// one random direction when `directed`, both directions otherwise.
fn pair_and_stamp(
    n: usize,
    tau: u32,
    degrees: &[u32],
    directed: bool,
    tape: &RandomTape,
) -> (TemporalGraph, GenStats) {
    let stubs = shuffled_stubs(degrees, tape);
    let pairs = stubs.len() / 2;
    let mut edges = Vec::with_capacity(if directed { pairs } else { 2 * pairs });
    for p in 0..pairs {
        let a = stubs[2 * p];
        let b = stubs[2 * p + 1];
        let t = 1 + tape.uniform(stream::TIMESTAMP, &[p as u64], tau as u64) as u32;
        if directed {
            if tape.uniform(stream::ORIENT, &[p as u64], 2) == 0 {
                edges.push(TemporalEdge::new(a, b, t));
            } else {
                edges.push(TemporalEdge::new(b, a, t));
            }
        } else {
            edges.push(TemporalEdge::new(a, b, t));
            edges.push(TemporalEdge::new(b, a, t));
        }
    }
    let (graph, stats) = TemporalGraph::from_edges_with_stats(n, tau, edges)
        .expect("generated edges in range");
    let mut gs = GenStats::from(stats);
    gs.stub_pairs = pairs;
    (graph, gs)
}

/// d-regular configuration model with uniform timestamps in 1..=tau.
pub fn gen_regular(
    n: usize,
    d: u32,
    tau: u32,
    directed: bool,
    seed: u64,
) -> Result<(TemporalGraph, GenStats), GenError> {
    if n == 0 || tau == 0 || d == 0 {
        return Err(GenError::BadParams("n, d, tau must all be positive"));
    }
    if d as usize >= n {
        return Err(GenError::DegreeTooLarge { d, n });
    }
    if !(n * d as usize).is_multiple_of(2) {
        return Err(GenError::OddStubCount { n, d });
    }
    let tape = RandomTape::new(seed);
    Ok(pair_and_stamp(n, tau, &vec![d; n], directed, &tape))
}

/// Degree sequence for the power-law model: frequency of degree d is
/// proportional to d^alpha on w geometrically spaced support points, and
/// the support window [d_min, d_max] inside 1..=n-1 is placed so the mean
/// degree lands on target_mean (then the realized sum is repaired to
/// target_mean * n exactly, up to the parity fix the stub pairing needs).
pub fn powerlaw_degrees(
    n: usize,
    target_mean: u32,
    w: u32,
    alpha: f64,
    tape: &RandomTape,
) -> Result<Vec<u32>, GenError> {
    let max_degree = (n - 1) as u32;
    if target_mean == 0 || target_mean > max_degree {
        return Err(GenError::InfeasibleSupport { target: target_mean, max: max_degree });
    }

    // Unrounded geometric support and its d^alpha-weighted mean.
    let continuous_support = |d_min: f64, d_max: f64| -> Vec<f64> {
        if w <= 1 {
            return vec![d_max];
        }
        let ratio = (d_max / d_min).powf(1.0 / (w as f64 - 1.0));
        (0..w).map(|j| d_min * ratio.powi(j as i32)).collect()
    };
    let mean_of = |points: &[f64]| -> f64 {
        let mut z = 0.0;
        let mut zd = 0.0;
        for &d in points {
            let wt = d.powf(alpha);
            z += wt;
            zd += wt * d;
        }
        zd / z
    };

    // Place the window: widest support is 1..=n-1; if the target mean is
    // above its natural mean, raise d_min, otherwise lower d_max. Either
    // way the mean is monotone in the moving endpoint.
    let target = target_mean as f64;
    let cap = max_degree as f64;
    let round_support = |points: Vec<f64>| -> Vec<u32> {
        let mut s: Vec<u32> = points
            .into_iter()
            .map(|d| (d.round() as u32).clamp(1, max_degree))
            .collect();
        s.dedup();
        s
    };
    let rounded_mean_of = |support: &[u32]| -> f64 {
        let mut z = 0.0;
        let mut zd = 0.0;
        for &d in support {
            let wt = (d as f64).powf(alpha);
            z += wt;
            zd += wt * d as f64;
        }
        zd / z
    };
    let natural = mean_of(&continuous_support(1.0, cap));
    let raise_min = target >= natural;
    let window = |endpoint: f64| {
        if raise_min {
            continuous_support(endpoint, cap)
        } else {
            continuous_support(1.0, endpoint)
        }
    };
    // The mean is increasing in the moving endpoint under either
    // parametrization; bisect on the support as rounded, so the counts
    // below land near the target without large corrections.
    let (mut lo, mut hi) = (1.0, cap);
    for _ in 0..100 {
        let mid = 0.5 * (lo + hi);
        if rounded_mean_of(&round_support(window(mid))) < target {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    let support = round_support(window(0.5 * (lo + hi)));

    // Vertex counts per support point by largest remainder.
    let weights: Vec<f64> = support.iter().map(|&d| (d as f64).powf(alpha)).collect();
    let z: f64 = weights.iter().sum();
    let shares: Vec<f64> = weights.iter().map(|&q| q * n as f64 / z).collect();
    let mut counts: Vec<usize> = shares.iter().map(|&s| s.floor() as usize).collect();
    let mut rem: Vec<(f64, usize)> = shares
        .iter()
        .enumerate()
        .map(|(j, &s)| (s - s.floor(), j))
        .collect();
    rem.sort_by(|a, b| b.0.partial_cmp(&a.0).unwrap().then(a.1.cmp(&b.1)));
    let assigned: usize = counts.iter().sum();
    for &(_, j) in rem.iter().take(n - assigned) {
        counts[j] += 1;
    }

    let mut degrees: Vec<u32> = Vec::with_capacity(n);
    for (j, &c) in counts.iter().enumerate() {
        degrees.extend(std::iter::repeat_n(support[j], c));
    }

    // Absorb the quantization residual on as few vertices as possible,
    // walking down from the sparse top blocks so the realized frequencies
    // stay on-law where the mass is.
    let want = target_mean as i64 * n as i64;
    let mut have: i64 = degrees.iter().map(|&d| d as i64).sum();
    let mut v = degrees.len();
    while have != want && v > 0 {
        v -= 1;
        let d = degrees[v] as i64;
        let adjusted = (d + (want - have)).clamp(1, max_degree as i64);
        have += adjusted - d;
        degrees[v] = adjusted as u32;
    }
    // Stub pairing needs an even total.
    if have % 2 != 0 {
        let v = degrees.iter().position(|&d| d < max_degree).unwrap_or(0);
        degrees[v] += 1;
    }
    // Deterministic spread of degrees over vertex ids.
    for i in (1..degrees.len()).rev() {
        let j = tape.uniform(stream::DEGREE, &[i as u64], i as u64 + 1) as usize;
        degrees.swap(i, j);
    }
    Ok(degrees)
}

/// Power-law configuration model with uniform timestamps in 1..=tau.
pub fn gen_powerlaw(
    n: usize,
    target_mean: u32,
    w: u32,
    alpha: f64,
    tau: u32,
    directed: bool,
    seed: u64,
) -> Result<(TemporalGraph, GenStats), GenError> {
    if n < 2 || tau == 0 || w == 0 {
        return Err(GenError::BadParams("need n >= 2, w >= 1, tau >= 1"));
    }
    if alpha >= 0.0 {
        return Err(GenError::BadParams("alpha must be negative"));
    }
    let tape = RandomTape::new(seed);
    let degrees = powerlaw_degrees(n, target_mean, w, alpha, &tape)?;
    Ok(pair_and_stamp(n, tau, &degrees, directed, &tape))
}

/// A fully described synthetic instance family.
#[derive(Debug, Clone)]
pub enum GenSpec {
    Regular { n: usize, d: u32, tau: u32, directed: bool, seed: u64 },
    Powerlaw {
        n: usize,
        mean_degree: u32,
        w: u32,
        alpha: f64,
        tau: u32,
        directed: bool,
        seed: u64,
    },
}

impl GenSpec {
    pub fn generate(&self) -> Result<(TemporalGraph, GenStats), GenError> {
        match *self {
            GenSpec::Regular { n, d, tau, directed, seed } => {
                gen_regular(n, d, tau, directed, seed)
            }
            GenSpec::Powerlaw { n, mean_degree, w, alpha, tau, directed, seed } => {
                gen_powerlaw(n, mean_degree, w, alpha, tau, directed, seed)
            }
        }
    }
}

/// Uniform random temporal graph: m directed edges drawn with replacement
/// (fewer after self-loop and duplicate drops). Test-corpus sampler.
pub fn gen_uniform(n: usize, m: usize, tau: u32, seed: u64) -> TemporalGraph {
    let tape = RandomTape::new(seed);
    let mut edges = Vec::with_capacity(m);
    for i in 0..m {
        let u = tape.uniform(stream::STUB, &[i as u64, 0], n as u64) as u32;
        let v = tape.uniform(stream::STUB, &[i as u64, 1], n as u64) as u32;
        let t = 1 + tape.uniform(stream::TIMESTAMP, &[i as u64], tau as u64) as u32;
        edges.push(TemporalEdge::new(u, v, t));
    }
    TemporalGraph::from_edges(n, tau, edges).expect("sampled edges in range")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn regular_stub_multiset_is_uniform() {
        let tape = RandomTape::new(9);
        let degrees = vec![3u32; 8];
        let stubs = shuffled_stubs(&degrees, &tape);
        assert_eq!(stubs.len(), 24);
        let mut count = [0usize; 8];
        for &s in &stubs {
            count[s as usize] += 1;
        }
        assert!(count.iter().all(|&c| c == 3));
    }

    #[test]
    fn regular_generator_counts_and_determinism() {
        let (g1, stats) = gen_regular(100, 4, 10, false, 5).unwrap();
        assert_eq!(stats.stub_pairs, 200);
        // Undirected emission: both directions per pair, minus drops.
        assert_eq!(
            g1.num_edges() + stats.self_loops_dropped + stats.duplicates_dropped,
            400
        );
        let (g2, _) = gen_regular(100, 4, 10, false, 5).unwrap();
        assert_eq!(g1, g2);
        let (g3, _) = gen_regular(100, 4, 10, false, 6).unwrap();
        assert_ne!(g1, g3);

        assert!(matches!(
            gen_regular(5, 3, 4, true, 1),
            Err(GenError::OddStubCount { .. })
        ));
        assert!(matches!(
            gen_regular(4, 4, 4, true, 1),
            Err(GenError::DegreeTooLarge { .. })
        ));
    }

    #[test]
    fn powerlaw_degree_sum_hits_target() {
        for seed in 0..5u64 {
            let tape = RandomTape::new(seed);
            let degrees = powerlaw_degrees(2000, 20, 40, -1.0, &tape).unwrap();
            assert_eq!(degrees.len(), 2000);
            let sum: u64 = degrees.iter().map(|&d| d as u64).sum();
            let target = 20u64 * 2000;
            assert!(sum == target || sum == target + 1, "sum {sum}");
            assert!(degrees.iter().all(|&d| (1..2000).contains(&d)));
        }
    }

    #[test]
    fn powerlaw_single_support_point_is_near_regular() {
        let tape = RandomTape::new(3);
        let degrees = powerlaw_degrees(50, 7, 1, -1.0, &tape).unwrap();
        let distinct: std::collections::BTreeSet<u32> = degrees.iter().copied().collect();
        // Only the repair steps may nudge a couple of vertices off 7.
        assert!(distinct.iter().all(|&d| (6..=8).contains(&d)));
        let sum: u64 = degrees.iter().map(|&d| d as u64).sum();
        assert!((348..=352).contains(&sum));
    }

    #[test]
    fn powerlaw_frequencies_follow_the_power_law() {
        let tape = RandomTape::new(12);
        let degrees = powerlaw_degrees(20_000, 10, 8, -1.0, &tape).unwrap();
        let mut hist = std::collections::BTreeMap::<u32, usize>::new();
        for &d in &degrees {
            *hist.entry(d).or_insert(0) += 1;
        }
        // Compare realized count ratios of well-populated support points
        // against (d_i/d_j)^alpha; the repair walk may smear a little.
        let big: Vec<(u32, usize)> =
            hist.into_iter().filter(|&(_, c)| c >= 100).collect();
        assert!(big.len() >= 4, "support too collapsed: {big:?}");
        for pair in big.windows(2) {
            let (d1, c1) = pair[0];
            let (d2, c2) = pair[1];
            let got = (c1 as f64 / c2 as f64).ln();
            let want = -(d1 as f64 / d2 as f64).ln();
            assert!(
                (got - want).abs() < 0.25,
                "ratio off: d {d1}/{d2}, counts {c1}/{c2}, {got:.3} vs {want:.3}"
            );
        }
    }

    #[test]
    fn genspec_dispatch_matches_direct_calls() {
        let via_spec = GenSpec::Regular { n: 60, d: 4, tau: 7, directed: true, seed: 5 }
            .generate()
            .unwrap()
            .0;
        let direct = gen_regular(60, 4, 7, true, 5).unwrap().0;
        assert_eq!(via_spec, direct);
    }

    #[test]
    fn powerlaw_generator_is_deterministic() {
        let (g1, _) = gen_powerlaw(300, 10, 20, -1.0, 25, true, 11).unwrap();
        let (g2, _) = gen_powerlaw(300, 10, 20, -1.0, 25, true, 11).unwrap();
        assert_eq!(g1, g2);
        assert!(gen_powerlaw(300, 10, 20, 1.0, 25, true, 11).is_err());
        assert!(matches!(
            gen_powerlaw(10, 60, 5, -1.0, 5, true, 1),
            Err(GenError::InfeasibleSupport { .. })
        ));
    }

    #[test]
    fn timestamps_cover_range_uniformly() {
        let (g, _) = gen_regular(400, 10, 8, true, 21).unwrap();
        let mut counts = [0usize; 9];
        for e in g.edges() {
            counts[e.t as usize] += 1;
        }
        assert_eq!(counts[0], 0);
        let total: usize = counts.iter().sum();
        let expected = total as f64 / 8.0;
        let chi2: f64 = counts[1..]
            .iter()
            .map(|&c| {
                let d = c as f64 - expected;
                d * d / expected
            })
            .sum();
        // 7 degrees of freedom; 30 is far beyond the 99.9% quantile.
        assert!(chi2 < 30.0, "chi2 {chi2}");
    }
}
