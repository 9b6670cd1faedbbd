//! Restless reachability in temporal graphs.
//!
//! A restless path is a time-respecting path that never waits longer than a
//! per-vertex resting time at any intermediate vertex. This crate decides and
//! extracts restless paths — optionally constrained to match a multiset of
//! vertex colors — with a randomized algebraic sieve over GF(2^b), and
//! computes restless reachability from one or many sources. An exact
//! exponential-time search is included as the reference baseline, along with
//! configuration-model generators for synthetic inputs.

pub mod brute;
pub mod extract;
pub mod ff;
pub mod gen;
pub mod reach;
pub mod sieve;
pub mod tgraph;

pub use ff::{Field, RandomTape};
pub use sieve::{ColorMultiset, ReachabilityResult, SieveConfig, SieveMode};
pub use tgraph::{RestingTimes, TemporalEdge, TemporalGraph};
