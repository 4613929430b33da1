//! Shared inputs for the benchmarks.

use homlab_core::graph::construct::{build_named_graph, NamedGraph};
use homlab_core::rational::ratio;
use homlab_core::Graph;

/// `G(n, 1/2)` from a fixed seed.
pub fn random_target(n: usize, seed: u64) -> Graph {
    build_named_graph(&NamedGraph::Gnp { n, p: ratio(1, 2), seed }).expect("valid spec")
}

pub fn named(spec: NamedGraph) -> Graph {
    build_named_graph(&spec).expect("valid spec")
}
