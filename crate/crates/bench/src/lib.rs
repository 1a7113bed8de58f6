//! Shared benchmark instances.

use vsep_core::embed::ImplicitMatrix;
use vsep_core::feedback::{FeedbackKind, FeedbackMatrix};
use vsep_core::graph::with_random_weights;
use vsep_core::maxflow::build_split_network;
use vsep_core::{generate, FlowNetwork, GeneratorKind, Rational, WeightedGraph};

/// Square grid with weights in `1..=9`.
pub fn weighted_grid(side: usize) -> WeightedGraph {
    let g = generate(&GeneratorKind::Grid { rows: side, cols: side }, 0).expect("valid grid");
    with_random_weights(&g, 9, 1).expect("weights within bound")
}

/// Split network between the first and last rows of a grid.
pub fn grid_network(side: usize) -> FlowNetwork {
    let g = weighted_grid(side);
    let n = g.n();
    let top: Vec<usize> = (0..side).collect();
    let bottom: Vec<usize> = (n - side..n).collect();
    build_split_network(&g, &top, &bottom, 3, 2).expect("network fits")
}

/// `rounds` Laplacian feedback terms summed with unit step.
pub fn laplacian_history(g: &WeightedGraph, rounds: usize) -> ImplicitMatrix {
    let n = g.n();
    let fb = FeedbackMatrix {
        kind: FeedbackKind::Flow,
        n,
        alpha: Rational::from_integer(1),
        y: vec![Rational::new(1, n as i128); n],
        set_term: None,
        paths: Vec::new(),
        lambda: g.edges().iter().map(|&e| (e, Rational::new(1, 8))).collect(),
        width_bound: 1.0,
    };
    let mut acc = ImplicitMatrix::new(n);
    for _ in 0..rounds {
        acc.accumulate(&fb, 0.05);
    }
    acc
}
