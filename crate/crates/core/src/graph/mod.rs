//! Vertex-weighted undirected graphs, their text format, instance generators,
//! separator validation and an exhaustive optimum for tiny instances.

mod brute;
mod generate;
mod io;
mod separator;

pub use brute::{brute_force_opt, DEFAULT_BRUTE_FORCE_CAP};
pub use generate::{generate, with_random_weights, GeneratorKind};
pub use io::{parse_graph, parse_graph_with_bound, render_graph};
pub use separator::{validate_separator, SeparatorSolution, Violation};

use std::collections::BTreeSet;

/// Default exponent for the polynomial weight bound `(n + 1)^c_w`.
pub const DEFAULT_WEIGHT_EXPONENT: u32 = 3;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum GraphError {
    #[error("line {line}: {msg}")]
    Syntax { line: usize, msg: String },
    #[error("duplicate edge {{{u}, {v}}}")]
    DuplicateEdge { u: usize, v: usize },
    #[error("self-loop at vertex {0}")]
    SelfLoop(usize),
    #[error("vertex {vertex} out of range for n = {n}")]
    VertexOutOfRange { vertex: usize, n: usize },
    #[error("weight {weight} of vertex {vertex} outside [1, {bound}]")]
    WeightOutOfRange { vertex: usize, weight: u64, bound: u64 },
    #[error("instance with n = {n} exceeds the cap {cap}")]
    TooLarge { n: usize, cap: usize },
    #[error("invalid parameters: {0}")]
    InvalidParams(String),
}

/// Undirected simple graph on vertices `0..n` with positive integer weights.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WeightedGraph {
    n: usize,
    edges: Vec<(usize, usize)>,
    weights: Vec<u64>,
    adj: Vec<Vec<usize>>,
}

impl WeightedGraph {
    /// Builds a graph, normalising every edge to `(min, max)` and sorting.
    ///
    /// Weights are checked against the default bound `(n + 1)^3`.
    pub fn new(n: usize, edges: Vec<(usize, usize)>, weights: Vec<u64>) -> Result<Self, GraphError> {
        Self::with_weight_bound(n, edges, weights, weight_bound(n, DEFAULT_WEIGHT_EXPONENT))
    }

    pub fn with_weight_bound(
        n: usize,
        edges: Vec<(usize, usize)>,
        weights: Vec<u64>,
        bound: u64,
    ) -> Result<Self, GraphError> {
        if weights.len() != n {
            return Err(GraphError::InvalidParams(format!(
                "{} weights given for {} vertices",
                weights.len(),
                n
            )));
        }
        for (v, &w) in weights.iter().enumerate() {
            if w == 0 || w > bound {
                return Err(GraphError::WeightOutOfRange { vertex: v, weight: w, bound });
            }
        }
        let mut seen = BTreeSet::new();
        let mut norm = Vec::with_capacity(edges.len());
        for (u, v) in edges {
            for x in [u, v] {
                if x >= n {
                    return Err(GraphError::VertexOutOfRange { vertex: x, n });
                }
            }
            if u == v {
                return Err(GraphError::SelfLoop(u));
            }
            let e = (u.min(v), u.max(v));
            if !seen.insert(e) {
                return Err(GraphError::DuplicateEdge { u: e.0, v: e.1 });
            }
            norm.push(e);
        }
        norm.sort_unstable();
        let mut adj = vec![Vec::new(); n];
        for &(u, v) in &norm {
            adj[u].push(v);
            adj[v].push(u);
        }
        for list in &mut adj {
            list.sort_unstable();
        }
        Ok(Self { n, edges: norm, weights, adj })
    }

    /// Unit-weight graph.
    pub fn unweighted(n: usize, edges: Vec<(usize, usize)>) -> Result<Self, GraphError> {
        Self::new(n, edges, vec![1; n])
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn m(&self) -> usize {
        self.edges.len()
    }

    /// Edges as `(u, v)` with `u < v`, ascending.
    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    pub fn weights(&self) -> &[u64] {
        &self.weights
    }

    pub fn weight(&self, v: usize) -> u64 {
        self.weights[v]
    }

    pub fn neighbors(&self, v: usize) -> &[usize] {
        &self.adj[v]
    }

    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        u < self.n && self.adj[u].binary_search(&v).is_ok()
    }

    pub fn total_weight(&self) -> u64 {
        self.weights.iter().sum()
    }

    pub fn weight_of(&self, set: &[usize]) -> u64 {
        set.iter().map(|&v| self.weights[v]).sum()
    }

    pub fn max_weight(&self) -> u64 {
        self.weights.iter().copied().max().unwrap_or(0)
    }

    /// Returns a copy with `{u, v}` added.
    pub fn with_edge(&self, u: usize, v: usize) -> Result<Self, GraphError> {
        let mut edges = self.edges.clone();
        edges.push((u, v));
        Self::with_weight_bound(self.n, edges, self.weights.clone(), u64::MAX)
    }

    /// Returns a copy with new weights (bounded by `(n + 1)^3`).
    pub fn reweighted(&self, weights: Vec<u64>) -> Result<Self, GraphError> {
        Self::new(self.n, self.edges.clone(), weights)
    }

    /// Connected components of the subgraph induced by vertices where `keep` is true.
    pub fn components(&self, keep: &[bool]) -> Vec<Vec<usize>> {
        let mut comp = vec![usize::MAX; self.n];
        let mut out = Vec::new();
        let mut stack = Vec::new();
        for start in 0..self.n {
            if !keep[start] || comp[start] != usize::MAX {
                continue;
            }
            let id = out.len();
            let mut members = vec![start];
            comp[start] = id;
            stack.push(start);
            while let Some(x) = stack.pop() {
                for &y in &self.adj[x] {
                    if keep[y] && comp[y] == usize::MAX {
                        comp[y] = id;
                        members.push(y);
                        stack.push(y);
                    }
                }
            }
            members.sort_unstable();
            out.push(members);
        }
        out
    }
}

/// `(n + 1)^exponent`, saturating.
pub fn weight_bound(n: usize, exponent: u32) -> u64 {
    (n as u64 + 1).saturating_pow(exponent)
}
