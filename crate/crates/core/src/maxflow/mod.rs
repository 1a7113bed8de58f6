//! Integer max-flow on the split-vertex network, the minimum cut with the
//! inclusion-minimal sink side, and a path decomposition of the flow.

mod decompose;
mod dinic;
mod network;

pub use decompose::{decompose, Decomposition, FlowPath};
pub use dinic::{Dinic, MaxFlowSolver};
pub use network::{build_split_network, parse_flow_network, FlowNetwork, SplitLayout};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum FlowError {
    #[error("capacity overflow while building the network")]
    Overflow,
    #[error("invalid network: {0}")]
    Invalid(String),
    #[error("infeasible flow: {0}")]
    Infeasible(String),
    #[error("line {line}: {msg}")]
    Syntax { line: usize, msg: String },
}

/// Maximum flow together with its canonical minimum cut and decomposition.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FlowResult {
    pub value: i64,
    /// Per-arc flow after cycle cancellation, indexed like [`FlowNetwork::arcs`].
    pub flow: Vec<i64>,
    /// `true` for nodes on the sink side `T_cut`: exactly those that reach
    /// the sink in the residual graph.
    pub sink_side: Vec<bool>,
    pub paths: Vec<FlowPath>,
}

impl FlowResult {
    pub fn cut_capacity(&self, net: &FlowNetwork) -> i64 {
        net.arcs()
            .iter()
            .filter(|a| !self.sink_side[a.from] && self.sink_side[a.to])
            .map(|a| a.cap)
            .sum()
    }

    pub fn source_side(&self) -> Vec<usize> {
        (0..self.sink_side.len()).filter(|&v| !self.sink_side[v]).collect()
    }

    pub fn sink_side_nodes(&self) -> Vec<usize> {
        (0..self.sink_side.len()).filter(|&v| self.sink_side[v]).collect()
    }
}

/// Max flow with [`Dinic`].
pub fn max_flow(net: &FlowNetwork) -> FlowResult {
    max_flow_with(&Dinic, net)
}

/// Max flow with any solver; the cut and decomposition are derived here.
pub fn max_flow_with<S: MaxFlowSolver + ?Sized>(solver: &S, net: &FlowNetwork) -> FlowResult {
    let raw = solver.solve(net);
    let Decomposition { paths, flow } = decompose(net, &raw).expect("solver returned an infeasible flow");
    let value = net.flow_value(&flow);
    let sink_side = residual_reaches_sink(net, &flow);
    FlowResult { value, flow, sink_side, paths }
}

/// Nodes that can reach the sink through arcs with residual capacity.
pub fn residual_reaches_sink(net: &FlowNetwork, flow: &[i64]) -> Vec<bool> {
    let nodes = net.nodes();
    // residual u -> v exists iff forward slack on (u, v) or positive flow on (v, u)
    let mut into: Vec<Vec<usize>> = vec![Vec::new(); nodes];
    for (i, a) in net.arcs().iter().enumerate() {
        if flow[i] < a.cap {
            into[a.to].push(a.from);
        }
        if flow[i] > 0 {
            into[a.from].push(a.to);
        }
    }
    let mut reach = vec![false; nodes];
    let mut stack = vec![net.sink()];
    reach[net.sink()] = true;
    while let Some(v) = stack.pop() {
        for &u in &into[v] {
            if !reach[u] {
                reach[u] = true;
                stack.push(u);
            }
        }
    }
    reach
}
