use std::collections::BTreeMap;

use super::{FlowError, FlowNetwork, SplitLayout};

/// One `s`-`t` path of a flow decomposition.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FlowPath {
    /// Network nodes from source to sink.
    pub nodes: Vec<usize>,
    pub arcs: Vec<usize>,
    pub amount: i64,
}

impl FlowPath {
    /// Graph vertices `(x_1, …, x_k)` of a split-network path
    /// `(s, x_1, x̄_1, …, x_k, x̄_k, t)`.
    pub fn vertices(&self, layout: &SplitLayout) -> Vec<usize> {
        self.nodes.iter().copied().filter(|&v| v < layout.n).collect()
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Decomposition {
    pub paths: Vec<FlowPath>,
    /// The acyclic flow the paths sum to.
    pub flow: Vec<i64>,
}

impl Decomposition {
    /// `d_xy`: total amount over paths starting at vertex `x` and ending at `y`.
    pub fn endpoint_mass(&self, layout: &SplitLayout) -> BTreeMap<(usize, usize), i64> {
        let mut d = BTreeMap::new();
        for p in &self.paths {
            let vs = p.vertices(layout);
            if let (Some(&x), Some(&y)) = (vs.first(), vs.last()) {
                *d.entry((x, y)).or_insert(0) += p.amount;
            }
        }
        d
    }
}

/// Decomposes a feasible flow into `s`-`t` paths.
///
/// Flow cycles are cancelled first and discarded, so the result holds at
/// most one path per arc. Paths are stripped greedily from the source,
/// following the lowest-index positive arc at each node.
pub fn decompose(net: &FlowNetwork, flow: &[i64]) -> Result<Decomposition, FlowError> {
    check_feasible(net, flow)?;
    let arcs = net.arcs();
    let mut out_arcs: Vec<Vec<usize>> = vec![Vec::new(); net.nodes()];
    for (i, a) in arcs.iter().enumerate() {
        out_arcs[a.from].push(i);
    }
    let mut f = flow.to_vec();
    while let Some(cycle) = find_cycle(net, &out_arcs, &f) {
        let amount = cycle.iter().map(|&e| f[e]).min().unwrap_or(0);
        for &e in &cycle {
            f[e] -= amount;
        }
    }

    let mut paths = Vec::new();
    let (s, t) = (net.source(), net.sink());
    for (start, end, keep) in [(s, t, true), (t, s, false)] {
        loop {
            let Some(first) = out_arcs[start].iter().copied().find(|&e| f[e] > 0) else {
                break;
            };
            let mut nodes = vec![start, arcs[first].to];
            let mut used = vec![first];
            let mut v = arcs[first].to;
            while v != end {
                let e = out_arcs[v]
                    .iter()
                    .copied()
                    .find(|&e| f[e] > 0)
                    .ok_or_else(|| FlowError::Infeasible(format!("flow stranded at node {v}")))?;
                used.push(e);
                v = arcs[e].to;
                nodes.push(v);
            }
            let amount = used.iter().map(|&e| f[e]).min().unwrap_or(0);
            for &e in &used {
                f[e] -= amount;
            }
            if keep {
                paths.push(FlowPath { nodes, arcs: used, amount });
            }
        }
    }
    let mut reconstructed = vec![0i64; arcs.len()];
    for p in &paths {
        for &e in &p.arcs {
            reconstructed[e] += p.amount;
        }
    }
    // Differs from the cancelled flow only by dropped t -> s paths.
    Ok(Decomposition { paths, flow: reconstructed })
}

fn check_feasible(net: &FlowNetwork, flow: &[i64]) -> Result<(), FlowError> {
    let arcs = net.arcs();
    if flow.len() != arcs.len() {
        return Err(FlowError::Infeasible(format!("{} arc values for {} arcs", flow.len(), arcs.len())));
    }
    let mut excess = vec![0i64; net.nodes()];
    for (i, a) in arcs.iter().enumerate() {
        if flow[i] < 0 || flow[i] > a.cap {
            return Err(FlowError::Infeasible(format!("arc {i} carries {} of {}", flow[i], a.cap)));
        }
        excess[a.from] -= flow[i];
        excess[a.to] += flow[i];
    }
    for (v, &e) in excess.iter().enumerate() {
        if v != net.source() && v != net.sink() && e != 0 {
            return Err(FlowError::Infeasible(format!("conservation violated at node {v}")));
        }
    }
    Ok(())
}

/// Arc indices of some directed cycle among positive-flow arcs.
fn find_cycle(net: &FlowNetwork, out_arcs: &[Vec<usize>], f: &[i64]) -> Option<Vec<usize>> {
    let arcs = net.arcs();
    let nodes = net.nodes();
    // 0 = unseen, 1 = on stack, 2 = finished
    let mut state = vec![0u8; nodes];
    let mut via = vec![usize::MAX; nodes];
    for root in 0..nodes {
        if state[root] != 0 {
            continue;
        }
        let mut stack: Vec<(usize, usize)> = vec![(root, 0)];
        state[root] = 1;
        while let Some(top) = stack.last_mut() {
            let v = top.0;
            let next = out_arcs[v][top.1..].iter().position(|&e| f[e] > 0);
            if let Some(offset) = next {
                let e = out_arcs[v][top.1 + offset];
                top.1 += offset + 1;
                let u = arcs[e].to;
                match state[u] {
                    0 => {
                        state[u] = 1;
                        via[u] = e;
                        stack.push((u, 0));
                    }
                    1 => {
                        let mut cycle = vec![e];
                        let mut w = v;
                        while w != u {
                            let back = via[w];
                            cycle.push(back);
                            w = arcs[back].from;
                        }
                        cycle.reverse();
                        return Some(cycle);
                    }
                    _ => {}
                }
            } else {
                state[v] = 2;
                stack.pop();
            }
        }
    }
    None
}
