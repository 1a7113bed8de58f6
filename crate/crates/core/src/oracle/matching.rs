use std::collections::BTreeMap;

use super::{OracleError, OracleParams};
use crate::embed::Embedding;
use crate::feedback::{FeedbackKind, FeedbackMatrix, PathTerm};
use crate::graph::{validate_separator, SeparatorSolution, WeightedGraph};
use crate::maxflow::{build_split_network, max_flow_with, MaxFlowSolver};
use crate::oracle::params::unscale;
use crate::rational::{to_f64, Rational};

/// Result of one projection.
#[derive(Debug, Clone, PartialEq)]
pub enum MatchingOutcome {
    /// A cheap balanced cut; terminates the oracle.
    Separator(SeparatorSolution),
    /// Flow-based feedback; terminates the oracle.
    Feedback(FeedbackMatrix),
    /// Directed pairs `(x, y)` with `w_y - w_x >= gap` and short distance.
    Matching(Vec<(usize, usize)>),
}

/// One projection's outcome with the quantities it was decided on.
#[derive(Debug, Clone, PartialEq)]
pub struct MatchingReport {
    pub outcome: MatchingOutcome,
    /// Minimum cut capacity.
    pub cut: Rational,
    /// `Σ d_xy ‖x − y‖²` over the flow endpoints.
    pub mass: f64,
    /// Pairs with positive flow, all rejected by the gap test.
    pub gap_blocked: bool,
    /// The direction was negated to its canonical sign.
    pub flipped: bool,
}

/// Relative guard below which the mass test falls through to matching.
pub const MASS_GUARD: f64 = 1e-9;

/// `Matching(u)`, computed for the canonical sign of `u` so that
/// `Matching(-u)` is `Matching(u)` with every pair reversed.
///
/// `low` is the set of vertices with squared norm at most `4 / c`.
pub fn matching(
    g: &WeightedGraph,
    emb: &Embedding,
    low: &[usize],
    u: &[f64],
    params: &OracleParams,
    gap: f64,
    solver: &(impl MaxFlowSolver + ?Sized),
) -> Result<MatchingReport, OracleError> {
    let flip = u.iter().find(|&&v| v != 0.0).is_some_and(|&v| v < 0.0);
    if flip {
        let neg: Vec<f64> = u.iter().map(|v| -v).collect();
        let mut report = canonical_matching(g, emb, low, &neg, params, gap, solver)?;
        if let MatchingOutcome::Matching(pairs) = &mut report.outcome {
            for p in pairs.iter_mut() {
                *p = (p.1, p.0);
            }
            pairs.sort_unstable();
        }
        report.flipped = true;
        Ok(report)
    } else {
        canonical_matching(g, emb, low, u, params, gap, solver)
    }
}

fn canonical_matching(
    g: &WeightedGraph,
    emb: &Embedding,
    low: &[usize],
    u: &[f64],
    params: &OracleParams,
    gap: f64,
    solver: &(impl MaxFlowSolver + ?Sized),
) -> Result<MatchingReport, OracleError> {
    let n = g.n();
    let w = emb.project(u);
    let mut order: Vec<usize> = if params.sort_over_all { (0..n).collect() } else { low.to_vec() };
    if 2 * params.side > order.len() {
        return Err(OracleError::SideTooLarge { side: params.side, available: order.len() });
    }
    order.sort_by(|&x, &y| w[x].total_cmp(&w[y]).then(x.cmp(&y)));
    let a: Vec<usize> = order[..params.side].to_vec();
    let b: Vec<usize> = order[order.len() - params.side..].to_vec();

    let net = build_split_network(g, &a, &b, params.beta_num, params.beta_den)?;
    let res = max_flow_with(solver, &net);
    let layout = net.layout().expect("split network has a layout");
    let cut = unscale(res.value, params.beta_den);

    if params.cut_is_small(res.value) {
        let in_sink = &res.sink_side;
        let mut side_a = Vec::new();
        let mut side_b = Vec::new();
        let mut sep = Vec::new();
        for x in 0..n {
            match (in_sink[layout.vertex(x)], in_sink[layout.bar(x)]) {
                (false, false) => side_a.push(x),
                (true, true) => side_b.push(x),
                (false, true) => sep.push(x),
                (true, false) => return Err(OracleError::Internal(format!("vertex {x} split against the cut"))),
            }
        }
        let s = SeparatorSolution::new(g, side_a, side_b, sep);
        validate_separator(g, &s, &params.cut_balance).map_err(OracleError::InvalidSeparator)?;
        if Rational::from_integer(s.cost as i128) > params.cut_cost_bound() {
            return Err(OracleError::Internal(format!("cut cost {} above bound {}", s.cost, params.cut_cost_bound())));
        }
        return Ok(MatchingReport { outcome: MatchingOutcome::Separator(s), cut, mass: 0.0, gap_blocked: false, flipped: false });
    }

    let mut ends: BTreeMap<(usize, usize), i64> = BTreeMap::new();
    for p in &res.paths {
        let vs = p.vertices(layout);
        *ends.entry((vs[0], vs[vs.len() - 1])).or_insert(0) += p.amount;
    }
    let mass: f64 = ends.iter().map(|(&(x, y), &d)| to_f64(&unscale(d, params.beta_den)) * emb.sq_dist(x, y)).sum();
    let target = 2.0 * to_f64(&params.alpha);

    if mass >= target + MASS_GUARD * target.max(1.0) {
        let fb = flow_feedback(g, &res, layout, &ends, params);
        return Ok(MatchingReport { outcome: MatchingOutcome::Feedback(fb), cut, mass, gap_blocked: false, flipped: false });
    }

    let all: Vec<(usize, usize)> = ends.keys().copied().filter(|&(x, y)| w[y] - w[x] >= gap).collect();
    let gap_blocked = all.is_empty() && !ends.is_empty();
    let mut used = vec![false; n];
    let mut pairs = Vec::new();
    for (x, y) in all {
        if emb.sq_dist(x, y) <= params.slack && !used[x] && !used[y] {
            used[x] = true;
            used[y] = true;
            pairs.push((x, y));
        }
    }
    Ok(MatchingReport { outcome: MatchingOutcome::Matching(pairs), cut, mass, gap_blocked, flipped: false })
}

fn flow_feedback(
    g: &WeightedGraph,
    res: &crate::maxflow::FlowResult,
    layout: &crate::maxflow::SplitLayout,
    ends: &BTreeMap<(usize, usize), i64>,
    params: &OracleParams,
) -> FeedbackMatrix {
    let n = g.n();
    let paths = res
        .paths
        .iter()
        .map(|p| PathTerm { vertices: p.vertices(layout), weight: to_f64(&unscale(p.amount, params.beta_den)) })
        .collect();
    let mut lambda = Vec::new();
    for (k, &(x, y)) in g.edges().iter().enumerate() {
        let (xy, yx) = layout.edge_arcs[k];
        let amount = res.flow[xy] + res.flow[yx];
        if amount > 0 {
            lambda.push(((x, y), unscale(amount, params.beta_den)));
        }
    }
    let mut degree = vec![0.0; n];
    for (&(x, y), &d) in ends {
        let d = to_f64(&unscale(d, params.beta_den));
        degree[x] += d;
        degree[y] += d;
    }
    let top = degree.iter().copied().fold(0.0, f64::max);
    let a = to_f64(&params.alpha_per_vertex());
    FeedbackMatrix {
        kind: FeedbackKind::Flow,
        n,
        alpha: params.alpha,
        y: vec![params.alpha_per_vertex(); n],
        set_term: None,
        paths,
        lambda,
        width_bound: a.max(2.0 * top - a),
    }
}
