//! The feedback oracle: an easy case on the low-norm set, projections
//! solved by max flow, and chaining of projected matchings into violating
//! paths.

mod chain;
mod matching;
mod params;

pub use chain::{chain_feedback, chain_norm_bound, check_violating, compose, harvest, violates, violating_subpath};
pub use matching::{matching, MatchingOutcome, MatchingReport, MASS_GUARD};
pub use params::{rationalize_beta, unscale, OracleConfig, OracleParams};

use rand::Rng;
use rand_distr::StandardNormal;
use rayon::prelude::*;

use crate::embed::Embedding;
use crate::feedback::{set_spread, FeedbackKind, FeedbackMatrix};
use crate::graph::{SeparatorSolution, Violation, WeightedGraph};
use crate::maxflow::{FlowError, MaxFlowSolver};
use crate::rational::{to_f64, Rational};
use crate::rng::{substream, Role};

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum OracleError {
    #[error("invalid oracle parameters: {0}")]
    Params(String),
    #[error("side size {side} needs {} sortable vertices, only {available} available", 2 * side)]
    SideTooLarge { side: usize, available: usize },
    #[error(transparent)]
    Flow(#[from] FlowError),
    #[error("returned cut fails validation: {0}")]
    InvalidSeparator(Violation),
    #[error("internal inconsistency: {0}")]
    Internal(String),
}

/// Final oracle answer for one iteration.
#[derive(Debug, Clone, PartialEq)]
pub enum OracleOutcome {
    Separator(SeparatorSolution),
    Feedback(FeedbackMatrix),
    /// Every replica used its attempt budget without a decision.
    Exhausted,
}

impl OracleOutcome {
    pub fn tag(&self) -> &'static str {
        match self {
            OracleOutcome::Separator(_) => "separator",
            OracleOutcome::Feedback(f) => f.kind.name(),
            OracleOutcome::Exhausted => "exhausted",
        }
    }
}

/// Per-attempt diagnostics.
#[derive(Debug, Clone, PartialEq)]
pub struct AttemptTelemetry {
    pub replica: usize,
    pub attempt: usize,
    pub outcome: &'static str,
    /// Smallest cut seen in the attempt.
    pub cut: f64,
    /// Largest endpoint mass seen in the attempt.
    pub mass: f64,
    /// Total matched pairs over the attempt's projections.
    pub matched: usize,
    pub violating: usize,
    pub maxflow_calls: usize,
}

impl AttemptTelemetry {
    pub fn line(&self) -> String {
        format!(
            "replica={} attempt={} outcome={} cut={:.6} mass={:.6} matched={} violating={} maxflow={}",
            self.replica, self.attempt, self.outcome, self.cut, self.mass, self.matched, self.violating, self.maxflow_calls
        )
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct OracleReport {
    pub outcome: OracleOutcome,
    pub maxflow_calls: usize,
    /// Lockstep rounds executed.
    pub rounds: usize,
    pub telemetry: Vec<AttemptTelemetry>,
}

/// Vertices with `‖ṽ_i‖² ≤ 4 / c`.
pub fn low_norm_set(emb: &Embedding, params: &OracleParams) -> Vec<usize> {
    let cutoff = params.upper_norm_cutoff();
    (0..emb.n()).filter(|&i| emb.sq_norm(i) <= cutoff).collect()
}

/// Feedback `−(α/n) I + (2α/(ξ n²)) K_S` when the low-norm set `S` has
/// `K_S • X̃ < ξ n² / 4`.
pub fn easy_case(emb: &Embedding, params: &OracleParams) -> Option<FeedbackMatrix> {
    let set = low_norm_set(emb, params);
    let spread_n2 = params.spread_n2();
    if set_spread(&set, emb.columns()) >= to_f64(&spread_n2) / 4.0 {
        return None;
    }
    let n = params.n;
    let z = Rational::from_integer(2) * params.alpha / spread_n2;
    let a = to_f64(&params.alpha_per_vertex());
    let width = a.max(to_f64(&z) * set.len() as f64 - a);
    Some(FeedbackMatrix {
        kind: FeedbackKind::Easy,
        n,
        alpha: params.alpha,
        y: vec![-params.alpha_per_vertex(); n],
        set_term: Some((set, z)),
        paths: Vec::new(),
        lambda: Vec::new(),
        width_bound: width,
    })
}

/// Mutable per-replica state carried across lockstep rounds.
#[derive(Debug, Clone)]
struct Replica {
    gap: f64,
    blocked_streak: usize,
}

const BLOCKED_STREAK_LIMIT: usize = 3;

enum AttemptResult {
    Done(OracleOutcome),
    Continue,
}

/// Runs the full oracle: the easy case, then `replicas` independent chains
/// in lockstep rounds of one attempt each. The lowest-index replica that
/// decides in a round wins; all replicas finish that round, so call counts
/// are independent of scheduling.
///
/// Each attempt draws `hops` Gaussian directions from substream
/// `(seed, Direction, stream ++ [replica, attempt])`, projects once per
/// direction, and tries the chain of the directions and of their negations.
pub fn run_oracle(
    g: &WeightedGraph,
    emb: &Embedding,
    params: &OracleParams,
    replicas: usize,
    seed: u64,
    stream: &[u64],
    solver: &(impl MaxFlowSolver + ?Sized),
) -> Result<OracleReport, OracleError> {
    if let Some(fb) = easy_case(emb, params) {
        return Ok(OracleReport { outcome: OracleOutcome::Feedback(fb), maxflow_calls: 0, rounds: 0, telemetry: Vec::new() });
    }
    let low = low_norm_set(emb, params);
    let mut states = vec![Replica { gap: params.gap, blocked_streak: 0 }; replicas.max(1)];
    let mut report = OracleReport { outcome: OracleOutcome::Exhausted, maxflow_calls: 0, rounds: 0, telemetry: Vec::new() };
    for attempt in 0..params.attempts {
        let results: Vec<Result<(AttemptResult, AttemptTelemetry), OracleError>> = states
            .par_iter_mut()
            .enumerate()
            .map(|(replica, state)| {
                let mut path = stream.to_vec();
                path.extend([replica as u64, attempt as u64]);
                run_attempt(g, emb, &low, params, state, seed, &path, solver).map(|(r, mut t)| {
                    t.replica = replica;
                    t.attempt = attempt;
                    (r, t)
                })
            })
            .collect();
        report.rounds += 1;
        let mut winner = None;
        for r in results {
            let (result, tel) = r?;
            report.maxflow_calls += tel.maxflow_calls;
            report.telemetry.push(tel);
            if let (AttemptResult::Done(outcome), None) = (result, &winner) {
                winner = Some(outcome);
            }
        }
        if let Some(outcome) = winner {
            report.outcome = outcome;
            return Ok(report);
        }
    }
    Ok(report)
}

#[allow(clippy::too_many_arguments)]
fn run_attempt(
    g: &WeightedGraph,
    emb: &Embedding,
    low: &[usize],
    params: &OracleParams,
    state: &mut Replica,
    seed: u64,
    path: &[u64],
    solver: &(impl MaxFlowSolver + ?Sized),
) -> Result<(AttemptResult, AttemptTelemetry), OracleError> {
    let mut rng = substream(seed, Role::Direction, path);
    let mut tel = AttemptTelemetry {
        replica: 0,
        attempt: 0,
        outcome: "none",
        cut: f64::INFINITY,
        mass: 0.0,
        matched: 0,
        violating: 0,
        maxflow_calls: 0,
    };
    let mut forward = Vec::with_capacity(params.hops);
    for _ in 0..params.hops {
        let u: Vec<f64> = (0..emb.dim).map(|_| rng.sample::<f64, _>(StandardNormal)).collect();
        let rep = matching(g, emb, low, &u, params, state.gap, solver)?;
        tel.maxflow_calls += 1;
        tel.cut = tel.cut.min(to_f64(&rep.cut));
        tel.mass = tel.mass.max(rep.mass);
        if rep.gap_blocked {
            state.blocked_streak += 1;
            if params.gap_autotune && state.blocked_streak >= BLOCKED_STREAK_LIMIT && state.gap / 2.0 >= params.gap_floor {
                state.gap /= 2.0;
                state.blocked_streak = 0;
            }
        } else {
            state.blocked_streak = 0;
        }
        match rep.outcome {
            MatchingOutcome::Separator(s) => {
                tel.outcome = "separator";
                return Ok((AttemptResult::Done(OracleOutcome::Separator(s)), tel));
            }
            MatchingOutcome::Feedback(f) => {
                tel.outcome = "flow";
                return Ok((AttemptResult::Done(OracleOutcome::Feedback(f)), tel));
            }
            MatchingOutcome::Matching(pairs) => {
                tel.matched += pairs.len();
                forward.push(pairs);
            }
        }
    }
    let backward: Vec<Vec<(usize, usize)>> =
        forward.iter().map(|m| m.iter().map(|&(x, y)| (y, x)).collect()).collect();
    for run in [&forward, &backward] {
        let found = harvest(&compose(run), emb, params.slack);
        tel.violating = tel.violating.max(found.len());
        if found.len() >= params.path_threshold {
            tel.outcome = "chain";
            return Ok((AttemptResult::Done(OracleOutcome::Feedback(chain_feedback(found, params))), tel));
        }
    }
    tel.outcome = "matching";
    Ok((AttemptResult::Continue, tel))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{generate, validate_separator, GeneratorKind};
    use crate::maxflow::Dinic;

    fn params(n: usize, alpha: i64) -> OracleParams {
        OracleParams::new(n, Rational::from_integer(alpha as i128), &OracleConfig::new(Rational::new(1, 3), 0.5)).unwrap()
    }

    #[test]
    fn identical_vectors_trigger_easy_case() {
        let emb = Embedding::from_columns(vec![vec![1.0, 0.0]; 6], 0.1, 0.1);
        let p = params(6, 2);
        let fb = easy_case(&emb, &p).expect("fires");
        assert_eq!(fb.set_term.as_ref().unwrap().0, (0..6).collect::<Vec<_>>());
        // Σ y + ξ n² z = −α + 2α = α
        assert_eq!(fb.dual_objective(p.spread_n2()), p.alpha);
        assert!(fb.inner_with_gram(emb.columns()) < 0.0);
    }

    #[test]
    fn spread_vectors_skip_easy_case() {
        let n = 6;
        let cols: Vec<Vec<f64>> = (0..n).map(|i| (0..n).map(|j| if i == j { 1.0 } else { 0.0 }).collect()).collect();
        let emb = Embedding::from_columns(cols, 0.1, 0.1);
        // K_S • X̃ = n(n−1) = 30 ≥ ξ n² / 4 = 2.25
        assert!(easy_case(&emb, &params(n, 1)).is_none());
    }

    fn two_cluster_embedding(n: usize) -> Embedding {
        let cols = (0..n).map(|i| if i < n / 2 { vec![-1.0, 0.1 * i as f64] } else { vec![1.0, 0.1 * i as f64] }).collect();
        Embedding::from_columns(cols, 0.1, 0.1)
    }

    #[test]
    fn separated_blobs_give_a_separator() {
        let g = generate(&GeneratorKind::TwoBlobs { left: 8, right: 8, bridge: 2 }, 0).unwrap();
        let emb = two_cluster_embedding(16);
        let p = params(16, 1);
        let low = low_norm_set(&emb, &p);
        let rep = matching(&g, &emb, &low, &[1.0, 0.0], &p, p.gap, &Dinic).unwrap();
        match rep.outcome {
            MatchingOutcome::Separator(s) => {
                assert_eq!(validate_separator(&g, &s, &p.cut_balance), Ok(()));
                assert!(Rational::from_integer(s.cost as i128) <= p.cut_cost_bound());
            }
            other => panic!("expected a separator, got {other:?}"),
        }
    }

    #[test]
    fn heavy_complete_graph_gives_flow_feedback() {
        let n = 8;
        let g = generate(&GeneratorKind::Complete { n }, 0).unwrap().reweighted(vec![400; n]).unwrap();
        let emb = two_cluster_embedding(n);
        let p = params(n, 1);
        let low = low_norm_set(&emb, &p);
        let rep = matching(&g, &emb, &low, &[1.0, 0.0], &p, p.gap, &Dinic).unwrap();
        let MatchingOutcome::Feedback(fb) = rep.outcome else { panic!("expected feedback, got {:?}", rep.outcome) };
        assert_eq!(fb.check_feasible(&g, p.spread_n2()), Ok(()));
        assert!(fb.inner_with_gram(emb.columns()) <= -to_f64(&p.alpha) + 1e-9);
        // Assembled summands equal (α/n) I − L(D).
        let op = fb.operator();
        let dense = crate::linalg::materialize(&op);
        for i in 0..n {
            for j in 0..n {
                if i != j && ((i < n / 2) == (j < n / 2)) {
                    assert!(dense[(i, j)].abs() < 1e-12, "same-cluster entry ({i},{j}) = {}", dense[(i, j)]);
                }
            }
        }
    }

    #[test]
    fn matching_is_skew_symmetric() {
        let g = generate(&GeneratorKind::Complete { n: 10 }, 0).unwrap().reweighted(vec![1000; 10]).unwrap();
        let cols = (0..10).map(|i| vec![0.03 * i as f64, 1.0, 0.01 * (i % 3) as f64]).collect();
        let emb = Embedding::from_columns(cols, 0.1, 0.1);
        let mut cfg = OracleConfig::new(Rational::new(1, 3), 0.5);
        cfg.cut_balance = Some(Rational::new(1, 5));
        let p = OracleParams::new(10, Rational::from_integer(1), &cfg).unwrap();
        let low = low_norm_set(&emb, &p);
        let u = [1.0, 0.2, -0.5];
        let neg = [-1.0, -0.2, 0.5];
        let a = matching(&g, &emb, &low, &u, &p, 0.01, &Dinic).unwrap();
        let b = matching(&g, &emb, &low, &neg, &p, 0.01, &Dinic).unwrap();
        let (MatchingOutcome::Matching(ma), MatchingOutcome::Matching(mb)) = (a.outcome, b.outcome) else {
            panic!("expected matchings");
        };
        assert!(!ma.is_empty());
        let mut reversed: Vec<(usize, usize)> = ma.iter().map(|&(x, y)| (y, x)).collect();
        reversed.sort_unstable();
        assert_eq!(reversed, mb);
        assert!(b.flipped && !a.flipped);
    }

    #[test]
    fn zero_direction_is_deterministic() {
        let g = generate(&GeneratorKind::Path { n: 8 }, 0).unwrap();
        let emb = two_cluster_embedding(8);
        let p = params(8, 1);
        let low = low_norm_set(&emb, &p);
        let a = matching(&g, &emb, &low, &[0.0, 0.0], &p, p.gap, &Dinic).unwrap();
        let b = matching(&g, &emb, &low, &[0.0, 0.0], &p, p.gap, &Dinic).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn lockstep_is_reproducible() {
        let g = generate(&GeneratorKind::Grid { rows: 3, cols: 4 }, 0).unwrap();
        let cols: Vec<Vec<f64>> = (0..12).map(|i| (0..12).map(|j| if i == j { 1.0 } else { 0.0 }).collect()).collect();
        let emb = Embedding::from_columns(cols, 0.1, 0.1);
        let p = params(12, 1);
        let a = run_oracle(&g, &emb, &p, 4, 5, &[1], &Dinic).unwrap();
        let b = run_oracle(&g, &emb, &p, 4, 5, &[1], &Dinic).unwrap();
        assert_eq!(a, b);
        assert!(a.maxflow_calls <= 4 * p.attempts * p.hops);
        assert!(matches!(a.outcome, OracleOutcome::Separator(_)));
    }
}
