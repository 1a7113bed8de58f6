//! Multiplicative-weights driver, dual certificates, and the outer search
//! over the objective level.

mod certificate;
mod mmwu;
mod schedule;
mod witness;

pub use certificate::{DualAccumulator, DualCertificate};
pub use mmwu::{default_replicas, min_set_size, mmwu_run, MmwuOutcome, MmwuRun, RegretCheck, WidthSample, SPECTRAL_TOLERANCE};
pub use schedule::MmwuSchedule;
pub use witness::{primal_witness, PrimalWitness, WitnessError, EXHAUSTIVE_SET_CAP};

use crate::embed::{EmbedConfig, EmbedError, DEFAULT_DENSE_CAP};
use crate::feedback::FeedbackViolation;
use crate::graph::{brute_force_opt, GraphError, SeparatorSolution, WeightedGraph, DEFAULT_BRUTE_FORCE_CAP};
use crate::maxflow::MaxFlowSolver;
use crate::oracle::{OracleConfig, OracleError};
use crate::rational::Rational;

#[derive(Debug, Clone, PartialEq)]
pub struct SolverConfig {
    pub oracle: OracleConfig,
    pub embed: EmbedConfig,
    /// Upper limit on iterations per run.
    pub iteration_cap: usize,
    /// Parallel oracle replicas; `min(64, ceil(n^ε ln n))` when unset.
    pub replicas: Option<usize>,
    pub dense_cap: usize,
    /// Relative tolerance on the top eigenvalue of an averaged dual.
    pub certificate_tolerance: f64,
    /// Measure the spectral norm of every feedback matrix.
    pub check_width: bool,
    /// Answer by exhaustive search when `n ≤ brute_cap`.
    pub brute_bypass: bool,
    /// Compare against exhaustive search when `n ≤ brute_cap`.
    pub compare_brute: bool,
    pub brute_cap: usize,
    pub telemetry: bool,
    pub dump_embedding: bool,
}

impl SolverConfig {
    pub fn new(balance: Rational, epsilon: f64) -> Self {
        Self {
            oracle: OracleConfig::new(balance, epsilon),
            embed: EmbedConfig::default(),
            iteration_cap: 10_000,
            replicas: None,
            dense_cap: DEFAULT_DENSE_CAP,
            certificate_tolerance: 1e-6,
            check_width: true,
            brute_bypass: false,
            compare_brute: true,
            brute_cap: DEFAULT_BRUTE_FORCE_CAP,
            telemetry: false,
            dump_embedding: false,
        }
    }
}

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum SolverError {
    #[error(transparent)]
    Oracle(#[from] OracleError),
    #[error(transparent)]
    Embed(#[from] EmbedError),
    #[error(transparent)]
    Graph(#[from] GraphError),
    #[error("infeasible feedback: {0}")]
    InfeasibleFeedback(FeedbackViolation),
    #[error("feedback at iteration {iteration} has positive inner product {value:e} with the embedding")]
    PositiveFeedback { iteration: usize, value: f64 },
    #[error("{kind} feedback has norm {norm:e} above its bound {bound:e}")]
    WidthExceeded { kind: &'static str, norm: f64, bound: f64 },
    #[error("averaged dual at α = {alpha} rejected after a full run: {}", issues.join("; "))]
    CertificateRejected { alpha: Rational, issues: Vec<String> },
}

impl SolverError {
    /// Whether the error reflects a failed internal check rather than bad input.
    pub fn is_internal(&self) -> bool {
        !matches!(
            self,
            SolverError::Oracle(OracleError::Params(_))
                | SolverError::Graph(_)
                | SolverError::Embed(EmbedError::InvalidParams(_))
        )
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct Counters {
    pub maxflow_calls: usize,
    pub oracle_attempts: usize,
    pub iterations: usize,
    pub runs: usize,
}

/// One step of the search over `α`.
#[derive(Debug, Clone, PartialEq)]
pub struct SearchStep {
    pub alpha: Rational,
    pub outcome: &'static str,
    pub iterations: usize,
    pub schedule_length: usize,
    pub maxflow_calls: usize,
    /// Bound `replicas × attempts × hops × iterations` on the calls.
    pub maxflow_bound: usize,
    pub separator_cost: Option<u64>,
    /// `2 c' β n / α`.
    pub kappa: f64,
    pub note: String,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SolveReport {
    pub n: usize,
    pub separator: SeparatorSolution,
    /// Balance the separator is guaranteed to meet.
    pub cut_balance: Rational,
    /// Smallest `α` at which a separator was found.
    pub alpha_star: Option<Rational>,
    /// Accepted certificate at the largest certified `α`.
    pub certificate: Option<DualCertificate>,
    pub brute_opt: Option<u64>,
    pub ratio_vs_brute: Option<Rational>,
    /// `4 OPT ≥ α − δ` for the certificate, when both are known.
    pub lower_bound_consistent: Option<bool>,
    pub kappa: Option<f64>,
    pub counters: Counters,
    pub steps: Vec<SearchStep>,
    pub seed: u64,
    pub bypassed: bool,
    pub telemetry: Vec<String>,
}

/// Searches `α ∈ [1, w(V)]`: doubling from 1 until a run separates, then
/// integer bisection between the last non-separating and first separating
/// value. Returns the cheapest separator seen, or `C = V`.
pub fn binary_search_solve(
    g: &WeightedGraph,
    config: &SolverConfig,
    seed: u64,
    solver: &(impl MaxFlowSolver + ?Sized),
) -> Result<SolveReport, SolverError> {
    let n = g.n();
    let c = config.oracle.balance;
    let brute = if (config.compare_brute || config.brute_bypass) && n <= config.brute_cap {
        Some(brute_force_opt(g, &c, config.brute_cap)?)
    } else {
        None
    };
    let mut report = SolveReport {
        n,
        separator: SeparatorSolution::everything(g),
        cut_balance: config.oracle.cut_balance.unwrap_or(c / Rational::from_integer(8)),
        alpha_star: None,
        certificate: None,
        brute_opt: brute.as_ref().map(|b| b.0),
        ratio_vs_brute: None,
        lower_bound_consistent: None,
        kappa: None,
        counters: Counters::default(),
        steps: Vec::new(),
        seed,
        bypassed: false,
        telemetry: Vec::new(),
    };
    if config.brute_bypass {
        if let Some((_, s)) = &brute {
            report.separator = s.clone();
            report.cut_balance = c;
            report.bypassed = true;
            finish(&mut report);
            return Ok(report);
        }
    }
    if n < 2 {
        finish(&mut report);
        return Ok(report);
    }

    let total = g.total_weight() as i128;
    let mut step_index = 0u64;
    let mut run_at = |alpha: i128, report: &mut SolveReport| -> Result<bool, SolverError> {
        let alpha = Rational::from_integer(alpha);
        let run = mmwu_run(g, alpha, config, seed, &[step_index], solver)?;
        step_index += 1;
        let counters = &mut report.counters;
        counters.maxflow_calls += run.maxflow_calls;
        counters.oracle_attempts += run.oracle_attempts;
        counters.iterations += run.iterations;
        counters.runs += 1;
        report.telemetry.extend(run.telemetry.iter().map(|l| format!("alpha={alpha} {l}")));
        let mut step = SearchStep {
            alpha,
            outcome: run.outcome.tag(),
            iterations: run.iterations,
            schedule_length: run.schedule.iterations,
            maxflow_calls: run.maxflow_calls,
            maxflow_bound: run.maxflow_bound(),
            separator_cost: None,
            kappa: run.params.kappa(),
            note: String::new(),
        };
        let separated = match run.outcome {
            MmwuOutcome::Separator(s) => {
                step.separator_cost = Some(s.cost);
                if report.alpha_star.is_none_or(|a| alpha < a) {
                    report.alpha_star = Some(alpha);
                }
                if better(&s, &report.separator) {
                    report.separator = s;
                    report.kappa = Some(step.kappa);
                }
                true
            }
            MmwuOutcome::Certificate(cert) => {
                if report.certificate.as_ref().is_none_or(|old| cert.alpha > old.alpha) {
                    report.certificate = Some(cert);
                }
                false
            }
            MmwuOutcome::Inconclusive(reason) => {
                step.note = reason;
                false
            }
        };
        report.steps.push(step);
        Ok(separated)
    };

    let mut failed: Option<i128> = None;
    let mut separated: Option<i128> = None;
    let mut alpha = 1i128;
    loop {
        if run_at(alpha, &mut report)? {
            separated = Some(alpha);
            break;
        }
        failed = Some(alpha);
        if alpha >= total {
            break;
        }
        alpha = (2 * alpha).min(total);
    }
    if let (Some(mut lo), Some(mut hi)) = (failed, separated) {
        while hi - lo > 1 {
            let mid = lo + (hi - lo) / 2;
            if run_at(mid, &mut report)? {
                hi = mid;
            } else {
                lo = mid;
            }
        }
    }
    finish(&mut report);
    Ok(report)
}

/// One row of an ε sweep.
#[derive(Debug, Clone, PartialEq)]
pub struct SweepRow {
    pub epsilon: f64,
    pub cost: u64,
    pub maxflow_calls: usize,
    pub seconds: f64,
    /// `2 c' β n / α` of the run that produced the separator, or of the last run.
    pub kappa: f64,
}

/// Solves `g` once per `ε` in `epsilons` with otherwise identical settings.
pub fn epsilon_sweep(
    g: &WeightedGraph,
    config: &SolverConfig,
    epsilons: &[f64],
    seed: u64,
    solver: &(impl MaxFlowSolver + ?Sized),
) -> Result<Vec<SweepRow>, SolverError> {
    epsilons
        .iter()
        .map(|&epsilon| {
            let mut cfg = config.clone();
            cfg.oracle.epsilon = epsilon;
            let start = std::time::Instant::now();
            let r = binary_search_solve(g, &cfg, seed, solver)?;
            let kappa = r.kappa.or_else(|| r.steps.last().map(|s| s.kappa)).unwrap_or(f64::NAN);
            Ok(SweepRow {
                epsilon,
                cost: r.separator.cost,
                maxflow_calls: r.counters.maxflow_calls,
                seconds: start.elapsed().as_secs_f64(),
                kappa,
            })
        })
        .collect()
}

fn better(new: &SeparatorSolution, old: &SeparatorSolution) -> bool {
    (new.cost, std::cmp::Reverse(new.balance_achieved)) < (old.cost, std::cmp::Reverse(old.balance_achieved))
}

fn finish(report: &mut SolveReport) {
    if let Some(opt) = report.brute_opt {
        if opt > 0 {
            report.ratio_vs_brute = Some(Rational::new(report.separator.cost as i128, opt as i128));
        } else if report.separator.cost == 0 {
            report.ratio_vs_brute = Some(Rational::from_integer(1));
        }
        if let Some(cert) = &report.certificate {
            report.lower_bound_consistent = Some(Rational::from_integer(4 * opt as i128) >= cert.lower_bound);
        }
    }
}
