use super::certificate::{DualAccumulator, DualCertificate};
use super::schedule::MmwuSchedule;
use super::{SolverConfig, SolverError};
use crate::embed::{project_embedding, Embedding, ImplicitMatrix};
use crate::graph::{SeparatorSolution, WeightedGraph};
use crate::linalg::spectral_norm;
use crate::maxflow::MaxFlowSolver;
use crate::oracle::{run_oracle, OracleOutcome, OracleParams};
use crate::rational::{to_f64, Rational};
use crate::rng::{substream, Role};

/// Relative tolerance for measured spectral quantities.
pub const SPECTRAL_TOLERANCE: f64 = 0.05;

#[derive(Debug, Clone, PartialEq)]
pub enum MmwuOutcome {
    Separator(SeparatorSolution),
    Certificate(DualCertificate),
    /// Neither a separator nor an accepted certificate.
    Inconclusive(String),
}

impl MmwuOutcome {
    pub fn tag(&self) -> &'static str {
        match self {
            MmwuOutcome::Separator(_) => "separator",
            MmwuOutcome::Certificate(_) => "certificate",
            MmwuOutcome::Inconclusive(_) => "inconclusive",
        }
    }
}

/// Measured terms of the regret inequality
/// `λ_min(−Σ N) / t ≥ −(1/n) mean(N • X̃) − η ρ² − ln n / (η t)`.
#[derive(Debug, Clone, PartialEq)]
pub struct RegretCheck {
    pub iterations: usize,
    pub lhs: f64,
    pub rhs: f64,
    pub mean_inner: f64,
    pub slack: f64,
    pub holds: bool,
}

/// Per-case width check of one feedback matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct WidthSample {
    pub kind: &'static str,
    pub norm: f64,
    pub bound: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct MmwuRun {
    pub outcome: MmwuOutcome,
    pub schedule: MmwuSchedule,
    pub params: OracleParams,
    pub replicas: usize,
    pub iterations: usize,
    pub maxflow_calls: usize,
    /// Replica attempts executed.
    pub oracle_attempts: usize,
    /// Feedback counts by kind: easy, flow, chain.
    pub feedback_counts: [usize; 3],
    pub regret: Option<RegretCheck>,
    pub widths: Vec<WidthSample>,
    pub telemetry: Vec<String>,
}

impl MmwuRun {
    /// `replicas × attempts × hops × iterations`.
    pub fn maxflow_bound(&self) -> usize {
        self.replicas * self.params.attempts * self.params.hops * self.iterations
    }
}

/// Default replica count `min(64, ceil(n^ε ln n))`.
pub fn default_replicas(n: usize, epsilon: f64) -> usize {
    let nf = n as f64;
    ((nf.powf(epsilon) * nf.ln()).ceil() as usize).clamp(1, 64)
}

/// One multiplicative-weights run at objective level `alpha`.
///
/// Returns a separator as soon as the oracle finds one. Otherwise runs
/// `min(T, cap)` iterations and assembles the averaged dual; an accepted
/// certificate proves the relaxation optimum is at least `α / 2`. A run
/// that reached `T` but whose certificate fails is an error; a capped run
/// in that state is inconclusive.
pub fn mmwu_run(
    g: &WeightedGraph,
    alpha: Rational,
    config: &SolverConfig,
    seed: u64,
    stream: &[u64],
    solver: &(impl MaxFlowSolver + ?Sized),
) -> Result<MmwuRun, SolverError> {
    let n = g.n();
    let params = OracleParams::new(n, alpha, &config.oracle)?;
    let rho = params.width();
    let schedule = MmwuSchedule::new(n, alpha, rho, config.iteration_cap);
    let replicas = config.replicas.unwrap_or_else(|| default_replicas(n, config.oracle.epsilon)).max(1);
    let spread_n2 = params.spread_n2();
    let min_set = min_set_size(n, &params.balance);

    let mut run = MmwuRun {
        outcome: MmwuOutcome::Inconclusive(String::new()),
        schedule: schedule.clone(),
        params: params.clone(),
        replicas,
        iterations: 0,
        maxflow_calls: 0,
        oracle_attempts: 0,
        feedback_counts: [0; 3],
        regret: None,
        widths: Vec::new(),
        telemetry: Vec::new(),
    };
    let mut accum = ImplicitMatrix::new(n);
    let mut duals = DualAccumulator::new(n);
    let mut inner_sum = 0.0;

    for t in 0..schedule.run_length() {
        let mut path = stream.to_vec();
        path.push(t as u64);
        let emb = embed(&accum, &params, seed, &path, config)?;
        if config.dump_embedding {
            run.telemetry.push(format!("embedding t={t}\n{}", emb.render()));
        }
        let report = run_oracle(g, &emb, &params, replicas, seed, &path, solver)?;
        run.iterations = t + 1;
        run.maxflow_calls += report.maxflow_calls;
        run.oracle_attempts += report.telemetry.len();
        if config.telemetry {
            for line in &report.telemetry {
                run.telemetry.push(format!("t={t} {}", line.line()));
            }
        }
        let fb = match report.outcome {
            OracleOutcome::Separator(s) => {
                if config.telemetry {
                    run.telemetry.push(format!("t={t} separator cost={}", s.cost));
                }
                run.outcome = MmwuOutcome::Separator(s);
                return Ok(run);
            }
            OracleOutcome::Exhausted => {
                run.outcome = MmwuOutcome::Inconclusive(format!("oracle exhausted its attempts at iteration {t}"));
                return Ok(run);
            }
            OracleOutcome::Feedback(fb) => fb,
        };
        fb.check_feasible(g, spread_n2).map_err(SolverError::InfeasibleFeedback)?;
        let inner = fb.inner_with_gram(emb.columns());
        if inner > 1e-9 * to_f64(&alpha) {
            return Err(SolverError::PositiveFeedback { iteration: t, value: inner });
        }
        if fb.width_bound > rho * (1.0 + 1e-12) {
            return Err(SolverError::WidthExceeded { kind: fb.kind.name(), norm: fb.width_bound, bound: rho });
        }
        if config.check_width {
            let mut rng = substream(seed, Role::PowerIteration, &path);
            let norm = spectral_norm(&fb.operator(), config.dense_cap, &mut rng);
            let allowed = fb.width_bound * (1.0 + SPECTRAL_TOLERANCE) + 1e-12;
            if norm > allowed {
                return Err(SolverError::WidthExceeded { kind: fb.kind.name(), norm, bound: fb.width_bound });
            }
            run.widths.push(WidthSample { kind: fb.kind.name(), norm, bound: fb.width_bound });
        }
        run.feedback_counts[fb.kind as usize] += 1;
        if config.telemetry {
            run.telemetry.push(format!("t={t} feedback={} inner={inner:.6e} width={:.6e}", fb.kind.name(), fb.width_bound));
        }
        inner_sum += inner;
        duals.add(&fb, spread_n2);
        accum.accumulate(&fb, schedule.eta);
    }

    let t = run.iterations;
    let mut mean = ImplicitMatrix::new(n);
    mean.add_scaled(&accum, 1.0 / (schedule.eta * t as f64));
    let mut path = stream.to_vec();
    path.push(u64::MAX);
    let cert = duals.certify(
        g,
        &mean,
        alpha,
        schedule.delta,
        spread_n2,
        min_set,
        config.certificate_tolerance,
        config.dense_cap,
        seed,
        &path,
    );

    // λ_min(−Σ N) / t = −λ_max(mean N) = −(λ_max(N_cert) + δ/n).
    let lhs = -(cert.lambda_max + to_f64(&schedule.delta) / n as f64);
    let mean_inner = inner_sum / t as f64;
    let slack = schedule.regret_slack(t);
    let rhs = -mean_inner / n as f64 - slack;
    run.regret = Some(RegretCheck {
        iterations: t,
        lhs,
        rhs,
        mean_inner,
        slack,
        holds: lhs >= rhs - SPECTRAL_TOLERANCE * rhs.abs(),
    });

    if cert.accepted() {
        run.outcome = MmwuOutcome::Certificate(cert);
    } else if schedule.completes() {
        return Err(SolverError::CertificateRejected { alpha, issues: cert.issues });
    } else {
        run.outcome = MmwuOutcome::Inconclusive(format!(
            "iteration cap {} below schedule length {}; averaged dual rejected: {}",
            schedule.cap,
            schedule.iterations,
            cert.issues.join("; ")
        ));
    }
    Ok(run)
}

fn embed(
    accum: &ImplicitMatrix,
    params: &OracleParams,
    seed: u64,
    path: &[u64],
    config: &SolverConfig,
) -> Result<Embedding, SolverError> {
    Ok(project_embedding(accum, params.gamma, params.tau, accum.certified_norm(), seed, path, &config.embed)?)
}

/// `ceil((1 − c/4) n)`: smallest size of a set in the spread constraint family.
pub fn min_set_size(n: usize, balance: &Rational) -> usize {
    let r = (Rational::from_integer(1) - balance / Rational::from_integer(4)) * Rational::from_integer(n as i128);
    r.ceil().to_integer() as usize
}
