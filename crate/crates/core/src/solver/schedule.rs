use crate::rational::{to_f64, Rational};

/// Step size and length of one multiplicative-weights run.
#[derive(Debug, Clone, PartialEq)]
pub struct MmwuSchedule {
    pub alpha: Rational,
    /// `α / 2`.
    pub delta: Rational,
    /// Uniform width bound on feedback matrices.
    pub rho: f64,
    /// `δ / (2 n ρ²)`.
    pub eta: f64,
    /// `ceil(4 n² ρ² ln n / δ²)`, saturating.
    pub iterations: usize,
    pub cap: usize,
    pub n: usize,
}

impl MmwuSchedule {
    pub fn new(n: usize, alpha: Rational, rho: f64, cap: usize) -> Self {
        let delta = alpha / Rational::from_integer(2);
        let d = to_f64(&delta);
        let nf = n as f64;
        let eta = d / (2.0 * nf * rho * rho);
        let t = (4.0 * nf * nf * rho * rho * nf.ln() / (d * d)).ceil();
        let iterations = if t.is_finite() && t < usize::MAX as f64 { (t as usize).max(1) } else { usize::MAX };
        Self { alpha, delta, rho, eta, iterations, cap, n }
    }

    /// Iterations actually run: `min(T, cap)`.
    pub fn run_length(&self) -> usize {
        self.iterations.min(self.cap)
    }

    /// Whether the full `T` fits under the cap.
    pub fn completes(&self) -> bool {
        self.iterations <= self.cap
    }

    /// `η ρ T`, equal to `2 n ρ ln n / δ` up to rounding of `T`.
    pub fn eta_rho_t(&self) -> f64 {
        self.eta * self.rho * self.iterations as f64
    }

    /// Regret slack `η ρ² + ln n / (η t)` after `t` iterations; `δ / n` at `t = T`.
    pub fn regret_slack(&self, t: usize) -> f64 {
        self.eta * self.rho * self.rho + (self.n as f64).ln() / (self.eta * t as f64)
    }
}
