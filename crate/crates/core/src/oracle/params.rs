use num_traits::Zero;

use super::OracleError;
use crate::rational::{to_f64, Rational};

/// User-facing oracle constants.
#[derive(Debug, Clone, PartialEq)]
pub struct OracleConfig {
    /// Target balance `c ∈ (0, 1/2)`.
    pub balance: Rational,
    /// Trade-off exponent `ε > 0`.
    pub epsilon: f64,
    /// Balance guaranteed for returned cuts; `balance / 8` when unset.
    pub cut_balance: Option<Rational>,
    /// Minimum projected gap `w_y - w_x` of a matched pair.
    pub gap: f64,
    /// Halve the gap (down to 1/16 of its start) when it blocks every pair
    /// in several consecutive calls.
    pub gap_autotune: bool,
    /// Grid constant for rationalizing the terminal capacity.
    pub beta_grid: Rational,
    /// Chain length is `ceil(hops_factor * slack * ln n)`, at least 1.
    pub hops_factor: f64,
    /// Violating paths needed: `ceil(n^(1 - threshold_exponent * ε))`.
    pub threshold_exponent: f64,
    /// Direction samples per replica; `ceil(n^ε ln n)` when unset.
    pub attempts: Option<usize>,
    /// Sort projections over all vertices instead of the low-norm set.
    pub sort_over_all: bool,
    pub gamma: Option<f64>,
    pub tau: Option<f64>,
}

impl OracleConfig {
    pub fn new(balance: Rational, epsilon: f64) -> Self {
        Self {
            balance,
            epsilon,
            cut_balance: None,
            gap: 0.05,
            gap_autotune: true,
            beta_grid: Rational::new(1, 4),
            hops_factor: 1.0,
            threshold_exponent: 1.0,
            attempts: None,
            sort_over_all: false,
            gamma: None,
            tau: None,
        }
    }
}

/// Constants of one oracle instance at a fixed objective level `alpha`.
#[derive(Debug, Clone, PartialEq)]
pub struct OracleParams {
    pub n: usize,
    pub alpha: Rational,
    pub balance: Rational,
    pub cut_balance: Rational,
    /// `9 c² / 4`.
    pub spread: Rational,
    pub gap: f64,
    pub gap_floor: f64,
    pub gap_autotune: bool,
    pub epsilon: f64,
    /// Path slack `sqrt(ε / ln n)`.
    pub slack: f64,
    /// Unrounded terminal capacity `6 α / (c' n slack)`.
    pub beta0: f64,
    /// Terminal capacity `p / q` in `[beta0, 2 beta0]`.
    pub beta_num: i64,
    pub beta_den: i64,
    pub hops: usize,
    /// `|A| = |B| = ceil(2 c' n)`.
    pub side: usize,
    pub path_threshold: usize,
    pub attempts: usize,
    pub sort_over_all: bool,
    pub gamma: f64,
    pub tau: f64,
}

/// `(p, q)` with `p = ceil(2n beta0 / grid)`, `q = floor(2n / grid)`.
///
/// Requires `beta0 >= grid / n` and `grid ∈ (0, 1/2)`, which place `p / q`
/// in `[beta0, 2 beta0]`.
pub fn rationalize_beta(beta0: f64, n: usize, grid: Rational) -> Result<(i64, i64), OracleError> {
    let g = to_f64(&grid);
    if !(grid > Rational::zero() && grid < Rational::new(1, 2)) {
        return Err(OracleError::Params(format!("grid constant {grid} outside (0, 1/2)")));
    }
    if n == 0 || !beta0.is_finite() || beta0 < g / n as f64 {
        return Err(OracleError::Params(format!("beta0 = {beta0} below {g}/{n}")));
    }
    let q = (Rational::from_integer(2 * n as i128) / grid).floor();
    let q = q.to_integer();
    let p = (2.0 * n as f64 * beta0 / g).ceil();
    if p > i64::MAX as f64 / 4.0 {
        return Err(OracleError::Params(format!("beta0 = {beta0} too large")));
    }
    Ok((p as i64, i64::try_from(q).map_err(|_| OracleError::Params("grid too fine".into()))?))
}

fn ceil_rational(r: Rational) -> usize {
    r.ceil().to_integer().max(0) as usize
}

impl OracleParams {
    pub fn new(n: usize, alpha: Rational, cfg: &OracleConfig) -> Result<Self, OracleError> {
        let c = cfg.balance;
        if !(c > Rational::zero() && c < Rational::new(1, 2)) {
            return Err(OracleError::Params(format!("balance {c} outside (0, 1/2)")));
        }
        if n < 2 {
            return Err(OracleError::Params(format!("need at least 2 vertices, got {n}")));
        }
        if !(cfg.epsilon > 0.0 && cfg.epsilon.is_finite()) {
            return Err(OracleError::Params(format!("epsilon {} must be positive", cfg.epsilon)));
        }
        if alpha < Rational::from_integer(1) {
            return Err(OracleError::Params(format!("alpha {alpha} below 1")));
        }
        if !(cfg.gap > 0.0) {
            return Err(OracleError::Params(format!("gap {} must be positive", cfg.gap)));
        }
        let cut_balance = cfg.cut_balance.unwrap_or(c / Rational::from_integer(8));
        if !(cut_balance > Rational::zero() && cut_balance < c) {
            return Err(OracleError::Params(format!("cut balance {cut_balance} outside (0, {c})")));
        }
        let ln_n = (n as f64).ln();
        let slack = (cfg.epsilon / ln_n).sqrt();
        let alpha_f = to_f64(&alpha);
        let beta0 = 6.0 * alpha_f / (to_f64(&cut_balance) * n as f64 * slack);
        let (beta_num, beta_den) = rationalize_beta(beta0, n, cfg.beta_grid)?;
        let hops = ((cfg.hops_factor * slack * ln_n).ceil() as usize).max(1);
        let side = ceil_rational(Rational::from_integer(2 * n as i128) * cut_balance).max(1);
        let nf = n as f64;
        let path_threshold = (nf.powf(1.0 - cfg.threshold_exponent * cfg.epsilon).ceil() as usize).max(1);
        let attempts = cfg.attempts.unwrap_or_else(|| ((nf.powf(cfg.epsilon) * ln_n).ceil() as usize).max(1));
        let spread = Rational::new(9, 4) * c * c;
        let tau = cfg.tau.unwrap_or_else(|| (to_f64(&spread) / 2.0).min(2.0));
        let beta = beta_num as f64 / beta_den as f64;
        let gamma = cfg.gamma.unwrap_or_else(|| {
            let by_slack = slack / (20.0 * (hops + 1) as f64);
            let by_flow = alpha_f / ((16.0 / to_f64(&c) + tau) * side as f64 * beta);
            by_slack.min(by_flow).min(0.499)
        });
        Ok(Self {
            n,
            alpha,
            balance: c,
            cut_balance,
            spread,
            gap: cfg.gap,
            gap_floor: cfg.gap / 16.0,
            gap_autotune: cfg.gap_autotune,
            epsilon: cfg.epsilon,
            slack,
            beta0,
            beta_num,
            beta_den,
            hops,
            side,
            path_threshold,
            attempts,
            sort_over_all: cfg.sort_over_all,
            gamma,
            tau,
        })
    }

    pub fn beta(&self) -> Rational {
        Rational::new(self.beta_num as i128, self.beta_den as i128)
    }

    pub fn beta_f64(&self) -> f64 {
        self.beta_num as f64 / self.beta_den as f64
    }

    /// `ξ n²`.
    pub fn spread_n2(&self) -> Rational {
        self.spread * Rational::from_integer((self.n * self.n) as i128)
    }

    /// `α / n`.
    pub fn alpha_per_vertex(&self) -> Rational {
        self.alpha / Rational::from_integer(self.n as i128)
    }

    /// Cost bound `2 c' n β` on returned cuts.
    pub fn cut_cost_bound(&self) -> Rational {
        Rational::from_integer(2 * self.n as i128) * self.cut_balance * self.beta()
    }

    /// Realized pseudo-approximation factor `2 c' β n / α`.
    pub fn kappa(&self) -> f64 {
        to_f64(&(self.cut_cost_bound() / self.alpha))
    }

    /// Width bound for the easy case.
    pub fn easy_width(&self) -> f64 {
        let a = to_f64(&self.alpha_per_vertex());
        a.max(2.0 * to_f64(&self.alpha) / (to_f64(&self.spread) * self.n as f64) - a)
    }

    /// Width bound for the flow case: `‖(α/n) I − L(D)‖ ≤ max(α/n, 2β)`.
    pub fn flow_width(&self) -> f64 {
        to_f64(&self.alpha_per_vertex()).max(2.0 * self.beta_f64())
    }

    /// Width bound for the chaining case; zero when chains are a single hop.
    ///
    /// A vertex lies on at most one pair per matching and at one position per
    /// composed path, so hop degrees are at most `K` and endpoint degrees at
    /// most `K + 1`.
    pub fn chain_width(&self) -> f64 {
        if self.hops < 2 {
            return 0.0;
        }
        let k = self.hops as f64;
        super::chain::chain_norm_bound(to_f64(&self.alpha_per_vertex()), self.chain_coef_cap(), k, k + 1.0)
    }

    /// `2 α / (threshold Δ)`, the largest chaining coefficient.
    pub fn chain_coef_cap(&self) -> f64 {
        2.0 * to_f64(&self.alpha) / (self.path_threshold as f64 * self.slack)
    }

    /// Uniform width for the update schedule.
    pub fn width(&self) -> f64 {
        self.easy_width().max(self.flow_width()).max(self.chain_width())
    }

    /// Whether an integer flow value (in network units) is below `c' n β`.
    pub fn cut_is_small(&self, scaled_cut: i64) -> bool {
        // scaled = real * 2q; threshold * 2q = 2 c' n p
        let lhs = Rational::from_integer(scaled_cut as i128);
        let rhs = Rational::from_integer(2 * self.n as i128 * self.beta_num as i128) * self.cut_balance;
        lhs < rhs
    }

    pub fn upper_norm_cutoff(&self) -> f64 {
        4.0 / to_f64(&self.balance)
    }
}

/// Real value of an integer amount in a split network scaled by `2 q`.
pub fn unscale(amount: i64, beta_den: i64) -> Rational {
    Rational::new(amount as i128, 2 * beta_den as i128)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rationalize_examples() {
        assert_eq!(rationalize_beta(1.0, 10, Rational::new(1, 4)).unwrap(), (80, 80));
        assert_eq!(rationalize_beta(0.013, 100, Rational::new(1, 4)).unwrap(), (11, 800));
        assert!(rationalize_beta(0.001, 100, Rational::new(1, 4)).is_err());
        assert!(rationalize_beta(1.0, 10, Rational::new(1, 2)).is_err());
    }

    #[test]
    fn params_at_small_n() {
        let cfg = OracleConfig::new(Rational::new(1, 3), 0.5);
        let p = OracleParams::new(14, Rational::from_integer(1), &cfg).unwrap();
        assert_eq!(p.cut_balance, Rational::new(1, 24));
        assert_eq!(p.side, 2);
        assert_eq!(p.spread, Rational::new(1, 4));
        assert!((p.slack - (0.5 / 14f64.ln()).sqrt()).abs() < 1e-15);
        assert!(p.beta_f64() >= p.beta0 && p.beta_f64() <= 2.0 * p.beta0);
        assert_eq!(p.tau, 0.125);
        assert!(p.gamma > 0.0 && p.gamma < 0.5);
        assert!(p.width() >= p.flow_width());
    }

    #[test]
    fn rejects_bad_balance() {
        let cfg = OracleConfig::new(Rational::new(1, 2), 0.5);
        assert!(OracleParams::new(10, Rational::from_integer(1), &cfg).is_err());
    }

    #[test]
    fn cut_threshold_is_exact() {
        let mut cfg = OracleConfig::new(Rational::new(1, 3), 0.5);
        cfg.cut_balance = Some(Rational::new(1, 4));
        let p = OracleParams::new(8, Rational::from_integer(1), &cfg).unwrap();
        // threshold c' n beta in network units is 2 c' n p = 4 p
        let t = 4 * p.beta_num;
        assert!(p.cut_is_small(t - 1));
        assert!(!p.cut_is_small(t));
    }
}
