//! Low-dimensional Gram vectors of `X = n exp(A) / Tr exp(A)`.
//!
//! Each embedding coordinate is one probe vector pushed through a truncated
//! Taylor series of `exp(A/2)`. The series is applied to `(A - hi I)/2`,
//! whose spectrum lies in `[-(hi - lo)/2, 0]`, in equal substeps of norm at
//! most one; the shift cancels in the trace normalization.

mod implicit;
mod reference;

pub use implicit::ImplicitMatrix;
pub use reference::{dense_gram, dense_reference, DEFAULT_DENSE_CAP};

use crate::linalg::SymOperator;
use crate::rng::{substream, Role};
use rand::Rng;
use rand_distr::StandardNormal;
use rayon::prelude::*;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum EmbedError {
    #[error("embedding dimension {dim} exceeds cap {cap}")]
    DimensionCap { dim: usize, cap: usize },
    #[error("{needed} operator products per probe exceed cap {cap}")]
    ProductCap { needed: usize, cap: usize },
    #[error("invalid embedding parameters: {0}")]
    InvalidParams(String),
    #[error("dense reference limited to n <= {cap}, got {n}")]
    TooLarge { n: usize, cap: usize },
}

#[derive(Debug, Clone, PartialEq)]
pub struct EmbedConfig {
    /// Target dimension is `ceil(dim_factor * ln n / gamma^2)`.
    pub dim_factor: f64,
    /// Nominal series length factor.
    pub terms_factor: f64,
    pub max_dim: usize,
    pub max_products_per_probe: usize,
    /// Use the `n` coordinate probes when the target dimension reaches `n`.
    pub exact_when_wide: bool,
}

impl Default for EmbedConfig {
    fn default() -> Self {
        Self { dim_factor: 4.0, terms_factor: 4.0, max_dim: 1 << 14, max_products_per_probe: 1_000_000, exact_when_wide: true }
    }
}

/// Columns `ṽ_1, …, ṽ_n ∈ R^dim` with `Σ ‖ṽ_i‖² = n`.
#[derive(Debug, Clone, PartialEq)]
pub struct Embedding {
    cols: Vec<Vec<f64>>,
    pub dim: usize,
    /// `ceil(dim_factor * ln n / gamma^2)` before any switch to coordinate probes.
    pub target_dim: usize,
    /// Coordinate probes were used, so the Gram matrix is exact up to series error.
    pub exact: bool,
    pub gamma: f64,
    pub tau: f64,
    /// `ceil(terms_factor * max(lambda_max^2, ln(n^{5/2} / tau)))`.
    pub nominal_terms: usize,
    pub substeps: usize,
    pub terms_per_substep: usize,
}

impl Embedding {
    /// Wraps explicit columns, rescaled to trace `n`.
    pub fn from_columns(mut cols: Vec<Vec<f64>>, gamma: f64, tau: f64) -> Self {
        let n = cols.len();
        let dim = cols.first().map_or(0, Vec::len);
        normalize_trace(&mut cols, n);
        Self { cols, dim, target_dim: dim, exact: true, gamma, tau, nominal_terms: 0, substeps: 0, terms_per_substep: 0 }
    }

    pub fn n(&self) -> usize {
        self.cols.len()
    }

    pub fn columns(&self) -> &[Vec<f64>] {
        &self.cols
    }

    pub fn column(&self, i: usize) -> &[f64] {
        &self.cols[i]
    }

    pub fn sq_norm(&self, i: usize) -> f64 {
        self.cols[i].iter().map(|a| a * a).sum()
    }

    pub fn sq_dist(&self, i: usize, j: usize) -> f64 {
        self.cols[i].iter().zip(&self.cols[j]).map(|(a, b)| (a - b) * (a - b)).sum()
    }

    /// `⟨ṽ_i, u⟩` for every vertex.
    pub fn project(&self, u: &[f64]) -> Vec<f64> {
        self.cols.iter().map(|c| c.iter().zip(u).map(|(a, b)| a * b).sum()).collect()
    }

    pub fn trace(&self) -> f64 {
        (0..self.n()).map(|i| self.sq_norm(i)).sum()
    }

    /// Text matrix, one row per vertex.
    pub fn render(&self) -> String {
        let mut out = format!("embedding n={} dim={} exact={}\n", self.n(), self.dim, self.exact);
        for (i, c) in self.cols.iter().enumerate() {
            let row: Vec<String> = c.iter().map(|v| format!("{v:.6e}")).collect();
            out.push_str(&format!("{i}: {}\n", row.join(" ")));
        }
        out
    }
}

fn normalize_trace(cols: &mut [Vec<f64>], n: usize) {
    let total: f64 = cols.iter().flat_map(|c| c.iter()).map(|a| a * a).sum();
    if total > 0.0 && total.is_finite() {
        let s = (n as f64 / total).sqrt();
        cols.iter_mut().flat_map(|c| c.iter_mut()).for_each(|a| *a *= s);
    }
}

/// Approximate Gram columns of `n exp(A) / Tr exp(A)`.
///
/// `lambda_max` must bound `‖A‖`. Probe `r` draws from its own substream
/// `(seed, Embedding, stream ++ [r])`, so the result is independent of
/// scheduling.
pub fn project_embedding(
    op: &(impl SymOperator + ?Sized),
    gamma: f64,
    tau: f64,
    lambda_max: f64,
    seed: u64,
    stream: &[u64],
    cfg: &EmbedConfig,
) -> Result<Embedding, EmbedError> {
    let n = op.dim();
    if !(gamma > 0.0 && gamma < 0.5) || !(tau > 0.0) || !(lambda_max >= 0.0) {
        return Err(EmbedError::InvalidParams(format!("gamma={gamma}, tau={tau}, lambda_max={lambda_max}")));
    }
    let ln_n = (n.max(2) as f64).ln();
    let target = (cfg.dim_factor * ln_n / (gamma * gamma)).ceil() as usize;
    let exact = cfg.exact_when_wide && target >= n;
    let dim = if exact { n } else { target };
    if dim > cfg.max_dim {
        return Err(EmbedError::DimensionCap { dim, cap: cfg.max_dim });
    }

    let (g_lo, g_hi) = op.spectrum_bounds();
    let hi = g_hi.min(lambda_max);
    let lo = g_lo.max(-lambda_max).min(hi);
    let half_width = (hi - lo) / 2.0;
    let substeps = half_width.ceil().max(1.0) as usize;
    let log_term = ((n.max(2) as f64).powf(2.5) / tau).ln().max(1.0);
    let terms = ((cfg.terms_factor * log_term).ceil() as usize).max(8);
    let nominal = (cfg.terms_factor * (lambda_max * lambda_max).max(log_term)).ceil();
    let nominal_terms = if nominal.is_finite() && nominal < usize::MAX as f64 { nominal as usize } else { usize::MAX };
    let needed = substeps.saturating_mul(terms);
    if needed > cfg.max_products_per_probe {
        return Err(EmbedError::ProductCap { needed, cap: cfg.max_products_per_probe });
    }

    let step = 1.0 / (2.0 * substeps as f64);
    let apply_exp = |mut v: Vec<f64>| -> Vec<f64> {
        let mut term = vec![0.0; n];
        let mut next = vec![0.0; n];
        for _ in 0..substeps {
            let mut acc = v.clone();
            term.copy_from_slice(&v);
            for j in 1..=terms {
                op.apply(&term, &mut next);
                let inv = step / j as f64;
                for (t, &a) in term.iter_mut().zip(&next) {
                    *t = inv * (a - hi * *t);
                }
                for (s, t) in acc.iter_mut().zip(&term) {
                    *s += t;
                }
            }
            v = acc;
        }
        v
    };

    let rows: Vec<Vec<f64>> = (0..dim)
        .into_par_iter()
        .map(|r| {
            let probe: Vec<f64> = if exact {
                (0..n).map(|i| if i == r { 1.0 } else { 0.0 }).collect()
            } else {
                let mut path = stream.to_vec();
                path.push(r as u64);
                let mut rng = substream(seed, Role::Embedding, &path);
                let scale = 1.0 / (dim as f64).sqrt();
                (0..n).map(|_| scale * rng.sample::<f64, _>(StandardNormal)).collect()
            };
            apply_exp(probe)
        })
        .collect();

    let mut cols = vec![vec![0.0; dim]; n];
    for (r, row) in rows.iter().enumerate() {
        for (i, &v) in row.iter().enumerate() {
            cols[i][r] = v;
        }
    }
    normalize_trace(&mut cols, n);
    Ok(Embedding {
        cols,
        dim,
        target_dim: target,
        exact,
        gamma,
        tau,
        nominal_terms,
        substeps,
        terms_per_substep: terms,
    })
}

/// Violation counts of the two Gram approximation inequalities.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct Fidelity {
    pub norm_violations: usize,
    pub norms: usize,
    pub pair_violations: usize,
    pub pairs: usize,
}

impl Fidelity {
    pub fn violation_rate(&self) -> f64 {
        let total = self.norms + self.pairs;
        if total == 0 {
            0.0
        } else {
            (self.norm_violations + self.pair_violations) as f64 / total as f64
        }
    }
}

/// Checks `|‖ṽ_i‖² − ‖v_i‖²| ≤ γ(‖ṽ_i‖² + τ)` and the same for differences
/// against exact columns `exact`.
pub fn fidelity(emb: &Embedding, exact: &[Vec<f64>]) -> Fidelity {
    let n = emb.n();
    let (gamma, tau) = (emb.gamma, emb.tau);
    let sq = |c: &[Vec<f64>], i: usize, j: usize| -> f64 { c[i].iter().zip(&c[j]).map(|(a, b)| (a - b) * (a - b)).sum() };
    let mut f = Fidelity::default();
    for i in 0..n {
        let approx = emb.sq_norm(i);
        let truth: f64 = exact[i].iter().map(|a| a * a).sum();
        f.norms += 1;
        if (approx - truth).abs() > gamma * (approx + tau) {
            f.norm_violations += 1;
        }
        for j in i + 1..n {
            let approx = emb.sq_dist(i, j);
            let truth = sq(exact, i, j);
            f.pairs += 1;
            if (approx - truth).abs() > gamma * (approx + tau) {
                f.pair_violations += 1;
            }
        }
    }
    f
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::{SparseSymBuilder, SymOperator};

    fn diag_op(d: &[f64]) -> crate::linalg::SparseSym {
        let mut b = SparseSymBuilder::new(d.len());
        for (i, &v) in d.iter().enumerate() {
            b.add_diag(i, v);
        }
        b.build()
    }

    #[test]
    fn zero_operator_gives_identity_gram() {
        let op = diag_op(&[0.0; 6]);
        let emb = project_embedding(&op, 0.3, 0.5, 0.0, 1, &[], &EmbedConfig::default()).unwrap();
        assert!(emb.exact);
        for i in 0..6 {
            assert!((emb.sq_norm(i) - 1.0).abs() < 1e-12);
        }
        assert!((emb.trace() - 6.0).abs() < 1e-12);
    }

    #[test]
    fn concentrated_exponential() {
        let op = diag_op(&[30.0, 0.0, 0.0, 0.0]);
        let emb = project_embedding(&op, 0.3, 0.5, 30.0, 1, &[], &EmbedConfig::default()).unwrap();
        assert!((emb.sq_norm(0) - 4.0).abs() < 1e-9);
        assert!(emb.sq_norm(1) < 1e-9);
        let exact = dense_reference(&op, DEFAULT_DENSE_CAP).unwrap();
        assert_eq!(fidelity(&emb, &exact).violation_rate(), 0.0);
    }

    #[test]
    fn random_probes_are_deterministic() {
        let op = diag_op(&(0..200).map(|i| (i % 7) as f64 * 0.1).collect::<Vec<_>>());
        let cfg = EmbedConfig::default();
        let a = project_embedding(&op, 0.45, 0.5, 1.0, 9, &[3], &cfg).unwrap();
        let b = project_embedding(&op, 0.45, 0.5, 1.0, 9, &[3], &cfg).unwrap();
        assert!(!a.exact);
        assert_eq!(a.dim, a.target_dim);
        assert_eq!(a, b);
        assert!((a.trace() - 200.0).abs() < 1e-9);
        let c = project_embedding(&op, 0.45, 0.5, 1.0, 10, &[3], &cfg).unwrap();
        assert_ne!(a, c);
    }

    #[test]
    fn caps_are_enforced() {
        let op = diag_op(&[0.0, 500.0]);
        let cfg = EmbedConfig { max_products_per_probe: 100, ..EmbedConfig::default() };
        assert!(matches!(project_embedding(&op, 0.3, 0.5, 500.0, 0, &[], &cfg), Err(EmbedError::ProductCap { .. })));
        let cfg = EmbedConfig { max_dim: 1, ..EmbedConfig::default() };
        assert!(matches!(project_embedding(&op, 0.3, 0.5, 500.0, 0, &[], &cfg), Err(EmbedError::DimensionCap { .. })));
        assert!(project_embedding(&op, 0.5, 0.5, 1.0, 0, &[], &EmbedConfig::default()).is_err());
        assert_eq!(op.dim(), 2);
    }
}
