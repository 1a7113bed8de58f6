use std::collections::BTreeMap;

use num_traits::Zero;

use crate::embed::ImplicitMatrix;
use crate::feedback::{FeedbackMatrix, PathTerm};
use crate::graph::WeightedGraph;
use crate::linalg::extreme_eigenvalues;
use crate::rational::{to_f64, Rational};
use crate::rng::{substream, Role};

/// Exact running sums of the dual variables over a run.
#[derive(Debug, Clone)]
pub struct DualAccumulator {
    n: usize,
    count: usize,
    y: Vec<Rational>,
    sets: BTreeMap<Vec<usize>, Rational>,
    lambda: BTreeMap<(usize, usize), Rational>,
    paths: BTreeMap<Vec<usize>, f64>,
    objective: Rational,
}

impl DualAccumulator {
    pub fn new(n: usize) -> Self {
        Self {
            n,
            count: 0,
            y: vec![Rational::zero(); n],
            sets: BTreeMap::new(),
            lambda: BTreeMap::new(),
            paths: BTreeMap::new(),
            objective: Rational::zero(),
        }
    }

    pub fn count(&self) -> usize {
        self.count
    }

    pub fn add(&mut self, fb: &FeedbackMatrix, spread_n2: Rational) {
        self.count += 1;
        for (s, y) in self.y.iter_mut().zip(&fb.y) {
            *s += y;
        }
        if let Some((set, z)) = &fb.set_term {
            *self.sets.entry(set.clone()).or_insert_with(Rational::zero) += z;
        }
        for &(e, l) in &fb.lambda {
            *self.lambda.entry(e).or_insert_with(Rational::zero) += l;
        }
        for p in &fb.paths {
            *self.paths.entry(p.vertices.clone()).or_insert(0.0) += p.weight;
        }
        self.objective += fb.dual_objective(spread_n2);
    }

    /// Averages, shifts `y` by `−δ / n`, and checks the result.
    ///
    /// `mean_op` must hold the mean feedback matrix.
    #[allow(clippy::too_many_arguments)]
    pub fn certify(
        &self,
        g: &WeightedGraph,
        mean_op: &ImplicitMatrix,
        alpha: Rational,
        delta: Rational,
        spread_n2: Rational,
        min_set_size: usize,
        tolerance: f64,
        dense_cap: usize,
        seed: u64,
        stream: &[u64],
    ) -> DualCertificate {
        let t = Rational::from_integer(self.count.max(1) as i128);
        let shift = delta / Rational::from_integer(self.n as i128);
        let y: Vec<Rational> = self.y.iter().map(|s| s / t - shift).collect();
        let sets: Vec<(Vec<usize>, Rational)> = self.sets.iter().map(|(s, z)| (s.clone(), z / t)).collect();
        let lambda: Vec<((usize, usize), Rational)> = self.lambda.iter().map(|(&e, l)| (e, l / t)).collect();
        let inv = 1.0 / self.count.max(1) as f64;
        let paths: Vec<PathTerm> =
            self.paths.iter().map(|(v, w)| PathTerm { vertices: v.clone(), weight: w * inv }).collect();
        let objective = self.objective / t - delta;

        let mut op = ImplicitMatrix::new(self.n);
        op.add_scaled(mean_op, 1.0);
        op.add_identity(-to_f64(&shift));
        let mut rng = substream(seed, Role::PowerIteration, stream);
        let (lo, hi) = extreme_eigenvalues(&op, dense_cap, &mut rng);
        let norm = lo.abs().max(hi.abs());

        let mut issues = Vec::new();
        if sets.iter().any(|(_, z)| *z < Rational::zero())
            || lambda.iter().any(|(_, l)| *l < Rational::zero())
            || paths.iter().any(|p| p.weight < 0.0)
        {
            issues.push("negative multiplier".to_string());
        }
        if let Some((s, _)) = sets.iter().find(|(s, _)| s.len() < min_set_size) {
            issues.push(format!("set of size {} below {min_set_size}", s.len()));
        }
        let mut deg = vec![Rational::zero(); self.n];
        for &((i, j), l) in &lambda {
            if !g.has_edge(i, j) {
                issues.push(format!("λ on non-edge ({i}, {j})"));
            }
            deg[i] += l;
            deg[j] += l;
        }
        for (v, d) in deg.iter().enumerate() {
            if *d > Rational::from_integer(g.weight(v) as i128) {
                issues.push(format!("vertex {v} has λ-degree {d} above {}", g.weight(v)));
            }
        }
        let lower_bound = alpha - delta;
        let ys: Rational = y.iter().copied().sum();
        let zs: Rational = sets.iter().map(|(_, z)| *z).sum();
        if ys + spread_n2 * zs != objective {
            issues.push("objective bookkeeping mismatch".to_string());
        }
        if objective < lower_bound {
            issues.push(format!("objective {objective} below {lower_bound}"));
        }
        if hi > tolerance * norm {
            issues.push(format!("λ_max = {hi:e} above {tolerance:e} · {norm:e}"));
        }

        DualCertificate {
            alpha,
            delta,
            iterations: self.count,
            y,
            paths,
            sets,
            lambda,
            objective,
            lower_bound,
            lambda_max: hi,
            lambda_min: lo,
            norm,
            tolerance,
            issues,
        }
    }
}

/// Averaged dual solution of a run that produced only feedback.
#[derive(Debug, Clone, PartialEq)]
pub struct DualCertificate {
    pub alpha: Rational,
    pub delta: Rational,
    pub iterations: usize,
    /// `−δ/n + mean y`.
    pub y: Vec<Rational>,
    pub paths: Vec<PathTerm>,
    pub sets: Vec<(Vec<usize>, Rational)>,
    pub lambda: Vec<((usize, usize), Rational)>,
    /// `Σ y + ξ n² Σ z`.
    pub objective: Rational,
    /// `α − δ`; the relaxation optimum is at least this when accepted.
    pub lower_bound: Rational,
    pub lambda_max: f64,
    pub lambda_min: f64,
    /// Spectral norm of the assembled matrix.
    pub norm: f64,
    pub tolerance: f64,
    /// Failed checks; empty when accepted.
    pub issues: Vec<String>,
}

impl DualCertificate {
    pub fn accepted(&self) -> bool {
        self.issues.is_empty()
    }

    /// Lower bound on the separator optimum, `(α − δ) / 4`.
    pub fn separator_lower_bound(&self) -> Rational {
        self.lower_bound / Rational::from_integer(4)
    }
}
