//! Feedback matrices `diag(y) + Σ f_p T_p + Σ z_S K_S − Σ λ_ij L_ij`.
//!
//! Multipliers that feasibility is judged on (`y`, `z`, `λ`) are exact
//! rationals. Path multipliers may involve irrational slack and are floats.

use crate::embed::ImplicitMatrix;
use crate::graph::WeightedGraph;
use crate::rational::{to_f64, Rational};
use num_traits::Zero;

/// Which oracle branch produced a feedback matrix.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum FeedbackKind {
    /// Small spread on the low-norm set.
    Easy,
    /// Saturated long-distance flow from a single projection.
    Flow,
    /// Violating paths harvested by chaining matchings.
    Chain,
}

impl FeedbackKind {
    pub fn name(self) -> &'static str {
        match self {
            FeedbackKind::Easy => "easy",
            FeedbackKind::Flow => "flow",
            FeedbackKind::Chain => "chain",
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct PathTerm {
    /// Distinct vertices `(p_0, …, p_l)`.
    pub vertices: Vec<usize>,
    pub weight: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct FeedbackMatrix {
    pub kind: FeedbackKind,
    pub n: usize,
    pub alpha: Rational,
    pub y: Vec<Rational>,
    /// `(S, z_S)`.
    pub set_term: Option<(Vec<usize>, Rational)>,
    pub paths: Vec<PathTerm>,
    /// `((i, j), λ_ij)` with `i < j` an edge of the graph.
    pub lambda: Vec<((usize, usize), Rational)>,
    /// Certified upper bound on the spectral norm.
    pub width_bound: f64,
}

/// First violated feasibility condition of a feedback matrix.
#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum FeedbackViolation {
    #[error("negative multiplier on {0}")]
    Negative(&'static str),
    #[error("dual objective {got} below {need}")]
    Objective { got: Rational, need: Rational },
    #[error("vertex {vertex} carries λ-degree {degree} above weight {weight}")]
    Degree { vertex: usize, degree: Rational, weight: u64 },
    #[error("λ on non-edge ({0}, {1})")]
    NotAnEdge(usize, usize),
}

impl FeedbackMatrix {
    /// `Σ_i y_i + spread_n2 * z_S` where `spread_n2 = ξ n²`.
    pub fn dual_objective(&self, spread_n2: Rational) -> Rational {
        let ys: Rational = self.y.iter().copied().sum();
        ys + self.set_term.as_ref().map_or(Rational::zero(), |(_, z)| *z * spread_n2)
    }

    /// λ-degree of every vertex.
    pub fn lambda_degrees(&self) -> Vec<Rational> {
        let mut deg = vec![Rational::zero(); self.n];
        for &((i, j), l) in &self.lambda {
            deg[i] += l;
            deg[j] += l;
        }
        deg
    }

    /// Exact check of sign, objective and degree constraints.
    pub fn check_feasible(&self, g: &WeightedGraph, spread_n2: Rational) -> Result<(), FeedbackViolation> {
        if self.paths.iter().any(|p| p.weight < 0.0) {
            return Err(FeedbackViolation::Negative("path"));
        }
        if self.set_term.as_ref().is_some_and(|(_, z)| *z < Rational::zero()) {
            return Err(FeedbackViolation::Negative("set"));
        }
        for &((i, j), l) in &self.lambda {
            if l < Rational::zero() {
                return Err(FeedbackViolation::Negative("edge"));
            }
            if !g.has_edge(i, j) {
                return Err(FeedbackViolation::NotAnEdge(i, j));
            }
        }
        let got = self.dual_objective(spread_n2);
        if got < self.alpha {
            return Err(FeedbackViolation::Objective { got, need: self.alpha });
        }
        for (v, d) in self.lambda_degrees().into_iter().enumerate() {
            if d > Rational::from_integer(g.weight(v) as i128) {
                return Err(FeedbackViolation::Degree { vertex: v, degree: d, weight: g.weight(v) });
            }
        }
        Ok(())
    }

    /// `N • X` for `X` the Gram matrix of `cols` (`cols[i]` is the vector of vertex `i`).
    pub fn inner_with_gram(&self, cols: &[Vec<f64>]) -> f64 {
        let sq = |i: usize, j: usize| -> f64 { cols[i].iter().zip(&cols[j]).map(|(a, b)| (a - b) * (a - b)).sum() };
        let mut total = 0.0;
        for (i, y) in self.y.iter().enumerate() {
            total += to_f64(y) * cols[i].iter().map(|a| a * a).sum::<f64>();
        }
        if let Some((set, z)) = &self.set_term {
            total += to_f64(z) * set_spread(set, cols);
        }
        for p in &self.paths {
            let hops: f64 = p.vertices.windows(2).map(|w| sq(w[0], w[1])).sum();
            let ends = sq(p.vertices[0], *p.vertices.last().unwrap_or(&p.vertices[0]));
            total += p.weight * (hops - ends);
        }
        for &((i, j), l) in &self.lambda {
            total -= to_f64(&l) * sq(i, j);
        }
        total
    }

    /// The matrix as an operator.
    pub fn operator(&self) -> ImplicitMatrix {
        let mut m = ImplicitMatrix::new(self.n);
        m.accumulate(self, 1.0);
        m
    }

    /// Nonzero entries of the assembled matrix.
    pub fn nnz(&self) -> usize {
        self.operator().nnz()
    }
}

/// `K_S • X = Σ_{i<j ∈ S} ‖v_i − v_j‖² = |S| Σ‖v_i‖² − ‖Σ v_i‖²`.
pub fn set_spread(set: &[usize], cols: &[Vec<f64>]) -> f64 {
    let dim = cols.first().map_or(0, Vec::len);
    let mut sum = vec![0.0; dim];
    let mut sq = 0.0;
    for &i in set {
        for (s, a) in sum.iter_mut().zip(&cols[i]) {
            *s += a;
        }
        sq += cols[i].iter().map(|a| a * a).sum::<f64>();
    }
    set.len() as f64 * sq - sum.iter().map(|a| a * a).sum::<f64>()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::{materialize, SymOperator};

    fn sample() -> FeedbackMatrix {
        FeedbackMatrix {
            kind: FeedbackKind::Flow,
            n: 4,
            alpha: Rational::from_integer(1),
            y: vec![Rational::new(1, 4); 4],
            set_term: Some((vec![0, 1, 3], Rational::new(1, 2))),
            paths: vec![PathTerm { vertices: vec![0, 1, 2], weight: 0.5 }],
            lambda: vec![((1, 2), Rational::new(1, 3))],
            width_bound: 10.0,
        }
    }

    #[test]
    fn gram_inner_matches_dense_trace() {
        let fb = sample();
        let cols = vec![vec![1.0, 0.0], vec![0.3, 0.5], vec![-0.2, 0.9], vec![0.0, -1.0]];
        let n = materialize(&fb.operator());
        let mut expected = 0.0;
        for i in 0..4 {
            for j in 0..4 {
                let x: f64 = cols[i].iter().zip(&cols[j]).map(|(a, b)| a * b).sum();
                expected += n[(i, j)] * x;
            }
        }
        assert!((fb.inner_with_gram(&cols) - expected).abs() < 1e-12);
        assert_eq!(fb.operator().dim(), 4);
    }

    #[test]
    fn feasibility_is_exact() {
        let g = WeightedGraph::new(4, vec![(0, 1), (1, 2), (2, 3)], vec![1; 4]).unwrap();
        let mut fb = sample();
        // 1 + (1/2) * 2 = 2 >= 1
        assert_eq!(fb.check_feasible(&g, Rational::from_integer(2)), Ok(()));
        fb.alpha = Rational::new(21, 10);
        assert!(matches!(fb.check_feasible(&g, Rational::from_integer(2)), Err(FeedbackViolation::Objective { .. })));
        fb.alpha = Rational::from_integer(1);
        fb.lambda.push(((2, 3), Rational::new(2, 3)));
        fb.lambda.push(((1, 2), Rational::new(1, 100)));
        assert!(matches!(fb.check_feasible(&g, Rational::from_integer(2)), Err(FeedbackViolation::Degree { vertex: 2, .. })));
        fb.lambda = vec![((0, 2), Rational::new(1, 2))];
        assert_eq!(fb.check_feasible(&g, Rational::from_integer(2)), Err(FeedbackViolation::NotAnEdge(0, 2)));
    }

    #[test]
    fn set_spread_identity() {
        let cols = vec![vec![1.0, 0.0], vec![0.0, 1.0], vec![1.0, 1.0]];
        // pairs: 2 + 1 + 1
        assert!((set_spread(&[0, 1, 2], &cols) - 4.0).abs() < 1e-12);
    }
}
