use crate::feedback::FeedbackMatrix;
use crate::linalg::{SparseSym, SparseSymBuilder, SymOperator};
use crate::rational::to_f64;

/// Running weighted sum of feedback matrices.
///
/// Diagonal, edge and path terms are folded into one sparse matrix; each
/// distinct set term `z_S K_S` is kept as `(S, coefficient)` and applied in
/// `O(|S|)`.
#[derive(Debug, Clone)]
pub struct ImplicitMatrix {
    builder: SparseSymBuilder,
    compiled: SparseSym,
    sets: Vec<(Vec<usize>, f64)>,
    norm_bound: f64,
}

impl ImplicitMatrix {
    /// The zero operator.
    pub fn new(n: usize) -> Self {
        Self { builder: SparseSymBuilder::new(n), compiled: SparseSym::zeros(n), sets: Vec::new(), norm_bound: 0.0 }
    }

    /// `self += scale * fb`.
    pub fn accumulate(&mut self, fb: &FeedbackMatrix, scale: f64) {
        let b = &mut self.builder;
        for (i, y) in fb.y.iter().enumerate() {
            b.add_diag(i, scale * to_f64(y));
        }
        for p in &fb.paths {
            let w = scale * p.weight;
            for hop in p.vertices.windows(2) {
                b.add_edge_laplacian(hop[0], hop[1], w);
            }
            if let (Some(&first), Some(&last)) = (p.vertices.first(), p.vertices.last()) {
                if first != last {
                    b.add_edge_laplacian(first, last, -w);
                }
            }
        }
        for &((i, j), l) in &fb.lambda {
            b.add_edge_laplacian(i, j, -scale * to_f64(&l));
        }
        if let Some((set, z)) = &fb.set_term {
            let coef = scale * to_f64(z);
            match self.sets.iter_mut().find(|(s, _)| s == set) {
                Some(entry) => entry.1 += coef,
                None => self.sets.push((set.clone(), coef)),
            }
        }
        self.compiled = self.builder.build();
        self.norm_bound += scale.abs() * fb.width_bound;
    }

    /// `self += scale * other`.
    pub fn add_scaled(&mut self, other: &ImplicitMatrix, scale: f64) {
        self.builder.add_scaled(&other.builder, scale);
        for (set, coef) in &other.sets {
            match self.sets.iter_mut().find(|(s, _)| s == set) {
                Some(entry) => entry.1 += scale * coef,
                None => self.sets.push((set.clone(), scale * coef)),
            }
        }
        self.compiled = self.builder.build();
        self.norm_bound += scale.abs() * other.norm_bound;
    }

    /// `self += v * I`.
    pub fn add_identity(&mut self, v: f64) {
        for i in 0..self.builder.dim() {
            self.builder.add_diag(i, v);
        }
        self.compiled = self.builder.build();
        self.norm_bound += v.abs();
    }

    /// Sum of `|scale| * width_bound` over everything accumulated; bounds the
    /// spectral norm.
    pub fn certified_norm(&self) -> f64 {
        self.norm_bound
    }

    pub fn nnz(&self) -> usize {
        self.compiled.nnz() + self.sets.iter().map(|(s, _)| s.len() * s.len()).sum::<usize>()
    }

    pub fn set_terms(&self) -> &[(Vec<usize>, f64)] {
        &self.sets
    }
}

impl SymOperator for ImplicitMatrix {
    fn dim(&self) -> usize {
        self.compiled.dim()
    }

    fn apply(&self, x: &[f64], out: &mut [f64]) {
        self.compiled.apply(x, out);
        for (set, coef) in &self.sets {
            let total: f64 = set.iter().map(|&i| x[i]).sum();
            let size = set.len() as f64;
            for &i in set {
                out[i] += coef * (size * x[i] - total);
            }
        }
    }

    fn spectrum_bounds(&self) -> (f64, f64) {
        // K_S has spectrum {0, |S|}.
        let (mut lo, mut hi) = self.compiled.spectrum_bounds();
        for (set, coef) in &self.sets {
            let top = coef * set.len() as f64;
            lo += top.min(0.0);
            hi += top.max(0.0);
        }
        (lo, hi)
    }
}
