//! Symmetric operators, sparse storage and spectral estimates.

use nalgebra::{DMatrix, SymmetricEigen};
use rand::Rng;
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use std::collections::BTreeMap;

/// A real symmetric linear map on `R^n`.
pub trait SymOperator: Sync {
    fn dim(&self) -> usize;
    /// `out = self * x`.
    fn apply(&self, x: &[f64], out: &mut [f64]);

    /// Interval `[lo, hi]` containing the spectrum.
    fn spectrum_bounds(&self) -> (f64, f64);
}

/// Sparse symmetric matrix in row-compressed form.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct SparseSym {
    n: usize,
    diag: Vec<f64>,
    row_start: Vec<usize>,
    cols: Vec<usize>,
    vals: Vec<f64>,
}

/// Accumulates symmetric entries before compression.
#[derive(Debug, Clone, Default)]
pub struct SparseSymBuilder {
    n: usize,
    diag: Vec<f64>,
    off: BTreeMap<(usize, usize), f64>,
}

impl SparseSymBuilder {
    pub fn new(n: usize) -> Self {
        Self { n, diag: vec![0.0; n], off: BTreeMap::new() }
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn add_diag(&mut self, i: usize, v: f64) {
        self.diag[i] += v;
    }

    /// Adds `v` at `(i, j)` and `(j, i)`.
    pub fn add_pair(&mut self, i: usize, j: usize, v: f64) {
        if i == j {
            self.diag[i] += 2.0 * v;
        } else {
            *self.off.entry((i.min(j), i.max(j))).or_insert(0.0) += v;
        }
    }

    /// Adds `v * L_ij`, the Laplacian of the single edge `{i, j}`.
    pub fn add_edge_laplacian(&mut self, i: usize, j: usize, v: f64) {
        self.diag[i] += v;
        self.diag[j] += v;
        self.add_pair(i, j, -v);
    }

    /// Adds `scale * other`.
    pub fn add_scaled(&mut self, other: &SparseSymBuilder, scale: f64) {
        for (i, &d) in other.diag.iter().enumerate() {
            self.diag[i] += scale * d;
        }
        for (&k, &v) in &other.off {
            *self.off.entry(k).or_insert(0.0) += scale * v;
        }
    }

    pub fn build(&self) -> SparseSym {
        let n = self.n;
        let mut rows: Vec<Vec<(usize, f64)>> = vec![Vec::new(); n];
        for (&(i, j), &v) in &self.off {
            if v != 0.0 {
                rows[i].push((j, v));
                rows[j].push((i, v));
            }
        }
        let mut row_start = Vec::with_capacity(n + 1);
        let mut cols = Vec::new();
        let mut vals = Vec::new();
        row_start.push(0);
        for mut r in rows {
            r.sort_unstable_by_key(|e| e.0);
            for (j, v) in r {
                cols.push(j);
                vals.push(v);
            }
            row_start.push(cols.len());
        }
        SparseSym { n, diag: self.diag.clone(), row_start, cols, vals }
    }
}

impl SparseSym {
    pub fn zeros(n: usize) -> Self {
        SparseSymBuilder::new(n).build()
    }

    /// Stored nonzeros, counting both triangles and the diagonal.
    pub fn nnz(&self) -> usize {
        self.vals.len() + self.diag.iter().filter(|&&d| d != 0.0).count()
    }

    pub fn diag(&self) -> &[f64] {
        &self.diag
    }

    /// Off-diagonal entries of row `i` as `(column, value)`.
    pub fn row(&self, i: usize) -> impl Iterator<Item = (usize, f64)> + '_ {
        let r = self.row_start[i]..self.row_start[i + 1];
        self.cols[r.clone()].iter().copied().zip(self.vals[r].iter().copied())
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        if i == j {
            return self.diag[i];
        }
        self.row(i).find(|&(c, _)| c == j).map_or(0.0, |(_, v)| v)
    }

    pub fn to_dense(&self) -> DMatrix<f64> {
        let mut m = DMatrix::zeros(self.n, self.n);
        for i in 0..self.n {
            m[(i, i)] = self.diag[i];
            for (j, v) in self.row(i) {
                m[(i, j)] = v;
            }
        }
        m
    }
}

impl SymOperator for SparseSym {
    fn dim(&self) -> usize {
        self.n
    }

    fn apply(&self, x: &[f64], out: &mut [f64]) {
        for i in 0..self.n {
            let mut acc = self.diag[i] * x[i];
            for k in self.row_start[i]..self.row_start[i + 1] {
                acc += self.vals[k] * x[self.cols[k]];
            }
            out[i] = acc;
        }
    }

    fn spectrum_bounds(&self) -> (f64, f64) {
        gershgorin(self.n, |i| (self.diag[i], self.row(i).map(|(_, v)| v.abs()).sum()))
    }
}

/// Gershgorin interval from per-row `(diagonal, off-diagonal absolute sum)`.
pub fn gershgorin(n: usize, row: impl Fn(usize) -> (f64, f64)) -> (f64, f64) {
    if n == 0 {
        return (0.0, 0.0);
    }
    (0..n).map(row).fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), (d, r)| (lo.min(d - r), hi.max(d + r)))
}

pub fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

pub fn norm(a: &[f64]) -> f64 {
    dot(a, a).sqrt()
}

/// Dense copy of an operator, one basis vector at a time.
pub fn materialize(op: &(impl SymOperator + ?Sized)) -> DMatrix<f64> {
    let n = op.dim();
    let mut m = DMatrix::zeros(n, n);
    let mut e = vec![0.0; n];
    let mut col = vec![0.0; n];
    for j in 0..n {
        e[j] = 1.0;
        op.apply(&e, &mut col);
        e[j] = 0.0;
        for i in 0..n {
            m[(i, j)] = col[i];
        }
    }
    m
}

/// Eigenvalues of a dense symmetric matrix, ascending.
pub fn dense_eigenvalues(m: &DMatrix<f64>) -> Vec<f64> {
    let mut ev: Vec<f64> = SymmetricEigen::new(m.clone()).eigenvalues.iter().copied().collect();
    ev.sort_by(f64::total_cmp);
    ev
}

pub const POWER_ITERATIONS: usize = 200;

/// Largest eigenvalue by power iteration on `A - lo I`, where `lo` is the
/// lower spectral bound, so the dominant eigenvalue is the top one.
pub fn power_lambda_max(op: &(impl SymOperator + ?Sized), iters: usize, rng: &mut ChaCha8Rng) -> f64 {
    let (lo, _) = op.spectrum_bounds();
    shifted_power(op, lo, 1.0, iters, rng)
}

/// Smallest eigenvalue by power iteration on `hi I - A`.
pub fn power_lambda_min(op: &(impl SymOperator + ?Sized), iters: usize, rng: &mut ChaCha8Rng) -> f64 {
    let (_, hi) = op.spectrum_bounds();
    shifted_power(op, hi, -1.0, iters, rng)
}

/// Spectral norm by power iteration.
pub fn power_norm(op: &(impl SymOperator + ?Sized), iters: usize, rng: &mut ChaCha8Rng) -> f64 {
    power_lambda_max(op, iters, rng).abs().max(power_lambda_min(op, iters, rng).abs())
}

/// Rayleigh quotient of `A` at the top eigenvector of `sign * (A - shift I)`.
fn shifted_power(op: &(impl SymOperator + ?Sized), shift: f64, sign: f64, iters: usize, rng: &mut ChaCha8Rng) -> f64 {
    let n = op.dim();
    if n == 0 {
        return 0.0;
    }
    let mut x: Vec<f64> = (0..n).map(|_| rng.sample::<f64, _>(StandardNormal)).collect();
    let mut ax = vec![0.0; n];
    let scale = norm(&x);
    x.iter_mut().for_each(|v| *v /= scale);
    for _ in 0..iters {
        op.apply(&x, &mut ax);
        let mut next: Vec<f64> = ax.iter().zip(&x).map(|(a, v)| sign * (a - shift * v)).collect();
        let len = norm(&next);
        if len == 0.0 {
            break;
        }
        next.iter_mut().for_each(|v| *v /= len);
        x = next;
    }
    op.apply(&x, &mut ax);
    dot(&x, &ax)
}

/// Spectral norm, exact under `dense_cap` and by power iteration above it.
pub fn spectral_norm(op: &(impl SymOperator + ?Sized), dense_cap: usize, rng: &mut ChaCha8Rng) -> f64 {
    if op.dim() <= dense_cap {
        dense_eigenvalues(&materialize(op)).iter().fold(0.0f64, |m, v| m.max(v.abs()))
    } else {
        power_norm(op, POWER_ITERATIONS, rng)
    }
}

/// Extreme eigenvalues `(min, max)`, exact under `dense_cap`.
pub fn extreme_eigenvalues(op: &(impl SymOperator + ?Sized), dense_cap: usize, rng: &mut ChaCha8Rng) -> (f64, f64) {
    if op.dim() <= dense_cap {
        let ev = dense_eigenvalues(&materialize(op));
        (ev.first().copied().unwrap_or(0.0), ev.last().copied().unwrap_or(0.0))
    } else {
        (power_lambda_min(op, POWER_ITERATIONS, rng), power_lambda_max(op, POWER_ITERATIONS, rng))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng::{substream, Role};

    fn path_laplacian(n: usize) -> SparseSym {
        let mut b = SparseSymBuilder::new(n);
        for i in 0..n - 1 {
            b.add_edge_laplacian(i, i + 1, 1.0);
        }
        b.build()
    }

    #[test]
    fn laplacian_matvec() {
        let l = path_laplacian(3);
        let mut out = vec![0.0; 3];
        l.apply(&[1.0, 0.0, -1.0], &mut out);
        assert_eq!(out, vec![1.0, 0.0, -1.0]);
        assert_eq!(l.nnz(), 7);
        assert_eq!(l.get(0, 1), -1.0);
        assert_eq!(l.get(0, 2), 0.0);
    }

    #[test]
    fn power_iteration_matches_dense() {
        let l = path_laplacian(10);
        let exact = dense_eigenvalues(&l.to_dense());
        let mut rng = substream(1, Role::PowerIteration, &[]);
        let top = power_lambda_max(&l, 2000, &mut rng);
        assert!((top - exact[9]).abs() < 1e-3 * exact[9], "{top} vs {}", exact[9]);
        let bottom = power_lambda_min(&l, 2000, &mut rng);
        assert!(bottom.abs() < 1e-3, "{bottom}");
    }

    #[test]
    fn gershgorin_contains_spectrum() {
        let l = path_laplacian(6);
        let (lo, hi) = l.spectrum_bounds();
        let ev = dense_eigenvalues(&l.to_dense());
        assert!(lo <= ev[0] && ev[5] <= hi);
        assert_eq!((lo, hi), (0.0, 4.0));
    }

    #[test]
    fn materialize_roundtrip() {
        let l = path_laplacian(4);
        assert_eq!(materialize(&l), l.to_dense());
    }
}
