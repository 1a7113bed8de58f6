use nalgebra::{DMatrix, SymmetricEigen};

use super::EmbedError;
use crate::linalg::{materialize, SymOperator};

pub const DEFAULT_DENSE_CAP: usize = 64;

/// Exact `X = n exp(A) / Tr exp(A)` by symmetric eigendecomposition.
pub fn dense_gram(op: &(impl SymOperator + ?Sized), cap: usize) -> Result<DMatrix<f64>, EmbedError> {
    let cols = dense_reference(op, cap)?;
    let n = cols.len();
    Ok(DMatrix::from_fn(n, n, |i, j| cols[i].iter().zip(&cols[j]).map(|(a, b)| a * b).sum()))
}

/// Exact Gram columns `v_i` with `VᵀV = n exp(A) / Tr exp(A)`.
pub fn dense_reference(op: &(impl SymOperator + ?Sized), cap: usize) -> Result<Vec<Vec<f64>>, EmbedError> {
    let n = op.dim();
    if n > cap {
        return Err(EmbedError::TooLarge { n, cap });
    }
    if n == 0 {
        return Ok(Vec::new());
    }
    let eig = SymmetricEigen::new(materialize(op));
    let top = eig.eigenvalues.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let weights: Vec<f64> = eig.eigenvalues.iter().map(|&l| (l - top).exp()).collect();
    let total: f64 = weights.iter().sum();
    let scale: Vec<f64> = weights.iter().map(|w| (n as f64 * w / total).sqrt()).collect();
    Ok((0..n).map(|i| (0..n).map(|k| scale[k] * eig.eigenvectors[(i, k)]).collect()).collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::SparseSymBuilder;

    #[test]
    fn zero_gives_identity() {
        let op = SparseSymBuilder::new(3).build();
        let x = dense_gram(&op, 64).unwrap();
        assert!((x - DMatrix::<f64>::identity(3, 3)).abs().max() < 1e-12);
    }

    #[test]
    fn matches_scalar_series_per_eigenvalue() {
        // Path Laplacian on 3 vertices scaled by 0.7.
        let mut b = SparseSymBuilder::new(3);
        b.add_edge_laplacian(0, 1, 0.7);
        b.add_edge_laplacian(1, 2, 0.7);
        let op = b.build();
        let a = op.to_dense();
        // exp(A) by a 60-term power series.
        let mut term = DMatrix::<f64>::identity(3, 3);
        let mut sum = term.clone();
        for k in 1..60 {
            term = &term * &a / k as f64;
            sum += &term;
        }
        let expected = &sum * (3.0 / sum.trace());
        let x = dense_gram(&op, 64).unwrap();
        assert!((x.clone() - expected).abs().max() < 1e-10);
        assert!((x.trace() - 3.0).abs() < 1e-12);
    }

    #[test]
    fn cap_enforced() {
        let op = SparseSymBuilder::new(5).build();
        assert!(matches!(dense_reference(&op, 4), Err(EmbedError::TooLarge { .. })));
    }
}
