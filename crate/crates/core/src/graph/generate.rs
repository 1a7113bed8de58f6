use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::{GraphError, WeightedGraph};

/// Instance families for tests and benchmarks.
#[derive(Debug, Clone, PartialEq)]
pub enum GeneratorKind {
    Path { n: usize },
    /// Center is vertex 0, leaves are `1..=leaves`.
    Star { leaves: usize },
    /// Row-major `rows × cols` grid.
    Grid { rows: usize, cols: usize },
    Gnp { n: usize, p: f64 },
    /// Two cliques joined by `bridge` disjoint edges.
    TwoBlobs { left: usize, right: usize, bridge: usize },
    Complete { n: usize },
}

/// Builds a unit-weight instance. Deterministic in `seed`; only `Gnp` draws randomness.
pub fn generate(kind: &GeneratorKind, seed: u64) -> Result<WeightedGraph, GraphError> {
    let invalid = |msg: String| Err(GraphError::InvalidParams(msg));
    let (n, edges) = match *kind {
        GeneratorKind::Path { n } => (n, (1..n).map(|i| (i - 1, i)).collect()),
        GeneratorKind::Star { leaves } => (leaves + 1, (1..=leaves).map(|i| (0, i)).collect()),
        GeneratorKind::Grid { rows, cols } => {
            if rows == 0 || cols == 0 {
                return invalid(format!("grid {rows}x{cols} is empty"));
            }
            let mut edges = Vec::with_capacity(2 * rows * cols);
            for r in 0..rows {
                for c in 0..cols {
                    let v = r * cols + c;
                    if c + 1 < cols {
                        edges.push((v, v + 1));
                    }
                    if r + 1 < rows {
                        edges.push((v, v + cols));
                    }
                }
            }
            (rows * cols, edges)
        }
        GeneratorKind::Gnp { n, p } => {
            if !(0.0..=1.0).contains(&p) {
                return invalid(format!("edge probability {p} outside [0, 1]"));
            }
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let mut edges = Vec::new();
            for u in 0..n {
                for v in u + 1..n {
                    if rng.random::<f64>() < p {
                        edges.push((u, v));
                    }
                }
            }
            (n, edges)
        }
        GeneratorKind::TwoBlobs { left, right, bridge } => {
            if left == 0 || right == 0 || bridge > left.min(right) {
                return invalid(format!("two_blobs({left}, {right}, bridge = {bridge})"));
            }
            let mut edges = Vec::new();
            for (lo, hi) in [(0, left), (left, left + right)] {
                for u in lo..hi {
                    for v in u + 1..hi {
                        edges.push((u, v));
                    }
                }
            }
            for i in 0..bridge {
                edges.push((left - 1 - i, left + i));
            }
            (left + right, edges)
        }
        GeneratorKind::Complete { n } => {
            let mut edges = Vec::new();
            for u in 0..n {
                for v in u + 1..n {
                    edges.push((u, v));
                }
            }
            (n, edges)
        }
    };
    WeightedGraph::unweighted(n, edges)
}

/// Replaces the weights by uniform draws from `1..=max_weight`.
pub fn with_random_weights(g: &WeightedGraph, max_weight: u64, seed: u64) -> Result<WeightedGraph, GraphError> {
    if max_weight == 0 {
        return Err(GraphError::InvalidParams("max_weight must be positive".into()));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x5eed_0f3e_1947);
    let weights = (0..g.n()).map(|_| rng.random_range(1..=max_weight)).collect();
    g.reweighted(weights)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn grid_counts() {
        let g = generate(&GeneratorKind::Grid { rows: 4, cols: 4 }, 0).unwrap();
        assert_eq!((g.n(), g.m()), (16, 24));
        let g = generate(&GeneratorKind::Grid { rows: 3, cols: 5 }, 0).unwrap();
        assert_eq!(g.m(), 2 * 15 - 3 - 5);
        assert!(g.has_edge(0, 5) && g.has_edge(0, 1) && !g.has_edge(4, 5));
    }

    #[test]
    fn gnp_extremes_and_determinism() {
        let g = generate(&GeneratorKind::Gnp { n: 10, p: 0.0 }, 1).unwrap();
        assert_eq!((g.n(), g.m()), (10, 0));
        let g = generate(&GeneratorKind::Gnp { n: 10, p: 1.0 }, 1).unwrap();
        assert_eq!(g.m(), 45);
        let a = generate(&GeneratorKind::Gnp { n: 20, p: 0.3 }, 42).unwrap();
        let b = generate(&GeneratorKind::Gnp { n: 20, p: 0.3 }, 42).unwrap();
        assert_eq!(a, b);
        assert!(generate(&GeneratorKind::Gnp { n: 3, p: 1.5 }, 0).is_err());
    }

    #[test]
    fn two_blobs_shape() {
        let g = generate(&GeneratorKind::TwoBlobs { left: 8, right: 8, bridge: 2 }, 0).unwrap();
        assert_eq!(g.n(), 16);
        assert_eq!(g.m(), 28 + 28 + 2);
        assert!(g.has_edge(7, 8) && g.has_edge(6, 9));
        assert!(generate(&GeneratorKind::TwoBlobs { left: 2, right: 8, bridge: 3 }, 0).is_err());
    }

    #[test]
    fn star_and_path() {
        let s = generate(&GeneratorKind::Star { leaves: 5 }, 0).unwrap();
        assert_eq!((s.n(), s.m()), (6, 5));
        assert_eq!(s.neighbors(0), &[1, 2, 3, 4, 5]);
        let p = generate(&GeneratorKind::Path { n: 5 }, 0).unwrap();
        assert_eq!(p.edges(), &[(0, 1), (1, 2), (2, 3), (3, 4)]);
    }

    #[test]
    fn random_weights_in_range() {
        let g = generate(&GeneratorKind::Path { n: 6 }, 0).unwrap();
        let w = with_random_weights(&g, 9, 3).unwrap();
        assert!(w.weights().iter().all(|&x| (1..=9).contains(&x)));
        assert_eq!(w.edges(), g.edges());
    }
}
