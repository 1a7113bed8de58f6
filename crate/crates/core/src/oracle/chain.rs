use std::collections::HashMap;

use super::OracleParams;
use crate::embed::Embedding;
use crate::feedback::{FeedbackKind, FeedbackMatrix, PathTerm};
use crate::rational::to_f64;

/// Whether `Σ ‖p_j − p_{j−1}‖² ≤ ‖p_l − p_0‖² − slack`.
pub fn check_violating(path: &[usize], emb: &Embedding, slack: f64) -> bool {
    if path.len() < 2 {
        return false;
    }
    let hops: f64 = path.windows(2).map(|w| emb.sq_dist(w[0], w[1])).sum();
    violates(hops, emb.sq_dist(path[0], path[path.len() - 1]), slack)
}

/// The violation inequality on squared lengths.
pub fn violates(hop_total: f64, end_to_end: f64, slack: f64) -> bool {
    hop_total <= end_to_end - slack
}

/// `M_1 ∘ M_2 ∘ … ∘ M_k`: paths `(x_0, …, x_k)` with `(x_{i-1}, x_i) ∈ M_i`,
/// ordered by start vertex.
pub fn compose(matchings: &[Vec<(usize, usize)>]) -> Vec<Vec<usize>> {
    let Some((first, rest)) = matchings.split_first() else {
        return Vec::new();
    };
    let mut paths: Vec<Vec<usize>> = first.iter().map(|&(x, y)| vec![x, y]).collect();
    for m in rest {
        let next: HashMap<usize, usize> = m.iter().copied().collect();
        paths.retain_mut(|p| match next.get(p.last().expect("paths are nonempty")) {
            Some(&y) => {
                p.push(y);
                true
            }
            None => false,
        });
    }
    paths.sort_unstable();
    paths
}

/// First contiguous subpath with distinct vertices that violates by `slack`,
/// scanning start positions left to right and shorter subpaths first.
pub fn violating_subpath(path: &[usize], emb: &Embedding, slack: f64) -> Option<Vec<usize>> {
    for i in 0..path.len() {
        for j in i + 2..path.len() {
            let q = &path[i..=j];
            if has_repeat(q) {
                break;
            }
            if check_violating(q, emb, slack) {
                return Some(q.to_vec());
            }
        }
    }
    None
}

fn has_repeat(q: &[usize]) -> bool {
    let last = q[q.len() - 1];
    q[..q.len() - 1].contains(&last)
}

/// Violating subpaths, at most one per composed path.
pub fn harvest(paths: &[Vec<usize>], emb: &Embedding, slack: f64) -> Vec<Vec<usize>> {
    paths.iter().filter_map(|p| violating_subpath(p, emb, slack)).collect()
}

/// `(α/n) I + (2α / (|P| slack)) (L(F) − L(D))` for violating paths `P`.
pub fn chain_feedback(paths: Vec<Vec<usize>>, params: &OracleParams) -> FeedbackMatrix {
    let n = params.n;
    let coef = 2.0 * to_f64(&params.alpha) / (paths.len() as f64 * params.slack);
    let mut hop_degree = vec![0usize; n];
    let mut end_degree = vec![0usize; n];
    for p in &paths {
        for w in p.windows(2) {
            hop_degree[w[0]] += 1;
            hop_degree[w[1]] += 1;
        }
        end_degree[p[0]] += 1;
        end_degree[p[p.len() - 1]] += 1;
    }
    let top_hops = hop_degree.iter().copied().max().unwrap_or(0) as f64;
    let top_ends = end_degree.iter().copied().max().unwrap_or(0) as f64;
    FeedbackMatrix {
        kind: FeedbackKind::Chain,
        n,
        alpha: params.alpha,
        y: vec![params.alpha_per_vertex(); n],
        set_term: None,
        paths: paths.into_iter().map(|vertices| PathTerm { vertices, weight: coef }).collect(),
        lambda: Vec::new(),
        width_bound: chain_norm_bound(to_f64(&params.alpha_per_vertex()), coef, top_hops, top_ends),
    }
}

/// Norm bound on `a I + coef (L(F) − L(D))` from `0 ⪯ L(F) ⪯ 2 hops I` and
/// `0 ⪯ L(D) ⪯ 2 ends I`.
pub fn chain_norm_bound(a: f64, coef: f64, hops: f64, ends: f64) -> f64 {
    (a + 2.0 * coef * hops).max(2.0 * coef * ends - a)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn line(points: &[f64]) -> Embedding {
        Embedding::from_columns(points.iter().map(|&p| vec![p]).collect(), 0.1, 0.1)
    }

    #[test]
    fn single_edge_never_violates() {
        let e = line(&[0.0, 1.0]);
        assert!(!check_violating(&[0, 1], &e, 1e-9));
        assert!(!check_violating(&[0], &e, 0.0));
    }

    #[test]
    fn detours_do_not_violate_but_straight_runs_do() {
        let e = line(&[0.0, 1.0, 0.5]);
        assert!(!check_violating(&[0, 1, 2], &e, 0.0));
        // squared hops sum below the squared end-to-end distance
        let e = line(&[0.0, 0.5, 1.0, 1.5]);
        assert!(check_violating(&[0, 1, 2, 3], &e, 1e-9));
    }

    #[test]
    fn hand_built_chain() {
        // hops 0.1 + 0.1 against an end-to-end 0.5 with slack 0.2
        assert!(violates(0.1 + 0.1, 0.5, 0.2));
        assert!(!violates(0.1 + 0.1, 0.5, 0.31));
        // Realizable version: midpoint, hops 0.125 each, end-to-end 0.5.
        let h = 0.5f64.sqrt();
        let e = Embedding::from_columns(vec![vec![0.0, 1.0], vec![h / 2.0, 1.0], vec![h, 1.0]], 0.1, 0.1);
        let scale = 3.0 / (1.0 + 0.125 + 1.0 + 0.5 + 1.0);
        assert!((e.sq_dist(0, 2) - 0.5 * scale).abs() < 1e-12);
        assert!(check_violating(&[0, 1, 2], &e, 0.2 * scale));
        assert!(!check_violating(&[0, 1, 2], &e, 0.26 * scale));
    }

    #[test]
    fn composition_follows_endpoints() {
        let m1 = vec![(0, 1), (2, 3)];
        let m2 = vec![(1, 4), (5, 6)];
        let m3 = vec![(4, 7)];
        assert_eq!(compose(&[m1.clone(), m2.clone(), m3]), vec![vec![0, 1, 4, 7]]);
        assert_eq!(compose(&[m1.clone()]), vec![vec![0, 1], vec![2, 3]]);
        assert!(compose(&[]).is_empty());
    }

    #[test]
    fn subpath_scan_skips_repeats() {
        let e = line(&[0.0, 1.0, 0.0]);
        assert_eq!(violating_subpath(&[0, 1, 0], &e, 0.0), None);
    }
}
