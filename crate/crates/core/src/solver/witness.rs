use rand::seq::index::sample;

use crate::graph::{validate_separator, SeparatorSolution, Violation, WeightedGraph};
use crate::rational::Rational;
use crate::rng::{substream, Role};

/// Largest `n` for which every set of the spread family is checked.
pub const EXHAUSTIVE_SET_CAP: usize = 16;
const SAMPLED_SETS: usize = 2000;

/// Integral relaxation solution built from a separator: `x_i ∈ {0, 4}` and
/// one-dimensional `v_i ∈ {−1, +1}`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PrimalWitness {
    pub x: Vec<i64>,
    pub v: Vec<i64>,
    /// Most balanced extension of `A` and `B` to a partition of `V`.
    pub hat_a: Vec<usize>,
    pub hat_b: Vec<usize>,
    /// `Σ w_i x_i`, equal to `4 w(C)`.
    pub objective: u64,
    pub sets_checked: usize,
    pub exhaustive: bool,
}

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum WitnessError {
    #[error("input is not a valid separator: {0}")]
    InvalidSeparator(Violation),
    #[error("edge ({0}, {1}): x_i + x_j below ‖v_i − v_j‖²")]
    Edge(usize, usize),
    #[error("vertex {0}: ‖v_i‖² ≠ 1")]
    Norm(usize),
    #[error("triangle ({0}, {1}, {2}) violated")]
    Triangle(usize, usize, usize),
    #[error("set {0:?} has spread {1} below {2}")]
    Spread(Vec<usize>, i64, Rational),
    #[error("negative x at vertex {0}")]
    Negative(usize),
    #[error("objective {got} differs from 4 w(C) = {want}")]
    Objective { got: u64, want: u64 },
}

/// Builds the witness for a `c`-balanced separator and checks every
/// constraint of the relaxation by direct evaluation.
///
/// Path constraints are checked through the triangle inequality on all
/// triples of squared distances, which implies them for every sequence of
/// distinct vertices. Spread constraints are enumerated for
/// `n ≤ EXHAUSTIVE_SET_CAP` and sampled (plus the worst case) above.
pub fn primal_witness(
    g: &WeightedGraph,
    s: &SeparatorSolution,
    c: &Rational,
    seed: u64,
) -> Result<PrimalWitness, WitnessError> {
    validate_separator(g, s, c).map_err(WitnessError::InvalidSeparator)?;
    let n = g.n();
    let mut hat_a = s.a.clone();
    let mut hat_b = s.b.clone();
    for &v in &s.c {
        if hat_a.len() <= hat_b.len() {
            hat_a.push(v);
        } else {
            hat_b.push(v);
        }
    }
    hat_a.sort_unstable();
    hat_b.sort_unstable();
    let mut x = vec![0i64; n];
    for &v in &s.c {
        x[v] = 4;
    }
    let mut v = vec![1i64; n];
    for &i in &hat_a {
        v[i] = -1;
    }
    let sq = |i: usize, j: usize| (v[i] - v[j]) * (v[i] - v[j]);

    for &(i, j) in g.edges() {
        if x[i] + x[j] < sq(i, j) {
            return Err(WitnessError::Edge(i, j));
        }
    }
    for i in 0..n {
        if v[i] * v[i] != 1 {
            return Err(WitnessError::Norm(i));
        }
        if x[i] < 0 {
            return Err(WitnessError::Negative(i));
        }
    }
    for i in 0..n {
        for j in 0..n {
            for k in 0..n {
                if sq(i, k) > sq(i, j) + sq(j, k) {
                    return Err(WitnessError::Triangle(i, j, k));
                }
            }
        }
    }

    let spread = Rational::new(9, 4) * c * c * Rational::from_integer((n * n) as i128);
    let min_size = super::min_set_size(n, c);
    let mut is_a = vec![false; n];
    for &i in &hat_a {
        is_a[i] = true;
    }
    let check = |set: &[usize]| -> Result<(), WitnessError> {
        let in_a = set.iter().filter(|&&i| is_a[i]).count() as i64;
        let in_b = set.len() as i64 - in_a;
        // Σ_{i<j ∈ S} (v_i − v_j)² = 4 |Â ∩ S| |B̂ ∩ S|
        let value = 4 * in_a * in_b;
        if Rational::from_integer(value as i128) < spread {
            return Err(WitnessError::Spread(set.to_vec(), value, spread));
        }
        Ok(())
    };
    let mut sets_checked = 0;
    let exhaustive = n <= EXHAUSTIVE_SET_CAP;
    if exhaustive {
        for mask in 0u32..(1u32 << n) {
            if (mask.count_ones() as usize) < min_size {
                continue;
            }
            let set: Vec<usize> = (0..n).filter(|&i| mask >> i & 1 == 1).collect();
            check(&set)?;
            sets_checked += 1;
        }
    } else {
        // Worst case: drop as many vertices as allowed from the smaller side.
        let drop = n - min_size;
        let (small, large) = if hat_a.len() <= hat_b.len() { (&hat_a, &hat_b) } else { (&hat_b, &hat_a) };
        let mut worst: Vec<usize> = small.iter().skip(drop).chain(large.iter()).copied().collect();
        worst.sort_unstable();
        check(&worst)?;
        sets_checked += 1;
        let mut rng = substream(seed, Role::Sampling, &[n as u64]);
        for _ in 0..SAMPLED_SETS {
            let mut set = sample(&mut rng, n, min_size).into_vec();
            set.sort_unstable();
            check(&set)?;
            sets_checked += 1;
        }
    }

    let objective: u64 = (0..n).map(|i| g.weight(i) * x[i] as u64).sum();
    let want = 4 * s.cost;
    if objective != want {
        return Err(WitnessError::Objective { got: objective, want });
    }
    Ok(PrimalWitness { x, v, hat_a, hat_b, objective, sets_checked, exhaustive })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{brute_force_opt, generate, GeneratorKind};

    #[test]
    fn path_of_five() {
        let g = generate(&GeneratorKind::Path { n: 5 }, 0).unwrap();
        let s = SeparatorSolution::new(&g, vec![0, 1], vec![3, 4], vec![2]);
        let w = primal_witness(&g, &s, &Rational::new(1, 3), 0).unwrap();
        assert_eq!(w.objective, 4);
        assert!(w.hat_a.len() >= 2 && w.hat_b.len() >= 2);
        assert!(w.exhaustive);
    }

    #[test]
    fn complete_four() {
        let g = generate(&GeneratorKind::Complete { n: 4 }, 0).unwrap();
        let (opt, s) = brute_force_opt(&g, &Rational::new(1, 3), 14).unwrap();
        assert_eq!(opt, 2);
        let w = primal_witness(&g, &s, &Rational::new(1, 3), 0).unwrap();
        assert_eq!(w.objective, 8);
        for &(i, j) in g.edges() {
            assert!(w.x[i] + w.x[j] >= (w.v[i] - w.v[j]).pow(2));
        }
    }

    #[test]
    fn empty_side_still_extends_evenly() {
        let g = generate(&GeneratorKind::Complete { n: 6 }, 0).unwrap();
        let s = SeparatorSolution::new(&g, vec![], vec![0, 1, 2, 3], vec![4, 5]);
        let w = primal_witness(&g, &s, &Rational::new(1, 3), 0).unwrap();
        assert_eq!(w.hat_a, vec![4, 5]);
        assert_eq!(w.objective, 8);
    }

    #[test]
    fn large_instances_sample_sets() {
        let g = generate(&GeneratorKind::Grid { rows: 5, cols: 4 }, 0).unwrap();
        let s = SeparatorSolution::new(&g, (0..8).collect(), (12..20).collect(), (8..12).collect());
        let w = primal_witness(&g, &s, &Rational::new(1, 3), 3).unwrap();
        assert!(!w.exhaustive);
        assert_eq!(w.sets_checked, SAMPLED_SETS + 1);
        assert_eq!(w.objective, 16);
    }

    #[test]
    fn invalid_input_is_rejected() {
        let g = generate(&GeneratorKind::Path { n: 5 }, 0).unwrap();
        let s = SeparatorSolution::new(&g, vec![0, 1, 2], vec![3, 4], vec![]);
        assert!(matches!(primal_witness(&g, &s, &Rational::new(1, 3), 0), Err(WitnessError::InvalidSeparator(_))));
    }
}
