use super::{GraphError, SeparatorSolution, WeightedGraph};
use crate::rational::Rational;

pub const DEFAULT_BRUTE_FORCE_CAP: usize = 14;

/// Exact minimum-weight `c`-balanced vertex separator by exhaustive search.
///
/// Candidate sets `C` are visited by increasing `w(C)`. Among feasible sets
/// of minimum weight the one admitting the most balanced split wins, ties
/// by the lexicographically smallest sorted vertex list.
pub fn brute_force_opt(g: &WeightedGraph, c: &Rational, cap: usize) -> Result<(u64, SeparatorSolution), GraphError> {
    let n = g.n();
    if n > cap || n > 30 {
        return Err(GraphError::TooLarge { n, cap });
    }
    let limit_num = (c.denom() - c.numer()) * n as i128;
    let den = *c.denom();
    // max(|A|, |B|) <= (1 - c) n  <=>  size * den <= limit_num
    let fits = |size: usize| (size as i128) * den <= limit_num;

    let mut order: Vec<(u64, Vec<usize>, u32)> = (0u32..(1u32 << n))
        .map(|mask| {
            let set: Vec<usize> = (0..n).filter(|&v| mask >> v & 1 == 1).collect();
            (g.weight_of(&set), set, mask)
        })
        .collect();
    order.sort_unstable_by(|x, y| (x.0, &x.1).cmp(&(y.0, &y.1)));

    let mut best: Option<(u64, usize, Vec<usize>, Vec<Vec<usize>>, u64)> = None;
    for (cost, cset, mask) in order {
        if best.as_ref().is_some_and(|b| cost > b.0) {
            break;
        }
        let keep: Vec<bool> = (0..n).map(|v| mask >> v & 1 == 0).collect();
        let comps = g.components(&keep);
        let rest = n - cset.len();
        if let Some((big, assign)) = best_assignment(&comps, rest, &fits) {
            if best.as_ref().is_none_or(|b| big < b.1) {
                best = Some((cost, big, cset, comps, assign));
            }
        }
    }
    if let Some((cost, _, cset, comps, assign)) = best {
        let mut a = Vec::new();
        let mut b = Vec::new();
        for (i, comp) in comps.iter().enumerate() {
            if assign >> i & 1 == 1 {
                a.extend_from_slice(comp);
            } else {
                b.extend_from_slice(comp);
            }
        }
        return Ok((cost, SeparatorSolution::new(g, a, b, cset)));
    }
    unreachable!("C = V is always feasible")
}

/// Most balanced two-bin split of the components, ties by smallest mask.
fn best_assignment(comps: &[Vec<usize>], total: usize, fits: &impl Fn(usize) -> bool) -> Option<(usize, u64)> {
    let k = comps.len();
    let mut best: Option<(usize, u64)> = None;
    for mask in 0u64..(1u64 << k) {
        let a: usize = comps.iter().enumerate().filter(|(i, _)| mask >> i & 1 == 1).map(|(_, c)| c.len()).sum();
        let big = a.max(total - a);
        if fits(big) && best.is_none_or(|(b, _)| big < b) {
            best = Some((big, mask));
        }
    }
    best
}
