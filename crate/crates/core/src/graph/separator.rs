use std::fmt;

use super::WeightedGraph;
use crate::rational::{format_rational, Rational};

/// A partition `(A, B, C)` of the vertices where `C` separates `A` from `B`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SeparatorSolution {
    pub a: Vec<usize>,
    pub b: Vec<usize>,
    pub c: Vec<usize>,
    /// `1 - max(|A|, |B|) / n`.
    pub balance_achieved: Rational,
    /// `w(C)`.
    pub cost: u64,
}

impl SeparatorSolution {
    /// Sorts the three sides and derives cost and achieved balance from `g`.
    pub fn new(g: &WeightedGraph, mut a: Vec<usize>, mut b: Vec<usize>, mut c: Vec<usize>) -> Self {
        a.sort_unstable();
        b.sort_unstable();
        c.sort_unstable();
        let n = g.n().max(1) as i128;
        let big = a.len().max(b.len()) as i128;
        let balance_achieved = Rational::new(n - big, n);
        let cost = c.iter().filter(|&&v| v < g.n()).map(|&v| g.weight(v)).sum();
        Self { a, b, c, balance_achieved, cost }
    }

    /// The separator `C = V` with both sides empty; always valid.
    pub fn everything(g: &WeightedGraph) -> Self {
        Self::new(g, Vec::new(), Vec::new(), (0..g.n()).collect())
    }

    /// Parses the three-line `A: … / B: … / C: …` form; other lines are ignored.
    pub fn parse(g: &WeightedGraph, text: &str) -> Result<Self, String> {
        let mut sides: [Option<Vec<usize>>; 3] = [None, None, None];
        for (idx, line) in text.lines().enumerate() {
            let line = line.trim();
            let slot = match line.get(..2) {
                Some("A:") => 0,
                Some("B:") => 1,
                Some("C:") => 2,
                _ => continue,
            };
            if sides[slot].is_some() {
                return Err(format!("line {}: side given twice", idx + 1));
            }
            let ids = line[2..]
                .split_whitespace()
                .map(|t| t.parse::<usize>().map_err(|_| format!("line {}: bad vertex `{t}`", idx + 1)))
                .collect::<Result<Vec<_>, _>>()?;
            sides[slot] = Some(ids);
        }
        let [Some(a), Some(b), Some(c)] = sides else {
            return Err("expected `A:`, `B:` and `C:` lines".into());
        };
        Ok(Self::new(g, a, b, c))
    }

    /// Three lines `A: …`, `B: …`, `C: …` with ascending ids.
    pub fn render(&self) -> String {
        let line = |tag: &str, ids: &[usize]| {
            let mut s = String::from(tag);
            s.push(':');
            for v in ids {
                s.push(' ');
                s.push_str(&v.to_string());
            }
            s.push('\n');
            s
        };
        let mut out = line("A", &self.a);
        out.push_str(&line("B", &self.b));
        out.push_str(&line("C", &self.c));
        out
    }
}

/// First violated separator condition.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Violation {
    VertexOutOfRange(usize),
    /// Vertex listed more than once across the three sides.
    Repeated(usize),
    /// Vertex not listed in any side.
    Missing(usize),
    CrossingEdge(usize, usize),
    Unbalanced { side: char, size: usize, limit: Rational },
    CostMismatch { recorded: u64, actual: u64 },
    BalanceOverstated { recorded: Rational, actual: Rational },
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::VertexOutOfRange(v) => write!(f, "vertex {v} is out of range"),
            Violation::Repeated(v) => write!(f, "vertex {v} appears more than once"),
            Violation::Missing(v) => write!(f, "vertex {v} is in no side"),
            Violation::CrossingEdge(u, v) => write!(f, "edge {{{u}, {v}}} joins A and B"),
            Violation::Unbalanced { side, size, limit } => {
                write!(f, "|{side}| = {size} exceeds (1 - c)n = {}", format_rational(limit))
            }
            Violation::CostMismatch { recorded, actual } => {
                write!(f, "recorded cost {recorded} but w(C) = {actual}")
            }
            Violation::BalanceOverstated { recorded, actual } => write!(
                f,
                "recorded balance {} exceeds actual {}",
                format_rational(recorded),
                format_rational(actual)
            ),
        }
    }
}

/// Checks that `s` is a `c_star`-balanced vertex separator of `g`.
pub fn validate_separator(g: &WeightedGraph, s: &SeparatorSolution, c_star: &Rational) -> Result<(), Violation> {
    let n = g.n();
    // 0 = unassigned, 1 = A, 2 = B, 3 = C
    let mut side = vec![0u8; n];
    for (tag, set) in [(1u8, &s.a), (2, &s.b), (3, &s.c)] {
        for &v in set.iter() {
            if v >= n {
                return Err(Violation::VertexOutOfRange(v));
            }
            if side[v] != 0 {
                return Err(Violation::Repeated(v));
            }
            side[v] = tag;
        }
    }
    if let Some(v) = side.iter().position(|&t| t == 0) {
        return Err(Violation::Missing(v));
    }
    for &(u, v) in g.edges() {
        if (side[u] == 1 && side[v] == 2) || (side[u] == 2 && side[v] == 1) {
            return Err(Violation::CrossingEdge(u, v));
        }
    }
    let limit = (Rational::from_integer(1) - c_star) * Rational::from_integer(n as i128);
    for (name, set) in [('A', &s.a), ('B', &s.b)] {
        if Rational::from_integer(set.len() as i128) > limit {
            return Err(Violation::Unbalanced { side: name, size: set.len(), limit });
        }
    }
    let actual = g.weight_of(&s.c);
    if actual != s.cost {
        return Err(Violation::CostMismatch { recorded: s.cost, actual });
    }
    let big = s.a.len().max(s.b.len()) as i128;
    let actual_balance = Rational::new(n as i128 - big, (n as i128).max(1));
    if s.balance_achieved > actual_balance {
        return Err(Violation::BalanceOverstated { recorded: s.balance_achieved, actual: actual_balance });
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{generate, GeneratorKind};

    fn third() -> Rational {
        Rational::new(1, 3)
    }

    #[test]
    fn middle_of_path() {
        let g = generate(&GeneratorKind::Path { n: 5 }, 0).unwrap();
        let s = SeparatorSolution::new(&g, vec![0, 1], vec![3, 4], vec![2]);
        assert_eq!(validate_separator(&g, &s, &third()), Ok(()));
        assert_eq!(s.cost, 1);
    }

    #[test]
    fn empty_separator_on_path() {
        let g = generate(&GeneratorKind::Path { n: 5 }, 0).unwrap();
        let s = SeparatorSolution::new(&g, (0..5).collect(), vec![], vec![]);
        assert!(matches!(
            validate_separator(&g, &s, &third()),
            Err(Violation::Unbalanced { side: 'A', size: 5, .. })
        ));
    }

    #[test]
    fn k4_single_vertex() {
        let g = generate(&GeneratorKind::Complete { n: 4 }, 0).unwrap();
        let s = SeparatorSolution::new(&g, vec![1, 2, 3], vec![], vec![0]);
        assert!(matches!(validate_separator(&g, &s, &third()), Err(Violation::Unbalanced { .. })));
    }

    #[test]
    fn diagnostics_name_the_problem() {
        let g = generate(&GeneratorKind::Path { n: 5 }, 0).unwrap();
        let s = SeparatorSolution::new(&g, vec![0, 1, 2], vec![3, 4], vec![]);
        assert_eq!(validate_separator(&g, &s, &third()), Err(Violation::CrossingEdge(2, 3)));
        let s = SeparatorSolution::new(&g, vec![0, 1], vec![3], vec![2]);
        assert_eq!(validate_separator(&g, &s, &third()), Err(Violation::Missing(4)));
        let s = SeparatorSolution::new(&g, vec![0, 1], vec![3, 4, 1], vec![2]);
        assert_eq!(validate_separator(&g, &s, &third()), Err(Violation::Repeated(1)));
        let mut s = SeparatorSolution::new(&g, vec![0, 1], vec![3, 4], vec![2]);
        s.cost = 0;
        assert!(matches!(validate_separator(&g, &s, &third()), Err(Violation::CostMismatch { .. })));
    }

    #[test]
    fn render_parse_round_trip() {
        let g = generate(&GeneratorKind::Path { n: 5 }, 0).unwrap();
        let s = SeparatorSolution::new(&g, vec![1, 0], vec![4, 3], vec![2]);
        let text = s.render();
        assert_eq!(text, "A: 0 1\nB: 3 4\nC: 2\n");
        assert_eq!(SeparatorSolution::parse(&g, &format!("cost: 1\n{text}")).unwrap(), s);
    }
}
