use std::fmt::Write as _;

use super::{weight_bound, GraphError, WeightedGraph, DEFAULT_WEIGHT_EXPONENT};

/// Parses the line format `p <n> <m>`, `w <v> <weight>`, `e <u> <v>`.
///
/// `#` starts a comment. Vertices without a `w` record get weight 1.
pub fn parse_graph(text: &str) -> Result<WeightedGraph, GraphError> {
    parse_graph_with_bound(text, DEFAULT_WEIGHT_EXPONENT)
}

/// Like [`parse_graph`] with weights bounded by `(n + 1)^weight_exponent`.
pub fn parse_graph_with_bound(text: &str, weight_exponent: u32) -> Result<WeightedGraph, GraphError> {
    let mut header: Option<(usize, usize)> = None;
    let mut weights: Vec<Option<u64>> = Vec::new();
    let mut edges = Vec::new();
    let mut seen = std::collections::BTreeSet::new();

    for (idx, raw) in text.lines().enumerate() {
        let line = idx + 1;
        let content = raw.split('#').next().unwrap_or("").trim();
        if content.is_empty() {
            continue;
        }
        let syntax = |msg: &str| GraphError::Syntax { line, msg: msg.to_string() };
        let mut tok = content.split_whitespace();
        let tag = tok.next().unwrap_or_default();
        let nums: Vec<u64> = tok
            .map(|t| t.parse::<u64>())
            .collect::<Result<_, _>>()
            .map_err(|_| syntax("expected non-negative integers"))?;
        match tag {
            "p" => {
                if header.is_some() {
                    return Err(syntax("duplicate `p` header"));
                }
                let [n, m] = nums[..] else {
                    return Err(syntax("`p` takes exactly two fields"));
                };
                header = Some((n as usize, m as usize));
                weights = vec![None; n as usize];
            }
            "w" | "e" => {
                let Some((n, _)) = header else {
                    return Err(syntax("record before `p` header"));
                };
                let [a, b] = nums[..] else {
                    return Err(syntax("record takes exactly two fields"));
                };
                let a = a as usize;
                if a >= n {
                    return Err(syntax(&format!("vertex {a} out of range")));
                }
                if tag == "w" {
                    if weights[a].is_some() {
                        return Err(syntax(&format!("duplicate weight for vertex {a}")));
                    }
                    let bound = weight_bound(n, weight_exponent);
                    if b == 0 || b > bound {
                        return Err(GraphError::WeightOutOfRange { vertex: a, weight: b, bound });
                    }
                    weights[a] = Some(b);
                } else {
                    let b = b as usize;
                    if b >= n {
                        return Err(syntax(&format!("vertex {b} out of range")));
                    }
                    if a == b {
                        return Err(syntax(&format!("self-loop at vertex {a}")));
                    }
                    let key = (a.min(b), a.max(b));
                    if !seen.insert(key) {
                        return Err(GraphError::DuplicateEdge { u: key.0, v: key.1 });
                    }
                    edges.push(key);
                }
            }
            other => return Err(syntax(&format!("unknown record `{other}`"))),
        }
    }

    let Some((n, m)) = header else {
        return Err(GraphError::Syntax { line: 0, msg: "missing `p` header".into() });
    };
    if edges.len() != m {
        return Err(GraphError::Syntax {
            line: 0,
            msg: format!("header declares {m} edges, found {}", edges.len()),
        });
    }
    let weights = weights.into_iter().map(|w| w.unwrap_or(1)).collect();
    WeightedGraph::with_weight_bound(n, edges, weights, weight_bound(n, weight_exponent))
}

/// Renders the canonical text form: header, all weights, then edges, ascending.
pub fn render_graph(g: &WeightedGraph) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "p {} {}", g.n(), g.m());
    for (v, w) in g.weights().iter().enumerate() {
        let _ = writeln!(out, "w {v} {w}");
    }
    for &(u, v) in g.edges() {
        let _ = writeln!(out, "e {u} {v}");
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn smallest_graph() {
        let g = parse_graph("p 2 1\nw 0 1\nw 1 1\ne 0 1\n").unwrap();
        assert_eq!(g.n(), 2);
        assert_eq!(g.edges(), &[(0, 1)]);
    }

    #[test]
    fn isolated_weighted_vertex() {
        let g = parse_graph("p 1 0\nw 0 7\n").unwrap();
        assert_eq!(g.n(), 1);
        assert_eq!(g.m(), 0);
        assert_eq!(g.weight(0), 7);
    }

    #[test]
    fn default_weights_and_comments() {
        let g = parse_graph("# triangle\np 3 3\ne 0 1\ne 1 2 # middle\ne 0 2\n").unwrap();
        assert_eq!(g.weights(), &[1, 1, 1]);
        assert_eq!(g.m(), 3);
    }

    #[test]
    fn errors_carry_line_numbers() {
        match parse_graph("p 2 1\nx 0 1\n") {
            Err(GraphError::Syntax { line: 2, .. }) => {}
            other => panic!("unexpected {other:?}"),
        }
        match parse_graph("p 2 1\ne 0 1\ne 1 0\n") {
            Err(GraphError::DuplicateEdge { u: 0, v: 1 }) => {}
            other => panic!("unexpected {other:?}"),
        }
        assert!(matches!(
            parse_graph("p 2 0\nw 0 1000\n"),
            Err(GraphError::WeightOutOfRange { vertex: 0, weight: 1000, .. })
        ));
        assert!(parse_graph("e 0 1\n").is_err());
        assert!(parse_graph("p 2 2\ne 0 1\n").is_err());
        assert!(parse_graph("p 2 0\nw 0 0\n").is_err());
    }

    #[test]
    fn render_is_canonical() {
        let g = WeightedGraph::new(3, vec![(2, 1), (0, 1)], vec![1, 2, 3]).unwrap();
        assert_eq!(render_graph(&g), "p 3 2\nw 0 1\nw 1 2\nw 2 3\ne 0 1\ne 1 2\n");
    }
}
