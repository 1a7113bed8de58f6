use proptest::prelude::*;

use vsep_core::embed::Embedding;
use vsep_core::graph::{
    brute_force_opt, generate, parse_graph, render_graph, with_random_weights, GeneratorKind, WeightedGraph,
};
use vsep_core::maxflow::{max_flow, FlowNetwork};
use vsep_core::oracle::{low_norm_set, matching, rationalize_beta, MatchingOutcome, OracleConfig, OracleParams};
use vsep_core::rational::{to_f64, Rational};
use vsep_core::solver::primal_witness;
use vsep_core::Dinic;

fn third() -> Rational {
    Rational::new(1, 3)
}

fn arb_graph(max_n: usize) -> impl Strategy<Value = WeightedGraph> {
    (3..=max_n, 0.1f64..0.9, any::<u64>(), 1u64..30).prop_map(|(n, p, seed, w)| {
        let g = generate(&GeneratorKind::Gnp { n, p }, seed).unwrap();
        with_random_weights(&g, w, seed).unwrap()
    })
}

fn arb_network() -> impl Strategy<Value = FlowNetwork> {
    (1usize..=8)
        .prop_flat_map(|internal| {
            let nodes = internal + 2;
            (Just(internal), prop::collection::vec((0..nodes, 0..nodes, 0i64..15), 1..4 * internal + 4))
        })
        .prop_map(|(internal, arcs)| {
            let mut net = FlowNetwork::new(internal + 2, internal, internal + 1).unwrap();
            for (from, to, cap) in arcs {
                if from != to {
                    net.add_arc(from, to, cap).unwrap();
                }
            }
            net
        })
}

/// Sink sides (as node masks) of every minimum cut, by enumeration.
fn min_cut_sink_sides(net: &FlowNetwork) -> (i64, Vec<Vec<bool>>) {
    let (s, t) = (net.source(), net.sink());
    let internal: Vec<usize> = (0..net.nodes()).filter(|&v| v != s && v != t).collect();
    let mut best = i64::MAX;
    let mut sides = Vec::new();
    for mask in 0u32..(1 << internal.len()) {
        let mut sink = vec![false; net.nodes()];
        sink[t] = true;
        for (k, &v) in internal.iter().enumerate() {
            sink[v] = mask >> k & 1 == 1;
        }
        let cap: i64 = net.arcs().iter().filter(|a| !sink[a.from] && sink[a.to]).map(|a| a.cap).sum();
        if cap < best {
            best = cap;
            sides.clear();
        }
        if cap == best {
            sides.push(sink);
        }
    }
    (best, sides)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn graph_text_round_trips(g in arb_graph(20)) {
        prop_assert_eq!(parse_graph(&render_graph(&g)).unwrap(), g);
    }

    #[test]
    fn adding_an_edge_never_lowers_opt(g in arb_graph(9), u in 0usize..9, v in 0usize..9) {
        let (u, v) = (u % g.n(), v % g.n());
        prop_assume!(u != v && !g.has_edge(u, v));
        let (before, _) = brute_force_opt(&g, &third(), 14).unwrap();
        let (after, _) = brute_force_opt(&g.with_edge(u, v).unwrap(), &third(), 14).unwrap();
        prop_assert!(before <= after);
    }

    #[test]
    fn heavier_vertices_never_lower_opt(g in arb_graph(9), v in 0usize..9, extra in 1u64..20) {
        let mut w = g.weights().to_vec();
        w[v % g.n()] += extra;
        let (before, _) = brute_force_opt(&g, &third(), 14).unwrap();
        let (after, _) = brute_force_opt(&g.reweighted(w).unwrap(), &third(), 14).unwrap();
        prop_assert!(before <= after);
    }

    #[test]
    fn grid_opt_is_at_most_the_short_side(rows in 2usize..=4, cols in 2usize..=4) {
        let g = generate(&GeneratorKind::Grid { rows, cols }, 0).unwrap();
        let (opt, _) = brute_force_opt(&g, &third(), 16).unwrap();
        prop_assert!(opt <= rows.min(cols) as u64);
    }

    #[test]
    fn max_flow_equals_min_cut(net in arb_network()) {
        let res = max_flow(&net);
        let (best, _) = min_cut_sink_sides(&net);
        prop_assert_eq!(res.value, best);
        prop_assert_eq!(res.cut_capacity(&net), best);
    }

    #[test]
    fn scaling_capacities_scales_the_flow(net in arb_network(), k in 1i64..50) {
        prop_assert_eq!(max_flow(&net.scaled(k).unwrap()).value, k * max_flow(&net).value);
    }

    #[test]
    fn canonical_sink_side_is_inclusion_minimal(net in arb_network()) {
        let res = max_flow(&net);
        let (_, sides) = min_cut_sink_sides(&net);
        prop_assert!(sides.contains(&res.sink_side));
        for side in &sides {
            prop_assert!(res.sink_side.iter().zip(side).all(|(&ours, &theirs)| !ours || theirs));
        }
    }

    #[test]
    fn primal_witness_matches_brute_force(g in arb_graph(10)) {
        let (opt, s) = brute_force_opt(&g, &third(), 14).unwrap();
        let w = primal_witness(&g, &s, &third(), 0).unwrap();
        prop_assert_eq!(w.objective, 4 * opt);
    }

    #[test]
    fn matching_is_skew_symmetric(
        g in arb_graph(12),
        cols in prop::collection::vec(prop::collection::vec(-1.0f64..1.0, 3), 12),
        u in prop::collection::vec(-1.0f64..1.0, 3),
        alpha in 1i128..20,
    ) {
        let n = g.n();
        let cfg = OracleConfig::new(third(), 0.5);
        let params = OracleParams::new(n, Rational::from_integer(alpha), &cfg).unwrap();
        let emb = Embedding::from_columns(cols[..n].to_vec(), params.gamma, params.tau);
        let low = low_norm_set(&emb, &params);
        let neg: Vec<f64> = u.iter().map(|x| -x).collect();
        let gap = 0.05;
        let plus = matching(&g, &emb, &low, &u, &params, gap, &Dinic).unwrap();
        let minus = matching(&g, &emb, &low, &neg, &params, gap, &Dinic).unwrap();
        match (plus.outcome, minus.outcome) {
            (MatchingOutcome::Matching(a), MatchingOutcome::Matching(b)) => {
                let mut reversed: Vec<(usize, usize)> = a.iter().map(|&(x, y)| (y, x)).collect();
                reversed.sort_unstable();
                prop_assert_eq!(reversed, b);
            }
            (a, b) => prop_assert_eq!(a, b),
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(1000))]

    #[test]
    fn rationalized_beta_stays_in_its_interval(
        n in 1usize..500,
        scale in 1.0f64..1e6,
        grid_num in 1i128..50,
    ) {
        let grid = Rational::new(grid_num, 100);
        let beta0 = scale * to_f64(&grid) / n as f64;
        let (p, q) = rationalize_beta(beta0, n, grid).unwrap();
        let ratio = p as f64 / q as f64;
        prop_assert!(ratio >= beta0 * (1.0 - 1e-12) && ratio <= 2.0 * beta0 * (1.0 + 1e-12), "{p}/{q} vs {beta0}");
    }
}
