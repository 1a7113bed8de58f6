use std::fmt::Write as _;

use serde_json::{json, Value};
use vsep_core::rational::format_rational;
use vsep_core::solver::SweepRow;
use vsep_core::{DualCertificate, FlowResult, Rational, SeparatorSolution, SolveReport};

fn opt_rational(r: &Option<Rational>) -> Value {
    r.as_ref().map_or(Value::Null, |r| Value::String(format_rational(r)))
}

fn ids(v: &[usize]) -> String {
    v.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(" ")
}

pub fn pretty(v: &Value) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("values serialize");
    s.push('\n');
    s
}

pub fn separator_json(s: &SeparatorSolution) -> Value {
    json!({
        "a": s.a,
        "b": s.b,
        "c": s.c,
        "cost": s.cost,
        "balance_achieved": format_rational(&s.balance_achieved),
    })
}

fn certificate_json(c: &DualCertificate) -> Value {
    json!({
        "alpha": format_rational(&c.alpha),
        "delta": format_rational(&c.delta),
        "lower_bound": format_rational(&c.lower_bound),
        "objective": format_rational(&c.objective),
        "iterations": c.iterations,
        "lambda_max": c.lambda_max,
        "lambda_min": c.lambda_min,
        "norm": c.norm,
        "tolerance": c.tolerance,
        "accepted": c.accepted(),
        "issues": c.issues,
        "y": c.y.iter().map(format_rational).collect::<Vec<_>>(),
        "sets": c.sets.iter().map(|(s, z)| json!({ "set": s, "z": format_rational(z) })).collect::<Vec<_>>(),
        "lambda": c.lambda.iter().map(|((u, v), l)| json!({ "edge": [u, v], "value": format_rational(l) })).collect::<Vec<_>>(),
        "paths": c.paths.iter().map(|p| json!({ "vertices": p.vertices, "weight": p.weight })).collect::<Vec<_>>(),
    })
}

pub fn solve_json(r: &SolveReport, epsilon: f64) -> Value {
    json!({
        "n": r.n,
        "epsilon": epsilon,
        "seed": r.seed,
        "cut_balance": format_rational(&r.cut_balance),
        "separator": separator_json(&r.separator),
        "alpha_star": opt_rational(&r.alpha_star),
        "certificate": r.certificate.as_ref().map_or(Value::Null, certificate_json),
        "brute_opt": r.brute_opt,
        "ratio_vs_brute": opt_rational(&r.ratio_vs_brute),
        "lower_bound_consistent": r.lower_bound_consistent,
        "kappa": r.kappa,
        "bypassed": r.bypassed,
        "counters": {
            "maxflow_calls": r.counters.maxflow_calls,
            "oracle_attempts": r.counters.oracle_attempts,
            "iterations": r.counters.iterations,
            "runs": r.counters.runs,
        },
        "steps": r.steps.iter().map(|s| json!({
            "alpha": format_rational(&s.alpha),
            "outcome": s.outcome,
            "iterations": s.iterations,
            "schedule_length": s.schedule_length,
            "maxflow_calls": s.maxflow_calls,
            "maxflow_bound": s.maxflow_bound,
            "separator_cost": s.separator_cost,
            "kappa": s.kappa,
            "note": s.note,
        })).collect::<Vec<_>>(),
        "telemetry": r.telemetry,
    })
}

/// Key/value lines followed by the three separator lines.
pub fn solve_text(r: &SolveReport, epsilon: f64) -> String {
    let show = |v: &Option<Rational>| v.as_ref().map_or("none".to_string(), format_rational);
    let mut s = String::new();
    let _ = writeln!(s, "n: {}", r.n);
    let _ = writeln!(s, "epsilon: {epsilon}");
    let _ = writeln!(s, "seed: {}", r.seed);
    let _ = writeln!(s, "cost: {}", r.separator.cost);
    let _ = writeln!(s, "balance_achieved: {}", format_rational(&r.separator.balance_achieved));
    let _ = writeln!(s, "cut_balance: {}", format_rational(&r.cut_balance));
    let _ = writeln!(s, "alpha_star: {}", show(&r.alpha_star));
    match &r.certificate {
        Some(c) => {
            let _ = writeln!(
                s,
                "lower_bound: {} (alpha {}, {} iterations, lambda_max {:.3e}, norm {:.3e})",
                format_rational(&c.lower_bound),
                format_rational(&c.alpha),
                c.iterations,
                c.lambda_max,
                c.norm
            );
        }
        None => s.push_str("lower_bound: none\n"),
    }
    let _ = writeln!(s, "brute_opt: {}", r.brute_opt.map_or("none".into(), |v| v.to_string()));
    let _ = writeln!(s, "ratio_vs_brute: {}", show(&r.ratio_vs_brute));
    let _ = writeln!(s, "lower_bound_consistent: {}", r.lower_bound_consistent.map_or("none".into(), |v| v.to_string()));
    let _ = writeln!(s, "kappa: {}", r.kappa.map_or("none".into(), |k| format!("{k:.4}")));
    let _ = writeln!(s, "bypassed: {}", r.bypassed);
    let _ = writeln!(s, "maxflow_calls: {}", r.counters.maxflow_calls);
    let _ = writeln!(s, "oracle_attempts: {}", r.counters.oracle_attempts);
    let _ = writeln!(s, "iterations: {}", r.counters.iterations);
    let _ = writeln!(s, "runs: {}", r.counters.runs);
    for (i, st) in r.steps.iter().enumerate() {
        let _ = writeln!(
            s,
            "step {}: alpha {} {} iterations {}/{} maxflow {}/{} cost {} kappa {:.4}{}",
            i + 1,
            format_rational(&st.alpha),
            st.outcome,
            st.iterations,
            st.schedule_length,
            st.maxflow_calls,
            st.maxflow_bound,
            st.separator_cost.map_or("-".into(), |c| c.to_string()),
            st.kappa,
            if st.note.is_empty() { String::new() } else { format!(" ({})", st.note) }
        );
    }
    s.push_str(&r.separator.render());
    s
}

pub fn flow_json(r: &FlowResult) -> Value {
    json!({
        "value": r.value,
        "source_side": r.source_side(),
        "sink_side": r.sink_side_nodes(),
        "flow": r.flow,
        "paths": r.paths.iter().map(|p| json!({ "amount": p.amount, "nodes": p.nodes, "arcs": p.arcs })).collect::<Vec<_>>(),
    })
}

pub fn flow_text(r: &FlowResult) -> String {
    let mut s = String::new();
    let _ = writeln!(s, "value: {}", r.value);
    let _ = writeln!(s, "source_side: {}", ids(&r.source_side()));
    let _ = writeln!(s, "sink_side: {}", ids(&r.sink_side_nodes()));
    for (i, p) in r.paths.iter().enumerate() {
        let _ = writeln!(s, "path {}: amount {} nodes {}", i + 1, p.amount, ids(&p.nodes));
    }
    s
}

pub fn sweep_json(rows: &[SweepRow]) -> Value {
    Value::Array(
        rows.iter()
            .map(|r| {
                json!({
                    "epsilon": r.epsilon,
                    "cost": r.cost,
                    "maxflow_calls": r.maxflow_calls,
                    "seconds": r.seconds,
                    "kappa": r.kappa,
                })
            })
            .collect(),
    )
}

pub fn sweep_text(rows: &[SweepRow]) -> String {
    let mut s = String::from("epsilon cost maxflow_calls seconds kappa\n");
    for r in rows {
        let _ = writeln!(s, "{:.4} {} {} {:.4} {:.4}", r.epsilon, r.cost, r.maxflow_calls, r.seconds, r.kappa);
    }
    s
}
