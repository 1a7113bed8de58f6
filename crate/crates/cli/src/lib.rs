//! `vsep` command-line front end.
//!
//! Exit codes: `0` success, `1` a checked separator is invalid, `2` usage
//! error, `3` input error, `4` internal certification failure.

mod report;

use std::ffi::OsString;
use std::fs;
use std::io::{Read, Write};
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use vsep_core::graph::with_random_weights;
use vsep_core::maxflow::parse_flow_network;
use vsep_core::rational::{format_rational, parse_rational};
use vsep_core::{
    binary_search_solve, brute_force_opt, epsilon_sweep, generate, max_flow, parse_graph, render_graph,
    validate_separator, Dinic, GeneratorKind, Rational, SeparatorSolution, SolverConfig, SolverError, WeightedGraph,
};

pub const EXIT_INVALID: i32 = 1;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_INPUT: i32 = 3;
pub const EXIT_INTERNAL: i32 = 4;

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error("{0}")]
    Input(String),
    #[error("{0}")]
    Internal(String),
    #[error("invalid separator: {0}")]
    Invalid(String),
}

impl CliError {
    pub fn code(&self) -> i32 {
        match self {
            CliError::Invalid(_) => EXIT_INVALID,
            CliError::Usage(_) => EXIT_USAGE,
            CliError::Input(_) => EXIT_INPUT,
            CliError::Internal(_) => EXIT_INTERNAL,
        }
    }
}

impl From<SolverError> for CliError {
    fn from(e: SolverError) -> Self {
        if e.is_internal() {
            CliError::Internal(e.to_string())
        } else {
            CliError::Input(e.to_string())
        }
    }
}

#[derive(Debug, Parser)]
#[command(name = "vsep", version, about = "Balanced vertex separators with certified lower bounds")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Write a generated instance in the graph text format.
    Gen(GenArgs),
    /// Search for a small balanced separator and a matching lower bound.
    Solve(SolveArgs),
    /// Check a separator against a graph.
    Validate(ValidateArgs),
    /// Exhaustive optimum for small instances.
    Brute(BruteArgs),
    /// Max flow, minimum cut and path decomposition of a flow network.
    Flow(FlowArgs),
    /// Sweep ε and report cost, max-flow calls and wall time per value.
    Bench(BenchArgs),
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum Family {
    Path,
    Star,
    Grid,
    Gnp,
    Blobs,
    Complete,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Structured,
}

#[derive(Debug, Args)]
struct GenArgs {
    #[arg(value_enum)]
    family: Family,
    /// `path N`, `star LEAVES`, `grid ROWS COLS`, `gnp N`, `blobs LEFT RIGHT BRIDGE`, `complete N`.
    dims: Vec<usize>,
    /// Edge probability for `gnp`.
    #[arg(long, default_value_t = 0.3)]
    p: f64,
    /// Draw vertex weights uniformly from `1..=MAX`.
    #[arg(long, value_name = "MAX")]
    max_weight: Option<u64>,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(short, long)]
    output: Option<PathBuf>,
}

#[derive(Debug, Args)]
struct Io {
    /// Input file; standard input when absent or `-`.
    input: Option<PathBuf>,
    #[arg(short, long)]
    output: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = Format::Text)]
    format: Format,
}

#[derive(Debug, Args)]
struct SolveArgs {
    #[command(flatten)]
    io: Io,
    /// Balance `c ∈ (0, 1/2)`, as a decimal or `p/q`.
    #[arg(long = "c", visible_alias = "balance", default_value = "1/3", value_parser = parse_balance)]
    c: Rational,
    /// Trade-off exponent, clamped to `[1/(4 ln n), 1]`.
    #[arg(long, default_value_t = 0.5)]
    epsilon: f64,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Balance guaranteed for returned cuts; `c/8` when absent.
    #[arg(long, value_parser = parse_balance)]
    cut_balance: Option<Rational>,
    /// Largest `n` compared against (or solved by) exhaustive search.
    #[arg(long, default_value_t = 14)]
    brute_cap: usize,
    /// Return the exhaustive optimum directly when `n ≤ brute-cap`.
    #[arg(long)]
    brute_bypass: bool,
    /// Skip the exhaustive comparison.
    #[arg(long)]
    no_brute: bool,
    /// Parallel oracle replicas; `min(64, ceil(n^ε ln n))` when absent.
    #[arg(long)]
    replicas: Option<usize>,
    #[arg(long, default_value_t = 10_000)]
    iteration_cap: usize,
    /// Per-attempt oracle telemetry.
    #[arg(long)]
    telemetry: bool,
    /// Embedding coordinates at every iteration.
    #[arg(long)]
    dump_embedding: bool,
}

#[derive(Debug, Args)]
struct ValidateArgs {
    graph: PathBuf,
    /// Separator in the `A:` / `B:` / `C:` form or a structured report;
    /// standard input when absent.
    #[arg(long)]
    separator: Option<PathBuf>,
    /// Required balance; the report's `cut_balance`, else 1/3, when absent.
    #[arg(long = "c", visible_alias = "balance", value_parser = parse_balance)]
    c: Option<Rational>,
}

#[derive(Debug, Args)]
struct BruteArgs {
    #[command(flatten)]
    io: Io,
    #[arg(long = "c", visible_alias = "balance", default_value = "1/3", value_parser = parse_balance)]
    c: Rational,
    /// Largest instance enumerated.
    #[arg(long, default_value_t = 18)]
    cap: usize,
}

#[derive(Debug, Args)]
struct FlowArgs {
    #[command(flatten)]
    io: Io,
}

#[derive(Debug, Args)]
struct BenchArgs {
    #[command(flatten)]
    io: Io,
    #[arg(long = "c", visible_alias = "balance", default_value = "1/3", value_parser = parse_balance)]
    c: Rational,
    #[arg(long, value_delimiter = ',', default_value = "1,0.75,0.5,0.35,0.25")]
    epsilons: Vec<f64>,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long)]
    replicas: Option<usize>,
    #[arg(long, default_value_t = 10_000)]
    iteration_cap: usize,
}

fn parse_balance(s: &str) -> Result<Rational, String> {
    let c = parse_rational(s).map_err(|e| e.to_string())?;
    if c <= Rational::from_integer(0) || c >= Rational::new(1, 2) {
        return Err(format!("balance {} outside (0, 1/2)", format_rational(&c)));
    }
    Ok(c)
}

/// Parses `args` (including the program name), runs the subcommand and
/// returns the exit code.
pub fn run<I, T>(args: I, stdin: &mut dyn Read, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let text = e.render().to_string();
            if e.use_stderr() {
                let _ = write!(err, "{text}");
                return EXIT_USAGE;
            }
            let _ = write!(out, "{text}");
            return 0;
        }
    };
    match dispatch(cli.command, stdin, out, err) {
        Ok(()) => 0,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            e.code()
        }
    }
}

fn dispatch(command: Command, stdin: &mut dyn Read, out: &mut dyn Write, err: &mut dyn Write) -> Result<(), CliError> {
    match command {
        Command::Gen(a) => gen(a, out),
        Command::Solve(a) => solve(a, stdin, out, err),
        Command::Validate(a) => validate(a, stdin, out),
        Command::Brute(a) => brute(a, stdin, out),
        Command::Flow(a) => flow(a, stdin, out),
        Command::Bench(a) => bench(a, stdin, out, err),
    }
}

fn read_source(path: Option<&Path>, stdin: &mut dyn Read) -> Result<String, CliError> {
    match path {
        Some(p) if p != Path::new("-") => {
            fs::read_to_string(p).map_err(|e| CliError::Input(format!("{}: {e}", p.display())))
        }
        _ => {
            let mut s = String::new();
            stdin.read_to_string(&mut s).map_err(|e| CliError::Input(format!("stdin: {e}")))?;
            Ok(s)
        }
    }
}

fn load_graph(path: Option<&Path>, stdin: &mut dyn Read) -> Result<WeightedGraph, CliError> {
    parse_graph(&read_source(path, stdin)?).map_err(|e| CliError::Input(e.to_string()))
}

fn emit(output: Option<&Path>, out: &mut dyn Write, text: &str) -> Result<(), CliError> {
    match output {
        Some(p) => fs::write(p, text).map_err(|e| CliError::Input(format!("{}: {e}", p.display()))),
        None => out.write_all(text.as_bytes()).map_err(|e| CliError::Internal(format!("stdout: {e}"))),
    }
}

/// Clamps `ε` into `[1/(4 ln n), 1]`, warning when it moves.
fn clamp_epsilon(epsilon: f64, n: usize, err: &mut dyn Write) -> Result<f64, CliError> {
    if !(epsilon.is_finite() && epsilon > 0.0) {
        return Err(CliError::Usage(format!("epsilon {epsilon} must be positive")));
    }
    if n < 2 {
        return Ok(epsilon);
    }
    let low = 1.0 / (4.0 * (n as f64).ln());
    let clamped = epsilon.clamp(low.min(1.0), 1.0);
    if clamped != epsilon {
        let _ = writeln!(err, "warning: epsilon {epsilon} outside [{low:.4}, 1] for n = {n}; using {clamped:.4}");
    }
    Ok(clamped)
}

fn gen(a: GenArgs, out: &mut dyn Write) -> Result<(), CliError> {
    let dims = &a.dims;
    let want = |k: usize, shape: &str| {
        if dims.len() == k {
            Ok(())
        } else {
            Err(CliError::Usage(format!("expected `{shape}`, got {} sizes", dims.len())))
        }
    };
    let kind = match a.family {
        Family::Path => want(1, "path N").map(|_| GeneratorKind::Path { n: dims[0] })?,
        Family::Star => want(1, "star LEAVES").map(|_| GeneratorKind::Star { leaves: dims[0] })?,
        Family::Grid => want(2, "grid ROWS COLS").map(|_| GeneratorKind::Grid { rows: dims[0], cols: dims[1] })?,
        Family::Gnp => want(1, "gnp N").map(|_| GeneratorKind::Gnp { n: dims[0], p: a.p })?,
        Family::Blobs => want(3, "blobs LEFT RIGHT BRIDGE")
            .map(|_| GeneratorKind::TwoBlobs { left: dims[0], right: dims[1], bridge: dims[2] })?,
        Family::Complete => want(1, "complete N").map(|_| GeneratorKind::Complete { n: dims[0] })?,
    };
    let mut g = generate(&kind, a.seed).map_err(|e| CliError::Usage(e.to_string()))?;
    if let Some(max) = a.max_weight {
        g = with_random_weights(&g, max, a.seed).map_err(|e| CliError::Usage(e.to_string()))?;
    }
    emit(a.output.as_deref(), out, &render_graph(&g))
}

fn solve(a: SolveArgs, stdin: &mut dyn Read, out: &mut dyn Write, err: &mut dyn Write) -> Result<(), CliError> {
    let g = load_graph(a.io.input.as_deref(), stdin)?;
    let epsilon = clamp_epsilon(a.epsilon, g.n(), err)?;
    let mut cfg = SolverConfig::new(a.c, epsilon);
    cfg.oracle.cut_balance = a.cut_balance;
    cfg.replicas = a.replicas;
    cfg.iteration_cap = a.iteration_cap;
    cfg.brute_cap = a.brute_cap;
    cfg.brute_bypass = a.brute_bypass;
    cfg.compare_brute = !a.no_brute;
    cfg.telemetry = a.telemetry;
    cfg.dump_embedding = a.dump_embedding;
    let r = binary_search_solve(&g, &cfg, a.seed, &Dinic)?;
    let text = match a.io.format {
        Format::Text => {
            for line in &r.telemetry {
                let _ = writeln!(err, "{line}");
            }
            report::solve_text(&r, epsilon)
        }
        Format::Structured => report::pretty(&report::solve_json(&r, epsilon)),
    };
    emit(a.io.output.as_deref(), out, &text)
}

/// Separator plus any recorded cost and balance found next to it.
fn parse_separator(g: &WeightedGraph, text: &str) -> Result<(SeparatorSolution, Option<Rational>), CliError> {
    let bad = |m: String| CliError::Input(format!("separator: {m}"));
    if text.trim_start().starts_with('{') {
        let v: serde_json::Value = serde_json::from_str(text).map_err(|e| bad(e.to_string()))?;
        let sep = v.get("separator").unwrap_or(&v);
        let side = |k: &str| -> Result<Vec<usize>, CliError> {
            sep.get(k)
                .and_then(|s| s.as_array())
                .ok_or_else(|| bad(format!("missing `{k}`")))?
                .iter()
                .map(|x| x.as_u64().map(|x| x as usize).ok_or_else(|| bad(format!("non-integer id in `{k}`"))))
                .collect()
        };
        let mut s = SeparatorSolution::new(g, side("a")?, side("b")?, side("c")?);
        if let Some(cost) = sep.get("cost").and_then(|c| c.as_u64()) {
            s.cost = cost;
        }
        let balance = match v.get("cut_balance").and_then(|c| c.as_str()) {
            Some(c) => Some(parse_rational(c).map_err(|e| bad(e.to_string()))?),
            None => None,
        };
        return Ok((s, balance));
    }
    let mut s = SeparatorSolution::parse(g, text).map_err(bad)?;
    let mut balance = None;
    for line in text.lines() {
        if let Some(v) = line.strip_prefix("cost:") {
            s.cost = v.trim().parse().map_err(|_| bad(format!("bad cost `{}`", v.trim())))?;
        } else if let Some(v) = line.strip_prefix("cut_balance:") {
            balance = Some(parse_rational(v).map_err(|e| bad(e.to_string()))?);
        }
    }
    Ok((s, balance))
}

fn validate(a: ValidateArgs, stdin: &mut dyn Read, out: &mut dyn Write) -> Result<(), CliError> {
    let g = parse_graph(&read_source(Some(&a.graph), stdin)?).map_err(|e| CliError::Input(e.to_string()))?;
    let (s, recorded) = parse_separator(&g, &read_source(a.separator.as_deref(), stdin)?)?;
    let c = a.c.or(recorded).unwrap_or(Rational::new(1, 3));
    match validate_separator(&g, &s, &c) {
        Ok(()) => emit(
            None,
            out,
            &format!(
                "valid: cost {} balance {} required {}\n",
                s.cost,
                format_rational(&s.balance_achieved),
                format_rational(&c)
            ),
        ),
        Err(v) => {
            emit(None, out, &format!("invalid: {v}\n"))?;
            Err(CliError::Invalid(v.to_string()))
        }
    }
}

fn brute(a: BruteArgs, stdin: &mut dyn Read, out: &mut dyn Write) -> Result<(), CliError> {
    let g = load_graph(a.io.input.as_deref(), stdin)?;
    let (opt, s) = brute_force_opt(&g, &a.c, a.cap).map_err(|e| CliError::Input(e.to_string()))?;
    let text = match a.io.format {
        Format::Text => format!("opt {opt}\n{}", s.render()),
        Format::Structured => report::pretty(&serde_json::json!({
            "opt": opt,
            "balance": format_rational(&a.c),
            "separator": report::separator_json(&s),
        })),
    };
    emit(a.io.output.as_deref(), out, &text)
}

fn flow(a: FlowArgs, stdin: &mut dyn Read, out: &mut dyn Write) -> Result<(), CliError> {
    let net = parse_flow_network(&read_source(a.io.input.as_deref(), stdin)?).map_err(|e| CliError::Input(e.to_string()))?;
    let r = max_flow(&net);
    let text = match a.io.format {
        Format::Text => report::flow_text(&r),
        Format::Structured => report::pretty(&report::flow_json(&r)),
    };
    emit(a.io.output.as_deref(), out, &text)
}

fn bench(a: BenchArgs, stdin: &mut dyn Read, out: &mut dyn Write, err: &mut dyn Write) -> Result<(), CliError> {
    let g = load_graph(a.io.input.as_deref(), stdin)?;
    if a.epsilons.is_empty() {
        return Err(CliError::Usage("no epsilon values".into()));
    }
    let epsilons =
        a.epsilons.iter().map(|&e| clamp_epsilon(e, g.n(), err)).collect::<Result<Vec<_>, _>>()?;
    let mut cfg = SolverConfig::new(a.c, epsilons[0]);
    cfg.replicas = a.replicas;
    cfg.iteration_cap = a.iteration_cap;
    cfg.compare_brute = false;
    let rows = epsilon_sweep(&g, &cfg, &epsilons, a.seed, &Dinic)?;
    let text = match a.io.format {
        Format::Text => report::sweep_text(&rows),
        Format::Structured => report::pretty(&report::sweep_json(&rows)),
    };
    emit(a.io.output.as_deref(), out, &text)
}
