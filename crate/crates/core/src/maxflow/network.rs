use super::FlowError;
use crate::graph::WeightedGraph;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Arc {
    pub from: usize,
    pub to: usize,
    pub cap: i64,
}

/// Node layout of the split network: `x` is node `x`, `x̄` is node `n + x`,
/// the source is `2n` and the sink `2n + 1`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SplitLayout {
    pub n: usize,
    /// Arc `(x, x̄)` for every vertex.
    pub vertex_arc: Vec<usize>,
    /// Arcs `(x̄, y)` and `(ȳ, x)` for every graph edge `{x, y}`, in edge order.
    pub edge_arcs: Vec<(usize, usize)>,
    /// All capacities are the real ones times `2 * beta_den`.
    pub scale: i64,
}

impl SplitLayout {
    pub fn vertex(&self, x: usize) -> usize {
        x
    }

    pub fn bar(&self, x: usize) -> usize {
        self.n + x
    }

    pub fn source(&self) -> usize {
        2 * self.n
    }

    pub fn sink(&self) -> usize {
        2 * self.n + 1
    }
}

/// Directed network with non-negative integer capacities.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FlowNetwork {
    nodes: usize,
    source: usize,
    sink: usize,
    arcs: Vec<Arc>,
    layout: Option<SplitLayout>,
}

impl FlowNetwork {
    pub fn new(nodes: usize, source: usize, sink: usize) -> Result<Self, FlowError> {
        if source >= nodes || sink >= nodes || source == sink {
            return Err(FlowError::Invalid(format!("source {source}, sink {sink} with {nodes} nodes")));
        }
        Ok(Self { nodes, source, sink, arcs: Vec::new(), layout: None })
    }

    pub fn add_arc(&mut self, from: usize, to: usize, cap: i64) -> Result<usize, FlowError> {
        if from >= self.nodes || to >= self.nodes || from == to {
            return Err(FlowError::Invalid(format!("arc ({from}, {to})")));
        }
        if cap < 0 {
            return Err(FlowError::Invalid(format!("negative capacity on ({from}, {to})")));
        }
        self.arcs.push(Arc { from, to, cap });
        Ok(self.arcs.len() - 1)
    }

    pub fn nodes(&self) -> usize {
        self.nodes
    }

    pub fn source(&self) -> usize {
        self.source
    }

    pub fn sink(&self) -> usize {
        self.sink
    }

    pub fn arcs(&self) -> &[Arc] {
        &self.arcs
    }

    pub fn layout(&self) -> Option<&SplitLayout> {
        self.layout.as_ref()
    }

    /// Net flow out of the source.
    pub fn flow_value(&self, flow: &[i64]) -> i64 {
        self.arcs
            .iter()
            .zip(flow)
            .map(|(a, &f)| match (a.from == self.source, a.to == self.source) {
                (true, _) => f,
                (_, true) => -f,
                _ => 0,
            })
            .sum()
    }

    /// Returns a copy with every capacity multiplied by `k`.
    pub fn scaled(&self, k: i64) -> Result<Self, FlowError> {
        let mut out = self.clone();
        for a in &mut out.arcs {
            a.cap = a.cap.checked_mul(k).ok_or(FlowError::Overflow)?;
        }
        Ok(out)
    }
}

/// Builds the split network for `(A, B)` with `β = beta_num / beta_den`.
///
/// Capacities are multiplied by `2 * beta_den`: `(x, x̄)` carries
/// `w(x) * beta_den`, `(s, x)` and `(ȳ, t)` carry `2 * beta_num`, and the
/// edge arcs carry `1 +` the sum of all finite capacities.
pub fn build_split_network(
    g: &WeightedGraph,
    a: &[usize],
    b: &[usize],
    beta_num: i64,
    beta_den: i64,
) -> Result<FlowNetwork, FlowError> {
    let n = g.n();
    if beta_num <= 0 || beta_den <= 0 {
        return Err(FlowError::Invalid(format!("beta = {beta_num}/{beta_den}")));
    }
    let mut in_a = vec![false; n];
    for &x in a {
        if x >= n || in_a[x] {
            return Err(FlowError::Invalid(format!("bad source-side vertex {x}")));
        }
        in_a[x] = true;
    }
    let mut in_b = vec![false; n];
    for &y in b {
        if y >= n || in_b[y] || in_a[y] {
            return Err(FlowError::Invalid(format!("bad sink-side vertex {y}")));
        }
        in_b[y] = true;
    }

    let end_cap = beta_num.checked_mul(2).ok_or(FlowError::Overflow)?;
    let mut finite_total: i64 = 0;
    let mut vertex_caps = Vec::with_capacity(n);
    for x in 0..n {
        let w = i64::try_from(g.weight(x)).map_err(|_| FlowError::Overflow)?;
        let cap = w.checked_mul(beta_den).ok_or(FlowError::Overflow)?;
        finite_total = finite_total.checked_add(cap).ok_or(FlowError::Overflow)?;
        vertex_caps.push(cap);
    }
    let ends = (a.len() + b.len()) as i64;
    finite_total = end_cap
        .checked_mul(ends)
        .and_then(|v| v.checked_add(finite_total))
        .ok_or(FlowError::Overflow)?;
    let infinite = finite_total.checked_add(1).ok_or(FlowError::Overflow)?;

    let mut net = FlowNetwork::new(2 * n + 2, 2 * n, 2 * n + 1)?;
    let mut layout = SplitLayout {
        n,
        vertex_arc: Vec::with_capacity(n),
        edge_arcs: Vec::with_capacity(g.m()),
        scale: beta_den.checked_mul(2).ok_or(FlowError::Overflow)?,
    };
    for (x, &cap) in vertex_caps.iter().enumerate() {
        layout.vertex_arc.push(net.add_arc(x, n + x, cap)?);
    }
    for &(x, y) in g.edges() {
        let xy = net.add_arc(n + x, y, infinite)?;
        let yx = net.add_arc(n + y, x, infinite)?;
        layout.edge_arcs.push((xy, yx));
    }
    for &x in a {
        net.add_arc(2 * n, x, end_cap)?;
    }
    for &y in b {
        net.add_arc(n + y, 2 * n + 1, end_cap)?;
    }
    net.layout = Some(layout);
    Ok(net)
}

/// Parses `p <nodes> <arcs>`, optional `s <node>` / `t <node>` (defaults
/// `0` and `nodes - 1`), and `a <u> <v> <cap>` records.
pub fn parse_flow_network(text: &str) -> Result<FlowNetwork, FlowError> {
    let mut header: Option<(usize, usize)> = None;
    let mut source = None;
    let mut sink = None;
    let mut arcs = Vec::new();
    for (idx, raw) in text.lines().enumerate() {
        let line = idx + 1;
        let content = raw.split('#').next().unwrap_or("").trim();
        if content.is_empty() {
            continue;
        }
        let syntax = |msg: &str| FlowError::Syntax { line, msg: msg.to_string() };
        let mut tok = content.split_whitespace();
        let tag = tok.next().unwrap_or_default();
        let nums: Vec<i64> = tok
            .map(|t| t.parse::<i64>())
            .collect::<Result<_, _>>()
            .map_err(|_| syntax("expected integers"))?;
        if nums.iter().any(|&v| v < 0) {
            return Err(syntax("negative value"));
        }
        match (tag, &nums[..]) {
            ("p", &[nodes, m]) if header.is_none() => header = Some((nodes as usize, m as usize)),
            ("s", &[v]) => source = Some(v as usize),
            ("t", &[v]) => sink = Some(v as usize),
            ("a", &[u, v, cap]) => arcs.push((u as usize, v as usize, cap, line)),
            _ => return Err(syntax(&format!("unexpected record `{content}`"))),
        }
    }
    let (nodes, m) = header.ok_or(FlowError::Syntax { line: 0, msg: "missing `p` header".into() })?;
    if arcs.len() != m {
        return Err(FlowError::Syntax { line: 0, msg: format!("header declares {m} arcs, found {}", arcs.len()) });
    }
    let mut net = FlowNetwork::new(nodes, source.unwrap_or(0), sink.unwrap_or(nodes.saturating_sub(1)))?;
    for (u, v, cap, line) in arcs {
        net.add_arc(u, v, cap).map_err(|e| FlowError::Syntax { line, msg: e.to_string() })?;
    }
    Ok(net)
}
