use std::collections::VecDeque;

use super::FlowNetwork;

/// A max-flow routine returning per-arc flow for [`FlowNetwork::arcs`].
///
/// The flow must be feasible and maximum; it may contain cycles.
pub trait MaxFlowSolver: Sync {
    fn solve(&self, net: &FlowNetwork) -> Vec<i64>;
}

/// Dinic's blocking-flow algorithm over paired residual arcs.
#[derive(Debug, Default, Clone, Copy)]
pub struct Dinic;

struct Residual {
    head: Vec<usize>,
    to: Vec<usize>,
    cap: Vec<i64>,
    next: Vec<usize>,
}

const NIL: usize = usize::MAX;

impl Residual {
    fn new(net: &FlowNetwork) -> Self {
        let m = net.arcs().len();
        let mut r = Self {
            head: vec![NIL; net.nodes()],
            to: Vec::with_capacity(2 * m),
            cap: Vec::with_capacity(2 * m),
            next: Vec::with_capacity(2 * m),
        };
        for a in net.arcs() {
            r.push(a.from, a.to, a.cap);
            r.push(a.to, a.from, 0);
        }
        r
    }

    fn push(&mut self, from: usize, to: usize, cap: i64) {
        self.to.push(to);
        self.cap.push(cap);
        self.next.push(self.head[from]);
        self.head[from] = self.to.len() - 1;
    }

    fn levels(&self, s: usize, t: usize) -> Option<Vec<u32>> {
        let mut level = vec![u32::MAX; self.head.len()];
        level[s] = 0;
        let mut queue = VecDeque::from([s]);
        while let Some(v) = queue.pop_front() {
            let mut e = self.head[v];
            while e != NIL {
                let u = self.to[e];
                if self.cap[e] > 0 && level[u] == u32::MAX {
                    level[u] = level[v] + 1;
                    queue.push_back(u);
                }
                e = self.next[e];
            }
        }
        (level[t] != u32::MAX).then_some(level)
    }

    fn augment(&mut self, v: usize, t: usize, pushed: i64, level: &[u32], iter: &mut [usize]) -> i64 {
        if v == t {
            return pushed;
        }
        while iter[v] != NIL {
            let e = iter[v];
            let u = self.to[e];
            if self.cap[e] > 0 && level[u] == level[v] + 1 {
                let got = self.augment(u, t, pushed.min(self.cap[e]), level, iter);
                if got > 0 {
                    self.cap[e] -= got;
                    self.cap[e ^ 1] += got;
                    return got;
                }
            }
            iter[v] = self.next[e];
        }
        0
    }
}

impl MaxFlowSolver for Dinic {
    fn solve(&self, net: &FlowNetwork) -> Vec<i64> {
        let mut r = Residual::new(net);
        let (s, t) = (net.source(), net.sink());
        while let Some(level) = r.levels(s, t) {
            let mut iter = r.head.clone();
            loop {
                let got = r.augment(s, t, i64::MAX, &level, &mut iter);
                if got == 0 {
                    break;
                }
            }
        }
        net.arcs().iter().enumerate().map(|(i, a)| a.cap - r.cap[2 * i]).collect()
    }
}
