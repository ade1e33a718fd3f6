//! Exact edge and vertex connectivity via blocking-flow max-flow.
//!
//! Edge connectivity takes the minimum of max-flows from a fixed root to
//! every other vertex (a minimum edge cut separates the root from someone).
//! Vertex connectivity pivots on a minimum-degree vertex `v0`: a minimum
//! separator either avoids `v0` (then it separates `v0` from some
//! non-neighbor) or contains it (then it separates two non-adjacent
//! neighbors of `v0`, because every vertex of a minimum separator has a
//! neighbor in every component of the remainder). Both families of
//! terminal pairs are scanned; flows are capped at the best cut seen so
//! far, so verification-style calls exit early.

use crate::graph::Graph;

/// Dinic max-flow on a unit-ish capacity network.
struct Dinic {
    // Arcs stored in pairs: arc 2i and its reverse 2i+1.
    to: Vec<u32>,
    cap: Vec<u32>,
    head: Vec<Vec<u32>>,
    level: Vec<i32>,
    iter: Vec<usize>,
}

impl Dinic {
    fn new(n: usize) -> Self {
        Dinic {
            to: Vec::new(),
            cap: Vec::new(),
            head: vec![Vec::new(); n],
            level: vec![-1; n],
            iter: vec![0; n],
        }
    }

    fn add_arc(&mut self, u: usize, v: usize, cap: u32) {
        let id = self.to.len() as u32;
        self.to.push(v as u32);
        self.cap.push(cap);
        self.to.push(u as u32);
        self.cap.push(0);
        self.head[u].push(id);
        self.head[v].push(id + 1);
    }

    fn bfs(&mut self, s: usize, t: usize) -> bool {
        self.level.fill(-1);
        self.level[s] = 0;
        let mut queue = std::collections::VecDeque::from([s]);
        while let Some(u) = queue.pop_front() {
            for &id in &self.head[u] {
                let v = self.to[id as usize] as usize;
                if self.cap[id as usize] > 0 && self.level[v] < 0 {
                    self.level[v] = self.level[u] + 1;
                    queue.push_back(v);
                }
            }
        }
        self.level[t] >= 0
    }

    fn dfs(&mut self, u: usize, t: usize, pushed: u32) -> u32 {
        if u == t {
            return pushed;
        }
        while self.iter[u] < self.head[u].len() {
            let id = self.head[u][self.iter[u]] as usize;
            let v = self.to[id] as usize;
            if self.cap[id] > 0 && self.level[v] == self.level[u] + 1 {
                let got = self.dfs(v, t, pushed.min(self.cap[id]));
                if got > 0 {
                    self.cap[id] -= got;
                    self.cap[id ^ 1] += got;
                    return got;
                }
            }
            self.iter[u] += 1;
        }
        0
    }

    /// Max flow from `s` to `t`, stopping once `limit` is reached.
    fn max_flow(&mut self, s: usize, t: usize, limit: u32) -> u32 {
        let mut flow = 0;
        while flow < limit && self.bfs(s, t) {
            self.iter.fill(0);
            loop {
                let got = self.dfs(s, t, limit - flow);
                if got == 0 {
                    break;
                }
                flow += got;
                if flow >= limit {
                    break;
                }
            }
        }
        flow
    }
}

fn edge_network(g: &Graph) -> Dinic {
    let mut net = Dinic::new(g.n());
    for (u, v) in g.edges() {
        // An undirected edge carries one unit in either direction.
        net.add_arc(u as usize, v as usize, 1);
        net.add_arc(v as usize, u as usize, 1);
    }
    net
}

fn reset_caps(net: &mut Dinic, fresh: &[u32]) {
    net.cap.copy_from_slice(fresh);
}

/// Exact edge connectivity. Zero for graphs with fewer than two vertices.
pub fn edge_connectivity(g: &Graph) -> usize {
    edge_connectivity_capped(g, u32::MAX as usize)
}

/// True iff every edge cut has at least `t` edges.
pub fn edge_connectivity_at_least(g: &Graph, t: usize) -> bool {
    if t == 0 {
        return true;
    }
    edge_connectivity_capped(g, t) >= t
}

fn edge_connectivity_capped(g: &Graph, cap: usize) -> usize {
    let n = g.n();
    if n < 2 {
        return 0;
    }
    let mut net = edge_network(g);
    let fresh = net.cap.clone();
    // lambda <= min degree, and capping at the running best keeps every
    // flow bounded by the answer.
    let mut best = g.min_degree().min(cap);
    for v in 1..n {
        if best == 0 {
            break;
        }
        reset_caps(&mut net, &fresh);
        let f = net.max_flow(0, v, best as u32) as usize;
        best = best.min(f);
    }
    best
}

/// Network with every vertex split into in/out halves joined by a unit arc.
/// Arc ids of the split arcs are `2 * v` by construction order.
fn split_network(g: &Graph) -> Dinic {
    let n = g.n();
    let mut net = Dinic::new(2 * n);
    for v in 0..n {
        net.add_arc(v, n + v, 1); // v_in -> v_out
    }
    let big = g.n() as u32;
    for (u, v) in g.edges() {
        net.add_arc(g.n() + u as usize, v as usize, big);
        net.add_arc(g.n() + v as usize, u as usize, big);
    }
    net
}

/// Minimum number of vertices (other than `s`, `t`) whose removal separates
/// non-adjacent `s` from `t`; capped at `limit`.
fn st_vertex_cut(net: &mut Dinic, fresh: &[u32], n: usize, s: usize, t: usize, limit: usize) -> usize {
    reset_caps(net, fresh);
    // Source is s_out, sink is t_in, so the split arcs of s and t are free.
    net.max_flow(n + s, t, limit as u32) as usize
}

/// Exact vertex connectivity. `n - 1` for complete graphs, zero when
/// disconnected or on fewer than two vertices.
pub fn vertex_connectivity(g: &Graph) -> usize {
    vertex_connectivity_capped(g, g.n().saturating_sub(1))
}

/// True iff no set of fewer than `t` vertices disconnects the graph.
pub fn vertex_connectivity_at_least(g: &Graph, t: usize) -> bool {
    if t == 0 {
        return true;
    }
    if t > g.n().saturating_sub(1) {
        return false;
    }
    vertex_connectivity_capped(g, t) >= t
}

fn vertex_connectivity_capped(g: &Graph, cap: usize) -> usize {
    let n = g.n();
    if n < 2 {
        return 0;
    }
    let v0 = (0..n).min_by_key(|&v| g.degree(v as u32)).expect("nonempty");
    let nbrs: Vec<u32> = g.neighbors(v0 as u32).to_vec();
    if nbrs.len() == n - 1 && g.m() == n * (n - 1) / 2 {
        return (n - 1).min(cap);
    }
    let mut net = split_network(g);
    let fresh = net.cap.clone();
    let mut best = cap.min(nbrs.len());
    // Separators avoiding v0: flow from v0 to each non-neighbor.
    let mut closed = vec![false; n];
    closed[v0] = true;
    for &w in &nbrs {
        closed[w as usize] = true;
    }
    for u in 0..n {
        if best == 0 {
            return 0;
        }
        if !closed[u] {
            let f = st_vertex_cut(&mut net, &fresh, n, v0, u, best);
            best = best.min(f);
        }
    }
    // Separators containing v0: flow between non-adjacent neighbor pairs.
    for i in 0..nbrs.len() {
        for j in i + 1..nbrs.len() {
            if best == 0 {
                return 0;
            }
            let (x, y) = (nbrs[i], nbrs[j]);
            if !g.has_edge(x, y) {
                let f = st_vertex_cut(&mut net, &fresh, n, x as usize, y as usize, best);
                best = best.min(f);
            }
        }
    }
    best
}
