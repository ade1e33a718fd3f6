//! Simple undirected graphs on `0..n`, plus the handful of structural
//! operations the rest of the crate is built on.
//!
//! The representation is a sorted adjacency list per vertex. It is immutable
//! after construction: every operation that "changes" a graph returns a new
//! one, which keeps attack/certificate bookkeeping honest (the original
//! instance is always around to re-verify claims against).

mod density;
mod io;

pub use density::{density_rho, DensityMode, DensityReport, EXACT_TAU_CAP};
pub use io::{read_edge_list, read_edge_list_str, write_edge_list, write_edge_list_string};

use crate::error::{Error, Result};

/// A simple undirected graph on vertices `0..n`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Graph {
    adj: Vec<Vec<u32>>,
    m: usize,
}

impl Graph {
    /// Builds a graph with `n` vertices and no edges.
    pub fn empty(n: usize) -> Self {
        Graph {
            adj: vec![Vec::new(); n],
            m: 0,
        }
    }

    /// Builds a graph from an edge list.
    ///
    /// Edges may be given in either orientation but must be loop-free and
    /// free of duplicates.
    pub fn from_edges(n: usize, edges: &[(u32, u32)]) -> Result<Self> {
        let mut adj: Vec<Vec<u32>> = vec![Vec::new(); n];
        for &(u, v) in edges {
            let (u, v) = (u as usize, v as usize);
            if u >= n {
                return Err(Error::VertexOutOfRange { vertex: u, n });
            }
            if v >= n {
                return Err(Error::VertexOutOfRange { vertex: v, n });
            }
            if u == v {
                return Err(Error::SelfLoop(u));
            }
            adj[u].push(v as u32);
            adj[v].push(u as u32);
        }
        for (u, list) in adj.iter_mut().enumerate() {
            list.sort_unstable();
            if list.windows(2).any(|w| w[0] == w[1]) {
                let v = list.windows(2).find(|w| w[0] == w[1]).expect("just seen")[0];
                return Err(Error::DuplicateEdge(u.min(v as usize), u.max(v as usize)));
            }
        }
        Ok(Graph {
            adj,
            m: edges.len(),
        })
    }

    /// Builds the complete graph on `n` vertices.
    pub fn complete(n: usize) -> Self {
        let adj = (0..n)
            .map(|u| (0..n as u32).filter(|&v| v != u as u32).collect())
            .collect();
        Graph {
            adj,
            m: n * n.saturating_sub(1) / 2,
        }
    }

    /// Builds the cycle `0 - 1 - ... - (n-1) - 0`. Requires `n >= 3`.
    pub fn cycle(n: usize) -> Result<Self> {
        if n < 3 {
            return Err(Error::InvalidParameter(format!(
                "cycle needs n >= 3, got {n}"
            )));
        }
        let edges: Vec<(u32, u32)> = (0..n as u32).map(|u| (u, (u + 1) % n as u32)).collect();
        Graph::from_edges(n, &edges)
    }

    /// Number of vertices.
    pub fn n(&self) -> usize {
        self.adj.len()
    }

    /// Number of edges.
    pub fn m(&self) -> usize {
        self.m
    }

    /// Degree of `v`.
    pub fn degree(&self, v: u32) -> usize {
        self.adj[v as usize].len()
    }

    /// Sorted neighbors of `v`.
    pub fn neighbors(&self, v: u32) -> &[u32] {
        &self.adj[v as usize]
    }

    /// Whether `{u, v}` is an edge.
    pub fn has_edge(&self, u: u32, v: u32) -> bool {
        let list = &self.adj[u as usize];
        list.binary_search(&v).is_ok()
    }

    /// Minimum degree; 0 for the empty vertex set.
    pub fn min_degree(&self) -> usize {
        self.adj.iter().map(Vec::len).min().unwrap_or(0)
    }

    /// Maximum degree; 0 for the empty vertex set.
    pub fn max_degree(&self) -> usize {
        self.adj.iter().map(Vec::len).max().unwrap_or(0)
    }

    /// Returns `Some(d)` when every vertex has degree `d`.
    pub fn regular_degree(&self) -> Option<usize> {
        let d = self.adj.first().map(Vec::len)?;
        self.adj.iter().all(|a| a.len() == d).then_some(d)
    }

    /// Iterates over edges as `(u, v)` with `u < v`, ascending.
    pub fn edges(&self) -> impl Iterator<Item = (u32, u32)> + '_ {
        self.adj.iter().enumerate().flat_map(|(u, list)| {
            let u = u as u32;
            list.iter()
                .copied()
                .skip_while(move |&v| v < u)
                .map(move |v| (u, v))
        })
    }

    /// The degree sequence in vertex order (not sorted).
    pub fn degrees(&self) -> Vec<usize> {
        self.adj.iter().map(Vec::len).collect()
    }

    /// Connected components as sorted vertex lists, ordered by minimum vertex.
    pub fn components(&self) -> Vec<Vec<u32>> {
        let n = self.n();
        let mut seen = vec![false; n];
        let mut out = Vec::new();
        let mut queue = Vec::new();
        for start in 0..n {
            if seen[start] {
                continue;
            }
            seen[start] = true;
            queue.push(start as u32);
            let mut comp = Vec::new();
            while let Some(v) = queue.pop() {
                comp.push(v);
                for &w in self.neighbors(v) {
                    if !seen[w as usize] {
                        seen[w as usize] = true;
                        queue.push(w);
                    }
                }
            }
            comp.sort_unstable();
            out.push(comp);
        }
        out
    }

    /// Whether the graph is connected (vacuously true for n <= 1).
    pub fn is_connected(&self) -> bool {
        self.n() <= 1 || self.components().len() == 1
    }

    /// Number of edges inside the vertex set `set`.
    ///
    /// `set` may be in any order; duplicates are a caller bug and will
    /// inflate the count.
    pub fn edges_within(&self, set: &[u32]) -> usize {
        let mut mark = vec![false; self.n()];
        for &v in set {
            mark[v as usize] = true;
        }
        let mut count = 0;
        for &v in set {
            count += self
                .neighbors(v)
                .iter()
                .filter(|&&w| w > v && mark[w as usize])
                .count();
        }
        count
    }

    /// Number of edges with one endpoint in `a` and the other in `b`.
    ///
    /// The sets must be disjoint.
    pub fn edges_between(&self, a: &[u32], b: &[u32]) -> usize {
        let mut in_b = vec![false; self.n()];
        for &v in b {
            in_b[v as usize] = true;
        }
        a.iter()
            .map(|&v| self.neighbors(v).iter().filter(|&&w| in_b[w as usize]).count())
            .sum()
    }

    /// Distinct neighbors of `set` outside `set`.
    pub fn neighborhood(&self, set: &[u32]) -> Vec<u32> {
        let mut in_set = vec![false; self.n()];
        for &v in set {
            in_set[v as usize] = true;
        }
        let mut out_mark = vec![false; self.n()];
        let mut out = Vec::new();
        for &v in set {
            for &w in self.neighbors(v) {
                if !in_set[w as usize] && !out_mark[w as usize] {
                    out_mark[w as usize] = true;
                    out.push(w);
                }
            }
        }
        out.sort_unstable();
        out
    }

    /// The spanning subgraph keeping only edges that cross `partition`.
    pub fn induced_bipartite(&self, partition: &Partition) -> Result<Graph> {
        if partition.len() != self.n() {
            return Err(Error::SizeMismatch(partition.len(), self.n()));
        }
        let edges: Vec<(u32, u32)> = self
            .edges()
            .filter(|&(u, v)| partition.side(u) != partition.side(v))
            .collect();
        Graph::from_edges(self.n(), &edges)
    }

    /// Removes the edges of `h` from `self`.
    ///
    /// `h` must be a spanning subgraph: same vertex count, every edge of `h`
    /// present in `self`. The result keeps all vertices.
    pub fn remove_subgraph(&self, h: &Graph) -> Result<Graph> {
        if h.n() != self.n() {
            return Err(Error::SizeMismatch(h.n(), self.n()));
        }
        for (u, v) in h.edges() {
            if !self.has_edge(u, v) {
                return Err(Error::NotSubgraph(u as usize, v as usize));
            }
        }
        let edges: Vec<(u32, u32)> = self.edges().filter(|&(u, v)| !h.has_edge(u, v)).collect();
        Graph::from_edges(self.n(), &edges)
    }

    /// Adds one edge, returning a new graph. Errors if the edge exists.
    pub fn with_edge(&self, u: u32, v: u32) -> Result<Graph> {
        if u as usize >= self.n() || v as usize >= self.n() {
            return Err(Error::VertexOutOfRange {
                vertex: u.max(v) as usize,
                n: self.n(),
            });
        }
        if u == v {
            return Err(Error::SelfLoop(u as usize));
        }
        if self.has_edge(u, v) {
            return Err(Error::DuplicateEdge(
                u.min(v) as usize,
                u.max(v) as usize,
            ));
        }
        let mut adj = self.adj.clone();
        let iu = adj[u as usize].binary_search(&v).unwrap_err();
        adj[u as usize].insert(iu, v);
        let iv = adj[v as usize].binary_search(&u).unwrap_err();
        adj[v as usize].insert(iv, u);
        Ok(Graph {
            adj,
            m: self.m + 1,
        })
    }

    /// Union of two edge-disjoint graphs on the same vertex set.
    pub fn union_disjoint(&self, other: &Graph) -> Result<Graph> {
        if other.n() != self.n() {
            return Err(Error::SizeMismatch(other.n(), self.n()));
        }
        let mut edges: Vec<(u32, u32)> = self.edges().collect();
        edges.extend(other.edges());
        // from_edges rejects duplicates, which is exactly the disjointness check.
        Graph::from_edges(self.n(), &edges)
    }

    /// The complement graph.
    pub fn complement(&self) -> Graph {
        let n = self.n();
        let adj: Vec<Vec<u32>> = (0..n)
            .map(|u| {
                let mut row = Vec::with_capacity(n - 1 - self.adj[u].len());
                let mut it = self.adj[u].iter().copied().peekable();
                for v in 0..n as u32 {
                    if v == u as u32 {
                        continue;
                    }
                    if it.peek() == Some(&v) {
                        it.next();
                    } else {
                        row.push(v);
                    }
                }
                row
            })
            .collect();
        let m = n * n.saturating_sub(1) / 2 - self.m;
        Graph { adj, m }
    }

    /// The subgraph induced on `set` (vertices are relabeled `0..set.len()`
    /// in the order given). Returns the relabeled graph.
    pub fn induced_subgraph(&self, set: &[u32]) -> Result<Graph> {
        let mut index = vec![u32::MAX; self.n()];
        for (i, &v) in set.iter().enumerate() {
            if v as usize >= self.n() {
                return Err(Error::VertexOutOfRange {
                    vertex: v as usize,
                    n: self.n(),
                });
            }
            index[v as usize] = i as u32;
        }
        let mut edges = Vec::new();
        for &v in set {
            for &w in self.neighbors(v) {
                if w > v && index[w as usize] != u32::MAX {
                    edges.push((index[v as usize], index[w as usize]));
                }
            }
        }
        Graph::from_edges(set.len(), &edges)
    }
}

/// A two-coloring of the vertex set; `false` is side one, `true` side two.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Partition {
    side: Vec<bool>,
}

impl Partition {
    /// Builds a partition from per-vertex side flags.
    pub fn new(side: Vec<bool>) -> Self {
        Partition { side }
    }

    /// Number of vertices covered.
    pub fn len(&self) -> usize {
        self.side.len()
    }

    /// True when the partition covers no vertices.
    pub fn is_empty(&self) -> bool {
        self.side.is_empty()
    }

    /// Which side `v` is on.
    pub fn side(&self, v: u32) -> bool {
        self.side[v as usize]
    }

    /// Vertices on side one.
    pub fn side_one(&self) -> Vec<u32> {
        (0..self.side.len() as u32)
            .filter(|&v| !self.side[v as usize])
            .collect()
    }

    /// Vertices on side two.
    pub fn side_two(&self) -> Vec<u32> {
        (0..self.side.len() as u32)
            .filter(|&v| self.side[v as usize])
            .collect()
    }

    /// True when neither side is empty.
    pub fn is_proper(&self) -> bool {
        self.side.iter().any(|&s| s) && self.side.iter().any(|&s| !s)
    }

    /// True when the sides differ in size by at most one.
    pub fn is_balanced(&self) -> bool {
        let two = self.side.iter().filter(|&&s| s).count();
        let one = self.side.len() - two;
        one.abs_diff(two) <= 1
    }

    /// Flips the side of one vertex.
    pub fn flip(&mut self, v: u32) {
        let s = &mut self.side[v as usize];
        *s = !*s;
    }
}
