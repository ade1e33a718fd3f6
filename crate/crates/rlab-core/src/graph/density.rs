//! Local density: the largest edges-per-vertex ratio over small vertex sets.
//!
//! `rho(g, tau) = max { e(U)/|U| : U nonempty, |U| <= tau }`. A maximizing
//! set can always be taken connected (a disconnected maximizer is dominated
//! by one of its components), so the exact search enumerates connected sets
//! only. The heuristic mode peels minimum-degree vertices and scores the
//! surviving suffixes; it yields a lower bound and a genuine witness, never
//! a certificate of sparsity.

use crate::error::{Error, Result};
use crate::graph::Graph;

/// Exact search cap: exhaustive enumeration is only honored up to this size.
pub const EXACT_TAU_CAP: usize = 20;

/// How to search for dense sets.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum DensityMode {
    /// Enumerate every connected set of size at most `tau`.
    Exact,
    /// Min-degree peeling; lower bound only.
    Heuristic,
}

/// Result of a density search.
#[derive(Clone, Debug)]
pub struct DensityReport {
    /// Largest ratio found; equals `rho(g, tau)` when `exact` is set.
    pub rho: f64,
    /// A set attaining `rho`.
    pub witness: Vec<u32>,
    /// Whether the search was exhaustive.
    pub exact: bool,
}

/// Searches for the densest vertex set of size at most `tau`.
///
/// `tau` must be at least 1; exact mode additionally requires
/// `tau <= EXACT_TAU_CAP`. The graph must have at least one vertex.
pub fn density_rho(g: &Graph, tau: usize, mode: DensityMode) -> Result<DensityReport> {
    if g.n() == 0 {
        return Err(Error::InvalidParameter("density on empty vertex set".into()));
    }
    if tau == 0 {
        return Err(Error::InvalidParameter("tau must be at least 1".into()));
    }
    match mode {
        DensityMode::Exact => {
            if tau > EXACT_TAU_CAP {
                return Err(Error::ExactCapExceeded {
                    what: "density search",
                    cap: EXACT_TAU_CAP,
                    n: tau,
                });
            }
            Ok(exact_search(g, tau))
        }
        DensityMode::Heuristic => Ok(peel_search(g, tau)),
    }
}

fn exact_search(g: &Graph, tau: usize) -> DensityReport {
    let mut best_num = 0usize; // edges of best set
    let mut best_den = 1usize; // size of best set
    let mut best_set: Vec<u32> = vec![0];
    let mut in_set = vec![false; g.n()];

    // Enumerate each connected set once, rooted at its minimum vertex.
    // `ext` holds candidate extension vertices (> root, not yet decided);
    // branch order guarantees no set is visited twice.
    fn rec(
        g: &Graph,
        root: u32,
        set: &mut Vec<u32>,
        in_set: &mut [bool],
        ext: &[u32],
        edges: usize,
        tau: usize,
        best: &mut (usize, usize, Vec<u32>),
    ) {
        // Compare edges/|set| > best as cross-multiplication to stay in integers.
        if edges * best.1 > best.0 * set.len() {
            *best = (edges, set.len(), set.clone());
        }
        if set.len() == tau {
            return;
        }
        let mut ext = ext.to_vec();
        while let Some(v) = ext.pop() {
            let added_edges = g
                .neighbors(v)
                .iter()
                .filter(|&&w| in_set[w as usize])
                .count();
            set.push(v);
            in_set[v as usize] = true;
            let mut next_ext = ext.clone();
            for &w in g.neighbors(v) {
                if w > root && !in_set[w as usize] && !next_ext.contains(&w) && !ext.contains(&w) {
                    next_ext.push(w);
                }
            }
            // Vertices popped from `ext` in earlier iterations are excluded
            // from this branch by construction.
            rec(g, root, set, in_set, &next_ext, edges + added_edges, tau, best);
            in_set[v as usize] = false;
            set.pop();
        }
    }

    let mut best = (best_num, best_den, best_set);
    for root in 0..g.n() as u32 {
        let mut set = vec![root];
        in_set[root as usize] = true;
        let ext: Vec<u32> = g
            .neighbors(root)
            .iter()
            .copied()
            .filter(|&w| w > root)
            .collect();
        rec(g, root, &mut set, &mut in_set, &ext, 0, tau, &mut best);
        in_set[root as usize] = false;
    }
    (best_num, best_den, best_set) = best;
    DensityReport {
        rho: best_num as f64 / best_den as f64,
        witness: {
            let mut w = best_set;
            w.sort_unstable();
            w
        },
        exact: true,
    }
}

fn peel_search(g: &Graph, tau: usize) -> DensityReport {
    let n = g.n();
    let mut deg: Vec<usize> = g.degrees();
    let mut removed = vec![false; n];
    let mut order = Vec::with_capacity(n);
    let mut edges_left = g.m();
    let mut edges_after = Vec::with_capacity(n + 1);
    edges_after.push(edges_left);

    // Bucketed min-degree peeling: O(m + n) with degree buckets.
    let maxd = g.max_degree();
    let mut buckets: Vec<Vec<u32>> = vec![Vec::new(); maxd + 1];
    for v in 0..n {
        buckets[deg[v]].push(v as u32);
    }
    let mut floor = 0usize;
    for _ in 0..n {
        while floor <= maxd {
            // Lazy deletion: entries may be stale; check on pop.
            if let Some(&v) = buckets[floor].last() {
                if removed[v as usize] || deg[v as usize] != floor {
                    buckets[floor].pop();
                    continue;
                }
                break;
            }
            floor += 1;
        }
        let v = buckets[floor].pop().expect("n vertices to peel");
        removed[v as usize] = true;
        edges_left -= deg[v as usize];
        for &w in g.neighbors(v) {
            if !removed[w as usize] {
                deg[w as usize] -= 1;
                buckets[deg[w as usize]].push(w);
                if deg[w as usize] < floor {
                    floor = deg[w as usize];
                }
            }
        }
        order.push(v);
        edges_after.push(edges_left);
    }

    // Suffix k (vertices peeled at positions >= k) has n-k vertices.
    let mut best_num = 0usize;
    let mut best_den = 1usize;
    let mut best_k = n - 1;
    for k in 0..n {
        let size = n - k;
        if size > tau {
            continue;
        }
        let e = edges_after[k];
        if e * best_den > best_num * size {
            best_num = e;
            best_den = size;
            best_k = k;
        }
    }
    let mut witness: Vec<u32> = order[best_k..].to_vec();
    witness.sort_unstable();
    DensityReport {
        rho: best_num as f64 / best_den as f64,
        witness,
        exact: false,
    }
}
