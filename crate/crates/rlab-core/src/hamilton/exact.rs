//! Exact Hamiltonicity and longest-path computations for small hosts.
//!
//! The cycle decider is pruned backtracking over bitmask adjacency and is
//! honored up to `HAMILTON_CAP` vertices. The longest-path solver is a
//! dynamic program over vertex subsets and is honored up to
//! `LONGEST_PATH_CAP` vertices; it backs the exact booster enumeration.

use crate::error::{Error, Result};
use crate::graph::Graph;

/// Largest host the backtracking cycle decider accepts.
pub const HAMILTON_CAP: usize = 30;
/// Largest host the subset dynamic program accepts.
pub const LONGEST_PATH_CAP: usize = 10;

fn adjacency_masks(g: &Graph) -> Vec<u32> {
    let mut adj = vec![0u32; g.n()];
    for (u, v) in g.edges() {
        adj[u as usize] |= 1 << v;
        adj[v as usize] |= 1 << u;
    }
    adj
}

/// Validates a claimed Hamilton cycle: a permutation of all vertices whose
/// consecutive pairs (and closing pair) are edges of `g`.
pub fn is_hamilton_cycle(g: &Graph, cycle: &[u32]) -> bool {
    let n = g.n();
    if n < 3 || cycle.len() != n {
        return false;
    }
    let mut seen = vec![false; n];
    for &v in cycle {
        if (v as usize) >= n || seen[v as usize] {
            return false;
        }
        seen[v as usize] = true;
    }
    cycle
        .windows(2)
        .all(|w| g.has_edge(w[0], w[1]))
        && g.has_edge(cycle[n - 1], cycle[0])
}

struct CycleSearch {
    adj: Vec<u32>,
    full: u32,
    path: Vec<u32>,
}

impl CycleSearch {
    /// All unvisited vertices reachable from `from` inside `allowed`.
    fn reach(&self, from: u32, allowed: u32) -> u32 {
        let mut seen = 1u32 << from;
        let mut frontier = seen;
        while frontier != 0 {
            let mut next = 0u32;
            let mut f = frontier;
            while f != 0 {
                let v = f.trailing_zeros() as usize;
                f &= f - 1;
                next |= self.adj[v];
            }
            next &= allowed & !seen;
            seen |= next;
            frontier = next;
        }
        seen
    }

    fn dfs(&mut self, cur: usize, visited: u32) -> bool {
        if visited == self.full {
            return self.adj[cur] & 1 != 0; // close back to vertex 0
        }
        let unvisited = self.full & !visited;
        // The closing step enters vertex 0 from an unvisited vertex.
        if self.adj[0] & unvisited == 0 {
            return false;
        }
        // Everything still unvisited must be reachable from the endpoint.
        let allowed = unvisited | (1 << cur);
        if self.reach(cur as u32, allowed) & unvisited != unvisited {
            return false;
        }
        // Degree pruning and forcing. A vertex's remaining cycle neighbors
        // can only be unvisited vertices, the current endpoint, or vertex 0;
        // fewer than two of those kills the branch, exactly two adjacent to
        // the endpoint forces the next step.
        let mut forced: Option<usize> = None;
        let mut forced_at_cur = 0usize;
        let mut rest = unvisited;
        while rest != 0 {
            let v = rest.trailing_zeros() as usize;
            rest &= rest - 1;
            let avail = self.adj[v] & (unvisited | (1 << cur) | 1);
            let deg = avail.count_ones();
            if deg < 2 {
                return false;
            }
            if deg == 2 && self.adj[v] >> cur & 1 == 1 {
                forced = Some(v);
                forced_at_cur += 1;
            }
        }
        // Two forced edges at the endpoint exceed its remaining capacity
        // (one slot at an interior endpoint, two only at vertex 0 itself
        // while its second slot is the closing edge).
        let capacity = if cur == 0 && visited == 1 { 2 } else { 1 };
        if forced_at_cur > capacity {
            return false;
        }
        let mut candidates: Vec<usize> = if let (Some(v), 1) = (forced, forced_at_cur) {
            vec![v]
        } else {
            let mut c = Vec::new();
            let mut opts = self.adj[cur] & unvisited;
            while opts != 0 {
                let v = opts.trailing_zeros() as usize;
                opts &= opts - 1;
                c.push(v);
            }
            // Fail-first: fewest continuations first.
            c.sort_by_key(|&v| (self.adj[v] & unvisited).count_ones());
            c
        };
        for v in candidates.drain(..) {
            self.path.push(v as u32);
            if self.dfs(v, visited | (1 << v)) {
                return true;
            }
            self.path.pop();
        }
        false
    }
}

/// Finds a Hamilton cycle or proves none exists, for hosts up to
/// `HAMILTON_CAP` vertices.
pub fn hamiltonian_cycle(g: &Graph) -> Result<Option<Vec<u32>>> {
    let n = g.n();
    if n > HAMILTON_CAP {
        return Err(Error::ExactCapExceeded {
            what: "Hamilton cycle search",
            cap: HAMILTON_CAP,
            n,
        });
    }
    if n < 3 || g.min_degree() < 2 || !g.is_connected() {
        return Ok(None);
    }
    let mut s = CycleSearch {
        adj: adjacency_masks(g),
        full: (1u32 << n) - 1,
        path: vec![0],
    };
    if s.dfs(0, 1) {
        debug_assert!(is_hamilton_cycle(g, &s.path));
        Ok(Some(s.path))
    } else {
        Ok(None)
    }
}

/// True iff `g` has a Hamilton cycle; same cap as `hamiltonian_cycle`.
pub fn is_hamiltonian(g: &Graph) -> Result<bool> {
    Ok(hamiltonian_cycle(g)?.is_some())
}

/// Longest path (by edge count) via dynamic programming over subsets.
/// Returns the edge count and one witness path.
pub fn longest_path_exact(g: &Graph) -> Result<(usize, Vec<u32>)> {
    let n = g.n();
    if n > LONGEST_PATH_CAP {
        return Err(Error::ExactCapExceeded {
            what: "exact longest path",
            cap: LONGEST_PATH_CAP,
            n,
        });
    }
    if n == 0 {
        return Err(Error::InvalidParameter("longest path on empty graph".into()));
    }
    let adj = adjacency_masks(g);
    // ends[mask]: endpoints of paths covering exactly `mask`.
    let mut ends = vec![0u32; 1 << n];
    for v in 0..n {
        ends[1 << v] = 1 << v;
    }
    let mut best_mask = 1usize;
    for mask in 1usize..(1 << n) {
        let e = ends[mask];
        if e == 0 {
            continue;
        }
        if mask.count_ones() > best_mask.count_ones() {
            best_mask = mask;
        }
        let mut last_bits = e;
        while last_bits != 0 {
            let last = last_bits.trailing_zeros() as usize;
            last_bits &= last_bits - 1;
            let mut ext = adj[last] & !(mask as u32);
            while ext != 0 {
                let v = ext.trailing_zeros() as usize;
                ext &= ext - 1;
                ends[mask | (1 << v)] |= 1 << v;
            }
        }
    }
    // Reconstruct backwards from any endpoint of the best mask.
    let mut mask = best_mask;
    let mut last = ends[mask].trailing_zeros() as usize;
    let mut path = vec![last as u32];
    while mask.count_ones() > 1 {
        let prev_mask = mask & !(1 << last);
        let prev_bits = ends[prev_mask] & adj[last];
        debug_assert_ne!(prev_bits, 0, "dp table is consistent");
        let prev = prev_bits.trailing_zeros() as usize;
        path.push(prev as u32);
        mask = prev_mask;
        last = prev;
    }
    path.reverse();
    Ok((path.len() - 1, path))
}

/// Longest-path length only.
pub fn longest_path_len(g: &Graph) -> Result<usize> {
    longest_path_exact(g).map(|(len, _)| len)
}

/// All boosters of `g` by direct definition: non-edges whose addition
/// yields a Hamiltonian graph or a strictly longer longest path. Honored
/// up to `LONGEST_PATH_CAP` vertices.
pub fn exact_boosters(g: &Graph) -> Result<Vec<(u32, u32)>> {
    let n = g.n();
    if n > LONGEST_PATH_CAP {
        return Err(Error::ExactCapExceeded {
            what: "exact booster enumeration",
            cap: LONGEST_PATH_CAP,
            n,
        });
    }
    let base_len = longest_path_len(g)?;
    let mut out = Vec::new();
    for u in 0..n as u32 {
        for v in u + 1..n as u32 {
            if g.has_edge(u, v) {
                continue;
            }
            let g2 = g.with_edge(u, v)?;
            if is_hamiltonian(&g2)? || longest_path_len(&g2)? > base_len {
                out.push((u, v));
            }
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    pub(crate) fn petersen() -> Graph {
        let mut edges = Vec::new();
        for i in 0..5u32 {
            edges.push((i, (i + 1) % 5));
            edges.push((i, i + 5));
            edges.push((i + 5, (i + 2) % 5 + 5));
        }
        Graph::from_edges(10, &edges).unwrap()
    }

    /// Permutation-search Hamiltonicity oracle for tiny n.
    fn hamiltonian_brute(g: &Graph) -> bool {
        let n = g.n();
        if n < 3 {
            return false;
        }
        let mut perm: Vec<u32> = (1..n as u32).collect();
        // Heap's algorithm over the non-0 vertices; 0 fixed as start.
        fn rec(g: &Graph, perm: &mut Vec<u32>, k: usize) -> bool {
            if k == perm.len() {
                let mut cycle = vec![0u32];
                cycle.extend_from_slice(perm);
                return is_hamilton_cycle(g, &cycle);
            }
            for i in k..perm.len() {
                perm.swap(k, i);
                if rec(g, perm, k + 1) {
                    return true;
                }
                perm.swap(k, i);
            }
            false
        }
        rec(g, &mut perm, 0)
    }

    #[test]
    fn known_hosts() {
        for n in 3..10 {
            let c = Graph::cycle(n).unwrap();
            let cyc = hamiltonian_cycle(&c).unwrap().expect("cycle is its own witness");
            assert!(is_hamilton_cycle(&c, &cyc));
        }
        assert!(hamiltonian_cycle(&petersen()).unwrap().is_none());

        // K4 minus one edge still has a 4-cycle.
        let g = Graph::from_edges(4, &[(0, 1), (0, 2), (1, 2), (1, 3), (2, 3)]).unwrap();
        assert!(is_hamiltonian(&g).unwrap());

        let two_triangles =
            Graph::from_edges(6, &[(0, 1), (1, 2), (0, 2), (3, 4), (4, 5), (3, 5)]).unwrap();
        assert!(!is_hamiltonian(&two_triangles).unwrap());

        assert!(hamiltonian_cycle(&Graph::cycle(31).unwrap()).is_err());
    }

    #[test]
    fn decider_matches_permutation_search() {
        // Deterministic pseudo-random small graphs.
        let mut state = 0x9e3779b97f4a7c15u64;
        let mut next = move || {
            state ^= state << 13;
            state ^= state >> 7;
            state ^= state << 17;
            state
        };
        for n in 4..9usize {
            for _ in 0..40 {
                let mut edges = Vec::new();
                for u in 0..n as u32 {
                    for v in u + 1..n as u32 {
                        if next() % 100 < 45 {
                            edges.push((u, v));
                        }
                    }
                }
                let g = Graph::from_edges(n, &edges).unwrap();
                assert_eq!(
                    is_hamiltonian(&g).unwrap(),
                    hamiltonian_brute(&g),
                    "disagreement on {:?}",
                    g.edges().collect::<Vec<_>>()
                );
            }
        }
    }

    #[test]
    fn longest_path_known_values() {
        let (len, path) = longest_path_exact(&Graph::cycle(6).unwrap()).unwrap();
        assert_eq!(len, 5);
        assert_eq!(path.len(), 6);

        let (len, _) = longest_path_exact(&petersen()).unwrap();
        assert_eq!(len, 9); // traceable but not Hamiltonian

        let two_edges = Graph::from_edges(4, &[(0, 1), (2, 3)]).unwrap();
        assert_eq!(longest_path_len(&two_edges).unwrap(), 1);

        assert_eq!(longest_path_len(&Graph::empty(3)).unwrap(), 0);
    }

    #[test]
    fn longest_path_witness_is_a_path() {
        let g = Graph::from_edges(
            7,
            &[(0, 1), (1, 2), (2, 3), (3, 0), (2, 4), (4, 5), (5, 6)],
        )
        .unwrap();
        let (len, path) = longest_path_exact(&g).unwrap();
        assert_eq!(path.len(), len + 1);
        let mut seen = std::collections::HashSet::new();
        for w in path.windows(2) {
            assert!(g.has_edge(w[0], w[1]));
        }
        assert!(path.iter().all(|&v| seen.insert(v)));
    }

    #[test]
    fn booster_definition_on_tiny_graphs() {
        // Path 0-1-2: the only non-edge {0,2} closes a triangle.
        let p3 = Graph::from_edges(3, &[(0, 1), (1, 2)]).unwrap();
        assert_eq!(exact_boosters(&p3).unwrap(), vec![(0, 2)]);

        // Two disjoint edges: crossing pairs lengthen the path.
        let m2 = Graph::from_edges(4, &[(0, 1), (2, 3)]).unwrap();
        let b = exact_boosters(&m2).unwrap();
        assert!(b.contains(&(1, 2)));
        assert!(b.contains(&(0, 2)));
        assert_eq!(b.len(), 4); // all cross pairs; {0,1},{2,3} are edges

        // Hamiltonian host: every non-edge is a booster by the first clause.
        let c5 = Graph::cycle(5).unwrap();
        let b = exact_boosters(&c5).unwrap();
        assert_eq!(b.len(), 5 * 4 / 2 - 5);

        // Petersen: every non-edge is a booster (adding any chord makes it
        // Hamiltonian).
        let p = petersen();
        let b = exact_boosters(&p).unwrap();
        assert_eq!(b.len(), 45 - 15);
    }
}
