//! Maximum matching, deficiency witnesses, and a fast perfect-matching
//! routine for dense graphs.
//!
//! The general solver is the classical blossom algorithm. Deficiency
//! witnesses follow the Gallai--Edmonds structure: the set `D` of vertices
//! missed by some maximum matching is what a failed alternating search
//! reaches from the exposed vertices, and `A = N(D) \ D` attains the
//! maximum of `odd_components(G - U) - |U|` over all vertex sets `U`.

use crate::error::{Error, Result};
use crate::graph::Graph;

const UNMATCHED: i32 = -1;

struct Matcher<'a> {
    g: &'a Graph,
    mate: Vec<i32>,
    parent: Vec<i32>,
    base: Vec<u32>,
    in_tree: Vec<bool>,
    in_blossom: Vec<bool>,
    mark: Vec<bool>,
}

impl<'a> Matcher<'a> {
    fn new(g: &'a Graph) -> Self {
        let n = g.n();
        let mut m = Matcher {
            g,
            mate: vec![UNMATCHED; n],
            parent: vec![UNMATCHED; n],
            base: (0..n as u32).collect(),
            in_tree: vec![false; n],
            in_blossom: vec![false; n],
            mark: vec![false; n],
        };
        // Greedy seed: most augmenting work is avoided this way.
        for u in 0..n {
            if m.mate[u] == UNMATCHED {
                for &v in g.neighbors(u as u32) {
                    if m.mate[v as usize] == UNMATCHED {
                        m.mate[u] = v as i32;
                        m.mate[v as usize] = u as i32;
                        break;
                    }
                }
            }
        }
        m
    }

    fn lca(&mut self, a: u32, b: u32) -> u32 {
        self.mark.fill(false);
        let mut v = a;
        loop {
            v = self.base[v as usize];
            self.mark[v as usize] = true;
            if self.mate[v as usize] == UNMATCHED {
                break;
            }
            v = self.parent[self.mate[v as usize] as usize] as u32;
        }
        let mut v = b;
        while !self.mark[self.base[v as usize] as usize] {
            v = self.parent[self.mate[self.base[v as usize] as usize] as usize] as u32;
        }
        self.base[v as usize]
    }

    fn mark_path(&mut self, mut v: u32, b: u32, mut child: u32) {
        while self.base[v as usize] != b {
            self.in_blossom[self.base[v as usize] as usize] = true;
            self.in_blossom[self.base[self.mate[v as usize] as usize] as usize] = true;
            self.parent[v as usize] = child as i32;
            child = self.mate[v as usize] as u32;
            v = self.parent[self.mate[v as usize] as usize] as u32;
        }
    }

    /// Alternating BFS from an exposed root. Returns the far end of an
    /// augmenting path, or `UNMATCHED` if the tree saturates.
    fn find_path(&mut self, root: u32) -> i32 {
        let n = self.g.n();
        self.in_tree.fill(false);
        self.parent.fill(UNMATCHED);
        for i in 0..n {
            self.base[i] = i as u32;
        }
        self.in_tree[root as usize] = true;
        let mut queue = std::collections::VecDeque::from([root]);
        while let Some(v) = queue.pop_front() {
            for &to in self.g.neighbors(v) {
                if self.base[v as usize] == self.base[to as usize]
                    || self.mate[v as usize] == to as i32
                {
                    continue;
                }
                if to == root
                    || (self.mate[to as usize] != UNMATCHED
                        && self.parent[self.mate[to as usize] as usize] != UNMATCHED)
                {
                    // Odd cycle: contract the blossom at the common base.
                    let cur_base = self.lca(v, to);
                    self.in_blossom.fill(false);
                    self.mark_path(v, cur_base, to);
                    self.mark_path(to, cur_base, v);
                    for i in 0..n {
                        if self.in_blossom[self.base[i] as usize] {
                            self.base[i] = cur_base;
                            if !self.in_tree[i] {
                                self.in_tree[i] = true;
                                queue.push_back(i as u32);
                            }
                        }
                    }
                } else if self.parent[to as usize] == UNMATCHED {
                    self.parent[to as usize] = v as i32;
                    if self.mate[to as usize] == UNMATCHED {
                        return to as i32;
                    }
                    let next = self.mate[to as usize] as usize;
                    self.in_tree[next] = true;
                    queue.push_back(next as u32);
                }
            }
        }
        UNMATCHED
    }

    fn augment(&mut self, mut v: i32) {
        while v != UNMATCHED {
            let pv = self.parent[v as usize];
            let next = self.mate[pv as usize];
            self.mate[v as usize] = pv;
            self.mate[pv as usize] = v;
            v = next;
        }
    }

    fn solve(&mut self) {
        for v in 0..self.g.n() as u32 {
            if self.mate[v as usize] == UNMATCHED {
                let end = self.find_path(v);
                if end != UNMATCHED {
                    self.augment(end);
                }
            }
        }
    }

    /// Vertices missed by some maximum matching: everything a failed
    /// search reaches from the exposed vertices (blossom interiors count).
    fn missable(&mut self) -> Vec<bool> {
        let mut d = vec![false; self.g.n()];
        for v in 0..self.g.n() {
            if self.mate[v] == UNMATCHED && !d[v] {
                let end = self.find_path(v as u32);
                debug_assert_eq!(end, UNMATCHED, "matching was maximum");
                for (i, &t) in self.in_tree.iter().enumerate() {
                    if t {
                        d[i] = true;
                    }
                }
            }
        }
        d
    }

    fn edges(&self) -> Vec<(u32, u32)> {
        let mut out = Vec::new();
        for v in 0..self.g.n() {
            let w = self.mate[v];
            if w != UNMATCHED && (v as i32) < w {
                out.push((v as u32, w as u32));
            }
        }
        out
    }
}

/// A maximum matching as a list of disjoint edges, each with `u < v`.
pub fn maximum_matching(g: &Graph) -> Vec<(u32, u32)> {
    let mut m = Matcher::new(g);
    m.solve();
    m.edges()
}

/// Size of a maximum matching.
pub fn matching_number(g: &Graph) -> usize {
    maximum_matching(g).len()
}

/// True iff some matching covers every vertex.
pub fn has_perfect_matching(g: &Graph) -> bool {
    g.n() % 2 == 0 && 2 * matching_number(g) == g.n()
}

/// Checks that `edges` is a matching in `g` (disjoint, present edges).
pub fn is_matching(g: &Graph, edges: &[(u32, u32)]) -> bool {
    let mut seen = vec![false; g.n()];
    for &(u, v) in edges {
        if (u as usize) >= g.n() || (v as usize) >= g.n() || !g.has_edge(u, v) {
            return false;
        }
        if seen[u as usize] || seen[v as usize] {
            return false;
        }
        seen[u as usize] = true;
        seen[v as usize] = true;
    }
    true
}

/// Deficiency witness: a set `U` with
/// `odd_components(G - U) - |U| = n - 2 * matching_number(G)`.
#[derive(Clone, Debug)]
pub struct DeficiencyWitness {
    pub witness: Vec<u32>,
    pub odd_components: usize,
    pub deficiency: usize,
}

/// Computes the matching number together with an optimal deficiency
/// witness. Cost is a handful of extra alternating searches on top of one
/// maximum-matching run.
pub fn deficiency_witness(g: &Graph) -> DeficiencyWitness {
    let mut m = Matcher::new(g);
    m.solve();
    let nu = m.edges().len();
    let d = m.missable();
    let mut in_a = vec![false; g.n()];
    for v in 0..g.n() as u32 {
        if d[v as usize] {
            for &w in g.neighbors(v) {
                if !d[w as usize] {
                    in_a[w as usize] = true;
                }
            }
        }
    }
    let witness: Vec<u32> = (0..g.n() as u32).filter(|&v| in_a[v as usize]).collect();
    let rest: Vec<u32> = (0..g.n() as u32).filter(|&v| !in_a[v as usize]).collect();
    let odd = g
        .induced_subgraph(&rest)
        .expect("valid vertex set")
        .components()
        .iter()
        .filter(|c| c.len() % 2 == 1)
        .count();
    let deficiency = g.n() - 2 * nu;
    debug_assert_eq!(odd - witness.len(), deficiency, "witness attains the deficiency");
    DeficiencyWitness {
        witness,
        odd_components: odd,
        deficiency,
    }
}

/// Perfect matching in a graph with minimum degree at least `n/2`.
///
/// After adjacent exposed pairs are exhausted, two exposed vertices `u, v`
/// see at least `n` endpoints among at most `n - 2` matched vertices, so
/// some matched edge `xy` has `u ~ x` and `v ~ y`; rematching through it
/// shortens the exposed set. Every round is a linear scan, so the whole
/// routine is quadratic and comfortably handles graphs where the blossom
/// solver would be slow.
pub fn dirac_perfect_matching(g: &Graph) -> Result<Vec<(u32, u32)>> {
    let n = g.n();
    if n == 0 || n % 2 == 1 {
        return Err(Error::InvalidParameter(
            "perfect matching needs an even, positive vertex count".into(),
        ));
    }
    if 2 * g.min_degree() < n {
        return Err(Error::InvalidParameter(format!(
            "minimum degree {} below n/2 = {}",
            g.min_degree(),
            n / 2
        )));
    }
    let mut mate: Vec<i32> = vec![UNMATCHED; n];
    for u in 0..n {
        if mate[u] == UNMATCHED {
            for &v in g.neighbors(u as u32) {
                if mate[v as usize] == UNMATCHED {
                    mate[u] = v as i32;
                    mate[v as usize] = u as i32;
                    break;
                }
            }
        }
    }
    let mut exposed: Vec<u32> = (0..n as u32).filter(|&v| mate[v as usize] == UNMATCHED).collect();
    while !exposed.is_empty() {
        // Length-one augmentations first; the counting step needs them gone.
        let mut matched_pair = None;
        'scan: for (i, &u) in exposed.iter().enumerate() {
            for &w in g.neighbors(u) {
                if mate[w as usize] == UNMATCHED && w != u {
                    let j = exposed.iter().position(|&x| x == w).expect("exposed");
                    matched_pair = Some((i.max(j), i.min(j), u, w));
                    break 'scan;
                }
            }
        }
        if let Some((hi, lo, u, w)) = matched_pair {
            mate[u as usize] = w as i32;
            mate[w as usize] = u as i32;
            exposed.swap_remove(hi);
            exposed.swap_remove(lo);
            continue;
        }
        let u = exposed[exposed.len() - 1];
        let v = exposed[exposed.len() - 2];
        let mut done = false;
        for &x in g.neighbors(u) {
            let y = mate[x as usize];
            debug_assert_ne!(y, UNMATCHED);
            if g.has_edge(y as u32, v) {
                mate[u as usize] = x as i32;
                mate[x as usize] = u as i32;
                mate[y as usize] = v as i32;
                mate[v as usize] = y;
                exposed.pop();
                exposed.pop();
                done = true;
                break;
            }
        }
        if !done {
            unreachable!("length-3 augmentation exists when min degree >= n/2");
        }
    }
    let mut out = Vec::with_capacity(n / 2);
    for v in 0..n {
        let w = mate[v];
        if (v as i32) < w {
            out.push((v as u32, w as u32));
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn oc_minus_u(g: &Graph, mask: u32) -> i64 {
        let rest: Vec<u32> = (0..g.n() as u32).filter(|&v| mask >> v & 1 == 0).collect();
        let odd = g
            .induced_subgraph(&rest)
            .unwrap()
            .components()
            .iter()
            .filter(|c| c.len() % 2 == 1)
            .count() as i64;
        odd - mask.count_ones() as i64
    }

    #[test]
    fn known_matching_numbers() {
        assert_eq!(matching_number(&Graph::cycle(6).unwrap()), 3);
        assert_eq!(matching_number(&Graph::cycle(5).unwrap()), 2);
        assert_eq!(matching_number(&Graph::complete(4)), 2);
        assert!(has_perfect_matching(&Graph::cycle(8).unwrap()));
        assert!(!has_perfect_matching(&Graph::cycle(7).unwrap()));

        // Star on four vertices: one edge, deficiency two.
        let star = Graph::from_edges(4, &[(0, 1), (0, 2), (0, 3)]).unwrap();
        assert_eq!(matching_number(&star), 1);
        let w = deficiency_witness(&star);
        assert_eq!(w.deficiency, 2);
        assert_eq!(w.witness, vec![0]);
        assert_eq!(w.odd_components, 3);
    }

    #[test]
    fn petersen_has_perfect_matching() {
        let mut edges = Vec::new();
        for i in 0..5u32 {
            edges.push((i, (i + 1) % 5));
            edges.push((i, i + 5));
            edges.push((i + 5, (i + 2) % 5 + 5));
        }
        let p = Graph::from_edges(10, &edges).unwrap();
        let m = maximum_matching(&p);
        assert_eq!(m.len(), 5);
        assert!(is_matching(&p, &m));
    }

    #[test]
    fn dirac_routine_matches_dense_graphs() {
        let k6 = Graph::complete(6);
        let m = dirac_perfect_matching(&k6).unwrap();
        assert_eq!(m.len(), 3);
        assert!(is_matching(&k6, &m));

        // Complete graph minus a Hamilton cycle still has degree n - 3 >= n/2.
        let n = 12u32;
        let mut edges = Vec::new();
        for u in 0..n {
            for v in u + 1..n {
                let on_cycle = v == u + 1 || (u == 0 && v == n - 1);
                if !on_cycle {
                    edges.push((u, v));
                }
            }
        }
        let g = Graph::from_edges(n as usize, &edges).unwrap();
        let m = dirac_perfect_matching(&g).unwrap();
        assert_eq!(m.len(), 6);
        assert!(is_matching(&g, &m));

        assert!(dirac_perfect_matching(&Graph::cycle(8).unwrap()).is_err());
        assert!(dirac_perfect_matching(&Graph::complete(5)).is_err());
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(48))]
        #[test]
        fn blossom_agrees_with_petgraph(n in 2usize..10, bits in any::<u64>()) {
            let mut edges = Vec::new();
            let mut pg = petgraph::graph::UnGraph::<(), ()>::new_undirected();
            let nodes: Vec<_> = (0..n).map(|_| pg.add_node(())).collect();
            let mut idx = 0;
            for u in 0..n as u32 {
                for v in u + 1..n as u32 {
                    if bits >> (idx % 64) & 1 == 1 {
                        edges.push((u, v));
                        pg.add_edge(nodes[u as usize], nodes[v as usize], ());
                    }
                    idx += 11;
                }
            }
            let g = Graph::from_edges(n, &edges).unwrap();
            let ours = maximum_matching(&g);
            prop_assert!(is_matching(&g, &ours));
            let theirs = petgraph::algo::matching::maximum_matching(&pg);
            prop_assert_eq!(ours.len(), theirs.edges().count());
        }

        #[test]
        fn witness_attains_berge_maximum(n in 1usize..9, bits in any::<u64>()) {
            let mut edges = Vec::new();
            let mut idx = 0;
            for u in 0..n as u32 {
                for v in u + 1..n as u32 {
                    if bits >> (idx % 64) & 1 == 1 {
                        edges.push((u, v));
                    }
                    idx += 5;
                }
            }
            let g = Graph::from_edges(n, &edges).unwrap();
            let w = deficiency_witness(&g);
            // The witness attains the max over all vertex sets.
            let best = (0u32..1 << n).map(|m| oc_minus_u(&g, m)).max().unwrap();
            prop_assert_eq!(w.odd_components as i64 - w.witness.len() as i64, best);
            prop_assert_eq!(w.deficiency as i64, best);
        }
    }
}
