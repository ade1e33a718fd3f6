//! Hamiltonicity resilience: attack suites under a per-vertex deletion
//! budget and two-sided empirical estimation.
//!
//! The suite never reports an unverified kill: a host small enough for the
//! exact decider is settled outright, larger hosts are declared dead only on
//! structural evidence (a vertex of degree below two, disconnection, a
//! deficient matching, an independent majority), and a failed randomized
//! cycle search is recorded as presumed-dead, a strictly weaker claim kept
//! separate from verified success.

pub mod quasi;

use std::collections::{BTreeMap, HashSet};

use crate::attacks::{
    matching_attack, matching_attack_bound, partition_attack, partition_attack_bound,
};
use crate::certificates::{conn_certificate, matching_certificate, ConnKind};
use crate::error::{Error, Result};
use crate::graph::Graph;
use crate::hamilton::{
    hamilton_witness, hamiltonian_cycle, longest_path_heuristic, witnessed_boosters, HAMILTON_CAP,
};
use crate::random::GenSpec;
use crate::stream;

pub use quasi::{
    beta_of, mu_of, quasirandom_check, thinning, QrStatus, QuasiRandomVerdict, EXACT_QUASI_CAP,
};

/// Rotation-extension restarts used before conceding presumed-dead.
pub const HAM_SEARCH_RESTARTS: usize = 200;

/// Hosts above this size skip the exact matching-deficiency death check.
const MATCHING_CERT_CAP: usize = 2000;

/// Attack names accepted by [`ham_attack_suite_filtered`], in run order.
pub const HAM_ATTACKS: [&str; 4] = ["min-degree", "matching", "booster-starve", "cut"];

/// Constants of the resilience pipeline at one `epsilon`, plus the split of
/// the host degree between the expander part and the booster part.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ResilienceParams {
    pub epsilon: f64,
    pub d1: usize,
    pub d2: usize,
}

impl ResilienceParams {
    /// Default one-to-two split of `d` between the expander and booster
    /// layers.
    pub fn new(epsilon: f64, d: usize) -> Result<Self> {
        if d < 2 {
            return Err(Error::InvalidParameter(format!(
                "degree split needs d >= 2, got {d}"
            )));
        }
        let d1 = ((d as f64 / 3.0).round() as usize).clamp(1, d - 1);
        Self::with_split(epsilon, d1, d - d1)
    }

    pub fn with_split(epsilon: f64, d1: usize, d2: usize) -> Result<Self> {
        if !(epsilon > 0.0 && epsilon <= 1.0) {
            return Err(Error::InvalidParameter(format!(
                "epsilon must lie in (0, 1], got {epsilon}"
            )));
        }
        if d1 == 0 || d2 == 0 {
            return Err(Error::InvalidParameter(
                "both degree parts must be positive".into(),
            ));
        }
        Ok(ResilienceParams { epsilon, d1, d2 })
    }

    pub fn d(&self) -> usize {
        self.d1 + self.d2
    }

    pub fn mu(&self) -> f64 {
        mu_of(self.epsilon)
    }

    pub fn beta(&self) -> f64 {
        beta_of(self.epsilon)
    }
}

/// Decision about one host's Hamiltonicity, with the strength of the
/// evidence made explicit.
#[derive(Debug, Clone)]
pub enum HamStatus {
    /// A spanning cycle was found and re-verified.
    Alive { cycle: Vec<u32> },
    /// Non-Hamiltonicity follows from an exact decision or a structural
    /// obstruction.
    DeadVerified { reason: String },
    /// The randomized search failed; nothing is proved.
    Presumed,
}

/// Settles Hamiltonicity exactly on small hosts; on larger ones tries cheap
/// structural death certificates, then a randomized rotation-extension
/// search for a spanning cycle.
pub fn hamilton_status(g: &Graph, restarts: usize, seed: u64) -> Result<HamStatus> {
    let n = g.n();
    if n <= HAMILTON_CAP {
        return Ok(match hamiltonian_cycle(g)? {
            Some(cycle) => HamStatus::Alive { cycle },
            None => HamStatus::DeadVerified {
                reason: "exact decision".into(),
            },
        });
    }
    if g.min_degree() < 2 {
        return Ok(HamStatus::DeadVerified {
            reason: "a vertex has degree below two".into(),
        });
    }
    if !g.is_connected() {
        return Ok(HamStatus::DeadVerified {
            reason: "disconnected".into(),
        });
    }
    if n <= MATCHING_CERT_CAP && crate::matching::matching_number(g) < n / 2 {
        return Ok(HamStatus::DeadVerified {
            reason: "matching number below n/2".into(),
        });
    }
    if greedy_independent_majority(g) {
        return Ok(HamStatus::DeadVerified {
            reason: "independent set spanning a majority".into(),
        });
    }
    let st = longest_path_heuristic(g, restarts.max(1), seed)?;
    Ok(match hamilton_witness(g, &st) {
        Some(cycle) => HamStatus::Alive { cycle },
        None => HamStatus::Presumed,
    })
}

/// A spanning cycle alternates in and out of any vertex set, so an
/// independent set larger than n/2 is a death certificate.
fn greedy_independent_majority(g: &Graph) -> bool {
    let n = g.n();
    let mut order: Vec<u32> = (0..n as u32).collect();
    order.sort_by_key(|&v| (g.degree(v), v));
    let mut blocked = vec![false; n];
    let mut size = 0usize;
    for &v in &order {
        if blocked[v as usize] {
            continue;
        }
        size += 1;
        if 2 * size > n {
            return true;
        }
        for &x in g.neighbors(v) {
            blocked[x as usize] = true;
        }
    }
    false
}

/// One attack's outcome against Hamiltonicity.
#[derive(Debug, Clone)]
pub struct HamAttack {
    pub name: &'static str,
    /// False when the attack's applicability gate (parity, regularity, or
    /// its bound exceeding the budget) ruled it out.
    pub applied: bool,
    /// Deleted subgraph; empty when not applied.
    pub h: Graph,
    pub delta_h: usize,
    pub verdict: HamVerdict,
    pub detail: String,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum HamVerdict {
    KilledVerified,
    PresumedDead,
    Survived,
}

/// Deletes up to `r` edges at every vertex in ascending degree order,
/// always removing the lowest-degree incident edges first, while keeping
/// every vertex's deleted-degree within `r`.
fn min_degree_attack(g: &Graph, r: usize) -> Graph {
    let n = g.n();
    let mut hdeg = vec![0usize; n];
    let mut removed: HashSet<(u32, u32)> = HashSet::new();
    let mut edges: Vec<(u32, u32)> = Vec::new();
    let mut order: Vec<u32> = (0..n as u32).collect();
    order.sort_by_key(|&v| (g.degree(v), v));
    for &v in &order {
        if hdeg[v as usize] >= r {
            continue;
        }
        let mut nbrs: Vec<u32> = g.neighbors(v).to_vec();
        nbrs.sort_by_key(|&x| (g.degree(x), x));
        for x in nbrs {
            if hdeg[v as usize] >= r {
                break;
            }
            if hdeg[x as usize] >= r {
                continue;
            }
            let key = if v < x { (v, x) } else { (x, v) };
            if removed.insert(key) {
                hdeg[v as usize] += 1;
                hdeg[x as usize] += 1;
                edges.push(key);
            }
        }
    }
    Graph::from_edges(n, &edges).expect("edges from the host are valid")
}

/// Repeatedly deletes the edge lying on the most booster-witness paths,
/// within the per-vertex budget, until the pool dries up or `n` edges are
/// gone.
fn booster_starve(g: &Graph, r: usize, seed: u64) -> Result<Graph> {
    let n = g.n();
    let mut hdeg = vec![0usize; n];
    let mut hedges: Vec<(u32, u32)> = Vec::new();
    let mut current = g.clone();
    for iter in 0..n {
        if r == 0 {
            break;
        }
        let sub = seed ^ stream::stream_id(&format!("ham/starve/iter={iter}"));
        let wb = witnessed_boosters(&current, 8, sub, false)?;
        let pick = wb
            .edge_usage
            .iter()
            .filter(|&(&(u, v), _)| hdeg[u as usize] < r && hdeg[v as usize] < r)
            .max_by_key(|&(&e, &c)| (c, std::cmp::Reverse(e)))
            .map(|(&e, _)| e);
        let Some((u, v)) = pick else { break };
        hdeg[u as usize] += 1;
        hdeg[v as usize] += 1;
        hedges.push((u, v));
        let h = Graph::from_edges(n, &hedges)?;
        current = g.remove_subgraph(&h)?;
    }
    Graph::from_edges(n, &hedges)
}

fn not_applied(name: &'static str, n: usize, why: String) -> HamAttack {
    HamAttack {
        name,
        applied: false,
        h: Graph::empty(n),
        delta_h: 0,
        verdict: HamVerdict::Survived,
        detail: why,
    }
}

fn status_attack(
    name: &'static str,
    g: &Graph,
    h: Graph,
    seed: u64,
    extra: String,
) -> Result<HamAttack> {
    let rest = g.remove_subgraph(&h)?;
    let status = hamilton_status(&rest, HAM_SEARCH_RESTARTS, seed)?;
    let (verdict, detail) = match status {
        HamStatus::Alive { .. } => (HamVerdict::Survived, format!("{extra}spanning cycle found")),
        HamStatus::DeadVerified { reason } => (HamVerdict::KilledVerified, format!("{extra}{reason}")),
        HamStatus::Presumed => (
            HamVerdict::PresumedDead,
            format!("{extra}{HAM_SEARCH_RESTARTS}-restart search failed, nothing proved"),
        ),
    };
    Ok(HamAttack {
        name,
        applied: true,
        delta_h: h.max_degree(),
        h,
        verdict,
        detail,
    })
}

/// Runs the whole attack suite against Hamiltonicity at budget `r`.
pub fn ham_attack_suite(g: &Graph, r: usize, seed: u64) -> Result<Vec<HamAttack>> {
    ham_attack_suite_filtered(g, r, seed, &HAM_ATTACKS)
}

/// Runs the named subset of attacks. Unknown names are an error.
pub fn ham_attack_suite_filtered(
    g: &Graph,
    r: usize,
    seed: u64,
    names: &[&'static str],
) -> Result<Vec<HamAttack>> {
    let n = g.n();
    if n == 0 {
        return Err(Error::InvalidParameter("empty host".into()));
    }
    if r > g.max_degree() {
        return Err(Error::InvalidParameter(format!(
            "budget {r} exceeds the maximum degree {}",
            g.max_degree()
        )));
    }
    for name in names {
        if !HAM_ATTACKS.contains(name) {
            return Err(Error::InvalidParameter(format!("unknown attack {name}")));
        }
    }
    let mut out = Vec::new();
    let d = g.regular_degree();
    for &name in names {
        let sub = seed ^ stream::stream_id(&format!("ham/suite/{name}"));
        let report = match name {
            "min-degree" => {
                let h = min_degree_attack(g, r);
                status_attack(name, g, h, sub, String::new())?
            }
            "matching" => match d {
                Some(d) if n % 2 == 0 && n >= 4 && d >= 1 => {
                    let bound = matching_attack_bound(d);
                    if bound <= r as f64 {
                        let rep = matching_attack(g, sub)?;
                        // An independent majority set is a death
                        // certificate for spanning cycles directly.
                        let verdict = if rep.success {
                            HamVerdict::KilledVerified
                        } else {
                            HamVerdict::Survived
                        };
                        HamAttack {
                            name,
                            applied: true,
                            delta_h: rep.delta_h,
                            h: rep.h,
                            verdict,
                            detail: format!("bound {bound:.2} within budget; {}", rep.transcript.lines().last().unwrap_or("")),
                        }
                    } else {
                        not_applied(name, n, format!("bound {bound:.2} exceeds budget {r}"))
                    }
                }
                _ => not_applied(name, n, "needs an even regular host".into()),
            },
            "booster-starve" => {
                let h = booster_starve(g, r, sub)?;
                let count = h.m();
                status_attack(name, g, h, sub, format!("{count} edges starved; "))?
            }
            "cut" => match d {
                Some(d) if d >= 3 => {
                    let bound = partition_attack_bound(d);
                    if bound <= r as f64 {
                        let rep = partition_attack(g, sub)?;
                        let verdict = if rep.success {
                            HamVerdict::KilledVerified
                        } else {
                            HamVerdict::Survived
                        };
                        HamAttack {
                            name,
                            applied: true,
                            delta_h: rep.delta_h,
                            h: rep.h,
                            verdict,
                            detail: format!("bound {bound:.2} within budget; disconnects the host"),
                        }
                    } else {
                        not_applied(name, n, format!("bound {bound:.2} exceeds budget {r}"))
                    }
                }
                _ => not_applied(name, n, "needs a regular host of degree at least three".into()),
            },
            _ => unreachable!("validated above"),
        };
        out.push(report);
    }
    for a in &out {
        debug_assert!(a.delta_h <= r || !a.applied);
    }
    Ok(out)
}

/// Two-sided bounds extracted from one sampled host.
#[derive(Debug, Clone)]
pub struct SampleOutcome {
    pub index: usize,
    pub n: usize,
    /// Least budget at which any attack reported a kill (verified or
    /// presumed), found by binary search under the monotone-strength
    /// assumption; `None` when even the full budget never killed.
    pub attack_upper: Option<usize>,
    /// Least budget at which a verified kill occurred.
    pub attack_upper_verified: Option<usize>,
    /// Largest budget at which the whole suite failed; vacuously 0 when the
    /// host died at budget 0.
    pub empirical_lower: usize,
    /// Best valid deterministic certificate among the matching and
    /// connectivity ones; these guard necessary conditions of
    /// Hamiltonicity, not Hamiltonicity itself.
    pub certified_lower: Option<usize>,
    /// True when the smallest killing budget rests on presumed-dead alone.
    pub presumed_only: bool,
}

/// Aggregated two-sided resilience estimate.
#[derive(Debug, Clone)]
pub struct ResilienceEstimate {
    pub property: &'static str,
    pub epsilon: f64,
    pub samples: Vec<SampleOutcome>,
    /// Most pessimistic (smallest) per-sample values.
    pub attack_upper: Option<usize>,
    pub empirical_lower: Option<usize>,
    pub certified_lower: Option<usize>,
}

fn least_with<F: FnMut(usize) -> Result<bool>>(hi: usize, mut pred: F) -> Result<Option<usize>> {
    if !pred(hi)? {
        return Ok(None);
    }
    let (mut lo, mut hi) = (0usize, hi);
    while lo < hi {
        let mid = lo + (hi - lo) / 2;
        if pred(mid)? {
            hi = mid;
        } else {
            lo = mid + 1;
        }
    }
    Ok(Some(lo))
}

/// Samples hosts from `spec`, binary-searches the least killing budget per
/// sample, and pairs it with the deterministic certificates.
pub fn estimate_resilience(
    spec: &GenSpec,
    params: &ResilienceParams,
    samples: usize,
    seed: u64,
) -> Result<ResilienceEstimate> {
    if samples == 0 {
        return Err(Error::InvalidParameter("need at least one sample".into()));
    }
    let mut records = Vec::with_capacity(samples);
    for index in 0..samples {
        let sample_seed =
            seed ^ stream::stream_id(&stream::indexed_label("resilience/sample", 0, index));
        let host_spec = GenSpec {
            model: spec.model.clone(),
            seed: sample_seed,
        };
        let out = host_spec.generate()?;
        let g = out.graph();
        let n = g.n();
        let dmax = g.max_degree();
        let mut cache: BTreeMap<usize, (bool, bool)> = BTreeMap::new();
        let eval = |r: usize, cache: &mut BTreeMap<usize, (bool, bool)>| -> Result<(bool, bool)> {
            if let Some(&hit) = cache.get(&r) {
                return Ok(hit);
            }
            let suite = ham_attack_suite(g, r, sample_seed ^ r as u64)?;
            let any = suite.iter().any(|a| a.verdict != HamVerdict::Survived);
            let verified = suite
                .iter()
                .any(|a| a.verdict == HamVerdict::KilledVerified);
            cache.insert(r, (any, verified));
            Ok((any, verified))
        };
        let attack_upper = least_with(dmax, |r| Ok(eval(r, &mut cache)?.0))?;
        let attack_upper_verified = least_with(dmax, |r| Ok(eval(r, &mut cache)?.1))?;
        let empirical_lower = attack_upper.map_or(dmax, |a| a.saturating_sub(1));
        let certified_lower = best_necessary_certificate(g, params.epsilon);
        records.push(SampleOutcome {
            index,
            n,
            attack_upper,
            attack_upper_verified,
            empirical_lower,
            certified_lower,
            presumed_only: attack_upper.is_some() && attack_upper != attack_upper_verified,
        });
    }
    let attack_upper = records.iter().filter_map(|s| s.attack_upper).min();
    let empirical_lower = records.iter().map(|s| s.empirical_lower).min();
    let certified_lower = records.iter().filter_map(|s| s.certified_lower).min();
    Ok(ResilienceEstimate {
        property: "hamiltonicity",
        epsilon: params.epsilon,
        samples: records,
        attack_upper,
        empirical_lower,
        certified_lower,
    })
}

/// Best valid certificate value over the matching and connectivity
/// sufficient conditions (necessary conditions of Hamiltonicity).
fn best_necessary_certificate(g: &Graph, eps: f64) -> Option<usize> {
    if g.regular_degree().is_none() || g.n() < 2 {
        return None;
    }
    let lam = crate::spectral::lambda(g, 1e-8).ok()?.lambda;
    let mut best: Option<usize> = None;
    let candidates = [
        matching_certificate(g, lam).ok(),
        conn_certificate(g, lam, ConnKind::Edge, eps).ok(),
        conn_certificate(g, lam, ConnKind::Vertex, eps).ok(),
    ];
    for cert in candidates.into_iter().flatten() {
        if let Some(t) = cert.tolerated() {
            best = Some(best.map_or(t, |b: usize| b.max(t)));
        }
    }
    best
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::random::GenModel;

    #[test]
    fn params_split_and_constants() {
        let p = ResilienceParams::new(0.5, 30).unwrap();
        assert_eq!((p.d1, p.d2), (10, 20));
        assert_eq!(p.d(), 30);
        assert!((p.mu() - 0.125).abs() < 1e-12);
        assert!((p.beta() - 0.00078125).abs() < 1e-12);
        assert!(ResilienceParams::new(0.0, 30).is_err());
        assert!(ResilienceParams::new(1.5, 30).is_err());
        assert!(ResilienceParams::with_split(0.5, 0, 3).is_err());
        let p = ResilienceParams::new(1.0, 31).unwrap();
        assert_eq!(p.d1 + p.d2, 31);
    }

    #[test]
    fn suite_is_a_noop_at_zero_budget() {
        let g = Graph::cycle(18).unwrap();
        let suite = ham_attack_suite(&g, 0, 1).unwrap();
        assert_eq!(suite.len(), 4);
        for a in &suite {
            assert_eq!(a.verdict, HamVerdict::Survived, "{}: {}", a.name, a.detail);
            assert_eq!(a.h.m(), 0);
        }
    }

    #[test]
    fn one_budget_kills_a_bare_cycle() {
        let g = Graph::cycle(20).unwrap();
        let suite = ham_attack_suite(&g, 1, 2).unwrap();
        let min_deg = suite.iter().find(|a| a.name == "min-degree").unwrap();
        assert_eq!(min_deg.verdict, HamVerdict::KilledVerified);
        assert!(min_deg.delta_h <= 1);
    }

    #[test]
    fn full_budget_isolates_a_vertex() {
        let g = crate::random::gen_regular(10, 3, 3).unwrap();
        let suite = ham_attack_suite(&g, 3, 3).unwrap();
        let min_deg = suite.iter().find(|a| a.name == "min-degree").unwrap();
        assert_eq!(min_deg.verdict, HamVerdict::KilledVerified);
    }

    #[test]
    fn structural_death_certificates_fire_above_the_exact_cap() {
        // Disconnected: two vertex-disjoint cycles.
        let mut edges: Vec<(u32, u32)> = Graph::cycle(40).unwrap().edges().collect();
        edges.extend(Graph::cycle(40).unwrap().edges().map(|(u, v)| (u + 40, v + 40)));
        let g = Graph::from_edges(80, &edges).unwrap();
        let s = hamilton_status(&g, 10, 0).unwrap();
        assert!(matches!(s, HamStatus::DeadVerified { ref reason } if reason.contains("disconnected")));

        // Degree death.
        let mut edges: Vec<(u32, u32)> = Graph::cycle(40).unwrap().edges().collect();
        edges.retain(|&(u, v)| !(u == 0 && v == 1 || u == 1 && v == 0));
        let g = Graph::from_edges(40, &edges).unwrap();
        let s = hamilton_status(&g, 10, 0).unwrap();
        assert!(matches!(s, HamStatus::DeadVerified { ref reason } if reason.contains("degree")));

        // Independent majority: a star of paths (spider) has leaves plus
        // middles forming a large independent set.
        let mut edges = Vec::new();
        for i in 0..20u32 {
            edges.push((0, 1 + 2 * i));
            edges.push((1 + 2 * i, 2 + 2 * i));
        }
        let g = Graph::from_edges(41, &edges).unwrap();
        let s = hamilton_status(&g, 10, 0).unwrap();
        assert!(matches!(s, HamStatus::DeadVerified { .. }));
    }

    #[test]
    fn rotation_search_revives_robust_hosts() {
        let g = crate::random::gen_regular(120, 8, 5).unwrap();
        let s = hamilton_status(&g, 50, 9).unwrap();
        let HamStatus::Alive { cycle } = s else {
            panic!("expected a spanning cycle on a random 8-regular host");
        };
        assert!(crate::hamilton::is_hamilton_cycle(&g, &cycle));
    }

    #[test]
    fn enlarging_the_suite_never_raises_the_kill_point() {
        let g = crate::random::gen_regular(40, 4, 13).unwrap();
        let kill_at = |names: &[&'static str]| -> Option<usize> {
            (0..=4).find(|&r| {
                ham_attack_suite_filtered(&g, r, 17, names)
                    .unwrap()
                    .iter()
                    .any(|a| a.verdict != HamVerdict::Survived)
            })
        };
        let only_min = kill_at(&["min-degree"]);
        let all = kill_at(&HAM_ATTACKS);
        assert!(all <= only_min, "all: {all:?}, min-degree only: {only_min:?}");
        assert!(all.is_some());
    }

    #[test]
    fn suite_rejects_bad_budgets_and_names() {
        let g = Graph::cycle(12).unwrap();
        assert!(ham_attack_suite(&g, 3, 0).is_err());
        assert!(ham_attack_suite_filtered(&g, 1, 0, &["meteor"]).is_err());
    }

    #[test]
    fn estimate_sandwich_on_small_regular_hosts() {
        let spec = GenSpec {
            model: GenModel::Regular { n: 24, d: 3 },
            seed: 0,
        };
        let params = ResilienceParams::new(0.5, 3).unwrap_or(
            ResilienceParams::with_split(0.5, 1, 2).unwrap(),
        );
        let est = estimate_resilience(&spec, &params, 3, 21).unwrap();
        assert_eq!(est.samples.len(), 3);
        for s in &est.samples {
            let upper = s.attack_upper.expect("kill must occur by budget d");
            assert!(upper <= 2, "degree-1 vertices at budget 2");
            assert_eq!(s.empirical_lower, upper.saturating_sub(1));
            if let Some(c) = s.certified_lower {
                assert!(c <= s.empirical_lower);
            }
            // Small hosts decide exactly, so kills are verified.
            assert_eq!(s.attack_upper, s.attack_upper_verified);
            assert!(!s.presumed_only);
        }
        assert!(est.attack_upper.unwrap() <= 2);
        assert_eq!(
            est.empirical_lower.unwrap(),
            est.samples.iter().map(|s| s.empirical_lower).min().unwrap()
        );
    }
}
