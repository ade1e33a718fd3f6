//! Closed-form probability estimates for degree-constrained random graphs:
//! switching-based edge-probability bounds, the small-subgraph conditioning
//! window, subset-containment bounds, and binomial/martingale tails.
//!
//! Asymptotic slack policy: several source inequalities carry `1 - o(1)` or
//! `+ o(1)` factors that are never quantified. Evaluators return the bare
//! formula value and surface the slack explicitly (`EdgeProbBounds::slack`),
//! so callers choose their own tolerance instead of inheriting a hidden one.

use crate::error::{Error, Result};
use crate::graph::Graph;
use crate::random::DegreeSequence;

/// Lower and upper bounds on the probability that a fixed pair is an edge
/// in a uniform random graph with a prescribed degree sequence.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EdgeProbBounds {
    pub lower: f64,
    pub upper: f64,
    /// The lower bound's numerator went negative and was clamped to zero.
    pub clamped: bool,
    /// Multiplier standing in for the unquantified `1 - o(1)` factor on the
    /// lower bound; reported as 1 so callers apply their own tolerance.
    pub slack: f64,
}

/// Evaluates both switching bounds for the pair `{u, v}`.
pub fn edge_prob_bounds(dseq: &DegreeSequence, u: u32, v: u32) -> Result<EdgeProbBounds> {
    let n = dseq.n();
    if u == v || u as usize >= n || v as usize >= n {
        return Err(Error::InvalidParameter(format!(
            "pair ({u}, {v}) invalid on {n} vertices"
        )));
    }
    let du = dseq.degree(u) as f64;
    let dv = dseq.degree(v) as f64;
    let dbar_n = dseq.total() as f64;
    let dmax = dseq.dmax() as f64;

    let lower_den = dbar_n + du * dv - 2.0 * (du + dv);
    let upper_den = dbar_n + du * dv - (dmax + 1.0) * (du + dv);
    if lower_den <= 0.0 || upper_den <= 0.0 {
        return Err(Error::DegenerateBound(format!(
            "nonpositive denominator: lower {lower_den}, upper {upper_den}"
        )));
    }
    let lower_num = du * dv - du - dv;
    let clamped = lower_num < 0.0;
    let lower = if clamped { 0.0 } else { lower_num / lower_den };
    let upper = du * dv / upper_den;
    debug_assert!(lower <= upper);
    Ok(EdgeProbBounds {
        lower,
        upper,
        clamped,
        slack: 1.0,
    })
}

/// Small-subgraph conditioning quantities for a degree sequence and a fixed
/// excluded graph `g0`, with the resulting probability window.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AnalyticBounds {
    /// `gamma = (1 / sum(d)) * sum_v C(d_v, 2)`.
    pub gamma: f64,
    /// `nu = (1 / sum(d)) * sum_{uv in E(g0)} d_u d_v`.
    pub nu: f64,
    /// `exp(-gamma - gamma^2 - nu)`; the `o(1)` slack in the exponent is not
    /// included.
    pub window: f64,
}

/// Computes `gamma`, `nu`, and the avoidance-probability window for the
/// event that a uniform sample with degrees `dseq` avoids every edge of
/// `g0`. Requires `max degree of g0 <= 64`.
pub fn mckay_quantities(dseq: &DegreeSequence, g0: &Graph) -> Result<AnalyticBounds> {
    if g0.n() != dseq.n() {
        return Err(Error::SizeMismatch(g0.n(), dseq.n()));
    }
    if g0.max_degree() > 64 {
        return Err(Error::InvalidParameter(format!(
            "excluded graph too dense: max degree {} > 64",
            g0.max_degree()
        )));
    }
    let dbar_n = dseq.total() as f64;
    if dbar_n == 0.0 {
        return Err(Error::InvalidParameter("empty degree sum".into()));
    }
    let gamma = dseq
        .degrees()
        .iter()
        .map(|&d| (d * d.saturating_sub(1)) as f64)
        .sum::<f64>()
        / (2.0 * dbar_n);
    let nu = g0
        .edges()
        .map(|(u, v)| (dseq.degree(u) * dseq.degree(v)) as f64)
        .sum::<f64>()
        / dbar_n;
    Ok(AnalyticBounds {
        gamma,
        nu,
        window: (-gamma - gamma * gamma - nu).exp(),
    })
}

/// Probability bound for a fixed set of `m` pairs all appearing in a random
/// `d`-regular graph.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ContainmentBound {
    /// `(C d / n)^m`.
    pub value: f64,
    /// Whether `m <= (1 - eps) n d / 2`, the regime the bound was stated for.
    pub valid_regime: bool,
    /// `C d >= n` makes the base at least one and the bound useless.
    pub vacuous: bool,
}

/// Evaluates `(c * d / n)^m` together with its regime flags. The constant
/// `c` is a free parameter (calibrated empirically by consumers) and `eps`
/// declares the regime boundary `m <= (1 - eps) n d / 2`.
pub fn containment_bound(n: usize, d: usize, m: usize, c: f64, eps: f64) -> Result<ContainmentBound> {
    if n == 0 || !(c > 0.0) || !c.is_finite() || !(0.0..1.0).contains(&eps) {
        return Err(Error::InvalidParameter(format!(
            "containment bound needs n >= 1, c > 0, eps in [0, 1): n = {n}, c = {c}, eps = {eps}"
        )));
    }
    let base = c * d as f64 / n as f64;
    Ok(ContainmentBound {
        value: base.powf(m as f64),
        valid_regime: m as f64 <= (1.0 - eps) * n as f64 * d as f64 / 2.0,
        vacuous: base >= 1.0,
    })
}

/// Which binomial tail to bound.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Tail {
    Upper,
    Lower,
    TwoSided,
}

/// Multiplicative Chernoff bounds for `X ~ Bin(n, p)` and deviation `delta`:
/// upper tail `exp(-np((1+d)ln(1+d) - d))`, lower tail `exp(-d^2 np / 2)`,
/// and twice the upper-tail bound for the two-sided event. Values may exceed
/// one, in which case the bound is simply vacuous.
pub fn chernoff_tail(n: usize, p: f64, delta: f64, tail: Tail) -> Result<f64> {
    if !(0.0..=1.0).contains(&p) || !(delta > 0.0) || !delta.is_finite() {
        return Err(Error::InvalidParameter(format!(
            "chernoff tail needs p in [0, 1] and delta > 0: p = {p}, delta = {delta}"
        )));
    }
    let np = n as f64 * p;
    let upper = (-np * ((1.0 + delta) * (1.0 + delta).ln() - delta)).exp();
    Ok(match tail {
        Tail::Upper => upper,
        Tail::Lower => (-delta * delta * np / 2.0).exp(),
        Tail::TwoSided => 2.0 * upper,
    })
}

/// Martingale (exposure-by-vertex) tail for an edge-Lipschitz statistic `X`
/// on a random graph with degree sequence `dseq`: evaluates
/// `exp(-eps^2 E[X]^2 / (sum(d) c^2) + gamma (gamma + 1))` where `c` is the
/// per-edge Lipschitz constant. The `o(1)` term in the exponent is dropped.
pub fn azuma_tail(dseq: &DegreeSequence, expectation: f64, eps: f64, c: f64) -> Result<f64> {
    if !(c > 0.0) || !(eps >= 0.0) || !c.is_finite() || !eps.is_finite() {
        return Err(Error::InvalidParameter(format!(
            "martingale tail needs c > 0 and eps >= 0: c = {c}, eps = {eps}"
        )));
    }
    let dbar_n = dseq.total() as f64;
    if dbar_n == 0.0 {
        return Err(Error::InvalidParameter("empty degree sum".into()));
    }
    let gamma = dseq
        .degrees()
        .iter()
        .map(|&d| (d * d.saturating_sub(1)) as f64)
        .sum::<f64>()
        / (2.0 * dbar_n);
    Ok((-eps * eps * expectation * expectation / (dbar_n * c * c) + gamma * (gamma + 1.0)).exp())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn all_k(n: usize, k: usize) -> DegreeSequence {
        DegreeSequence::new(vec![k; n]).unwrap()
    }

    #[test]
    fn cubic_sequence_bounds_bracket_the_symmetric_value() {
        let dseq = all_k(100, 3);
        let b = edge_prob_bounds(&dseq, 0, 1).unwrap();
        assert!((b.lower - 3.0 / 297.0).abs() < 1e-15);
        assert!((b.upper - 9.0 / 285.0).abs() < 1e-15);
        assert!(!b.clamped);
        // Symmetry gives the exact pair probability d/(n-1).
        let exact = 3.0 / 99.0;
        assert!(b.lower <= exact && exact <= b.upper);
    }

    #[test]
    fn degree_one_pairs_clamp_to_zero() {
        let dseq = all_k(10, 1);
        let b = edge_prob_bounds(&dseq, 0, 1).unwrap();
        assert_eq!(b.lower, 0.0);
        assert!(b.clamped);
        assert!((b.upper - 1.0 / 7.0).abs() < 1e-15);
    }

    #[test]
    fn tiny_sequences_are_degenerate() {
        let dseq = all_k(2, 1);
        assert!(edge_prob_bounds(&dseq, 0, 1).is_err());
        assert!(edge_prob_bounds(&all_k(10, 1), 3, 3).is_err());
    }

    #[test]
    fn conditioning_window_on_cubic_sequence() {
        let dseq = all_k(30, 3);
        let empty = mckay_quantities(&dseq, &Graph::empty(30)).unwrap();
        assert!((empty.gamma - 1.0).abs() < 1e-15);
        assert_eq!(empty.nu, 0.0);
        assert!((empty.window - (-2.0f64).exp()).abs() < 1e-15);

        let matching_edges: Vec<(u32, u32)> = (0..15).map(|i| (2 * i, 2 * i + 1)).collect();
        let pm = Graph::from_edges(30, &matching_edges).unwrap();
        let b = mckay_quantities(&dseq, &pm).unwrap();
        assert!((b.nu - 1.5).abs() < 1e-15);
        assert!((b.window - (-3.5f64).exp()).abs() < 1e-15);
    }

    #[test]
    fn conditioning_rejects_dense_excluded_graphs() {
        let n = 66;
        let star: Vec<(u32, u32)> = (1..n as u32).map(|v| (0, v)).collect();
        let g0 = Graph::from_edges(n, &star).unwrap();
        assert!(mckay_quantities(&all_k(n, 1), &g0).is_err());
        assert!(mckay_quantities(&all_k(10, 1), &Graph::empty(12)).is_err());
    }

    #[test]
    fn containment_bound_values_and_flags() {
        let b = containment_bound(1000, 6, 10, 2.0, 0.5).unwrap();
        assert!((b.value / 6.19e-20 - 1.0).abs() < 1e-2, "value {}", b.value);
        assert!(b.valid_regime);
        assert!(!b.vacuous);

        assert_eq!(containment_bound(1000, 6, 0, 2.0, 0.5).unwrap().value, 1.0);

        let v = containment_bound(10, 6, 3, 2.0, 0.5).unwrap();
        assert!(v.vacuous);
        assert!(v.value >= 1.0);

        let out = containment_bound(1000, 6, 2_000_000, 2.0, 0.5).unwrap();
        assert!(!out.valid_regime);
    }

    #[test]
    fn chernoff_tail_values() {
        let lower = chernoff_tail(100, 0.5, 0.2, Tail::Lower).unwrap();
        assert!((lower - (-1.0f64).exp()).abs() < 1e-12);

        let upper = chernoff_tail(100, 0.5, 0.2, Tail::Upper).unwrap();
        let expected = (-50.0 * (1.2f64 * 1.2f64.ln() - 0.2)).exp();
        assert!((upper - expected).abs() < 1e-12);

        let two = chernoff_tail(100, 0.5, 0.2, Tail::TwoSided).unwrap();
        assert_eq!(two, 2.0 * upper);
        assert!(two >= upper && two >= lower);

        // Vanishing deviation makes every bound vacuous.
        assert!(chernoff_tail(100, 0.5, 1e-12, Tail::Upper).unwrap() > 0.999_999);
        assert!(chernoff_tail(100, 0.5, 0.0, Tail::Upper).is_err());
    }

    #[test]
    fn martingale_tail_value() {
        let dseq = all_k(30, 3);
        // gamma = 1, sum(d) = 90: exponent = -0.25 * 225 / 360 + 2.
        let v = azuma_tail(&dseq, 15.0, 0.5, 2.0).unwrap();
        assert!((v / 6.3203 - 1.0).abs() < 1e-3, "value {v}");
        assert!(azuma_tail(&dseq, 15.0, 0.5, 0.0).is_err());
    }
}
