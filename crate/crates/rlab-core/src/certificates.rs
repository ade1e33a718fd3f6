//! Deterministic resilience certificates: spectral sufficient conditions
//! under which a regular graph keeps connectivity or a perfect matching
//! after any bounded-degree edge deletion.
//!
//! A certificate never trusts a hypothesis it did not check: each one
//! carries the full hypothesis record, `valid` is set only when every
//! hypothesis was verified exactly on the instance, and hypotheses that are
//! true-looking but uncheckable at the instance size mark the certificate
//! `conditional` instead. The eigenvalue bound `lambda` is an input —
//! callers obtain it from the eigensolver — and is recorded verbatim.

use crate::error::{Error, Result};
use crate::graph::{density_rho, DensityMode, EXACT_TAU_CAP};
use crate::graph::Graph;

/// Which property a certificate guarantees resilience of.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CertKind {
    EdgeConnectivity,
    VertexConnectivity,
    PerfectMatching,
}

/// Connectivity flavor selector for [`conn_certificate`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ConnKind {
    Edge,
    Vertex,
}

/// One recorded hypothesis of a certificate.
#[derive(Debug, Clone)]
pub struct Hypothesis {
    pub name: &'static str,
    /// Whether the hypothesis was confirmed. `None` means it could not be
    /// checked at this instance size (certificate becomes conditional).
    pub holds: Option<bool>,
    pub detail: String,
}

/// A sufficient-condition certificate for one property.
#[derive(Debug, Clone)]
pub struct Certificate {
    pub property: CertKind,
    /// Eigenvalue bound supplied by the caller.
    pub lambda: f64,
    /// Floor of the guaranteed survivable per-vertex deletion budget; may
    /// be negative when the formula is vacuous.
    pub tolerated_delta: i64,
    pub hypotheses: Vec<Hypothesis>,
    /// Every hypothesis verified and the budget nonnegative.
    pub valid: bool,
    /// Some hypothesis is plausible but was not verifiable exactly.
    pub conditional: bool,
    /// Why the certificate is not valid (empty when valid).
    pub reason: String,
}

impl Certificate {
    /// The usable deletion budget, present only for valid certificates.
    pub fn tolerated(&self) -> Option<usize> {
        (self.valid && self.tolerated_delta >= 0).then_some(self.tolerated_delta as usize)
    }
}

/// Largest eigenvalue bound under which the edge-connectivity certificate
/// applies: `d (n - 4) / (3n - 4)`.
pub fn edge_lambda_threshold(d: usize, n: usize) -> f64 {
    d as f64 * (n as f64 - 4.0) / (3.0 * n as f64 - 4.0)
}

/// Edge-connectivity budget before flooring:
/// `(d - lambda)/2 * (1 - 4/n)`. Any deletion with maximum degree within
/// this keeps the remainder `(d - delta)`-edge-connected.
pub fn edge_tolerated(d: usize, n: usize, lambda: f64) -> f64 {
    (d as f64 - lambda) / 2.0 * (1.0 - 4.0 / n as f64)
}

/// Vertex-connectivity budget before flooring: `(d - lambda)/2 - eps`.
pub fn vertex_tolerated(d: usize, lambda: f64, eps: f64) -> f64 {
    (d as f64 - lambda) / 2.0 - eps
}

/// Perfect-matching budget before flooring:
/// `d/2 - 10 sqrt(d ln d) - 2 lambda`.
pub fn matching_tolerated(d: usize, lambda: f64) -> f64 {
    let df = d as f64;
    df / 2.0 - 10.0 * (df * df.ln()).sqrt() - 2.0 * lambda
}

/// Degree below which the vertex-connectivity statement is only known to
/// hold asymptotically; smaller hosts get conditional certificates.
pub const VERTEX_DEGREE_THRESHOLD: usize = 50;

fn require_regular(g: &Graph) -> Result<usize> {
    g.regular_degree().ok_or(Error::NotRegular {
        min: g.min_degree(),
        max: g.max_degree(),
    })
}

fn validate_lambda(lambda: f64, d: usize) -> Result<()> {
    if !lambda.is_finite() || lambda < 0.0 || lambda > d as f64 {
        return Err(Error::InvalidParameter(format!(
            "eigenvalue bound {lambda} out of range [0, {d}]"
        )));
    }
    Ok(())
}

fn seal(mut cert: Certificate) -> Certificate {
    let refuted: Vec<&Hypothesis> = cert
        .hypotheses
        .iter()
        .filter(|h| h.holds == Some(false))
        .collect();
    let unchecked: Vec<&Hypothesis> =
        cert.hypotheses.iter().filter(|h| h.holds.is_none()).collect();
    if let Some(h) = refuted.first() {
        cert.valid = false;
        cert.conditional = false;
        cert.reason = format!("hypothesis failed: {} ({})", h.name, h.detail);
    } else if cert.tolerated_delta < 0 {
        cert.valid = false;
        cert.conditional = false;
        cert.reason = format!("vacuous budget: tolerated {} < 0", cert.tolerated_delta);
    } else if let Some(h) = unchecked.first() {
        cert.valid = false;
        cert.conditional = true;
        cert.reason = format!("hypothesis unverifiable here: {} ({})", h.name, h.detail);
    } else {
        cert.valid = true;
        cert.conditional = false;
        cert.reason = String::new();
    }
    cert
}

/// Builds a connectivity certificate from a caller-supplied eigenvalue
/// bound. Edge kind: when `lambda <= d(n-4)/(3n-4)`, every deletion `H`
/// with max degree at most `(d - lambda)/2 (1 - 4/n)` leaves a
/// `(d - delta(H))`-edge-connected graph. Vertex kind: additionally needs
/// the local density `rho(G, d + d^2/eps) <= 1` (verified exactly only for
/// small thresholds) and a large degree; the budget is
/// `(d - lambda)/2 - eps`. `eps` is ignored by the edge kind.
pub fn conn_certificate(g: &Graph, lambda: f64, kind: ConnKind, eps: f64) -> Result<Certificate> {
    let d = require_regular(g)?;
    validate_lambda(lambda, d)?;
    let n = g.n();
    match kind {
        ConnKind::Edge => {
            let threshold = edge_lambda_threshold(d, n);
            let budget = edge_tolerated(d, n, lambda);
            let cert = Certificate {
                property: CertKind::EdgeConnectivity,
                lambda,
                tolerated_delta: budget.floor() as i64,
                hypotheses: vec![Hypothesis {
                    name: "eigenvalue below edge threshold",
                    holds: Some(lambda <= threshold),
                    detail: format!("lambda = {lambda:.4} vs d(n-4)/(3n-4) = {threshold:.4}"),
                }],
                valid: false,
                conditional: false,
                reason: String::new(),
            };
            Ok(seal(cert))
        }
        ConnKind::Vertex => {
            if !(eps > 0.0) || !eps.is_finite() {
                return Err(Error::InvalidParameter(format!(
                    "vertex certificate needs eps > 0, got {eps}"
                )));
            }
            let tau_f = d as f64 + (d * d) as f64 / eps;
            let tau = (tau_f.floor() as usize).min(n.max(1));
            let density = if tau <= EXACT_TAU_CAP {
                let rep = density_rho(g, tau, DensityMode::Exact)?;
                Hypothesis {
                    name: "local density at most one",
                    holds: Some(rep.rho <= 1.0 + 1e-9),
                    detail: format!(
                        "exact rho(G, {tau}) = {:.4}, witness size {}",
                        rep.rho,
                        rep.witness.len()
                    ),
                }
            } else {
                let rep = density_rho(g, tau, DensityMode::Heuristic)?;
                if rep.rho > 1.0 + 1e-9 {
                    Hypothesis {
                        name: "local density at most one",
                        holds: Some(false),
                        detail: format!(
                            "heuristic found rho >= {:.4} on {} vertices",
                            rep.rho,
                            rep.witness.len()
                        ),
                    }
                } else {
                    Hypothesis {
                        name: "local density at most one",
                        holds: None,
                        detail: format!(
                            "threshold {tau} exceeds the exact search cap {EXACT_TAU_CAP}"
                        ),
                    }
                }
            };
            let degree = Hypothesis {
                name: "degree above the asymptotic threshold",
                holds: if d >= VERTEX_DEGREE_THRESHOLD {
                    Some(true)
                } else {
                    None
                },
                detail: format!("d = {d} vs d0 = {VERTEX_DEGREE_THRESHOLD}"),
            };
            let budget = vertex_tolerated(d, lambda, eps);
            let cert = Certificate {
                property: CertKind::VertexConnectivity,
                lambda,
                tolerated_delta: budget.floor() as i64,
                hypotheses: vec![density, degree],
                valid: false,
                conditional: false,
                reason: String::new(),
            };
            Ok(seal(cert))
        }
    }
}

/// Builds a perfect-matching certificate: every deletion with max degree at
/// most `d/2 - 10 sqrt(d ln d) - 2 lambda` leaves a perfect matching
/// (requires an even vertex count).
pub fn matching_certificate(g: &Graph, lambda: f64) -> Result<Certificate> {
    let d = require_regular(g)?;
    validate_lambda(lambda, d)?;
    let budget = matching_tolerated(d, lambda);
    let cert = Certificate {
        property: CertKind::PerfectMatching,
        lambda,
        tolerated_delta: budget.floor() as i64,
        hypotheses: vec![Hypothesis {
            name: "even vertex count",
            holds: Some(g.n() % 2 == 0),
            detail: format!("n = {}", g.n()),
        }],
        valid: false,
        conditional: false,
        reason: String::new(),
    };
    Ok(seal(cert))
}
