//! Closed-form heuristics and tail bounds for packing probabilities, and the
//! low-interaction census predicate for nearly-disjoint hypergraphs.
//!
//! Free constants in the asymptotic bounds are always caller-supplied;
//! nothing here silently bakes in a value the underlying statements leave
//! open. Regime flags are advisory proxies for the asymptotic ranges the
//! formulas were derived in, never hard gates.

use crate::error::Error;
use crate::family::Hypergraph;
use crate::formulas;
use crate::params::Params;
use crate::Result;
use std::f64::consts::{E, LN_2};

/// One evaluated formula: identifier, natural-log value, an advisory flag
/// for whether the parameters sit in the formula's intended regime, and the
/// named constants that went into it.
#[derive(Debug, Clone, PartialEq)]
pub struct BoundProfile {
    pub name: &'static str,
    pub log_value: f64,
    pub regime_ok: bool,
    pub constants: Vec<(&'static str, f64)>,
}

/// Fully-independent heuristic for the packing probability:
/// log zeta is approximated by -t^2 k^4 / (4 n^2).
pub fn ideal1_log(p: &Params) -> f64 {
    let (n, k, t) = (p.n() as f64, p.k() as f64, p.t() as f64);
    -(t * t * k.powi(4)) / (4.0 * n * n)
}

/// Distinct-pairs heuristic: the probability that m = t*C(k,2) vertex pairs
/// chosen independently and uniformly are all distinct,
/// sum over i < m of ln(1 - i/C(n,2)). Exactly zero pairs available for
/// the family forces the -inf sentinel instead of an error.
pub fn ideal2_log(p: &Params) -> Result<f64> {
    let pairs = formulas::pair_count(p.n())? as u128;
    let per_block = (p.k() * (p.k() - 1) / 2) as u128;
    let m = p.t() as u128 * per_block;
    if m > pairs {
        return Ok(f64::NEG_INFINITY);
    }
    if m > formulas::ENUMERATION_CAP as u128 {
        return Err(Error::Capacity(format!(
            "distinct-pairs product with m={m} terms is over the cap"
        )));
    }
    let pairs_f = pairs as f64;
    let mut sum = 0.0f64;
    for i in 1..m as u64 {
        sum += (-(i as f64) / pairs_f).ln_1p();
    }
    Ok(sum)
}

/// Independence heuristic for hypergraph matchings: the exact form
/// C(m,2) * ln(1 - l^2/n) and its linearized companion -c*m/2 with
/// c = m*l^2/n.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MidealValue {
    pub exact_log: f64,
    pub approx_log: f64,
    pub c: f64,
}

pub fn mideal_log(n: usize, l: usize, m: u64) -> Result<MidealValue> {
    if l * l >= n {
        return Err(Error::Domain(format!(
            "matching heuristic needs l^2 < n, got l={l}, n={n}"
        )));
    }
    let x = (l * l) as f64 / n as f64;
    let mf = m as f64;
    let c = mf * x;
    Ok(MidealValue {
        exact_log: mf * (mf - 1.0) / 2.0 * (-x).ln_1p(),
        approx_log: -c * mf / 2.0,
        c,
    })
}

/// Density parameter of the packing upper bound: D = t*k^3/n^2.
pub fn tmp2a_d(p: &Params) -> f64 {
    p.t() as f64 * (p.k() as f64).powi(3) / (p.n() as f64 * p.n() as f64)
}

/// Packing probability upper bound in the dense regime, up to the supplied
/// constant beta: -beta*D*t*k for D <= e, -beta*ln(D)*t*k beyond. The
/// branch switch at D = e is part of the bound's statement and is kept as
/// a discontinuity.
pub fn tmp2a_bound_log(p: &Params, beta: f64) -> Result<f64> {
    if beta <= 0.0 {
        return Err(Error::Domain(format!("beta must be positive, got {beta}")));
    }
    let d = tmp2a_d(p);
    let tk = p.t() as f64 * p.k() as f64;
    Ok(if d <= E { -beta * d * tk } else { -beta * d.ln() * tk })
}

/// Matching probability upper bound for drawing m of t edges of an l-graph
/// on n vertices, up to the supplied constant kappa:
/// c = min(m*l^2/n, t*l/n), then -kappa*c*m for c <= e and
/// -kappa*ln(c)*m beyond. Requires t > n/l; below that no bound is claimed.
pub fn tmp_bound_log(n: usize, l: usize, t: u64, m: u64, kappa: f64) -> Result<f64> {
    if kappa <= 0.0 {
        return Err(Error::Domain(format!("kappa must be positive, got {kappa}")));
    }
    if l == 0 || (t as u128) * l as u128 <= n as u128 {
        return Err(Error::Regime(format!(
            "matching bound needs t > n/l, got t={t}, n={n}, l={l}"
        )));
    }
    let nf = n as f64;
    let c = (m as f64 * (l * l) as f64 / nf).min(t as f64 * l as f64 / nf);
    let mf = m as f64;
    Ok(if c <= E { -kappa * c * mf } else { -kappa * c.ln() * mf })
}

/// Additive-deviation binomial tail bound:
/// ln P(X > mu + dev) < -dev^2 / (2(mu + dev/3)).
pub fn chernoff_upper_log(mu: f64, dev: f64) -> Result<f64> {
    if mu < 0.0 || dev <= 0.0 {
        return Err(Error::Domain(format!(
            "tail bound needs mu >= 0 and dev > 0, got mu={mu}, dev={dev}"
        )));
    }
    Ok(-(dev * dev) / (2.0 * (mu + dev / 3.0)))
}

/// Multiplicative binomial tail bound: ln P(X > K*mu) < -K*mu*ln(K/e).
/// Vacuous (nonnegative) for K <= e; informative above.
pub fn chernoff_mult_upper_log(mu: f64, big_k: f64) -> Result<f64> {
    if mu <= 0.0 || big_k <= 0.0 {
        return Err(Error::Domain(format!(
            "tail bound needs mu > 0 and K > 0, got mu={mu}, K={big_k}"
        )));
    }
    Ok(-big_k * mu * (big_k / E).ln())
}

/// Log of the basic dependent-events bound e^(-mu + delta). A nonnegative
/// result means the bound is vacuous at these inputs.
pub fn janson_bound_log(mu: f64, delta_: f64) -> Result<f64> {
    if mu < 0.0 || delta_ < 0.0 {
        return Err(Error::Domain(format!(
            "bound needs mu >= 0 and delta >= 0, got mu={mu}, delta={delta_}"
        )));
    }
    Ok(-mu + delta_)
}

/// Log of the expected number of packing t-families of k-cliques:
/// a packing-probability log upper bound plus t * ln f(k).
pub fn expected_tpackings_log(p: &Params, log_zeta_upper: f64) -> f64 {
    let lf = formulas::ln_f(p.n() as u64, p.k() as u64)
        .expect("parameter invariants guarantee 2 <= k <= n");
    log_zeta_upper + p.t() as f64 * lf
}

/// Result of the low-interaction census on a nearly-disjoint l-graph:
/// how many edges meet fewer than delta*t*l^2/n edges (self included),
/// against the ceiling delta*t + n/l. `holds` is guaranteed for every
/// nearly-disjoint input; a false value indicates an implementation bug.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CspropOutcome {
    pub low_interaction_count: usize,
    pub bound: f64,
    pub holds: bool,
}

pub fn csprop_check(h: &Hypergraph, delta_: f64) -> Result<CspropOutcome> {
    if delta_ <= 0.0 {
        return Err(Error::Domain(format!("delta must be positive, got {delta_}")));
    }
    if !h.family().is_packing() {
        return Err(Error::Precondition(
            "low-interaction census requires a nearly-disjoint hypergraph".into(),
        ));
    }
    let t = h.edge_count();
    let n = h.n() as f64;
    let l = h.edge_size();
    let threshold = delta_ * t as f64 * (l * l) as f64 / n;
    let low_interaction_count = h
        .family()
        .blocks()
        .iter()
        .filter(|e| (h.interaction_count(e) as f64) < threshold)
        .count();
    let bound = delta_ * t as f64 + n / l as f64;
    let holds = (low_interaction_count as f64) < bound;
    debug_assert!(holds, "low-interaction census exceeded its guaranteed ceiling");
    Ok(CspropOutcome {
        low_interaction_count,
        bound,
        holds,
    })
}

/// Advisory proxy for the sparse regime the packing heuristics target:
/// k well below sqrt(n) and t well below n^2/k^3.
fn sparse_regime_ok(p: &Params) -> bool {
    let (n, k, t) = (p.n() as u128, p.k() as u128, p.t() as u128);
    k * k <= n && 10 * t * k * k * k <= n * n
}

/// Evaluates the comparison panel at one parameter point: both packing
/// heuristics, the dense-regime bound with the supplied beta, and the
/// clique-count exponent diagnostic log2 f(k) / log2 n.
pub fn heuristic_panel(p: &Params, beta: f64) -> Result<Vec<BoundProfile>> {
    let sparse_ok = sparse_regime_ok(p);
    let d = tmp2a_d(p);
    let ln_f = formulas::ln_f(p.n() as u64, p.k() as u64)?;
    let exponent = ln_f / LN_2 / (p.n() as f64).log2();
    Ok(vec![
        BoundProfile {
            name: "ideal1",
            log_value: ideal1_log(p),
            regime_ok: sparse_ok,
            constants: vec![],
        },
        BoundProfile {
            name: "ideal2",
            log_value: ideal2_log(p)?,
            regime_ok: sparse_ok,
            constants: vec![],
        },
        BoundProfile {
            name: "tmp2a",
            log_value: tmp2a_bound_log(p, beta)?,
            regime_ok: d >= 0.1,
            constants: vec![("beta", beta), ("D", d)],
        },
        BoundProfile {
            name: "f-exponent",
            log_value: ln_f,
            regime_ok: true,
            constants: vec![("C", exponent)],
        },
    ])
}
