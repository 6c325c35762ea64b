//! Exact oracles and seeded Monte Carlo estimators for the packing
//! probability of random k-set families and the matching probability of
//! hypergraph edge draws, plus diagnostic samplers built on the same
//! primitives.
//!
//! Every estimator is a pure function of its parameters and a seed: runs are
//! reproducible and independent of thread scheduling, because each trial or
//! particle derives its own RNG stream from (seed, index).

mod survivor;
mod two_stage;
mod xi;
mod zeta;

pub use survivor::{survivor_trace, SurvivorTrace, TraceStep};
pub use two_stage::{two_stage_sample, TwoStageSample};
pub use xi::{xi_exact, xi_mc};
pub use zeta::{zeta_exact, zeta_mc_direct, zeta_sis};

use crate::bitset::VertexSet;
use crate::error::Error;
use crate::family::SetFamily;
use crate::params::Params;
use crate::rng::{stream_rng, SubsetSampler};
use crate::Result;
use std::fmt;

/// How an estimate was produced.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Method {
    Exact,
    Direct,
    Sis,
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let name = match self {
            Method::Exact => "exact",
            Method::Direct => "direct",
            Method::Sis => "sis",
        };
        f.write_str(name)
    }
}

/// Log-domain probability estimate with its dispersion and provenance.
///
/// `degenerate` distinguishes a zero estimate (no success observed, or an
/// exactly-zero probability) from a finite measurement; degenerate reports
/// carry `log_p` = -inf. Exact reports have `se_log` = 0 and no trial count;
/// direct Monte Carlo reports satisfy log_p = ln(successes/trials).
#[derive(Debug, Clone, PartialEq)]
pub struct EstimateReport {
    pub method: Method,
    pub log_p: f64,
    pub se_log: f64,
    pub trials: u64,
    pub successes: Option<u64>,
    pub seed: Option<u64>,
    pub degenerate: bool,
}

impl EstimateReport {
    /// Report for an exactly computed probability given as a natural log.
    pub(crate) fn exact(log_p: f64) -> Self {
        EstimateReport {
            method: Method::Exact,
            log_p,
            se_log: 0.0,
            trials: 0,
            successes: None,
            seed: None,
            degenerate: log_p == f64::NEG_INFINITY,
        }
    }

    /// Report for a success-fraction estimate. The log-scale standard error
    /// comes from the delta method: se(ln p) = sqrt((1-p)/(p*trials)).
    pub(crate) fn direct(successes: u64, trials: u64, seed: u64) -> Self {
        if successes == 0 {
            return EstimateReport {
                method: Method::Direct,
                log_p: f64::NEG_INFINITY,
                se_log: f64::NAN,
                trials,
                successes: Some(0),
                seed: Some(seed),
                degenerate: true,
            };
        }
        let p_hat = successes as f64 / trials as f64;
        EstimateReport {
            method: Method::Direct,
            log_p: p_hat.ln(),
            se_log: ((1.0 - p_hat) / successes as f64).sqrt(),
            trials,
            successes: Some(successes),
            seed: Some(seed),
            degenerate: false,
        }
    }
}

/// Draws t independent uniform k-subsets of [n].
pub fn sample_kset_family(p: &Params, seed: u64) -> SetFamily {
    let mut rng = stream_rng(seed, 0);
    let mut sampler = SubsetSampler::new(p.n());
    let mut scratch = Vec::with_capacity(p.k());
    let mut family = SetFamily::empty(p.n());
    for _ in 0..p.t() {
        sampler.draw(&mut rng, p.k(), &mut scratch);
        let block = VertexSet::from_indices(p.n(), &scratch)
            .expect("sampler yields distinct in-range indices");
        family.push(block).expect("ground sets match");
    }
    family
}

/// Empirical covariance of the degrees of vertices 0 and 1 in a random
/// k-set family, paired with the closed-form value
/// t * (k(k-1)/(n(n-1)) - k^2/n^2), which is never positive.
pub fn degree_covariance(p: &Params, trials: u64, seed: u64) -> Result<(f64, f64)> {
    if trials < 2 {
        return Err(Error::Domain("covariance needs at least 2 trials".into()));
    }
    let (n, k, t) = (p.n(), p.k(), p.t());
    let mut sampler = SubsetSampler::new(n);
    let mut scratch = Vec::with_capacity(k);
    let (mut s0, mut s1, mut s01) = (0u64, 0u64, 0u64);
    for trial in 0..trials {
        let mut rng = stream_rng(seed, trial);
        let (mut d0, mut d1) = (0u64, 0u64);
        for _ in 0..t {
            sampler.draw(&mut rng, k, &mut scratch);
            for &v in &scratch {
                if v == 0 {
                    d0 += 1;
                } else if v == 1 {
                    d1 += 1;
                }
            }
        }
        s0 += d0;
        s1 += d1;
        s01 += d0 * d1;
    }
    let tf = trials as f64;
    let empirical = (s01 as f64 - s0 as f64 * s1 as f64 / tf) / (tf - 1.0);
    let (nf, kf) = (n as f64, k as f64);
    let analytic =
        t as f64 * (kf * (kf - 1.0) / (nf * (nf - 1.0)) - kf * kf / (nf * nf));
    Ok((empirical, analytic))
}
