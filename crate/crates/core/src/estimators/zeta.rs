//! Estimators for the probability that t independent uniform k-subsets of
//! [n] are pairwise nearly disjoint.

use crate::error::Error;
use crate::estimators::{EstimateReport, Method};
use crate::family::{complete_kfamily, PairCover};
use crate::formulas::{self, ENUMERATION_CAP};
use crate::params::Params;
use crate::rng::{stream_rng, SubsetSampler};
use crate::bitset::VertexSet;
use crate::Result;
use rand::Rng;

/// Exact packing probability by enumeration.
///
/// Ordered draws with a repeated block are never a packing for k >= 2, so
/// the count reduces to unordered t-subsets of distinct blocks times t!.
/// Feasibility is guarded by the cheaper of the two enumeration measures,
/// ordered tuples N^t or subset search C(N,t)*t, against the crate cap.
pub fn zeta_exact(p: &Params) -> Result<EstimateReport> {
    let (n, k, t) = (p.n() as u64, p.k() as u64, p.t());
    if t == 1 {
        return Ok(EstimateReport::exact(0.0));
    }
    let block_count = formulas::binom_exact(n, k)
        .filter(|&c| c <= ENUMERATION_CAP)
        .ok_or_else(|| {
            Error::Capacity(format!("C({n},{k}) blocks exceed the enumeration cap"))
        })?;
    if t > block_count {
        // More draws than distinct blocks forces a repeat, so the
        // probability is exactly zero.
        return Ok(EstimateReport::exact(f64::NEG_INFINITY));
    }

    let ordered = checked_pow_u128(block_count as u128, t);
    let subset_work = formulas::binom_exact(block_count, t).and_then(|c| c.checked_mul(t));
    let ordered_ok = ordered.is_some_and(|o| o <= ENUMERATION_CAP as u128);
    let subset_ok = subset_work.is_some_and(|w| w <= ENUMERATION_CAP);
    if !ordered_ok && !subset_ok {
        return Err(Error::Capacity(format!(
            "enumerating ({n},{k},{t}) needs C({block_count},{t})*{t} subset steps, over the cap"
        )));
    }

    let blocks = complete_kfamily(p.n(), p.k())?;
    let mut count = 0u64;
    let mut chosen: Vec<usize> = Vec::with_capacity(t as usize);
    count_packings(blocks.blocks(), &mut chosen, 0, t as usize, &mut count);

    if count == 0 {
        return Ok(EstimateReport::exact(f64::NEG_INFINITY));
    }
    let log_p = match (factorial_u128(t), ordered) {
        (Some(tf), Some(den)) => {
            let num = count as u128 * tf;
            if num <= EXACT_F64 && den <= EXACT_F64 {
                (num as f64 / den as f64).ln()
            } else {
                log_ratio(count, t, block_count)
            }
        }
        _ => log_ratio(count, t, block_count),
    };
    Ok(EstimateReport::exact(log_p))
}

const EXACT_F64: u128 = 1 << 53;

fn log_ratio(count: u64, t: u64, block_count: u64) -> f64 {
    (count as f64).ln() + formulas::log_factorial(t) - t as f64 * (block_count as f64).ln()
}

fn checked_pow_u128(base: u128, exp: u64) -> Option<u128> {
    let mut acc: u128 = 1;
    for _ in 0..exp {
        acc = acc.checked_mul(base)?;
    }
    Some(acc)
}

fn factorial_u128(t: u64) -> Option<u128> {
    if t > 33 {
        return None;
    }
    let mut acc: u128 = 1;
    for i in 2..=t as u128 {
        acc *= i;
    }
    Some(acc)
}

fn count_packings(
    blocks: &[VertexSet],
    chosen: &mut Vec<usize>,
    start: usize,
    t: usize,
    count: &mut u64,
) {
    let needed = t - chosen.len();
    for j in start..=blocks.len() - needed {
        let ok = chosen
            .iter()
            .all(|&i| blocks[i].intersection_size(&blocks[j]) <= 1);
        if !ok {
            continue;
        }
        if needed == 1 {
            *count += 1;
        } else {
            chosen.push(j);
            count_packings(blocks, chosen, j + 1, t, count);
            chosen.pop();
        }
    }
}

/// Direct Monte Carlo: the success fraction of the packing event over
/// independent families. Trial i draws from the RNG stream (seed, i), so
/// the result does not depend on execution order.
pub fn zeta_mc_direct(p: &Params, trials: u64, seed: u64) -> Result<EstimateReport> {
    if trials < 1 {
        return Err(Error::Domain("trials must be at least 1".into()));
    }
    let (n, k, t) = (p.n(), p.k(), p.t());
    let mut sampler = SubsetSampler::new(n);
    let mut cover = PairCover::new(n);
    let mut block = VertexSet::empty(n);
    let mut scratch = Vec::with_capacity(k);
    let mut successes = 0u64;
    for trial in 0..trials {
        let mut rng = stream_rng(seed, trial);
        cover.clear();
        let mut ok = true;
        for _ in 0..t {
            sampler.draw(&mut rng, k, &mut scratch);
            fill_block(&mut block, &scratch);
            if cover.compatible(&block) {
                cover.accept(&block);
            } else {
                ok = false;
                break;
            }
        }
        if ok {
            successes += 1;
        }
    }
    Ok(EstimateReport::direct(successes, trials, seed))
}

/// Sequential importance sampling for packing probabilities far below the
/// reach of direct Monte Carlo.
///
/// Each particle grows a packing one block at a time. At each step it draws
/// `probes` fresh uniform k-sets, records the compatible fraction as the
/// step weight, and extends by a uniformly chosen compatible probe
/// (reservoir selection, single pass). A step with no compatible probe
/// kills the particle. The product of step weights is an unbiased estimate
/// of the packing probability for any probes >= 1; the returned dispersion
/// is the leave-one-out jackknife standard error of the log estimate.
pub fn zeta_sis(p: &Params, particles: u64, probes: u64, seed: u64) -> Result<EstimateReport> {
    if particles < 1 {
        return Err(Error::Domain("particles must be at least 1".into()));
    }
    if probes < 1 {
        return Err(Error::Domain("probes must be at least 1".into()));
    }
    let (n, k, t) = (p.n(), p.k(), p.t());
    let mut sampler = SubsetSampler::new(n);
    let mut cover = PairCover::new(n);
    let mut candidate = VertexSet::empty(n);
    let mut kept = VertexSet::empty(n);
    let mut scratch = Vec::with_capacity(k);
    let mut log_weights = Vec::with_capacity(particles as usize);

    for particle in 0..particles {
        let mut rng = stream_rng(seed, particle);
        cover.clear();
        // The first block meets no constraint: its acceptance fraction is
        // exactly one, so it is drawn directly.
        sampler.draw(&mut rng, k, &mut scratch);
        fill_block(&mut candidate, &scratch);
        cover.accept(&candidate);
        let mut log_w = 0.0f64;
        for _ in 1..t {
            let mut compatible = 0u64;
            for _ in 0..probes {
                sampler.draw(&mut rng, k, &mut scratch);
                fill_block(&mut candidate, &scratch);
                if cover.compatible(&candidate) {
                    compatible += 1;
                    if rng.random_range(0..compatible) == 0 {
                        kept.clone_from_set(&candidate);
                    }
                }
            }
            if compatible == 0 {
                log_w = f64::NEG_INFINITY;
                break;
            }
            log_w += (compatible as f64 / probes as f64).ln();
            cover.accept(&kept);
        }
        log_weights.push(log_w);
    }

    let total = logsumexp(&log_weights);
    let alive = log_weights
        .iter()
        .filter(|w| **w > f64::NEG_INFINITY)
        .count();
    if alive == 0 {
        return Ok(EstimateReport {
            method: Method::Sis,
            log_p: f64::NEG_INFINITY,
            se_log: f64::NAN,
            trials: particles,
            successes: None,
            seed: Some(seed),
            degenerate: true,
        });
    }
    let log_p = total - (particles as f64).ln();
    let se_log = if particles < 2 || alive < 2 {
        f64::INFINITY
    } else {
        jackknife_se(&log_weights, total)
    };
    Ok(EstimateReport {
        method: Method::Sis,
        log_p,
        se_log,
        trials: particles,
        successes: None,
        seed: Some(seed),
        degenerate: false,
    })
}

fn fill_block(block: &mut VertexSet, indices: &[usize]) {
    block.clear();
    for &v in indices {
        block.insert(v).expect("sampler yields in-range indices");
    }
}

fn logsumexp(xs: &[f64]) -> f64 {
    let m = xs.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    if m == f64::NEG_INFINITY {
        return f64::NEG_INFINITY;
    }
    m + xs.iter().map(|x| (x - m).exp()).sum::<f64>().ln()
}

/// ln(e^a - e^b) for a >= b.
fn log_diff_exp(a: f64, b: f64) -> f64 {
    if b == f64::NEG_INFINITY {
        return a;
    }
    a + (-((b - a).exp())).ln_1p()
}

/// Leave-one-out jackknife standard error of the log-mean-weight estimate.
fn jackknife_se(log_weights: &[f64], total: f64) -> f64 {
    let p = log_weights.len() as f64;
    let loo: Vec<f64> = log_weights
        .iter()
        .map(|&w| log_diff_exp(total, w) - (p - 1.0).ln())
        .collect();
    let mean = loo.iter().sum::<f64>() / p;
    let ss = loo.iter().map(|x| (x - mean) * (x - mean)).sum::<f64>();
    ((p - 1.0) / p * ss).sqrt()
}
