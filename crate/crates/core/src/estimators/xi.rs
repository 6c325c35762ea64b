//! Estimators for the probability that randomly drawn hypergraph edges are
//! pairwise disjoint.

use crate::bitset::VertexSet;
use crate::error::Error;
use crate::estimators::EstimateReport;
use crate::family::Hypergraph;
use crate::formulas::{self, ENUMERATION_CAP};
use crate::rng::{stream_rng, SubsetSampler};
use crate::Result;
use rand::Rng;

/// Exact matching probability of a uniform m-subset of the edge set,
/// computed by enumerating disjoint m-subsets.
pub fn xi_exact(h: &Hypergraph, m: usize) -> Result<EstimateReport> {
    let t = h.edge_count();
    if m > t {
        return Err(Error::Domain(format!(
            "cannot draw an {m}-subset of {t} edges"
        )));
    }
    if m == 0 {
        return Ok(EstimateReport::exact(0.0));
    }
    let total = formulas::binom_exact(t as u64, m as u64)
        .filter(|&c| c <= ENUMERATION_CAP)
        .ok_or_else(|| {
            Error::Capacity(format!("C({t},{m}) subsets exceed the enumeration cap"))
        })?;
    let mut count = 0u64;
    let mut used = VertexSet::empty(h.n());
    count_matchings(h, &mut used, 0, m, &mut count);
    if count == 0 {
        return Ok(EstimateReport::exact(f64::NEG_INFINITY));
    }
    Ok(EstimateReport::exact((count as f64 / total as f64).ln()))
}

fn count_matchings(h: &Hypergraph, used: &mut VertexSet, start: usize, needed: usize, count: &mut u64) {
    let t = h.edge_count();
    for j in start..=t - needed {
        let block = h.block(j);
        if !block.is_disjoint(used) {
            continue;
        }
        if needed == 1 {
            *count += 1;
        } else {
            used.union_with(block);
            count_matchings(h, used, j + 1, needed - 1, count);
            used.subtract(block);
        }
    }
}

/// Monte Carlo matching probability. With `independent` false the trial
/// draws a uniform m-subset of distinct edges; with it true the trial draws
/// m edges independently with replacement, so a repeated edge fails the
/// matching test like any other self-intersection.
pub fn xi_mc(
    h: &Hypergraph,
    m: usize,
    trials: u64,
    seed: u64,
    independent: bool,
) -> Result<EstimateReport> {
    if trials < 1 {
        return Err(Error::Domain("trials must be at least 1".into()));
    }
    let t = h.edge_count();
    if t == 0 {
        return Err(Error::Domain("hypergraph has no edges to draw".into()));
    }
    if !independent && m > t {
        return Err(Error::Domain(format!(
            "cannot draw an {m}-subset of {t} edges"
        )));
    }
    let mut sampler = SubsetSampler::new(t);
    let mut positions = Vec::with_capacity(m);
    let mut used = VertexSet::empty(h.n());
    let mut successes = 0u64;
    for trial in 0..trials {
        let mut rng = stream_rng(seed, trial);
        if independent {
            positions.clear();
            for _ in 0..m {
                positions.push(rng.random_range(0..t));
            }
        } else {
            sampler.draw(&mut rng, m, &mut positions);
        }
        used.clear();
        let mut ok = true;
        for &idx in &positions {
            let block = h.block(idx);
            if block.is_disjoint(&used) {
                used.union_with(block);
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
