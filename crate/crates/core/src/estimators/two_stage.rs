//! Two-stage family sampler: each k-set arises as the union of a uniform
//! half B and a uniform half C drawn from B's complement, exposing the
//! nested packing events of the two halves.

use crate::bitset::VertexSet;
use crate::error::Error;
use crate::family::SetFamily;
use crate::params::Params;
use crate::rng::{stream_rng, SubsetSampler};
use crate::Result;
use rand::Rng;

/// One family drawn in two stages. The union family `a` is marginally a
/// family of t independent uniform k-sets; `event_p` (a is a packing)
/// implies `event_q` (b is a packing) because every b block sits inside its
/// a block.
#[derive(Debug, Clone, PartialEq)]
pub struct TwoStageSample {
    pub b: SetFamily,
    pub c: SetFamily,
    pub a: SetFamily,
    pub event_p: bool,
    pub event_q: bool,
}

/// Draws the two-stage family for even k: B_i a uniform (k/2)-set of [n],
/// C_i a uniform (k/2)-set of its complement, A_i their union.
pub fn two_stage_sample(p: &Params, seed: u64) -> Result<TwoStageSample> {
    let (n, k, t) = (p.n(), p.k(), p.t());
    if k % 2 != 0 {
        return Err(Error::Domain(format!(
            "two-stage sampling needs even k, got {k}"
        )));
    }
    let l = k / 2;
    let mut rng = stream_rng(seed, 0);
    let mut sampler = SubsetSampler::new(n);
    let mut scratch = Vec::with_capacity(l);
    let mut b = SetFamily::empty(n);
    let mut c = SetFamily::empty(n);
    let mut a = SetFamily::empty(n);
    let mut complement = Vec::with_capacity(n - l);
    for _ in 0..t {
        sampler.draw(&mut rng, l, &mut scratch);
        let b_block = VertexSet::from_indices(n, &scratch)?;

        complement.clear();
        complement.extend((0..n).filter(|&v| !b_block.contains(v)));
        for j in 0..l {
            let swap = rng.random_range(j..complement.len());
            complement.swap(j, swap);
        }
        let c_block = VertexSet::from_indices(n, &complement[..l])?;

        let mut a_block = b_block.clone();
        a_block.union_with(&c_block);
        debug_assert_eq!(a_block.card(), k);
        b.push(b_block)?;
        c.push(c_block)?;
        a.push(a_block)?;
    }
    let event_p = a.is_packing();
    let event_q = b.is_packing();
    debug_assert!(!event_p || event_q, "a packing union forces packing halves");
    Ok(TwoStageSample {
        b,
        c,
        a,
        event_p,
        event_q,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn odd_k_is_rejected() {
        let p = Params::new(9, 3, 2).unwrap();
        assert!(matches!(two_stage_sample(&p, 0), Err(Error::Domain(_))));
    }

    #[test]
    fn samples_are_deterministic_and_well_formed() {
        let p = Params::new(10, 4, 5).unwrap();
        let s1 = two_stage_sample(&p, 13).unwrap();
        let s2 = two_stage_sample(&p, 13).unwrap();
        assert_eq!(s1, s2);
        for i in 0..5 {
            assert_eq!(s1.b.block(i).card(), 2);
            assert_eq!(s1.c.block(i).card(), 2);
            assert_eq!(s1.a.block(i).card(), 4);
            assert!(s1.b.block(i).is_disjoint(s1.c.block(i)));
            let mut merged = s1.b.block(i).clone();
            merged.union_with(s1.c.block(i));
            assert_eq!(&merged, s1.a.block(i));
        }
    }

    #[test]
    fn packing_unions_force_packing_halves() {
        let triple = Params::new(8, 4, 3).unwrap();
        for seed in 0..300 {
            let s = two_stage_sample(&triple, seed).unwrap();
            if s.event_p {
                assert!(s.event_q, "seed {seed}: event P without event Q");
            }
        }

        let pair = Params::new(8, 4, 2).unwrap();
        let mut saw_p = false;
        for seed in 0..300 {
            let s = two_stage_sample(&pair, seed).unwrap();
            if s.event_p {
                saw_p = true;
                assert!(s.event_q, "seed {seed}: event P without event Q");
            }
        }
        assert!(saw_p, "no packing pair in 300 seeds");
    }

    #[test]
    fn union_blocks_are_marginally_uniform() {
        let p = Params::new(6, 4, 1).unwrap();
        let trials = 20_000u64;
        let mut hits = 0u64;
        for seed in 0..trials {
            if two_stage_sample(&p, seed).unwrap().a.block(0).contains(0) {
                hits += 1;
            }
        }
        let prob = 4.0 / 6.0;
        let mean = trials as f64 * prob;
        let sigma = (trials as f64 * prob * (1.0 - prob)).sqrt();
        assert!(
            (hits as f64 - mean).abs() < 4.0 * sigma,
            "inclusion count {hits} outside 4 sigma of {mean}"
        );
    }
}
