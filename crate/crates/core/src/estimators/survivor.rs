//! Survivor-set trace of an independent edge-draw trajectory: after each
//! accepted draw, how many edges remain disjoint from everything chosen so
//! far, and how many of those survivors have few interactions.

use crate::bitset::VertexSet;
use crate::error::Error;
use crate::family::Hypergraph;
use crate::rng::stream_rng;
use crate::Result;
use rand::Rng;

/// One accepted step of a trace: after `step` chosen edges, `survivor_count`
/// edges are disjoint from all of them, and `low_interaction_count` of those
/// survivors meet fewer than delta * survivors * l^2 / n surviving edges
/// (self included).
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct TraceStep {
    pub step: usize,
    pub survivor_count: usize,
    pub low_interaction_count: usize,
}

/// A single trajectory of independent uniform edge draws, stopped at the
/// first draw that breaks the matching.
#[derive(Debug, Clone, PartialEq)]
pub struct SurvivorTrace {
    /// Interaction threshold coefficient: 1/e when c = m*l^2/n is at most
    /// e, ln(c)/c beyond that.
    pub delta: f64,
    pub steps: Vec<TraceStep>,
    /// True when all m draws extended the matching.
    pub completed: bool,
}

/// Draws up to m edges independently and uniformly from H, aborting at the
/// first draw that meets an earlier choice. After each accepted draw the
/// surviving sub-hypergraph is measured exactly.
pub fn survivor_trace(h: &Hypergraph, m: usize, seed: u64) -> Result<SurvivorTrace> {
    let t = h.edge_count();
    if t == 0 {
        return Err(Error::Domain("trace needs a nonempty hypergraph".into()));
    }
    let n = h.n();
    let l = h.edge_size();
    let c = m as f64 * (l * l) as f64 / n as f64;
    let delta = if c <= std::f64::consts::E {
        std::f64::consts::E.recip()
    } else {
        c.ln() / c
    };

    let mut rng = stream_rng(seed, 0);
    let mut union = VertexSet::empty(n);
    let mut steps = Vec::new();
    let mut completed = true;
    for step in 1..=m {
        let idx = rng.random_range(0..t);
        let block = h.block(idx);
        if !block.is_disjoint(&union) {
            completed = false;
            break;
        }
        union.union_with(block);

        let survivors: Vec<usize> = (0..t)
            .filter(|&j| h.block(j).is_disjoint(&union))
            .collect();
        let survivor_count = survivors.len();
        let threshold = delta * survivor_count as f64 * (l * l) as f64 / n as f64;
        let low_interaction_count = survivors
            .iter()
            .filter(|&&e| {
                let interactions = survivors
                    .iter()
                    .filter(|&&g| !h.block(e).is_disjoint(h.block(g)))
                    .count();
                (interactions as f64) < threshold
            })
            .count();
        debug_assert!(
            (low_interaction_count as f64)
                < delta * survivor_count as f64 + n as f64 / l as f64,
            "low-interaction census exceeded its guaranteed ceiling"
        );
        steps.push(TraceStep {
            step,
            survivor_count,
            low_interaction_count,
        });
    }
    Ok(SurvivorTrace {
        delta,
        steps,
        completed,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::constructions::{example_hypergraph, perfect_matching_hypergraph};

    #[test]
    fn matching_survivors_shrink_by_one_per_step() {
        let h = perfect_matching_hypergraph(12, 2).unwrap();
        let t = h.edge_count();
        for seed in 0..10 {
            let trace = survivor_trace(&h, 4, seed).unwrap();
            for s in &trace.steps {
                assert_eq!(s.survivor_count, t - s.step);
            }
        }
    }

    #[test]
    fn affine_instances_keep_the_survivor_floor() {
        let ex = example_hypergraph(2, 3, 2).unwrap();
        let h = ex.hypergraph();
        let floor = ex.n() / ex.l();
        for seed in 0..25 {
            let trace = survivor_trace(h, 4, seed).unwrap();
            for s in &trace.steps {
                assert!(
                    s.survivor_count >= floor - s.step,
                    "seed {seed}: step {} has {} survivors, floor {}",
                    s.step,
                    s.survivor_count,
                    floor - s.step
                );
            }
            if let Some(first) = trace.steps.first() {
                assert_eq!(first.survivor_count, 7);
            }
        }
    }

    #[test]
    fn low_interaction_census_stays_under_the_bound() {
        let ex = example_hypergraph(3, 2, 2).unwrap();
        let h = ex.hypergraph();
        let n = ex.n() as f64;
        let l = ex.l() as f64;
        for seed in 0..20 {
            let trace = survivor_trace(h, 5, seed).unwrap();
            for s in &trace.steps {
                let bound = trace.delta * s.survivor_count as f64 + n / l;
                assert!(
                    (s.low_interaction_count as f64) < bound,
                    "seed {seed}: {} !< {bound}",
                    s.low_interaction_count
                );
            }
        }
    }

    #[test]
    fn delta_follows_the_two_branch_schedule() {
        let h = example_hypergraph(2, 3, 2).unwrap().into_hypergraph();
        let small = survivor_trace(&h, 4, 0).unwrap();
        assert!((small.delta - std::f64::consts::E.recip()).abs() < 1e-15);

        let big = survivor_trace(&h, 30, 0).unwrap();
        let c: f64 = 30.0 * 4.0 / 8.0;
        assert!((big.delta - c.ln() / c).abs() < 1e-15);
    }

    #[test]
    fn traces_are_deterministic_and_abort_cleanly() {
        let h = example_hypergraph(2, 2, 2).unwrap().into_hypergraph();
        let a = survivor_trace(&h, 6, 3).unwrap();
        let b = survivor_trace(&h, 6, 3).unwrap();
        assert_eq!(a, b);
        assert!(a.steps.len() <= 6);
        if !a.completed {
            assert!(a.steps.len() < 6);
        }

        let zero = survivor_trace(&h, 0, 3).unwrap();
        assert!(zero.completed);
        assert!(zero.steps.is_empty());
    }
}
