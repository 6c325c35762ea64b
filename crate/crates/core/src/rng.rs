//! Seeded randomness with one ChaCha8 stream per logical task.
//!
//! Every sampling routine in the crate owns a `(seed, stream)` pair, where
//! the stream index identifies the trial, particle, or trajectory. Results
//! therefore depend only on the seed and the task index, never on thread
//! scheduling or on how draws from unrelated tasks interleave.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Returns the ChaCha8 generator for `(seed, stream)`. Distinct streams of
/// the same seed produce independent draw sequences.
pub fn stream_rng(seed: u64, stream: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    rng
}

/// Mixes `master` and `parts` into a derived 64-bit seed with a SplitMix64
/// finalizer. The mapping is pure arithmetic, so it is stable across
/// platforms, threads, and releases.
pub fn derive_seed(master: u64, parts: &[u64]) -> u64 {
    const GAMMA: u64 = 0x9e37_79b9_7f4a_7c15;
    let mut x = master ^ GAMMA;
    for &p in parts {
        x = mix64(x.wrapping_add(p).wrapping_add(GAMMA));
    }
    mix64(x)
}

fn mix64(mut x: u64) -> u64 {
    x ^= x >> 30;
    x = x.wrapping_mul(0xbf58_476d_1ce4_e5b9);
    x ^= x >> 27;
    x = x.wrapping_mul(0x94d0_49bb_1331_11eb);
    x ^ (x >> 31)
}

/// Draws uniform k-subsets of `{0, .., n-1}` by partial Fisher-Yates
/// shuffling of a persistent pool.
///
/// The pool remains a permutation of the ground set between draws, and a
/// partial shuffle from any starting permutation yields a uniform subset, so
/// no reset is needed and repeated draws cost O(k) swaps each.
pub struct SubsetSampler {
    pool: Vec<u32>,
}

impl SubsetSampler {
    pub fn new(n: usize) -> Self {
        SubsetSampler {
            pool: (0..n as u32).collect(),
        }
    }

    pub fn n(&self) -> usize {
        self.pool.len()
    }

    /// Writes a uniform k-subset into `out` (unsorted, duplicates impossible).
    ///
    /// # Panics
    ///
    /// Panics if `k` exceeds the pool size.
    pub fn draw(&mut self, rng: &mut impl Rng, k: usize, out: &mut Vec<usize>) {
        let n = self.pool.len();
        assert!(k <= n, "cannot draw {k} elements from a pool of {n}");
        out.clear();
        for i in 0..k {
            let j = i + rng.random_range(0..n - i);
            self.pool.swap(i, j);
            out.push(self.pool[i] as usize);
        }
    }
}
