//! Validated parameter triple for packing experiments.

use crate::error::Error;
use crate::Result;

/// Instance parameters: ground size `n`, clique size `k`, and family size `t`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Params {
    n: usize,
    k: usize,
    t: u64,
}

impl Params {
    /// Requires `2 <= k <= n` and `t >= 1`.
    pub fn new(n: usize, k: usize, t: u64) -> Result<Self> {
        if k < 2 {
            return Err(Error::Domain(format!("k must be at least 2, got {k}")));
        }
        if k > n {
            return Err(Error::Domain(format!("k={k} exceeds n={n}")));
        }
        if t == 0 {
            return Err(Error::Domain("t must be at least 1".into()));
        }
        Ok(Params { n, k, t })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn t(&self) -> u64 {
        self.t
    }
}
