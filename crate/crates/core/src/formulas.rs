//! Counting formulas shared across the crate: binomial coefficients in exact
//! and log form, the expected clique count in a uniform random graph, and the
//! threshold size where that expectation drops below one.

use crate::error::Error;
use crate::Result;
use std::f64::consts::LN_2;

/// Hard cap on the number of objects an exhaustive routine may enumerate.
pub const ENUMERATION_CAP: u64 = 100_000_000;

/// Largest integer magnitude that f64 represents exactly.
const F64_EXACT: u64 = 1 << 53;

/// C(n, k) as an exact integer, or None when the value overflows u64.
/// Returns 0 for k > n.
pub fn binom_exact(n: u64, k: u64) -> Option<u64> {
    if k > n {
        return Some(0);
    }
    let k = k.min(n - k);
    let mut acc: u128 = 1;
    for i in 1..=k {
        // Each partial value is C(n - k + i, i), so the division is exact.
        acc = acc * (n - k + i) as u128 / i as u128;
        if acc > u64::MAX as u128 {
            return None;
        }
    }
    Some(acc as u64)
}

/// Natural log of n!.
pub fn log_factorial(n: u64) -> f64 {
    if n <= 25 {
        let mut acc: u128 = 1;
        for i in 2..=n as u128 {
            acc *= i;
        }
        (acc as f64).ln()
    } else {
        libm::lgamma(n as f64 + 1.0)
    }
}

/// Natural log of C(n, k). Exact-integer path below 2^53, log-gamma above.
pub fn log_binom(n: u64, k: u64) -> Result<f64> {
    if k > n {
        return Err(Error::Domain(format!("log_binom needs k <= n, got C({n},{k})")));
    }
    let value = match binom_exact(n, k) {
        Some(v) if v <= F64_EXACT => (v as f64).ln(),
        _ => {
            let nf = n as f64;
            let kf = k as f64;
            libm::lgamma(nf + 1.0) - libm::lgamma(kf + 1.0) - libm::lgamma(nf - kf + 1.0)
        }
    };
    Ok(value)
}

/// Base-2 log of the expected number of k-cliques in a uniform random graph
/// on n vertices: log2 C(n, k) - C(k, 2).
pub fn log2_f(n: u64, k: u64) -> Result<f64> {
    if k < 2 || k > n {
        return Err(Error::Domain(format!(
            "clique-count formula needs 2 <= k <= n, got k={k}, n={n}"
        )));
    }
    Ok(log_binom(n, k)? / LN_2 - k as f64 * (k as f64 - 1.0) / 2.0)
}

/// Natural log of the expected k-clique count; see [`log2_f`].
pub fn ln_f(n: u64, k: u64) -> Result<f64> {
    Ok(log2_f(n, k)? * LN_2)
}

/// Smallest k >= 2 whose expected clique count falls below one. Defined for
/// n >= 2; the scan always terminates because the expectation at k = n is
/// 2^(-C(n,2)) < 1.
pub fn k0(n: usize) -> Result<usize> {
    if n < 2 {
        return Err(Error::Domain(format!("k0 needs n >= 2, got {n}")));
    }
    for k in 2..=n {
        if log2_f(n as u64, k as u64)? < 0.0 {
            return Ok(k);
        }
    }
    unreachable!("expected clique count is below one at k = n")
}

/// C(n, 2) as a u64.
pub fn pair_count(n: usize) -> Result<u64> {
    let pairs = n as u128 * n.saturating_sub(1) as u128 / 2;
    u64::try_from(pairs)
        .map_err(|_| Error::Capacity(format!("C({n},2) overflows a 64-bit counter")))
}

/// Edge-count ceiling for packings: floor(C(n,2) / C(k,2)). No packing of
/// k-sets with pairwise intersections of size at most one can have more
/// blocks, because its blocks cover disjoint vertex pairs.
pub fn trivial_packing_bound(n: usize, k: usize) -> Result<u64> {
    if k < 2 || k > n {
        return Err(Error::Domain(format!(
            "packing bound needs 2 <= k <= n, got k={k}, n={n}"
        )));
    }
    let per_block = (k * (k - 1) / 2) as u64;
    Ok(pair_count(n)? / per_block)
}
