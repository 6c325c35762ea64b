//! The closed-form tail bounds must dominate exact binomial tails
//! everywhere in their stated ranges, not just at the pinned examples.

use cliquepack_core::bounds::{chernoff_mult_upper_log, chernoff_upper_log};
use cliquepack_core::formulas::log_binom;

/// ln P(X > cut) for X ~ Binomial(n, p), by direct summation.
fn ln_binomial_upper_tail(n: u64, p: f64, cut: f64) -> f64 {
    let mut tail = 0.0f64;
    for j in 0..=n {
        if j as f64 > cut {
            let ln_term =
                log_binom(n, j).unwrap() + j as f64 * p.ln() + (n - j) as f64 * (1.0 - p).ln();
            tail += ln_term.exp();
        }
    }
    tail.ln()
}

#[test]
fn additive_bound_dominates_exact_binomial_tails() {
    let mut points = 0;
    for n in [10u64, 25, 60, 120] {
        for p in [0.2f64, 0.5] {
            let mu = n as f64 * p;
            let sigma = (n as f64 * p * (1.0 - p)).sqrt();
            for mult in [0.5, 1.0, 1.5, 2.0, 3.0, 4.0] {
                let dev = mult * sigma;
                let exact = ln_binomial_upper_tail(n, p, mu + dev);
                let bound = chernoff_upper_log(mu, dev).unwrap();
                assert!(
                    exact <= bound + 1e-9,
                    "n={n} p={p} dev={dev}: exact tail {exact} above bound {bound}"
                );
                points += 1;
            }
        }
    }
    assert!(points >= 48, "grid unexpectedly small: {points}");
}

#[test]
fn multiplicative_bound_dominates_exact_binomial_tails() {
    for n in [20u64, 50, 100] {
        for p in [0.05f64, 0.1] {
            let mu = n as f64 * p;
            for big_k in [3.0f64, 4.0, 6.0] {
                let exact = ln_binomial_upper_tail(n, p, big_k * mu);
                let bound = chernoff_mult_upper_log(mu, big_k).unwrap();
                assert!(
                    exact <= bound + 1e-9,
                    "n={n} p={p} K={big_k}: exact tail {exact} above bound {bound}"
                );
            }
        }
    }
}

#[test]
fn additive_bound_tightens_with_deviation() {
    let mut prev = 0.0f64;
    for i in 1..=30 {
        let dev = i as f64;
        let b = chernoff_upper_log(12.0, dev).unwrap();
        assert!(b < prev, "dev={dev}");
        prev = b;
    }
}
