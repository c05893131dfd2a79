//! Exact Poisson probabilities for the analytic reference values.
//!
//! The rates used by the event estimators are small (at most a few thousand),
//! so direct summation of the probability mass recursion is accurate to
//! within a few ulps and no special-function machinery is needed.

/// `P(N = k)` for `N ~ Poisson(lambda)`.
pub fn pmf(lambda: f64, k: u64) -> f64 {
    assert!(lambda > 0.0, "rate must be positive");
    // log-space to survive large k or lambda
    let lk = k as f64 * lambda.ln() - lambda - ln_factorial(k);
    lk.exp()
}

/// `P(N <= k)` for `N ~ Poisson(lambda)`.
pub fn cdf(lambda: f64, k: u64) -> f64 {
    assert!(lambda > 0.0, "rate must be positive");
    let mut term = (-lambda).exp();
    let mut sum = term;
    for j in 1..=k {
        term *= lambda / j as f64;
        sum += term;
    }
    sum.min(1.0)
}

/// `P(N >= k)` for `N ~ Poisson(lambda)`.
///
/// Summed upward from `k` so that small tails keep full relative accuracy.
pub fn tail(lambda: f64, k: u64) -> f64 {
    assert!(lambda > 0.0, "rate must be positive");
    if k == 0 {
        return 1.0;
    }
    let mut term = pmf(lambda, k);
    let mut sum = term;
    let mut j = k;
    loop {
        j += 1;
        term *= lambda / j as f64;
        sum += term;
        if term < sum * 1e-18 {
            break;
        }
    }
    sum.min(1.0)
}

fn ln_factorial(k: u64) -> f64 {
    (2..=k).map(|j| (j as f64).ln()).sum()
}
