//! Thin wrappers over standard distribution functions.
//!
//! Quantiles and tail probabilities used across the crate come from
//! `statrs`; the wrappers pin the conventions (two-sided levels, fair-coin
//! binomial tails) in one place.

use statrs::distribution::{Binomial, ContinuousCDF, DiscreteCDF, Normal, StudentsT};

/// Standard normal CDF.
pub fn normal_cdf(x: f64) -> f64 {
    Normal::standard().cdf(x)
}

/// Standard normal quantile (inverse CDF), `p` in (0,1).
pub fn normal_quantile(p: f64) -> f64 {
    assert!(p > 0.0 && p < 1.0, "quantile probability must be in (0,1)");
    Normal::standard().inverse_cdf(p)
}

/// Two-sided z value for a confidence `level` in (0,1), e.g. 1.96 at 0.95.
pub fn z_for_level(level: f64) -> f64 {
    normal_quantile(1.0 - (1.0 - level) / 2.0)
}

/// Student-t quantile with `df` degrees of freedom, `p` in (0,1).
pub fn t_quantile(p: f64, df: f64) -> f64 {
    assert!(p > 0.0 && p < 1.0, "quantile probability must be in (0,1)");
    assert!(df > 0.0, "degrees of freedom must be positive");
    StudentsT::new(0.0, 1.0, df)
        .expect("valid t distribution")
        .inverse_cdf(p)
}

/// Two-sided t value for a confidence `level` with `df` degrees of freedom.
pub fn t_for_level(level: f64, df: f64) -> f64 {
    t_quantile(1.0 - (1.0 - level) / 2.0, df)
}

/// P(X >= k) for X ~ Binomial(n, 1/2).
pub fn binomial_half_tail_geq(k: u64, n: u64) -> f64 {
    if k == 0 {
        return 1.0;
    }
    let b = Binomial::new(0.5, n).expect("valid binomial");
    b.sf(k - 1)
}

/// P(X <= k) for X ~ Binomial(n, 1/2).
pub fn binomial_half_tail_leq(k: u64, n: u64) -> f64 {
    let b = Binomial::new(0.5, n).expect("valid binomial");
    b.cdf(k)
}
