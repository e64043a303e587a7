//! Standard errors, confidence intervals, and exact small-sample null
//! distributions for AUC and fold-averaged statistics.
//!
//! A deliberate asymmetry runs through this module: AUC intervals are
//! clipped to [0,1], while fold-mean t intervals are left unclipped so
//! that absurdly wide small-sample intervals stay visible. An interval
//! that cannot be computed honestly (a single positive item) is a
//! first-class `None`, not an error, so reports can print a "(?, ?)"
//! marker instead of failing.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::metrics::{auc_roc, PredictionSet};
use crate::stats::{t_for_level, z_for_level};

/// Two-sided confidence interval at a given level.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ConfidenceInterval {
    pub lower: f64,
    pub upper: f64,
    pub level: f64,
}

/// An AUC value with sample counts, standard error, and interval.
///
/// `se` is `None` exactly when one class is empty; `ci` is `None` whenever
/// either class has at most one member.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct AucEstimate {
    pub value: f64,
    pub n_pos: usize,
    pub n_neg: usize,
    pub se: Option<f64>,
    pub ci: Option<ConfidenceInterval>,
}

impl AucEstimate {
    /// Wrap a known AUC with its class counts; computes the Hanley-McNeil
    /// standard error when both classes are populated.
    pub fn new(value: f64, n_pos: usize, n_neg: usize) -> Result<Self> {
        if !(0.0..=1.0).contains(&value) {
            return Err(Error::invalid(format!("auc {value} outside [0,1]")));
        }
        let se = if n_pos == 0 || n_neg == 0 {
            None
        } else {
            Some(hanley_mcneil_se(value, n_pos, n_neg)?)
        };
        Ok(Self {
            value,
            n_pos,
            n_neg,
            se,
            ci: None,
        })
    }

    /// Evaluate AUC-ROC on a prediction set and attach the interval at
    /// `level`.
    pub fn from_predictions(preds: &PredictionSet, level: f64) -> Result<Self> {
        let value = auc_roc(preds)?;
        let mut est = Self::new(value, preds.n_pos(), preds.n_neg())?;
        est.ci = auc_ci(&est, level)?;
        Ok(est)
    }

    /// Attach (or recompute) the interval at `level`.
    pub fn with_ci(mut self, level: f64) -> Result<Self> {
        self.ci = auc_ci(&self, level)?;
        Ok(self)
    }
}

/// Hanley-McNeil standard error of an AUC estimate:
///
/// se^2 = (A(1-A) + (n_pos-1)(Q1-A^2) + (n_neg-1)(Q2-A^2)) / (n_pos n_neg)
///
/// with Q1 = A/(2-A) and Q2 = 2A^2/(1+A).
pub fn hanley_mcneil_se(auc: f64, n_pos: usize, n_neg: usize) -> Result<f64> {
    if n_pos == 0 || n_neg == 0 {
        return Err(Error::invalid("class counts must be at least 1"));
    }
    if !(0.0..=1.0).contains(&auc) {
        return Err(Error::invalid(format!("auc {auc} outside [0,1]")));
    }
    let a = auc;
    let q1 = a / (2.0 - a);
    let q2 = 2.0 * a * a / (1.0 + a);
    let np = n_pos as f64;
    let nn = n_neg as f64;
    let var = (a * (1.0 - a) + (np - 1.0) * (q1 - a * a) + (nn - 1.0) * (q2 - a * a)) / (np * nn);
    // tiny negative values can arise from rounding at a = 1
    Ok(var.max(0.0).sqrt())
}

/// Normal-approximation interval `value +/- z * se`, clipped to [0,1].
///
/// Returns `Ok(None)` -- an undefined interval, not an error -- when either
/// class has at most one member, the case where the usual effective
/// degrees of freedom cannot be computed.
pub fn auc_ci(est: &AucEstimate, level: f64) -> Result<Option<ConfidenceInterval>> {
    if !(level > 0.0 && level < 1.0) {
        return Err(Error::invalid(format!("level {level} outside (0,1)")));
    }
    if est.n_pos <= 1 || est.n_neg <= 1 {
        return Ok(None);
    }
    let se = match est.se {
        Some(se) => se,
        None => hanley_mcneil_se(est.value, est.n_pos, est.n_neg)?,
    };
    let z = z_for_level(level);
    Ok(Some(ConfidenceInterval {
        lower: (est.value - z * se).max(0.0),
        upper: (est.value + z * se).min(1.0),
        level,
    }))
}

/// A finite distribution over an ordered support.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct DiscreteDistribution {
    pub support: Vec<f64>,
    pub probabilities: Vec<f64>,
}

impl DiscreteDistribution {
    pub fn mean(&self) -> f64 {
        self.support
            .iter()
            .zip(&self.probabilities)
            .map(|(x, p)| x * p)
            .sum()
    }

    pub fn variance(&self) -> f64 {
        let m = self.mean();
        self.support
            .iter()
            .zip(&self.probabilities)
            .map(|(x, p)| p * (x - m) * (x - m))
            .sum()
    }

    pub fn sd(&self) -> f64 {
        self.variance().sqrt()
    }
}

/// Null distribution of AUC under uniformly random ranking.
///
/// Exact (Mann-Whitney U recurrence) when `n_pos * n_neg` is at or below
/// the enumeration cap; above the cap only the normal-approximation
/// moments are kept (`exact` is `None`). The mean and sd here are computed
/// from exact integer counts in the exact case.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct NullAucDistribution {
    pub n_pos: usize,
    pub n_neg: usize,
    pub mean: f64,
    pub sd: f64,
    pub exact: Option<DiscreteDistribution>,
}

/// Default cap on `n_pos * n_neg` for exact enumeration.
pub const EXACT_NULL_AUC_CAP: usize = 400;

/// Null AUC distribution with the default enumeration cap.
pub fn exact_null_auc_distribution(n_pos: usize, n_neg: usize) -> Result<NullAucDistribution> {
    exact_null_auc_distribution_with_cap(n_pos, n_neg, EXACT_NULL_AUC_CAP)
}

/// Null AUC distribution with an explicit enumeration cap.
pub fn exact_null_auc_distribution_with_cap(
    n_pos: usize,
    n_neg: usize,
    cap: usize,
) -> Result<NullAucDistribution> {
    if n_pos == 0 || n_neg == 0 {
        return Err(Error::invalid("class counts must be at least 1"));
    }
    let m = n_pos;
    let n = n_neg;
    let mn = m * n;
    // Var(AUC) = (m + n + 1) / (12 m n); exact for the tie-free null.
    let closed_form_sd = (((m + n + 1) as f64) / (12.0 * mn as f64)).sqrt();
    if mn > cap {
        return Ok(NullAucDistribution {
            n_pos,
            n_neg,
            mean: 0.5,
            sd: closed_form_sd,
            exact: None,
        });
    }

    // Count rankings with U = u via the Mann-Whitney recurrence on the
    // lowest-ranked item:
    //   f(mm, nn, u) = f(mm-1, nn, u) + f(mm, nn-1, u - mm)
    // (a trailing positive beats nothing; a trailing negative is beaten by
    // all mm positives). Layers roll over mm.
    let mut prev: Vec<Vec<u128>> = (0..=n).map(|_| {
        let mut row = vec![0u128; mn + 1];
        row[0] = 1; // zero positives: only the all-negative sequence, U = 0
        row
    }).collect();
    for mm in 1..=m {
        let mut cur: Vec<Vec<u128>> = Vec::with_capacity(n + 1);
        let mut first = vec![0u128; mn + 1];
        first[0] = 1; // zero negatives
        cur.push(first);
        for nn in 1..=n {
            let mut row = vec![0u128; mn + 1];
            for u in 0..=(mm * nn) {
                let a = prev[nn][u];
                let b = if u >= mm { cur[nn - 1][u - mm] } else { 0 };
                row[u] = a + b;
            }
            cur.push(row);
        }
        prev = cur;
    }
    let counts = prev.pop().expect("n + 1 rows");

    let total: u128 = counts.iter().sum();
    let mut weighted_sum: u128 = 0;
    for (u, &c) in counts.iter().enumerate() {
        weighted_sum += c * u as u128;
    }
    // Exact under the cap: total * mn stays far below 2^53, so both
    // conversions are exact and the quotient is exactly 0.5.
    let mean = (weighted_sum as f64) / (total as f64 * mn as f64);

    let support: Vec<f64> = (0..=mn).map(|u| u as f64 / mn as f64).collect();
    let probabilities: Vec<f64> = counts
        .iter()
        .map(|&c| c as f64 / total as f64)
        .collect();
    Ok(NullAucDistribution {
        n_pos,
        n_neg,
        mean,
        sd: closed_form_sd,
        exact: Some(DiscreteDistribution {
            support,
            probabilities,
        }),
    })
}

/// Mean, standard error of the mean, and t interval over fold values.
#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
pub struct FoldSummary {
    pub mean: f64,
    pub sem: f64,
    pub ci: ConfidenceInterval,
    pub n_folds: usize,
}

/// Fold-mean summary: sample (n-1) variance, SEM, and a t interval with
/// n_folds - 1 degrees of freedom. The interval is deliberately NOT
/// clipped to [0,1]: with three folds the t(2 df) quantile is 4.30 and the
/// resulting over-wide intervals are themselves the finding.
pub fn fold_mean_ci(fold_values: &[f64], level: f64) -> Result<FoldSummary> {
    if fold_values.len() < 2 {
        return Err(Error::invalid(
            "fold mean needs at least 2 fold values",
        ));
    }
    if !(level > 0.0 && level < 1.0) {
        return Err(Error::invalid(format!("level {level} outside (0,1)")));
    }
    if let Some(bad) = fold_values.iter().position(|v| !v.is_finite()) {
        return Err(Error::invalid(format!(
            "fold value at index {bad} is not finite"
        )));
    }
    let n = fold_values.len() as f64;
    // constant folds have exactly zero spread; summation rounding must not
    // manufacture a nonzero SEM
    let (mean, sem) = if fold_values.windows(2).all(|w| w[0] == w[1]) {
        (fold_values[0], 0.0)
    } else {
        let mean = fold_values.iter().sum::<f64>() / n;
        let var = fold_values
            .iter()
            .map(|v| (v - mean) * (v - mean))
            .sum::<f64>()
            / (n - 1.0);
        (mean, (var / n).sqrt())
    };
    let t = t_for_level(level, n - 1.0);
    Ok(FoldSummary {
        mean,
        sem,
        ci: ConfidenceInterval {
            lower: mean - t * sem,
            upper: mean + t * sem,
            level,
        },
        n_folds: fold_values.len(),
    })
}

/// Wilson score interval for a binomial proportion.
pub fn wilson_interval(successes: usize, n: usize, level: f64) -> Result<ConfidenceInterval> {
    if n == 0 {
        return Err(Error::invalid("wilson interval needs n >= 1"));
    }
    if successes > n {
        return Err(Error::invalid(format!(
            "successes {successes} exceed trials {n}"
        )));
    }
    if !(level > 0.0 && level < 1.0) {
        return Err(Error::invalid(format!("level {level} outside (0,1)")));
    }
    let z = z_for_level(level);
    let nf = n as f64;
    let p_hat = successes as f64 / nf;
    let z2 = z * z;
    let denom = 1.0 + z2 / nf;
    let center = (p_hat + z2 / (2.0 * nf)) / denom;
    let half = z * (p_hat * (1.0 - p_hat) / nf + z2 / (4.0 * nf * nf)).sqrt() / denom;
    Ok(ConfidenceInterval {
        lower: (center - half).max(0.0),
        upper: (center + half).min(1.0),
        level,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn hanley_mcneil_reference_values() {
        assert_eq!(hanley_mcneil_se(1.0, 5, 7).unwrap(), 0.0);
        assert!((hanley_mcneil_se(0.5, 10, 10).unwrap() - 0.1323).abs() < 1e-4);
        assert!((hanley_mcneil_se(0.75, 50, 50).unwrap() - 0.0488).abs() < 1e-4);
    }

    #[test]
    fn hanley_mcneil_rejects_bad_arguments() {
        assert!(hanley_mcneil_se(0.5, 0, 10).is_err());
        assert!(hanley_mcneil_se(0.5, 10, 0).is_err());
        assert!(hanley_mcneil_se(1.5, 10, 10).is_err());
    }

    #[test]
    fn auc_ci_undefined_with_single_positive() {
        let est = AucEstimate::new(0.62, 1, 29).unwrap();
        assert!(est.se.is_some());
        assert!(auc_ci(&est, 0.95).unwrap().is_none());
    }

    #[test]
    fn auc_ci_zero_width_at_perfect_auc() {
        let est = AucEstimate::new(1.0, 10, 10).unwrap();
        let ci = auc_ci(&est, 0.95).unwrap().unwrap();
        assert_eq!(ci.lower, 1.0);
        assert_eq!(ci.upper, 1.0);
    }

    #[test]
    fn auc_ci_hand_evaluation() {
        let est = AucEstimate::new(0.69, 18, 18).unwrap();
        let ci = auc_ci(&est, 0.95).unwrap().unwrap();
        assert!((ci.lower - 0.516).abs() < 0.005, "lower {}", ci.lower);
        assert!((ci.upper - 0.864).abs() < 0.005, "upper {}", ci.upper);
    }

    #[test]
    fn auc_ci_width_shrinks_with_samples() {
        let wide = AucEstimate::new(0.8, 100, 100).unwrap();
        let narrow = AucEstimate::new(0.8, 1000, 1000).unwrap();
        let w = auc_ci(&wide, 0.95).unwrap().unwrap();
        let n = auc_ci(&narrow, 0.95).unwrap().unwrap();
        assert!(n.upper - n.lower < w.upper - w.lower);
    }

    #[test]
    fn null_auc_two_actives_one_inactive() {
        let d = exact_null_auc_distribution(2, 1).unwrap();
        let exact = d.exact.as_ref().unwrap();
        assert_eq!(exact.support, vec![0.0, 0.5, 1.0]);
        for &p in &exact.probabilities {
            assert!((p - 1.0 / 3.0).abs() < 1e-15);
        }
        assert_eq!(d.mean, 0.5);
        assert!((d.sd - 0.408_248).abs() < 1e-6);
    }

    #[test]
    fn null_auc_one_one() {
        let d = exact_null_auc_distribution(1, 1).unwrap();
        let exact = d.exact.unwrap();
        assert_eq!(exact.support, vec![0.0, 1.0]);
        assert_eq!(exact.probabilities, vec![0.5, 0.5]);
    }

    #[test]
    fn null_auc_two_two_enumeration() {
        // all 6 orderings of ++-- give U in {0,1,2,2,3,4}
        let d = exact_null_auc_distribution(2, 2).unwrap();
        let exact = d.exact.unwrap();
        assert_eq!(exact.support, vec![0.0, 0.25, 0.5, 0.75, 1.0]);
        let expect = [1.0, 1.0, 2.0, 1.0, 1.0].map(|c| c / 6.0);
        for (p, e) in exact.probabilities.iter().zip(expect.iter()) {
            assert!((p - e).abs() < 1e-15);
        }
    }

    #[test]
    fn null_auc_mean_exact_and_symmetric_under_cap() {
        for (m, n) in [(1, 1), (2, 3), (5, 4), (7, 7), (20, 20), (3, 10)] {
            let d = exact_null_auc_distribution(m, n).unwrap();
            assert_eq!(d.mean, 0.5, "mean not exact for ({m},{n})");
            let exact = d.exact.unwrap();
            let probs = &exact.probabilities;
            for i in 0..probs.len() {
                assert_eq!(probs[i], probs[probs.len() - 1 - i]);
            }
            let sum: f64 = probs.iter().sum();
            assert!((sum - 1.0).abs() < 1e-12);
            // distribution sd agrees with the closed form
            assert!((exact.sd() - d.sd).abs() < 1e-9);
        }
    }

    #[test]
    fn null_auc_above_cap_keeps_moments_only() {
        let d = exact_null_auc_distribution(100, 100).unwrap();
        assert!(d.exact.is_none());
        assert_eq!(d.mean, 0.5);
        assert!((d.sd - (201.0_f64 / 120_000.0).sqrt()).abs() < 1e-15);
    }

    #[test]
    fn null_auc_rejects_zero_counts() {
        assert!(exact_null_auc_distribution(0, 5).is_err());
        assert!(exact_null_auc_distribution(5, 0).is_err());
    }

    #[test]
    fn fold_mean_reference_rows() {
        // 3-fold AUC rows with published summaries
        let s = fold_mean_ci(&[0.889, 0.905, 0.906], 0.95).unwrap();
        assert!((s.mean - 0.900).abs() < 1e-3);
        assert!((s.sem - 0.005).abs() < 1e-3);
        let s = fold_mean_ci(&[0.926, 0.926, 0.934], 0.95).unwrap();
        assert!((s.mean - 0.929).abs() < 1e-3);
        assert!((s.sem - 0.002).abs() < 1e-3);
    }

    #[test]
    fn fold_mean_identical_folds_zero_width() {
        let s = fold_mean_ci(&[0.7, 0.7, 0.7], 0.95).unwrap();
        assert_eq!(s.sem, 0.0);
        assert_eq!(s.ci.lower, 0.7);
        assert_eq!(s.ci.upper, 0.7);
    }

    #[test]
    fn fold_mean_interval_is_unclipped() {
        // wide spread near the upper bound must be allowed to exceed 1
        let s = fold_mean_ci(&[0.99, 0.80, 0.97], 0.95).unwrap();
        assert!(s.ci.upper > 1.0);
    }

    #[test]
    fn fold_mean_needs_two_values() {
        assert!(fold_mean_ci(&[0.9], 0.95).is_err());
    }

    #[test]
    fn wilson_symmetric_at_half() {
        let ci = wilson_interval(50, 100, 0.95).unwrap();
        assert!((ci.lower + ci.upper - 1.0).abs() < 1e-12);
    }

    #[test]
    fn wilson_boundary_zero_successes() {
        let ci = wilson_interval(0, 10, 0.95).unwrap();
        assert!(ci.lower.abs() < 1e-12);
        assert!((ci.upper - 0.2775).abs() < 1e-3);
    }

    #[test]
    fn wilson_hand_evaluation() {
        let ci = wilson_interval(55, 100, 0.95).unwrap();
        assert!((ci.lower - 0.452).abs() < 1e-3);
        assert!((ci.upper - 0.644).abs() < 1e-3);
    }

    #[test]
    fn wilson_rejects_bad_arguments() {
        assert!(wilson_interval(1, 0, 0.95).is_err());
        assert!(wilson_interval(11, 10, 0.95).is_err());
        assert!(wilson_interval(5, 10, 1.0).is_err());
    }

    #[test]
    fn wilson_width_decreases_in_n() {
        // fixed proportion 0.3, doubling n
        let mut prev = f64::INFINITY;
        for n in [10usize, 20, 40, 80, 160] {
            let ci = wilson_interval(3 * n / 10, n, 0.95).unwrap();
            let width = ci.upper - ci.lower;
            assert!(width < prev);
            prev = width;
        }
    }
}
