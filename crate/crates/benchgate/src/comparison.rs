//! Paired statistical comparison of methods across assays or folds.
//!
//! The sign test reports its statistic as a win proportion with a Wilson
//! interval, the form in which a "method A beats method B on x% of units"
//! claim is actually interpretable. Exact ties are dropped before testing
//! (Wilcoxon's original treatment of zeros).

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::stats::{binomial_half_tail_geq, binomial_half_tail_leq, normal_cdf};
use crate::uncertainty::{wilson_interval, ConfidenceInterval};

/// Alternative hypothesis direction.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Alternative {
    Greater,
    Less,
    TwoSided,
}

/// Per-unit paired metric values for two methods.
#[derive(Debug, Clone)]
pub struct PairedFoldScores {
    unit_ids: Vec<String>,
    a_values: Vec<f64>,
    b_values: Vec<f64>,
}

impl PairedFoldScores {
    pub fn new(unit_ids: Vec<String>, a_values: Vec<f64>, b_values: Vec<f64>) -> Result<Self> {
        if a_values.len() != b_values.len() || unit_ids.len() != a_values.len() {
            return Err(Error::ShapeMismatch(format!(
                "{} ids, {} a values, {} b values",
                unit_ids.len(),
                a_values.len(),
                b_values.len()
            )));
        }
        if a_values.is_empty() {
            return Err(Error::invalid("paired scores need at least one unit"));
        }
        for (i, (a, b)) in a_values.iter().zip(&b_values).enumerate() {
            if !a.is_finite() || !b.is_finite() {
                return Err(Error::invalid(format!("non-finite value at unit {i}")));
            }
        }
        Ok(Self {
            unit_ids,
            a_values,
            b_values,
        })
    }

    /// Convenience constructor with synthetic unit ids.
    pub fn from_values(a_values: Vec<f64>, b_values: Vec<f64>) -> Result<Self> {
        let ids = (0..a_values.len()).map(|i| i.to_string()).collect();
        Self::new(ids, a_values, b_values)
    }

    pub fn len(&self) -> usize {
        self.a_values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.a_values.is_empty()
    }

    pub fn unit_ids(&self) -> &[String] {
        &self.unit_ids
    }

    pub fn a_values(&self) -> &[f64] {
        &self.a_values
    }

    pub fn b_values(&self) -> &[f64] {
        &self.b_values
    }
}

/// Outcome of a paired test.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct TestResult {
    pub statistic: f64,
    pub p_value: f64,
    pub alternative: Alternative,
    pub win_proportion: Option<f64>,
    pub win_ci: Option<ConfidenceInterval>,
    pub n_used: usize,
    pub n_ties_dropped: usize,
}

/// Sign test on paired values: wins are units where a > b, exact ties are
/// dropped, and the p-value comes from the exact fair-coin binomial.
///
/// `level` sets the Wilson interval for the win proportion.
pub fn sign_test(paired: &PairedFoldScores, alternative: Alternative, level: f64) -> Result<TestResult> {
    let mut wins = 0usize;
    let mut losses = 0usize;
    let mut ties = 0usize;
    for (a, b) in paired.a_values.iter().zip(&paired.b_values) {
        if a > b {
            wins += 1;
        } else if a < b {
            losses += 1;
        } else {
            ties += 1;
        }
    }
    let n_used = wins + losses;
    if n_used == 0 {
        return Err(Error::AllTies);
    }
    let k = wins as u64;
    let n = n_used as u64;
    let p_value = match alternative {
        Alternative::Greater => binomial_half_tail_geq(k, n),
        Alternative::Less => binomial_half_tail_leq(k, n),
        Alternative::TwoSided => {
            let p = 2.0 * binomial_half_tail_geq(k, n).min(binomial_half_tail_leq(k, n));
            p.min(1.0)
        }
    };
    Ok(TestResult {
        statistic: wins as f64,
        p_value,
        alternative,
        win_proportion: Some(wins as f64 / n_used as f64),
        win_ci: Some(wilson_interval(wins, n_used, level)?),
        n_used,
        n_ties_dropped: ties,
    })
}

/// Wilcoxon signed-rank test on paired values.
///
/// Zero differences are dropped; absolute differences are midranked. The
/// null distribution is exact (full sign-assignment enumeration via a
/// doubled-rank convolution, which handles tied ranks) for up to 25 used
/// pairs, and a tie-corrected normal approximation with continuity
/// correction beyond that. The statistic is the positive-rank sum W+.
pub fn wilcoxon_signed_rank(paired: &PairedFoldScores, alternative: Alternative) -> Result<TestResult> {
    let mut diffs: Vec<f64> = Vec::with_capacity(paired.len());
    let mut ties = 0usize;
    for (a, b) in paired.a_values.iter().zip(&paired.b_values) {
        let d = a - b;
        if d == 0.0 {
            ties += 1;
        } else {
            diffs.push(d);
        }
    }
    if diffs.is_empty() {
        return Err(Error::AllTies);
    }
    let n_used = diffs.len();
    let ranks = midranks_of_abs(&diffs);
    let w_plus: f64 = diffs
        .iter()
        .zip(&ranks)
        .filter(|(d, _)| **d > 0.0)
        .map(|(_, r)| *r)
        .sum();

    let p_value = if n_used <= WILCOXON_EXACT_LIMIT {
        exact_wilcoxon_p(&ranks, &diffs, alternative)
    } else {
        let n = n_used as f64;
        let mu = n * (n + 1.0) / 4.0;
        // Var(W+) = sum(rank^2) / 4 subsumes the tie correction
        let sigma = (ranks.iter().map(|r| r * r).sum::<f64>() / 4.0).sqrt();
        let p_greater = 1.0 - normal_cdf((w_plus - mu - 0.5) / sigma);
        let p_less = normal_cdf((w_plus - mu + 0.5) / sigma);
        match alternative {
            Alternative::Greater => p_greater,
            Alternative::Less => p_less,
            Alternative::TwoSided => (2.0 * p_greater.min(p_less)).min(1.0),
        }
    };
    Ok(TestResult {
        statistic: w_plus,
        p_value,
        alternative,
        win_proportion: None,
        win_ci: None,
        n_used,
        n_ties_dropped: ties,
    })
}

/// Largest n for which the exact Wilcoxon null is enumerated.
pub const WILCOXON_EXACT_LIMIT: usize = 25;

/// Midranks of |values| (average rank over tied absolute values).
fn midranks_of_abs(values: &[f64]) -> Vec<f64> {
    let mut order: Vec<usize> = (0..values.len()).collect();
    order.sort_unstable_by(|&a, &b| {
        values[a]
            .abs()
            .partial_cmp(&values[b].abs())
            .expect("finite values")
    });
    let mut ranks = vec![0.0; values.len()];
    let mut i = 0;
    while i < order.len() {
        let v = values[order[i]].abs();
        let mut j = i;
        while j < order.len() && values[order[j]].abs() == v {
            j += 1;
        }
        // positions i..j (0-based) share midrank
        let midrank = (i + 1 + j) as f64 / 2.0;
        for &idx in &order[i..j] {
            ranks[idx] = midrank;
        }
        i = j;
    }
    ranks
}

/// Exact p-value for W+ by convolving the 2^n sign assignments over
/// doubled ranks (midranks are half-integers, so doubling keeps the grid
/// integral).
fn exact_wilcoxon_p(ranks: &[f64], diffs: &[f64], alternative: Alternative) -> f64 {
    let doubled: Vec<usize> = ranks.iter().map(|r| (2.0 * r).round() as usize).collect();
    let total: usize = doubled.iter().sum();
    // counts[s] = number of sign assignments with doubled W+ = s
    let mut counts = vec![0u64; total + 1];
    counts[0] = 1;
    for &r in &doubled {
        for s in (r..=total).rev() {
            counts[s] += counts[s - r];
        }
    }
    let w2: usize = diffs
        .iter()
        .zip(doubled.iter())
        .filter(|(d, _)| **d > 0.0)
        .map(|(_, r)| *r)
        .sum();
    let denom = (1u64 << diffs.len()) as f64;
    let tail_geq = |w: usize| -> f64 {
        counts[w..].iter().map(|&c| c as f64).sum::<f64>() / denom
    };
    let tail_leq = |w: usize| -> f64 {
        counts[..=w].iter().map(|&c| c as f64).sum::<f64>() / denom
    };
    match alternative {
        Alternative::Greater => tail_geq(w2),
        Alternative::Less => tail_leq(w2),
        Alternative::TwoSided => {
            // the null is symmetric about total/2: p = P(|S - c| >= |w2 - c|)
            let dev = (2 * w2) as i64 - total as i64;
            let dev = dev.abs();
            let mut p = 0.0;
            for (s, &c) in counts.iter().enumerate() {
                if ((2 * s) as i64 - total as i64).abs() >= dev {
                    p += c as f64;
                }
            }
            (p / denom).min(1.0)
        }
    }
}

/// Cohen's d with the fold standard deviation reconstructed from the SEM
/// (s = sem * sqrt(n_folds)) and an equal-n pooled denominator.
pub fn effect_size(
    a_mean: f64,
    a_sem: f64,
    b_mean: f64,
    b_sem: f64,
    n_folds: usize,
) -> Result<f64> {
    if n_folds < 2 {
        return Err(Error::invalid("effect size needs at least 2 folds"));
    }
    if a_sem < 0.0 || b_sem < 0.0 {
        return Err(Error::invalid("SEMs must be nonnegative"));
    }
    if a_sem == 0.0 && b_sem == 0.0 {
        return Err(Error::DegenerateVariance);
    }
    let n = n_folds as f64;
    let s_a = a_sem * n.sqrt();
    let s_b = b_sem * n.sqrt();
    let pooled = ((s_a * s_a + s_b * s_b) / 2.0).sqrt();
    Ok((a_mean - b_mean).abs() / pooled)
}

/// Cohen's d computed from raw fold values; may differ from the
/// published-summary overload when those summaries were rounded.
pub fn effect_size_from_folds(a_folds: &[f64], b_folds: &[f64]) -> Result<f64> {
    if a_folds.len() != b_folds.len() {
        return Err(Error::ShapeMismatch(format!(
            "{} vs {} fold values",
            a_folds.len(),
            b_folds.len()
        )));
    }
    if a_folds.len() < 2 {
        return Err(Error::invalid("effect size needs at least 2 folds"));
    }
    let mean = |v: &[f64]| v.iter().sum::<f64>() / v.len() as f64;
    let var = |v: &[f64], m: f64| {
        v.iter().map(|x| (x - m) * (x - m)).sum::<f64>() / (v.len() as f64 - 1.0)
    };
    let (ma, mb) = (mean(a_folds), mean(b_folds));
    let (va, vb) = (var(a_folds, ma), var(b_folds, mb));
    if va == 0.0 && vb == 0.0 {
        return Err(Error::DegenerateVariance);
    }
    Ok((ma - mb).abs() / ((va + vb) / 2.0).sqrt())
}

/// One row of a best-method tabulation.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct WinRow {
    pub method: String,
    pub wins: usize,
    pub fraction: f64,
}

/// Per-method best-performance fractions over common fold units, with a
/// Tie row for units whose maximum is shared.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct WinTable {
    pub rows: Vec<WinRow>,
    pub tie: WinRow,
    pub total_units: usize,
}

/// Values are rounded to this many decimals before win comparison, since
/// upstream files carry rounded values.
pub const WIN_ROUNDING_DECIMALS: i32 = 6;

fn round_for_wins(v: f64) -> f64 {
    let scale = 10f64.powi(WIN_ROUNDING_DECIMALS);
    (v * scale).round() / scale
}

/// Tabulate, per fold unit, which method attains the unique maximum; units
/// with a shared maximum accrue to the Tie row.
pub fn tabulate_wins(per_fold_scores: &[(String, Vec<f64>)]) -> Result<WinTable> {
    if per_fold_scores.len() < 2 {
        return Err(Error::invalid("win tabulation needs at least 2 methods"));
    }
    let n_units = per_fold_scores[0].1.len();
    if n_units == 0 {
        return Err(Error::invalid("win tabulation needs at least 1 fold unit"));
    }
    for (name, values) in per_fold_scores {
        if values.len() != n_units {
            return Err(Error::ShapeMismatch(format!(
                "method {name} has {} values, expected {n_units}",
                values.len()
            )));
        }
    }
    let mut wins = vec![0usize; per_fold_scores.len()];
    let mut tie_count = 0usize;
    for unit in 0..n_units {
        let rounded: Vec<f64> = per_fold_scores
            .iter()
            .map(|(_, v)| round_for_wins(v[unit]))
            .collect();
        let best = rounded.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
        let winners: Vec<usize> = rounded
            .iter()
            .enumerate()
            .filter(|(_, v)| **v == best)
            .map(|(i, _)| i)
            .collect();
        if winners.len() == 1 {
            wins[winners[0]] += 1;
        } else {
            tie_count += 1;
        }
    }
    let rows = per_fold_scores
        .iter()
        .zip(&wins)
        .map(|((name, _), &w)| WinRow {
            method: name.clone(),
            wins: w,
            fraction: w as f64 / n_units as f64,
        })
        .collect();
    Ok(WinTable {
        rows,
        tie: WinRow {
            method: "Tie".to_string(),
            wins: tie_count,
            fraction: tie_count as f64 / n_units as f64,
        },
        total_units: n_units,
    })
}

/// Plot-ready scatter triple.
#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
pub struct ScatterPoint {
    pub x: f64,
    pub y: f64,
    pub size: u64,
}

/// Emit (a, b, size) triples for a pairwise scatter; missing weights
/// default to 1.
pub fn pairwise_scatter(paired: &PairedFoldScores, weights: Option<&[u64]>) -> Vec<ScatterPoint> {
    paired
        .a_values
        .iter()
        .zip(&paired.b_values)
        .enumerate()
        .map(|(i, (&x, &y))| ScatterPoint {
            x,
            y,
            size: weights.and_then(|w| w.get(i).copied()).unwrap_or(1),
        })
        .collect()
}
