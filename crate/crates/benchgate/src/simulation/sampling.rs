//! Score-distribution sampling for the Monte-Carlo experiments.
//!
//! Normals come from a Box-Muller transform of uniforms; Beta(a, 1) uses
//! its analytic inverse CDF u^(1/a); other Beta shapes go through a
//! gamma-ratio construction (Marsaglia-Tsang).

use std::f64::consts::TAU;

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Parametric score distribution for a simulated classifier.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum ScoreDistribution {
    Normal { mu: f64, sigma: f64 },
    Beta { a: f64, b: f64 },
}

impl ScoreDistribution {
    pub fn validate(&self) -> Result<()> {
        match *self {
            ScoreDistribution::Normal { mu, sigma } => {
                if !mu.is_finite() || !sigma.is_finite() || sigma <= 0.0 {
                    return Err(Error::invalid(format!(
                        "normal distribution needs finite mu and sigma > 0, got ({mu}, {sigma})"
                    )));
                }
            }
            ScoreDistribution::Beta { a, b } => {
                if !(a.is_finite() && b.is_finite() && a > 0.0 && b > 0.0) {
                    return Err(Error::invalid(format!(
                        "beta distribution needs a, b > 0, got ({a}, {b})"
                    )));
                }
            }
        }
        Ok(())
    }
}

impl std::str::FromStr for ScoreDistribution {
    type Err = Error;

    /// Parse `normal:MU,SIGMA` or `beta:A,B`.
    fn from_str(s: &str) -> Result<Self> {
        let (kind, params) = s
            .split_once(':')
            .ok_or_else(|| Error::invalid(format!("expected KIND:P1,P2 in {s:?}")))?;
        let (p1, p2) = params
            .split_once(',')
            .ok_or_else(|| Error::invalid(format!("expected two parameters in {s:?}")))?;
        let p1: f64 = p1
            .trim()
            .parse()
            .map_err(|_| Error::invalid(format!("bad number {p1:?} in {s:?}")))?;
        let p2: f64 = p2
            .trim()
            .parse()
            .map_err(|_| Error::invalid(format!("bad number {p2:?} in {s:?}")))?;
        let dist = match kind.trim() {
            "normal" => ScoreDistribution::Normal { mu: p1, sigma: p2 },
            "beta" => ScoreDistribution::Beta { a: p1, b: p2 },
            other => {
                return Err(Error::invalid(format!(
                    "unknown distribution kind {other:?} (expected normal or beta)"
                )))
            }
        };
        dist.validate()?;
        Ok(dist)
    }
}

impl std::fmt::Display for ScoreDistribution {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            ScoreDistribution::Normal { mu, sigma } => write!(f, "normal:{mu},{sigma}"),
            ScoreDistribution::Beta { a, b } => write!(f, "beta:{a},{b}"),
        }
    }
}

/// Fill `out` with standard normal samples via Box-Muller pairs.
pub fn fill_standard_normals<R: Rng>(rng: &mut R, out: &mut [f64]) {
    let mut i = 0;
    while i < out.len() {
        let u1: f64 = rng.random();
        let u2: f64 = rng.random();
        // 1 - u1 lies in (0, 1], keeping the log finite
        let radius = (-2.0 * (1.0 - u1).ln()).sqrt();
        let angle = TAU * u2;
        out[i] = radius * angle.cos();
        i += 1;
        if i < out.len() {
            out[i] = radius * angle.sin();
            i += 1;
        }
    }
}

/// One standard normal sample (discards the Box-Muller partner).
pub fn standard_normal<R: Rng>(rng: &mut R) -> f64 {
    let u1: f64 = rng.random();
    let u2: f64 = rng.random();
    (-2.0 * (1.0 - u1).ln()).sqrt() * (TAU * u2).cos()
}

/// Inverse CDF of Beta(a, 1): u^(1/a).
pub fn beta_power_quantile(u: f64, a: f64) -> f64 {
    u.powf(1.0 / a)
}

/// Gamma(shape, 1) sample via Marsaglia-Tsang, boosted for shape < 1.
fn sample_gamma<R: Rng>(shape: f64, rng: &mut R) -> f64 {
    if shape < 1.0 {
        let u: f64 = rng.random();
        return sample_gamma(shape + 1.0, rng) * u.powf(1.0 / shape);
    }
    let d = shape - 1.0 / 3.0;
    let c = 1.0 / (9.0 * d).sqrt();
    loop {
        let x = standard_normal(rng);
        let v = 1.0 + c * x;
        if v <= 0.0 {
            continue;
        }
        let v = v * v * v;
        let u: f64 = rng.random();
        if u < 1.0 - 0.0331 * x * x * x * x {
            return d * v;
        }
        if u > 0.0 && u.ln() < 0.5 * x * x + d * (1.0 - v + v.ln()) {
            return d * v;
        }
    }
}

/// Draw `n` i.i.d. samples from `dist`.
pub fn sample_scores<R: Rng>(dist: &ScoreDistribution, n: usize, rng: &mut R) -> Result<Vec<f64>> {
    if n == 0 {
        return Err(Error::invalid("sample count must be at least 1"));
    }
    dist.validate()?;
    let mut out = vec![0.0; n];
    match *dist {
        ScoreDistribution::Normal { mu, sigma } => {
            fill_standard_normals(rng, &mut out);
            for v in &mut out {
                *v = mu + sigma * *v;
            }
        }
        ScoreDistribution::Beta { a, b } => {
            if b == 1.0 {
                for v in &mut out {
                    *v = beta_power_quantile(rng.random(), a);
                }
            } else {
                for v in &mut out {
                    let ga = sample_gamma(a, rng);
                    let gb = sample_gamma(b, rng);
                    *v = ga / (ga + gb);
                }
            }
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng::stream;

    #[test]
    fn beta_power_quantile_analytic_point() {
        // u = 1/8, a = 3: cube root of 1/8
        assert!((beta_power_quantile(0.125, 3.0) - 0.5).abs() < 1e-12);
    }

    #[test]
    fn same_seed_same_samples() {
        let dist = ScoreDistribution::Normal { mu: 0.4, sigma: 0.1 };
        let a = sample_scores(&dist, 100, &mut stream(3, 0)).unwrap();
        let b = sample_scores(&dist, 100, &mut stream(3, 0)).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn normal_sample_mean_converges() {
        let dist = ScoreDistribution::Normal { mu: 0.4, sigma: 0.1 };
        let xs = sample_scores(&dist, 1_000_000, &mut stream(5, 0)).unwrap();
        let mean = xs.iter().sum::<f64>() / xs.len() as f64;
        // 3 sigma / sqrt(n) tolerance
        assert!((mean - 0.4).abs() < 3.0 * 0.1 / 1000.0, "mean {mean}");
    }

    #[test]
    fn beta_three_one_moments() {
        let dist = ScoreDistribution::Beta { a: 3.0, b: 1.0 };
        let xs = sample_scores(&dist, 200_000, &mut stream(7, 0)).unwrap();
        let mean = xs.iter().sum::<f64>() / xs.len() as f64;
        assert!((mean - 0.75).abs() < 0.003, "mean {mean}"); // a/(a+b)
        assert!(xs.iter().all(|&x| (0.0..=1.0).contains(&x)));
    }

    #[test]
    fn general_beta_via_gamma_ratio() {
        let dist = ScoreDistribution::Beta { a: 2.0, b: 5.0 };
        let xs = sample_scores(&dist, 200_000, &mut stream(9, 0)).unwrap();
        let mean = xs.iter().sum::<f64>() / xs.len() as f64;
        assert!((mean - 2.0 / 7.0).abs() < 0.005, "mean {mean}");
        let var = xs.iter().map(|x| (x - mean) * (x - mean)).sum::<f64>() / xs.len() as f64;
        // a b / ((a+b)^2 (a+b+1))
        assert!((var - 10.0 / (49.0 * 8.0)).abs() < 0.002, "var {var}");
    }

    #[test]
    fn parse_and_display_round_trip() {
        let d: ScoreDistribution = "normal:0.6,0.1".parse().unwrap();
        assert_eq!(d, ScoreDistribution::Normal { mu: 0.6, sigma: 0.1 });
        let d: ScoreDistribution = "beta:3,1".parse().unwrap();
        assert_eq!(d, ScoreDistribution::Beta { a: 3.0, b: 1.0 });
        assert!("beta:3".parse::<ScoreDistribution>().is_err());
        assert!("cauchy:0,1".parse::<ScoreDistribution>().is_err());
        assert!("normal:0.4,-1".parse::<ScoreDistribution>().is_err());
    }

    #[test]
    fn rejects_invalid_parameters() {
        assert!(sample_scores(
            &ScoreDistribution::Normal { mu: 0.0, sigma: 0.0 },
            10,
            &mut stream(0, 0)
        )
        .is_err());
        assert!(sample_scores(
            &ScoreDistribution::Beta { a: -1.0, b: 1.0 },
            10,
            &mut stream(0, 0)
        )
        .is_err());
        assert!(sample_scores(
            &ScoreDistribution::Normal { mu: 0.0, sigma: 1.0 },
            0,
            &mut stream(0, 0)
        )
        .is_err());
    }
}
