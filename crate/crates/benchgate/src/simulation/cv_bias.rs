//! Cross-validation bias experiment: how far k-fold CV estimates of AUC
//! stray from the true generalization AUC, and how often fold-SEM
//! confidence intervals actually cover it.
//!
//! Each run draws a fresh training set from a two-Gaussian population
//! calibrated so the SVM reaches a target AUC, compares the k-fold CV
//! mean against the AUC on a large fresh test set, and records both the
//! t-interval and the naive +/- 2 SEM coverage.

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::metrics::{auc_roc, PredictionSet};
use crate::rng::{mix, stream};
use crate::simulation::sampling::fill_standard_normals;
use crate::simulation::svm::{train_linear_svm, Dataset, LinearModel, SvmParams};
use crate::splitting::kfold;
use crate::stats::t_for_level;

/// Configuration for the CV-bias experiment.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct CvBiasConfig {
    pub n_train: usize,
    pub n_test: usize,
    pub dim: usize,
    pub target_auc: f64,
    pub k_folds: usize,
    pub runs: usize,
    pub ci_level: f64,
    pub prevalence: f64,
    pub svm: SvmParams,
    pub seed: u64,
}

impl CvBiasConfig {
    pub fn defaults(seed: u64) -> Self {
        Self {
            n_train: 300,
            n_test: 10_000,
            dim: 50,
            target_auc: 0.75,
            k_folds: 3,
            runs: 1000,
            ci_level: 0.95,
            prevalence: 0.5,
            svm: SvmParams::default(),
            seed,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.k_folds < 2 {
            return Err(Error::invalid("k_folds must be at least 2"));
        }
        if self.n_train < 3 * self.k_folds {
            return Err(Error::invalid(format!(
                "n_train = {} too small for {} folds",
                self.n_train, self.k_folds
            )));
        }
        if !(self.target_auc > 0.5 && self.target_auc < 1.0) {
            return Err(Error::invalid(format!(
                "target_auc = {} outside (0.5, 1)",
                self.target_auc
            )));
        }
        if !(self.prevalence > 0.0 && self.prevalence < 1.0) {
            return Err(Error::invalid(format!(
                "prevalence = {} outside (0,1)",
                self.prevalence
            )));
        }
        if self.dim == 0 || self.n_test == 0 || self.runs == 0 {
            return Err(Error::invalid("dim, n_test, and runs must be at least 1"));
        }
        if !(self.ci_level > 0.0 && self.ci_level < 1.0) {
            return Err(Error::invalid(format!(
                "ci_level = {} outside (0,1)",
                self.ci_level
            )));
        }
        Ok(())
    }
}

/// Draw `n` items from two isotropic unit-variance Gaussian classes whose
/// mean vectors differ by `separation` along the first axis; labels are
/// Bernoulli(`prevalence`).
pub fn make_gaussian_pair_dataset<R: rand::Rng>(
    dim: usize,
    separation: f64,
    n: usize,
    prevalence: f64,
    rng: &mut R,
) -> Result<Dataset> {
    if dim == 0 {
        return Err(Error::invalid("dim must be at least 1"));
    }
    if n == 0 {
        return Err(Error::invalid("n must be at least 1"));
    }
    if !(separation >= 0.0 && separation.is_finite()) {
        return Err(Error::invalid(format!(
            "separation {separation} must be nonnegative"
        )));
    }
    if !(prevalence > 0.0 && prevalence < 1.0) {
        return Err(Error::invalid(format!(
            "prevalence {prevalence} outside (0,1)"
        )));
    }
    let labels: Vec<bool> = (0..n).map(|_| rng.random::<f64>() < prevalence).collect();
    let mut features = vec![0.0; n * dim];
    fill_standard_normals(rng, &mut features);
    let half = separation / 2.0;
    for (i, &label) in labels.iter().enumerate() {
        features[i * dim] += if label { half } else { -half };
    }
    Dataset::new(features, dim, labels)
}

/// AUC of the ideal projection onto the class-mean axis: Phi(sep / sqrt 2).
pub fn oracle_projection_auc(separation: f64) -> f64 {
    crate::stats::normal_cdf(separation / std::f64::consts::SQRT_2)
}

const CALIBRATION_RUNS: usize = 20;
const CALIBRATION_TEST_SIZE: usize = 4000;
const CALIBRATION_TOLERANCE: f64 = 0.005;
const CALIBRATION_MAX_STEPS: usize = 60;
const CALIBRATION_SALT: u64 = 0xCA11_B8A7E;

/// Find the class separation at which an SVM trained on `n_train` samples
/// reaches `target_auc` on large fresh test sets, by bisection on the mean
/// AUC over seeded calibration runs.
///
/// Calibration runs reuse the same RNG streams for every candidate
/// separation, so the objective is monotone and the bisection stable.
pub fn calibrate_separation(
    target_auc: f64,
    dim: usize,
    n_train: usize,
    prevalence: f64,
    svm: &SvmParams,
    seed: u64,
) -> Result<f64> {
    if !(target_auc >= 0.5 && target_auc < 1.0) {
        return Err(Error::invalid(format!(
            "target_auc {target_auc} outside [0.5, 1)"
        )));
    }
    if target_auc == 0.5 {
        return Ok(0.0);
    }
    let mean_auc = |separation: f64| -> Result<f64> {
        let mut sum = 0.0;
        for cal_run in 0..CALIBRATION_RUNS {
            let mut rng = stream(mix(seed, CALIBRATION_SALT), cal_run as u64);
            let train = make_gaussian_pair_dataset(dim, separation, n_train, prevalence, &mut rng)?;
            let outcome = train_linear_svm(&train, svm, mix(seed, cal_run as u64))?;
            let test = make_gaussian_pair_dataset(
                dim,
                separation,
                CALIBRATION_TEST_SIZE,
                prevalence,
                &mut rng,
            )?;
            sum += model_auc(&outcome.model, &test)?;
        }
        Ok(sum / CALIBRATION_RUNS as f64)
    };

    let mut lo = 0.0;
    // start past the asymptotic answer and expand if the SVM still falls short
    let mut hi = 2.0 * std::f64::consts::SQRT_2 * crate::stats::normal_quantile(target_auc) + 0.5;
    let mut expansions = 0;
    while mean_auc(hi)? < target_auc {
        hi *= 2.0;
        expansions += 1;
        if expansions > 8 {
            return Err(Error::NoConvergence(
                "calibration could not bracket the target AUC".to_string(),
            ));
        }
    }
    for _ in 0..CALIBRATION_MAX_STEPS {
        let mid = (lo + hi) / 2.0;
        let auc = mean_auc(mid)?;
        if (auc - target_auc).abs() <= CALIBRATION_TOLERANCE {
            return Ok(mid);
        }
        if auc < target_auc {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Err(Error::NoConvergence(format!(
        "calibration did not reach target {target_auc} within {CALIBRATION_MAX_STEPS} bisection steps"
    )))
}

fn model_auc(model: &LinearModel, data: &Dataset) -> Result<f64> {
    let preds = PredictionSet::from_labeled_scores(data.labels.clone(), model.scores(data))?;
    auc_roc(&preds)
}

/// One simulated train/evaluate cycle.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct CvBiasRun {
    pub run: usize,
    pub cv_fold_aucs: Vec<f64>,
    pub cv_mean: f64,
    pub cv_sem: f64,
    pub true_auc: f64,
    pub error: f64,
    pub covered_t: bool,
    pub covered_naive: bool,
}

/// Cross-run error and coverage summary.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct CvBiasAggregates {
    pub calibrated_separation: f64,
    pub mean_cv_auc: f64,
    pub mean_true_auc: f64,
    pub mean_error: f64,
    pub error_p2_5: f64,
    pub error_p97_5: f64,
    pub error_skewness: f64,
    pub frac_abs_error_gt_0_05: f64,
    pub coverage_t: f64,
    pub coverage_naive: f64,
}

/// Full result of the CV-bias experiment.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct CvBiasReport {
    pub config: CvBiasConfig,
    pub runs: Vec<CvBiasRun>,
    pub aggregates: CvBiasAggregates,
}

/// Run the experiment. Each run owns one RNG stream: it draws `n_train`
/// samples, scores plain equal-size k-fold CV, retrains on everything,
/// and evaluates the true AUC on a fresh `n_test` draw.
pub fn run_cv_bias_simulation(config: &CvBiasConfig) -> Result<CvBiasReport> {
    config.validate()?;
    let separation = calibrate_separation(
        config.target_auc,
        config.dim,
        config.n_train,
        config.prevalence,
        &config.svm,
        config.seed,
    )?;
    let t_factor = t_for_level(config.ci_level, (config.k_folds - 1) as f64);

    let mut runs = Vec::with_capacity(config.runs);
    for run in 0..config.runs {
        let mut rng = stream(config.seed, run as u64);
        let train = make_gaussian_pair_dataset(
            config.dim,
            separation,
            config.n_train,
            config.prevalence,
            &mut rng,
        )?;
        let fold_seed = rng.random::<u64>();
        let svm_seed = rng.random::<u64>();
        let folds = kfold(config.n_train, config.k_folds, fold_seed, None)?;

        let mut cv_fold_aucs = Vec::with_capacity(config.k_folds);
        for fold in &folds {
            let mut is_held_out = vec![false; config.n_train];
            for &i in fold {
                is_held_out[i] = true;
            }
            let train_idx: Vec<usize> =
                (0..config.n_train).filter(|&i| !is_held_out[i]).collect();
            let outcome = train_linear_svm(&train.subset(&train_idx), &config.svm, svm_seed)?;
            cv_fold_aucs.push(model_auc(&outcome.model, &train.subset(fold))?);
        }
        let k = config.k_folds as f64;
        let cv_mean = cv_fold_aucs.iter().sum::<f64>() / k;
        let var = cv_fold_aucs
            .iter()
            .map(|a| (a - cv_mean) * (a - cv_mean))
            .sum::<f64>()
            / (k - 1.0);
        let cv_sem = (var / k).sqrt();

        let full = train_linear_svm(&train, &config.svm, svm_seed)?;
        let test = make_gaussian_pair_dataset(
            config.dim,
            separation,
            config.n_test,
            config.prevalence,
            &mut rng,
        )?;
        let true_auc = model_auc(&full.model, &test)?;
        let deviation = (cv_mean - true_auc).abs();
        runs.push(CvBiasRun {
            run,
            cv_mean,
            cv_sem,
            true_auc,
            error: cv_mean - true_auc,
            covered_t: deviation <= t_factor * cv_sem,
            covered_naive: deviation <= 2.0 * cv_sem,
            cv_fold_aucs,
        });
    }
    let aggregates = aggregate(separation, &runs);
    Ok(CvBiasReport {
        config: config.clone(),
        runs,
        aggregates,
    })
}

/// Quantile with linear interpolation between order statistics.
fn percentile(sorted: &[f64], q: f64) -> f64 {
    let n = sorted.len();
    if n == 1 {
        return sorted[0];
    }
    let h = (n as f64 - 1.0) * q;
    let lo = h.floor() as usize;
    let hi = (lo + 1).min(n - 1);
    sorted[lo] + (h - lo as f64) * (sorted[hi] - sorted[lo])
}

fn aggregate(separation: f64, runs: &[CvBiasRun]) -> CvBiasAggregates {
    let n = runs.len() as f64;
    let mean_cv_auc = runs.iter().map(|r| r.cv_mean).sum::<f64>() / n;
    let mean_true_auc = runs.iter().map(|r| r.true_auc).sum::<f64>() / n;
    let errors: Vec<f64> = runs.iter().map(|r| r.error).collect();
    let mean_error = errors.iter().sum::<f64>() / n;
    let mut sorted = errors.clone();
    sorted.sort_unstable_by(|a, b| a.partial_cmp(b).expect("finite errors"));
    let sd = (errors
        .iter()
        .map(|e| (e - mean_error) * (e - mean_error))
        .sum::<f64>()
        / n)
        .sqrt();
    let skew = if sd > 0.0 {
        errors
            .iter()
            .map(|e| {
                let z = (e - mean_error) / sd;
                z * z * z
            })
            .sum::<f64>()
            / n
    } else {
        0.0
    };
    CvBiasAggregates {
        calibrated_separation: separation,
        mean_cv_auc,
        mean_true_auc,
        mean_error,
        error_p2_5: percentile(&sorted, 0.025),
        error_p97_5: percentile(&sorted, 0.975),
        error_skewness: skew,
        frac_abs_error_gt_0_05: errors.iter().filter(|e| e.abs() > 0.05).count() as f64 / n,
        coverage_t: runs.iter().filter(|r| r.covered_t).count() as f64 / n,
        coverage_naive: runs.iter().filter(|r| r.covered_naive).count() as f64 / n,
    }
}
