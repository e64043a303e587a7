//! Monte-Carlo experiments: score-distribution simulations contrasting
//! ROC, precision-recall, and enrichment under heavy class imbalance, and
//! the cross-validation bias experiment built on a from-scratch linear
//! SVM.
//!
//! Every run owns an RNG stream derived from (master seed, run index), so
//! reports are byte-identical across re-runs and independent of any
//! execution interleaving.

pub mod cv_bias;
pub mod sampling;
pub mod score_sim;
pub mod svm;

pub use cv_bias::{
    calibrate_separation, make_gaussian_pair_dataset, oracle_projection_auc,
    run_cv_bias_simulation, CvBiasAggregates, CvBiasConfig, CvBiasReport, CvBiasRun,
};
pub use sampling::{beta_power_quantile, sample_scores, ScoreDistribution};
pub use score_sim::{
    run_score_simulation, EnrichmentAt, ScoreSimAggregates, ScoreSimConfig, ScoreSimReport,
    ScoreSimRun, ENRICHMENT_SUMMARY_FRACTIONS,
};
pub use svm::{train_linear_svm, Dataset, LinearModel, SvmParams, TrainOutcome};
