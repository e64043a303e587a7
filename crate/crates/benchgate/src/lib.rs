//! Evaluation, uncertainty quantification, statistical comparison, data
//! splitting, and Monte-Carlo simulation for binary-classifier
//! benchmarking.
//!
//! The crate is organized around one unit of analysis: a
//! [`metrics::PredictionSet`] of scored, binary-labeled items for a single
//! (assay, method, fold) cell. On top of it sit
//!
//! - [`metrics`]: ROC/PR/enrichment curves and their areas,
//! - [`uncertainty`]: standard errors, confidence intervals, and exact
//!   small-sample null distributions for AUC,
//! - [`comparison`]: paired sign and Wilcoxon tests, effect sizes, and
//!   best-method tabulation,
//! - [`splitting`]: deterministic k-fold, group-aware, and nested n x k
//!   cross-validation planning,
//! - [`simulation`]: seeded Monte-Carlo experiments (score-distribution
//!   contrasts and CV-bias coverage).
//!
//! All operations are pure functions of their inputs; randomized
//! procedures take explicit seeds and derive per-unit streams, so results
//! are reproducible bit-for-bit.

pub mod comparison;
pub mod error;
pub mod metrics;
pub mod rng;
pub mod splitting;
pub mod stats;
pub mod uncertainty;

pub mod simulation;

pub use error::{Error, Result};
