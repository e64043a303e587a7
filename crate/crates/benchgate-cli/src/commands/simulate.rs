//! `benchgate simulate`: seeded Monte-Carlo experiment drivers.

use std::path::PathBuf;

use clap::{Args, Subcommand};

use benchgate::simulation::{
    run_cv_bias_simulation, run_score_simulation, CvBiasConfig, ScoreDistribution, ScoreSimConfig,
    SvmParams,
};

use crate::error::{CliError, Result};
use crate::io::write_curves;
use crate::report::{resolve_seed, Report};

#[derive(Debug, Subcommand)]
pub enum SimulateCmd {
    /// Draw scored samples from a pair of score distributions and measure
    /// ROC / PR / enrichment behavior under class imbalance
    ScoreDist(ScoreDistArgs),
    /// Measure error and interval coverage of k-fold CV AUC estimates
    /// with a linear SVM on calibrated two-Gaussian data
    CvBias(CvBiasArgs),
}

#[derive(Debug, Args)]
pub struct ScoreDistArgs {
    /// Positive-class score distribution: normal:MU,SIGMA or beta:A,B
    #[arg(long, default_value = "normal:0.6,0.1")]
    pub pos_dist: String,

    /// Negative-class score distribution: normal:MU,SIGMA or beta:A,B
    #[arg(long, default_value = "normal:0.4,0.1")]
    pub neg_dist: String,

    #[arg(long, default_value_t = 100)]
    pub n_pos: usize,

    #[arg(long, default_value_t = 10_000)]
    pub n_neg: usize,

    #[arg(long, default_value_t = 10)]
    pub runs: usize,

    /// Seed (falls back to BENCHGATE_SEED, then a generated seed)
    #[arg(long)]
    pub seed: Option<u64>,

    /// Report JSON path (stdout when omitted)
    #[arg(long)]
    pub out: Option<PathBuf>,

    /// Optional per-run curve dump (kind,run,x,y)
    #[arg(long)]
    pub curves: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct CvBiasArgs {
    #[arg(long, default_value_t = 300)]
    pub n_train: usize,

    #[arg(long, default_value_t = 10_000)]
    pub n_test: usize,

    #[arg(long, default_value_t = 50)]
    pub dim: usize,

    #[arg(long, default_value_t = 0.75)]
    pub target_auc: f64,

    #[arg(long, default_value_t = 3)]
    pub k_folds: usize,

    #[arg(long, default_value_t = 1000)]
    pub runs: usize,

    #[arg(long, default_value_t = 0.95)]
    pub ci_level: f64,

    #[arg(long, default_value_t = 0.5)]
    pub prevalence: f64,

    #[arg(long, default_value_t = 1.0)]
    pub svm_c: f64,

    #[arg(long, default_value_t = 1e-4)]
    pub svm_tolerance: f64,

    #[arg(long, default_value_t = 10_000)]
    pub svm_max_iters: usize,

    /// Seed (falls back to BENCHGATE_SEED, then a generated seed)
    #[arg(long)]
    pub seed: Option<u64>,

    /// Report JSON path (stdout when omitted)
    #[arg(long)]
    pub out: Option<PathBuf>,
}

pub fn run(cmd: &SimulateCmd) -> Result<()> {
    match cmd {
        SimulateCmd::ScoreDist(args) => run_score_dist(args),
        SimulateCmd::CvBias(args) => run_cv_bias(args),
    }
}

fn run_score_dist(args: &ScoreDistArgs) -> Result<()> {
    let seed = resolve_seed(args.seed)?;
    let pos_dist: ScoreDistribution = args
        .pos_dist
        .parse()
        .map_err(|e| CliError::Validation(format!("--pos-dist: {e}")))?;
    let neg_dist: ScoreDistribution = args
        .neg_dist
        .parse()
        .map_err(|e| CliError::Validation(format!("--neg-dist: {e}")))?;
    let config = ScoreSimConfig {
        n_pos: args.n_pos,
        n_neg: args.n_neg,
        pos_dist,
        neg_dist,
        runs: args.runs,
        seed,
    };
    let sim = run_score_simulation(&config)?;
    if let Some(path) = &args.curves {
        write_curves(
            path,
            sim.runs
                .iter()
                .flat_map(|r| r.curves.iter().map(move |c| (r.run.to_string(), c))),
        )?;
    }
    Report::new(Some(seed), config, Vec::new(), &sim).emit(args.out.as_deref())
}

fn run_cv_bias(args: &CvBiasArgs) -> Result<()> {
    let seed = resolve_seed(args.seed)?;
    let config = CvBiasConfig {
        n_train: args.n_train,
        n_test: args.n_test,
        dim: args.dim,
        target_auc: args.target_auc,
        k_folds: args.k_folds,
        runs: args.runs,
        ci_level: args.ci_level,
        prevalence: args.prevalence,
        svm: SvmParams {
            c: args.svm_c,
            tolerance: args.svm_tolerance,
            max_iters: args.svm_max_iters,
        },
        seed,
    };
    let sim = run_cv_bias_simulation(&config)?;
    Report::new(Some(seed), config, Vec::new(), &sim).emit(args.out.as_deref())
}
