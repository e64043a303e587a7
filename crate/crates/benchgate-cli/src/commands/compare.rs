//! `benchgate compare`: paired sign or Wilcoxon test between two methods
//! at fold or assay-mean level, with optional scatter dump.

use std::collections::BTreeMap;
use std::path::PathBuf;

use clap::{Args, ValueEnum};
use serde::Serialize;

use benchgate::comparison::{
    pairwise_scatter, sign_test, wilcoxon_signed_rank, Alternative, PairedFoldScores, TestResult,
};

use crate::error::{CliError, Result};
use crate::io::{read_fold_metrics, write_scatter, FoldMetricsRow};
use crate::report::{digest_all, Report};

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum TestKind {
    Sign,
    Wilcoxon,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum UnitLevel {
    /// every (assay, fold) cell is one paired unit
    Fold,
    /// one unit per assay: the mean metric over that method's folds
    AssayMean,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum AltArg {
    Greater,
    Less,
    TwoSided,
}

impl From<AltArg> for Alternative {
    fn from(a: AltArg) -> Self {
        match a {
            AltArg::Greater => Alternative::Greater,
            AltArg::Less => Alternative::Less,
            AltArg::TwoSided => Alternative::TwoSided,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum MetricArg {
    AucRoc,
    AucPrc,
}

#[derive(Debug, Args)]
pub struct CompareArgs {
    /// fold_metrics.csv (assay_id,method,fold,auc_roc[,auc_prc],n_pos,n_neg)
    #[arg(long)]
    pub input: PathBuf,

    #[arg(long)]
    pub method_a: String,

    #[arg(long)]
    pub method_b: String,

    #[arg(long, value_enum, default_value_t = TestKind::Sign)]
    pub test: TestKind,

    #[arg(long, value_enum, default_value_t = UnitLevel::Fold)]
    pub level: UnitLevel,

    /// Significance level; win intervals use confidence 1 - alpha
    #[arg(long, default_value_t = 0.05)]
    pub alpha: f64,

    #[arg(long, value_enum, default_value_t = AltArg::Greater)]
    pub alternative: AltArg,

    #[arg(long, value_enum, default_value_t = MetricArg::AucRoc)]
    pub metric: MetricArg,

    /// Optional scatter dump (unit_id,x,y,size)
    #[arg(long)]
    pub scatter: Option<PathBuf>,

    /// Report JSON path (stdout when omitted)
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Serialize)]
struct CompareConfig {
    input: String,
    method_a: String,
    method_b: String,
    test: String,
    level: String,
    alpha: f64,
    alternative: String,
    metric: String,
}

#[derive(Debug, Serialize)]
struct CompareResults {
    n_units: usize,
    test: TestResult,
}

fn metric_of(row: &FoldMetricsRow, metric: MetricArg) -> Option<f64> {
    match metric {
        MetricArg::AucRoc => Some(row.auc_roc),
        MetricArg::AucPrc => row.auc_prc,
    }
}

/// Paired unit values plus per-unit test-set sizes for scatter dots.
fn paired_units(
    rows: &[FoldMetricsRow],
    args: &CompareArgs,
) -> Result<(Vec<String>, Vec<f64>, Vec<f64>, Vec<u64>)> {
    let mut methods_seen = std::collections::BTreeSet::new();
    for row in rows {
        methods_seen.insert(row.method.as_str());
    }
    for needed in [&args.method_a, &args.method_b] {
        if !methods_seen.contains(needed.as_str()) {
            return Err(CliError::Validation(format!(
                "method {needed:?} not present in input (methods: {methods_seen:?})"
            )));
        }
    }

    let mut ids = Vec::new();
    let mut a_values = Vec::new();
    let mut b_values = Vec::new();
    let mut sizes = Vec::new();
    match args.level {
        UnitLevel::Fold => {
            let mut by_unit: BTreeMap<(String, u32), (Option<f64>, Option<f64>, u64)> =
                BTreeMap::new();
            for row in rows {
                let Some(value) = metric_of(row, args.metric) else {
                    continue;
                };
                let entry = by_unit
                    .entry((row.assay_id.clone(), row.fold))
                    .or_insert((None, None, 0));
                if row.method == args.method_a {
                    entry.0 = Some(value);
                    entry.2 = row.n_pos + row.n_neg;
                } else if row.method == args.method_b {
                    entry.1 = Some(value);
                }
            }
            for ((assay, fold), (a, b, size)) in by_unit {
                if let (Some(a), Some(b)) = (a, b) {
                    ids.push(format!("{assay}:{fold}"));
                    a_values.push(a);
                    b_values.push(b);
                    sizes.push(size);
                }
            }
        }
        UnitLevel::AssayMean => {
            let mut by_assay: BTreeMap<String, (Vec<f64>, Vec<f64>, u64)> = BTreeMap::new();
            for row in rows {
                let Some(value) = metric_of(row, args.metric) else {
                    continue;
                };
                let entry = by_assay.entry(row.assay_id.clone()).or_default();
                if row.method == args.method_a {
                    entry.0.push(value);
                    entry.2 += row.n_pos + row.n_neg;
                } else if row.method == args.method_b {
                    entry.1.push(value);
                }
            }
            for (assay, (a, b, size)) in by_assay {
                if !a.is_empty() && !b.is_empty() {
                    ids.push(assay);
                    a_values.push(a.iter().sum::<f64>() / a.len() as f64);
                    b_values.push(b.iter().sum::<f64>() / b.len() as f64);
                    sizes.push(size);
                }
            }
        }
    }
    if ids.is_empty() {
        return Err(CliError::Validation(format!(
            "no common units carry {:?} for both methods",
            args.metric
        )));
    }
    Ok((ids, a_values, b_values, sizes))
}

pub fn run(args: &CompareArgs) -> Result<()> {
    if !(args.alpha > 0.0 && args.alpha < 1.0) {
        return Err(CliError::Validation(format!(
            "alpha {} outside (0,1)",
            args.alpha
        )));
    }
    let rows = read_fold_metrics(&args.input)?;
    let (ids, a_values, b_values, sizes) = paired_units(&rows, args)?;
    let paired = PairedFoldScores::new(ids.clone(), a_values, b_values)?;

    if let Some(path) = &args.scatter {
        let points = pairwise_scatter(&paired, Some(&sizes));
        write_scatter(path, &ids, &points)?;
    }

    let alternative: Alternative = args.alternative.into();
    let confidence = 1.0 - args.alpha;
    let result = match args.test {
        TestKind::Sign => sign_test(&paired, alternative, confidence)?,
        TestKind::Wilcoxon => wilcoxon_signed_rank(&paired, alternative)?,
    };

    let report = Report::new(
        None,
        CompareConfig {
            input: args.input.display().to_string(),
            method_a: args.method_a.clone(),
            method_b: args.method_b.clone(),
            test: format!("{:?}", args.test).to_lowercase(),
            level: format!("{:?}", args.level).to_lowercase(),
            alpha: args.alpha,
            alternative: format!("{:?}", args.alternative).to_lowercase(),
            metric: format!("{:?}", args.metric).to_lowercase(),
        },
        digest_all(&[&args.input])?,
        CompareResults {
            n_units: paired.len(),
            test: result,
        },
    );
    report.emit(args.out.as_deref())
}
