//! `benchgate eval`: per-(assay, method, fold) metrics with uncertainty,
//! per-assay fold summaries, and optional curve dumps.

use std::collections::BTreeMap;
use std::path::PathBuf;

use clap::Args;
use serde::Serialize;

use benchgate::metrics::{
    auc_prc, auc_roc, enrichment_curve, pr_curve, roc_curve, roc_enrichment, Curve,
    EnrichmentMode, PredictionSet,
};
use benchgate::uncertainty::{
    auc_ci, fold_mean_ci, hanley_mcneil_se, AucEstimate, ConfidenceInterval,
};

use crate::error::{CliError, Result};
use crate::io::{read_predictions, write_curves};
use crate::report::{digest_all, Report};

#[derive(Debug, Args)]
pub struct EvalArgs {
    /// predictions.csv (assay_id,method,fold,compound_id,label,score)
    #[arg(long)]
    pub input: PathBuf,

    /// Comma-separated metrics: auc_roc, auc_prc, enrichment,
    /// roc_enrichment:FPR (repeatable)
    #[arg(long, default_value = "auc_roc,auc_prc")]
    pub metrics: String,

    /// Confidence level for intervals
    #[arg(long, default_value_t = 0.95)]
    pub level: f64,

    /// Report JSON path (stdout when omitted)
    #[arg(long)]
    pub out: Option<PathBuf>,

    /// Optional curve dump (kind,run,x,y)
    #[arg(long)]
    pub curves: Option<PathBuf>,
}

#[derive(Debug, Clone, PartialEq)]
enum MetricChoice {
    AucRoc,
    AucPrc,
    Enrichment,
    RocEnrichment(f64),
}

fn parse_metrics(raw: &str) -> Result<Vec<MetricChoice>> {
    let mut choices = Vec::new();
    for token in raw.split(',').map(str::trim).filter(|t| !t.is_empty()) {
        let choice = if token == "auc_roc" {
            MetricChoice::AucRoc
        } else if token == "auc_prc" {
            MetricChoice::AucPrc
        } else if token == "enrichment" {
            MetricChoice::Enrichment
        } else if let Some(fpr) = token.strip_prefix("roc_enrichment:") {
            let fpr: f64 = fpr.parse().map_err(|_| {
                CliError::Validation(format!("bad FPR in metric token {token:?}"))
            })?;
            MetricChoice::RocEnrichment(fpr)
        } else {
            return Err(CliError::Validation(format!(
                "unknown metric {token:?} (expected auc_roc, auc_prc, enrichment, roc_enrichment:FPR)"
            )));
        };
        if !choices.contains(&choice) {
            choices.push(choice);
        }
    }
    if choices.is_empty() {
        return Err(CliError::Validation("no metrics requested".to_string()));
    }
    Ok(choices)
}

/// Interval or the explicit can't-compute marker.
#[derive(Debug, Clone, Serialize)]
#[serde(untagged)]
pub enum CiField {
    Interval(ConfidenceInterval),
    Marker(&'static str),
}

impl CiField {
    fn from_option(ci: Option<ConfidenceInterval>) -> Self {
        match ci {
            Some(ci) => CiField::Interval(ci),
            None => CiField::Marker(UNDEFINED_CI_MARKER),
        }
    }
}

pub const UNDEFINED_CI_MARKER: &str = "(?, ?)";

#[derive(Debug, Serialize)]
struct AucReport {
    value: f64,
    se: Option<f64>,
    ci: CiField,
}

#[derive(Debug, Serialize)]
struct EnrichmentReport {
    fraction_screened: f64,
    fraction_found: f64,
    ef_ratio: f64,
}

#[derive(Debug, Serialize)]
struct RocEnrichmentReport {
    fpr: f64,
    tpr: f64,
}

#[derive(Debug, Serialize)]
struct GroupReport {
    assay_id: String,
    method: String,
    fold: u32,
    n_pos: usize,
    n_neg: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    auc_roc: Option<AucReport>,
    #[serde(skip_serializing_if = "Option::is_none")]
    auc_prc: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    enrichment: Option<Vec<EnrichmentReport>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    roc_enrichment: Option<Vec<RocEnrichmentReport>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    error: Option<String>,
}

#[derive(Debug, Serialize)]
struct FoldSummaryReport {
    assay_id: String,
    method: String,
    metric: String,
    n_folds: usize,
    mean: f64,
    sem: f64,
    ci: ConfidenceInterval,
}

#[derive(Debug, Serialize)]
struct EvalResults {
    groups: Vec<GroupReport>,
    fold_summaries: Vec<FoldSummaryReport>,
}

#[derive(Debug, Serialize)]
struct EvalConfig {
    input: String,
    metrics: String,
    level: f64,
}

/// Screened-fraction checkpoints reported by `enrichment`.
const ENRICHMENT_FRACTIONS: [f64; 4] = [0.005, 0.01, 0.02, 0.05];

pub fn run(args: &EvalArgs) -> Result<()> {
    if !(args.level > 0.0 && args.level < 1.0) {
        return Err(CliError::Validation(format!(
            "level {} outside (0,1)",
            args.level
        )));
    }
    let choices = parse_metrics(&args.metrics)?;
    let rows = read_predictions(&args.input)?;

    // deterministic group order
    let mut groups: BTreeMap<(String, String, u32), Vec<(String, bool, f64)>> = BTreeMap::new();
    for row in rows {
        groups
            .entry((row.assay_id, row.method, row.fold))
            .or_default()
            .push((row.compound_id, row.label == 1, row.score));
    }

    let mut group_reports = Vec::new();
    let mut curve_dump: Vec<(String, Curve)> = Vec::new();
    // per (assay, method, metric): fold values for the summary pass
    let mut fold_values: BTreeMap<(String, String, &'static str), Vec<f64>> = BTreeMap::new();

    for ((assay_id, method, fold), records) in groups {
        let preds = PredictionSet::from_records(records)
            .map_err(|e| CliError::Validation(format!("group ({assay_id}, {method}, {fold}): {e}")))?;
        let mut report = GroupReport {
            assay_id: assay_id.clone(),
            method: method.clone(),
            fold,
            n_pos: preds.n_pos(),
            n_neg: preds.n_neg(),
            auc_roc: None,
            auc_prc: None,
            enrichment: None,
            roc_enrichment: None,
            error: None,
        };
        let run_id = format!("{assay_id}|{method}|{fold}");
        let mut group_errors = Vec::new();

        for choice in &choices {
            match choice {
                MetricChoice::AucRoc => match auc_roc(&preds) {
                    Ok(value) => {
                        let se = hanley_mcneil_se(value, preds.n_pos(), preds.n_neg())?;
                        let est = AucEstimate {
                            value,
                            n_pos: preds.n_pos(),
                            n_neg: preds.n_neg(),
                            se: Some(se),
                            ci: None,
                        };
                        let ci = auc_ci(&est, args.level)?;
                        report.auc_roc = Some(AucReport {
                            value,
                            se: Some(se),
                            ci: CiField::from_option(ci),
                        });
                        fold_values
                            .entry((assay_id.clone(), method.clone(), "auc_roc"))
                            .or_default()
                            .push(value);
                        if args.curves.is_some() {
                            curve_dump.push((run_id.clone(), roc_curve(&preds)?));
                        }
                    }
                    Err(e) => group_errors.push(e.to_string()),
                },
                MetricChoice::AucPrc => match auc_prc(&preds) {
                    Ok(value) => {
                        report.auc_prc = Some(value);
                        fold_values
                            .entry((assay_id.clone(), method.clone(), "auc_prc"))
                            .or_default()
                            .push(value);
                        if args.curves.is_some() {
                            curve_dump.push((run_id.clone(), pr_curve(&preds)?));
                        }
                    }
                    Err(e) => group_errors.push(e.to_string()),
                },
                MetricChoice::Enrichment => {
                    match enrichment_curve(&preds, EnrichmentMode::FractionFound) {
                        Ok(found) => {
                            let ratio = enrichment_curve(&preds, EnrichmentMode::EfRatio)?;
                            report.enrichment = Some(
                                ENRICHMENT_FRACTIONS
                                    .iter()
                                    .map(|&x| EnrichmentReport {
                                        fraction_screened: x,
                                        fraction_found: found.step_value_at(x),
                                        ef_ratio: ratio.step_value_at(x),
                                    })
                                    .collect(),
                            );
                            if args.curves.is_some() {
                                curve_dump.push((run_id.clone(), found));
                                curve_dump.push((run_id.clone(), ratio));
                            }
                        }
                        Err(e) => group_errors.push(e.to_string()),
                    }
                }
                MetricChoice::RocEnrichment(fpr) => match roc_enrichment(&preds, *fpr) {
                    Ok(tpr) => {
                        report
                            .roc_enrichment
                            .get_or_insert_with(Vec::new)
                            .push(RocEnrichmentReport { fpr: *fpr, tpr });
                    }
                    Err(e) => group_errors.push(e.to_string()),
                },
            }
        }
        if !group_errors.is_empty() {
            report.error = Some(group_errors.join("; "));
        }
        group_reports.push(report);
    }

    let mut fold_summaries = Vec::new();
    for ((assay_id, method, metric), values) in fold_values {
        if values.len() < 2 {
            continue;
        }
        let summary = fold_mean_ci(&values, args.level)?;
        fold_summaries.push(FoldSummaryReport {
            assay_id,
            method,
            metric: metric.to_string(),
            n_folds: summary.n_folds,
            mean: summary.mean,
            sem: summary.sem,
            ci: summary.ci,
        });
    }

    if let Some(curves_path) = &args.curves {
        write_curves(
            curves_path,
            curve_dump.iter().map(|(run, c)| (run.clone(), c)),
        )?;
    }

    let report = Report::new(
        None,
        EvalConfig {
            input: args.input.display().to_string(),
            metrics: args.metrics.clone(),
            level: args.level,
        },
        digest_all(&[&args.input])?,
        EvalResults {
            groups: group_reports,
            fold_summaries,
        },
    );
    report.emit(args.out.as_deref())
}
