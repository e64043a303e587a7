//! `benchgate wins`: best-method tabulation over all complete fold units.

use std::collections::BTreeMap;
use std::path::PathBuf;

use clap::Args;
use serde::Serialize;

use benchgate::comparison::tabulate_wins;

use crate::error::{CliError, Result};
use crate::io::read_fold_metrics;
use crate::report::{digest_all, Report};

#[derive(Debug, Args)]
pub struct WinsArgs {
    /// fold_metrics.csv (assay_id,method,fold,auc_roc[,auc_prc],n_pos,n_neg)
    #[arg(long)]
    pub input: PathBuf,

    /// Report JSON path (stdout when omitted)
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Serialize)]
struct WinsConfig {
    input: String,
    metric: &'static str,
}

#[derive(Debug, Serialize)]
struct WinsRowReport {
    method: String,
    wins: usize,
    fraction: f64,
    percent: f64,
}

#[derive(Debug, Serialize)]
struct WinsResults {
    total_units: usize,
    incomplete_units_skipped: usize,
    rows: Vec<WinsRowReport>,
}

pub fn run(args: &WinsArgs) -> Result<()> {
    let rows = read_fold_metrics(&args.input)?;
    let mut methods: Vec<String> = rows.iter().map(|r| r.method.clone()).collect();
    methods.sort();
    methods.dedup();
    if methods.len() < 2 {
        return Err(CliError::Validation(format!(
            "win tabulation needs at least 2 methods, found {methods:?}"
        )));
    }

    // values per (assay, fold) unit, keyed by method
    let mut units: BTreeMap<(String, u32), BTreeMap<&str, f64>> = BTreeMap::new();
    for row in &rows {
        units
            .entry((row.assay_id.clone(), row.fold))
            .or_default()
            .insert(row.method.as_str(), row.auc_roc);
    }
    // only units where every method reported
    let mut per_method: Vec<(String, Vec<f64>)> =
        methods.iter().map(|m| (m.clone(), Vec::new())).collect();
    let mut skipped = 0usize;
    for values in units.values() {
        if values.len() != methods.len() {
            skipped += 1;
            continue;
        }
        for (m, column) in per_method.iter_mut() {
            column.push(values[m.as_str()]);
        }
    }
    if per_method[0].1.is_empty() {
        return Err(CliError::Validation(
            "no fold units carry values for every method".to_string(),
        ));
    }

    let table = tabulate_wins(&per_method)?;
    let mut report_rows: Vec<WinsRowReport> = table
        .rows
        .iter()
        .map(|r| WinsRowReport {
            method: r.method.clone(),
            wins: r.wins,
            fraction: r.fraction,
            percent: 100.0 * r.fraction,
        })
        .collect();
    // descending by share, name as the stable tiebreak; Tie row last
    report_rows.sort_by(|a, b| {
        b.fraction
            .partial_cmp(&a.fraction)
            .unwrap()
            .then_with(|| a.method.cmp(&b.method))
    });
    report_rows.push(WinsRowReport {
        method: table.tie.method.clone(),
        wins: table.tie.wins,
        fraction: table.tie.fraction,
        percent: 100.0 * table.tie.fraction,
    });

    let report = Report::new(
        None,
        WinsConfig {
            input: args.input.display().to_string(),
            metric: "auc_roc",
        },
        digest_all(&[&args.input])?,
        WinsResults {
            total_units: table.total_units,
            incomplete_units_skipped: skipped,
            rows: report_rows,
        },
    );
    report.emit(args.out.as_deref())
}
