//! CSV schemas: predictions, fold metrics, groups/items, curve and
//! scatter dumps.
//!
//! Dialect is pinned: UTF-8, comma separator, '.' decimal, header row
//! required. Floats are written with Rust's shortest round-trip
//! formatting, so re-parsing a dump reproduces the values exactly.

use std::fs;
use std::io::Write;
use std::path::Path;

use serde::de::DeserializeOwned;
use serde::Deserialize;

use benchgate::comparison::ScatterPoint;
use benchgate::metrics::Curve;

use crate::error::{CliError, Result};

/// One row of predictions.csv.
#[derive(Debug, Clone, Deserialize)]
pub struct PredictionRow {
    pub assay_id: String,
    pub method: String,
    pub fold: u32,
    pub compound_id: String,
    pub label: u8,
    pub score: f64,
}

/// One row of fold_metrics.csv; `auc_prc` is optional.
#[derive(Debug, Clone, Deserialize)]
pub struct FoldMetricsRow {
    pub assay_id: String,
    pub method: String,
    pub fold: u32,
    pub auc_roc: f64,
    #[serde(default)]
    pub auc_prc: Option<f64>,
    pub n_pos: u64,
    pub n_neg: u64,
}

/// One row of groups.csv.
#[derive(Debug, Clone, Deserialize)]
pub struct GroupRow {
    pub item_id: String,
    pub group_id: String,
}

/// One row of items.csv; `label` enables stratified splitting.
#[derive(Debug, Clone, Deserialize)]
pub struct ItemRow {
    pub item_id: String,
    #[serde(default)]
    pub label: Option<u8>,
}

fn read_csv<T: DeserializeOwned>(path: &Path) -> Result<Vec<T>> {
    let display = path.display().to_string();
    let mut reader = csv::ReaderBuilder::new()
        .trim(csv::Trim::All)
        .from_path(path)
        .map_err(|e| CliError::Validation(format!("{display}: {e}")))?;
    let mut rows = Vec::new();
    for (i, record) in reader.deserialize::<T>().enumerate() {
        let row = record.map_err(|e| {
            let line = e
                .position()
                .map(|p| p.line())
                .unwrap_or(i as u64 + 2);
            CliError::Parse {
                path: display.clone(),
                line,
                message: e.to_string(),
            }
        })?;
        rows.push(row);
    }
    if rows.is_empty() {
        return Err(CliError::Validation(format!("{display}: no data rows")));
    }
    Ok(rows)
}

pub fn read_predictions(path: &Path) -> Result<Vec<PredictionRow>> {
    let rows: Vec<PredictionRow> = read_csv(path)?;
    let display = path.display().to_string();
    let mut seen = std::collections::HashSet::new();
    for (i, row) in rows.iter().enumerate() {
        let line = i as u64 + 2;
        if row.label > 1 {
            return Err(CliError::Parse {
                path: display.clone(),
                line,
                message: format!("label {} must be 0 or 1", row.label),
            });
        }
        if !row.score.is_finite() {
            return Err(CliError::Parse {
                path: display.clone(),
                line,
                message: format!("score {} is not finite", row.score),
            });
        }
        let key = (
            row.assay_id.clone(),
            row.method.clone(),
            row.fold,
            row.compound_id.clone(),
        );
        if !seen.insert(key) {
            return Err(CliError::Parse {
                path: display,
                line,
                message: format!(
                    "duplicate (assay, method, fold, compound) = ({}, {}, {}, {})",
                    row.assay_id, row.method, row.fold, row.compound_id
                ),
            });
        }
    }
    Ok(rows)
}

pub fn read_fold_metrics(path: &Path) -> Result<Vec<FoldMetricsRow>> {
    let rows: Vec<FoldMetricsRow> = read_csv(path)?;
    let display = path.display().to_string();
    for (i, row) in rows.iter().enumerate() {
        let line = i as u64 + 2;
        for (name, value) in [("auc_roc", Some(row.auc_roc)), ("auc_prc", row.auc_prc)] {
            if let Some(v) = value {
                if !(0.0..=1.0).contains(&v) {
                    return Err(CliError::Parse {
                        path: display.clone(),
                        line,
                        message: format!("{name} = {v} outside [0,1]"),
                    });
                }
            }
        }
    }
    Ok(rows)
}

pub fn read_groups(path: &Path) -> Result<Vec<GroupRow>> {
    read_csv(path)
}

pub fn read_items(path: &Path) -> Result<Vec<ItemRow>> {
    let rows: Vec<ItemRow> = read_csv(path)?;
    let display = path.display().to_string();
    for (i, row) in rows.iter().enumerate() {
        if let Some(l) = row.label {
            if l > 1 {
                return Err(CliError::Parse {
                    path: display.clone(),
                    line: i as u64 + 2,
                    message: format!("label {l} must be 0 or 1"),
                });
            }
        }
    }
    Ok(rows)
}

/// Write curve vertices as `kind,run,x,y` rows.
pub fn write_curves<'a, I>(path: &Path, entries: I) -> Result<()>
where
    I: IntoIterator<Item = (String, &'a Curve)>,
{
    let mut out = fs::File::create(path)?;
    writeln!(out, "kind,run,x,y")?;
    for (run, curve) in entries {
        for &(x, y) in &curve.points {
            writeln!(out, "{},{run},{x},{y}", curve.kind.as_str())?;
        }
    }
    Ok(())
}

/// Write scatter triples as `unit_id,x,y,size` rows.
pub fn write_scatter(path: &Path, ids: &[String], points: &[ScatterPoint]) -> Result<()> {
    let mut out = fs::File::create(path)?;
    writeln!(out, "unit_id,x,y,size")?;
    for (id, p) in ids.iter().zip(points) {
        writeln!(out, "{id},{},{},{}", p.x, p.y, p.size)?;
    }
    Ok(())
}

