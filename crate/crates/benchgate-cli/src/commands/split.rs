//! `benchgate split`: nested n x k cross-validation plan emission.

use std::path::{Path, PathBuf};

use clap::Args;
use serde::{Deserialize, Serialize};

use benchgate::splitting::{nested_cv_plan, GroupedDataset, SplitPlan};

use crate::error::{CliError, Result};
use crate::io::{read_groups, read_items};
use crate::report::{resolve_seed, ToolInfo, SCHEMA_VERSION};

#[derive(Debug, Args)]
pub struct SplitArgs {
    /// Number of items to split (alternative to --items)
    #[arg(long, conflicts_with = "items")]
    pub n: Option<usize>,

    /// items.csv (item_id[,label]) naming the items in order
    #[arg(long)]
    pub items: Option<PathBuf>,

    /// groups.csv (item_id,group_id) for group-respecting folds
    #[arg(long)]
    pub groups: Option<PathBuf>,

    /// Outer fold count
    #[arg(long, default_value_t = 3)]
    pub outer: usize,

    /// Inner fold count
    #[arg(long, default_value_t = 2)]
    pub inner: usize,

    /// Stratify ungrouped folds by the items' labels
    #[arg(long, default_value_t = false)]
    pub stratify: bool,

    /// Seed (falls back to BENCHGATE_SEED, then a generated seed)
    #[arg(long)]
    pub seed: Option<u64>,

    /// Plan JSON path (stdout when omitted)
    #[arg(long)]
    pub out: Option<PathBuf>,

    /// Re-read the emitted plan and re-check every invariant
    #[arg(long, default_value_t = false)]
    pub verify: bool,
}

/// Emitted plan document: explicit index lists plus realized fold sizes.
#[derive(Debug, Serialize, Deserialize)]
pub struct PlanDocument {
    pub schema_version: u32,
    #[serde(skip_deserializing)]
    pub tool: Option<ToolInfo>,
    #[serde(skip_deserializing)]
    pub item_ids: Option<Vec<String>>,
    pub outer_fold_sizes: Vec<usize>,
    pub inner_fold_sizes: Vec<Vec<usize>>,
    pub plan: SplitPlan,
}

fn build_dataset(args: &SplitArgs) -> Result<(GroupedDataset, Option<Vec<String>>)> {
    let (ids, labels): (Option<Vec<String>>, Option<Vec<bool>>) = match (&args.n, &args.items) {
        (Some(_), Some(_)) => unreachable!("clap conflicts_with"),
        (Some(n), None) => {
            if *n == 0 {
                return Err(CliError::Validation("--n must be at least 1".to_string()));
            }
            (None, None)
        }
        (None, Some(path)) => {
            let rows = read_items(path)?;
            let ids: Vec<String> = rows.iter().map(|r| r.item_id.clone()).collect();
            let labels = if rows.iter().all(|r| r.label.is_some()) {
                Some(rows.iter().map(|r| r.label == Some(1)).collect())
            } else {
                None
            };
            (Some(ids), labels)
        }
        (None, None) => {
            if args.groups.is_none() {
                return Err(CliError::Validation(
                    "one of --n, --items, or --groups is required".to_string(),
                ));
            }
            (None, None) // items come from the groups file
        }
    };

    let groups: Option<Vec<String>> = match &args.groups {
        None => None,
        Some(path) => {
            let rows = read_groups(path)?;
            match &ids {
                None if args.n.is_some() => {
                    return Err(CliError::Validation(
                        "--groups requires --items (group rows carry item ids, --n does not)"
                            .to_string(),
                    ));
                }
                None => Some(rows.iter().map(|r| r.group_id.clone()).collect()),
                Some(ids) => {
                    let by_item: std::collections::HashMap<&str, &str> = rows
                        .iter()
                        .map(|r| (r.item_id.as_str(), r.group_id.as_str()))
                        .collect();
                    let mut ordered = Vec::with_capacity(ids.len());
                    for id in ids {
                        let g = by_item.get(id.as_str()).ok_or_else(|| {
                            CliError::Validation(format!(
                                "item {id:?} has no group in {}",
                                path.display()
                            ))
                        })?;
                        ordered.push(g.to_string());
                    }
                    Some(ordered)
                }
            }
        }
    };

    let n_items = match (&ids, &groups, args.n) {
        (Some(ids), _, _) => ids.len(),
        (None, Some(g), _) => g.len(),
        (None, None, Some(n)) => n,
        (None, None, None) => unreachable!("validated above"),
    };
    let item_ids = ids.or_else(|| {
        args.groups.as_ref().map(|path| {
            // ids from the groups file keep their row order
            read_groups(path)
                .map(|rows| rows.into_iter().map(|r| r.item_id).collect())
                .unwrap_or_default()
        })
    });

    let mut dataset = GroupedDataset::new(n_items);
    if let Some(labels) = labels {
        dataset = dataset.with_labels(labels)?;
    }
    if let Some(groups) = groups {
        dataset = dataset.with_groups(groups)?;
    }
    Ok((dataset, item_ids))
}

fn verify_plan(path: &Path, dataset: &GroupedDataset) -> Result<()> {
    let raw = std::fs::read_to_string(path)?;
    let doc: PlanDocument = serde_json::from_str(&raw)?;
    doc.plan.validate(dataset)?;
    if doc.outer_fold_sizes != doc.plan.outer_sizes()
        || doc.inner_fold_sizes != doc.plan.inner_sizes()
    {
        return Err(CliError::Validation(
            "emitted fold sizes disagree with the index lists".to_string(),
        ));
    }
    eprintln!(
        "benchgate: plan verified ({} items, {} outer folds, group-safe: {})",
        doc.plan.n_items,
        doc.plan.n_outer,
        dataset.groups().is_some()
    );
    Ok(())
}

pub fn run(args: &SplitArgs) -> Result<()> {
    let seed = resolve_seed(args.seed)?;
    let (dataset, item_ids) = build_dataset(args)?;
    let plan = nested_cv_plan(&dataset, args.outer, args.inner, seed, args.stratify)?;
    let doc = PlanDocument {
        schema_version: SCHEMA_VERSION,
        tool: Some(ToolInfo::current()),
        item_ids,
        outer_fold_sizes: plan.outer_sizes(),
        inner_fold_sizes: plan.inner_sizes(),
        plan,
    };
    let json = serde_json::to_string_pretty(&doc)?;
    match &args.out {
        Some(path) => {
            std::fs::write(path, format!("{json}\n"))?;
            if args.verify {
                verify_plan(path, &dataset)?;
            }
        }
        None => {
            println!("{json}");
            if args.verify {
                doc.plan.validate(&dataset)?;
                eprintln!("benchgate: plan verified (in memory)");
            }
        }
    }
    Ok(())
}
