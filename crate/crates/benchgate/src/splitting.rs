//! Deterministic k-fold, group-aware, and nested n x k cross-validation
//! split planning.
//!
//! Plans are pure functions of (dataset, parameters, seed). Group-aware
//! splits never let a group span folds; balancing is greedy by descending
//! group size, so realized fold sizes are recorded rather than assumed
//! equal.

use rand::seq::SliceRandom;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::rng::{mix, stream};

/// Items to split, with optional binary labels (for stratification) and
/// optional per-item group ids (groups arrive precomputed, e.g. scaffold
/// ids from a CSV).
#[derive(Debug, Clone)]
pub struct GroupedDataset {
    n_items: usize,
    labels: Option<Vec<bool>>,
    groups: Option<Vec<String>>,
}

impl GroupedDataset {
    pub fn new(n_items: usize) -> Self {
        Self {
            n_items,
            labels: None,
            groups: None,
        }
    }

    pub fn with_labels(mut self, labels: Vec<bool>) -> Result<Self> {
        if labels.len() != self.n_items {
            return Err(Error::ShapeMismatch(format!(
                "{} labels for {} items",
                labels.len(),
                self.n_items
            )));
        }
        self.labels = Some(labels);
        Ok(self)
    }

    pub fn with_groups(mut self, groups: Vec<String>) -> Result<Self> {
        if groups.len() != self.n_items {
            return Err(Error::ShapeMismatch(format!(
                "{} group ids for {} items",
                groups.len(),
                self.n_items
            )));
        }
        self.groups = Some(groups);
        Ok(self)
    }

    pub fn n_items(&self) -> usize {
        self.n_items
    }

    pub fn labels(&self) -> Option<&[bool]> {
        self.labels.as_deref()
    }

    pub fn groups(&self) -> Option<&[String]> {
        self.groups.as_deref()
    }
}

/// Plain or stratified k-fold assignment.
///
/// Fold sizes differ by at most one. With stratification, each class is
/// dealt cyclically across folds (with a running offset), so per-fold
/// class counts stay within one of proportionality and total sizes within
/// one overall.
pub fn kfold(
    n_items: usize,
    k: usize,
    seed: u64,
    stratify_labels: Option<&[bool]>,
) -> Result<Vec<Vec<usize>>> {
    if k < 2 {
        return Err(Error::invalid(format!("k = {k} must be at least 2")));
    }
    if k > n_items {
        return Err(Error::invalid(format!(
            "k = {k} exceeds item count {n_items}"
        )));
    }
    if let Some(labels) = stratify_labels {
        if labels.len() != n_items {
            return Err(Error::ShapeMismatch(format!(
                "{} labels for {n_items} items",
                labels.len()
            )));
        }
    }
    let mut rng = stream(seed, 0);
    let mut folds: Vec<Vec<usize>> = vec![Vec::new(); k];
    match stratify_labels {
        None => {
            let mut indices: Vec<usize> = (0..n_items).collect();
            indices.shuffle(&mut rng);
            // first n % k folds take one extra item
            let base = n_items / k;
            let extra = n_items % k;
            let mut cursor = 0;
            for (f, fold) in folds.iter_mut().enumerate() {
                let size = base + usize::from(f < extra);
                fold.extend_from_slice(&indices[cursor..cursor + size]);
                cursor += size;
            }
        }
        Some(labels) => {
            let mut offset = 0usize;
            for class in [false, true] {
                let mut members: Vec<usize> = (0..n_items).filter(|&i| labels[i] == class).collect();
                members.shuffle(&mut rng);
                for (i, item) in members.iter().enumerate() {
                    folds[(offset + i) % k].push(*item);
                }
                offset = (offset + members.len()) % k;
            }
        }
    }
    for fold in &mut folds {
        fold.sort_unstable();
    }
    Ok(folds)
}

/// Group-respecting k-fold: no group id spans folds.
///
/// Groups are ordered by descending size (ties broken by a seeded shuffle)
/// and each assigned whole to the currently smallest fold.
pub fn group_kfold(groups: &[String], k: usize, seed: u64) -> Result<Vec<Vec<usize>>> {
    if k < 2 {
        return Err(Error::invalid(format!("k = {k} must be at least 2")));
    }
    if groups.is_empty() {
        return Err(Error::invalid("no items to split"));
    }
    // intern group ids in first-appearance order
    let mut id_of = std::collections::HashMap::new();
    let mut members: Vec<Vec<usize>> = Vec::new();
    for (item, g) in groups.iter().enumerate() {
        let next = members.len();
        let gi = *id_of.entry(g.as_str()).or_insert(next);
        if gi == members.len() {
            members.push(Vec::new());
        }
        members[gi].push(item);
    }
    if members.len() < k {
        return Err(Error::TooFewGroups {
            distinct: members.len(),
            k,
        });
    }
    let mut order: Vec<usize> = (0..members.len()).collect();
    order.shuffle(&mut stream(seed, 0));
    // stable sort keeps the shuffled order among equal sizes
    order.sort_by_key(|&g| std::cmp::Reverse(members[g].len()));

    let mut folds: Vec<Vec<usize>> = vec![Vec::new(); k];
    for g in order {
        let smallest = (0..k).min_by_key(|&f| (folds[f].len(), f)).expect("k >= 2");
        folds[smallest].extend_from_slice(&members[g]);
    }
    for fold in &mut folds {
        fold.sort_unstable();
    }
    Ok(folds)
}

/// A nested n x k cross-validation assignment.
///
/// `outer_folds` partition all items; `inner_folds[i]` partitions the
/// complement of outer fold `i`.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SplitPlan {
    pub n_items: usize,
    pub n_outer: usize,
    pub k_inner: usize,
    pub seed: u64,
    pub grouped: bool,
    pub stratified: bool,
    pub outer_folds: Vec<Vec<usize>>,
    pub inner_folds: Vec<Vec<Vec<usize>>>,
}

impl SplitPlan {
    /// Realized outer fold sizes.
    pub fn outer_sizes(&self) -> Vec<usize> {
        self.outer_folds.iter().map(Vec::len).collect()
    }

    /// Realized inner fold sizes, per outer fold.
    pub fn inner_sizes(&self) -> Vec<Vec<usize>> {
        self.inner_folds
            .iter()
            .map(|inner| inner.iter().map(Vec::len).collect())
            .collect()
    }

    /// Re-check every structural invariant against the dataset: outer
    /// folds partition the items, each inner list partitions its outer
    /// complement, and no group spans folds at either level.
    pub fn validate(&self, dataset: &GroupedDataset) -> Result<()> {
        let n = dataset.n_items();
        let mut seen = vec![false; n];
        for fold in &self.outer_folds {
            for &i in fold {
                if i >= n {
                    return Err(Error::invalid(format!("index {i} out of range")));
                }
                if seen[i] {
                    return Err(Error::invalid(format!(
                        "item {i} appears in more than one outer fold"
                    )));
                }
                seen[i] = true;
            }
        }
        if !seen.iter().all(|&s| s) {
            return Err(Error::invalid("outer folds do not cover all items"));
        }
        if self.inner_folds.len() != self.outer_folds.len() {
            return Err(Error::ShapeMismatch(
                "one inner fold list per outer fold required".to_string(),
            ));
        }
        for (outer_idx, inner) in self.inner_folds.iter().enumerate() {
            let mut in_outer = vec![false; n];
            for &i in &self.outer_folds[outer_idx] {
                in_outer[i] = true;
            }
            let mut covered = vec![false; n];
            for fold in inner {
                for &i in fold {
                    if i >= n || in_outer[i] {
                        return Err(Error::invalid(format!(
                            "inner fold of outer {outer_idx} contains test item {i}"
                        )));
                    }
                    if covered[i] {
                        return Err(Error::invalid(format!(
                            "item {i} appears in two inner folds of outer {outer_idx}"
                        )));
                    }
                    covered[i] = true;
                }
            }
            for i in 0..n {
                if !in_outer[i] && !covered[i] {
                    return Err(Error::invalid(format!(
                        "item {i} missing from inner folds of outer {outer_idx}"
                    )));
                }
            }
        }
        if let Some(groups) = dataset.groups() {
            check_group_integrity(&self.outer_folds, groups)?;
            for inner in &self.inner_folds {
                check_group_integrity(inner, groups)?;
            }
        }
        Ok(())
    }
}

fn check_group_integrity(folds: &[Vec<usize>], groups: &[String]) -> Result<()> {
    let mut fold_of_group: std::collections::HashMap<&str, usize> = std::collections::HashMap::new();
    for (f, fold) in folds.iter().enumerate() {
        for &i in fold {
            let g = groups[i].as_str();
            if let Some(&prev) = fold_of_group.get(g) {
                if prev != f {
                    return Err(Error::invalid(format!(
                        "group {g} spans folds {prev} and {f}"
                    )));
                }
            } else {
                fold_of_group.insert(g, f);
            }
        }
    }
    Ok(())
}

/// Build a nested n x k cross-validation plan.
///
/// Outer folds are group-respecting when the dataset carries groups; each
/// inner loop re-splits the remaining training items with a seed derived
/// from (seed, outer index). Stratification applies only to ungrouped
/// splits and is off by default at the CLI.
pub fn nested_cv_plan(
    dataset: &GroupedDataset,
    n_outer: usize,
    k_inner: usize,
    seed: u64,
    stratify: bool,
) -> Result<SplitPlan> {
    if n_outer < 2 || k_inner < 2 {
        return Err(Error::invalid(
            "nested CV needs at least 2 outer and 2 inner folds",
        ));
    }
    if stratify && dataset.labels().is_none() {
        return Err(Error::invalid("stratification requested without labels"));
    }
    let n = dataset.n_items();
    let outer_folds = match dataset.groups() {
        Some(groups) => group_kfold(groups, n_outer, mix(seed, 0))?,
        None => kfold(
            n,
            n_outer,
            mix(seed, 0),
            if stratify { dataset.labels() } else { None },
        )?,
    };

    let mut inner_folds = Vec::with_capacity(n_outer);
    for (outer_idx, outer_fold) in outer_folds.iter().enumerate() {
        let mut is_test = vec![false; n];
        for &i in outer_fold {
            is_test[i] = true;
        }
        let train: Vec<usize> = (0..n).filter(|&i| !is_test[i]).collect();
        let inner_seed = mix(seed, 1 + outer_idx as u64);
        let local = match dataset.groups() {
            Some(groups) => {
                let sub: Vec<String> = train.iter().map(|&i| groups[i].clone()).collect();
                group_kfold(&sub, k_inner, inner_seed)?
            }
            None => {
                let sub_labels: Option<Vec<bool>> = if stratify {
                    dataset.labels().map(|l| train.iter().map(|&i| l[i]).collect())
                } else {
                    None
                };
                kfold(train.len(), k_inner, inner_seed, sub_labels.as_deref())?
            }
        };
        // map local training positions back to original item indices
        inner_folds.push(
            local
                .into_iter()
                .map(|fold| fold.into_iter().map(|i| train[i]).collect())
                .collect(),
        );
    }
    Ok(SplitPlan {
        n_items: n,
        n_outer,
        k_inner,
        seed,
        grouped: dataset.groups().is_some(),
        stratified: stratify,
        outer_folds,
        inner_folds,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn kfold_even_sizes() {
        let folds = kfold(6, 3, 1, None).unwrap();
        assert_eq!(folds.len(), 3);
        assert!(folds.iter().all(|f| f.len() == 2));
    }

    #[test]
    fn kfold_sizes_differ_by_at_most_one() {
        let folds = kfold(10, 3, 1, None).unwrap();
        let sizes: Vec<usize> = folds.iter().map(Vec::len).collect();
        assert_eq!(sizes.iter().sum::<usize>(), 10);
        assert!(sizes.iter().max().unwrap() - sizes.iter().min().unwrap() <= 1);
    }

    #[test]
    fn kfold_is_deterministic() {
        assert_eq!(kfold(20, 4, 9, None).unwrap(), kfold(20, 4, 9, None).unwrap());
        assert_ne!(kfold(20, 4, 9, None).unwrap(), kfold(20, 4, 10, None).unwrap());
    }

    #[test]
    fn kfold_rejects_bad_k() {
        assert!(kfold(5, 6, 0, None).is_err());
        assert!(kfold(5, 1, 0, None).is_err());
    }

    #[test]
    fn kfold_stratified_balances_classes() {
        // 3 positives, 7 negatives, 3 folds: every fold gets exactly 1 positive
        let labels: Vec<bool> = (0..10).map(|i| i < 3).collect();
        let folds = kfold(10, 3, 5, Some(&labels)).unwrap();
        for fold in &folds {
            let pos = fold.iter().filter(|&&i| labels[i]).count();
            assert_eq!(pos, 1);
        }
        let sizes: Vec<usize> = folds.iter().map(Vec::len).collect();
        assert!(sizes.iter().max().unwrap() - sizes.iter().min().unwrap() <= 1);
    }

    #[test]
    fn kfold_partition_property() {
        for seed in 0..10u64 {
            let folds = kfold(37, 5, seed, None).unwrap();
            let mut all: Vec<usize> = folds.concat();
            all.sort_unstable();
            assert_eq!(all, (0..37).collect::<Vec<_>>());
        }
    }

    fn groups_of(ids: &[&str]) -> Vec<String> {
        ids.iter().map(|s| s.to_string()).collect()
    }

    #[test]
    fn group_kfold_one_group_per_fold() {
        let groups = groups_of(&["A", "A", "B", "B", "C", "C"]);
        let folds = group_kfold(&groups, 3, 7).unwrap();
        for fold in &folds {
            assert_eq!(fold.len(), 2);
            let gset: std::collections::HashSet<&str> =
                fold.iter().map(|&i| groups[i].as_str()).collect();
            assert_eq!(gset.len(), 1);
        }
    }

    #[test]
    fn group_kfold_big_group_stays_intact() {
        let mut groups = vec!["big".to_string(); 9];
        groups.extend(groups_of(&["s1", "s2", "s3"]));
        let folds = group_kfold(&groups, 2, 3).unwrap();
        let big_folds: std::collections::HashSet<usize> = folds
            .iter()
            .enumerate()
            .filter(|(_, f)| f.iter().any(|&i| groups[i] == "big"))
            .map(|(fi, _)| fi)
            .collect();
        assert_eq!(big_folds.len(), 1);
        // the singletons all land in the other fold
        let other = 1 - *big_folds.iter().next().unwrap();
        assert_eq!(folds[other].len(), 3);
    }

    #[test]
    fn group_kfold_too_few_groups() {
        let groups = groups_of(&["A", "A", "B"]);
        assert!(matches!(
            group_kfold(&groups, 3, 0),
            Err(Error::TooFewGroups { distinct: 2, k: 3 })
        ));
    }

    #[test]
    fn nested_plan_ungrouped_shape() {
        let plan = nested_cv_plan(&GroupedDataset::new(6), 3, 2, 11, false).unwrap();
        assert!(plan.outer_folds.iter().all(|f| f.len() == 2));
        for inner in &plan.inner_folds {
            assert_eq!(inner.len(), 2);
            assert!(inner.iter().all(|f| f.len() == 2));
        }
        plan.validate(&GroupedDataset::new(6)).unwrap();
    }

    #[test]
    fn nested_plan_grouped_integrity() {
        let groups: Vec<String> = (0..30).map(|i| format!("g{}", i / 3)).collect();
        let ds = GroupedDataset::new(30).with_groups(groups).unwrap();
        let plan = nested_cv_plan(&ds, 3, 2, 13, false).unwrap();
        plan.validate(&ds).unwrap();
    }

    #[test]
    fn nested_plan_is_deterministic() {
        let ds = GroupedDataset::new(24);
        let a = nested_cv_plan(&ds, 3, 2, 99, false).unwrap();
        let b = nested_cv_plan(&ds, 3, 2, 99, false).unwrap();
        assert_eq!(
            serde_json::to_string(&a).unwrap(),
            serde_json::to_string(&b).unwrap()
        );
    }

    #[test]
    fn validate_catches_group_violation() {
        let groups = groups_of(&["A", "A", "B", "B"]);
        let ds = GroupedDataset::new(4).with_groups(groups).unwrap();
        let plan = SplitPlan {
            n_items: 4,
            n_outer: 2,
            k_inner: 2,
            seed: 0,
            grouped: true,
            stratified: false,
            outer_folds: vec![vec![0, 2], vec![1, 3]],
            inner_folds: vec![vec![vec![1], vec![3]], vec![vec![0], vec![2]]],
        };
        assert!(plan.validate(&ds).is_err());
    }
}
