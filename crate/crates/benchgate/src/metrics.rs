//! Threshold-free ranking metrics for binary classifiers.
//!
//! All operations rank items by descending score and commit tied scores as
//! a single atomic group, so no metric depends on an arbitrary intra-tie
//! ordering. AUC-ROC follows the Wilcoxon-Mann-Whitney identity (tied pairs
//! count 1/2); the precision-recall area is average precision, not a
//! trapezoidal interpolation.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Scored, binary-labeled items for one evaluation unit.
///
/// Scores must be finite; item ids are optional (simulation-generated sets
/// omit them). Positive/negative counts are cached at construction.
#[derive(Debug, Clone)]
pub struct PredictionSet {
    ids: Option<Vec<String>>,
    labels: Vec<bool>,
    scores: Vec<f64>,
    n_pos: usize,
    n_neg: usize,
}

impl PredictionSet {
    /// Build from parallel label/score vectors (`true` = active).
    pub fn from_labeled_scores(labels: Vec<bool>, scores: Vec<f64>) -> Result<Self> {
        Self::build(None, labels, scores)
    }

    /// Build from (id, label, score) records.
    pub fn from_records<I, S>(records: I) -> Result<Self>
    where
        I: IntoIterator<Item = (S, bool, f64)>,
        S: Into<String>,
    {
        let mut ids = Vec::new();
        let mut labels = Vec::new();
        let mut scores = Vec::new();
        for (id, label, score) in records {
            ids.push(id.into());
            labels.push(label);
            scores.push(score);
        }
        Self::build(Some(ids), labels, scores)
    }

    fn build(ids: Option<Vec<String>>, labels: Vec<bool>, scores: Vec<f64>) -> Result<Self> {
        if labels.len() != scores.len() {
            return Err(Error::ShapeMismatch(format!(
                "{} labels vs {} scores",
                labels.len(),
                scores.len()
            )));
        }
        if labels.is_empty() {
            return Err(Error::invalid("prediction set must contain at least one item"));
        }
        if let Some(bad) = scores.iter().position(|s| !s.is_finite()) {
            return Err(Error::invalid(format!(
                "score at index {bad} is not finite"
            )));
        }
        let n_pos = labels.iter().filter(|&&l| l).count();
        let n_neg = labels.len() - n_pos;
        Ok(Self {
            ids,
            labels,
            scores,
            n_pos,
            n_neg,
        })
    }

    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }

    pub fn n_pos(&self) -> usize {
        self.n_pos
    }

    pub fn n_neg(&self) -> usize {
        self.n_neg
    }

    pub fn ids(&self) -> Option<&[String]> {
        self.ids.as_deref()
    }

    pub fn labels(&self) -> &[bool] {
        &self.labels
    }

    pub fn scores(&self) -> &[f64] {
        &self.scores
    }

    /// Tied-score groups in descending score order, with per-group
    /// positive/negative counts. The basis of every metric below.
    fn tie_groups(&self) -> Vec<TieGroup> {
        let mut order: Vec<usize> = (0..self.len()).collect();
        order.sort_unstable_by(|&a, &b| {
            self.scores[b]
                .partial_cmp(&self.scores[a])
                .expect("scores are finite")
        });
        let mut groups = Vec::new();
        let mut i = 0;
        while i < order.len() {
            let score = self.scores[order[i]];
            let mut pos = 0usize;
            let mut neg = 0usize;
            while i < order.len() && self.scores[order[i]] == score {
                if self.labels[order[i]] {
                    pos += 1;
                } else {
                    neg += 1;
                }
                i += 1;
            }
            groups.push(TieGroup { score, pos, neg });
        }
        groups
    }
}

#[derive(Debug, Clone, Copy)]
struct TieGroup {
    #[allow(dead_code)]
    score: f64,
    pos: usize,
    neg: usize,
}

/// Which curve a point list describes.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CurveKind {
    Roc,
    Prc,
    EnrichmentFractionFound,
    EnrichmentRatio,
}

impl CurveKind {
    pub fn as_str(&self) -> &'static str {
        match self {
            CurveKind::Roc => "roc",
            CurveKind::Prc => "prc",
            CurveKind::EnrichmentFractionFound => "ef_fraction_found",
            CurveKind::EnrichmentRatio => "ef_ratio",
        }
    }
}

/// An ordered polyline of (x, y) metric points.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct Curve {
    pub kind: CurveKind,
    pub points: Vec<(f64, f64)>,
}

impl Curve {
    /// Step-function value at `x`: the y of the last point with x' <= x,
    /// or 0 before the first point.
    pub fn step_value_at(&self, x: f64) -> f64 {
        let mut y = 0.0;
        for &(px, py) in &self.points {
            if px <= x {
                y = py;
            } else {
                break;
            }
        }
        y
    }
}

/// Enrichment-curve y axis: fraction of all actives found, or that fraction
/// divided by the fraction screened.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum EnrichmentMode {
    FractionFound,
    EfRatio,
}

/// ROC curve: TPR vs FPR from (0,0) to (1,1).
///
/// One sweep point per distinct score; a tied group contributes a single
/// diagonal segment. Interior points of straight segments are dropped
/// (detected exactly on the integer count lattice), so a perfect ranking
/// reduces to the three corner vertices.
pub fn roc_curve(preds: &PredictionSet) -> Result<Curve> {
    if preds.n_pos == 0 {
        return Err(Error::EmptyClass("no positive items"));
    }
    if preds.n_neg == 0 {
        return Err(Error::EmptyClass("no negative items"));
    }
    let mut vertices: Vec<(i64, i64)> = vec![(0, 0)];
    let mut fp = 0i64;
    let mut tp = 0i64;
    for g in preds.tie_groups() {
        fp += g.neg as i64;
        tp += g.pos as i64;
        push_simplified(&mut vertices, (fp, tp));
    }
    let n = preds.n_neg as f64;
    let p = preds.n_pos as f64;
    let points = vertices
        .into_iter()
        .map(|(x, y)| (x as f64 / n, y as f64 / p))
        .collect();
    Ok(Curve {
        kind: CurveKind::Roc,
        points,
    })
}

/// Append a lattice vertex, removing the previous one if it has become an
/// interior point of a straight segment.
fn push_simplified(vertices: &mut Vec<(i64, i64)>, next: (i64, i64)) {
    while vertices.len() >= 2 {
        let a = vertices[vertices.len() - 2];
        let b = vertices[vertices.len() - 1];
        let cross = (b.0 - a.0) as i128 * (next.1 - a.1) as i128
            - (b.1 - a.1) as i128 * (next.0 - a.0) as i128;
        if cross == 0 {
            vertices.pop();
        } else {
            break;
        }
    }
    vertices.push(next);
}

/// AUC-ROC via the Wilcoxon-Mann-Whitney pair count:
/// (concordant + tied/2) / (n_pos * n_neg).
pub fn auc_roc(preds: &PredictionSet) -> Result<f64> {
    if preds.n_pos == 0 {
        return Err(Error::EmptyClass("no positive items"));
    }
    if preds.n_neg == 0 {
        return Err(Error::EmptyClass("no negative items"));
    }
    let mut concordant: u128 = 0;
    let mut tied: u128 = 0;
    let mut neg_above: u128 = 0; // negatives with strictly higher score
    let n_neg = preds.n_neg as u128;
    for g in preds.tie_groups() {
        let pos = g.pos as u128;
        let neg = g.neg as u128;
        concordant += pos * (n_neg - neg_above - neg);
        tied += pos * neg;
        neg_above += neg;
    }
    let pairs = (preds.n_pos as f64) * (preds.n_neg as f64);
    Ok((concordant as f64 + 0.5 * tied as f64) / pairs)
}

/// Trapezoidal area under a curve's points; the independent integration
/// route cross-checked against [`auc_roc`].
pub fn trapezoid_area(curve: &Curve) -> f64 {
    let pts = &curve.points;
    let mut area = 0.0;
    for w in pts.windows(2) {
        let (x0, y0) = w[0];
        let (x1, y1) = w[1];
        area += (x1 - x0) * (y0 + y1) / 2.0;
    }
    area
}

/// Precision-recall curve: one (recall, precision) point per tied-score
/// group, evaluated after the group commits. Recall spans (0, 1]; there is
/// no synthetic anchor at recall 0.
pub fn pr_curve(preds: &PredictionSet) -> Result<Curve> {
    if preds.n_pos == 0 {
        return Err(Error::EmptyClass("no positive items"));
    }
    let p = preds.n_pos as f64;
    let mut tp = 0usize;
    let mut fp = 0usize;
    let mut points = Vec::new();
    for g in preds.tie_groups() {
        tp += g.pos;
        fp += g.neg;
        points.push((tp as f64 / p, tp as f64 / (tp + fp) as f64));
    }
    Ok(Curve {
        kind: CurveKind::Prc,
        points,
    })
}

/// Area under the precision-recall curve as average precision:
/// sum of (delta recall) * precision over rank steps that retrieve
/// positives.
pub fn auc_prc(preds: &PredictionSet) -> Result<f64> {
    if preds.n_pos == 0 {
        return Err(Error::EmptyClass("no positive items"));
    }
    if preds.n_neg == 0 {
        return Err(Error::EmptyClass("no negative items"));
    }
    let p = preds.n_pos as f64;
    let mut tp = 0usize;
    let mut fp = 0usize;
    let mut ap = 0.0;
    for g in preds.tie_groups() {
        tp += g.pos;
        fp += g.neg;
        if g.pos > 0 {
            ap += (g.pos as f64 / p) * (tp as f64 / (tp + fp) as f64);
        }
    }
    Ok(ap)
}

/// Enrichment curve over the fraction of the ranked list screened.
///
/// `FractionFound` starts at (0,0) and reports the fraction of all actives
/// retrieved; `EfRatio` divides that by the fraction screened.
pub fn enrichment_curve(preds: &PredictionSet, mode: EnrichmentMode) -> Result<Curve> {
    if preds.n_pos == 0 {
        return Err(Error::EmptyClass("no positive items"));
    }
    let p = preds.n_pos as f64;
    let n = preds.len() as f64;
    let mut tp = 0usize;
    let mut seen = 0usize;
    let mut points = Vec::new();
    if mode == EnrichmentMode::FractionFound {
        points.push((0.0, 0.0));
    }
    for g in preds.tie_groups() {
        tp += g.pos;
        seen += g.pos + g.neg;
        let x = seen as f64 / n;
        let y = match mode {
            EnrichmentMode::FractionFound => tp as f64 / p,
            // tp/P divided by seen/n, arranged to keep x = 1 exact
            EnrichmentMode::EfRatio => (tp as f64 * n) / (p * seen as f64),
        };
        points.push((x, y));
    }
    Ok(Curve {
        kind: match mode {
            EnrichmentMode::FractionFound => CurveKind::EnrichmentFractionFound,
            EnrichmentMode::EfRatio => CurveKind::EnrichmentRatio,
        },
        points,
    })
}

/// Fraction of all actives found in the top `fraction` of the ranked list,
/// with tied groups committed atomically (step evaluation at the last
/// complete group within the cutoff).
pub fn fraction_found_at(preds: &PredictionSet, fraction: f64) -> Result<f64> {
    if !(0.0..=1.0).contains(&fraction) {
        return Err(Error::invalid(format!(
            "screened fraction {fraction} outside [0,1]"
        )));
    }
    let curve = enrichment_curve(preds, EnrichmentMode::FractionFound)?;
    Ok(curve.step_value_at(fraction))
}

/// TPR of the ROC curve at a fixed small FPR, linearly interpolated
/// between vertices.
pub fn roc_enrichment(preds: &PredictionSet, fpr: f64) -> Result<f64> {
    if !(fpr > 0.0 && fpr < 1.0) {
        return Err(Error::invalid(format!("fpr {fpr} outside (0,1)")));
    }
    let curve = roc_curve(preds)?;
    let pts = &curve.points;
    // Last vertex at or below the query; a vertical run at the query FPR
    // resolves to its top.
    let mut i = 0;
    for (j, &(x, _)) in pts.iter().enumerate() {
        if x <= fpr {
            i = j;
        } else {
            break;
        }
    }
    let (x0, y0) = pts[i];
    if x0 == fpr || i + 1 == pts.len() {
        return Ok(y0);
    }
    let (x1, y1) = pts[i + 1];
    Ok(y0 + (y1 - y0) * (fpr - x0) / (x1 - x0))
}
