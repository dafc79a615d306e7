//! Imbalance-aware model evaluation: per-bin MAE, relevance-weighted MAE,
//! regression precision/recall/F, and the classification metrics used by
//! the degeneration comparison.

use crate::empirical::{bin_index, build_histogram, Sample};
use crate::error::{Error, Result};
use crate::measures::RelevanceMeasure;
use serde::{Deserialize, Serialize};

/// Paired true/predicted target arrays.
#[derive(Clone, Debug)]
pub struct PredictionSet {
    y_true: Vec<f64>,
    y_pred: Vec<f64>,
}

impl PredictionSet {
    pub fn new(y_true: Vec<f64>, y_pred: Vec<f64>) -> Result<Self> {
        if y_true.is_empty() || y_true.len() != y_pred.len() {
            return Err(Error::InvalidPredictions(format!(
                "need equal non-zero lengths, got {} true and {} predicted",
                y_true.len(),
                y_pred.len()
            )));
        }
        if y_true.iter().chain(&y_pred).any(|v| !v.is_finite()) {
            return Err(Error::InvalidPredictions("values must be finite".into()));
        }
        Ok(Self { y_true, y_pred })
    }

    pub fn len(&self) -> usize {
        self.y_true.len()
    }

    pub fn is_empty(&self) -> bool {
        self.y_true.is_empty()
    }

    pub fn y_true(&self) -> &[f64] {
        &self.y_true
    }

    pub fn y_pred(&self) -> &[f64] {
        &self.y_pred
    }
}

/// Mean absolute error over the whole prediction set.
pub fn overall_mae(p: &PredictionSet) -> f64 {
    let sum: f64 = p.y_true.iter().zip(&p.y_pred).map(|(y, t)| (y - t).abs()).sum();
    sum / p.len() as f64
}

/// Per-bin MAE summary. Empty bins carry `None`, never 0.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct BinnedReport {
    pub bin_edges: Vec<f64>,
    pub mae_per_bin: Vec<Option<f64>>,
    pub counts_per_bin: Vec<u64>,
}

impl BinnedReport {
    pub fn n_bins(&self) -> usize {
        self.counts_per_bin.len()
    }

    pub fn bin_center(&self, i: usize) -> f64 {
        0.5 * (self.bin_edges[i] + self.bin_edges[i + 1])
    }

    /// Plot-ready TSV: header plus one `bin_center\tcount\tmae` row per
    /// bin, `null` for empty bins, `.` decimal point.
    pub fn to_tsv(&self) -> String {
        let mut out = String::from("bin_center\tcount\tmae\n");
        for i in 0..self.n_bins() {
            let mae = match self.mae_per_bin[i] {
                Some(m) => format!("{m}"),
                None => "null".to_string(),
            };
            out.push_str(&format!(
                "{}\t{}\t{}\n",
                self.bin_center(i),
                self.counts_per_bin[i],
                mae
            ));
        }
        out
    }
}

/// MAE restricted to each bin of the true target value:
/// `MAE_j = (1/S_j) sum over {i : y_i in bin j} |y_i - pred_i|`.
///
/// Bins follow the histogram convention (left-closed, last bin
/// right-inclusive). The edges must cover every true target.
pub fn binned_mae(p: &PredictionSet, bin_edges: &[f64]) -> Result<BinnedReport> {
    if bin_edges.len() < 2 || bin_edges.windows(2).any(|w| w[0] >= w[1]) {
        return Err(Error::InvalidBins("bin edges must be >= 2 and strictly ascending".into()));
    }
    let n_bins = bin_edges.len() - 1;
    let mut abs_sum = vec![0.0f64; n_bins];
    let mut counts = vec![0u64; n_bins];
    for (y, t) in p.y_true.iter().zip(&p.y_pred) {
        let bin = bin_index(bin_edges, *y).ok_or_else(|| {
            Error::InvalidBins(format!("true target {y} outside binning range"))
        })?;
        abs_sum[bin] += (y - t).abs();
        counts[bin] += 1;
    }
    let mae_per_bin = abs_sum
        .iter()
        .zip(&counts)
        .map(|(s, c)| if *c > 0 { Some(s / *c as f64) } else { None })
        .collect();
    Ok(BinnedReport { bin_edges: bin_edges.to_vec(), mae_per_bin, counts_per_bin: counts })
}

/// Relevance-weighted MAE: each sample is weighted by
/// `p_mu(y_i) / p_hat_Y(y_i)` with the target density estimated by an
/// `n_bins` histogram over the true targets themselves (so the estimate
/// is strictly positive at every sample). The weighted sum is normalized
/// by the total weight, which makes constant weights reduce to the plain
/// MAE.
pub fn weighted_mae(p: &PredictionSet, mu: &RelevanceMeasure, n_bins: usize) -> Result<f64> {
    let sample = Sample::new(p.y_true())?;
    let hist = build_histogram(&sample, n_bins, None)?;
    let mut weighted_sum = 0.0;
    let mut weight_total = 0.0;
    for (y, t) in p.y_true.iter().zip(&p.y_pred) {
        let density = hist.density_at(*y);
        debug_assert!(density > 0.0, "own-sample histogram density must be positive");
        let w = mu.density(*y)? / density;
        weighted_sum += w * (y - t).abs();
        weight_total += w;
    }
    if weight_total <= 0.0 {
        return Err(Error::InvalidPredictions(
            "relevance weights sum to zero over the sample".into(),
        ));
    }
    Ok(weighted_sum / weight_total)
}

/// Precision/recall/F for regression under a relevance threshold and an
/// error threshold. `None` marks an undefined score (empty denominator).
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct RegPRReport {
    pub precision: Option<f64>,
    pub recall: Option<f64>,
    pub f_beta: Option<f64>,
    pub t_rel: f64,
    pub t_err: f64,
    pub beta: f64,
}

/// Thresholded precision and recall for regression: a sample is accurate
/// when `|y - pred| <= t_err`; recall is the accurate fraction of samples
/// whose *true* target is relevant (`phi(y) >= t_rel`), precision the
/// accurate fraction of samples whose *predicted* target is relevant.
pub fn regression_precision_recall(
    p: &PredictionSet,
    phi: impl Fn(f64) -> f64,
    t_rel: f64,
    t_err: f64,
    beta: f64,
) -> RegPRReport {
    assert!((0.0..=1.0).contains(&t_rel), "t_rel must lie in [0, 1]");
    assert!(t_err > 0.0, "t_err must be positive");
    let mut rel_true = 0usize;
    let mut rel_true_acc = 0usize;
    let mut rel_pred = 0usize;
    let mut rel_pred_acc = 0usize;
    for (y, t) in p.y_true.iter().zip(&p.y_pred) {
        let accurate = (y - t).abs() <= t_err;
        if phi(*y) >= t_rel {
            rel_true += 1;
            rel_true_acc += usize::from(accurate);
        }
        if phi(*t) >= t_rel {
            rel_pred += 1;
            rel_pred_acc += usize::from(accurate);
        }
    }
    let recall = (rel_true > 0).then(|| rel_true_acc as f64 / rel_true as f64);
    let precision = (rel_pred > 0).then(|| rel_pred_acc as f64 / rel_pred as f64);
    let f_beta = match (precision, recall) {
        (Some(p), Some(r)) => Some(f_score(p, r, beta)),
        _ => None,
    };
    RegPRReport { precision, recall, f_beta, t_rel, t_err, beta }
}

/// `F_beta = (1 + beta^2) P R / (beta^2 P + R)`; returns 0 when both
/// precision and recall are 0.
pub fn f_score(precision: f64, recall: f64, beta: f64) -> f64 {
    assert!((0.0..=1.0).contains(&precision) && (0.0..=1.0).contains(&recall));
    assert!(beta > 0.0);
    let denom = beta * beta * precision + recall;
    if denom == 0.0 {
        return 0.0;
    }
    (1.0 + beta * beta) * precision * recall / denom
}

/// Binary classification metrics with mode-1 samples as positives.
/// Rates whose class is absent are `None`.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct ClassificationReport {
    pub accuracy: f64,
    pub tpr: Option<f64>,
    pub tnr: Option<f64>,
    pub tp: u64,
    pub tn: u64,
    pub fp: u64,
    pub fn_: u64,
}

impl ClassificationReport {
    /// F1 for the positive class from the confusion counts:
    /// `2 TP / (2 TP + FP + FN)`, 0 when the denominator vanishes.
    pub fn f1(&self) -> f64 {
        let denom = 2 * self.tp + self.fp + self.fn_;
        if denom == 0 {
            return 0.0;
        }
        2.0 * self.tp as f64 / denom as f64
    }
}

/// Accuracy, TPR and TNR from binary label arrays.
pub fn classification_metrics(y_true: &[u8], y_pred: &[u8]) -> Result<ClassificationReport> {
    if y_true.is_empty() || y_true.len() != y_pred.len() {
        return Err(Error::InvalidLabels("need equal non-zero label lengths".into()));
    }
    if y_true.iter().chain(y_pred).any(|l| *l > 1) {
        return Err(Error::InvalidLabels("labels must be 0 or 1".into()));
    }
    let (mut tp, mut tn, mut fp, mut fn_) = (0u64, 0u64, 0u64, 0u64);
    for (t, p) in y_true.iter().zip(y_pred) {
        match (t, p) {
            (1, 1) => tp += 1,
            (0, 0) => tn += 1,
            (0, 1) => fp += 1,
            _ => fn_ += 1,
        }
    }
    let accuracy = (tp + tn) as f64 / y_true.len() as f64;
    let tpr = (tp + fn_ > 0).then(|| tp as f64 / (tp + fn_) as f64);
    let tnr = (tn + fp > 0).then(|| tn as f64 / (tn + fp) as f64);
    Ok(ClassificationReport { accuracy, tpr, tnr, tp, tn, fp, fn_ })
}
