//! Synthetic bimodal regression/classification datasets with a
//! controlled imbalance factor.
//!
//! Targets cluster around 0 (mode 0, the majority under imbalance) and 1
//! (mode 1). The imbalance factor I is the mode-0 count over the mode-1
//! count; raising I adds mode-0 samples while the mode-1 count stays
//! constant, so no information about the minority mode is removed.

use crate::error::{Error, Result};
use crate::rng::{chacha, shuffle, standard_normal};
use serde::{Deserialize, Serialize};

/// Specification of one synthetic bimodal dataset.
///
/// Features are isotropic normal clusters in `feature_dim` dimensions
/// centered at the all-zeros vector (mode 0) and the all-ones vector
/// (mode 1) with per-coordinate spread `feature_cluster_spread`; targets
/// are `Normal(mode, mode_std)`. Mode centers are fixed at 0 and 1.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct BimodalSpec {
    pub n_minority: usize,
    pub imbalance_factor: f64,
    pub mode_std: f64,
    pub feature_dim: usize,
    pub feature_cluster_spread: f64,
    pub seed: u64,
}

impl Default for BimodalSpec {
    fn default() -> Self {
        // Spread 1.0 leaves enough cluster overlap that imbalance shifts
        // the learned decision boundary; narrower clusters make the modes
        // separable and no degeneration appears at any imbalance factor.
        Self {
            n_minority: 500,
            imbalance_factor: 1.0,
            mode_std: 0.05,
            feature_dim: 4,
            feature_cluster_spread: 1.0,
            seed: 0,
        }
    }
}

impl BimodalSpec {
    pub fn validate(&self) -> Result<()> {
        if self.n_minority == 0 {
            return Err(Error::InvalidConfig("n_minority must be >= 1".into()));
        }
        if !self.imbalance_factor.is_finite() || self.imbalance_factor < 1.0 {
            return Err(Error::InvalidConfig(format!(
                "imbalance factor must be >= 1, got {}",
                self.imbalance_factor
            )));
        }
        if !(self.mode_std > 0.0) || !(self.feature_cluster_spread > 0.0) {
            return Err(Error::InvalidConfig("mode_std and spread must be positive".into()));
        }
        if self.feature_dim == 0 {
            return Err(Error::InvalidConfig("feature_dim must be >= 1".into()));
        }
        Ok(())
    }

    /// Mode-0 sample count implied by the imbalance factor.
    pub fn n_majority(&self) -> usize {
        (self.imbalance_factor * self.n_minority as f64).round() as usize
    }
}

/// Feature matrix, continuous targets and derived binary mode labels,
/// row-aligned. A row's mode label is 0 iff its target is below 0.5
/// (targets exactly at 0.5 count as mode 1).
#[derive(Clone, Debug)]
pub struct Dataset {
    pub features: Vec<Vec<f64>>,
    pub targets: Vec<f64>,
    pub mode_labels: Vec<u8>,
}

impl Dataset {
    /// Builds a dataset from features and targets, deriving mode labels
    /// by the 0.5 threshold.
    pub fn new(features: Vec<Vec<f64>>, targets: Vec<f64>) -> Result<Self> {
        if features.len() != targets.len() || targets.is_empty() {
            return Err(Error::InvalidSample(
                "features and targets must be row-aligned and non-empty".into(),
            ));
        }
        let dim = features[0].len();
        if features.iter().any(|row| row.len() != dim) {
            return Err(Error::InvalidSample("feature rows must have equal length".into()));
        }
        let mode_labels = targets.iter().map(|&y| mode_label(y)).collect();
        Ok(Self { features, targets, mode_labels })
    }

    pub fn len(&self) -> usize {
        self.targets.len()
    }

    pub fn is_empty(&self) -> bool {
        self.targets.is_empty()
    }

    pub fn feature_dim(&self) -> usize {
        self.features.first().map_or(0, Vec::len)
    }

    fn select(&self, indices: &[usize]) -> Dataset {
        Dataset {
            features: indices.iter().map(|&i| self.features[i].clone()).collect(),
            targets: indices.iter().map(|&i| self.targets[i]).collect(),
            mode_labels: indices.iter().map(|&i| self.mode_labels[i]).collect(),
        }
    }
}

fn mode_label(target: f64) -> u8 {
    u8::from(target >= 0.5)
}

/// Generates the bimodal dataset: all mode-0 rows first, then mode-1
/// rows. Fully determined by the spec's seed; each mode draws from its
/// own generator stream.
pub fn generate_bimodal(spec: &BimodalSpec) -> Result<Dataset> {
    spec.validate()?;
    let counts = [spec.n_majority(), spec.n_minority];
    let n = counts[0] + counts[1];
    let mut features = Vec::with_capacity(n);
    let mut targets = Vec::with_capacity(n);
    for (mode, &count) in counts.iter().enumerate() {
        let mut rng = chacha(spec.seed, mode as u64);
        let center = mode as f64;
        for _ in 0..count {
            let row: Vec<f64> = (0..spec.feature_dim)
                .map(|_| center + spec.feature_cluster_spread * standard_normal(&mut rng))
                .collect();
            features.push(row);
            targets.push(center + spec.mode_std * standard_normal(&mut rng));
        }
    }
    Dataset::new(features, targets)
}

/// Drops the continuous targets, keeping features and mode labels.
pub fn to_classification(d: &Dataset) -> (Vec<Vec<f64>>, Vec<u8>) {
    (d.features.clone(), d.mode_labels.clone())
}

/// Seeded stratified split: rows are shuffled within each mode label and
/// `test_fraction` of every stratum (rounded, clamped so both sides stay
/// non-empty) goes to the test set. Train and test therefore stay equally
/// imbalanced, within one sample per stratum.
pub fn train_test_split(d: &Dataset, test_fraction: f64, seed: u64) -> Result<(Dataset, Dataset)> {
    if !(test_fraction > 0.0 && test_fraction < 1.0) {
        return Err(Error::InvalidConfig(format!(
            "test fraction must lie in (0, 1), got {test_fraction}"
        )));
    }
    let mut train_idx = Vec::new();
    let mut test_idx = Vec::new();
    for stratum in [0u8, 1u8] {
        let mut idx: Vec<usize> = (0..d.len()).filter(|&i| d.mode_labels[i] == stratum).collect();
        if idx.is_empty() {
            continue;
        }
        if idx.len() < 2 {
            return Err(Error::InvalidSample(format!(
                "stratum {stratum} has fewer than 2 samples and cannot be split"
            )));
        }
        let mut rng = chacha(seed, 16 + stratum as u64);
        shuffle(&mut rng, &mut idx);
        let n_test = ((idx.len() as f64 * test_fraction).round() as usize)
            .clamp(1, idx.len() - 1);
        test_idx.extend_from_slice(&idx[..n_test]);
        train_idx.extend_from_slice(&idx[n_test..]);
    }
    train_idx.sort_unstable();
    test_idx.sort_unstable();
    Ok((d.select(&train_idx), d.select(&test_idx)))
}

/// Writes the dataset as CSV with header `f0,...,f{d-1},target`.
pub fn to_csv(d: &Dataset) -> String {
    let dim = d.feature_dim();
    let mut out = String::new();
    for i in 0..dim {
        out.push_str(&format!("f{i},"));
    }
    out.push_str("target\n");
    for (row, target) in d.features.iter().zip(&d.targets) {
        for v in row {
            out.push_str(&format!("{v},"));
        }
        out.push_str(&format!("{target}\n"));
    }
    out
}
