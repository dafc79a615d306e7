//! Empirical distribution functions and histogram density estimates
//! built from target samples.

use crate::error::{Error, Result};
use serde::{Deserialize, Serialize};

/// A finite sample of target values, stored sorted with the original
/// index of each sorted value retained.
#[derive(Clone, Debug)]
pub struct Sample {
    sorted: Vec<f64>,
    order: Vec<usize>,
}

impl Sample {
    pub fn new(values: &[f64]) -> Result<Self> {
        if values.is_empty() {
            return Err(Error::InvalidSample("sample must be non-empty".into()));
        }
        if values.iter().any(|v| !v.is_finite()) {
            return Err(Error::InvalidSample("sample values must be finite".into()));
        }
        let mut order: Vec<usize> = (0..values.len()).collect();
        order.sort_by(|&a, &b| values[a].total_cmp(&values[b]));
        let sorted = order.iter().map(|&i| values[i]).collect();
        Ok(Self { sorted, order })
    }

    pub fn len(&self) -> usize {
        self.sorted.len()
    }

    pub fn is_empty(&self) -> bool {
        self.sorted.is_empty()
    }

    /// Values in ascending order.
    pub fn sorted_values(&self) -> &[f64] {
        &self.sorted
    }

    /// `original_indices()[k]` is the position the k-th smallest value
    /// had in the input slice.
    pub fn original_indices(&self) -> &[usize] {
        &self.order
    }

    pub fn min(&self) -> f64 {
        self.sorted[0]
    }

    pub fn max(&self) -> f64 {
        *self.sorted.last().unwrap()
    }

    pub fn ecdf(&self) -> EmpiricalCdf {
        EmpiricalCdf { sorted_values: self.sorted.clone() }
    }
}

/// Empirical distribution function: a right-continuous step function
/// jumping by 1/n at each sample value.
#[derive(Clone, Debug)]
pub struct EmpiricalCdf {
    sorted_values: Vec<f64>,
}

impl EmpiricalCdf {
    pub fn from_sample(values: &[f64]) -> Result<Self> {
        Ok(Sample::new(values)?.ecdf())
    }

    pub fn n(&self) -> usize {
        self.sorted_values.len()
    }

    pub fn sorted_values(&self) -> &[f64] {
        &self.sorted_values
    }

    /// Fraction of sample values `<= x`.
    pub fn eval(&self, x: f64) -> f64 {
        let count = self.sorted_values.partition_point(|v| *v <= x);
        count as f64 / self.n() as f64
    }

    /// Left limit: fraction of sample values `< x`.
    pub fn eval_left(&self, x: f64) -> f64 {
        let count = self.sorted_values.partition_point(|v| *v < x);
        count as f64 / self.n() as f64
    }
}

/// Histogram density estimate over equal-width bins.
///
/// `counts` covers values inside `[edges[0], edges[B]]`; values outside
/// the range are excluded from the bins and tallied in `n_excluded`.
/// The density integrates to (in-range count) / n over the range.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct HistogramDensity {
    pub bin_edges: Vec<f64>,
    pub counts: Vec<u64>,
    pub n: usize,
    pub n_excluded: usize,
}

impl HistogramDensity {
    pub fn n_bins(&self) -> usize {
        self.counts.len()
    }

    /// Index of the bin holding `y` under the assignment rule
    /// `edges[i] <= y < edges[i+1]`, with the last bin right-inclusive.
    /// `None` outside the range.
    pub fn bin_of(&self, y: f64) -> Option<usize> {
        bin_index(&self.bin_edges, y)
    }

    pub fn bin_width(&self, i: usize) -> f64 {
        self.bin_edges[i + 1] - self.bin_edges[i]
    }

    pub fn bin_center(&self, i: usize) -> f64 {
        0.5 * (self.bin_edges[i] + self.bin_edges[i + 1])
    }

    /// Density estimate at `y`: `counts[bin] / (n * width)`, 0 outside
    /// the histogram range.
    pub fn density_at(&self, y: f64) -> f64 {
        match self.bin_of(y) {
            Some(i) => self.counts[i] as f64 / (self.n as f64 * self.bin_width(i)),
            None => 0.0,
        }
    }
}

pub(crate) fn bin_index(edges: &[f64], y: f64) -> Option<usize> {
    let n_bins = edges.len() - 1;
    if y < edges[0] || y > edges[n_bins] {
        return None;
    }
    // partition_point gives the first edge > y; the value's bin starts at
    // the previous edge. The last bin keeps its right edge.
    let idx = edges.partition_point(|e| *e <= y);
    Some(idx.saturating_sub(1).min(n_bins - 1))
}

/// Builds an equal-width histogram with `n_bins` bins over `range`
/// (default: the sample's own min..max). A degenerate sample with
/// min = max falls back to a single bin of synthetic width 1 centered
/// on the value.
pub fn build_histogram(
    sample: &Sample,
    n_bins: usize,
    range: Option<(f64, f64)>,
) -> Result<HistogramDensity> {
    if n_bins == 0 {
        return Err(Error::InvalidBins("n_bins must be >= 1".into()));
    }
    if let Some((lo, hi)) = range {
        if !(lo < hi) {
            return Err(Error::InvalidBins(format!(
                "histogram range must satisfy lo < hi, got ({lo}, {hi})"
            )));
        }
    }
    let (lo, hi, n_bins) = match range {
        Some((lo, hi)) => (lo, hi, n_bins),
        None if sample.min() == sample.max() => {
            (sample.min() - 0.5, sample.min() + 0.5, 1)
        }
        None => (sample.min(), sample.max(), n_bins),
    };
    let width = (hi - lo) / n_bins as f64;
    let edges: Vec<f64> = (0..=n_bins)
        .map(|i| if i == n_bins { hi } else { lo + i as f64 * width })
        .collect();
    let mut counts = vec![0u64; n_bins];
    let mut n_excluded = 0usize;
    for &v in sample.sorted_values() {
        match bin_index(&edges, v) {
            Some(i) => counts[i] += 1,
            None => n_excluded += 1,
        }
    }
    Ok(HistogramDensity { bin_edges: edges, counts, n: sample.len(), n_excluded })
}
