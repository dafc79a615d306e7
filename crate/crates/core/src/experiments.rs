//! Experiment drivers: the degeneration-vs-imbalance study, the
//! imbalance-metric correlation study, and the binned-error audit.
//!
//! Runs are independent jobs seeded as `seed + run_index` and execute in
//! parallel under the `parallel` feature; aggregation is order-stable
//! either way.

use crate::empirical::{build_histogram, HistogramDensity, Sample};
use crate::error::{Error, Result};
use crate::evaluation::{
    binned_mae, classification_metrics, overall_mae, regression_precision_recall, weighted_mae,
    BinnedReport, PredictionSet,
};
use crate::imbalance::{kolmogorov_distance, wasserstein_distance, ImbalanceReport, DEFAULT_TAIL_EPS};
use crate::learner::{LossKind, Mlp, MlpConfig, Scaler};
use crate::measures::{NormalRelevance, RelevanceMeasure};
use crate::par::map_collect;
use crate::synth::{generate_bimodal, train_test_split, BimodalSpec, Dataset};
use serde::{Deserialize, Serialize};

/// Sweep of normal relevance measures along the straight line from the
/// dataset's (mean, std) to an endpoint in a less probable target range.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct SweepSpec {
    pub start: (f64, f64),
    pub end: (f64, f64),
    pub n_points: usize,
}

/// Equidistant interpolation points of the sweep, as normal relevance
/// measures. Fails if any interpolated standard deviation drops to zero
/// or below.
pub fn relevance_sweep(spec: &SweepSpec) -> Result<Vec<NormalRelevance>> {
    if spec.n_points < 2 {
        return Err(Error::InvalidConfig("sweep needs at least 2 points".into()));
    }
    (0..spec.n_points)
        .map(|k| {
            let t = k as f64 / (spec.n_points - 1) as f64;
            let mean = spec.start.0 + t * (spec.end.0 - spec.start.0);
            let std = spec.start.1 + t * (spec.end.1 - spec.start.1);
            if std <= 0.0 {
                return Err(Error::InvalidConfig(format!(
                    "interpolated std {std} at sweep point {k} is not positive"
                )));
            }
            NormalRelevance::new(mean, std)
        })
        .collect()
}

/// Sample Pearson correlation coefficient; `None` when either side has
/// zero variance.
pub fn pearson(xs: &[f64], ys: &[f64]) -> Option<f64> {
    assert_eq!(xs.len(), ys.len(), "pearson requires equal lengths");
    assert!(xs.len() >= 2, "pearson requires at least 2 points");
    let n = xs.len() as f64;
    let mx = xs.iter().sum::<f64>() / n;
    let my = ys.iter().sum::<f64>() / n;
    let mut cov = 0.0;
    let mut vx = 0.0;
    let mut vy = 0.0;
    for (x, y) in xs.iter().zip(ys) {
        cov += (x - mx) * (y - my);
        vx += (x - mx) * (x - mx);
        vy += (y - my) * (y - my);
    }
    if vx == 0.0 || vy == 0.0 {
        return None;
    }
    Some(cov / (vx * vy).sqrt())
}

/// Mean and population standard deviation of a set of run results (the
/// population convention keeps a single run's std at exactly 0).
#[derive(Clone, Copy, Debug, Serialize, Deserialize)]
pub struct MeanStd {
    pub mean: f64,
    pub std: f64,
}

fn mean_std(values: &[f64]) -> MeanStd {
    let n = values.len() as f64;
    let mean = values.iter().sum::<f64>() / n;
    let var = values.iter().map(|v| (v - mean) * (v - mean)).sum::<f64>() / n;
    MeanStd { mean, std: var.sqrt() }
}

impl std::fmt::Display for MeanStd {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{:.2}±{:.2}", self.mean, self.std)
    }
}

/// Configuration of the degeneration study (classification and
/// regression trained on the same splits, per imbalance factor).
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct DegenerationConfig {
    pub i_values: Vec<f64>,
    pub runs: usize,
    pub base: BimodalSpec,
    pub test_fraction: f64,
    pub learning_rate: f64,
    pub epochs: usize,
    pub batch_size: usize,
}

impl Default for DegenerationConfig {
    fn default() -> Self {
        Self {
            i_values: vec![1.0, 3.0, 10.0, 20.0],
            runs: 10,
            base: BimodalSpec::default(),
            test_fraction: 0.2,
            learning_rate: 1e-3,
            epochs: 200,
            batch_size: 32,
        }
    }
}

/// Aggregated metrics for one imbalance factor: mean ± std over runs.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct DegenerationRow {
    pub imbalance_factor: f64,
    pub accuracy: MeanStd,
    pub tnr: MeanStd,
    pub tpr: MeanStd,
    pub f1: MeanStd,
    pub mae: MeanStd,
    pub mae_mode0: MeanStd,
    pub mae_mode1: MeanStd,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct DegenerationReport {
    pub runs: usize,
    pub rows: Vec<DegenerationRow>,
}

impl DegenerationReport {
    /// Plain-text tables in the paper's layout: metrics as rows,
    /// imbalance factors as columns.
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        let header: Vec<String> =
            self.rows.iter().map(|r| format!("{:>10}", r.imbalance_factor)).collect();
        out.push_str(&format!("{:<10}{}\n", "M \\ I", header.join("")));
        let mut line = |name: &str, pick: &dyn Fn(&DegenerationRow) -> MeanStd| {
            let cells: Vec<String> =
                self.rows.iter().map(|r| format!("{:>10}", pick(r).to_string())).collect();
            out.push_str(&format!("{:<10}{}\n", name, cells.join("")));
        };
        line("Accuracy", &|r| r.accuracy);
        line("TNR", &|r| r.tnr);
        line("TPR", &|r| r.tpr);
        line("F1", &|r| r.f1);
        line("MAE", &|r| r.mae);
        line("MAE_0", &|r| r.mae_mode0);
        line("MAE_1", &|r| r.mae_mode1);
        out
    }
}

struct DegenerationRun {
    accuracy: f64,
    tnr: f64,
    tpr: f64,
    f1: f64,
    mae: f64,
    mae_mode0: f64,
    mae_mode1: f64,
}

/// Runs the degeneration study: for each imbalance factor and run,
/// generate a dataset, split it stratified, train a classifier (binary
/// cross-entropy on the mode labels) and a regressor (MAE on the
/// targets) on the same split, and aggregate the evaluation metrics over
/// runs.
pub fn run_degeneration(cfg: &DegenerationConfig) -> Result<DegenerationReport> {
    if cfg.i_values.is_empty() || cfg.runs == 0 {
        return Err(Error::InvalidConfig("need at least one imbalance factor and run".into()));
    }
    let jobs: Vec<(usize, usize)> = (0..cfg.i_values.len())
        .flat_map(|i| (0..cfg.runs).map(move |r| (i, r)))
        .collect();
    let results = map_collect(jobs, |(i, run)| degeneration_run(cfg, cfg.i_values[i], run));
    let mut rows = Vec::with_capacity(cfg.i_values.len());
    for (i, &factor) in cfg.i_values.iter().enumerate() {
        let runs: Vec<&DegenerationRun> = results[i * cfg.runs..(i + 1) * cfg.runs]
            .iter()
            .map(|r| r.as_ref().map_err(clone_error))
            .collect::<std::result::Result<_, _>>()?;
        let agg = |pick: &dyn Fn(&DegenerationRun) -> f64| {
            mean_std(&runs.iter().map(|r| pick(r)).collect::<Vec<_>>())
        };
        rows.push(DegenerationRow {
            imbalance_factor: factor,
            accuracy: agg(&|r| r.accuracy),
            tnr: agg(&|r| r.tnr),
            tpr: agg(&|r| r.tpr),
            f1: agg(&|r| r.f1),
            mae: agg(&|r| r.mae),
            mae_mode0: agg(&|r| r.mae_mode0),
            mae_mode1: agg(&|r| r.mae_mode1),
        });
    }
    Ok(DegenerationReport { runs: cfg.runs, rows })
}

fn clone_error(e: &Error) -> Error {
    Error::Training(e.to_string())
}

fn degeneration_run(cfg: &DegenerationConfig, factor: f64, run: usize) -> Result<DegenerationRun> {
    let seed = cfg.base.seed + run as u64;
    let spec = BimodalSpec { imbalance_factor: factor, seed, ..cfg.base.clone() };
    let data = generate_bimodal(&spec)?;
    let (train, test) = train_test_split(&data, cfg.test_fraction, seed)?;
    let scaler = Scaler::fit(&train.features)?;
    let train_x = scaler.transform(&train.features);
    let test_x = scaler.transform(&test.features);

    let mlp_config = |loss| MlpConfig {
        learning_rate: cfg.learning_rate,
        epochs: cfg.epochs,
        batch_size: cfg.batch_size,
        seed,
        ..MlpConfig::new(data.feature_dim(), loss)
    };

    // Classifier on the mode labels.
    let cls_cfg = mlp_config(LossKind::BinaryCrossEntropy);
    let labels: Vec<f64> = train.mode_labels.iter().map(|&l| l as f64).collect();
    let (classifier, _) = Mlp::init(&cls_cfg).train(&train_x, &labels, &cls_cfg)?;
    let probs = classifier.predict(&test_x)?;
    let pred_labels: Vec<u8> = probs.iter().map(|p| u8::from(*p >= 0.5)).collect();
    let cls = classification_metrics(&test.mode_labels, &pred_labels)?;

    // Regressor on the continuous targets, same split.
    let reg_cfg = mlp_config(LossKind::MeanAbsoluteError);
    let (regressor, _) = Mlp::init(&reg_cfg).train(&train_x, &train.targets, &reg_cfg)?;
    let preds = regressor.predict(&test_x)?;
    let pset = PredictionSet::new(test.targets.clone(), preds.clone())?;

    let mode_mae = |mode: u8| -> f64 {
        let errs: Vec<f64> = test
            .targets
            .iter()
            .zip(&preds)
            .zip(&test.mode_labels)
            .filter(|(_, &l)| l == mode)
            .map(|((y, p), _)| (y - p).abs())
            .collect();
        errs.iter().sum::<f64>() / errs.len() as f64
    };

    Ok(DegenerationRun {
        accuracy: cls.accuracy,
        tnr: cls.tnr.expect("stratified split keeps both classes in the test set"),
        tpr: cls.tpr.expect("stratified split keeps both classes in the test set"),
        f1: cls.f1(),
        mae: overall_mae(&pset),
        mae_mode0: mode_mae(0),
        mae_mode1: mode_mae(1),
    })
}

/// Configuration of the metric-correlation study.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct CorrelationConfig {
    /// Sweep endpoint (mean, std) in a less probable target range.
    pub endpoint: (f64, f64),
    pub n_points: usize,
    pub runs: usize,
    pub test_fraction: f64,
    pub t_rel: f64,
    pub t_err: f64,
    pub beta: f64,
    /// Utility parameter of the cited precision/recall framework; stored
    /// for provenance, unused by the thresholded formulation.
    pub k: f64,
    pub weighted_mae_bins: usize,
    pub learning_rate: f64,
    pub epochs: usize,
    pub batch_size: usize,
    pub seed: u64,
}

impl CorrelationConfig {
    pub fn new(endpoint: (f64, f64)) -> Self {
        Self {
            endpoint,
            n_points: 20,
            runs: 10,
            test_fraction: 0.2,
            t_rel: 0.5,
            t_err: 10.0,
            beta: 1.0,
            k: 1.0,
            weighted_mae_bins: 20,
            learning_rate: 1e-3,
            epochs: 200,
            batch_size: 32,
            seed: 0,
        }
    }
}

/// One (sweep point, run) observation.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct CorrelationRow {
    pub run: usize,
    pub measure_mean: f64,
    pub measure_std: f64,
    pub kolmogorov: f64,
    pub wasserstein: f64,
    pub weighted_mae: f64,
    pub precision: Option<f64>,
    pub recall: Option<f64>,
    pub f1: Option<f64>,
}

/// Pearson correlations of one imbalance metric against each evaluation
/// metric; `None` when a side has zero variance.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct MetricCorrelations {
    pub weighted_mae: Option<f64>,
    pub precision: Option<f64>,
    pub recall: Option<f64>,
    pub f1: Option<f64>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct PearsonTable {
    pub kolmogorov: MetricCorrelations,
    pub wasserstein: MetricCorrelations,
}

/// Rows dropped from each correlation column because the evaluation
/// metric was undefined there.
#[derive(Clone, Debug, Default, Serialize, Deserialize)]
pub struct ExcludedCounts {
    pub precision: usize,
    pub recall: usize,
    pub f1: usize,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct CorrelationReport {
    pub runs: usize,
    pub n_points: usize,
    pub sweep_start: (f64, f64),
    pub sweep_end: (f64, f64),
    pub rows: Vec<CorrelationRow>,
    pub pearson: PearsonTable,
    pub excluded: ExcludedCounts,
}

impl CorrelationReport {
    /// Plain-text correlation table: imbalance metrics as rows,
    /// evaluation metrics as columns.
    pub fn to_text(&self) -> String {
        let fmt = |v: Option<f64>| match v {
            Some(r) => format!("{r:>13.6}"),
            None => format!("{:>13}", "undef"),
        };
        let mut out = String::new();
        out.push_str(&format!(
            "{:<12}{:>13}{:>13}{:>13}{:>13}\n",
            "", "Weighted MAE", "Precision", "Recall", "F1"
        ));
        for (name, c) in
            [("Kolmogorov", &self.pearson.kolmogorov), ("Wasserstein", &self.pearson.wasserstein)]
        {
            out.push_str(&format!(
                "{:<12}{}{}{}{}\n",
                name,
                fmt(c.weighted_mae),
                fmt(c.precision),
                fmt(c.recall),
                fmt(c.f1)
            ));
        }
        out
    }
}

/// Runs the correlation study on a dataset with a continuous target.
///
/// One stratified split is fixed for all runs; each run trains an MAE
/// regressor with its own seed. For every relevance measure on the sweep
/// from the dataset's target statistics to the endpoint, the Kolmogorov
/// and Wasserstein imbalance of the *training* targets and the weighted
/// MAE / precision / recall / F1 of the *test* predictions are recorded,
/// and Pearson correlations are pooled over all (point, run) pairs.
pub fn run_correlation(data: &Dataset, cfg: &CorrelationConfig) -> Result<CorrelationReport> {
    if cfg.runs == 0 {
        return Err(Error::InvalidConfig("need at least one run".into()));
    }
    let stats = mean_std(&data.targets);
    let sweep_spec = SweepSpec {
        start: (stats.mean, stats.std),
        end: cfg.endpoint,
        n_points: cfg.n_points,
    };
    let sweep = relevance_sweep(&sweep_spec)?;

    let (train, test) = train_test_split(data, cfg.test_fraction, cfg.seed)?;
    let scaler = Scaler::fit(&train.features)?;
    let train_x = scaler.transform(&train.features);
    let test_x = scaler.transform(&test.features);

    // Imbalance scores depend only on the fixed training targets.
    let train_ecdf = Sample::new(&train.targets)?.ecdf();
    let imbalance: Vec<(f64, f64)> = sweep
        .iter()
        .map(|m| {
            let measure = RelevanceMeasure::Normal(m.clone());
            let kol = kolmogorov_distance(&measure, &train_ecdf)?;
            let wst = wasserstein_distance(&measure, &train_ecdf, DEFAULT_TAIL_EPS)?;
            Ok((kol, wst))
        })
        .collect::<Result<_>>()?;

    let run_jobs: Vec<usize> = (0..cfg.runs).collect();
    let per_run = map_collect(run_jobs, |run| -> Result<Vec<CorrelationRow>> {
        let mlp_cfg = MlpConfig {
            learning_rate: cfg.learning_rate,
            epochs: cfg.epochs,
            batch_size: cfg.batch_size,
            seed: cfg.seed + run as u64,
            ..MlpConfig::new(data.feature_dim(), LossKind::MeanAbsoluteError)
        };
        let (model, _) = Mlp::init(&mlp_cfg).train(&train_x, &train.targets, &mlp_cfg)?;
        let preds = model.predict(&test_x)?;
        let pset = PredictionSet::new(test.targets.clone(), preds)?;
        sweep
            .iter()
            .zip(&imbalance)
            .map(|(m, &(kol, wst))| {
                let measure = RelevanceMeasure::Normal(m.clone());
                let wmae = weighted_mae(&pset, &measure, cfg.weighted_mae_bins)?;
                let phi = |y: f64| measure.relevance(y).unwrap_or(0.0);
                let pr =
                    regression_precision_recall(&pset, phi, cfg.t_rel, cfg.t_err, cfg.beta);
                Ok(CorrelationRow {
                    run,
                    measure_mean: m.mean,
                    measure_std: m.std,
                    kolmogorov: kol,
                    wasserstein: wst,
                    weighted_mae: wmae,
                    precision: pr.precision,
                    recall: pr.recall,
                    f1: pr.f_beta,
                })
            })
            .collect()
    });

    let mut rows = Vec::with_capacity(cfg.runs * cfg.n_points);
    for run_rows in per_run {
        rows.extend(run_rows.map_err(|e| Error::Training(e.to_string()))?);
    }

    let excluded = ExcludedCounts {
        precision: rows.iter().filter(|r| r.precision.is_none()).count(),
        recall: rows.iter().filter(|r| r.recall.is_none()).count(),
        f1: rows.iter().filter(|r| r.f1.is_none()).count(),
    };

    let correlate = |imb: &dyn Fn(&CorrelationRow) -> f64,
                     eval: &dyn Fn(&CorrelationRow) -> Option<f64>| {
        let pairs: Vec<(f64, f64)> =
            rows.iter().filter_map(|r| eval(r).map(|v| (imb(r), v))).collect();
        if pairs.len() < 2 {
            return None;
        }
        let xs: Vec<f64> = pairs.iter().map(|p| p.0).collect();
        let ys: Vec<f64> = pairs.iter().map(|p| p.1).collect();
        pearson(&xs, &ys)
    };
    let table_for = |imb: &dyn Fn(&CorrelationRow) -> f64| MetricCorrelations {
        weighted_mae: correlate(imb, &|r| Some(r.weighted_mae)),
        precision: correlate(imb, &|r| r.precision),
        recall: correlate(imb, &|r| r.recall),
        f1: correlate(imb, &|r| r.f1),
    };
    let pearson_table = PearsonTable {
        kolmogorov: table_for(&|r| r.kolmogorov),
        wasserstein: table_for(&|r| r.wasserstein),
    };

    Ok(CorrelationReport {
        runs: cfg.runs,
        n_points: cfg.n_points,
        sweep_start: sweep_spec.start,
        sweep_end: sweep_spec.end,
        rows,
        pearson: pearson_table,
        excluded,
    })
}

/// The binned-error audit bundle: target histogram, imbalance scores,
/// and (when predictions are available) per-bin MAE over the same bins.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct AuditBundle {
    pub histogram: HistogramDensity,
    pub imbalance: ImbalanceReport,
    pub binned: Option<BinnedReport>,
}

impl AuditBundle {
    /// Plot-ready TSV rows `(bin_center, count, mae_or_null)`.
    pub fn to_tsv(&self) -> String {
        match &self.binned {
            Some(binned) => binned.to_tsv(),
            None => {
                let mut out = String::from("bin_center\tcount\tmae\n");
                for i in 0..self.histogram.n_bins() {
                    out.push_str(&format!(
                        "{}\t{}\tnull\n",
                        self.histogram.bin_center(i),
                        self.histogram.counts[i]
                    ));
                }
                out
            }
        }
    }
}

/// Composes the audit: histogram of the targets, imbalance of the
/// targets against `measure`, and per-bin MAE when predictions are
/// given (binned over the same histogram edges).
pub fn audit_binned(
    targets: &[f64],
    predictions: Option<&[f64]>,
    measure: &RelevanceMeasure,
    n_bins: usize,
) -> Result<AuditBundle> {
    let sample = Sample::new(targets)?;
    let histogram = build_histogram(&sample, n_bins, None)?;
    let imbalance = ImbalanceReport::compute(measure, &sample.ecdf())?;
    let binned = match predictions {
        Some(preds) => {
            let pset = PredictionSet::new(targets.to_vec(), preds.to_vec())?;
            Some(binned_mae(&pset, &histogram.bin_edges)?)
        }
        None => None,
    };
    Ok(AuditBundle { histogram, imbalance, binned })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng::{chacha, standard_normal};
    use approx::assert_relative_eq;

    #[test]
    fn sweep_endpoints_and_midpoint() {
        let spec = SweepSpec { start: (10.0, 3.0), end: (18.0, 5.0), n_points: 2 };
        let sweep = relevance_sweep(&spec).unwrap();
        assert_eq!(sweep.len(), 2);
        assert_relative_eq!(sweep[0].mean, 10.0);
        assert_relative_eq!(sweep[1].std, 5.0);

        let spec = SweepSpec { start: (10.0, 3.0), end: (18.0, 5.0), n_points: 3 };
        let sweep = relevance_sweep(&spec).unwrap();
        assert_relative_eq!(sweep[1].mean, 14.0);
        assert_relative_eq!(sweep[1].std, 4.0);
    }

    #[test]
    fn sweep_rejects_nonpositive_std() {
        let spec = SweepSpec { start: (0.0, 1.0), end: (5.0, -1.0), n_points: 5 };
        assert!(relevance_sweep(&spec).is_err());
    }

    #[test]
    fn pearson_examples() {
        let xs = [1.0, 2.0, 3.0, 4.0];
        let ys: Vec<f64> = xs.iter().map(|x| 2.0 * x + 1.0).collect();
        assert_relative_eq!(pearson(&xs, &ys).unwrap(), 1.0, epsilon = 1e-12);
        let neg: Vec<f64> = xs.iter().map(|x| -x).collect();
        assert_relative_eq!(pearson(&xs, &neg).unwrap(), -1.0, epsilon = 1e-12);
        assert_relative_eq!(
            pearson(&[1.0, 2.0, 3.0], &[1.0, 3.0, 2.0]).unwrap(),
            0.5,
            epsilon = 1e-12
        );
        assert_eq!(pearson(&[1.0, 2.0], &[5.0, 5.0]), None);
    }

    #[test]
    fn pearson_is_invariant_under_positive_affine_rescaling() {
        let xs: Vec<f64> = (0..30).map(|i| (i as f64 * 0.7).sin()).collect();
        let ys: Vec<f64> = (0..30).map(|i| (i as f64 * 0.3).cos() + 0.1 * i as f64).collect();
        let base = pearson(&xs, &ys).unwrap();
        let scaled: Vec<f64> = xs.iter().map(|x| 3.5 * x + 11.0).collect();
        assert_relative_eq!(pearson(&scaled, &ys).unwrap(), base, epsilon = 1e-12);
    }

    fn smoke_degeneration_config() -> DegenerationConfig {
        DegenerationConfig {
            i_values: vec![1.0, 2.0],
            runs: 1,
            base: BimodalSpec { n_minority: 40, seed: 3, ..Default::default() },
            epochs: 3,
            ..Default::default()
        }
    }

    #[test]
    fn degeneration_single_run_has_zero_std() {
        let report = run_degeneration(&smoke_degeneration_config()).unwrap();
        assert_eq!(report.rows.len(), 2);
        for row in &report.rows {
            assert_eq!(row.accuracy.std, 0.0);
            assert_eq!(row.mae_mode1.std, 0.0);
        }
        let text = report.to_text();
        assert!(text.contains("TPR"));
        assert!(text.contains("MAE_1"));
    }

    #[test]
    fn degeneration_is_deterministic() {
        let cfg = smoke_degeneration_config();
        let a = run_degeneration(&cfg).unwrap();
        let b = run_degeneration(&cfg).unwrap();
        assert_eq!(serde_json::to_string(&a).unwrap(), serde_json::to_string(&b).unwrap());
    }

    /// Small skewed regression dataset with learnable features.
    fn skewed_dataset(n: usize, seed: u64) -> Dataset {
        let mut rng = chacha(seed, 0);
        let mut features = Vec::with_capacity(n);
        let mut targets = Vec::with_capacity(n);
        for i in 0..n {
            let y = if i % 5 == 0 {
                14.0 + 3.0 * standard_normal(&mut rng).abs()
            } else {
                10.0 + 1.5 * standard_normal(&mut rng)
            };
            features.push(vec![
                y + standard_normal(&mut rng),
                0.5 * y + standard_normal(&mut rng),
            ]);
            targets.push(y);
        }
        Dataset::new(features, targets).unwrap()
    }

    #[test]
    fn correlation_report_shape() {
        let data = skewed_dataset(300, 5);
        let mut cfg = CorrelationConfig::new((18.0, 5.0));
        cfg.runs = 2;
        cfg.n_points = 4;
        cfg.epochs = 3;
        let report = run_correlation(&data, &cfg).unwrap();
        assert_eq!(report.rows.len(), 8);
        assert_relative_eq!(report.sweep_end.0, 18.0);
        for r in &report.rows {
            assert!(r.kolmogorov >= 0.0 && r.kolmogorov <= 1.0);
            assert!(r.wasserstein >= 0.0);
        }
        // Same (point, imbalance) scores across runs: the split is fixed.
        assert_relative_eq!(report.rows[0].kolmogorov, report.rows[4].kolmogorov);
        let text = report.to_text();
        assert!(text.contains("Wasserstein"));
    }

    #[test]
    fn wasserstein_grows_along_outward_sweep() {
        // Fixed std, mean moving away from the data mean: the CDF
        // separation, and with it d_wst, cannot shrink.
        let mut rng = chacha(11, 0);
        let targets: Vec<f64> = (0..400).map(|_| 5.0 + standard_normal(&mut rng)).collect();
        let ecdf = Sample::new(&targets).unwrap().ecdf();
        let mut last = 0.0;
        for k in 0..10 {
            let m = RelevanceMeasure::Normal(
                NormalRelevance::new(5.0 + k as f64, 1.0).unwrap(),
            );
            let d = wasserstein_distance(&m, &ecdf, DEFAULT_TAIL_EPS).unwrap();
            assert!(d >= last - 1e-9, "sweep point {k}: {d} < {last}");
            last = d;
        }
    }

    #[test]
    fn audit_composes_histogram_imbalance_and_binned_mae() {
        let data = skewed_dataset(200, 9);
        let measure = RelevanceMeasure::Normal(NormalRelevance::new(10.0, 2.0).unwrap());
        // Perfect predictions: every non-empty bin reports MAE 0 and the
        // imbalance scores are untouched by the predictions.
        let bundle =
            audit_binned(&data.targets, Some(&data.targets), &measure, 20).unwrap();
        let binned = bundle.binned.as_ref().unwrap();
        for mae in binned.mae_per_bin.iter().flatten() {
            assert_relative_eq!(*mae, 0.0);
        }
        let no_preds = audit_binned(&data.targets, None, &measure, 20).unwrap();
        assert_relative_eq!(no_preds.imbalance.kolmogorov, bundle.imbalance.kolmogorov);
        assert!(no_preds.binned.is_none());
        // Empty-bin markers surface as nulls in the TSV.
        let tsv = bundle.to_tsv();
        assert!(tsv.starts_with("bin_center\tcount\tmae\n"));
    }

    #[test]
    fn audit_constant_predictor_error_grows_with_distance_from_mode() {
        // Predicting the mode everywhere makes each bin's MAE roughly
        // |bin center - mode|, so bins further out must score worse.
        let data = skewed_dataset(500, 21);
        let constant = vec![10.0; data.targets.len()];
        let measure = RelevanceMeasure::Normal(NormalRelevance::new(10.0, 2.0).unwrap());
        let bundle = audit_binned(&data.targets, Some(&constant), &measure, 10).unwrap();
        let binned = bundle.binned.unwrap();
        let maes: Vec<(f64, f64)> = (0..binned.n_bins())
            .filter_map(|i| binned.mae_per_bin[i].map(|m| (binned.bin_center(i), m)))
            .collect();
        for pair in maes.windows(2) {
            if pair[0].0 >= 10.0 {
                assert!(
                    pair[1].1 >= pair[0].1 - 0.5,
                    "bin at {} has MAE {}, bin at {} has {}",
                    pair[0].0,
                    pair[0].1,
                    pair[1].0,
                    pair[1].1
                );
            }
        }
    }
}
