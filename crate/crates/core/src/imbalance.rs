//! Imbalance scores between a relevance measure and a target
//! distribution, plus a finite-partition balance check.
//!
//! Both metrics compare the relevance measure's CDF against the empirical
//! distribution function of the observed targets:
//!
//! - Kolmogorov: `sup_x |F_mu(x) - F_Y(x)|`, bounded in `[0, 1]`,
//! - Wasserstein (order 1 on the line): `integral |F_mu(x) - F_Y(x)| dx`,
//!   unbounded above.
//!
//! Both are zero exactly when the compared CDFs agree everywhere, so a
//! mu-balanced sample scores minimal imbalance under either metric.

use crate::empirical::EmpiricalCdf;
use crate::error::{Error, Result};
use crate::measures::{CdfShape, RelevanceMeasure};
use crate::numeric::{bisect_increasing, integrate_gl64};
use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;

/// Default per-tail mass cut off when truncating the Wasserstein
/// integration range for measures with unbounded support.
pub const DEFAULT_TAIL_EPS: f64 = 1e-6;

/// Kolmogorov and Wasserstein scores of one dataset against one
/// relevance measure.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct ImbalanceReport {
    pub kolmogorov: f64,
    pub wasserstein: f64,
    pub n_samples: usize,
    pub measure: RelevanceMeasure,
}

impl ImbalanceReport {
    /// Normalizes `measure` and computes both scores against the sample.
    pub fn compute(measure: &RelevanceMeasure, ecdf: &EmpiricalCdf) -> Result<Self> {
        let normalized = measure.normalize()?;
        Ok(Self {
            kolmogorov: kolmogorov_distance(&normalized, ecdf)?,
            wasserstein: wasserstein_distance(&normalized, ecdf, DEFAULT_TAIL_EPS)?,
            n_samples: ecdf.n(),
            measure: measure.clone(),
        })
    }
}

fn require_normalized(mu: &RelevanceMeasure) -> Result<()> {
    if !mu.is_normalized() {
        return Err(Error::NotNormalized(mu.total_mass()));
    }
    Ok(())
}

/// Kolmogorov distance `sup_x |F_mu(x) - F_Y(x)|` between a normalized
/// relevance measure and an empirical CDF.
///
/// The supremum is exact: with `F_Y` a step function and `F_mu` monotone
/// between its own discontinuities, it is attained at a sample point or a
/// measure atom, approached from the left or the right. Both one-sided
/// values are evaluated at every such point.
pub fn kolmogorov_distance(mu: &RelevanceMeasure, ecdf: &EmpiricalCdf) -> Result<f64> {
    require_normalized(mu)?;
    let mut sup = 0.0f64;
    let mut check = |t: f64| {
        sup = sup
            .max((mu.cdf(t) - ecdf.eval(t)).abs())
            .max((mu.cdf_left(t) - ecdf.eval_left(t)).abs());
    };
    for &t in ecdf.sorted_values() {
        check(t);
    }
    if let RelevanceMeasure::PointMass(pm) = mu {
        for &t in &pm.locations {
            check(t);
        }
    }
    Ok(sup.min(1.0))
}

/// Wasserstein estimate together with the bound on the mass truncated at
/// the integration-range tails (zero for bounded-support measures).
#[derive(Clone, Copy, Debug)]
pub struct WassersteinEstimate {
    pub value: f64,
    pub truncation_bound: f64,
}

/// Wasserstein distance `integral |F_mu(x) - F_Y(x)| dx` between a
/// normalized relevance measure and an empirical CDF.
///
/// Integration runs over `[L, U]` chosen so each measure tail outside it
/// carries less than `tail_eps` mass, extended to cover the sample range.
/// Between consecutive breakpoints the integrand is computed exactly for
/// step and piecewise-linear measure CDFs, and by 64-point Gauss-Legendre
/// (split at the sign change) for the normal CDF.
pub fn wasserstein_distance(
    mu: &RelevanceMeasure,
    ecdf: &EmpiricalCdf,
    tail_eps: f64,
) -> Result<f64> {
    wasserstein_detailed(mu, ecdf, tail_eps).map(|est| est.value)
}

/// As [`wasserstein_distance`], also reporting the truncation bound.
pub fn wasserstein_detailed(
    mu: &RelevanceMeasure,
    ecdf: &EmpiricalCdf,
    tail_eps: f64,
) -> Result<WassersteinEstimate> {
    require_normalized(mu)?;
    let shape = mu.cdf_shape();
    let (q_lo, q_hi) = mu.quantile_range(tail_eps);
    let lo = q_lo.min(ecdf.sorted_values()[0]);
    let hi = q_hi.max(*ecdf.sorted_values().last().unwrap());

    let mut breaks: Vec<f64> = Vec::with_capacity(ecdf.n() + 4);
    breaks.push(lo);
    breaks.extend(
        ecdf.sorted_values()
            .iter()
            .chain(mu.breakpoints().iter())
            .copied()
            .filter(|t| *t > lo && *t < hi),
    );
    breaks.push(hi);
    breaks.sort_by(f64::total_cmp);
    breaks.dedup();

    let mut total = 0.0;
    for w in breaks.windows(2) {
        let (a, b) = (w[0], w[1]);
        let fy = ecdf.eval(a); // constant on [a, b)
        total += match shape {
            CdfShape::Constant => (mu.cdf(a) - fy).abs() * (b - a),
            CdfShape::Linear => linear_abs_integral(mu.cdf(a) - fy, mu.cdf(b) - fy, b - a),
            CdfShape::Smooth => smooth_abs_integral(mu, a, b, fy),
        };
    }
    let truncation_bound = match shape {
        CdfShape::Smooth => tail_eps * (hi - lo),
        _ => 0.0,
    };
    Ok(WassersteinEstimate { value: total, truncation_bound })
}

/// Exact integral of `|linear|` over a segment of width `dx`, where the
/// linear function runs from `d0` to `d1`.
fn linear_abs_integral(d0: f64, d1: f64, dx: f64) -> f64 {
    if d0 * d1 >= 0.0 {
        0.5 * (d0.abs() + d1.abs()) * dx
    } else {
        // One sign change: two triangles.
        0.5 * (d0 * d0 + d1 * d1) / (d0.abs() + d1.abs()) * dx
    }
}

/// Integral of `|F_mu - c|` over `[a, b]` for a smooth monotone CDF,
/// splitting at the crossing point so each Gauss-Legendre panel sees a
/// smooth integrand.
fn smooth_abs_integral(mu: &RelevanceMeasure, a: f64, b: f64, c: f64) -> f64 {
    let (v0, v1) = (mu.cdf(a), mu.cdf(b));
    if c <= v0 {
        integrate_gl64(|x| mu.cdf(x) - c, a, b)
    } else if c >= v1 {
        integrate_gl64(|x| c - mu.cdf(x), a, b)
    } else {
        let cross = bisect_increasing(|x| mu.cdf(x), a, b, c);
        integrate_gl64(|x| c - mu.cdf(x), a, cross) + integrate_gl64(|x| mu.cdf(x) - c, cross, b)
    }
}

/// Kolmogorov distance between two normalized bounded-support measures
/// (uniform, histogram, point-mass). Normal measures are not supported
/// here; compare them against samples instead.
pub fn kolmogorov_between(a: &RelevanceMeasure, b: &RelevanceMeasure) -> Result<f64> {
    require_normalized(a)?;
    require_normalized(b)?;
    require_bounded(a)?;
    require_bounded(b)?;
    let mut sup = 0.0f64;
    for t in a.breakpoints().into_iter().chain(b.breakpoints()) {
        sup = sup
            .max((a.cdf(t) - b.cdf(t)).abs())
            .max((a.cdf_left(t) - b.cdf_left(t)).abs());
    }
    Ok(sup.min(1.0))
}

/// Wasserstein distance between two normalized bounded-support measures.
pub fn wasserstein_between(a: &RelevanceMeasure, b: &RelevanceMeasure) -> Result<f64> {
    require_normalized(a)?;
    require_normalized(b)?;
    require_bounded(a)?;
    require_bounded(b)?;
    let mut breaks: Vec<f64> = a.breakpoints();
    breaks.extend(b.breakpoints());
    breaks.sort_by(f64::total_cmp);
    breaks.dedup();
    let mut total = 0.0;
    for w in breaks.windows(2) {
        let (s, t) = (w[0], w[1]);
        // Right value at the left endpoint, left value at the right
        // endpoint: linear in between for every supported combination.
        let d0 = a.cdf(s) - b.cdf(s);
        let d1 = a.cdf_left(t) - b.cdf_left(t);
        total += linear_abs_integral(d0, d1, t - s);
    }
    Ok(total)
}

fn require_bounded(m: &RelevanceMeasure) -> Result<()> {
    if m.cdf_shape() == CdfShape::Smooth {
        return Err(Error::UnsupportedMeasure(
            "measure-to-measure distances require bounded piecewise measures".into(),
        ));
    }
    Ok(())
}

/// Target-side distribution accepted by the balance check: either an
/// empirical CDF or another measure.
#[derive(Clone, Copy, Debug)]
pub enum TargetDistribution<'a> {
    Empirical(&'a EmpiricalCdf),
    Measure(&'a RelevanceMeasure),
}

impl TargetDistribution<'_> {
    fn interval_prob(&self, normalized: Option<&RelevanceMeasure>, a: f64, b: f64) -> f64 {
        match self {
            Self::Empirical(e) => e.eval(b) - e.eval(a),
            Self::Measure(_) => normalized
                .expect("normalized measure prepared by caller")
                .measure_interval(a, b),
        }
    }
}

/// One violating ordered pair from a balance check: the first bin has
/// lower relevance but higher probability than the second.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct BalanceViolation {
    pub bin: (f64, f64),
    pub other_bin: (f64, f64),
    pub mu_bin: f64,
    pub mu_other: f64,
    pub p_bin: f64,
    pub p_other: f64,
}

/// Result of checking mu-balance over a finite partition.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct BalanceCheckResult {
    pub balanced: bool,
    pub violations: Vec<BalanceViolation>,
    pub epsilon: f64,
}

/// Tolerance absorbing empirical fluctuation when checking balance
/// against an `n`-point sample.
pub fn default_balance_epsilon(n: usize) -> f64 {
    2.0 / (n as f64).sqrt()
}

/// Checks mu-balance over the finite partition given by `partition` bin
/// edges: for every ordered pair of bins `(S, S')` with
/// `mu(S) <= mu(S') - epsilon`, the target probability must satisfy
/// `P(S) <= P(S') + epsilon`. Higher relevance must come with higher
/// probability; every failing pair is recorded.
///
/// Both `mu` and a measure-valued `p` are normalized internally.
pub fn mu_balance_check(
    mu: &RelevanceMeasure,
    p: TargetDistribution<'_>,
    partition: &[f64],
    epsilon: f64,
) -> Result<BalanceCheckResult> {
    if partition.len() < 3 {
        return Err(Error::InvalidBins(
            "balance check requires a partition with at least 2 bins".into(),
        ));
    }
    if partition.windows(2).any(|w| w[0] >= w[1]) {
        return Err(Error::InvalidBins("partition edges must be strictly ascending".into()));
    }
    let mu_norm = mu.normalize()?;
    let p_norm = match p {
        TargetDistribution::Measure(m) => Some(m.normalize()?),
        TargetDistribution::Empirical(_) => None,
    };
    let bins: Vec<(f64, f64)> = partition.windows(2).map(|w| (w[0], w[1])).collect();
    let mu_mass: Vec<f64> = bins.iter().map(|&(a, b)| mu_norm.measure_interval(a, b)).collect();
    let p_mass: Vec<f64> = bins
        .iter()
        .map(|&(a, b)| p.interval_prob(p_norm.as_ref(), a, b))
        .collect();

    let mut violations = Vec::new();
    for i in 0..bins.len() {
        for j in 0..bins.len() {
            if i == j {
                continue;
            }
            if mu_mass[i] <= mu_mass[j] - epsilon && p_mass[i] > p_mass[j] + epsilon {
                violations.push(BalanceViolation {
                    bin: bins[i],
                    other_bin: bins[j],
                    mu_bin: mu_mass[i],
                    mu_other: mu_mass[j],
                    p_bin: p_mass[i],
                    p_other: p_mass[j],
                });
            }
        }
    }
    Ok(BalanceCheckResult { balanced: violations.is_empty(), violations, epsilon })
}

/// Classic classification imbalance factor: most common class count over
/// least common class count. Needs at least two distinct labels.
pub fn classification_imbalance_factor(labels: &[i64]) -> Result<f64> {
    let mut counts: BTreeMap<i64, usize> = BTreeMap::new();
    for &l in labels {
        *counts.entry(l).or_insert(0) += 1;
    }
    if counts.len() < 2 {
        return Err(Error::InvalidLabels(format!(
            "imbalance factor requires >= 2 distinct classes, got {}",
            counts.len()
        )));
    }
    let max = *counts.values().max().unwrap() as f64;
    let min = *counts.values().min().unwrap() as f64;
    Ok(max / min)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::measures::{
        HistogramRelevance, NormalRelevance, PointMassRelevance, UniformRelevance,
    };
    use approx::assert_relative_eq;

    fn uniform01() -> RelevanceMeasure {
        RelevanceMeasure::Uniform(UniformRelevance::new(0.0, 1.0).unwrap())
    }

    fn ecdf(values: &[f64]) -> EmpiricalCdf {
        EmpiricalCdf::from_sample(values).unwrap()
    }

    /// Exact quantile sample of Uniform(shift, shift+1): (i-0.5)/n + shift.
    fn uniform_quantiles(n: usize, shift: f64) -> Vec<f64> {
        (1..=n).map(|i| shift + (i as f64 - 0.5) / n as f64).collect()
    }

    #[test]
    fn kolmogorov_of_matched_quantile_sample() {
        for n in [10usize, 100, 1000] {
            let e = ecdf(&uniform_quantiles(n, 0.0));
            let d = kolmogorov_distance(&uniform01(), &e).unwrap();
            assert_relative_eq!(d, 0.5 / n as f64, epsilon = 1e-12);
        }
    }

    #[test]
    fn kolmogorov_of_disjoint_point_masses_is_one() {
        let mu = RelevanceMeasure::PointMass(
            PointMassRelevance::new(vec![0.0], vec![1.0]).unwrap(),
        );
        let d = kolmogorov_distance(&mu, &ecdf(&[1.0, 1.0, 1.0])).unwrap();
        assert_relative_eq!(d, 1.0);
    }

    #[test]
    fn kolmogorov_of_half_shifted_uniform() {
        // F_mu(x) = x on [0,1] vs quantiles of Uniform(0.5, 1.5); the sup
        // sits on [0.5, 1] at height ~0.5.
        let e = ecdf(&uniform_quantiles(1000, 0.5));
        let d = kolmogorov_distance(&uniform01(), &e).unwrap();
        assert!((d - 0.5).abs() < 0.01, "d = {d}");
    }

    #[test]
    fn kolmogorov_rejects_unnormalized() {
        let mu = RelevanceMeasure::Uniform(UniformRelevance::new(0.0, 2.0).unwrap());
        let res = kolmogorov_distance(&mu, &ecdf(&[0.5]));
        assert!(matches!(res, Err(Error::NotNormalized(_))));
    }

    #[test]
    fn wasserstein_of_identical_step_functions_is_zero() {
        let values = [0.5, 1.25, 3.0, 7.5];
        let mu = RelevanceMeasure::PointMass(
            PointMassRelevance::new(values.to_vec(), vec![0.25; 4]).unwrap(),
        );
        let d = wasserstein_distance(&mu, &ecdf(&values), DEFAULT_TAIL_EPS).unwrap();
        assert!(d < 1e-10, "d = {d}");
        let k = kolmogorov_distance(&mu, &ecdf(&values)).unwrap();
        assert!(k < 1e-10, "k = {k}");
    }

    #[test]
    fn wasserstein_of_point_mass_vs_constant_sample() {
        // Indicator mismatch over [0, c]: distance c exactly.
        let mu = RelevanceMeasure::PointMass(
            PointMassRelevance::new(vec![0.0], vec![1.0]).unwrap(),
        );
        let c = 2.5;
        let d = wasserstein_distance(&mu, &ecdf(&[c, c, c]), DEFAULT_TAIL_EPS).unwrap();
        assert_relative_eq!(d, c, epsilon = 1e-9);
    }

    #[test]
    fn wasserstein_of_unit_shifted_uniform() {
        let e = ecdf(&uniform_quantiles(1000, 1.0));
        let d = wasserstein_distance(&uniform01(), &e, DEFAULT_TAIL_EPS).unwrap();
        assert!((d - 1.0).abs() < 0.01, "d = {d}");
    }

    #[test]
    fn wasserstein_truncation_bound_only_for_normal() {
        let e = ecdf(&[0.0, 1.0]);
        let normal = RelevanceMeasure::Normal(NormalRelevance::new(0.0, 1.0).unwrap());
        let est = wasserstein_detailed(&normal, &e, 1e-6).unwrap();
        assert!(est.truncation_bound > 0.0);
        let est = wasserstein_detailed(&uniform01(), &e, 1e-6).unwrap();
        assert_eq!(est.truncation_bound, 0.0);
    }

    #[test]
    fn kolmogorov_sup_approaches_one() {
        // For x_n with F_mu(x_n) >= 1 - 1/n, a sample concentrated past
        // x_n scores at least 1 - 1/n.
        let normal = RelevanceMeasure::Normal(NormalRelevance::new(0.0, 1.0).unwrap());
        for n in [10usize, 100, 1000] {
            let target = 1.0 - 1.0 / n as f64;
            let x_n = bisect_increasing(|x| normal.cdf(x), -40.0, 40.0, target);
            let e = ecdf(&vec![x_n + 1.0; 5]);
            let d = kolmogorov_distance(&normal, &e).unwrap();
            assert!(d >= target - 1e-9, "n={n}, d={d}");
            assert!(d <= 1.0);
        }
    }

    #[test]
    fn wasserstein_grows_linearly_in_shift() {
        // F_mu(x0) >= 0.9 and a point mass at x0 + eps leaves a gap of at
        // least 0.9 * eps.
        let mu = uniform01();
        let x0 = 0.95; // F_mu(0.95) = 0.95 >= 0.9
        for eps in [1.0, 10.0, 100.0] {
            let e = ecdf(&vec![x0 + eps; 3]);
            let d = wasserstein_distance(&mu, &e, DEFAULT_TAIL_EPS).unwrap();
            assert!(d >= 0.9 * eps, "eps={eps}, d={d}");
        }
    }

    #[test]
    fn distances_are_symmetric_between_measures() {
        let a = RelevanceMeasure::Histogram(
            HistogramRelevance::new(vec![0.0, 1.0, 2.0, 4.0], vec![0.2, 0.5, 0.3]).unwrap(),
        );
        let b = RelevanceMeasure::Histogram(
            HistogramRelevance::new(vec![-1.0, 0.5, 3.0], vec![0.6, 0.4]).unwrap(),
        );
        assert_relative_eq!(
            kolmogorov_between(&a, &b).unwrap(),
            kolmogorov_between(&b, &a).unwrap(),
            epsilon = 1e-14
        );
        assert_relative_eq!(
            wasserstein_between(&a, &b).unwrap(),
            wasserstein_between(&b, &a).unwrap(),
            epsilon = 1e-14
        );
        assert_relative_eq!(wasserstein_between(&a, &a).unwrap(), 0.0);
        assert_relative_eq!(kolmogorov_between(&a, &a).unwrap(), 0.0);
    }

    #[test]
    fn wasserstein_between_shifted_uniforms_is_the_shift() {
        let a = RelevanceMeasure::Uniform(UniformRelevance::new(0.0, 1.0).unwrap());
        let b = RelevanceMeasure::Uniform(UniformRelevance::new(3.0, 4.0).unwrap());
        assert_relative_eq!(wasserstein_between(&a, &b).unwrap(), 3.0, epsilon = 1e-12);
    }

    #[test]
    fn balance_check_measure_against_itself() {
        // Any problem is balanced with regards to its own probability
        // measure.
        let mu = RelevanceMeasure::Histogram(
            HistogramRelevance::new(vec![0.0, 1.0, 2.0, 3.0], vec![0.2, 0.5, 0.3]).unwrap(),
        );
        let res = mu_balance_check(
            &mu,
            TargetDistribution::Measure(&mu),
            &[0.0, 0.75, 1.5, 2.25, 3.0],
            0.0,
        )
        .unwrap();
        assert!(res.balanced, "violations: {:?}", res.violations);
    }

    #[test]
    fn balance_check_detects_violation() {
        let mu = RelevanceMeasure::Uniform(UniformRelevance::new(0.0, 2.0).unwrap());
        let p = RelevanceMeasure::PointMass(
            PointMassRelevance::new(vec![0.5], vec![1.0]).unwrap(),
        );
        let res = mu_balance_check(
            &mu,
            TargetDistribution::Measure(&p),
            &[0.0, 1.0, 2.0],
            0.0,
        )
        .unwrap();
        assert!(!res.balanced);
        assert_eq!(res.violations.len(), 1);
        let v = &res.violations[0];
        assert_eq!(v.bin, (0.0, 1.0));
        assert_relative_eq!(v.p_bin, 1.0);
        assert_relative_eq!(v.p_other, 0.0);
    }

    #[test]
    fn balance_check_count_measure_against_uniform_classes() {
        // Count measure on classes {0, 1} vs the uniform class
        // distribution: the classification special case is balanced.
        let mu = RelevanceMeasure::PointMass(
            PointMassRelevance::count_measure(vec![0.0, 1.0]).unwrap(),
        );
        let p = RelevanceMeasure::PointMass(
            PointMassRelevance::new(vec![0.0, 1.0], vec![0.5, 0.5]).unwrap(),
        );
        let res = mu_balance_check(
            &mu,
            TargetDistribution::Measure(&p),
            &[-0.5, 0.5, 1.5],
            0.0,
        )
        .unwrap();
        assert!(res.balanced);
    }

    #[test]
    fn balance_check_empirical_target() {
        let mu = uniform01();
        let e = ecdf(&uniform_quantiles(400, 0.0));
        let res = mu_balance_check(
            &mu,
            TargetDistribution::Empirical(&e),
            &[0.0, 0.25, 0.5, 0.75, 1.0],
            default_balance_epsilon(400),
        )
        .unwrap();
        assert!(res.balanced);
    }

    #[test]
    fn imbalance_factor_examples() {
        assert_relative_eq!(classification_imbalance_factor(&[0, 0, 1, 1]).unwrap(), 1.0);
        assert_relative_eq!(classification_imbalance_factor(&[0, 0, 0, 1]).unwrap(), 3.0);
        let mut labels = vec![0i64; 2000];
        labels.extend(vec![1i64; 100]);
        assert_relative_eq!(classification_imbalance_factor(&labels).unwrap(), 20.0);
        assert!(classification_imbalance_factor(&[1, 1, 1]).is_err());
    }

    #[test]
    fn report_serializes_expected_fields() {
        let mu = uniform01();
        let report = ImbalanceReport::compute(&mu, &ecdf(&uniform_quantiles(50, 0.0))).unwrap();
        let json: serde_json::Value = serde_json::to_value(&report).unwrap();
        for key in ["kolmogorov", "wasserstein", "n_samples", "measure"] {
            assert!(json.get(key).is_some(), "missing {key}");
        }
        assert_eq!(json["n_samples"], 50);
    }
}
