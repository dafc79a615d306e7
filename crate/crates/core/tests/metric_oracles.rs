//! Independent brute-force oracles for the imbalance metrics: a dense
//! evaluation grid with its own sample-counting CDF, checked against the
//! exact breakpoint-based implementations. Plus the DKW-style empirical
//! CDF convergence check.

use rand_core::RngCore;
use regimb::empirical::EmpiricalCdf;
use regimb::imbalance::{kolmogorov_distance, wasserstein_distance, DEFAULT_TAIL_EPS};
use regimb::measures::{
    HistogramRelevance, NormalRelevance, PointMassRelevance, RelevanceMeasure, UniformRelevance,
};
use regimb::rng::{chacha, standard_normal, uniform_01};

/// Fraction of `sorted` at or below `x`, counted directly.
fn brute_ecdf(sorted: &[f64], x: f64) -> f64 {
    sorted.partition_point(|v| *v <= x) as f64 / sorted.len() as f64
}

/// Brute-force sup and integral of |F_mu - F_Y| on a dense grid over the
/// combined support, with extra evaluation just left of every jump.
fn brute_force(mu: &RelevanceMeasure, sorted: &[f64], grid_points: usize) -> (f64, f64) {
    let bps = mu.breakpoints();
    let lo = sorted[0].min(bps[0]) - 1.0;
    let hi = sorted.last().unwrap().max(*bps.last().unwrap()) + 1.0;
    let h = (hi - lo) / grid_points as f64;

    let mut sup = 0.0f64;
    let mut integral = 0.0;
    let mut idx = 0usize;
    let mut prev = f64::NAN;
    for k in 0..=grid_points {
        let x = lo + k as f64 * h;
        while idx < sorted.len() && sorted[idx] <= x {
            idx += 1;
        }
        let fy = idx as f64 / sorted.len() as f64;
        let diff = (mu.cdf(x) - fy).abs();
        sup = sup.max(diff);
        if k > 0 {
            integral += 0.5 * (diff + prev) * h;
        }
        prev = diff;
    }
    // Jump points of either function, approached from both sides.
    let delta = (hi - lo) * 1e-12;
    for &t in sorted.iter().chain(bps.iter()) {
        for x in [t - delta, t] {
            sup = sup.max((mu.cdf(x) - brute_ecdf(sorted, x)).abs());
        }
    }
    (sup, integral)
}

fn random_bounded_measure(rng: &mut rand_chacha::ChaCha20Rng) -> RelevanceMeasure {
    match rng.next_u64() % 3 {
        0 => {
            let lo = uniform_01(rng) * 10.0 - 5.0;
            let width = 0.5 + uniform_01(rng) * 8.0;
            RelevanceMeasure::Uniform(UniformRelevance::new(lo, lo + width).unwrap())
        }
        1 => {
            let n_bins = 2 + (rng.next_u64() % 5) as usize;
            let mut edges = vec![uniform_01(rng) * 8.0 - 4.0];
            for _ in 0..n_bins {
                edges.push(edges.last().unwrap() + 0.2 + uniform_01(rng) * 3.0);
            }
            let masses: Vec<f64> = (0..n_bins).map(|_| 0.05 + uniform_01(rng) * 5.0).collect();
            RelevanceMeasure::Histogram(HistogramRelevance::new(edges, masses).unwrap())
        }
        _ => {
            let n = 1 + (rng.next_u64() % 6) as usize;
            let mut locations: Vec<f64> =
                (0..n).map(|_| (uniform_01(rng) * 200.0).round() / 10.0 - 8.0).collect();
            locations.sort_by(f64::total_cmp);
            locations.dedup();
            let masses: Vec<f64> =
                (0..locations.len()).map(|_| 0.1 + uniform_01(rng) * 3.0).collect();
            RelevanceMeasure::PointMass(PointMassRelevance::new(locations, masses).unwrap())
        }
    }
}

#[test]
fn metrics_agree_with_dense_grid_brute_force() {
    for seed in 0..20u64 {
        let mut rng = chacha(seed, 40);
        let mu = random_bounded_measure(&mut rng).normalize().unwrap();
        let values: Vec<f64> = (0..50).map(|_| uniform_01(&mut rng) * 16.0 - 8.0).collect();
        let mut sorted = values.clone();
        sorted.sort_by(f64::total_cmp);

        let ecdf = EmpiricalCdf::from_sample(&values).unwrap();
        let kol = kolmogorov_distance(&mu, &ecdf).unwrap();
        let wst = wasserstein_distance(&mu, &ecdf, DEFAULT_TAIL_EPS).unwrap();
        let (kol_brute, wst_brute) = brute_force(&mu, &sorted, 1_000_000);

        assert!(
            (kol - kol_brute).abs() <= 1e-6,
            "seed {seed}: kolmogorov {kol} vs brute {kol_brute}"
        );
        let wst_tol = 1e-4 * wst.max(1.0);
        assert!(
            (wst - wst_brute).abs() <= wst_tol,
            "seed {seed}: wasserstein {wst} vs brute {wst_brute}"
        );
    }
}

#[test]
fn gauss_legendre_path_agrees_with_brute_force_for_normal_measures() {
    // The normal CDF exercises the quadrature path; the brute force
    // needs its support bounds patched in since breakpoints() is empty.
    for seed in 0..8u64 {
        let mut rng = chacha(seed, 41);
        let mean = uniform_01(&mut rng) * 8.0 - 4.0;
        let std = 0.3 + uniform_01(&mut rng) * 3.0;
        let mu = RelevanceMeasure::Normal(NormalRelevance::new(mean, std).unwrap());
        let values: Vec<f64> = (0..50)
            .map(|_| mean + (uniform_01(&mut rng) * 12.0 - 6.0))
            .collect();
        let mut sorted = values.clone();
        sorted.sort_by(f64::total_cmp);

        let ecdf = EmpiricalCdf::from_sample(&values).unwrap();
        let wst = wasserstein_distance(&mu, &ecdf, 1e-9).unwrap();

        let (lo, hi) = mu.quantile_range(1e-9);
        let lo = lo.min(sorted[0]);
        let hi = hi.max(*sorted.last().unwrap());
        let grid = 1_000_000usize;
        let h = (hi - lo) / grid as f64;
        let mut integral = 0.0;
        let mut prev = f64::NAN;
        for k in 0..=grid {
            let x = lo + k as f64 * h;
            let diff = (mu.cdf(x) - brute_ecdf(&sorted, x)).abs();
            if k > 0 {
                integral += 0.5 * (diff + prev) * h;
            }
            prev = diff;
        }
        assert!(
            (wst - integral).abs() <= 1e-4 * wst.max(1.0),
            "seed {seed}: wasserstein {wst} vs brute {integral}"
        );
    }
}

/// DKW-style convergence: 10,000 draws from a standard normal keep the
/// sup distance between the empirical CDF and the true CDF below 0.03
/// in at least 99% of seeded trials (the sup is evaluated at the sample
/// points, from both sides of each jump).
#[test]
fn ecdf_converges_to_true_cdf() {
    let truth = RelevanceMeasure::Normal(NormalRelevance::new(0.0, 1.0).unwrap());
    let trials = 100;
    let mut failures = 0;
    for seed in 0..trials {
        let mut rng = chacha(seed, 42);
        let values: Vec<f64> = (0..10_000).map(|_| standard_normal(&mut rng)).collect();
        let ecdf = EmpiricalCdf::from_sample(&values).unwrap();
        let mut sup = 0.0f64;
        for &x in ecdf.sorted_values() {
            let f = truth.cdf(x);
            sup = sup.max((f - ecdf.eval(x)).abs()).max((f - ecdf.eval_left(x)).abs());
        }
        if sup >= 0.03 {
            failures += 1;
        }
    }
    assert!(failures <= 1, "{failures} of {trials} trials exceeded the 0.03 bound");
}
