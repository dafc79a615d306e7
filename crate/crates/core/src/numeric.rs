//! Small numerical routines shared across modules: Gauss-Legendre
//! quadrature and monotone root bracketing.

use std::sync::OnceLock;

/// Nodes and weights of the `n`-point Gauss-Legendre rule on `[-1, 1]`,
/// computed by Newton iteration on the Legendre polynomial (cosine initial
/// guesses). Accurate to machine precision for the orders used here.
pub fn gauss_legendre(n: usize) -> (Vec<f64>, Vec<f64>) {
    assert!(n >= 2);
    let mut nodes = vec![0.0; n];
    let mut weights = vec![0.0; n];
    let m = n.div_ceil(2);
    for i in 0..m {
        let mut x = (std::f64::consts::PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
        loop {
            // Legendre recurrence for P_n(x) and P_{n-1}(x).
            let (mut p0, mut p1) = (1.0, x);
            for k in 2..=n {
                let k = k as f64;
                let p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
                p0 = p1;
                p1 = p2;
            }
            let dp = n as f64 * (x * p1 - p0) / (x * x - 1.0);
            let dx = p1 / dp;
            x -= dx;
            if dx.abs() < 1e-15 {
                let w = 2.0 / ((1.0 - x * x) * dp * dp);
                nodes[i] = -x;
                nodes[n - 1 - i] = x;
                weights[i] = w;
                weights[n - 1 - i] = w;
                break;
            }
        }
    }
    (nodes, weights)
}

/// Cached 64-point rule used for the smooth CDF segments.
pub fn gl64() -> &'static (Vec<f64>, Vec<f64>) {
    static GL64: OnceLock<(Vec<f64>, Vec<f64>)> = OnceLock::new();
    GL64.get_or_init(|| gauss_legendre(64))
}

/// Integrates `f` over `[a, b]` with the 64-point Gauss-Legendre rule.
pub fn integrate_gl64(f: impl Fn(f64) -> f64, a: f64, b: f64) -> f64 {
    let (nodes, weights) = gl64();
    let half = 0.5 * (b - a);
    let mid = 0.5 * (a + b);
    let mut acc = 0.0;
    for (x, w) in nodes.iter().zip(weights) {
        acc += w * f(mid + half * x);
    }
    acc * half
}

/// Finds `x` in `[lo, hi]` with `f(x) = target` for non-decreasing `f` by
/// bisection. The caller guarantees `f(lo) <= target <= f(hi)`.
pub fn bisect_increasing(f: impl Fn(f64) -> f64, mut lo: f64, mut hi: f64, target: f64) -> f64 {
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        if f(mid) < target {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    0.5 * (lo + hi)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn gl_weights_sum_to_interval_length() {
        for n in [2, 8, 64] {
            let (_, w) = gauss_legendre(n);
            assert_relative_eq!(w.iter().sum::<f64>(), 2.0, epsilon = 1e-13);
        }
    }

    #[test]
    fn gl64_integrates_polynomials_exactly() {
        // Degree up to 2n-1 is exact; check a few.
        let p = |x: f64| 3.0 * x * x * x - x + 2.0;
        assert_relative_eq!(integrate_gl64(p, -1.0, 2.0), 3.0 / 4.0 * 15.0 - 1.5 + 6.0, epsilon = 1e-12);
        assert_relative_eq!(integrate_gl64(|x| x.exp(), 0.0, 1.0), 1f64.exp() - 1.0, epsilon = 1e-13);
    }

    #[test]
    fn bisection_inverts_monotone_function() {
        let root = bisect_increasing(|x| x * x * x, 0.0, 2.0, 5.0);
        assert_relative_eq!(root, 5f64.cbrt(), epsilon = 1e-12);
    }
}
