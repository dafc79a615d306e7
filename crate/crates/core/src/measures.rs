//! Relevance measures on the real target domain.
//!
//! A relevance measure assigns every target interval a non-negative,
//! finitely additive mass expressing how much that region matters. All
//! interval queries use half-open intervals `(a, b]`, so adjacent
//! intervals partition exactly. Four families are provided:
//!
//! - [`NormalRelevance`]: a normal probability measure (total mass 1),
//! - [`UniformRelevance`]: constant density on `[lo, hi]`; with the
//!   default density 1 this is Lebesgue measure restricted to the
//!   interval, assigning each sub-interval its natural length,
//! - [`HistogramRelevance`]: piecewise-constant density from bin masses,
//! - [`PointMassRelevance`]: atoms at distinct locations; with equal
//!   masses this is the count measure of the classification special case.
//!
//! Measures are immutable after construction and safe to share across
//! threads. Infinite or zero total mass is rejected at construction.

use crate::error::{Error, Result};
use crate::numeric::bisect_increasing;
use serde::{Deserialize, Serialize};
use statrs::function::erf::erfc;

const SQRT_2: f64 = std::f64::consts::SQRT_2;
const SQRT_TAU: f64 = 2.506_628_274_631_000_5;

/// Normal measure with total mass 1.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct NormalRelevance {
    pub mean: f64,
    pub std: f64,
}

/// Constant density `density` on `[lo, hi]`; defaults to Lebesgue
/// (density 1), i.e. total mass `hi - lo`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct UniformRelevance {
    pub lo: f64,
    pub hi: f64,
    #[serde(default = "default_density")]
    pub density: f64,
}

fn default_density() -> f64 {
    1.0
}

/// Piecewise-constant measure: `masses[i]` spread over
/// `(edges[i], edges[i+1]]`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct HistogramRelevance {
    pub edges: Vec<f64>,
    pub masses: Vec<f64>,
}

/// Atoms `masses[i]` at strictly increasing `locations[i]`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PointMassRelevance {
    pub locations: Vec<f64>,
    pub masses: Vec<f64>,
}

/// A relevance measure of one of the four supported families.
///
/// Serializes as a JSON object tagged by `kind`:
/// `{"kind": "normal", "mean": .., "std": ..}`,
/// `{"kind": "uniform", "lo": .., "hi": ..}`,
/// `{"kind": "histogram", "edges": [..], "masses": [..]}`,
/// `{"kind": "pointmass", "locations": [..], "masses": [..]}`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum RelevanceMeasure {
    Normal(NormalRelevance),
    Uniform(UniformRelevance),
    Histogram(HistogramRelevance),
    PointMass(PointMassRelevance),
}

impl NormalRelevance {
    pub fn new(mean: f64, std: f64) -> Result<Self> {
        let m = Self { mean, std };
        m.validate()?;
        Ok(m)
    }

    fn validate(&self) -> Result<()> {
        if !self.mean.is_finite() || !self.std.is_finite() || self.std <= 0.0 {
            return Err(Error::InvalidMeasure(format!(
                "normal requires finite mean and std > 0, got mean={}, std={}",
                self.mean, self.std
            )));
        }
        Ok(())
    }
}

impl UniformRelevance {
    /// Lebesgue measure on `[lo, hi]`.
    pub fn new(lo: f64, hi: f64) -> Result<Self> {
        let m = Self { lo, hi, density: 1.0 };
        m.validate()?;
        Ok(m)
    }

    fn validate(&self) -> Result<()> {
        if !self.lo.is_finite() || !self.hi.is_finite() || self.lo >= self.hi {
            return Err(Error::InvalidMeasure(format!(
                "uniform requires finite lo < hi, got lo={}, hi={}",
                self.lo, self.hi
            )));
        }
        if !self.density.is_finite() || self.density <= 0.0 {
            return Err(Error::InvalidMeasure(format!(
                "uniform density must be positive and finite, got {}",
                self.density
            )));
        }
        Ok(())
    }
}

impl HistogramRelevance {
    pub fn new(edges: Vec<f64>, masses: Vec<f64>) -> Result<Self> {
        let m = Self { edges, masses };
        m.validate()?;
        Ok(m)
    }

    fn validate(&self) -> Result<()> {
        if self.edges.len() < 2 || self.masses.len() != self.edges.len() - 1 {
            return Err(Error::InvalidMeasure(format!(
                "histogram requires n+1 edges for n >= 1 masses, got {} edges, {} masses",
                self.edges.len(),
                self.masses.len()
            )));
        }
        if self.edges.iter().any(|e| !e.is_finite())
            || self.edges.windows(2).any(|w| w[0] >= w[1])
        {
            return Err(Error::InvalidMeasure(
                "histogram edges must be finite and strictly ascending".into(),
            ));
        }
        if self.masses.iter().any(|m| !m.is_finite() || *m < 0.0) {
            return Err(Error::InvalidMeasure(
                "histogram masses must be finite and non-negative".into(),
            ));
        }
        Ok(())
    }
}

impl PointMassRelevance {
    pub fn new(locations: Vec<f64>, masses: Vec<f64>) -> Result<Self> {
        let m = Self { locations, masses };
        m.validate()?;
        Ok(m)
    }

    /// Count measure on the given points: one unit of mass per location.
    pub fn count_measure(locations: Vec<f64>) -> Result<Self> {
        let masses = vec![1.0; locations.len()];
        Self::new(locations, masses)
    }

    fn validate(&self) -> Result<()> {
        if self.locations.is_empty() || self.locations.len() != self.masses.len() {
            return Err(Error::InvalidMeasure(format!(
                "point-mass requires equally many locations and masses (>= 1), got {} and {}",
                self.locations.len(),
                self.masses.len()
            )));
        }
        if self.locations.iter().any(|x| !x.is_finite())
            || self.locations.windows(2).any(|w| w[0] >= w[1])
        {
            return Err(Error::InvalidMeasure(
                "point-mass locations must be finite, distinct and strictly ascending".into(),
            ));
        }
        if self.masses.iter().any(|m| !m.is_finite() || *m < 0.0) {
            return Err(Error::InvalidMeasure(
                "point-mass masses must be finite and non-negative".into(),
            ));
        }
        Ok(())
    }
}

/// Shape of the CDF between structural breakpoints; drives exact
/// integration in the Wasserstein metric.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CdfShape {
    /// Step function (point masses): constant between jumps.
    Constant,
    /// Piecewise linear (uniform, histogram).
    Linear,
    /// Smooth (normal).
    Smooth,
}

impl RelevanceMeasure {
    /// Parses and validates a measure from its JSON object form.
    pub fn from_json(json: &str) -> Result<Self> {
        let m: RelevanceMeasure = serde_json::from_str(json)?;
        m.validate()?;
        Ok(m)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("measure serialization cannot fail")
    }

    /// Re-checks all construction invariants, including finite total mass.
    pub fn validate(&self) -> Result<()> {
        match self {
            Self::Normal(m) => m.validate()?,
            Self::Uniform(m) => m.validate()?,
            Self::Histogram(m) => m.validate()?,
            Self::PointMass(m) => m.validate()?,
        }
        let total = self.total_mass();
        if !total.is_finite() {
            return Err(Error::UnusableMass(total));
        }
        Ok(())
    }

    /// Total mass of the measure over the whole real line.
    pub fn total_mass(&self) -> f64 {
        match self {
            Self::Normal(_) => 1.0,
            Self::Uniform(m) => (m.hi - m.lo) * m.density,
            Self::Histogram(m) => m.masses.iter().sum(),
            Self::PointMass(m) => m.masses.iter().sum(),
        }
    }

    /// `true` when the total mass is 1 up to 1e-9.
    pub fn is_normalized(&self) -> bool {
        (self.total_mass() - 1.0).abs() <= 1e-9
    }

    /// Mass of `(-inf, x]`. Non-decreasing in `x`, 0 at `-inf`, total mass
    /// at `+inf`.
    pub fn cdf(&self, x: f64) -> f64 {
        match self {
            Self::Normal(m) => normal_cdf(x, m.mean, m.std),
            Self::Uniform(m) => m.density * (x.min(m.hi) - m.lo).max(0.0),
            Self::Histogram(m) => {
                if x <= m.edges[0] {
                    return 0.0;
                }
                let mut acc = 0.0;
                for (i, mass) in m.masses.iter().enumerate() {
                    let (lo, hi) = (m.edges[i], m.edges[i + 1]);
                    if x >= hi {
                        acc += mass;
                    } else {
                        acc += mass * (x - lo) / (hi - lo);
                        break;
                    }
                }
                acc
            }
            Self::PointMass(m) => m
                .locations
                .iter()
                .zip(&m.masses)
                .take_while(|(loc, _)| **loc <= x)
                .map(|(_, mass)| mass)
                .sum(),
        }
    }

    /// Left limit of the CDF: mass of `(-inf, x)`. Differs from [`cdf`]
    /// only at point-mass atoms.
    ///
    /// [`cdf`]: Self::cdf
    pub fn cdf_left(&self, x: f64) -> f64 {
        match self {
            Self::PointMass(m) => m
                .locations
                .iter()
                .zip(&m.masses)
                .take_while(|(loc, _)| **loc < x)
                .map(|(_, mass)| mass)
                .sum(),
            _ => self.cdf(x),
        }
    }

    /// Mass of the half-open interval `(a, b]`, computed directly from
    /// the measure's structure (bin overlap sums, atom counts), not via
    /// CDF differences.
    ///
    /// `a = b` yields 0 (the empty interval has no relevance). Requires
    /// `a <= b`.
    pub fn measure_interval(&self, a: f64, b: f64) -> f64 {
        assert!(a <= b, "measure_interval requires a <= b, got ({a}, {b}]");
        match self {
            Self::Normal(m) => normal_cdf(b, m.mean, m.std) - normal_cdf(a, m.mean, m.std),
            Self::Uniform(m) => {
                let overlap = b.min(m.hi) - a.max(m.lo);
                m.density * overlap.max(0.0)
            }
            Self::Histogram(m) => {
                let mut acc = 0.0;
                for (i, mass) in m.masses.iter().enumerate() {
                    let (lo, hi) = (m.edges[i], m.edges[i + 1]);
                    let overlap = b.min(hi) - a.max(lo);
                    if overlap > 0.0 {
                        acc += mass * overlap / (hi - lo);
                    }
                }
                acc
            }
            Self::PointMass(m) => m
                .locations
                .iter()
                .zip(&m.masses)
                .filter(|(loc, _)| a < **loc && **loc <= b)
                .map(|(_, mass)| mass)
                .sum(),
        }
        .max(0.0)
    }

    /// Rescales the measure to total mass 1. Fails when the total mass is
    /// zero or non-finite, which makes the measure unusable as a
    /// relevance measure.
    pub fn normalize(&self) -> Result<RelevanceMeasure> {
        let total = self.total_mass();
        if !total.is_finite() || total <= 0.0 {
            return Err(Error::UnusableMass(total));
        }
        Ok(match self {
            Self::Normal(m) => Self::Normal(m.clone()),
            Self::Uniform(m) => Self::Uniform(UniformRelevance {
                lo: m.lo,
                hi: m.hi,
                density: m.density / total,
            }),
            Self::Histogram(m) => Self::Histogram(HistogramRelevance {
                edges: m.edges.clone(),
                masses: m.masses.iter().map(|v| v / total).collect(),
            }),
            Self::PointMass(m) => Self::PointMass(PointMassRelevance {
                locations: m.locations.clone(),
                masses: m.masses.iter().map(|v| v / total).collect(),
            }),
        })
    }

    /// Density at `x`, for measures that have one. Histogram bins are
    /// looked up as `[edge_i, edge_{i+1})` with the last bin
    /// right-inclusive, matching the empirical histogram convention.
    pub fn density(&self, x: f64) -> Result<f64> {
        match self {
            Self::Normal(m) => {
                let z = (x - m.mean) / m.std;
                Ok((-0.5 * z * z).exp() / (m.std * SQRT_TAU))
            }
            Self::Uniform(m) => Ok(if x >= m.lo && x <= m.hi { m.density } else { 0.0 }),
            Self::Histogram(m) => {
                let n_bins = m.masses.len();
                if x < m.edges[0] || x > m.edges[n_bins] {
                    return Ok(0.0);
                }
                let bin = m.edges[1..n_bins]
                    .iter()
                    .position(|e| x < *e)
                    .unwrap_or(n_bins - 1);
                Ok(m.masses[bin] / (m.edges[bin + 1] - m.edges[bin]))
            }
            Self::PointMass(_) => Err(Error::UnsupportedMeasure(
                "point-mass measures have no density".into(),
            )),
        }
    }

    fn max_density(&self) -> Result<f64> {
        match self {
            Self::Normal(m) => Ok(1.0 / (m.std * SQRT_TAU)),
            Self::Uniform(m) => Ok(m.density),
            Self::Histogram(m) => {
                let max = m
                    .masses
                    .iter()
                    .enumerate()
                    .map(|(i, mass)| mass / (m.edges[i + 1] - m.edges[i]))
                    .fold(0.0f64, f64::max);
                if max > 0.0 {
                    Ok(max)
                } else {
                    Err(Error::UnusableMass(0.0))
                }
            }
            Self::PointMass(_) => Err(Error::UnsupportedMeasure(
                "point-mass measures have no density".into(),
            )),
        }
    }

    /// Relevance function: the density rescaled to `[0, 1]` by its
    /// maximum. Equals 1 at the density mode.
    pub fn relevance(&self, x: f64) -> Result<f64> {
        Ok(self.density(x)? / self.max_density()?)
    }

    /// Interval `(lo, hi)` outside which each tail carries less than
    /// `tail_eps` mass. Exact support bounds for the bounded families;
    /// quantiles by bisection for the normal.
    pub fn quantile_range(&self, tail_eps: f64) -> (f64, f64) {
        let total = self.total_mass();
        match self {
            Self::Normal(m) => {
                let (a, b) = (m.mean - 40.0 * m.std, m.mean + 40.0 * m.std);
                let lo = bisect_increasing(|x| self.cdf(x), a, b, tail_eps * total);
                let hi = bisect_increasing(|x| self.cdf(x), a, b, (1.0 - tail_eps) * total);
                (lo, hi)
            }
            Self::Uniform(m) => (m.lo, m.hi),
            Self::Histogram(m) => (m.edges[0], *m.edges.last().unwrap()),
            Self::PointMass(m) => (m.locations[0], *m.locations.last().unwrap()),
        }
    }

    /// Points where the CDF changes shape (bin edges, atoms). Empty for
    /// the normal measure.
    pub fn breakpoints(&self) -> Vec<f64> {
        match self {
            Self::Normal(_) => Vec::new(),
            Self::Uniform(m) => vec![m.lo, m.hi],
            Self::Histogram(m) => m.edges.clone(),
            Self::PointMass(m) => m.locations.clone(),
        }
    }

    /// How the CDF behaves between breakpoints.
    pub fn cdf_shape(&self) -> CdfShape {
        match self {
            Self::Normal(_) => CdfShape::Smooth,
            Self::Uniform(_) | Self::Histogram(_) => CdfShape::Linear,
            Self::PointMass(_) => CdfShape::Constant,
        }
    }
}

fn normal_cdf(x: f64, mean: f64, std: f64) -> f64 {
    0.5 * erfc((mean - x) / (std * SQRT_2))
}
