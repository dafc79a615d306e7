//! Imbalance diagnostics for regression datasets.
//!
//! A regression dataset is imbalanced relative to what the user actually
//! cares about: a *relevance measure* on the target domain. This crate
//! provides
//!
//! - relevance measures (normal, uniform, histogram, point-mass) evaluable
//!   by CDF and interval mass ([`measures`]),
//! - empirical distribution functions and histogram density estimates
//!   ([`empirical`]),
//! - imbalance scores between a relevance measure and a sample (Kolmogorov
//!   and Wasserstein distances) plus a finite-partition balance check
//!   ([`imbalance`]),
//! - imbalance-aware model evaluation: per-bin MAE, relevance-weighted MAE,
//!   regression precision/recall/F ([`evaluation`]),
//! - synthetic bimodal dataset generation with a controlled imbalance
//!   factor ([`synth`]),
//! - a small deterministic MLP regressor/classifier ([`learner`]),
//! - experiment drivers: degeneration sweeps, metric-correlation studies,
//!   and binned-error audits ([`experiments`]).
//!
//! Experiment runs are data-parallel via rayon when the default `parallel`
//! feature is enabled; disable default features for a fully sequential
//! build.

pub mod empirical;
pub mod error;
pub mod evaluation;
pub mod experiments;
pub mod imbalance;
pub mod learner;
pub mod measures;
pub mod numeric;
pub mod par;
pub mod rng;
pub mod synth;

pub use error::{Error, Result};
