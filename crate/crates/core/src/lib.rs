//! Discovery probabilities for species sampling.
//!
//! Estimates the probability that a future draw, after `m` more
//! observations, is a brand-new species or one seen exactly `l` times.
//! Bayesian nonparametric estimators under the two-parameter
//! Poisson–Dirichlet prior sit next to the Good–Turing family, and the
//! Bayesian ones come with exact or tilted-stable Monte Carlo credible
//! intervals.

// `!(x > 0.0)` is how NaN gets rejected along with the out-of-range values.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod error;
pub mod estimators;
pub mod fixtures;
pub mod intervals;
pub mod numeric;
pub mod pyp;
pub mod rng;
pub mod sample;
pub mod study;

pub use error::{Error, Result};
pub use estimators::{CredibleInterval, DiscoveryEstimate, Estimator, IntervalMethod, SmoothingRule, Target};
pub use intervals::Scaling;
pub use pyp::{FitConfig, FitResult, PdParams};
pub use rng::StreamPlan;
pub use sample::{FrequencySpectrum, LabeledSample, SampleSummary};
