//! Credible intervals for discovery probabilities.

mod credible;
mod exact;
mod scaling;
mod stable;
mod zpost;

pub use crate::estimators::{CredibleInterval, IntervalMethod};
pub use credible::{credible_interval, quantile, Scaling, ZDraws, MIN_DRAWS};
pub use exact::{exact_interval_new_species_based, exact_pmf_new_species};
pub use scaling::{asymptotic_estimate, discovery_coefficient, r_star, r_star_cum, target_coefficient};
pub use stable::{
    sample_positive_stable, sample_tilted_stable, PositiveStable, TiltedStable, TiltedStats, PROPOSAL_CAP,
};
pub use zpost::{mean_z, sample_z, ZPosteriorSampler};
