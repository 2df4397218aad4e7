//! Point estimators of the `(m; l)`-discovery.

mod bnp;
mod estimate;
mod good_turing;
mod smoothing;
mod truth;

pub use bnp::{
    bnp_cumulative, bnp_discovery, bnp_discovery_value, bnp_discovery_via_identity, expected_freq_count,
    expected_new_species,
};
pub(crate) use bnp::check_distinct;
pub use estimate::{CredibleInterval, DiscoveryEstimate, Estimator, IntervalMethod, Target};
pub use good_turing::{good_toulmin, good_turing};
pub use smoothing::{pd_coefficients, smooth_spectrum, smoothed_good_turing, SmoothedSpectrum, SmoothingRule};
pub use truth::{riemann_zeta, sse, true_discovery, zeta_sample, Population, ZetaPopulation};
