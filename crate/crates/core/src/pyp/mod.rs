//! The two-parameter Poisson-Dirichlet species sampling process.

mod eppf;
mod fit;
mod optim;
mod params;
mod posterior;
mod simulate;

pub use eppf::eppf_loglik;
pub use fit::{fit_empirical_bayes, FitConfig, FitResult};
pub use optim::{nelder_mead, NelderMeadConfig, NelderMeadResult};
pub use params::PdParams;
pub use posterior::{posterior_grid, GammaPrior, GridPosterior};
pub use simulate::{simulate_continuation, simulate_sample, Continuation, CrpState};
