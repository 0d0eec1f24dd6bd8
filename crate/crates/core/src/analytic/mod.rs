//! Analytic limit objects: marginal densities, distribution functions, true
//! quantiles and the covariances of the Gaussian limits.

pub mod covariance;
pub mod law;
pub mod normal;
pub mod quad;
pub mod root;
pub mod stable;
pub mod tail;

pub use covariance::{
    dist_d, limit_cov_empirical_g, limit_cov_quantile, limit_cov_quantile_fbm,
    limit_cov_quantile_stable, median_cov_fbm, quantile_cov_matrix,
};
pub use law::{
    convolved_cdf, convolved_density, ConvolutionBase, ConvolvedBase, GaussianFamily, LimitLaw,
    Marginal, MarginalLaw, ReferenceSamples, UnivariateLaw,
};
pub use stable::StableLaw;
pub use tail::{tail_bound_constants, TailBound, DEFAULT_TAIL_CONSTANT};

use crate::error::Result;

/// `f(t, x)` of the symmetric stable law with characteristic function `exp{-c t |u|^r}`.
pub fn stable_density(r: f64, c: f64, t: f64, x: f64) -> Result<f64> {
    StableLaw::new(r, c)?.density(t, x)
}

/// `F(t, x)` of the symmetric stable law.
pub fn stable_cdf(r: f64, c: f64, t: f64, x: f64) -> Result<f64> {
    StableLaw::new(r, c)?.cdf(t, x)
}

/// `τ_α(t) = F^{-1}(t, α)` for any marginal-law family.
pub fn true_quantile(law: &MarginalLaw, t: f64, alpha: f64) -> Result<f64> {
    law.at(t)?.quantile(alpha)
}

/// `P(X_s <= a, X_t <= b)` for the stable process, `0 < s < t`.
pub fn joint_prob_stable(r: f64, c: f64, s: f64, t: f64, a: f64, b: f64) -> Result<f64> {
    StableLaw::new(r, c)?.joint_cdf(s, a, t, b)
}
