//! Marginal laws `F(t, ·)` and the joint laws behind the limit covariances.

use std::f64::consts::PI;
use std::sync::Arc;

use super::normal;
use super::quad::{gauss_hermite, Quadrature};
use super::root::solve_monotone;
use super::stable::StableLaw;
use crate::dist::Dist1D;
use crate::error::{invalid, Error, Result};

/// A continuous distribution on ℝ with a density and a quantile function.
pub trait UnivariateLaw {
    fn cdf(&self, x: f64) -> Result<f64>;
    fn density(&self, x: f64) -> Result<f64>;
    fn quantile(&self, alpha: f64) -> Result<f64>;
}

/// Law of a process observed at two times, enough to evaluate the limit covariances.
pub trait LimitLaw: Send + Sync {
    /// Marginal law of `X(t)`.
    fn marginal(&self, t: f64) -> Result<Marginal>;

    /// `P(X(s) <= x, X(t) <= y)` for `s != t`.
    fn joint_cdf(&self, s: f64, x: f64, t: f64, y: f64) -> Result<f64>;
}

impl UnivariateLaw for Dist1D {
    fn cdf(&self, x: f64) -> Result<f64> {
        Ok(Dist1D::cdf(self, x))
    }

    fn density(&self, x: f64) -> Result<f64> {
        Dist1D::density(self, x)
            .ok_or_else(|| Error::Domain(format!("{self:?} has no Lebesgue density")))
    }

    fn quantile(&self, alpha: f64) -> Result<f64> {
        if !(alpha > 0.0 && alpha < 1.0) {
            return Err(invalid("alpha", format!("{alpha} outside (0, 1)")));
        }
        Ok(match *self {
            Dist1D::Constant { value } => value,
            Dist1D::Normal { mean, sd } => mean + sd * normal::quantile(alpha),
            Dist1D::Uniform { low, high } => low + (high - low) * alpha,
            Dist1D::Laplace { loc, scale } => {
                if alpha < 0.5 {
                    loc + scale * (2.0 * alpha).ln()
                } else {
                    loc - scale * (2.0 * (1.0 - alpha)).ln()
                }
            }
            Dist1D::Exponential { rate } => -(-alpha).ln_1p() / rate,
            Dist1D::Cauchy { loc, scale } => loc + scale * (PI * (alpha - 0.5)).tan(),
        })
    }
}

/// Mixing distribution `H_t` of the base process in a convolution `X = Y + Z`.
#[derive(Debug, Clone, PartialEq)]
pub enum ConvolutionBase {
    PointMass(f64),
    Gaussian {
        mean: f64,
        sd: f64,
    },
    /// Equally weighted reference sample of `Y(t)`.
    Samples(Arc<[f64]>),
}

const HERMITE_NODES: usize = 96;

fn hermite_rule() -> &'static (Vec<f64>, Vec<f64>) {
    static RULE: std::sync::OnceLock<(Vec<f64>, Vec<f64>)> = std::sync::OnceLock::new();
    RULE.get_or_init(|| gauss_hermite(HERMITE_NODES))
}

/// Average of `h(x - v)` against the base law, for `h` = density or CDF of `Z`.
fn mix(base: &ConvolutionBase, z: &Dist1D, x: f64, h: &dyn Fn(f64) -> f64) -> Result<f64> {
    match base {
        ConvolutionBase::PointMass(v) => Ok(h(x - v)),
        ConvolutionBase::Samples(vs) => {
            if vs.is_empty() {
                return Err(Error::Empty("convolution reference sample"));
            }
            Ok(vs.iter().map(|&v| h(x - v)).sum::<f64>() / vs.len() as f64)
        }
        ConvolutionBase::Gaussian { mean, sd } => {
            if *sd == 0.0 {
                return Ok(h(x - mean));
            }
            if matches!(z, Dist1D::Normal { .. } | Dist1D::Cauchy { .. }) {
                let (nodes, weights) = hermite_rule();
                let s = std::f64::consts::SQRT_2 * sd;
                let total: f64 = nodes
                    .iter()
                    .zip(weights)
                    .map(|(&y, &w)| w * h(x - mean - s * y))
                    .sum();
                Ok(total / PI.sqrt())
            } else {
                // Non-smooth z: adaptive rule split at the kink of h(x - v).
                let kink = x - z_kink(z);
                let q = Quadrature::new(1e-14, 1e-12);
                let f = |v: f64| h(x - v) * normal::pdf((v - mean) / sd) / sd;
                let lo = q.integrate_lower_tail(f, kink, *sd)?;
                let hi = q.integrate(
                    |w| {
                        let om = 1.0 - w;
                        let v = kink + sd * w / om;
                        let val = f(v) * sd / (om * om);
                        if val.is_finite() {
                            val
                        } else {
                            0.0
                        }
                    },
                    0.0,
                    1.0,
                )?;
                Ok(lo.value + hi.value)
            }
        }
    }
}

fn z_kink(z: &Dist1D) -> f64 {
    match *z {
        Dist1D::Laplace { loc, .. } => loc,
        Dist1D::Uniform { low, .. } => low,
        Dist1D::Exponential { .. } => 0.0,
        Dist1D::Constant { value } => value,
        Dist1D::Normal { mean, .. } => mean,
        Dist1D::Cauchy { loc, .. } => loc,
    }
}

/// Density of `Y(t) + Z`: `∫ g(x - v) dH_t(v)`.
pub fn convolved_density(base: &ConvolutionBase, z: &Dist1D, x: f64) -> Result<f64> {
    if z.density(0.0).is_none() {
        return Err(invalid("z", "shift law has no density"));
    }
    mix(base, z, x, &|u| z.density(u).unwrap_or(0.0))
}

/// Distribution function of `Y(t) + Z`: `∫ G(x - v) dH_t(v)`.
pub fn convolved_cdf(base: &ConvolutionBase, z: &Dist1D, x: f64) -> Result<f64> {
    mix(base, z, x, &|u| z.cdf(u))
}

/// Marginal law of `X(t)` at a fixed time.
#[derive(Debug, Clone, PartialEq)]
pub enum Marginal {
    /// Degenerate law; only arises at `t = 0` for processes started at a point.
    PointMass(f64),
    Gaussian {
        mean: f64,
        sd: f64,
    },
    Stable {
        law: StableLaw,
        t: f64,
    },
    Convolved {
        base: ConvolutionBase,
        z: Dist1D,
    },
}

impl Marginal {
    pub fn is_degenerate(&self) -> bool {
        matches!(self, Marginal::PointMass(_))
    }

    fn location_scale(&self) -> (f64, f64) {
        match self {
            Marginal::PointMass(v) => (*v, 1.0),
            Marginal::Gaussian { mean, sd } => (*mean, *sd),
            Marginal::Stable { law, t } => (0.0, (law.c() * t).powf(1.0 / law.r())),
            Marginal::Convolved { base, z } => {
                let (m, s) = match base {
                    ConvolutionBase::PointMass(v) => (*v, 0.0),
                    ConvolutionBase::Gaussian { mean, sd } => (*mean, *sd),
                    ConvolutionBase::Samples(vs) => {
                        let n = vs.len().max(1) as f64;
                        let m = vs.iter().sum::<f64>() / n;
                        let v = vs.iter().map(|x| (x - m).powi(2)).sum::<f64>() / n;
                        (m, v.sqrt())
                    }
                };
                let zs = z.variance().map(f64::sqrt).unwrap_or(1.0);
                (m + z_kink(z), (s * s + zs * zs).sqrt().max(1e-3))
            }
        }
    }
}

impl UnivariateLaw for Marginal {
    fn cdf(&self, x: f64) -> Result<f64> {
        match self {
            Marginal::PointMass(v) => Ok(if x >= *v { 1.0 } else { 0.0 }),
            Marginal::Gaussian { mean, sd } => Ok(normal::cdf((x - mean) / sd)),
            Marginal::Stable { law, t } => law.cdf(*t, x),
            Marginal::Convolved { base, z } => convolved_cdf(base, z, x),
        }
    }

    fn density(&self, x: f64) -> Result<f64> {
        match self {
            Marginal::PointMass(_) => Err(Error::Domain(
                "degenerate marginal has no density".to_string(),
            )),
            Marginal::Gaussian { mean, sd } => Ok(normal::pdf((x - mean) / sd) / sd),
            Marginal::Stable { law, t } => law.density(*t, x),
            Marginal::Convolved { base, z } => convolved_density(base, z, x),
        }
    }

    fn quantile(&self, alpha: f64) -> Result<f64> {
        if !(alpha > 0.0 && alpha < 1.0) {
            return Err(invalid("alpha", format!("{alpha} outside (0, 1)")));
        }
        match self {
            Marginal::PointMass(v) => Ok(*v),
            Marginal::Gaussian { mean, sd } => Ok(mean + sd * normal::quantile(alpha)),
            Marginal::Stable { law, t } => law.quantile(*t, alpha),
            Marginal::Convolved { .. } => {
                let (center, scale) = self.location_scale();
                let cdf = |x: f64| self.cdf(x);
                let pdf = |x: f64| self.density(x);
                solve_monotone(&cdf, Some(&pdf), alpha, center, scale, 1e-13)
            }
        }
    }
}

/// Centered Gaussian process with fBm covariance `(s^{2γ} + t^{2γ} - |s - t|^{2γ}) / 2`,
/// optionally shifted by an independent `N(mean, sd²)` variable.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GaussianFamily {
    gamma: f64,
    scale: f64,
    shift_mean: f64,
    shift_sd: f64,
}

impl GaussianFamily {
    pub fn fbm(gamma: f64) -> Result<Self> {
        if !(gamma > 0.0 && gamma < 1.0) {
            return Err(invalid("gamma", format!("{gamma} outside (0, 1)")));
        }
        Ok(GaussianFamily {
            gamma,
            scale: 1.0,
            shift_mean: 0.0,
            shift_sd: 0.0,
        })
    }

    pub fn with_normal_shift(self, mean: f64, sd: f64) -> Result<Self> {
        if !(sd >= 0.0 && sd.is_finite() && mean.is_finite()) {
            return Err(invalid(
                "shift",
                "normal shift needs finite mean and sd >= 0",
            ));
        }
        Ok(GaussianFamily {
            shift_mean: mean,
            shift_sd: sd,
            ..self
        })
    }

    /// Multiply the fBm covariance by `k`; with `gamma = 1/2` this is Brownian motion run at speed `k`.
    pub fn with_variance_scale(self, k: f64) -> Result<Self> {
        if !(k > 0.0 && k.is_finite()) {
            return Err(invalid("scale", format!("{k} must be positive")));
        }
        Ok(GaussianFamily { scale: k, ..self })
    }

    pub fn gamma(&self) -> f64 {
        self.gamma
    }

    /// `E(Y_s Y_t)` of the unshifted fBm.
    pub fn base_covariance(&self, s: f64, t: f64) -> f64 {
        let h2 = 2.0 * self.gamma;
        0.5 * self.scale * (s.powf(h2) + t.powf(h2) - (s - t).abs().powf(h2))
    }

    pub fn covariance(&self, s: f64, t: f64) -> f64 {
        self.base_covariance(s, t) + self.shift_sd * self.shift_sd
    }

    /// Correlation of `(X_s, X_t)`, clamped to `[-1, 1]` (with a warning when rounding overshoots).
    pub fn correlation(&self, s: f64, t: f64) -> f64 {
        let rho = self.covariance(s, t) / (self.covariance(s, s) * self.covariance(t, t)).sqrt();
        if rho.abs() > 1.0 {
            log::warn!("correlation {rho} at (s={s}, t={t}) clamped to [-1, 1]");
        }
        rho.clamp(-1.0, 1.0)
    }
}

impl LimitLaw for GaussianFamily {
    fn marginal(&self, t: f64) -> Result<Marginal> {
        if t < 0.0 {
            return Err(Error::Domain(format!("negative time {t}")));
        }
        let var = self.covariance(t, t);
        Ok(if var == 0.0 {
            Marginal::PointMass(self.shift_mean)
        } else {
            Marginal::Gaussian {
                mean: self.shift_mean,
                sd: var.sqrt(),
            }
        })
    }

    fn joint_cdf(&self, s: f64, x: f64, t: f64, y: f64) -> Result<f64> {
        let ms = self.marginal(s)?;
        let mt = self.marginal(t)?;
        match (&ms, &mt) {
            (Marginal::PointMass(_), _) | (_, Marginal::PointMass(_)) => {
                Ok(ms.cdf(x)? * mt.cdf(y)?)
            }
            (Marginal::Gaussian { sd: ss, .. }, Marginal::Gaussian { sd: st, .. }) => {
                let h = (x - self.shift_mean) / ss;
                let k = (y - self.shift_mean) / st;
                normal::bivariate_cdf(h, k, self.correlation(s, t))
            }
            _ => unreachable!("Gaussian family has Gaussian or degenerate marginals"),
        }
    }
}

impl LimitLaw for StableLaw {
    fn marginal(&self, t: f64) -> Result<Marginal> {
        if t == 0.0 {
            return Ok(Marginal::PointMass(0.0));
        }
        if !(t > 0.0) {
            return Err(Error::Domain(format!("negative time {t}")));
        }
        Ok(Marginal::Stable {
            law: self.clone(),
            t,
        })
    }

    fn joint_cdf(&self, s: f64, x: f64, t: f64, y: f64) -> Result<f64> {
        if s == 0.0 || t == 0.0 {
            let ms = self.marginal(s)?;
            let mt = self.marginal(t)?;
            return Ok(ms.cdf(x)? * mt.cdf(y)?);
        }
        if s < t {
            StableLaw::joint_cdf(self, s, x, t, y)
        } else {
            StableLaw::joint_cdf(self, t, y, s, x)
        }
    }
}

/// Time-indexed reference samples of a base process, for convolution marginals.
#[derive(Debug, Clone, PartialEq)]
pub struct ReferenceSamples {
    times: Vec<f64>,
    samples: Vec<Arc<[f64]>>,
}

impl ReferenceSamples {
    pub fn new(times: Vec<f64>, samples: Vec<Arc<[f64]>>) -> Result<Self> {
        if times.len() != samples.len() {
            return Err(invalid("reference", "one sample per time required"));
        }
        Ok(ReferenceSamples { times, samples })
    }

    pub fn at(&self, t: f64) -> Option<Arc<[f64]>> {
        self.times
            .iter()
            .position(|&s| (s - t).abs() <= 1e-12 * t.abs().max(1.0))
            .map(|i| self.samples[i].clone())
    }

    pub fn sample_size(&self) -> usize {
        self.samples.first().map_or(0, |s| s.len())
    }
}

/// Family of marginal laws `t ↦ F(t, ·)`.
#[derive(Debug, Clone)]
pub enum MarginalLaw {
    Gaussian(GaussianFamily),
    SymStable(StableLaw),
    /// `X(t) = Y(t) + Z` with `Y(t)` described by a Gaussian family or reference samples.
    Convolved {
        base: ConvolvedBase,
        z: Dist1D,
    },
}

#[derive(Debug, Clone)]
pub enum ConvolvedBase {
    Gaussian(GaussianFamily),
    Reference(ReferenceSamples),
}

impl MarginalLaw {
    pub fn at(&self, t: f64) -> Result<Marginal> {
        match self {
            MarginalLaw::Gaussian(g) => g.marginal(t),
            MarginalLaw::SymStable(s) => s.marginal(t),
            MarginalLaw::Convolved { base, z } => {
                let base = match base {
                    ConvolvedBase::Gaussian(g) => match g.marginal(t)? {
                        Marginal::PointMass(v) => ConvolutionBase::PointMass(v),
                        Marginal::Gaussian { mean, sd } => ConvolutionBase::Gaussian { mean, sd },
                        _ => unreachable!("Gaussian family marginal"),
                    },
                    ConvolvedBase::Reference(r) => {
                        ConvolutionBase::Samples(r.at(t).ok_or_else(|| {
                            Error::Domain(format!("no reference sample at t = {t}"))
                        })?)
                    }
                };
                Ok(Marginal::Convolved { base, z: *z })
            }
        }
    }
}

impl LimitLaw for MarginalLaw {
    fn marginal(&self, t: f64) -> Result<Marginal> {
        self.at(t)
    }

    fn joint_cdf(&self, s: f64, x: f64, t: f64, y: f64) -> Result<f64> {
        match self {
            MarginalLaw::Gaussian(g) => g.joint_cdf(s, x, t, y),
            MarginalLaw::SymStable(l) => LimitLaw::joint_cdf(l, s, x, t, y),
            MarginalLaw::Convolved { .. } => Err(Error::Unsupported(
                "joint law of a convolved process is not available; use marginal_variance"
                    .to_string(),
            )),
        }
    }
}
