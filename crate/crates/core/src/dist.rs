//! One-dimensional laws used for compound-Poisson jumps and additive shifts.

use std::f64::consts::PI;

use rand::Rng;
use rand_distr::{Distribution, Exp1, StandardNormal};
use serde::{Deserialize, Serialize};

use crate::analytic::normal;
use crate::error::{invalid, Result};

/// A named 1-D sampler with parameters.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "dist", rename_all = "snake_case", deny_unknown_fields)]
pub enum Dist1D {
    Constant { value: f64 },
    Normal { mean: f64, sd: f64 },
    Uniform { low: f64, high: f64 },
    Laplace { loc: f64, scale: f64 },
    Exponential { rate: f64 },
    Cauchy { loc: f64, scale: f64 },
}

impl Dist1D {
    pub fn standard_normal() -> Self {
        Dist1D::Normal { mean: 0.0, sd: 1.0 }
    }

    pub fn validate(&self) -> Result<()> {
        let ok = match *self {
            Dist1D::Constant { value } => value.is_finite(),
            Dist1D::Normal { mean, sd } => mean.is_finite() && sd > 0.0 && sd.is_finite(),
            Dist1D::Uniform { low, high } => low.is_finite() && high.is_finite() && low < high,
            Dist1D::Laplace { loc, scale } | Dist1D::Cauchy { loc, scale } => {
                loc.is_finite() && scale > 0.0 && scale.is_finite()
            }
            Dist1D::Exponential { rate } => rate > 0.0 && rate.is_finite(),
        };
        if ok {
            Ok(())
        } else {
            Err(invalid(
                "distribution",
                format!("bad parameters in {self:?}"),
            ))
        }
    }

    pub fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> f64 {
        match *self {
            Dist1D::Constant { value } => value,
            Dist1D::Normal { mean, sd } => {
                let z: f64 = StandardNormal.sample(rng);
                mean + sd * z
            }
            Dist1D::Uniform { low, high } => low + (high - low) * rng.random::<f64>(),
            Dist1D::Laplace { loc, scale } => {
                let e: f64 = Exp1.sample(rng);
                if rng.random::<bool>() {
                    loc + scale * e
                } else {
                    loc - scale * e
                }
            }
            Dist1D::Exponential { rate } => {
                let e: f64 = Exp1.sample(rng);
                e / rate
            }
            Dist1D::Cauchy { loc, scale } => {
                let u: f64 = rng.random();
                loc + scale * (PI * (u - 0.5)).tan()
            }
        }
    }

    /// Lebesgue density, `None` for point masses.
    pub fn density(&self, x: f64) -> Option<f64> {
        Some(match *self {
            Dist1D::Constant { .. } => return None,
            Dist1D::Normal { mean, sd } => normal::pdf((x - mean) / sd) / sd,
            Dist1D::Uniform { low, high } => {
                if (low..=high).contains(&x) {
                    1.0 / (high - low)
                } else {
                    0.0
                }
            }
            Dist1D::Laplace { loc, scale } => (-(x - loc).abs() / scale).exp() / (2.0 * scale),
            Dist1D::Exponential { rate } => {
                if x < 0.0 {
                    0.0
                } else {
                    rate * (-rate * x).exp()
                }
            }
            Dist1D::Cauchy { loc, scale } => {
                let z = (x - loc) / scale;
                1.0 / (PI * scale * (1.0 + z * z))
            }
        })
    }

    pub fn cdf(&self, x: f64) -> f64 {
        match *self {
            Dist1D::Constant { value } => {
                if x >= value {
                    1.0
                } else {
                    0.0
                }
            }
            Dist1D::Normal { mean, sd } => normal::cdf((x - mean) / sd),
            Dist1D::Uniform { low, high } => ((x - low) / (high - low)).clamp(0.0, 1.0),
            Dist1D::Laplace { loc, scale } => {
                let z = (x - loc) / scale;
                if z < 0.0 {
                    0.5 * z.exp()
                } else {
                    1.0 - 0.5 * (-z).exp()
                }
            }
            Dist1D::Exponential { rate } => {
                if x < 0.0 {
                    0.0
                } else {
                    -(-rate * x).exp_m1()
                }
            }
            Dist1D::Cauchy { loc, scale } => 0.5 + ((x - loc) / scale).atan() / PI,
        }
    }

    pub fn has_atom_at_zero(&self) -> bool {
        matches!(*self, Dist1D::Constant { value } if value == 0.0)
    }

    /// Strictly positive, bounded, continuous density on all of ℝ.
    pub fn has_regular_density(&self) -> bool {
        matches!(
            self,
            Dist1D::Normal { .. } | Dist1D::Laplace { .. } | Dist1D::Cauchy { .. }
        )
    }

    /// Variance, when finite.
    pub fn variance(&self) -> Option<f64> {
        match *self {
            Dist1D::Constant { .. } => Some(0.0),
            Dist1D::Normal { sd, .. } => Some(sd * sd),
            Dist1D::Uniform { low, high } => Some((high - low).powi(2) / 12.0),
            Dist1D::Laplace { scale, .. } => Some(2.0 * scale * scale),
            Dist1D::Exponential { rate } => Some(1.0 / (rate * rate)),
            Dist1D::Cauchy { .. } => None,
        }
    }
}
