//! Symmetric r-stable marginals with characteristic function `exp{-c t |u|^r}`.
//!
//! At unit time the density and distribution function are the Fourier
//! integrals
//!
//! ```text
//! f(1, x) = (1/π) ∫_0^∞ exp(-c u^r) cos(x u) du
//! F(1, x) = 1/2 + (1/π) ∫_0^∞ exp(-c u^r) sin(x u) / u du
//! ```
//!
//! evaluated with the substitution `v = |x| u` and split at the zeros of the
//! trigonometric factor. The integrand is truncated where `exp(-c u^r)`
//! drops below `e^{-40}`. Other times follow from `X(t) = t^{1/r} X(1)` in law.

use std::collections::HashMap;
use std::f64::consts::{FRAC_PI_2, PI};
use std::fmt;
use std::sync::{Arc, RwLock};

use super::quad::Quadrature;
use super::root::solve_monotone;
use crate::error::{invalid, Error, Result};

/// Log of the truncation threshold on `exp(-c u^r)`.
const TAIL_LOG: f64 = 40.0;
/// Below this many half-periods the integrand is treated as non-oscillatory.
const SMOOTH_HALF_PERIODS: f64 = 4.0;

/// Tolerance on `|F(τ̂) - α|` for quantiles.
pub const QUANTILE_TOL: f64 = 1e-14;

/// Law of a symmetric r-stable process with stationary independent increments.
#[derive(Clone)]
pub struct StableLaw {
    r: f64,
    c: f64,
    unit_quantiles: Arc<RwLock<HashMap<u64, f64>>>,
}

impl fmt::Debug for StableLaw {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("StableLaw")
            .field("r", &self.r)
            .field("c", &self.c)
            .finish()
    }
}

impl PartialEq for StableLaw {
    fn eq(&self, other: &Self) -> bool {
        self.r == other.r && self.c == other.c
    }
}

impl StableLaw {
    pub fn new(r: f64, c: f64) -> Result<Self> {
        if !(r > 0.0 && r <= 2.0) {
            return Err(invalid("r", format!("{r} outside (0, 2]")));
        }
        if !(c > 0.0 && c.is_finite()) {
            return Err(invalid("c", format!("{c} must be positive")));
        }
        Ok(StableLaw {
            r,
            c,
            unit_quantiles: Arc::new(RwLock::new(HashMap::new())),
        })
    }

    /// Standard Brownian motion (`r = 2`, `c = 1/2`).
    pub fn brownian() -> Self {
        StableLaw::new(2.0, 0.5).expect("valid parameters")
    }

    /// Standard Cauchy process (`r = 1`, `c = 1`).
    pub fn cauchy() -> Self {
        StableLaw::new(1.0, 1.0).expect("valid parameters")
    }

    pub fn r(&self) -> f64 {
        self.r
    }

    pub fn c(&self) -> f64 {
        self.c
    }

    /// Scaling exponent `p = 1/r` in `X(ct) = c^p X(t)`.
    pub fn scaling_exponent(&self) -> f64 {
        1.0 / self.r
    }

    /// The same law observed at time `t`, expressed as a unit-time law with scale `c t`.
    pub fn at_unit_time(&self, t: f64) -> Result<StableLaw> {
        check_time(t)?;
        StableLaw::new(self.r, self.c * t)
    }

    fn truncation(&self) -> f64 {
        (TAIL_LOG / self.c).powf(1.0 / self.r)
    }

    fn quad(&self) -> Quadrature {
        let mut q = Quadrature::new(1e-16, 1e-14);
        if self.r < 0.5 {
            q.abs_tol = 1e-13;
            q.rel_tol = 1e-10;
        }
        q
    }

    /// `f(1, x)`.
    pub fn unit_density(&self, x: f64) -> Result<f64> {
        let (r, c) = (self.r, self.c);
        let u_max = self.truncation();
        let ax = x.abs();
        let q = self.quad();
        if ax * u_max <= SMOOTH_HALF_PERIODS * PI {
            let est = q.integrate(|u| (-c * u.powf(r)).exp() * (ax * u).cos(), 0.0, u_max)?;
            return Ok(est.value / PI);
        }
        // v = |x| u; zeros of cos v at (k + 1/2) π.
        let v_max = ax * u_max;
        let amp = |v: f64| (-c * (v / ax).powf(r)).exp();
        let mut total = q.integrate(|v| amp(v) * v.cos(), 0.0, FRAC_PI_2)?.value;
        let mut lo = FRAC_PI_2;
        while lo < v_max {
            let hi = lo + PI;
            total += q.integrate(|v| amp(v) * v.cos(), lo, hi)?.value;
            lo = hi;
        }
        Ok(total / (PI * ax))
    }

    /// `F(1, x)`.
    pub fn unit_cdf(&self, x: f64) -> Result<f64> {
        if x == 0.0 {
            return Ok(0.5);
        }
        if x.is_infinite() {
            return Ok(if x > 0.0 { 1.0 } else { 0.0 });
        }
        let (r, c) = (self.r, self.c);
        let u_max = self.truncation();
        let ax = x.abs();
        let q = self.quad();
        let half_mass = if ax * u_max <= SMOOTH_HALF_PERIODS * PI {
            q.integrate(
                |u| {
                    let s = if u == 0.0 { ax } else { (ax * u).sin() / u };
                    (-c * u.powf(r)).exp() * s
                },
                0.0,
                u_max,
            )?
            .value
        } else {
            // v = |x| u; zeros of sin v at k π.
            let v_max = ax * u_max;
            let integrand = |v: f64| {
                let s = if v == 0.0 { 1.0 } else { v.sin() / v };
                (-c * (v / ax).powf(r)).exp() * s
            };
            let mut total = 0.0;
            let mut lo = 0.0;
            while lo < v_max {
                let hi = lo + PI;
                total += q.integrate(integrand, lo, hi)?.value;
                lo = hi;
            }
            total
        };
        let tail = half_mass / PI;
        let value = if x > 0.0 { 0.5 + tail } else { 0.5 - tail };
        Ok(value.clamp(0.0, 1.0))
    }

    /// `f(t, x) = t^{-1/r} f(1, x t^{-1/r})`.
    pub fn density(&self, t: f64, x: f64) -> Result<f64> {
        check_time(t)?;
        let s = t.powf(1.0 / self.r);
        Ok(self.unit_density(x / s)? / s)
    }

    /// `F(t, x) = F(1, x t^{-1/r})`.
    pub fn cdf(&self, t: f64, x: f64) -> Result<f64> {
        check_time(t)?;
        let s = t.powf(1.0 / self.r);
        self.unit_cdf(x / s)
    }

    /// `τ_α(1)`, memoized per level.
    pub fn unit_quantile(&self, alpha: f64) -> Result<f64> {
        check_level(alpha)?;
        if alpha == 0.5 {
            return Ok(0.0);
        }
        let key = alpha.to_bits();
        if let Some(&q) = self
            .unit_quantiles
            .read()
            .expect("quantile memo poisoned")
            .get(&key)
        {
            return Ok(q);
        }
        // Solve in the upper half and reflect, so τ_α = -τ_{1-α} holds exactly.
        let upper = alpha.max(1.0 - alpha);
        let scale = self.c.powf(1.0 / self.r);
        let cdf = |x: f64| self.unit_cdf(x);
        let pdf = |x: f64| self.unit_density(x);
        let q_upper = solve_monotone(&cdf, Some(&pdf), upper, 0.0, scale, QUANTILE_TOL)
            .or_else(|_| solve_monotone(&cdf, Some(&pdf), upper, 0.0, scale, 1e-12))?;
        let q = if alpha > 0.5 { q_upper } else { -q_upper };
        self.unit_quantiles
            .write()
            .expect("quantile memo poisoned")
            .insert(key, q);
        Ok(q)
    }

    /// `τ_α(t) = t^{1/r} τ_α(1)`; zero at `t = 0`.
    pub fn quantile(&self, t: f64, alpha: f64) -> Result<f64> {
        if t == 0.0 {
            check_level(alpha)?;
            return Ok(0.0);
        }
        check_time(t)?;
        Ok(t.powf(1.0 / self.r) * self.unit_quantile(alpha)?)
    }

    /// `P(X_s <= a, X_t <= b)` via `∫_{-∞}^a f(s, u) F(t - s, b - u) du` for `0 < s < t`.
    pub fn joint_cdf(&self, s: f64, a: f64, t: f64, b: f64) -> Result<f64> {
        if !(s > 0.0) {
            return Err(Error::Domain(format!(
                "joint probability needs s > 0, got {s}"
            )));
        }
        if !(t > s) {
            return Err(Error::Domain(format!(
                "joint probability needs s < t, got s = {s}, t = {t}"
            )));
        }
        if b == f64::INFINITY {
            return self.cdf(s, a);
        }
        if a == f64::INFINITY {
            return self.cdf(t, b);
        }
        if a == f64::NEG_INFINITY || b == f64::NEG_INFINITY {
            return Ok(0.0);
        }
        let gap = t - s;
        let scale = (self.c * s).powf(1.0 / self.r);
        let q = Quadrature::new(1e-11, 1e-10);
        let mut failure = None;
        let est = q.integrate_lower_tail(
            |u| match (self.density(s, u), self.cdf(gap, b - u)) {
                (Ok(f), Ok(g)) => f * g,
                (Err(e), _) | (_, Err(e)) => {
                    failure.get_or_insert(e);
                    0.0
                }
            },
            a,
            scale,
        )?;
        if let Some(e) = failure {
            return Err(e);
        }
        Ok(est.value.clamp(0.0, 1.0))
    }
}

fn check_time(t: f64) -> Result<()> {
    if t > 0.0 && t.is_finite() {
        Ok(())
    } else {
        Err(Error::Domain(format!(
            "stable marginal needs t > 0 (the law degenerates at t = 0), got {t}"
        )))
    }
}

fn check_level(alpha: f64) -> Result<()> {
    if alpha > 0.0 && alpha < 1.0 {
        Ok(())
    } else {
        Err(invalid("alpha", format!("{alpha} outside (0, 1)")))
    }
}

/// `τ_α(1)`, `f(1, τ_α(1))` for a batch of levels.
pub fn unit_table(law: &StableLaw, levels: &[f64]) -> Result<Vec<(f64, f64)>> {
    levels
        .iter()
        .map(|&a| {
            let q = law.unit_quantile(a)?;
            Ok((q, law.unit_density(q)?))
        })
        .collect()
}
