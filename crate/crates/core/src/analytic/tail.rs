//! Uniform tail bounds for the centered empirical quantile process of a stable input.
//!
//! With `m = ⌊n(1 - α*)⌋` and `λ_r^r = 2^r e c_r / (1 - α*)`,
//!
//! ```text
//! P(√n sup (τⁿ - τ) > u) <= (λ_r √n / u)^{r m}     for u/√n >= C = 2λ_r ∨ 2τ_{α*}(1)
//! n₀ = inf{n >= 1 : 2^{-(r m - 2)} (λ_r √n)² <= 1}
//! ```
//!
//! `c_r` bounds the sup-norm tail `P(‖X‖ > v) <= c_r v^{-r}`; only its existence
//! is known, so it is a caller-supplied constant.

use super::stable::StableLaw;
use crate::error::{invalid, Result};

/// Default for the sup-norm tail constant `c_r`.
pub const DEFAULT_TAIL_CONSTANT: f64 = 1.0;

const N0_SEARCH_LIMIT: u64 = 1 << 24;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TailBound {
    pub r: f64,
    pub alpha_star: f64,
    pub n: u64,
    pub lambda_r: f64,
    pub n0: u64,
    /// `C = 2λ_r ∨ 2τ_{α*}(1)`; the bound applies for `u/√n >= C`.
    pub threshold: f64,
}

impl TailBound {
    fn exponent(&self) -> f64 {
        self.r * ((self.n as f64) * (1.0 - self.alpha_star)).floor()
    }

    /// `(λ_r √n / u)^{r⌊n(1-α*)⌋}`, capped at 1.
    pub fn bound(&self, u: f64) -> f64 {
        if !(u > 0.0) {
            return 1.0;
        }
        let ratio = self.lambda_r * (self.n as f64).sqrt() / u;
        ratio.powf(self.exponent()).min(1.0)
    }

    /// Whether `u` lies in the range `u/√n >= C` where [`TailBound::bound`] is proven.
    pub fn applies(&self, u: f64) -> bool {
        u / (self.n as f64).sqrt() >= self.threshold
    }
}

/// `λ_r = (2^r e c_r / (1 - α*))^{1/r}`.
pub fn lambda_r(r: f64, alpha_star: f64, c_r: f64) -> f64 {
    (2f64.powf(r) * std::f64::consts::E * c_r / (1.0 - alpha_star)).powf(1.0 / r)
}

/// Smallest `n` with `2^{-(r⌊n(1-α*)⌋ - 2)} (λ_r √n)² <= 1`, by linear scan.
///
/// The left side is not monotone in `n` (it creeps up between jumps of the floor),
/// so bisection would not find the infimum.
pub fn n0(r: f64, alpha_star: f64, lambda: f64) -> Option<u64> {
    let log_l2 = 2.0 * lambda.log2();
    (1..=N0_SEARCH_LIMIT).find(|&n| {
        let m = ((n as f64) * (1.0 - alpha_star)).floor();
        -(r * m - 2.0) + log_l2 + (n as f64).log2() <= 0.0
    })
}

/// Constants of the uniform tail bound for a stable law at sample size `n`.
pub fn tail_bound_constants(
    law: &StableLaw,
    alpha_star: f64,
    c_r: f64,
    n: u64,
) -> Result<TailBound> {
    if !(alpha_star > 0.5 && alpha_star < 1.0) {
        return Err(invalid(
            "alpha_star",
            format!("{alpha_star} outside (1/2, 1)"),
        ));
    }
    if !(c_r > 0.0 && c_r.is_finite()) {
        return Err(invalid("c_r", format!("{c_r} must be positive")));
    }
    if n == 0 {
        return Err(invalid("n", "sample size must be positive"));
    }
    let r = law.r();
    let lambda = lambda_r(r, alpha_star, c_r);
    let n0 = n0(r, alpha_star, lambda)
        .ok_or_else(|| invalid("alpha_star", "n0 not found below search limit"))?;
    let threshold = (2.0 * lambda).max(2.0 * law.unit_quantile(alpha_star)?);
    Ok(TailBound {
        r,
        alpha_star,
        n,
        lambda_r: lambda,
        n0,
        threshold,
    })
}
