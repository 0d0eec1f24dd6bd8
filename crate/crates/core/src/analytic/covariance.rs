//! Covariances of the Gaussian limits of the empirical and quantile processes.

use super::law::{GaussianFamily, LimitLaw, UnivariateLaw};
use super::normal;
use super::stable::StableLaw;
use crate::error::{invalid, Result};

fn check_level(name: &'static str, a: f64) -> Result<()> {
    if a > 0.0 && a < 1.0 {
        Ok(())
    } else {
        Err(invalid(name, format!("{a} outside (0, 1)")))
    }
}

fn check_time(name: &'static str, t: f64) -> Result<()> {
    if t >= 0.0 && t.is_finite() {
        Ok(())
    } else {
        Err(invalid(name, format!("time {t} must be >= 0")))
    }
}

/// `E(W(s, β) W(t, α))` for a general law:
/// `[P(X_s <= τ_β(s), X_t <= τ_α(t)) - αβ] / [f(s, τ_β(s)) f(t, τ_α(t))]`.
///
/// Zero whenever either marginal is degenerate (the quantile process vanishes there).
pub fn limit_cov_quantile(
    law: &dyn LimitLaw,
    s: f64,
    beta: f64,
    t: f64,
    alpha: f64,
) -> Result<f64> {
    check_time("s", s)?;
    check_time("t", t)?;
    check_level("beta", beta)?;
    check_level("alpha", alpha)?;
    let ms = law.marginal(s)?;
    let mt = law.marginal(t)?;
    if ms.is_degenerate() || mt.is_degenerate() {
        return Ok(0.0);
    }
    let qs = ms.quantile(beta)?;
    let qt = mt.quantile(alpha)?;
    let joint = if s == t {
        beta.min(alpha)
    } else {
        law.joint_cdf(s, qs, t, qt)?
    };
    Ok((joint - alpha * beta) / (ms.density(qs)? * mt.density(qt)?))
}

/// Stable-process quantile limit covariance in its rescaled form
/// `s^{1/r} t^{1/r} [P(X_s <= τ_β(s), X_t <= τ_α(t)) - αβ] / [f(1, τ_β(1)) f(1, τ_α(1))]`.
pub fn limit_cov_quantile_stable(
    law: &StableLaw,
    s: f64,
    beta: f64,
    t: f64,
    alpha: f64,
) -> Result<f64> {
    check_time("s", s)?;
    check_time("t", t)?;
    check_level("beta", beta)?;
    check_level("alpha", alpha)?;
    if s == 0.0 || t == 0.0 {
        return Ok(0.0);
    }
    let p = law.scaling_exponent();
    let qb = law.unit_quantile(beta)?;
    let qa = law.unit_quantile(alpha)?;
    let joint = if s == t {
        beta.min(alpha)
    } else {
        LimitLaw::joint_cdf(law, s, s.powf(p) * qb, t, t.powf(p) * qa)?
    };
    let denom = law.unit_density(qb)? * law.unit_density(qa)?;
    Ok(s.powf(p) * t.powf(p) * (joint - alpha * beta) / denom)
}

/// fBm quantile limit covariance
/// `s^γ t^γ [Φ₂(z_β, z_α; ρ) - αβ] / [φ(z_β) φ(z_α)]`, `ρ = E(X_s X_t) / (s^γ t^γ)`.
pub fn limit_cov_quantile_fbm(gamma: f64, s: f64, beta: f64, t: f64, alpha: f64) -> Result<f64> {
    let family = GaussianFamily::fbm(gamma)?;
    check_time("s", s)?;
    check_time("t", t)?;
    check_level("beta", beta)?;
    check_level("alpha", alpha)?;
    if s == 0.0 || t == 0.0 {
        return Ok(0.0);
    }
    let zb = normal::quantile(beta);
    let za = normal::quantile(alpha);
    let joint = if s == t {
        beta.min(alpha)
    } else {
        normal::bivariate_cdf(zb, za, family.correlation(s, t))?
    };
    Ok(
        s.powf(gamma) * t.powf(gamma) * (joint - alpha * beta)
            / (normal::pdf(zb) * normal::pdf(za)),
    )
}

/// `E(W(s, ½) W(t, ½)) = s^γ t^γ arcsin(E(X_s X_t) / (s^γ t^γ))` for fBm.
pub fn median_cov_fbm(gamma: f64, s: f64, t: f64) -> Result<f64> {
    let family = GaussianFamily::fbm(gamma)?;
    if s == 0.0 || t == 0.0 {
        return Ok(0.0);
    }
    Ok(s.powf(gamma) * t.powf(gamma) * family.correlation(s, t).asin())
}

fn joint_or_marginal(
    law: &dyn LimitLaw,
    s: f64,
    x: f64,
    t: f64,
    y: f64,
) -> Result<(f64, f64, f64)> {
    let fs = law.marginal(s)?.cdf(x)?;
    let ft = law.marginal(t)?.cdf(y)?;
    let joint = if s == t {
        law.marginal(t)?.cdf(x.min(y))?
    } else {
        law.joint_cdf(s, x, t, y)?
    };
    Ok((fs, ft, joint))
}

/// `E(G(s, x) G(t, y)) = P(X_s <= x, X_t <= y) - F(s, x) F(t, y)`.
pub fn limit_cov_empirical_g(law: &dyn LimitLaw, s: f64, x: f64, t: f64, y: f64) -> Result<f64> {
    let (fs, ft, joint) = joint_or_marginal(law, s, x, t, y)?;
    Ok(joint - fs * ft)
}

/// `L²` pseudo-metric of the indicator process:
/// `d²((s,x),(t,y)) = F(s,x) + F(t,y) - 2P(X_s <= x, X_t <= y) - (F(s,x) - F(t,y))²`.
pub fn dist_d(law: &dyn LimitLaw, s: f64, x: f64, t: f64, y: f64) -> Result<f64> {
    let (fs, ft, joint) = joint_or_marginal(law, s, x, t, y)?;
    let d2 = fs + ft - 2.0 * joint - (fs - ft).powi(2);
    Ok(d2.max(0.0).sqrt())
}

/// Quantile-limit covariance matrix over `(t, α)` points, filled symmetrically.
pub fn quantile_cov_matrix(law: &dyn LimitLaw, points: &[(f64, f64)]) -> Result<Vec<Vec<f64>>> {
    let k = points.len();
    let mut m = vec![vec![0.0; k]; k];
    for i in 0..k {
        for j in i..k {
            let (s, b) = points[i];
            let (t, a) = points[j];
            let v = limit_cov_quantile(law, s, b, t, a)?;
            m[i][j] = v;
            m[j][i] = v;
        }
    }
    Ok(m)
}
