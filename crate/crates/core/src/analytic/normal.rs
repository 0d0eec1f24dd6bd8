//! Standard normal kernels and the bivariate normal CDF.

use std::f64::consts::{FRAC_1_SQRT_2, PI};

use super::quad::Quadrature;
use crate::error::{invalid, Result};

const INV_SQRT_2PI: f64 = 0.398_942_280_401_432_7;

pub fn pdf(x: f64) -> f64 {
    INV_SQRT_2PI * (-0.5 * x * x).exp()
}

pub fn cdf(x: f64) -> f64 {
    0.5 * libm::erfc(-x * FRAC_1_SQRT_2)
}

/// Inverse of [`cdf`]: Acklam's rational approximation polished by Halley steps.
pub fn quantile(p: f64) -> f64 {
    if p <= 0.0 {
        return f64::NEG_INFINITY;
    }
    if p >= 1.0 {
        return f64::INFINITY;
    }
    let mut x = acklam(p);
    for _ in 0..2 {
        // Upper tail residual through the complement keeps relative accuracy.
        let e = if x > 0.0 {
            (1.0 - p) - 0.5 * libm::erfc(x * FRAC_1_SQRT_2)
        } else {
            cdf(x) - p
        };
        let u = e * SQRT_2PI * (0.5 * x * x).exp();
        let next = x - u / (1.0 + 0.5 * x * u);
        if !next.is_finite() {
            break;
        }
        x = next;
    }
    x
}

const SQRT_2PI: f64 = 2.506_628_274_631_000_5;

fn acklam(p: f64) -> f64 {
    const A: [f64; 6] = [
        -3.969_683_028_665_376e1,
        2.209_460_984_245_205e2,
        -2.759_285_104_469_687e2,
        1.383_577_518_672_69e2,
        -3.066_479_806_614_716e1,
        2.506_628_277_459_239,
    ];
    const B: [f64; 5] = [
        -5.447_609_879_822_406e1,
        1.615_858_368_580_409e2,
        -1.556_989_798_598_866e2,
        6.680_131_188_771_972e1,
        -1.328_068_155_288_572e1,
    ];
    const C: [f64; 6] = [
        -7.784_894_002_430_293e-3,
        -3.223_964_580_411_365e-1,
        -2.400_758_277_161_838,
        -2.549_732_539_343_734,
        4.374_664_141_464_968,
        2.938_163_982_698_783,
    ];
    const D: [f64; 4] = [
        7.784_695_709_041_462e-3,
        3.224_671_290_700_398e-1,
        2.445_134_137_142_996,
        3.754_408_661_907_416,
    ];
    const P_LOW: f64 = 0.02425;
    let tail = |q: f64| {
        (((((C[0] * q + C[1]) * q + C[2]) * q + C[3]) * q + C[4]) * q + C[5])
            / ((((D[0] * q + D[1]) * q + D[2]) * q + D[3]) * q + 1.0)
    };
    if p < P_LOW {
        tail((-2.0 * p.ln()).sqrt())
    } else if p <= 1.0 - P_LOW {
        let q = p - 0.5;
        let r = q * q;
        (((((A[0] * r + A[1]) * r + A[2]) * r + A[3]) * r + A[4]) * r + A[5]) * q
            / (((((B[0] * r + B[1]) * r + B[2]) * r + B[3]) * r + B[4]) * r + 1.0)
    } else {
        -tail((-2.0 * (1.0 - p).ln()).sqrt())
    }
}

/// `P(X <= h, Y <= k)` for standard normals with correlation `rho`.
///
/// Evaluated as `Φ(h)Φ(k) + (2π)^{-1} ∫_0^{asin ρ} exp(-(h² + k² - 2hk sin θ) / (2 cos² θ)) dθ`.
pub fn bivariate_cdf(h: f64, k: f64, rho: f64) -> Result<f64> {
    if !(-1.0..=1.0).contains(&rho) {
        return Err(invalid("rho", format!("{rho} outside [-1, 1]")));
    }
    if h == f64::NEG_INFINITY || k == f64::NEG_INFINITY {
        return Ok(0.0);
    }
    if h == f64::INFINITY {
        return Ok(cdf(k));
    }
    if k == f64::INFINITY {
        return Ok(cdf(h));
    }
    if rho >= 1.0 - 1e-15 {
        return Ok(cdf(h.min(k)));
    }
    if rho <= -1.0 + 1e-15 {
        return Ok((cdf(h) + cdf(k) - 1.0).max(0.0));
    }
    let theta_max = rho.asin();
    let hk = h * k;
    let ss = h * h + k * k;
    let integrand = |theta: f64| {
        let (sin, cos) = theta.sin_cos();
        let c2 = cos * cos;
        if c2 <= 0.0 {
            return 0.0;
        }
        (-(ss - 2.0 * hk * sin) / (2.0 * c2)).exp()
    };
    let est = Quadrature::new(1e-15, 1e-13).integrate(integrand, 0.0, theta_max)?;
    let p = cdf(h) * cdf(k) + est.value / (2.0 * PI);
    Ok(p.clamp(0.0, 1.0))
}
