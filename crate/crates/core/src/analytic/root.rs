//! Bracketing root finder for monotone functions.

use crate::error::{Error, Result};

/// Solve `cdf(x) = target` for a nondecreasing `cdf`.
///
/// Brackets by doubling outward from `[-scale, scale]` (shifted to `center`), then
/// alternates Newton steps (when a `slope` is supplied and the step stays inside
/// the bracket) with bisection. Returns once `|cdf(x) - target| <= tol`, or the
/// upper end of a bracket that has shrunk to adjacent floats while the values
/// across it differ only by rounding noise. A genuine jump over `target` is an error.
pub fn solve_monotone(
    cdf: &dyn Fn(f64) -> Result<f64>,
    slope: Option<&dyn Fn(f64) -> Result<f64>>,
    target: f64,
    center: f64,
    scale: f64,
    tol: f64,
) -> Result<f64> {
    let scale = if scale > 0.0 && scale.is_finite() {
        scale
    } else {
        1.0
    };
    let mut lo = center - scale;
    let mut hi = center + scale;
    let mut f_lo = cdf(lo)? - target;
    let mut f_hi = cdf(hi)? - target;
    let mut expansions = 0;
    while f_lo > 0.0 {
        hi = lo;
        f_hi = f_lo;
        lo = center - (center - lo) * 2.0 - scale;
        f_lo = cdf(lo)? - target;
        expansions += 1;
        if expansions > 200 {
            return Err(convergence(target, lo, hi, f_lo, f_hi));
        }
    }
    while f_hi < 0.0 {
        lo = hi;
        f_lo = f_hi;
        hi = center + (hi - center) * 2.0 + scale;
        f_hi = cdf(hi)? - target;
        expansions += 1;
        if expansions > 200 {
            return Err(convergence(target, lo, hi, f_lo, f_hi));
        }
    }
    if f_lo.abs() <= tol {
        return Ok(lo);
    }
    if f_hi.abs() <= tol {
        return Ok(hi);
    }

    let mut x = 0.5 * (lo + hi);
    for _ in 0..400 {
        let fx = cdf(x)? - target;
        if fx.abs() <= tol {
            return Ok(x);
        }
        if fx < 0.0 {
            lo = x;
            f_lo = fx;
        } else {
            hi = x;
            f_hi = fx;
        }
        if hi - lo <= 2.0 * f64::EPSILON * x.abs().max(f64::MIN_POSITIVE) {
            if f_hi - f_lo <= (1e3 * tol).max(1e-10) {
                return Ok(hi);
            }
            break;
        }
        let mut next = 0.5 * (lo + hi);
        if let Some(slope) = slope {
            let d = slope(x)?;
            if d > 0.0 {
                let newton = x - fx / d;
                if newton > lo && newton < hi {
                    next = newton;
                }
            }
        } else {
            // Secant step when it lands well inside the bracket.
            let secant = lo - f_lo * (hi - lo) / (f_hi - f_lo);
            if secant > lo && secant < hi && (secant - x).abs() < 0.5 * (hi - lo) {
                next = secant;
            }
        }
        x = next;
    }
    Err(convergence(target, lo, hi, f_lo, f_hi))
}

fn convergence(target: f64, lo: f64, hi: f64, f_lo: f64, f_hi: f64) -> Error {
    Error::Convergence {
        target,
        lo,
        hi,
        f_lo: f_lo + target,
        f_hi: f_hi + target,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn solves_logistic() {
        let cdf = |x: f64| Ok(1.0 / (1.0 + (-x).exp()));
        let pdf = |x: f64| {
            let p = 1.0 / (1.0 + (-x).exp());
            Ok(p * (1.0 - p))
        };
        for &a in &[0.01f64, 0.3, 0.5, 0.9, 0.999] {
            let exact = (a / (1.0 - a)).ln();
            let slack = 2e-14 / pdf(exact).unwrap();
            let x = solve_monotone(&cdf, Some(&pdf), a, 0.0, 1.0, 1e-14).unwrap();
            assert!((cdf(x).unwrap() - a).abs() <= 2e-14);
            assert!((x - exact).abs() < slack, "{a}: {x} vs {exact}");
            let y = solve_monotone(&cdf, None, a, 3.0, 0.1, 1e-14).unwrap();
            assert!((y - exact).abs() < slack);
        }
    }

    #[test]
    fn reports_step_functions() {
        let cdf = |x: f64| Ok(if x < 1.0 { 0.0 } else { 1.0 });
        let err = solve_monotone(&cdf, None, 0.5, 0.0, 1.0, 1e-12).unwrap_err();
        assert!(matches!(err, Error::Convergence { .. }));
    }

    #[test]
    fn tolerates_rounding_noise_at_the_root() {
        let cdf = |x: f64| {
            let wobble = if x.to_bits().is_multiple_of(2) {
                3e-13
            } else {
                -3e-13
            };
            Ok(0.5 + 0.25 * x + wobble)
        };
        let x = solve_monotone(&cdf, None, 0.5, 1.0, 1.0, 1e-14).unwrap();
        assert!(x.abs() < 1e-11, "{x}");
    }
}
