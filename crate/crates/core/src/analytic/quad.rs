//! Adaptive Gauss–Kronrod (7/15) quadrature and Gauss–Hermite rules.

use std::cmp::Ordering;
use std::collections::BinaryHeap;

use crate::error::{Error, Result};

const XGK: [f64; 8] = [
    0.991_455_371_120_812_6,
    0.949_107_912_342_758_5,
    0.864_864_423_359_769_1,
    0.741_531_185_599_394_4,
    0.586_087_235_467_691_1,
    0.405_845_151_377_397_2,
    0.207_784_955_007_898_5,
    0.0,
];
const WGK: [f64; 8] = [
    0.022_935_322_010_529_22,
    0.063_092_092_629_978_55,
    0.104_790_010_322_250_2,
    0.140_653_259_715_525_9,
    0.169_004_726_639_267_9,
    0.190_350_578_064_785_4,
    0.204_432_940_075_298_9,
    0.209_482_141_084_727_8,
];
const WG: [f64; 4] = [
    0.129_484_966_168_869_7,
    0.279_705_391_489_276_7,
    0.381_830_050_505_118_9,
    0.417_959_183_673_469_4,
];

#[derive(Debug, Clone, Copy)]
struct Segment {
    a: f64,
    b: f64,
    value: f64,
    error: f64,
    roundoff: f64,
}

impl PartialEq for Segment {
    fn eq(&self, other: &Self) -> bool {
        self.error == other.error
    }
}
impl Eq for Segment {}
impl PartialOrd for Segment {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}
impl Ord for Segment {
    fn cmp(&self, other: &Self) -> Ordering {
        self.error.total_cmp(&other.error)
    }
}

fn gk15<F: FnMut(f64) -> f64>(f: &mut F, a: f64, b: f64) -> Segment {
    let center = 0.5 * (a + b);
    let half = 0.5 * (b - a);
    let fc = f(center);
    let mut kronrod = WGK[7] * fc;
    let mut gauss = WG[3] * fc;
    let mut abs_sum = WGK[7] * fc.abs();
    for j in 0..7 {
        let dx = half * XGK[j];
        let f1 = f(center - dx);
        let f2 = f(center + dx);
        kronrod += WGK[j] * (f1 + f2);
        abs_sum += WGK[j] * (f1.abs() + f2.abs());
        if j % 2 == 1 {
            gauss += WG[j / 2] * (f1 + f2);
        }
    }
    let value = kronrod * half;
    let roundoff = 50.0 * f64::EPSILON * abs_sum * half.abs();
    let error = ((kronrod - gauss) * half).abs();
    Segment {
        a,
        b,
        value,
        error,
        roundoff,
    }
}

/// Adaptive quadrature settings.
#[derive(Debug, Clone, Copy)]
pub struct Quadrature {
    pub abs_tol: f64,
    pub rel_tol: f64,
    pub max_segments: usize,
}

impl Default for Quadrature {
    fn default() -> Self {
        Quadrature {
            abs_tol: 1e-13,
            rel_tol: 1e-12,
            max_segments: 4000,
        }
    }
}

/// Integral estimate with its error bound.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Estimate {
    pub value: f64,
    pub error: f64,
}

impl Quadrature {
    pub fn new(abs_tol: f64, rel_tol: f64) -> Self {
        Quadrature {
            abs_tol,
            rel_tol,
            ..Default::default()
        }
    }

    /// Integrate `f` over the finite interval `[a, b]`.
    ///
    /// Fails only when the error bound stays above a thousand times the
    /// requested tolerance once the segment budget is spent.
    pub fn integrate<F: FnMut(f64) -> f64>(&self, mut f: F, a: f64, b: f64) -> Result<Estimate> {
        if a == b {
            return Ok(Estimate {
                value: 0.0,
                error: 0.0,
            });
        }
        let first = gk15(&mut f, a, b);
        let mut value = first.value;
        let mut error = first.error;
        let mut roundoff = first.roundoff;
        let mut heap = BinaryHeap::new();
        heap.push(first);
        let min_width = (b - a).abs() * 1e-13;
        let target =
            |value: f64, roundoff: f64| self.abs_tol.max(self.rel_tol * value.abs()).max(roundoff);
        while error > target(value, roundoff) && heap.len() < self.max_segments {
            let worst = match heap.pop() {
                Some(s) => s,
                None => break,
            };
            // Segments already at roundoff level, or too narrow, cannot improve.
            if (worst.b - worst.a).abs() < min_width || worst.error <= worst.roundoff {
                heap.push(worst);
                break;
            }
            let mid = 0.5 * (worst.a + worst.b);
            let left = gk15(&mut f, worst.a, mid);
            let right = gk15(&mut f, mid, worst.b);
            value += left.value + right.value - worst.value;
            error += left.error + right.error - worst.error;
            roundoff += left.roundoff + right.roundoff - worst.roundoff;
            heap.push(left);
            heap.push(right);
        }
        // Re-sum for a drift-free total.
        let mut parts: Vec<Segment> = heap.into_vec();
        parts.sort_by(|x, y| x.a.total_cmp(&y.a));
        value = parts.iter().map(|s| s.value).sum();
        error = parts.iter().map(|s| s.error).sum();
        roundoff = parts.iter().map(|s| s.roundoff).sum();
        let tol = target(value, roundoff);
        if !value.is_finite() || error > 1e3 * tol {
            return Err(Error::Quadrature {
                estimate: value,
                error,
            });
        }
        Ok(Estimate { value, error })
    }

    /// Integrate over `(-inf, upper]` with the map `u = upper - scale * w / (1 - w)`.
    pub fn integrate_lower_tail<F: FnMut(f64) -> f64>(
        &self,
        mut f: F,
        upper: f64,
        scale: f64,
    ) -> Result<Estimate> {
        self.integrate(
            |w| {
                let one_minus = 1.0 - w;
                let u = upper - scale * w / one_minus;
                let jac = scale / (one_minus * one_minus);
                let v = f(u) * jac;
                if v.is_finite() {
                    v
                } else {
                    0.0
                }
            },
            0.0,
            1.0,
        )
    }

    /// Integrate over the whole real line, split at `center`.
    pub fn integrate_real_line<F: FnMut(f64) -> f64>(
        &self,
        mut f: F,
        center: f64,
        scale: f64,
    ) -> Result<Estimate> {
        let lower = self.integrate_lower_tail(&mut f, center, scale)?;
        let upper = self.integrate(
            |w| {
                let one_minus = 1.0 - w;
                let u = center + scale * w / one_minus;
                let v = f(u) * scale / (one_minus * one_minus);
                if v.is_finite() {
                    v
                } else {
                    0.0
                }
            },
            0.0,
            1.0,
        )?;
        Ok(Estimate {
            value: lower.value + upper.value,
            error: lower.error + upper.error,
        })
    }
}

/// Gauss–Hermite rule for the weight `exp(-y^2)`: nodes ascending, weights.
pub fn gauss_hermite(n: usize) -> (Vec<f64>, Vec<f64>) {
    assert!(n >= 1, "Gauss-Hermite rule needs at least one node");
    let pim4 = std::f64::consts::PI.powf(-0.25);
    let mut x = vec![0.0; n];
    let mut w = vec![0.0; n];
    let m = n.div_ceil(2);
    let nf = n as f64;
    let mut z = 0.0;
    for i in 0..m {
        z = match i {
            0 => (2.0 * nf + 1.0).sqrt() - 1.85575 * (2.0 * nf + 1.0).powf(-1.0 / 6.0),
            1 => z - 1.14 * nf.powf(0.426) / z,
            2 => 1.86 * z - 0.86 * x[0],
            3 => 1.91 * z - 0.91 * x[1],
            _ => 2.0 * z - x[i - 2],
        };
        let mut pp = 0.0;
        for _ in 0..100 {
            let mut p1 = pim4;
            let mut p2 = 0.0;
            for j in 0..n {
                let p3 = p2;
                p2 = p1;
                let jf = j as f64;
                p1 = z * (2.0 / (jf + 1.0)).sqrt() * p2 - (jf / (jf + 1.0)).sqrt() * p3;
            }
            pp = (2.0 * nf).sqrt() * p2;
            let z1 = z;
            z = z1 - p1 / pp;
            if (z - z1).abs() <= 1e-15 * z.abs().max(1.0) {
                break;
            }
        }
        x[i] = z;
        w[i] = 2.0 / (pp * pp);
        x[n - 1 - i] = -z;
        w[n - 1 - i] = w[i];
    }
    let mut pairs: Vec<(f64, f64)> = x.into_iter().zip(w).collect();
    pairs.sort_by(|a, b| a.0.total_cmp(&b.0));
    pairs.into_iter().unzip()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn polynomial_exact() {
        let q = Quadrature::default();
        let est = q.integrate(|x| x * x * x - 2.0 * x, 0.0, 2.0).unwrap();
        assert!((est.value - 0.0).abs() < 1e-14);
    }

    #[test]
    fn endpoint_singularity() {
        let q = Quadrature::new(1e-12, 1e-12);
        let est = q.integrate(|x| x.ln(), 0.0, 1.0).unwrap();
        assert!((est.value + 1.0).abs() < 1e-11, "{}", est.value);
    }

    #[test]
    fn infinite_ranges() {
        let q = Quadrature::new(1e-13, 1e-13);
        let gauss = q.integrate_real_line(|x| (-x * x).exp(), 0.0, 1.0).unwrap();
        assert!((gauss.value - std::f64::consts::PI.sqrt()).abs() < 1e-11);
        let tail = q.integrate_lower_tail(|x| x.exp(), 0.0, 1.0).unwrap();
        assert!((tail.value - 1.0).abs() < 1e-11);
    }

    #[test]
    fn hermite_moments() {
        let (x, w) = gauss_hermite(40);
        let sqrt_pi = std::f64::consts::PI.sqrt();
        let m0: f64 = w.iter().sum();
        let m2: f64 = x.iter().zip(&w).map(|(x, w)| w * x * x).sum();
        let m4: f64 = x.iter().zip(&w).map(|(x, w)| w * x.powi(4)).sum();
        assert!((m0 - sqrt_pi).abs() < 1e-13);
        assert!((m2 - sqrt_pi / 2.0).abs() < 1e-13);
        assert!((m4 - 3.0 * sqrt_pi / 4.0).abs() < 1e-12);
        assert!(x.windows(2).all(|p| p[0] < p[1]));
    }
}
