//! Summary statistics used by the verification harness.

use crate::error::{Error, Result, Shape};

/// Sum with pairwise (cascade) reduction; the result depends only on the input order.
pub fn pairwise_sum(xs: &[f64]) -> f64 {
    if xs.len() <= 16 {
        return xs.iter().sum();
    }
    let mid = xs.len() / 2;
    pairwise_sum(&xs[..mid]) + pairwise_sum(&xs[mid..])
}

pub fn mean(xs: &[f64]) -> f64 {
    pairwise_sum(xs) / xs.len() as f64
}

/// Unbiased sample covariance.
pub fn covariance(x: &[f64], y: &[f64]) -> f64 {
    let (mx, my) = (mean(x), mean(y));
    let prods: Vec<f64> = x.iter().zip(y).map(|(a, b)| (a - mx) * (b - my)).collect();
    pairwise_sum(&prods) / (x.len() as f64 - 1.0)
}

pub fn variance(x: &[f64]) -> f64 {
    covariance(x, x)
}

/// Sample covariance with its delete-one jackknife standard error.
pub fn covariance_with_se(x: &[f64], y: &[f64]) -> Result<(f64, f64)> {
    if x.len() != y.len() {
        return Err(Error::ShapeMismatch {
            expected: Shape(1, x.len()),
            found: Shape(1, y.len()),
        });
    }
    let r = x.len();
    if r < 3 {
        return Err(Error::Empty("jackknife needs at least three replications"));
    }
    let rf = r as f64;
    let (mx, my) = (mean(x), mean(y));
    let cx: Vec<f64> = x.iter().map(|v| v - mx).collect();
    let cy: Vec<f64> = y.iter().map(|v| v - my).collect();
    let sx = pairwise_sum(&cx);
    let sy = pairwise_sum(&cy);
    let prods: Vec<f64> = cx.iter().zip(&cy).map(|(a, b)| a * b).collect();
    let sxy = pairwise_sum(&prods);
    let full = (sxy - sx * sy / rf) / (rf - 1.0);
    let loo: Vec<f64> = (0..r)
        .map(|i| {
            let (a, b) = (sx - cx[i], sy - cy[i]);
            (sxy - prods[i] - a * b / (rf - 1.0)) / (rf - 2.0)
        })
        .collect();
    let loo_mean = mean(&loo);
    let dev: Vec<f64> = loo
        .iter()
        .map(|v| (v - loo_mean) * (v - loo_mean))
        .collect();
    let se = ((rf - 1.0) / rf * pairwise_sum(&dev)).sqrt();
    Ok((full, se))
}

/// Two-sample Kolmogorov–Smirnov statistic `sup |F_a - F_b|`.
pub fn ks_two_sample(a: &[f64], b: &[f64]) -> f64 {
    let mut a = a.to_vec();
    let mut b = b.to_vec();
    a.sort_unstable_by(f64::total_cmp);
    b.sort_unstable_by(f64::total_cmp);
    let (na, nb) = (a.len() as f64, b.len() as f64);
    let (mut i, mut j) = (0, 0);
    let mut d: f64 = 0.0;
    while i < a.len() && j < b.len() {
        let x = a[i].min(b[j]);
        while i < a.len() && a[i] <= x {
            i += 1;
        }
        while j < b.len() && b[j] <= x {
            j += 1;
        }
        d = d.max((i as f64 / na - j as f64 / nb).abs());
    }
    d
}

/// Asymptotic critical value of the two-sample statistic at significance `level`.
pub fn ks_critical(level: f64, na: usize, nb: usize) -> f64 {
    let c = (-(level / 2.0).ln() / 2.0).sqrt();
    let (na, nb) = (na as f64, nb as f64);
    c * ((na + nb) / (na * nb)).sqrt()
}

pub fn median(xs: &[f64]) -> f64 {
    let mut v = xs.to_vec();
    v.sort_unstable_by(f64::total_cmp);
    let n = v.len();
    if n % 2 == 1 {
        v[n / 2]
    } else {
        0.5 * (v[n / 2 - 1] + v[n / 2])
    }
}
