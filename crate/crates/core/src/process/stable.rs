use std::f64::consts::{FRAC_PI_2, PI};

use rand::distr::Open01;
use rand::Rng;
use rand_distr::{Distribution, Exp1, StandardNormal};
use rayon::prelude::*;

use super::batch::{Domain, PathBatch};
use crate::analytic::StableLaw;
use crate::error::Result;
use crate::grid::TimeGrid;
use crate::rng::SeedInfo;

/// One draw from the symmetric `r`-stable law with characteristic function `exp{-|u|^r}`.
///
/// Chambers–Mallows–Stuck for general `r`, with the exact Cauchy and Gaussian
/// special cases.
pub fn sample_sym_stable<R: Rng + ?Sized>(r: f64, rng: &mut R) -> f64 {
    if r == 2.0 {
        let z: f64 = StandardNormal.sample(rng);
        return std::f64::consts::SQRT_2 * z;
    }
    let u: f64 = Open01.sample(rng);
    let v = PI * (u - 0.5);
    if r == 1.0 {
        return v.tan();
    }
    let w: f64 = Exp1.sample(rng);
    let a = (r * v).sin() / v.cos().powf(1.0 / r);
    let b = (((1.0 - r) * v).cos() / w).powf((1.0 - r) / r);
    debug_assert!(v.abs() < FRAC_PI_2);
    a * b
}

pub(super) fn sample(grid: &TimeGrid, r: f64, c: f64, n: usize, seed: SeedInfo) -> PathBatch {
    let t = grid.points();
    let m = t.len();
    let scales: Vec<f64> = (0..m)
        .map(|j| {
            let dt = if j == 0 { t[0] } else { t[j] - t[j - 1] };
            (c * dt).powf(1.0 / r)
        })
        .collect();
    let mut values = vec![0.0; n * m];
    values.par_chunks_mut(m).enumerate().for_each(|(i, row)| {
        let mut rng = seed.path_rng(i as u64);
        let mut x = 0.0;
        for (v, &scale) in row.iter_mut().zip(&scales) {
            if scale > 0.0 {
                x += scale * sample_sym_stable(r, &mut rng);
            }
            *v = x;
        }
    });
    PathBatch::from_rows(Domain::Line(grid.clone()), values, seed)
        .expect("grid has at least two points")
}

/// `n` paths of the symmetric `r`-stable Lévy process with `E exp(iuX_t) = exp{-c t |u|^r}`.
pub fn gen_sym_stable(
    grid: &TimeGrid,
    r: f64,
    c: f64,
    n: usize,
    seed: SeedInfo,
) -> Result<PathBatch> {
    StableLaw::new(r, c)?;
    if n == 0 {
        return Err(crate::error::invalid("n", "at least one path is required"));
    }
    Ok(sample(grid, r, c, n, seed))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn starts_at_zero_and_rejects_bad_index() {
        let grid = TimeGrid::uniform(1.0, 5).unwrap();
        for &r in &[0.7, 1.0, 1.5, 2.0] {
            let b = gen_sym_stable(&grid, r, 1.0, 10, SeedInfo::new(9)).unwrap();
            assert!(b.column(0).iter().all(|&v| v == 0.0));
        }
        assert!(gen_sym_stable(&grid, 2.1, 1.0, 10, SeedInfo::new(9)).is_err());
        assert!(gen_sym_stable(&grid, 0.0, 1.0, 10, SeedInfo::new(9)).is_err());
    }

    #[test]
    fn unit_draws_match_analytic_cdf() {
        let mut rng = SeedInfo::new(4).path_rng(0);
        for &r in &[0.8, 1.5] {
            let law = StableLaw::new(r, 1.0).unwrap();
            let n = 20_000;
            for &x in &[-1.0, 0.3, 2.0] {
                let hits = (0..n)
                    .filter(|_| sample_sym_stable(r, &mut rng) <= x)
                    .count();
                let p = law.unit_cdf(x).unwrap();
                let se = (p * (1.0 - p) / n as f64).sqrt();
                assert!((hits as f64 / n as f64 - p).abs() < 4.5 * se, "r={r} x={x}");
            }
        }
    }
}
