use rand_distr::{Distribution, StandardNormal};
use rayon::prelude::*;

use super::batch::{Domain, PathBatch};
use crate::analytic::GaussianFamily;
use crate::error::{Error, Result};
use crate::grid::{TimeGrid, TimeGrid2D};
use crate::rng::SeedInfo;

const JITTERS: [f64; 6] = [0.0, 1e-12, 1e-11, 1e-10, 1e-9, 1e-8];

/// Lower Cholesky factor of the `k × k` row-major matrix `a`, or `None` when a pivot is not positive.
pub fn cholesky(a: &[f64], k: usize) -> Option<Vec<f64>> {
    assert_eq!(a.len(), k * k, "matrix must be k x k");
    let mut l = vec![0.0; k * k];
    for i in 0..k {
        for j in 0..=i {
            let mut sum = a[i * k + j];
            for p in 0..j {
                sum -= l[i * k + p] * l[j * k + p];
            }
            if i == j {
                if !(sum > 0.0) {
                    return None;
                }
                l[i * k + i] = sum.sqrt();
            } else {
                l[i * k + j] = sum / l[j * k + j];
            }
        }
    }
    Some(l)
}

/// Exact sampler for a centered Gaussian vector, built from its covariance.
///
/// Points with zero variance are excluded from the factorization and always
/// sampled as exactly zero.
#[derive(Debug, Clone)]
pub struct GaussianSampler {
    m: usize,
    active: Vec<usize>,
    factor: Vec<f64>,
    jitter: f64,
}

impl GaussianSampler {
    pub fn from_kernel(
        m: usize,
        kernel: impl Fn(usize, usize) -> f64,
        process: &str,
        grid: &str,
    ) -> Result<Self> {
        let active: Vec<usize> = (0..m).filter(|&i| kernel(i, i) > 0.0).collect();
        let k = active.len();
        let mut cov = vec![0.0; k * k];
        for (a, &i) in active.iter().enumerate() {
            for (b, &j) in active.iter().enumerate() {
                cov[a * k + b] = kernel(i, j);
            }
        }
        let mean_diag = (0..k).map(|a| cov[a * k + a]).sum::<f64>() / k.max(1) as f64;
        for &jitter in &JITTERS {
            let mut c = cov.clone();
            for a in 0..k {
                c[a * k + a] += jitter * mean_diag;
            }
            if let Some(factor) = cholesky(&c, k) {
                if jitter > 0.0 {
                    log::warn!(
                        "{process} on {grid}: covariance regularized with jitter {jitter:e}"
                    );
                }
                return Ok(GaussianSampler {
                    m,
                    active,
                    factor,
                    jitter,
                });
            }
        }
        Err(Error::NotPositiveDefinite {
            process: process.to_string(),
            grid: grid.to_string(),
            jitter: JITTERS[JITTERS.len() - 1],
        })
    }

    pub fn fbm(grid: &TimeGrid, gamma: f64) -> Result<Self> {
        let family = GaussianFamily::fbm(gamma)?;
        let t = grid.points();
        Self::from_kernel(
            t.len(),
            |i, j| family.base_covariance(t[i], t[j]),
            &format!("fbm(gamma={gamma})"),
            &grid.describe(),
        )
    }

    pub fn brownian_sheet(grid: &TimeGrid2D) -> Result<Self> {
        Self::from_kernel(
            grid.len(),
            |i, j| {
                let (s1, s2) = grid.point(i);
                let (t1, t2) = grid.point(j);
                s1.min(t1) * s2.min(t2)
            },
            "brownian_sheet",
            &format!("{} x {}", grid.x().describe(), grid.y().describe()),
        )
    }

    /// Diagonal regularization that was needed, relative to the mean variance.
    pub fn jitter(&self) -> f64 {
        self.jitter
    }

    pub fn sample(&self, domain: Domain, n: usize, seed: SeedInfo) -> Result<PathBatch> {
        if domain.len() != self.m {
            return Err(Error::ShapeMismatch {
                expected: crate::error::Shape(1, self.m),
                found: crate::error::Shape(1, domain.len()),
            });
        }
        let m = self.m;
        let k = self.active.len();
        let mut values = vec![0.0; n * m];
        values.par_chunks_mut(m).enumerate().for_each(|(i, row)| {
            let mut rng = seed.path_rng(i as u64);
            let z: Vec<f64> = (0..k).map(|_| StandardNormal.sample(&mut rng)).collect();
            for (a, &col) in self.active.iter().enumerate() {
                let l = &self.factor[a * k..a * k + a + 1];
                row[col] = l.iter().zip(&z).map(|(x, y)| x * y).sum();
            }
        });
        PathBatch::from_rows(domain, values, seed)
    }
}

/// `n` fractional Brownian motion paths with Hurst index `gamma`.
pub fn gen_fbm(grid: &TimeGrid, gamma: f64, n: usize, seed: SeedInfo) -> Result<PathBatch> {
    GaussianSampler::fbm(grid, gamma)?.sample(Domain::Line(grid.clone()), n, seed)
}

/// `n` Brownian sheets on a product grid; columns are flattened with [`TimeGrid2D::flat_index`].
pub fn gen_brownian_sheet(grid: &TimeGrid2D, n: usize, seed: SeedInfo) -> Result<PathBatch> {
    GaussianSampler::brownian_sheet(grid)?.sample(Domain::Sheet(grid.clone()), n, seed)
}
