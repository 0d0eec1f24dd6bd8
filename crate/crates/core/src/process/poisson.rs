use rand_distr::{Distribution, Exp1};
use rayon::prelude::*;

use super::batch::{Domain, PathBatch};
use super::ProcessSpec;
use crate::dist::Dist1D;
use crate::error::Result;
use crate::grid::TimeGrid;
use crate::rng::SeedInfo;

pub(super) fn sample(
    grid: &TimeGrid,
    lambda: f64,
    jump: &Dist1D,
    n: usize,
    seed: SeedInfo,
) -> PathBatch {
    let t = grid.points();
    let m = t.len();
    let horizon = grid.horizon();
    let mut values = vec![0.0; n * m];
    values.par_chunks_mut(m).enumerate().for_each(|(i, row)| {
        let mut rng = seed.path_rng(i as u64);
        let mut arrivals = Vec::new();
        let mut levels = Vec::new();
        let mut clock = 0.0;
        let mut level = 0.0;
        loop {
            let e: f64 = Exp1.sample(&mut rng);
            clock += e / lambda;
            if clock > horizon {
                break;
            }
            level += jump.sample(&mut rng);
            arrivals.push(clock);
            levels.push(level);
        }
        for (v, &tj) in row.iter_mut().zip(t) {
            let k = arrivals.partition_point(|&a| a <= tj);
            *v = if k == 0 { 0.0 } else { levels[k - 1] };
        }
    });
    PathBatch::from_rows(Domain::Line(grid.clone()), values, seed)
        .expect("grid has at least two points")
}

/// `n` compound Poisson paths with arrival rate `lambda` and i.i.d. jumps from `jump`.
pub fn gen_compound_poisson(
    grid: &TimeGrid,
    lambda: f64,
    jump: &Dist1D,
    n: usize,
    seed: SeedInfo,
) -> Result<PathBatch> {
    ProcessSpec::CompoundPoisson {
        lambda,
        jump: *jump,
    }
    .validate()?;
    if n == 0 {
        return Err(crate::error::invalid("n", "at least one path is required"));
    }
    Ok(sample(grid, lambda, jump, n, seed))
}
