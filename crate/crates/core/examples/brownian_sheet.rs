//! Sample a Brownian sheet on a small lattice and check E[X(s)X(t)] = prod min(s_j, t_j).

use quantclt::grid::{TimeGrid, TimeGrid2D};
use quantclt::process::gen_brownian_sheet;
use quantclt::rng::SeedInfo;
use quantclt::stats::covariance;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let axis = TimeGrid::new(vec![0.25, 0.5, 1.0])?;
    let grid = TimeGrid2D::new(axis.points().to_vec(), axis.points().to_vec())?;
    let batch = gen_brownian_sheet(&grid, 20_000, SeedInfo::new(12))?;
    let corner = batch.column(grid.len() - 1);
    println!("s1,s2,cov_with_corner_mc,exact");
    for k in 0..grid.len() {
        let (a, b) = grid.point(k);
        println!(
            "{a},{b},{:.4},{:.4}",
            covariance(&batch.column(k), &corner),
            a * b
        );
    }
    Ok(())
}
