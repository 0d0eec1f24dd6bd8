//! Simulate fractional Brownian motion and compare sample moments with the kernel.
//!
//! cargo run --example fbm_paths -- 0.75

use quantclt::analytic::GaussianFamily;
use quantclt::grid::TimeGrid;
use quantclt::process::gen_fbm;
use quantclt::rng::SeedInfo;
use quantclt::stats::covariance;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let gamma: f64 = std::env::args().nth(1).map_or(Ok(0.75), |s| s.parse())?;
    let grid = TimeGrid::uniform(1.0, 8)?;
    let batch = gen_fbm(&grid, gamma, 20_000, SeedInfo::new(11))?;
    let family = GaussianFamily::fbm(gamma)?;
    let last = grid.len() - 1;
    let x_last = batch.column(last);
    println!("t,var_mc,var_exact,cov_with_1_mc,cov_with_1_exact");
    for (i, &t) in grid.points().iter().enumerate() {
        let x = batch.column(i);
        println!(
            "{t},{:.4},{:.4},{:.4},{:.4}",
            covariance(&x, &x),
            family.covariance(t, t),
            covariance(&x, &x_last),
            family.covariance(t, 1.0)
        );
    }
    Ok(())
}
