//! Symmetric stable paths: empirical quantiles of X(t) against the analytic ones.
//!
//! cargo run --example stable_paths -- 1.5

use quantclt::analytic::StableLaw;
use quantclt::empirical::empirical_quantile;
use quantclt::grid::TimeGrid;
use quantclt::process::gen_sym_stable;
use quantclt::rng::SeedInfo;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let r: f64 = std::env::args().nth(1).map_or(Ok(1.5), |s| s.parse())?;
    let law = StableLaw::new(r, 1.0)?;
    let grid = TimeGrid::uniform(2.0, 4)?;
    let batch = gen_sym_stable(&grid, r, 1.0, 50_000, SeedInfo::new(13))?;
    println!("t,alpha,empirical,analytic");
    for (i, &t) in grid.points().iter().enumerate().skip(1) {
        for alpha in [0.1, 0.25, 0.5, 0.75, 0.9] {
            println!(
                "{t},{alpha},{:.4},{:.4}",
                empirical_quantile(&batch, i, alpha)?,
                law.quantile(t, alpha)?
            );
        }
    }
    Ok(())
}
