//! Compound Poisson paths have an atom at zero; an independent Laplace shift smooths it.

use quantclt::dist::Dist1D;
use quantclt::empirical::ecdf;
use quantclt::grid::TimeGrid;
use quantclt::process::{line_domain, ProcessSpec};
use quantclt::rng::SeedInfo;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let grid = TimeGrid::uniform(1.0, 4)?;
    let base = ProcessSpec::CompoundPoisson {
        lambda: 2.0,
        jump: Dist1D::standard_normal(),
    };
    let shifted = base.clone().shifted(Dist1D::Laplace {
        loc: 0.0,
        scale: 1.0,
    });
    let n = 100_000;
    let seed = SeedInfo::new(14);
    let raw = base.generate(&line_domain(&grid), n, seed)?;
    let smooth = shifted.generate(&line_domain(&grid), n, seed)?;
    println!("t,P(X=0),P(X+Z=0),expected_atom");
    for (i, &t) in grid.points().iter().enumerate() {
        let atom = |xs: &[f64]| xs.iter().filter(|&&v| v == 0.0).count() as f64 / n as f64;
        println!(
            "{t},{:.4},{:.4},{:.4}",
            atom(&raw.column(i)),
            atom(&smooth.column(i)),
            (-2.0 * t).exp()
        );
    }
    let x = smooth.column(grid.len() - 1);
    println!("F_n(1, 0) = {:.4}", ecdf(&x, 0.0));
    Ok(())
}
