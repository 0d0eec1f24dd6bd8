//! Build the quantile field of Brownian motion and print W_n on a (t, alpha) lattice.

use quantclt::analytic::{true_quantile, LimitLaw, MarginalLaw, StableLaw};
use quantclt::empirical::{quantile_field, sup_statistic};
use quantclt::grid::{LevelGrid, TimeGrid};
use quantclt::process::gen_sym_stable;
use quantclt::rng::SeedInfo;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let grid = TimeGrid::uniform(1.0, 4)?;
    let levels = LevelGrid::uniform(0.1, 0.9, 5)?;
    let law = MarginalLaw::SymStable(StableLaw::brownian());
    let tau = grid
        .points()
        .iter()
        .map(|&t| {
            levels
                .levels()
                .iter()
                .map(|&a| true_quantile(&law, t, a))
                .collect::<Result<Vec<_>, _>>()
        })
        .collect::<Result<Vec<_>, _>>()?;
    let batch = gen_sym_stable(&grid, 2.0, 0.5, 1000, SeedInfo::new(15))?;
    let field = quantile_field(&batch, &levels, &tau)?;
    println!("t,alpha,tau_n,tau,w_n");
    for (i, &t) in grid.points().iter().enumerate() {
        for (k, &a) in levels.levels().iter().enumerate() {
            println!(
                "{t},{a},{:.4},{:.4},{:.4}",
                field.tau_n(i, k),
                tau[i][k],
                field.w_n(i, k)
            );
        }
    }
    let sup = sup_statistic(&field, (0.0, 1.0), levels.bounds())?;
    println!(
        "sup |W_n| = {sup:.4}; marginal at t=1 {:?}",
        law.marginal(1.0)?
    );
    Ok(())
}
