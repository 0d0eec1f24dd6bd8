//! Densities, quantiles and limit covariances without any simulation.

use quantclt::analytic::{
    limit_cov_quantile_fbm, limit_cov_quantile_stable, median_cov_fbm, stable_cdf, stable_density,
    StableLaw,
};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    println!("r,x,f(1,x),F(1,x)");
    for r in [0.8, 1.0, 1.5, 2.0] {
        for x in [-3.0, -1.0, 0.0, 0.5, 2.0] {
            println!(
                "{r},{x},{:.10},{:.10}",
                stable_density(r, 1.0, 1.0, x)?,
                stable_cdf(r, 1.0, 1.0, x)?
            );
        }
    }
    let cauchy = StableLaw::cauchy();
    println!(
        "Cauchy Cov(W(0.5,1/2), W(1,1/2)) = {:.6}",
        limit_cov_quantile_stable(&cauchy, 0.5, 0.5, 1.0, 0.5)?
    );
    println!(
        "fBm(0.75) Cov(W(0.5,1/4), W(1,3/4)) = {:.6}",
        limit_cov_quantile_fbm(0.75, 0.5, 0.25, 1.0, 0.75)?
    );
    println!(
        "BM median arcsine value = {:.6}",
        median_cov_fbm(0.5, 0.5, 1.0)?
    );
    Ok(())
}
