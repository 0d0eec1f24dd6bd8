//! Constants of the uniform tail bound for the quantile process of a stable input.

use quantclt::analytic::{tail_bound_constants, StableLaw, DEFAULT_TAIL_CONSTANT};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    println!("r,alpha_star,n,lambda_r,n0,threshold,bound_at_2C");
    for r in [1.0, 1.5, 2.0] {
        let law = StableLaw::new(r, 1.0)?;
        for alpha_star in [0.75, 0.9] {
            for n in [100, 1000] {
                let tb = tail_bound_constants(&law, alpha_star, DEFAULT_TAIL_CONSTANT, n)?;
                let u = 2.0 * tb.threshold * (n as f64).sqrt();
                println!(
                    "{r},{alpha_star},{n},{:.4},{},{:.4},{:.3e}",
                    tb.lambda_r,
                    tb.n0,
                    tb.threshold,
                    tb.bound(u)
                );
            }
        }
    }
    Ok(())
}
