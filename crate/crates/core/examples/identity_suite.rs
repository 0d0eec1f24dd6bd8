//! Exact finite-sample identities on random samples, with and without ties.

use quantclt::dist::Dist1D;
use quantclt::empirical::{
    order_stat_gap, reflected_quantile, sample_quantile, vervaat_discrepancy,
};
use quantclt::grid::{LevelGrid, TimeGrid};
use quantclt::harness::{run_identity_suite, Experiment, ExperimentConfig};
use quantclt::process::ProcessSpec;
use quantclt::rng::SeedInfo;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let x = [1.0, 0.5, 0.5, 2.0, 0.5, -1.0];
    for alpha in [0.2, 0.5, 0.8] {
        println!(
            "alpha={alpha} quantile={} reflected={}",
            sample_quantile(&x, alpha)?,
            reflected_quantile(&x, alpha)?
        );
    }
    let y: Vec<f64> = x
        .iter()
        .enumerate()
        .map(|(i, v)| v + 0.1 * (-1f64).powi(i as i32))
        .collect();
    let (delta, gap) = order_stat_gap(&x, &y)?;
    println!("perturbation {delta:.3}, order statistics moved {gap:.3}");

    let mut rng = SeedInfo::new(17).path_rng(0);
    let cauchy = Dist1D::Cauchy {
        loc: 0.0,
        scale: 1.0,
    };
    let sample: Vec<f64> = (0..50).map(|_| cauchy.sample(&mut rng)).collect();
    let d = vervaat_discrepancy(&sample, &cauchy, &[0.01, 0.3, 0.5, 0.97])?;
    println!("inverse identity discrepancy on a Cauchy sample: {d:.2e}");

    let cfg = ExperimentConfig::new(
        ProcessSpec::brownian(),
        TimeGrid::uniform(1.0, 1)?,
        LevelGrid::from_levels(vec![0.5])?,
        2,
        1,
        17,
        Experiment::IdentitySuite {
            instances: 10_000,
            vervaat_tol: 1e-9,
        },
    );
    print!("{}", run_identity_suite(&cfg)?.summary());
    Ok(())
}
