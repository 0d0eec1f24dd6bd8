//! Replicated covariance of the median quantile process of Brownian motion.

use quantclt::grid::{LevelGrid, TimeGrid};
use quantclt::harness::{run, Experiment, ExperimentConfig, Pair};
use quantclt::process::ProcessSpec;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let cfg = ExperimentConfig::new(
        ProcessSpec::brownian(),
        TimeGrid::uniform(1.0, 2)?,
        LevelGrid::from_levels(vec![0.5])?,
        500,
        2000,
        16,
        Experiment::CovConvergence {
            pairs: vec![Pair::diagonal(1.0, 0.5), Pair::new(0.5, 0.5, 1.0, 0.5)],
        },
    );
    let report = run(&cfg, None)?;
    print!("{}", report.summary());
    Ok(())
}
