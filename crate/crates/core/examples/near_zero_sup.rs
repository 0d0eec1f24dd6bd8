//! Probability that sup over [0, delta] x [0.25, 0.75] of |W_n| exceeds 1, as delta shrinks.

use quantclt::grid::{LevelGrid, TimeGrid};
use quantclt::harness::{run, Experiment, ExperimentConfig};
use quantclt::process::ProcessSpec;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    for spec in [ProcessSpec::cauchy(), ProcessSpec::brownian()] {
        let cfg = ExperimentConfig::new(
            spec,
            TimeGrid::new(vec![0.0, 0.0025, 0.005, 0.01, 0.025, 0.05, 0.1, 0.15, 0.2])?,
            LevelGrid::uniform(0.25, 0.75, 11)?,
            100,
            1000,
            20,
            Experiment::SupNearZero {
                deltas: vec![0.2, 0.1, 0.05, 0.01],
                n_values: vec![100, 200, 400],
                epsilon: 1.0,
                max_prob: 0.05,
            },
        );
        print!("{}", run(&cfg, None)?.summary());
    }
    Ok(())
}
