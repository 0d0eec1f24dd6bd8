//! KS comparison of W_n(ct, alpha) with c^p W_n(t, alpha), with the right and a wrong p.

use quantclt::grid::{LevelGrid, TimeGrid};
use quantclt::harness::{run, Experiment, ExperimentConfig};
use quantclt::process::ProcessSpec;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    for (spec, p) in [(ProcessSpec::brownian(), 0.5), (ProcessSpec::cauchy(), 1.0)] {
        for exponent in [p, p + 0.3] {
            let cfg = ExperimentConfig::new(
                spec.clone(),
                TimeGrid::new(vec![0.25, 1.0])?,
                LevelGrid::from_levels(vec![0.25, 0.5])?,
                200,
                2000,
                18,
                Experiment::ScalingLaw {
                    scale: 4.0,
                    points: vec![(0.25, 0.5), (0.25, 0.25)],
                    exponent: Some(exponent),
                    ks_level: 0.001,
                },
            );
            print!("{}", run(&cfg, None)?.summary());
        }
    }
    Ok(())
}
