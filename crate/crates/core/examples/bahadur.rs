//! Median sup residual of W_n f + nu_n along an n ladder for Brownian motion.

use quantclt::grid::{LevelGrid, TimeGrid};
use quantclt::harness::{run, Experiment, ExperimentConfig};
use quantclt::process::ProcessSpec;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let cfg = ExperimentConfig::new(
        ProcessSpec::brownian(),
        TimeGrid::uniform(1.0, 10)?,
        LevelGrid::uniform(0.25, 0.75, 11)?,
        100,
        400,
        19,
        Experiment::BahadurResidual {
            n_ladder: vec![100, 400, 1600],
            t_range: (0.1, 1.0),
            decay: 0.8,
        },
    );
    print!("{}", run(&cfg, None)?.summary());
    Ok(())
}
