use rand::distr::Open01;
use rand::Rng;
use rand_distr::Distribution;
use rayon::prelude::*;

use super::report::{Report, ReportRow};
use super::{Experiment, ExperimentConfig, Pair};
use crate::dist::Dist1D;
use crate::empirical::{
    ecdf, is_alpha_quantile, order_stat_gap, order_statistics, reflected_quantile, sample_quantile,
    vervaat_discrepancy,
};
use crate::error::{Error, Result};
use crate::rng::{SeedInfo, StreamTag};

/// Aggregated outcome of the randomized finite-sample identity checks.
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct IdentityTally {
    pub instances: usize,
    pub inverse_failures: usize,
    pub stability_failures: usize,
    pub lipschitz_failures: usize,
    pub reflection_failures: usize,
    pub vervaat_max: f64,
}

impl IdentityTally {
    fn merge(self, o: IdentityTally) -> IdentityTally {
        IdentityTally {
            instances: self.instances + o.instances,
            inverse_failures: self.inverse_failures + o.inverse_failures,
            stability_failures: self.stability_failures + o.stability_failures,
            lipschitz_failures: self.lipschitz_failures + o.lipschitz_failures,
            reflection_failures: self.reflection_failures + o.reflection_failures,
            vervaat_max: self.vervaat_max.max(o.vervaat_max),
        }
    }
}

fn instance(seed: SeedInfo, i: u64) -> Result<IdentityTally> {
    let mut rng = seed.path_rng(i);
    let law = if i.is_multiple_of(2) {
        Dist1D::standard_normal()
    } else {
        Dist1D::Cauchy {
            loc: 0.0,
            scale: 1.0,
        }
    };
    let n = rng.random_range(1..=64usize);
    let alpha: f64 = Open01.sample(&mut rng);
    let continuous: Vec<f64> = (0..n).map(|_| law.sample(&mut rng)).collect();
    let tied: Vec<f64> = (0..n)
        .map(|_| rng.random_range(-6i32..=6) as f64 * 0.5)
        .collect();
    let mut tally = IdentityTally {
        instances: 1,
        ..Default::default()
    };

    for x in [&continuous, &tied] {
        let q = sample_quantile(x, alpha)?;
        let brute = x
            .iter()
            .copied()
            .filter(|&c| ecdf(x, c) >= alpha)
            .fold(f64::INFINITY, f64::min);
        if q != brute {
            tally.inverse_failures += 1;
        }
        let os = order_statistics(x)?;
        let stable = os.windows(2).all(|w| {
            w[0].value < w[1].value || (w[0].value == w[1].value && w[0].index < w[1].index)
        });
        if !stable {
            tally.stability_failures += 1;
        }
        if !is_alpha_quantile(x, reflected_quantile(x, alpha)?, alpha) {
            tally.reflection_failures += 1;
        }

        // Perturbations hit the full budget +-delta on a random subset, which
        // reorders tied entries as aggressively as the bound allows.
        let delta: f64 = rng.random::<f64>();
        let y: Vec<f64> = x
            .iter()
            .map(|v| match rng.random_range(0..3) {
                0 => v + delta,
                1 => v - delta,
                _ => v + delta * (2.0 * rng.random::<f64>() - 1.0),
            })
            .collect();
        let (d, gap) = order_stat_gap(x, &y)?;
        if gap > d {
            tally.lipschitz_failures += 1;
        }
    }

    let probes = [alpha, 0.5 / n as f64, 0.5, 1.0 - 0.5 / n as f64];
    tally.vervaat_max = vervaat_discrepancy(&continuous, &law, &probes)?;
    Ok(tally)
}

/// Randomized checks of the exact finite-sample identities, aggregated over all instances.
pub fn run_identity_suite(cfg: &ExperimentConfig) -> Result<Report> {
    cfg.validate()?;
    let Experiment::IdentitySuite {
        instances,
        vervaat_tol,
    } = &cfg.experiment
    else {
        return Err(Error::Config(
            "identity_suite needs an instance count".into(),
        ));
    };
    let seed = SeedInfo::new(cfg.seed).with_tag(StreamTag::Identity);
    let tallies: Vec<IdentityTally> = (0..*instances as u64)
        .into_par_iter()
        .map(|i| instance(seed, i))
        .collect::<Result<_>>()?;
    let total = tallies
        .into_iter()
        .fold(IdentityTally::default(), IdentityTally::merge);

    let none = Pair::new(f64::NAN, f64::NAN, f64::NAN, f64::NAN);
    let count = |k: usize| ReportRow::at_most(none, total.instances, 1, k as f64, f64::NAN, 0.0);
    let mut report = Report::new(cfg.experiment.name());
    report.rows.push(count(total.inverse_failures));
    report.rows.push(count(total.stability_failures));
    report.rows.push(count(total.lipschitz_failures));
    report.rows.push(count(total.reflection_failures));
    report.rows.push(ReportRow::at_most(
        none,
        total.instances,
        1,
        total.vervaat_max,
        f64::NAN,
        *vervaat_tol,
    ));
    report.notes.push(
        "rows: generalized-inverse failures, tie-order failures, sort-Lipschitz failures, \
         reflection failures, max inverse-identity discrepancy"
            .into(),
    );
    Ok(report)
}
