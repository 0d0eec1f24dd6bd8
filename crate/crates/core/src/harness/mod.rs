//! Replicated Monte Carlo experiments with pass/fail reports.
//!
//! Each replication draws an independent batch from its own seed stream, so a
//! report depends only on the configuration and never on the worker count.

mod experiments;
mod identity;
mod report;

use serde::{Deserialize, Serialize};

pub use experiments::{
    bahadur_residual_point, run_bahadur_residual, run_cov_convergence, run_marginal_variance,
    run_scaling_law, run_sup_near_zero,
};
pub use identity::{run_identity_suite, IdentityTally};
pub use report::{CovarianceReport, Report, ReportRow, Verdict, CSV_HEADER};

use crate::error::{invalid, Error, Result};
use crate::grid::{LevelGrid, TimeGrid};
use crate::process::ProcessSpec;

pub const DEFAULT_Z_MAX: f64 = 3.0;
pub const DEFAULT_KS_LEVEL: f64 = 0.001;
pub const DEFAULT_DECAY: f64 = 0.8;
pub const DEFAULT_REFERENCE_N: usize = 1_000_000;
pub const DEFAULT_VERVAAT_TOL: f64 = 1e-9;

/// A covariance target `E[W(s, beta) W(t, alpha)]`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Pair {
    pub s: f64,
    pub beta: f64,
    pub t: f64,
    pub alpha: f64,
}

impl Pair {
    pub fn new(s: f64, beta: f64, t: f64, alpha: f64) -> Self {
        Pair { s, beta, t, alpha }
    }

    pub fn diagonal(t: f64, alpha: f64) -> Self {
        Pair::new(t, alpha, t, alpha)
    }
}

/// Which experiment to run, with its specific parameters.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Experiment {
    CovConvergence {
        pairs: Vec<Pair>,
    },
    MarginalVariance {
        /// `(t, alpha)` cells.
        points: Vec<(f64, f64)>,
        /// Paths in the empirical reference used when no closed-form marginal exists.
        reference_n: usize,
    },
    SupNearZero {
        deltas: Vec<f64>,
        n_values: Vec<usize>,
        epsilon: f64,
        /// Required bound on the exceedance probability at the smallest delta.
        max_prob: f64,
    },
    ScalingLaw {
        scale: f64,
        points: Vec<(f64, f64)>,
        /// Exponent to test; the process's own scaling exponent when absent.
        exponent: Option<f64>,
        ks_level: f64,
    },
    BahadurResidual {
        n_ladder: Vec<usize>,
        t_range: (f64, f64),
        decay: f64,
    },
    IdentitySuite {
        instances: usize,
        vervaat_tol: f64,
    },
}

impl Experiment {
    pub fn name(&self) -> &'static str {
        match self {
            Experiment::CovConvergence { .. } => "cov_convergence",
            Experiment::MarginalVariance { .. } => "marginal_variance",
            Experiment::SupNearZero { .. } => "sup_near_zero",
            Experiment::ScalingLaw { .. } => "scaling_law",
            Experiment::BahadurResidual { .. } => "bahadur_residual",
            Experiment::IdentitySuite { .. } => "identity_suite",
        }
    }
}

/// Everything needed to reproduce one experiment.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExperimentConfig {
    pub spec: ProcessSpec,
    pub grid: TimeGrid,
    pub levels: LevelGrid,
    pub n: usize,
    #[serde(rename = "R")]
    pub replications: usize,
    pub seed: u64,
    pub experiment: Experiment,
    pub z_max: f64,
}

impl ExperimentConfig {
    pub fn new(
        spec: ProcessSpec,
        grid: TimeGrid,
        levels: LevelGrid,
        n: usize,
        replications: usize,
        seed: u64,
        experiment: Experiment,
    ) -> Self {
        ExperimentConfig {
            spec,
            grid,
            levels,
            n,
            replications,
            seed,
            experiment,
            z_max: DEFAULT_Z_MAX,
        }
    }

    /// Up-front completeness and consistency checks.
    pub fn validate(&self) -> Result<()> {
        self.spec.validate()?;
        if self.spec.is_sheet() {
            return Err(Error::Unsupported(
                "experiments run on one-parameter grids; sample sheets with gen_brownian_sheet"
                    .into(),
            ));
        }
        if self.n < 2 {
            return Err(invalid(
                "n",
                "at least two paths per replication are required",
            ));
        }
        if self.replications < 1 {
            return Err(invalid("R", "at least one replication is required"));
        }
        if !(self.z_max > 0.0) {
            return Err(invalid("z_max", "must be positive"));
        }
        let on_grid = |t: f64, name: &'static str| {
            self.grid
                .index_of(t)
                .ok_or_else(|| invalid(name, format!("time {t} is not a grid point")))
        };
        let on_levels = |a: f64, name: &'static str| {
            self.levels
                .index_of(a)
                .ok_or_else(|| invalid(name, format!("level {a} is not in the level grid")))
        };
        match &self.experiment {
            Experiment::CovConvergence { pairs } => {
                if pairs.is_empty() {
                    return Err(invalid("pairs", "no covariance pairs given"));
                }
                for p in pairs {
                    on_grid(p.s, "pairs")?;
                    on_grid(p.t, "pairs")?;
                    on_levels(p.beta, "pairs")?;
                    on_levels(p.alpha, "pairs")?;
                }
                if self.replications < 3 {
                    return Err(invalid(
                        "R",
                        "jackknife errors need at least three replications",
                    ));
                }
            }
            Experiment::MarginalVariance {
                points,
                reference_n,
            } => {
                if points.is_empty() {
                    return Err(invalid("points", "no (t, alpha) cells given"));
                }
                for &(t, a) in points {
                    on_grid(t, "points")?;
                    on_levels(a, "points")?;
                }
                if *reference_n < 2 {
                    return Err(invalid("reference_n", "reference sample is too small"));
                }
                if self.replications < 3 {
                    return Err(invalid(
                        "R",
                        "jackknife errors need at least three replications",
                    ));
                }
            }
            Experiment::SupNearZero {
                deltas,
                n_values,
                epsilon,
                max_prob,
            } => {
                if deltas.is_empty() || n_values.is_empty() {
                    return Err(invalid("deltas", "need at least one delta and one n"));
                }
                if deltas.iter().any(|&d| !(d > 0.0)) {
                    return Err(invalid("deltas", "deltas must be positive"));
                }
                if n_values.iter().any(|&n| n < 2) {
                    return Err(invalid("n_values", "each n must be at least 2"));
                }
                if !(*epsilon > 0.0) {
                    return Err(invalid("epsilon", "must be positive"));
                }
                if !(0.0..=1.0).contains(max_prob) {
                    return Err(invalid("max_prob", "must lie in [0, 1]"));
                }
                if !self.spec.zero_at_zero() {
                    return Err(invalid("process", "near-zero control needs X(0) = 0"));
                }
                if self.grid.points()[0] != 0.0 {
                    return Err(invalid("grid", "near-zero control needs t = 0 on the grid"));
                }
            }
            Experiment::ScalingLaw {
                scale,
                points,
                exponent,
                ks_level,
            } => {
                if !(*scale > 0.0) {
                    return Err(invalid("scale", "must be positive"));
                }
                if exponent.is_none() && self.spec.scaling_exponent().is_none() {
                    return Err(invalid("exponent", "process has no scaling exponent"));
                }
                if points.is_empty() {
                    return Err(invalid("points", "no (t, alpha) cells given"));
                }
                for &(t, a) in points {
                    on_grid(t, "points")?;
                    on_grid(scale * t, "points")?;
                    on_levels(a, "points")?;
                }
                if !(*ks_level > 0.0 && *ks_level < 1.0) {
                    return Err(invalid("ks_level", "must lie in (0, 1)"));
                }
            }
            Experiment::BahadurResidual {
                n_ladder,
                t_range,
                decay,
            } => {
                if n_ladder.len() < 2 || n_ladder.windows(2).any(|w| w[0] >= w[1]) {
                    return Err(invalid(
                        "n_ladder",
                        "need an increasing ladder of at least two sizes",
                    ));
                }
                if n_ladder[0] < 2 {
                    return Err(invalid("n_ladder", "each n must be at least 2"));
                }
                if self.grid.indices_in(t_range.0, t_range.1).is_empty() {
                    return Err(invalid("t_range", "range contains no grid point"));
                }
                if !(*decay > 0.0) {
                    return Err(invalid("decay", "must be positive"));
                }
            }
            Experiment::IdentitySuite {
                instances,
                vervaat_tol,
            } => {
                if *instances == 0 {
                    return Err(invalid("instances", "must be positive"));
                }
                if !(*vervaat_tol >= 0.0) {
                    return Err(invalid("vervaat_tol", "must be nonnegative"));
                }
            }
        }
        Ok(())
    }
}

/// Run the configured experiment on a pool of `threads` workers (all cores when `None`).
pub fn run(cfg: &ExperimentConfig, threads: Option<usize>) -> Result<Report> {
    cfg.validate()?;
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(threads.unwrap_or(0))
        .build()
        .map_err(|e| Error::Config(format!("cannot start worker pool: {e}")))?;
    pool.install(|| match &cfg.experiment {
        Experiment::CovConvergence { .. } => run_cov_convergence(cfg),
        Experiment::MarginalVariance { .. } => run_marginal_variance(cfg),
        Experiment::SupNearZero { .. } => run_sup_near_zero(cfg),
        Experiment::ScalingLaw { .. } => run_scaling_law(cfg),
        Experiment::BahadurResidual { .. } => run_bahadur_residual(cfg),
        Experiment::IdentitySuite { .. } => run_identity_suite(cfg),
    })
}
