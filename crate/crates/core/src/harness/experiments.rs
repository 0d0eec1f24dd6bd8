use std::sync::Arc;

use rayon::prelude::*;

use super::report::{Report, ReportRow};
use super::{Experiment, ExperimentConfig, Pair};
use crate::analytic::{
    limit_cov_quantile, ConvolvedBase, Marginal, MarginalLaw, ReferenceSamples, UnivariateLaw,
};
use crate::empirical::{quantile_field, quantile_sorted, sorted, QuantileField};
use crate::error::{Error, Result};
use crate::grid::{LevelGrid, TimeGrid};
use crate::process::{line_domain, Generator, PathBatch, ProcessSpec};
use crate::rng::{SeedInfo, StreamTag};
use crate::stats::{covariance_with_se, ks_critical, ks_two_sample, median};

fn closed_form_law(spec: &ProcessSpec, purpose: &str) -> Result<MarginalLaw> {
    spec.marginal_law()?.ok_or_else(|| {
        Error::Unsupported(format!(
            "{} has no closed-form marginal law for {purpose}; \
             run marginal_variance, which falls back to an empirical reference",
            spec.describe()
        ))
    })
}

/// `true_tau[i][k] = F^{-1}(t_i, alpha_k)`.
fn true_quantiles(law: &MarginalLaw, grid: &TimeGrid, levels: &LevelGrid) -> Result<Vec<Vec<f64>>> {
    grid.points()
        .par_iter()
        .map(|&t| {
            let m = law.at(t)?;
            levels.levels().iter().map(|&a| m.quantile(a)).collect()
        })
        .collect()
}

/// Run `f` on replications `first..first + count`, in replication order.
fn replicate<T, F>(
    gen: &Generator,
    seed: u64,
    n: usize,
    first: usize,
    count: usize,
    f: F,
) -> Result<Vec<T>>
where
    T: Send,
    F: Fn(&PathBatch) -> Result<T> + Sync,
{
    (first..first + count)
        .into_par_iter()
        .map(|r| {
            let batch = gen.generate(n, SeedInfo::new(seed).with_replication(r as u64))?;
            f(&batch)
        })
        .collect()
}

fn field_indices(cfg: &ExperimentConfig, t: f64, alpha: f64) -> (usize, usize) {
    (
        cfg.grid.index_of(t).expect("validated grid point"),
        cfg.levels.index_of(alpha).expect("validated level"),
    )
}

/// Covariances of the quantile process at the configured pairs versus their limits.
pub fn run_cov_convergence(cfg: &ExperimentConfig) -> Result<Report> {
    cfg.validate()?;
    let Experiment::CovConvergence { pairs } = &cfg.experiment else {
        return Err(Error::Config(
            "cov_convergence needs a list of pairs".into(),
        ));
    };
    let law = closed_form_law(&cfg.spec, "covariance limits")?;
    if matches!(law, MarginalLaw::Convolved { .. }) {
        return Err(Error::Unsupported(format!(
            "joint law of {} is not available; run marginal_variance instead",
            cfg.spec.describe()
        )));
    }
    let tau = true_quantiles(&law, &cfg.grid, &cfg.levels)?;
    let gen = cfg.spec.prepare(&line_domain(&cfg.grid))?;
    let cells: Vec<((usize, usize), (usize, usize))> = pairs
        .iter()
        .map(|p| {
            (
                field_indices(cfg, p.s, p.beta),
                field_indices(cfg, p.t, p.alpha),
            )
        })
        .collect();
    let draws = replicate(&gen, cfg.seed, cfg.n, 0, cfg.replications, |batch| {
        let field = quantile_field(batch, &cfg.levels, &tau)?;
        Ok(cells
            .iter()
            .map(|&((i, k), (j, l))| (field.w_n(i, k), field.w_n(j, l)))
            .collect::<Vec<_>>())
    })?;
    let mut report = Report::new(cfg.experiment.name());
    for (idx, p) in pairs.iter().enumerate() {
        let x: Vec<f64> = draws.iter().map(|d| d[idx].0).collect();
        let y: Vec<f64> = draws.iter().map(|d| d[idx].1).collect();
        let (est, se) = covariance_with_se(&x, &y)?;
        let analytic = limit_cov_quantile(&law, p.s, p.beta, p.t, p.alpha)?;
        report.rows.push(ReportRow::z_test(
            *p,
            cfg.n,
            cfg.replications,
            est,
            se,
            analytic,
            cfg.z_max,
        ));
    }
    report.notes.push(format!(
        "process {}; jackknife standard errors; z_max {}",
        cfg.spec.describe(),
        cfg.z_max
    ));
    Ok(report)
}

/// Marginal law used for variance targets: closed form when available, otherwise a
/// convolution of the shift density with a large empirical sample of the base process.
fn variance_law(
    cfg: &ExperimentConfig,
    times: &[f64],
    reference_n: usize,
) -> Result<(MarginalLaw, Option<String>)> {
    if let Some(law) = cfg.spec.marginal_law()? {
        return Ok((law, None));
    }
    let (base, z) = match &cfg.spec {
        ProcessSpec::Shifted { base, shift } if shift.has_regular_density() => (base, *shift),
        other => {
            return Err(Error::Unsupported(format!(
                "{} has atoms or no density; add an independent shift with a smooth density",
                other.describe()
            )))
        }
    };
    let mut pts: Vec<f64> = times.to_vec();
    pts.push(0.0);
    pts.sort_by(f64::total_cmp);
    pts.dedup();
    if pts.len() < 2 {
        pts.push(cfg.grid.horizon().max(1.0));
    }
    let grid = TimeGrid::new(pts)?;
    let batch = base.generate(
        &line_domain(&grid),
        reference_n,
        SeedInfo::new(cfg.seed).with_tag(StreamTag::Reference),
    )?;
    let samples: Vec<Arc<[f64]>> = (0..grid.len())
        .map(|j| Arc::from(batch.column(j).into_boxed_slice()))
        .collect();
    let reference = ReferenceSamples::new(grid.points().to_vec(), samples)?;
    let note = format!("empirical reference of {reference_n} base paths convolved with {z:?}");
    Ok((
        MarginalLaw::Convolved {
            base: ConvolvedBase::Reference(reference),
            z,
        },
        Some(note),
    ))
}

/// Variances of `W_n(t, alpha)` versus `(alpha - alpha^2) / f(t, tau_alpha(t))^2`.
pub fn run_marginal_variance(cfg: &ExperimentConfig) -> Result<Report> {
    cfg.validate()?;
    let Experiment::MarginalVariance {
        points,
        reference_n,
    } = &cfg.experiment
    else {
        return Err(Error::Config(
            "marginal_variance needs a list of points".into(),
        ));
    };
    let times: Vec<f64> = points.iter().map(|p| p.0).collect();
    let (law, note) = variance_law(cfg, &times, *reference_n)?;
    let mut targets = Vec::with_capacity(points.len());
    let mut tau_cells = Vec::with_capacity(points.len());
    for &(t, a) in points {
        let m = law.at(t)?;
        if m.is_degenerate() {
            targets.push(0.0);
            tau_cells.push(m.quantile(a)?);
        } else {
            let q = m.quantile(a)?;
            let f = m.density(q)?;
            targets.push((a - a * a) / (f * f));
            tau_cells.push(q);
        }
    }
    let gen = cfg.spec.prepare(&line_domain(&cfg.grid))?;
    let cols: Vec<(usize, f64)> = points
        .iter()
        .map(|&(t, a)| (cfg.grid.index_of(t).expect("validated grid point"), a))
        .collect();
    let root_n = (cfg.n as f64).sqrt();
    let draws = replicate(&gen, cfg.seed, cfg.n, 0, cfg.replications, |batch| {
        Ok(cols
            .iter()
            .zip(&tau_cells)
            .map(|(&(j, a), &tau)| root_n * (quantile_sorted(&sorted(&batch.column(j)), a) - tau))
            .collect::<Vec<_>>())
    })?;
    let mut report = Report::new(cfg.experiment.name());
    for (idx, &(t, a)) in points.iter().enumerate() {
        let x: Vec<f64> = draws.iter().map(|d| d[idx]).collect();
        let (est, se) = covariance_with_se(&x, &x)?;
        report.rows.push(ReportRow::z_test(
            Pair::diagonal(t, a),
            cfg.n,
            cfg.replications,
            est,
            se,
            targets[idx],
            cfg.z_max,
        ));
    }
    report
        .notes
        .push(format!("process {}", cfg.spec.describe()));
    report.notes.extend(note);
    Ok(report)
}

/// Exceedance probabilities of `sup_{[0, delta] x A} |W_n| > epsilon` for shrinking `delta`.
pub fn run_sup_near_zero(cfg: &ExperimentConfig) -> Result<Report> {
    cfg.validate()?;
    let Experiment::SupNearZero {
        deltas,
        n_values,
        epsilon,
        max_prob,
    } = &cfg.experiment
    else {
        return Err(Error::Config(
            "sup_near_zero needs deltas and n_values".into(),
        ));
    };
    let law = closed_form_law(&cfg.spec, "true quantiles")?;
    let mut deltas = deltas.clone();
    deltas.sort_by(|a, b| b.total_cmp(a));
    deltas.dedup();
    let reach = deltas[0];
    let pts: Vec<f64> = cfg
        .grid
        .points()
        .iter()
        .copied()
        .filter(|&t| t <= reach)
        .collect();
    let grid = if pts.len() >= 2 {
        TimeGrid::new(pts)?
    } else {
        cfg.grid.clone()
    };
    let tau = true_quantiles(&law, &grid, &cfg.levels)?;
    let gen = cfg.spec.prepare(&line_domain(&grid))?;
    let (a, b) = cfg.levels.bounds();
    let r = cfg.replications;
    let mut report = Report::new(cfg.experiment.name());
    for (ni, &n) in n_values.iter().enumerate() {
        let sups = replicate(&gen, cfg.seed, n, ni * r, r, |batch| {
            let field = quantile_field(batch, &cfg.levels, &tau)?;
            Ok(deltas
                .iter()
                .map(|&d| sup_up_to(&field, &grid, d))
                .collect::<Vec<f64>>())
        })?;
        let mut previous: Option<f64> = None;
        let mut needed = None;
        for (di, &d) in deltas.iter().enumerate() {
            let hits = sups.iter().filter(|s| s[di] > *epsilon).count();
            let p = hits as f64 / r as f64;
            let se = (p * (1.0 - p) / r as f64).sqrt();
            let pair = Pair::new(0.0, a, d, b);
            let last = di + 1 == deltas.len();
            let row = match (previous, last) {
                (None, false) => ReportRow::at_most(pair, n, r, p, se, 1.0).info(),
                (None, true) => ReportRow::at_most(pair, n, r, p, se, *max_prob),
                (Some(prev), false) => ReportRow::at_most(pair, n, r, p, se, prev),
                (Some(prev), true) => ReportRow::at_most(pair, n, r, p, se, prev.min(*max_prob)),
            };
            if p <= *max_prob && needed.is_none() {
                needed = Some(d);
            }
            report.rows.push(row);
            previous = Some(p);
        }
        report.notes.push(match needed {
            Some(d) => format!("n={n}: largest delta with exceedance <= {max_prob} is {d}"),
            None => format!("n={n}: no delta reached exceedance <= {max_prob}"),
        });
    }
    report.notes.push(format!(
        "epsilon {epsilon}; levels [{a}, {b}]; process {}",
        cfg.spec.describe()
    ));
    Ok(report)
}

fn sup_up_to(field: &QuantileField, grid: &TimeGrid, delta: f64) -> f64 {
    let k = field.levels().len();
    grid.indices_in(0.0, delta)
        .iter()
        .flat_map(|&i| (0..k).map(move |l| (i, l)))
        .map(|(i, l)| field.w_n(i, l).abs())
        .fold(0.0, f64::max)
}

/// Two-sample KS comparison of `W_n(c t, alpha)` with `c^p W_n(t, alpha)`.
pub fn run_scaling_law(cfg: &ExperimentConfig) -> Result<Report> {
    cfg.validate()?;
    let Experiment::ScalingLaw {
        scale,
        points,
        exponent,
        ks_level,
    } = &cfg.experiment
    else {
        return Err(Error::Config("scaling_law needs a scale and points".into()));
    };
    let p = exponent
        .or_else(|| cfg.spec.scaling_exponent())
        .expect("validated exponent");
    let law = closed_form_law(&cfg.spec, "true quantiles")?;
    let tau = true_quantiles(&law, &cfg.grid, &cfg.levels)?;
    let gen = cfg.spec.prepare(&line_domain(&cfg.grid))?;
    let r = cfg.replications;
    let cells: Vec<((usize, usize), (usize, usize))> = points
        .iter()
        .map(|&(t, a)| (field_indices(cfg, scale * t, a), field_indices(cfg, t, a)))
        .collect();
    let collect = |first: usize| {
        replicate(&gen, cfg.seed, cfg.n, first, r, |batch| {
            let field = quantile_field(batch, &cfg.levels, &tau)?;
            Ok(cells
                .iter()
                .map(|&((i, k), (j, l))| (field.w_n(i, k), field.w_n(j, l)))
                .collect::<Vec<_>>())
        })
    };
    let stretched = collect(0)?;
    let base = collect(r)?;
    let crit = ks_critical(*ks_level, r, r);
    let factor = scale.powf(p);
    let mut report = Report::new(cfg.experiment.name());
    for (idx, &(t, a)) in points.iter().enumerate() {
        let xa: Vec<f64> = stretched.iter().map(|d| d[idx].0).collect();
        let xb: Vec<f64> = base.iter().map(|d| factor * d[idx].1).collect();
        let d = ks_two_sample(&xa, &xb);
        report.rows.push(ReportRow::at_most(
            Pair::new(t, a, scale * t, a),
            cfg.n,
            r,
            d,
            f64::NAN,
            crit,
        ));
    }
    report.notes.push(format!(
        "KS statistic vs critical value at level {ks_level}; scale {scale}; exponent {p}; process {}",
        cfg.spec.describe()
    ));
    Ok(report)
}

/// `|sqrt(n)(tau_n - tau) f + sqrt(n)(F_n(tau) - alpha)|` for one sample at one level.
pub fn bahadur_residual_point(values: &[f64], tau: f64, density: f64, alpha: f64) -> Result<f64> {
    if values.is_empty() {
        return Err(Error::Empty("residual of an empty sample"));
    }
    let col = sorted(values);
    Ok(residual_sorted(&col, tau, density, alpha))
}

fn residual_sorted(col: &[f64], tau: f64, density: f64, alpha: f64) -> f64 {
    let n = col.len() as f64;
    let root_n = n.sqrt();
    let tau_n = quantile_sorted(col, alpha);
    let below = col.partition_point(|&v| v <= tau) as f64;
    (root_n * (tau_n - tau) * density + root_n * (below / n - alpha)).abs()
}

/// Median sup-residual of the linearization `W_n f + nu_n` along an increasing ladder of `n`.
pub fn run_bahadur_residual(cfg: &ExperimentConfig) -> Result<Report> {
    cfg.validate()?;
    let Experiment::BahadurResidual {
        n_ladder,
        t_range,
        decay,
    } = &cfg.experiment
    else {
        return Err(Error::Config("bahadur_residual needs an n ladder".into()));
    };
    let law = closed_form_law(&cfg.spec, "true quantiles and densities")?;
    let cols = cfg.grid.indices_in(t_range.0, t_range.1);
    let mut cells = Vec::new();
    for &j in &cols {
        let m: Marginal = law.at(cfg.grid.points()[j])?;
        if m.is_degenerate() {
            continue;
        }
        for &a in cfg.levels.levels() {
            let q = m.quantile(a)?;
            cells.push((j, a, q, m.density(q)?));
        }
    }
    if cells.is_empty() {
        return Err(Error::Empty(
            "no nondegenerate grid point in the residual range",
        ));
    }
    let gen = cfg.spec.prepare(&line_domain(&cfg.grid))?;
    let r = cfg.replications;
    let mut medians = Vec::with_capacity(n_ladder.len());
    for (ni, &n) in n_ladder.iter().enumerate() {
        let res = replicate(&gen, cfg.seed, n, ni * r, r, |batch| {
            let mut worst: f64 = 0.0;
            let mut current = usize::MAX;
            let mut col = Vec::new();
            for &(j, a, q, f) in &cells {
                if j != current {
                    col = sorted(&batch.column(j));
                    current = j;
                }
                worst = worst.max(residual_sorted(&col, q, f, a));
            }
            Ok(worst)
        })?;
        medians.push(median(&res));
    }
    let (a, b) = cfg.levels.bounds();
    let mut report = Report::new(cfg.experiment.name());
    let bound = decay * medians[0];
    for (ni, (&n, &med)) in n_ladder.iter().zip(&medians).enumerate() {
        let pair = Pair::new(t_range.0, a, t_range.1, b);
        let row = ReportRow::at_most(pair, n, r, med, f64::NAN, bound);
        report.rows.push(if ni + 1 == n_ladder.len() {
            row
        } else {
            row.info()
        });
    }
    report.notes.push(format!(
        "median sup residual; the last rung must not exceed {decay} x the first (engineering threshold, no rate is known)"
    ));
    Ok(report)
}
