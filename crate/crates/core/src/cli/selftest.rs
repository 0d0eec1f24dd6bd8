//! Built-in self-test: the identity suite plus analytic oracle checks.

use std::f64::consts::PI;

use sha2::{Digest, Sha256};

use crate::analytic::{
    limit_cov_quantile, normal, GaussianFamily, LimitLaw, MarginalLaw, StableLaw,
};
use crate::error::Result;
use crate::grid::{LevelGrid, TimeGrid};
use crate::harness::{run_identity_suite, Experiment, ExperimentConfig, DEFAULT_VERVAAT_TOL};
use crate::process::ProcessSpec;

/// Debug hook: naming a check here perturbs its computed values.
pub const CORRUPT_ENV: &str = "QUANTCLT_SELFTEST_CORRUPT";
pub const DEFAULT_SELFTEST_SEED: u64 = 20240611;
pub const SELFTEST_INSTANCES: usize = 10_000;

const IDENTITY_NAMES: [&str; 5] = [
    "generalized inverse",
    "order-statistic stability",
    "order-statistic Lipschitz",
    "quantile reflection",
    "inverse identity",
];

/// One named check: passes when `max_err <= tol`.
#[derive(Debug, Clone, PartialEq)]
pub struct Check {
    pub name: String,
    pub max_err: f64,
    pub tol: f64,
}

impl Check {
    pub fn passed(&self) -> bool {
        self.max_err <= self.tol
    }

    pub fn line(&self) -> String {
        format!(
            "{:<4} {:<32} max_err={:.3e} tol={:.1e}",
            if self.passed() { "pass" } else { "FAIL" },
            self.name,
            self.max_err,
            self.tol
        )
    }
}

fn max_err<I>(pairs: I) -> Result<f64>
where
    I: IntoIterator<Item = Result<(f64, f64)>>,
{
    let mut worst: f64 = 0.0;
    for p in pairs {
        let (got, want) = p?;
        let e = (got - want).abs();
        worst = if e.is_nan() { f64::NAN } else { worst.max(e) };
    }
    Ok(worst)
}

fn lattice(lo: f64, hi: f64, k: usize) -> Vec<f64> {
    (0..k)
        .map(|i| lo + (hi - lo) * i as f64 / (k - 1) as f64)
        .collect()
}

fn cauchy_pdf(x: f64) -> f64 {
    1.0 / (PI * (1.0 + x * x))
}

fn cauchy_cdf(x: f64) -> f64 {
    0.5 + x.atan() / PI
}

fn cauchy_quantile(a: f64) -> f64 {
    (PI * (a - 0.5)).tan()
}

/// Run every check. `corrupt` names a check whose computed values are perturbed.
pub fn run_checks(seed: u64, corrupt: Option<&str>) -> Result<Vec<Check>> {
    let bump = |name: &str| if corrupt == Some(name) { 1e-6 } else { 0.0 };
    let mut checks = Vec::new();

    let cfg = ExperimentConfig::new(
        ProcessSpec::brownian(),
        TimeGrid::uniform(1.0, 1)?,
        LevelGrid::from_levels(vec![0.5])?,
        2,
        1,
        seed,
        Experiment::IdentitySuite {
            instances: SELFTEST_INSTANCES,
            vervaat_tol: DEFAULT_VERVAAT_TOL,
        },
    );
    let rep = run_identity_suite(&cfg)?;
    for (row, name) in rep.rows.iter().zip(IDENTITY_NAMES) {
        checks.push(Check {
            name: name.to_string(),
            max_err: row.estimate,
            tol: row.analytic,
        });
    }

    let bm = StableLaw::new(2.0, 0.5)?;
    let cauchy = StableLaw::cauchy();
    let xs = lattice(-10.0, 10.0, 201);
    let alphas = lattice(0.05, 0.95, 19);

    let d = bump("stable_density oracle");
    let err = max_err(xs.iter().flat_map(|&x| {
        [
            bm.density(1.0, x).map(|v| (v + d, normal::pdf(x))),
            cauchy.density(1.0, x).map(|v| (v + d, cauchy_pdf(x))),
        ]
    }))?;
    checks.push(Check {
        name: "stable_density oracle".into(),
        max_err: err,
        tol: 1e-8,
    });

    let d = bump("stable_cdf oracle");
    let err = max_err(xs.iter().flat_map(|&x| {
        [
            bm.cdf(1.0, x).map(|v| (v + d, normal::cdf(x))),
            cauchy.cdf(1.0, x).map(|v| (v + d, cauchy_cdf(x))),
        ]
    }))?;
    checks.push(Check {
        name: "stable_cdf oracle".into(),
        max_err: err,
        tol: 1e-8,
    });

    let d = bump("true_quantile oracle");
    let err = max_err(alphas.iter().flat_map(|&a| {
        [
            bm.quantile(1.0, a).map(|v| (v + d, normal::quantile(a))),
            cauchy.quantile(1.0, a).map(|v| (v + d, cauchy_quantile(a))),
        ]
    }))?;
    checks.push(Check {
        name: "true_quantile oracle".into(),
        max_err: err,
        tol: 1e-8,
    });

    let d = bump("time scaling oracle");
    let mut err: f64 = 0.0;
    for t in [0.05f64, 0.3, 1.7, 6.0] {
        let sd = t.sqrt();
        err = err.max(max_err(xs.iter().step_by(10).flat_map(|&x| {
            [
                bm.density(t, x).map(|v| (v + d, normal::pdf(x / sd) / sd)),
                cauchy.density(t, x).map(|v| (v + d, cauchy_pdf(x / t) / t)),
            ]
        }))?);
        err = err.max(max_err(alphas.iter().flat_map(|&a| {
            [
                bm.quantile(t, a).map(|v| (v + d, sd * normal::quantile(a))),
                cauchy
                    .quantile(t, a)
                    .map(|v| (v + d, t * cauchy_quantile(a))),
            ]
        }))?);
    }
    checks.push(Check {
        name: "time scaling oracle".into(),
        max_err: err,
        tol: 1e-8,
    });

    let d = bump("median covariance oracle");
    let law = MarginalLaw::SymStable(bm.clone());
    let err = max_err([
        limit_cov_quantile(&law, 1.0, 0.5, 1.0, 0.5).map(|v| (v + d, PI / 2.0)),
        limit_cov_quantile(&law, 0.5, 0.5, 1.0, 0.5)
            .map(|v| (v + d, 0.5f64.sqrt() * 0.5f64.sqrt().asin())),
        limit_cov_quantile(&law, 0.0, 0.5, 1.0, 0.5).map(|v| (v + d, 0.0)),
    ])?;
    checks.push(Check {
        name: "median covariance oracle".into(),
        max_err: err,
        tol: 1e-8,
    });

    let d = bump("joint probability cross-check");
    let gauss = GaussianFamily::fbm(0.5)?;
    let err = max_err(
        [
            (0.25, -0.4, 1.0, 0.3),
            (0.5, 0.0, 1.0, 0.0),
            (0.7, 0.9, 0.9, -0.2),
        ]
        .iter()
        .map(|&(s, x, t, y)| {
            Ok((
                LimitLaw::joint_cdf(&bm, s, x, t, y)? + d,
                gauss.joint_cdf(s, x, t, y)?,
            ))
        }),
    )?;
    checks.push(Check {
        name: "joint probability cross-check".into(),
        max_err: err,
        tol: 1e-6,
    });
    Ok(checks)
}

/// Lowercase hex SHA-256 of the newline-joined summary lines.
pub fn summary_hash(lines: &[String]) -> String {
    let mut h = Sha256::new();
    for l in lines {
        h.update(l.as_bytes());
        h.update(b"\n");
    }
    h.finalize().iter().map(|b| format!("{b:02x}")).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn corruption_is_detected_and_named() {
        let checks = run_checks(1, Some("stable_density oracle")).unwrap();
        let first = checks.iter().find(|c| !c.passed()).unwrap();
        assert_eq!(first.name, "stable_density oracle");
        assert_eq!(checks.iter().filter(|c| !c.passed()).count(), 1);
    }
}
