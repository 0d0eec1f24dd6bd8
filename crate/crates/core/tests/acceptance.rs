use std::f64::consts::PI;
use std::path::{Path, PathBuf};
use std::process::Command;
use std::time::Instant;

use quantclt::analytic::{
    limit_cov_quantile, stable_cdf, stable_density, true_quantile, GaussianFamily, LimitLaw,
    MarginalLaw, StableLaw,
};
use quantclt::grid::{LevelGrid, TimeGrid};
use quantclt::harness::{
    run, Experiment, ExperimentConfig, Pair, Report, ReportRow, Verdict, DEFAULT_VERVAAT_TOL,
};
use quantclt::process::ProcessSpec;

type Outcome = Result<(bool, String), String>;
type Criterion = (&'static str, fn() -> Outcome);

fn normal_pdf(x: f64) -> f64 {
    (-0.5 * x * x).exp() / (2.0 * PI).sqrt()
}

fn normal_cdf(x: f64) -> f64 {
    0.5 * libm::erfc(-x / 2f64.sqrt())
}

fn normal_quantile(p: f64) -> f64 {
    let (mut lo, mut hi) = (-40.0f64, 40.0f64);
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if normal_cdf(mid) < p {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    0.5 * (lo + hi)
}

/// `P(X <= h, Y <= k)` for a standard bivariate normal with correlation `rho`, by
/// conditioning on `X` and integrating with composite Simpson.
fn bvn(h: f64, k: f64, rho: f64) -> f64 {
    if rho >= 1.0 {
        return normal_cdf(h.min(k));
    }
    let sd = (1.0 - rho * rho).sqrt();
    let lo = -12.0f64;
    let m = 20_000;
    let step = (h - lo) / m as f64;
    let g = |x: f64| normal_pdf(x) * normal_cdf((k - rho * x) / sd);
    let mut s = g(lo) + g(h);
    for i in 1..m {
        let w = if i % 2 == 1 { 4.0 } else { 2.0 };
        s += w * g(lo + step * i as f64);
    }
    s * step / 3.0
}

fn lattice(lo: f64, hi: f64, k: usize) -> Vec<f64> {
    (0..k)
        .map(|i| lo + (hi - lo) * i as f64 / (k - 1) as f64)
        .collect()
}

/// 16-point Gauss-Legendre nodes and weights on [-1, 1], by Newton on P_16.
fn gauss_legendre() -> Vec<(f64, f64)> {
    let n = 16;
    (1..=n)
        .map(|i| {
            let mut x = (PI * (i as f64 - 0.25) / (n as f64 + 0.5)).cos();
            let mut dp = 0.0;
            for _ in 0..100 {
                let (mut p0, mut p1) = (1.0, x);
                for k in 2..=n {
                    let p2 = ((2 * k - 1) as f64 * x * p1 - (k - 1) as f64 * p0) / k as f64;
                    p0 = p1;
                    p1 = p2;
                }
                dp = n as f64 * (x * p1 - p0) / (x * x - 1.0);
                let dx = p1 / dp;
                x -= dx;
                if dx.abs() < 1e-16 {
                    break;
                }
            }
            (x, 2.0 / ((1.0 - x * x) * dp * dp))
        })
        .collect()
}

/// `∫_0^U g(u) du` for the characteristic-function integrands: panels grow
/// geometrically away from 0, where `exp(-c t u^r)` is not smooth, and stay no
/// wider than a quarter period of the trigonometric factor.
fn charfn_integral(rule: &[(f64, f64)], r: f64, ct: f64, x: f64, g: &dyn Fn(f64) -> f64) -> f64 {
    let upper = (40.0 / ct).powf(1.0 / r);
    let first = upper.min(1.0) / 8.0;
    let mut edges: Vec<f64> = (0..60).rev().map(|k| first * 0.5f64.powi(k)).collect();
    edges.insert(0, 0.0);
    let width = (0.5 * PI / x.abs().max(1e-9)).min(upper / 64.0);
    let mut e = first;
    while e < upper {
        e = (e + width).min(2.0 * e).min(upper);
        edges.push(e);
    }
    edges
        .windows(2)
        .map(|w| {
            let (mid, half) = (0.5 * (w[0] + w[1]), 0.5 * (w[1] - w[0]));
            rule.iter()
                .map(|&(z, wt)| wt * g(mid + half * z))
                .sum::<f64>()
                * half
        })
        .sum()
}

fn charfn_density(rule: &[(f64, f64)], r: f64, c: f64, t: f64, x: f64) -> f64 {
    let ct = c * t;
    charfn_integral(rule, r, ct, x, &|u| (-ct * u.powf(r)).exp() * (x * u).cos()) / PI
}

fn charfn_cdf(rule: &[(f64, f64)], r: f64, c: f64, t: f64, x: f64) -> f64 {
    let ct = c * t;
    let sinc = |u: f64| if u == 0.0 { x } else { (x * u).sin() / u };
    0.5 + charfn_integral(rule, r, ct, x, &|u| (-ct * u.powf(r)).exp() * sinc(u)) / PI
}

fn config(
    spec: ProcessSpec,
    grid: Vec<f64>,
    levels: Vec<f64>,
    n: usize,
    r: usize,
    seed: u64,
    experiment: Experiment,
) -> ExperimentConfig {
    ExperimentConfig::new(
        spec,
        TimeGrid::new(grid).expect("grid"),
        LevelGrid::from_levels(levels).expect("levels"),
        n,
        r,
        seed,
        experiment,
    )
}

fn run_report(cfg: &ExperimentConfig) -> Result<Report, String> {
    run(cfg, None).map_err(|e| e.to_string())
}

/// Recompute `|z| <= 3` against an oracle target from the stored estimate and SE.
fn within_3se(row: &ReportRow, oracle: f64) -> (bool, f64) {
    let z = (row.estimate - oracle) / row.se;
    (z.abs() <= 3.0 && (row.analytic - oracle).abs() <= 1e-8, z)
}

fn identity_suite() -> Outcome {
    let start = Instant::now();
    let cfg = config(
        ProcessSpec::brownian(),
        vec![0.0, 1.0],
        vec![0.5],
        2,
        1,
        1001,
        Experiment::IdentitySuite {
            instances: 10_000,
            vervaat_tol: DEFAULT_VERVAAT_TOL,
        },
    );
    let rep = run_report(&cfg)?;
    let secs = start.elapsed().as_secs_f64();
    let failures: f64 = rep.rows[..4].iter().map(|r| r.estimate).sum();
    let vervaat = rep.rows[4].estimate;
    let ok = rep.rows.len() == 5
        && rep.rows.iter().all(|r| r.n == 10_000)
        && failures == 0.0
        && vervaat <= 1e-9
        && secs < 30.0;
    Ok((
        ok,
        format!("10000 instances, {failures} failures, max inverse-identity gap {vervaat:.2e}, {secs:.1}s"),
    ))
}

fn analytic_oracles() -> Outcome {
    let start = Instant::now();
    let xs = lattice(-10.0, 10.0, 401);
    let alphas = lattice(0.05, 0.95, 91);
    let bm = MarginalLaw::SymStable(StableLaw::new(2.0, 0.5).map_err(|e| e.to_string())?);
    let cauchy = MarginalLaw::SymStable(StableLaw::new(1.0, 1.0).map_err(|e| e.to_string())?);
    let mut worst: f64 = 0.0;
    for &x in &xs {
        let got = [
            stable_density(2.0, 0.5, 1.0, x),
            stable_cdf(2.0, 0.5, 1.0, x),
            stable_density(1.0, 1.0, 1.0, x),
            stable_cdf(1.0, 1.0, 1.0, x),
        ];
        let want = [
            normal_pdf(x),
            normal_cdf(x),
            1.0 / (PI * (1.0 + x * x)),
            0.5 + x.atan() / PI,
        ];
        for (g, w) in got.into_iter().zip(want) {
            worst = worst.max((g.map_err(|e| e.to_string())? - w).abs());
        }
    }
    for &a in &alphas {
        let g1 = true_quantile(&bm, 1.0, a).map_err(|e| e.to_string())?;
        let g2 = true_quantile(&cauchy, 1.0, a).map_err(|e| e.to_string())?;
        worst = worst.max((g1 - normal_quantile(a)).abs());
        worst = worst.max((g2 - (PI * (a - 0.5)).tan()).abs());
    }
    let secs = start.elapsed().as_secs_f64();
    Ok((
        worst <= 1e-8 && secs < 10.0,
        format!("max error {worst:.2e} over 401 x and 91 levels, {secs:.1}s"),
    ))
}

fn scaling_identities() -> Outcome {
    let rule = gauss_legendre();
    let ts = lattice(0.1, 5.0, 20);
    let xs = lattice(-4.0, 4.0, 20);
    let alphas = lattice(0.05, 0.95, 20);
    let mut q_identity: f64 = 0.0;
    let mut f_identity: f64 = 0.0;
    let mut q_oracle: f64 = 0.0;
    let mut f_oracle: f64 = 0.0;
    for r in [0.9, 1.5] {
        let law = StableLaw::new(r, 1.0).map_err(|e| e.to_string())?;
        for &t in &ts {
            let s = t.powf(1.0 / r);
            for &a in &alphas {
                let q = law.quantile(t, a).map_err(|e| e.to_string())?;
                let q1 = law.quantile(1.0, a).map_err(|e| e.to_string())?;
                q_identity = q_identity.max((q - s * q1).abs());
                let resid = charfn_cdf(&rule, r, 1.0, t, q) - a;
                q_oracle = q_oracle.max((resid / charfn_density(&rule, r, 1.0, t, q)).abs());
            }
            for &x in &xs {
                let f = law.density(t, x).map_err(|e| e.to_string())?;
                let f1 = law.density(1.0, x / s).map_err(|e| e.to_string())?;
                f_identity = f_identity.max((f - f1 / s).abs());
                f_oracle = f_oracle.max((f - charfn_density(&rule, r, 1.0, t, x)).abs());
            }
        }
    }
    let ok = q_identity <= 1e-10 && q_oracle <= 1e-10 && f_identity <= 1e-9 && f_oracle <= 1e-9;
    Ok((
        ok,
        format!(
            "r in {{0.9, 1.5}}, 20x20 lattices: quantile identity {q_identity:.1e}, vs direct inversion at t {q_oracle:.1e}; density identity {f_identity:.1e}, vs direct inversion {f_oracle:.1e}"
        ),
    ))
}

fn single_row(
    spec: ProcessSpec,
    experiment: Experiment,
    grid: Vec<f64>,
    seed: u64,
    oracle: f64,
) -> Outcome {
    let cfg = config(spec, grid, vec![0.5], 500, 5000, seed, experiment);
    let rep = run_report(&cfg)?;
    let row = &rep.rows[0];
    let (ok, z) = within_3se(row, oracle);
    Ok((
        ok && rep.passed(),
        format!(
            "estimate {:.5} +- {:.5} vs {oracle:.5}, z = {z:.2}",
            row.estimate, row.se
        ),
    ))
}

fn brownian_median_variance() -> Outcome {
    single_row(
        ProcessSpec::brownian(),
        Experiment::MarginalVariance {
            points: vec![(1.0, 0.5)],
            reference_n: 2,
        },
        vec![0.0, 0.5, 1.0],
        1004,
        PI / 2.0,
    )
}

fn brownian_median_covariance() -> Outcome {
    single_row(
        ProcessSpec::brownian(),
        Experiment::CovConvergence {
            pairs: vec![Pair::new(0.5, 0.5, 1.0, 0.5)],
        },
        vec![0.0, 0.5, 1.0],
        1005,
        0.5f64.sqrt() * 0.5f64.sqrt().asin(),
    )
}

fn cauchy_median_variance() -> Outcome {
    single_row(
        ProcessSpec::cauchy(),
        Experiment::MarginalVariance {
            points: vec![(1.0, 0.5)],
            reference_n: 2,
        },
        vec![0.0, 0.5, 1.0],
        1006,
        PI * PI / 4.0,
    )
}

fn fbm_cov_oracle(gamma: f64, s: f64, beta: f64, t: f64, alpha: f64) -> f64 {
    let v = |u: f64| u.powf(2.0 * gamma);
    let rho = 0.5 * (v(s) + v(t) - v((t - s).abs())) / (s.powf(gamma) * t.powf(gamma));
    let (zb, za) = (normal_quantile(beta), normal_quantile(alpha));
    s.powf(gamma) * t.powf(gamma) * (bvn(zb, za, rho) - alpha * beta)
        / (normal_pdf(zb) * normal_pdf(za))
}

fn covariance_lattice() -> Outcome {
    let times = [0.25, 0.5, 1.0];
    let levels = [0.25, 0.5, 0.75];
    let pairs: Vec<Pair> = times
        .iter()
        .flat_map(|&s| levels.iter().map(move |&b| Pair::new(s, b, 1.0, 0.5)))
        .collect();
    let mut worst_z: f64 = 0.0;
    let mut all = true;
    for (spec, gamma, seed) in [
        (ProcessSpec::brownian(), 0.5, 1007),
        (ProcessSpec::Fbm { gamma: 0.75 }, 0.75, 1017),
    ] {
        let cfg = config(
            spec,
            times.to_vec(),
            levels.to_vec(),
            500,
            4000,
            seed,
            Experiment::CovConvergence {
                pairs: pairs.clone(),
            },
        );
        let rep = run_report(&cfg)?;
        for (row, p) in rep.rows.iter().zip(&pairs) {
            let oracle = fbm_cov_oracle(gamma, p.s, p.beta, p.t, p.alpha);
            let (ok, z) = within_3se(row, oracle);
            all &= ok && row.verdict == Verdict::Pass;
            worst_z = worst_z.max(z.abs());
        }
    }
    let bm = StableLaw::brownian();
    let gauss = GaussianFamily::fbm(0.5).map_err(|e| e.to_string())?;
    let mut cross: f64 = 0.0;
    for p in &pairs {
        if p.s == p.t {
            continue;
        }
        let a = limit_cov_quantile(&bm, p.s, p.beta, p.t, p.alpha).map_err(|e| e.to_string())?;
        let b = limit_cov_quantile(&gauss, p.s, p.beta, p.t, p.alpha).map_err(|e| e.to_string())?;
        cross = cross.max((a - b).abs());
        let xs = bm.quantile(p.s, p.beta).map_err(|e| e.to_string())?;
        let yt = bm.quantile(p.t, p.alpha).map_err(|e| e.to_string())?;
        let ja = LimitLaw::joint_cdf(&bm, p.s, xs, p.t, yt).map_err(|e| e.to_string())?;
        let jb = gauss
            .joint_cdf(p.s, xs, p.t, yt)
            .map_err(|e| e.to_string())?;
        cross = cross.max((ja - jb).abs());
    }
    Ok((
        all && cross <= 1e-6,
        format!("18 pairs, max |z| {worst_z:.2}; convolution vs bivariate-normal path {cross:.1e}"),
    ))
}

fn near_zero_control() -> Outcome {
    let deltas = vec![0.2, 0.1, 0.05, 0.01];
    let n_values = vec![100, 200, 400];
    let mut all = true;
    let mut worst_last: f64 = 0.0;
    for (spec, seed) in [
        (ProcessSpec::cauchy(), 1008),
        (ProcessSpec::brownian(), 1018),
    ] {
        let cfg = ExperimentConfig::new(
            spec,
            TimeGrid::new(vec![0.0, 0.0025, 0.005, 0.01, 0.025, 0.05, 0.1, 0.15, 0.2])
                .map_err(|e| e.to_string())?,
            LevelGrid::uniform(0.25, 0.75, 11).map_err(|e| e.to_string())?,
            100,
            2000,
            seed,
            Experiment::SupNearZero {
                deltas: deltas.clone(),
                n_values: n_values.clone(),
                epsilon: 1.0,
                max_prob: 0.05,
            },
        );
        let rep = run_report(&cfg)?;
        for block in rep.rows.chunks(deltas.len()) {
            let p: Vec<f64> = block.iter().map(|r| r.estimate).collect();
            all &= p.windows(2).all(|w| w[1] <= w[0]);
            all &= p[p.len() - 1] <= 0.05;
            worst_last = worst_last.max(p[p.len() - 1]);
        }
        all &= rep.rows.len() == deltas.len() * n_values.len() && rep.passed();
    }
    Ok((
        all,
        format!("r in {{1, 2}}, n in {{100, 200, 400}}: nonincreasing in delta, max P at delta=0.01 is {worst_last:.4}"),
    ))
}

fn scaling_law() -> Outcome {
    let reps = 2000;
    let crit = (-(0.0005f64).ln() / 2.0).sqrt() * (2.0 / reps as f64).sqrt();
    let mut worst_true: f64 = 0.0;
    let mut weakest_control = f64::INFINITY;
    let mut ok = true;
    for (spec, p, seed) in [
        (ProcessSpec::brownian(), 0.5, 1009),
        (ProcessSpec::cauchy(), 1.0, 1019),
    ] {
        for (scale, points) in [
            (2.0, vec![(0.25, 0.5), (0.5, 0.25)]),
            (4.0, vec![(0.25, 0.5), (0.25, 0.25)]),
        ] {
            for exponent in [p, p + 0.3] {
                let cfg = config(
                    spec.clone(),
                    vec![0.25, 0.5, 1.0],
                    vec![0.25, 0.5],
                    200,
                    reps,
                    seed,
                    Experiment::ScalingLaw {
                        scale,
                        points: points.clone(),
                        exponent: Some(exponent),
                        ks_level: 0.001,
                    },
                );
                let rep = run_report(&cfg)?;
                ok &= rep.rows.iter().all(|r| (r.analytic - crit).abs() < 1e-12);
                let dmax = rep.rows.iter().map(|r| r.estimate).fold(0.0, f64::max);
                if exponent == p {
                    ok &= dmax < crit;
                    worst_true = worst_true.max(dmax);
                } else if scale == 4.0 {
                    ok &= dmax > crit;
                    weakest_control = weakest_control.min(dmax);
                }
            }
        }
    }
    Ok((
        ok,
        format!("critical {crit:.4}; max KS at true exponent {worst_true:.4}; min KS of p+0.3 control at c=4 {weakest_control:.4}"),
    ))
}

fn bahadur_decay() -> Outcome {
    let cfg = ExperimentConfig::new(
        ProcessSpec::brownian(),
        TimeGrid::uniform(1.0, 10).map_err(|e| e.to_string())?,
        LevelGrid::uniform(0.25, 0.75, 11).map_err(|e| e.to_string())?,
        100,
        400,
        1010,
        Experiment::BahadurResidual {
            n_ladder: vec![100, 400, 1600],
            t_range: (0.1, 1.0),
            decay: 0.8,
        },
    );
    let rep = run_report(&cfg)?;
    let first = rep.rows[0].estimate;
    let last = rep.rows[rep.rows.len() - 1].estimate;
    Ok((
        last <= 0.8 * first && rep.passed(),
        format!(
            "median residual {first:.4} at n=100, {last:.4} at n=1600, ratio {:.3}",
            last / first
        ),
    ))
}

fn workspace_root() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR"))
        .ancestors()
        .nth(2)
        .expect("workspace root")
        .to_path_buf()
}

fn run_cli(
    config: &Path,
    out: &Path,
    threads: &str,
    overrides: &[&str],
) -> Result<Vec<u8>, String> {
    let mut cmd = Command::new(env!("CARGO_BIN_EXE_quantclt"));
    cmd.arg("run")
        .arg("--config")
        .arg(config)
        .arg("--out")
        .arg(out)
        .arg("--threads")
        .arg(threads);
    for o in overrides {
        cmd.arg("--override").arg(o);
    }
    let status = cmd.output().map_err(|e| e.to_string())?.status;
    if !matches!(status.code(), Some(0) | Some(1)) {
        return Err(format!("{} exited with {status}", config.display()));
    }
    std::fs::read(out.join("report.csv")).map_err(|e| e.to_string())
}

fn determinism() -> Outcome {
    let dir = tempfile::tempdir().map_err(|e| e.to_string())?;
    let mut configs: Vec<PathBuf> = std::fs::read_dir(workspace_root().join("configs"))
        .map_err(|e| e.to_string())?
        .filter_map(|e| e.ok().map(|e| e.path()))
        .filter(|p| p.extension().is_some_and(|x| x == "toml"))
        .collect();
    configs.sort();
    let mut same = 0;
    for c in &configs {
        let name = c.file_stem().unwrap().to_string_lossy().to_string();
        let small: &[&str] = if name == "identity" {
            &["instances=2000"]
        } else {
            &["R=40"]
        };
        let a = run_cli(c, &dir.path().join(format!("{name}-1")), "1", small)?;
        let b = run_cli(c, &dir.path().join(format!("{name}-4")), "4", small)?;
        if a == b && !a.is_empty() {
            same += 1;
        }
    }
    Ok((
        !configs.is_empty() && same == configs.len(),
        format!(
            "{same}/{} configs byte-identical at --threads 1 and 4",
            configs.len()
        ),
    ))
}

fn main() {
    let criteria: [Criterion; 11] = [
        ("exact identity suite", identity_suite),
        ("analytic oracles", analytic_oracles),
        (
            "quantile and density scaling identities",
            scaling_identities,
        ),
        ("Brownian median variance", brownian_median_variance),
        ("Brownian median covariance", brownian_median_covariance),
        ("Cauchy median variance", cauchy_median_variance),
        ("general-level covariance lattice", covariance_lattice),
        ("near-zero sup control", near_zero_control),
        ("scaling-law KS check", scaling_law),
        ("Bahadur residual decay", bahadur_decay),
        ("thread-count determinism", determinism),
    ];
    let mut failed = 0;
    for (i, (name, check)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let (ok, detail) = match check() {
            Ok(v) => v,
            Err(e) => (false, format!("error: {e}")),
        };
        if !ok {
            failed += 1;
        }
        println!(
            "{} [{:>2}] {name}: {detail} ({:.1}s)",
            if ok { "PASS" } else { "FAIL" },
            i + 1,
            start.elapsed().as_secs_f64()
        );
    }
    println!(
        "{} of {} criteria passed",
        criteria.len() - failed,
        criteria.len()
    );
    if failed > 0 {
        std::process::exit(1);
    }
}
