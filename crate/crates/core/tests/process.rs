use quantclt::dist::Dist1D;
use quantclt::grid::{TimeGrid, TimeGrid2D};
use quantclt::process::{
    add_shift, gen_brownian_sheet, gen_compound_poisson, gen_fbm, gen_sym_stable, line_domain,
    PathBatch, ProcessSpec,
};
use quantclt::rng::SeedInfo;
use quantclt::stats::{ks_critical, ks_two_sample};

const N: usize = 20_000;

fn fbm_kernel(gamma: f64, s: f64, t: f64) -> f64 {
    0.5 * (s.powf(2.0 * gamma) + t.powf(2.0 * gamma) - (s - t).abs().powf(2.0 * gamma))
}

// Second moment about the known zero mean, with the Gaussian SE sqrt((K_ii K_jj + K_ij^2) / n).
fn moment_z(batch: &PathBatch, i: usize, j: usize, kii: f64, kjj: f64, kij: f64) -> f64 {
    let n = batch.n() as f64;
    let est = batch.rows().map(|r| r[i] * r[j]).sum::<f64>() / n;
    let se = ((kii * kjj + kij * kij) / n).sqrt();
    (est - kij) / se
}

#[test]
fn brownian_fbm_variance_is_t() {
    let grid = TimeGrid::uniform(1.0, 10).unwrap();
    let b = gen_fbm(&grid, 0.5, N, SeedInfo::new(11)).unwrap();
    for (j, &t) in grid.points().iter().enumerate().skip(1) {
        let z = moment_z(&b, j, j, t, t, t);
        assert!(z.abs() < 4.0, "t={t} z={z}");
    }
    assert!(b.column(0).iter().all(|&v| v == 0.0));
}

#[test]
fn fbm_cross_covariance() {
    let grid = TimeGrid::new(vec![0.0, 0.5, 1.0]).unwrap();
    let b = gen_fbm(&grid, 0.75, N, SeedInfo::new(12)).unwrap();
    let k = |s, t| fbm_kernel(0.75, s, t);
    assert!((k(0.5, 1.0) - 0.5).abs() < 1e-15);
    let z = moment_z(&b, 1, 2, k(0.5, 0.5), k(1.0, 1.0), k(0.5, 1.0));
    assert!(z.abs() < 4.0, "z={z}");
}

#[test]
fn gaussian_covariance_matrices_converge() {
    let grid = TimeGrid::new(vec![0.0, 0.1, 0.25, 0.4, 0.6, 0.75, 0.9, 1.0]).unwrap();
    let t = grid.points();
    for &gamma in &[0.3, 0.5, 0.8] {
        let b = gen_fbm(&grid, gamma, N, SeedInfo::new(13)).unwrap();
        for i in 1..t.len() {
            for j in i..t.len() {
                let k = |a, b| fbm_kernel(gamma, a, b);
                let z = moment_z(&b, i, j, k(t[i], t[i]), k(t[j], t[j]), k(t[i], t[j]));
                assert!(z.abs() <= 5.0, "gamma={gamma} ({i},{j}) z={z}");
            }
        }
    }
    let sheet = TimeGrid2D::new(vec![0.0, 0.5, 1.0], vec![0.0, 0.3, 1.0]).unwrap();
    let b = gen_brownian_sheet(&sheet, N, SeedInfo::new(14)).unwrap();
    let k = |p: (f64, f64), q: (f64, f64)| p.0.min(q.0) * p.1.min(q.1);
    for i in 0..sheet.len() {
        for j in i..sheet.len() {
            let (p, q) = (sheet.point(i), sheet.point(j));
            if k(p, p) == 0.0 || k(q, q) == 0.0 {
                continue;
            }
            let z = moment_z(&b, i, j, k(p, p), k(q, q), k(p, q));
            assert!(z.abs() <= 5.0, "sheet ({i},{j}) z={z}");
        }
    }
}

#[test]
fn brownian_sheet_values() {
    let sheet = TimeGrid2D::new(vec![0.0, 0.5, 1.0], vec![0.0, 0.5, 1.0]).unwrap();
    let b = gen_brownian_sheet(&sheet, N, SeedInfo::new(15)).unwrap();
    let one = sheet.flat_index(2, 2);
    assert!(moment_z(&b, one, one, 1.0, 1.0, 1.0).abs() < 4.0);
    let p = sheet.flat_index(1, 2);
    let q = sheet.flat_index(2, 1);
    assert!(moment_z(&b, p, q, 0.5, 0.5, 0.25).abs() < 4.0);
    for i in 0..3 {
        assert!(b.column(sheet.flat_index(0, i)).iter().all(|&v| v == 0.0));
        assert!(b.column(sheet.flat_index(i, 0)).iter().all(|&v| v == 0.0));
    }
}

#[test]
fn stable_brownian_case_has_unit_variance() {
    let grid = TimeGrid::uniform(1.0, 4).unwrap();
    let b = gen_sym_stable(&grid, 2.0, 0.5, N, SeedInfo::new(16)).unwrap();
    assert!(moment_z(&b, 4, 4, 1.0, 1.0, 1.0).abs() < 4.0);
    assert!(moment_z(&b, 2, 4, 0.5, 1.0, 0.5).abs() < 4.0);
}

#[test]
fn cauchy_quantiles() {
    let grid = TimeGrid::uniform(1.0, 4).unwrap();
    let b = gen_sym_stable(&grid, 1.0, 1.0, N, SeedInfo::new(17)).unwrap();
    let mut x = b.column(4);
    x.sort_unstable_by(f64::total_cmp);
    let n = N as f64;
    for &(alpha, exact) in &[(0.5, 0.0), (0.75, 1.0)] {
        let q = x[(alpha * n).ceil() as usize - 1];
        let f = 1.0 / (std::f64::consts::PI * (1.0 + exact * exact));
        let se = (alpha * (1.0 - alpha) / n).sqrt() / f;
        assert!(((q - exact) / se).abs() < 4.0, "alpha={alpha} q={q}");
    }
    assert!(b.column(0).iter().all(|&v| v == 0.0));
}

#[test]
fn poisson_counts_have_mean_lambda_t() {
    let grid = TimeGrid::uniform(2.0, 5).unwrap();
    let lambda = 1.7;
    let b = gen_compound_poisson(
        &grid,
        lambda,
        &Dist1D::Constant { value: 1.0 },
        N,
        SeedInfo::new(18),
    )
    .unwrap();
    let counts = b.column(grid.len() - 1);
    let mean = counts.iter().sum::<f64>() / N as f64;
    let se = (lambda * 2.0 / N as f64).sqrt();
    assert!(((mean - lambda * 2.0) / se).abs() < 4.0, "mean={mean}");
    for row in b.rows() {
        assert_eq!(row[0], 0.0);
        assert!(row.windows(2).all(|w| w[0] <= w[1]));
    }
}

#[test]
fn compound_poisson_is_piecewise_constant_in_time() {
    let fine = TimeGrid::uniform(1.0, 400).unwrap();
    let b = gen_compound_poisson(
        &fine,
        2.0,
        &Dist1D::standard_normal(),
        200,
        SeedInfo::new(19),
    )
    .unwrap();
    let changes: usize = b
        .rows()
        .map(|r| r.windows(2).filter(|w| w[0] != w[1]).count())
        .sum();
    let se = (2.0 * 200.0f64).sqrt();
    assert!(
        ((changes as f64 - 400.0) / se).abs() < 4.0,
        "changes={changes}"
    );
}

#[test]
fn shifts() {
    let grid = TimeGrid::uniform(1.0, 4).unwrap();
    let zero = PathBatch::from_paths(&grid, &vec![vec![0.0; 5]; 50]).unwrap();
    let shifted = add_shift(&zero, &Dist1D::standard_normal(), SeedInfo::new(3)).unwrap();
    for row in shifted.rows() {
        assert!(row.iter().all(|&v| v == row[0]));
    }
    assert!(zero.values().iter().all(|&v| v == 0.0));

    let gamma = 0.3;
    let spec = ProcessSpec::Fbm { gamma }.shifted(Dist1D::standard_normal());
    let b = spec
        .generate(&line_domain(&grid), N, SeedInfo::new(20))
        .unwrap();
    for (j, &t) in grid.points().iter().enumerate() {
        let v = t.powf(2.0 * gamma) + 1.0;
        let z = moment_z(&b, j, j, v, v, v);
        assert!(z.abs() < 4.0, "t={t} z={z}");
    }
}

#[test]
fn generation_ignores_worker_count() {
    let grid = TimeGrid::uniform(1.0, 16).unwrap();
    let specs = [
        ProcessSpec::Fbm { gamma: 0.7 },
        ProcessSpec::SymStable { r: 1.3, c: 0.8 },
        ProcessSpec::CompoundPoisson {
            lambda: 3.0,
            jump: Dist1D::Laplace {
                loc: 0.0,
                scale: 1.0,
            },
        },
        ProcessSpec::cauchy().shifted(Dist1D::standard_normal()),
    ];
    let run = |threads: usize, spec: &ProcessSpec| {
        rayon::ThreadPoolBuilder::new()
            .num_threads(threads)
            .build()
            .unwrap()
            .install(|| {
                spec.generate(&line_domain(&grid), 3000, SeedInfo::new(21))
                    .unwrap()
            })
    };
    for spec in &specs {
        let a = run(1, spec);
        let b = run(5, spec);
        assert_eq!(a.values(), b.values(), "{spec:?}");
    }
}

// Fraction of repeated runs in which the KS statistic between X(c t) and c^p X(t), under a fixed
// linear functional, stays below the 0.999 critical value.
fn scaling_pass_rate(spec: &ProcessSpec, p: f64, scale: f64, runs: u64) -> f64 {
    let base = TimeGrid::new(vec![0.0, 0.2, 0.5]).unwrap();
    let stretched = TimeGrid::new(base.points().iter().map(|t| scale * t).collect()).unwrap();
    let n = 1000;
    let functional = |row: &[f64]| row[1] - 0.4 * row[2];
    let mut pass = 0;
    for k in 0..runs {
        let seed = SeedInfo::new(22).with_replication(k);
        let a = spec.generate(&line_domain(&stretched), n, seed).unwrap();
        let b = spec
            .generate(&line_domain(&base), n, seed.with_replication(runs + k))
            .unwrap();
        let xa: Vec<f64> = a.rows().map(functional).collect();
        let xb: Vec<f64> = b.rows().map(|r| scale.powf(p) * functional(r)).collect();
        if ks_two_sample(&xa, &xb) < ks_critical(0.001, n, n) {
            pass += 1;
        }
    }
    pass as f64 / runs as f64
}

#[test]
fn scaling_law_in_distribution() {
    for spec in [
        ProcessSpec::SymStable { r: 1.5, c: 1.0 },
        ProcessSpec::cauchy(),
        ProcessSpec::Fbm { gamma: 0.3 },
    ] {
        let p = spec.scaling_exponent().unwrap();
        let rate = scaling_pass_rate(&spec, p, 3.0, 100);
        assert!(rate >= 0.99, "{spec:?} rate={rate}");
    }
    let wrong = scaling_pass_rate(&ProcessSpec::Fbm { gamma: 0.3 }, 0.8, 3.0, 20);
    assert!(wrong < 0.5, "wrong exponent accepted at rate {wrong}");
}
