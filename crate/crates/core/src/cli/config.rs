//! TOML experiment files: one flat `[experiment]` table, plus `key=value` overrides.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::grid::{LevelGrid, TimeGrid};
use crate::harness::{
    Experiment, ExperimentConfig, Pair, DEFAULT_DECAY, DEFAULT_KS_LEVEL, DEFAULT_REFERENCE_N,
    DEFAULT_VERVAAT_TOL, DEFAULT_Z_MAX,
};
use crate::process::ProcessSpec;

/// Keys shared by every experiment kind.
pub const COMMON_KEYS: [&str; 8] = [
    "kind", "process", "grid", "levels", "n", "R", "seed", "z_max",
];

/// Experiment kinds with the extra keys each accepts.
pub const KIND_KEYS: [(&str, &[&str]); 6] = [
    ("cov_convergence", &["pairs"]),
    ("marginal_variance", &["points", "reference_n"]),
    (
        "sup_near_zero",
        &["deltas", "n_values", "epsilon", "max_prob"],
    ),
    ("scaling_law", &["scale", "points", "exponent", "ks_level"]),
    ("bahadur_residual", &["n_ladder", "t_range", "decay"]),
    ("identity_suite", &["instances", "vervaat_tol"]),
];

const DEFAULT_MAX_PROB: f64 = 0.05;
const DEFAULT_INSTANCES: usize = 10_000;

fn is_known_key(key: &str) -> bool {
    COMMON_KEYS.contains(&key) || KIND_KEYS.iter().any(|(_, ks)| ks.contains(&key))
}

/// Time grid given as explicit points or as `{ horizon, steps }`.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(untagged)]
enum GridSpec {
    Points(Vec<f64>),
    Uniform { horizon: f64, steps: usize },
}

/// Levels given as a list or as `{ lower, upper, count }`.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(untagged)]
enum LevelSpec {
    List(Vec<f64>),
    Uniform {
        lower: f64,
        upper: f64,
        count: usize,
    },
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawExperiment {
    kind: Option<String>,
    process: Option<ProcessSpec>,
    grid: Option<GridSpec>,
    levels: Option<LevelSpec>,
    n: Option<usize>,
    #[serde(rename = "R")]
    r: Option<usize>,
    seed: Option<u64>,
    z_max: Option<f64>,
    pairs: Option<Vec<[f64; 4]>>,
    points: Option<Vec<[f64; 2]>>,
    deltas: Option<Vec<f64>>,
    n_values: Option<Vec<usize>>,
    epsilon: Option<f64>,
    max_prob: Option<f64>,
    scale: Option<f64>,
    exponent: Option<f64>,
    ks_level: Option<f64>,
    n_ladder: Option<Vec<usize>>,
    t_range: Option<[f64; 2]>,
    decay: Option<f64>,
    instances: Option<usize>,
    reference_n: Option<usize>,
    vervaat_tol: Option<f64>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct ConfigFile {
    experiment: Option<RawExperiment>,
}

fn missing(key: &str) -> Error {
    Error::Config(format!("missing required key `{key}` in [experiment]"))
}

fn need<T>(v: Option<T>, key: &str) -> Result<T> {
    v.ok_or_else(|| missing(key))
}

fn parse_error(origin: &str, e: toml::de::Error) -> Error {
    Error::Config(format!("{origin}: {e}"))
}

/// Parse `key=value`; the value is read as a TOML value, falling back to a bare string.
fn parse_override(item: &str) -> Result<(Vec<String>, toml::Value)> {
    let (key, value) = item
        .split_once('=')
        .ok_or_else(|| Error::Config(format!("override `{item}` is not of the form key=value")))?;
    let path: Vec<String> = key.trim().split('.').map(str::to_string).collect();
    if !is_known_key(&path[0]) {
        return Err(Error::Config(format!("unknown override key `{}`", path[0])));
    }
    let value = value.trim();
    let parsed = toml::from_str::<toml::Table>(&format!("v = {value}"))
        .ok()
        .and_then(|mut t| t.remove("v"))
        .unwrap_or_else(|| toml::Value::String(value.to_string()));
    Ok((path, parsed))
}

fn apply_override(table: &mut toml::Table, path: &[String], value: toml::Value) -> Result<()> {
    let mut node = table
        .entry("experiment")
        .or_insert_with(|| toml::Value::Table(toml::Table::new()));
    for seg in &path[..path.len() - 1] {
        let t = node.as_table_mut().ok_or_else(|| {
            Error::Config(format!("override path `{}` is not a table", path.join(".")))
        })?;
        node = t
            .entry(seg.clone())
            .or_insert_with(|| toml::Value::Table(toml::Table::new()));
    }
    node.as_table_mut()
        .ok_or_else(|| Error::Config(format!("override path `{}` is not a table", path.join("."))))?
        .insert(path[path.len() - 1].clone(), value);
    Ok(())
}

/// Parse a config file's text, apply overrides and resolve defaults.
pub fn parse_config(text: &str, origin: &str, overrides: &[String]) -> Result<ExperimentConfig> {
    let mut table: toml::Table = toml::from_str(text).map_err(|e| parse_error(origin, e))?;
    let raw: ConfigFile = if overrides.is_empty() {
        toml::from_str(text).map_err(|e| parse_error(origin, e))?
    } else {
        for item in overrides {
            let (path, value) = parse_override(item)?;
            apply_override(&mut table, &path, value)?;
        }
        toml::Value::Table(table)
            .try_into()
            .map_err(|e| parse_error(&format!("{origin} (after overrides)"), e))?
    };
    resolve(need(raw.experiment, "experiment")?)
}

/// Read and resolve a config file.
pub fn load_config(path: &std::path::Path, overrides: &[String]) -> Result<ExperimentConfig> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| Error::Config(format!("cannot read {}: {e}", path.display())))?;
    parse_config(&text, &path.display().to_string(), overrides)
}

fn build_grid(g: GridSpec) -> Result<TimeGrid> {
    match g {
        GridSpec::Points(p) => TimeGrid::new(p),
        GridSpec::Uniform { horizon, steps } => TimeGrid::uniform(horizon, steps),
    }
}

fn build_levels(l: LevelSpec) -> Result<LevelGrid> {
    match l {
        LevelSpec::List(v) => LevelGrid::from_levels(v),
        LevelSpec::Uniform {
            lower,
            upper,
            count,
        } => LevelGrid::uniform(lower, upper, count),
    }
}

fn present_keys(raw: &RawExperiment) -> Vec<&'static str> {
    let mut keys = Vec::new();
    let mut mark = |set: bool, k: &'static str| {
        if set {
            keys.push(k)
        }
    };
    mark(raw.pairs.is_some(), "pairs");
    mark(raw.points.is_some(), "points");
    mark(raw.deltas.is_some(), "deltas");
    mark(raw.n_values.is_some(), "n_values");
    mark(raw.epsilon.is_some(), "epsilon");
    mark(raw.max_prob.is_some(), "max_prob");
    mark(raw.scale.is_some(), "scale");
    mark(raw.exponent.is_some(), "exponent");
    mark(raw.ks_level.is_some(), "ks_level");
    mark(raw.n_ladder.is_some(), "n_ladder");
    mark(raw.t_range.is_some(), "t_range");
    mark(raw.decay.is_some(), "decay");
    mark(raw.instances.is_some(), "instances");
    mark(raw.reference_n.is_some(), "reference_n");
    mark(raw.vervaat_tol.is_some(), "vervaat_tol");
    keys
}

fn resolve(raw: RawExperiment) -> Result<ExperimentConfig> {
    let kind = need(raw.kind.clone(), "kind")?;
    let allowed = KIND_KEYS
        .iter()
        .find(|(k, _)| *k == kind)
        .map(|(_, ks)| *ks)
        .ok_or_else(|| {
            let names: Vec<&str> = KIND_KEYS.iter().map(|(k, _)| *k).collect();
            Error::Config(format!(
                "unknown experiment kind `{kind}`; expected one of {}",
                names.join(", ")
            ))
        })?;
    if let Some(k) = present_keys(&raw)
        .into_iter()
        .find(|k| !allowed.contains(k))
    {
        return Err(Error::Config(format!(
            "key `{k}` does not apply to experiment kind `{kind}`"
        )));
    }
    let identity = kind == "identity_suite";
    let seed = need(raw.seed, "seed")?;
    let (spec, grid, levels, n, r) = if identity {
        (
            raw.process.unwrap_or_else(ProcessSpec::brownian),
            match raw.grid {
                Some(g) => build_grid(g)?,
                None => TimeGrid::uniform(1.0, 1)?,
            },
            match raw.levels {
                Some(l) => build_levels(l)?,
                None => LevelGrid::from_levels(vec![0.5])?,
            },
            raw.n.unwrap_or(2),
            raw.r.unwrap_or(1),
        )
    } else {
        (
            need(raw.process, "process")?,
            build_grid(need(raw.grid, "grid")?)?,
            build_levels(need(raw.levels, "levels")?)?,
            need(raw.n, "n")?,
            need(raw.r, "R")?,
        )
    };
    let pts = |p: Option<Vec<[f64; 2]>>| -> Result<Vec<(f64, f64)>> {
        Ok(need(p, "points")?
            .into_iter()
            .map(|[t, a]| (t, a))
            .collect())
    };
    let experiment = match kind.as_str() {
        "cov_convergence" => Experiment::CovConvergence {
            pairs: need(raw.pairs, "pairs")?
                .into_iter()
                .map(|[s, b, t, a]| Pair::new(s, b, t, a))
                .collect(),
        },
        "marginal_variance" => Experiment::MarginalVariance {
            points: pts(raw.points)?,
            reference_n: raw.reference_n.unwrap_or(DEFAULT_REFERENCE_N),
        },
        "sup_near_zero" => Experiment::SupNearZero {
            deltas: need(raw.deltas, "deltas")?,
            n_values: need(raw.n_values, "n_values")?,
            epsilon: need(raw.epsilon, "epsilon")?,
            max_prob: raw.max_prob.unwrap_or(DEFAULT_MAX_PROB),
        },
        "scaling_law" => Experiment::ScalingLaw {
            scale: need(raw.scale, "scale")?,
            points: pts(raw.points)?,
            exponent: raw.exponent,
            ks_level: raw.ks_level.unwrap_or(DEFAULT_KS_LEVEL),
        },
        "bahadur_residual" => {
            let [lo, hi] = need(raw.t_range, "t_range")?;
            Experiment::BahadurResidual {
                n_ladder: need(raw.n_ladder, "n_ladder")?,
                t_range: (lo, hi),
                decay: raw.decay.unwrap_or(DEFAULT_DECAY),
            }
        }
        _ => Experiment::IdentitySuite {
            instances: raw.instances.unwrap_or(DEFAULT_INSTANCES),
            vervaat_tol: raw.vervaat_tol.unwrap_or(DEFAULT_VERVAAT_TOL),
        },
    };
    let mut cfg = ExperimentConfig::new(spec, grid, levels, n, r, seed, experiment);
    cfg.z_max = raw.z_max.unwrap_or(DEFAULT_Z_MAX);
    Ok(cfg)
}

#[cfg(test)]
mod tests {
    use super::*;

    const BM: &str = r#"
[experiment]
kind = "cov_convergence"
process = { kind = "sym_stable", r = 2.0, c = 0.5 }
grid = { horizon = 1.0, steps = 2 }
levels = [0.5]
n = 500
R = 5000
seed = 7
pairs = [[1.0, 0.5, 1.0, 0.5]]
"#;

    #[test]
    fn parses_and_overrides() {
        let cfg = parse_config(BM, "bm.toml", &[]).unwrap();
        assert_eq!(cfg.replications, 5000);
        assert_eq!(cfg.grid.points(), &[0.0, 0.5, 1.0]);
        assert_eq!(cfg.z_max, DEFAULT_Z_MAX);
        let cfg = parse_config(
            BM,
            "bm.toml",
            &[
                "R=10".into(),
                "process.c=1.0".into(),
                "kind=cov_convergence".into(),
            ],
        )
        .unwrap();
        assert_eq!(cfg.replications, 10);
        assert_eq!(cfg.spec, ProcessSpec::SymStable { r: 2.0, c: 1.0 });
    }

    #[test]
    fn errors_name_keys_and_positions() {
        let text = BM.replace("n = 500\n", "");
        let e = parse_config(&text, "bm.toml", &[]).unwrap_err().to_string();
        assert!(e.contains("`n`"), "{e}");
        let e = parse_config(&BM.replace("R = 5000", "R = \"many\""), "bm.toml", &[])
            .unwrap_err()
            .to_string();
        assert!(e.contains("line 8"), "{e}");
        let e = parse_config(BM, "bm.toml", &["bogus=1".into()])
            .unwrap_err()
            .to_string();
        assert!(e.contains("unknown override key `bogus`"), "{e}");
        let e = parse_config(BM, "bm.toml", &["decay=0.5".into()])
            .unwrap_err()
            .to_string();
        assert!(e.contains("does not apply"), "{e}");
        let e = parse_config("[experiment\n", "x.toml", &[])
            .unwrap_err()
            .to_string();
        assert!(e.contains("line 1"), "{e}");
    }

    #[test]
    fn identity_suite_needs_only_a_seed() {
        let cfg = parse_config(
            "[experiment]\nkind = \"identity_suite\"\nseed = 3\n",
            "id.toml",
            &[],
        )
        .unwrap();
        assert_eq!(
            cfg.experiment,
            Experiment::IdentitySuite {
                instances: DEFAULT_INSTANCES,
                vervaat_tol: DEFAULT_VERVAAT_TOL
            }
        );
        cfg.validate().unwrap();
    }
}
