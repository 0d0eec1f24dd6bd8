//! CSV lattices of analytic objects.

use clap::{Args, Subcommand, ValueEnum};

use crate::analytic::{limit_cov_quantile_fbm, limit_cov_quantile_stable, StableLaw};
use crate::error::{invalid, Error, Result};

#[derive(Debug, Clone, Subcommand)]
pub enum TableKind {
    /// Marginal density f(t, x) of a symmetric stable process.
    Density(StableArgs),
    /// True quantile tau_alpha(t) of a symmetric stable process.
    Quantile(StableArgs),
    /// Limit covariance E[W(s, beta) W(t, alpha)] of the quantile process.
    Covariance(CovArgs),
}

#[derive(Debug, Clone, Args)]
pub struct StableArgs {
    /// Stability index in (0, 2].
    #[arg(long)]
    pub r: f64,
    /// Scale in the characteristic function exp{-c t |u|^r}.
    #[arg(long)]
    pub c: f64,
    #[arg(long, default_value_t = 1.0)]
    pub t: f64,
    /// Points (x for density, alpha for quantile), comma separated.
    #[arg(
        long,
        alias = "alpha",
        value_delimiter = ',',
        allow_hyphen_values = true
    )]
    pub x: Vec<f64>,
    /// Evenly spaced points `lo,hi,count` appended to the list.
    #[arg(long, value_delimiter = ',', num_args = 1, allow_hyphen_values = true)]
    pub lattice: Vec<f64>,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
pub enum CovFamily {
    Fbm,
    Stable,
}

#[derive(Debug, Clone, Args)]
pub struct CovArgs {
    #[arg(long, value_enum)]
    pub kind: CovFamily,
    /// Hurst index for `fbm`.
    #[arg(long)]
    pub gamma: Option<f64>,
    /// Stability index for `stable`.
    #[arg(long)]
    pub r: Option<f64>,
    /// Scale for `stable`.
    #[arg(long)]
    pub c: Option<f64>,
    #[arg(long)]
    pub s: f64,
    #[arg(long)]
    pub beta: f64,
    #[arg(long)]
    pub t: f64,
    #[arg(long)]
    pub alpha: f64,
}

fn points(a: &StableArgs) -> Result<Vec<f64>> {
    let mut pts = a.x.clone();
    match a.lattice.as_slice() {
        [] => {}
        &[lo, hi, count] if count >= 1.0 && count.fract() == 0.0 => {
            let k = count as usize;
            pts.extend((0..k).map(|i| {
                if k == 1 {
                    lo
                } else {
                    lo + (hi - lo) * i as f64 / (k - 1) as f64
                }
            }));
        }
        _ => {
            return Err(invalid(
                "lattice",
                "expected lo,hi,count with integer count >= 1",
            ))
        }
    }
    if pts.is_empty() {
        return Err(invalid("x", "no evaluation points; pass --x or --lattice"));
    }
    Ok(pts)
}

fn context(e: Error, what: &str) -> Error {
    Error::Domain(format!("{what}: {e}"))
}

/// Render the requested table as CSV.
pub fn render(kind: &TableKind) -> Result<String> {
    let mut out = String::new();
    match kind {
        TableKind::Density(a) | TableKind::Quantile(a) => {
            let law = StableLaw::new(a.r, a.c)?;
            let density = matches!(kind, TableKind::Density(_));
            out.push_str(if density {
                "r,c,t,x,density\n"
            } else {
                "r,c,t,alpha,quantile\n"
            });
            for x in points(a)? {
                let v = if density {
                    law.density(a.t, x)
                } else {
                    law.quantile(a.t, x)
                }
                .map_err(|e| context(e, &format!("r={} c={} t={} at {x}", a.r, a.c, a.t)))?;
                out.push_str(&format!("{},{},{},{x},{v}\n", a.r, a.c, a.t));
            }
        }
        TableKind::Covariance(a) => {
            let v = match a.kind {
                CovFamily::Fbm => {
                    let g = a
                        .gamma
                        .ok_or_else(|| invalid("gamma", "required for --kind fbm"))?;
                    limit_cov_quantile_fbm(g, a.s, a.beta, a.t, a.alpha)
                }
                CovFamily::Stable => {
                    let r =
                        a.r.ok_or_else(|| invalid("r", "required for --kind stable"))?;
                    let c =
                        a.c.ok_or_else(|| invalid("c", "required for --kind stable"))?;
                    limit_cov_quantile_stable(&StableLaw::new(r, c)?, a.s, a.beta, a.t, a.alpha)
                }
            }
            .map_err(|e| {
                context(
                    e,
                    &format!("s={} beta={} t={} alpha={}", a.s, a.beta, a.t, a.alpha),
                )
            })?;
            out.push_str("s,beta,t,alpha,covariance\n");
            out.push_str(&format!("{},{},{},{},{v}\n", a.s, a.beta, a.t, a.alpha));
        }
    }
    Ok(out)
}
