//! Sample-path generators for every supported input class.
//!
//! A [`ProcessSpec`] is prepared once against a grid, producing a [`Generator`]
//! that can then emit any number of reproducible [`PathBatch`]es. Rows are
//! generated in parallel; each row draws from its own stream so the output
//! does not depend on the number of workers.

mod batch;
mod gaussian;
mod poisson;
mod stable;

use serde::{Deserialize, Serialize};

pub use batch::{Domain, PathBatch};
pub use gaussian::{cholesky, gen_brownian_sheet, gen_fbm, GaussianSampler};
pub use poisson::gen_compound_poisson;
pub use stable::{gen_sym_stable, sample_sym_stable};

use crate::analytic::{ConvolvedBase, GaussianFamily, MarginalLaw, StableLaw};
use crate::dist::Dist1D;
use crate::error::{invalid, Error, Result};
use crate::grid::{TimeGrid, TimeGrid2D};
use crate::rng::{SeedInfo, StreamTag};

/// Declarative description of an input-process law.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum ProcessSpec {
    Fbm {
        gamma: f64,
    },
    BrownianSheet,
    SymStable {
        r: f64,
        c: f64,
    },
    CompoundPoisson {
        lambda: f64,
        jump: Dist1D,
    },
    Shifted {
        base: Box<ProcessSpec>,
        shift: Dist1D,
    },
}

impl ProcessSpec {
    pub fn brownian() -> Self {
        ProcessSpec::SymStable { r: 2.0, c: 0.5 }
    }

    pub fn cauchy() -> Self {
        ProcessSpec::SymStable { r: 1.0, c: 1.0 }
    }

    pub fn shifted(self, shift: Dist1D) -> Self {
        ProcessSpec::Shifted {
            base: Box::new(self),
            shift,
        }
    }

    pub fn validate(&self) -> Result<()> {
        match self {
            ProcessSpec::Fbm { gamma } => {
                if !(*gamma > 0.0 && *gamma < 1.0) {
                    return Err(invalid("gamma", format!("{gamma} is outside (0,1)")));
                }
            }
            ProcessSpec::BrownianSheet => {}
            ProcessSpec::SymStable { r, c } => {
                StableLaw::new(*r, *c)?;
            }
            ProcessSpec::CompoundPoisson { lambda, jump } => {
                if !(*lambda > 0.0 && lambda.is_finite()) {
                    return Err(invalid("lambda", format!("{lambda} must be positive")));
                }
                jump.validate()?;
                if jump.has_atom_at_zero() {
                    return Err(invalid("jump", "jump law must not charge zero"));
                }
            }
            ProcessSpec::Shifted { base, shift } => {
                if matches!(**base, ProcessSpec::Shifted { .. }) {
                    return Err(invalid("base", "nested shifts are not supported"));
                }
                base.validate()?;
                shift.validate()?;
            }
        }
        Ok(())
    }

    /// True when X(0) = 0 almost surely.
    pub fn zero_at_zero(&self) -> bool {
        !matches!(self, ProcessSpec::Shifted { .. })
    }

    pub fn is_sheet(&self) -> bool {
        match self {
            ProcessSpec::BrownianSheet => true,
            ProcessSpec::Shifted { base, .. } => base.is_sheet(),
            _ => false,
        }
    }

    /// Scaling exponent p with X(ct) equal in law to c^p X(t), when one exists.
    pub fn scaling_exponent(&self) -> Option<f64> {
        match self {
            ProcessSpec::Fbm { gamma } => Some(*gamma),
            ProcessSpec::SymStable { r, .. } => Some(1.0 / r),
            _ => None,
        }
    }

    /// Closed-form marginal law, if the class has one.
    pub fn marginal_law(&self) -> Result<Option<MarginalLaw>> {
        self.validate()?;
        Ok(match self {
            ProcessSpec::Fbm { gamma } => Some(MarginalLaw::Gaussian(GaussianFamily::fbm(*gamma)?)),
            ProcessSpec::SymStable { r, c } => {
                Some(MarginalLaw::SymStable(StableLaw::new(*r, *c)?))
            }
            ProcessSpec::Shifted { base, shift } => match (&**base, shift) {
                (ProcessSpec::Fbm { gamma }, Dist1D::Normal { mean, sd }) => {
                    Some(MarginalLaw::Gaussian(
                        GaussianFamily::fbm(*gamma)?.with_normal_shift(*mean, *sd)?,
                    ))
                }
                (ProcessSpec::SymStable { r, c }, Dist1D::Normal { mean, sd }) if *r == 2.0 => {
                    Some(MarginalLaw::Gaussian(
                        GaussianFamily::fbm(0.5)?
                            .with_normal_shift(*mean, *sd)?
                            .with_variance_scale(2.0 * c)?,
                    ))
                }
                (ProcessSpec::Fbm { gamma }, z) if z.has_regular_density() => {
                    Some(MarginalLaw::Convolved {
                        base: ConvolvedBase::Gaussian(GaussianFamily::fbm(*gamma)?),
                        z: *z,
                    })
                }
                (ProcessSpec::SymStable { r, c }, z) if *r == 2.0 && z.has_regular_density() => {
                    Some(MarginalLaw::Convolved {
                        base: ConvolvedBase::Gaussian(
                            GaussianFamily::fbm(0.5)?.with_variance_scale(2.0 * c)?,
                        ),
                        z: *z,
                    })
                }
                _ => None,
            },
            _ => None,
        })
    }

    pub fn describe(&self) -> String {
        match self {
            ProcessSpec::Fbm { gamma } => format!("fbm(gamma={gamma})"),
            ProcessSpec::BrownianSheet => "brownian_sheet".into(),
            ProcessSpec::SymStable { r, c } => format!("sym_stable(r={r}, c={c})"),
            ProcessSpec::CompoundPoisson { lambda, jump } => {
                format!("compound_poisson(lambda={lambda}, jump={jump:?})")
            }
            ProcessSpec::Shifted { base, shift } => format!("{} + {shift:?}", base.describe()),
        }
    }

    /// Precompute everything that depends only on the law and the grid.
    pub fn prepare(&self, domain: &Domain) -> Result<Generator> {
        self.validate()?;
        let (base, shift) = match self {
            ProcessSpec::Shifted { base, shift } => (&**base, Some(*shift)),
            other => (other, None),
        };
        let kind = match (base, domain) {
            (ProcessSpec::Fbm { gamma }, Domain::Line(grid)) => {
                GeneratorKind::Gaussian(GaussianSampler::fbm(grid, *gamma)?)
            }
            (ProcessSpec::BrownianSheet, Domain::Sheet(grid)) => {
                GeneratorKind::Gaussian(GaussianSampler::brownian_sheet(grid)?)
            }
            (ProcessSpec::SymStable { r, c }, Domain::Line(_)) => {
                GeneratorKind::Stable { r: *r, c: *c }
            }
            (ProcessSpec::CompoundPoisson { lambda, jump }, Domain::Line(_)) => {
                GeneratorKind::Poisson {
                    lambda: *lambda,
                    jump: *jump,
                }
            }
            (spec, _) => {
                return Err(Error::Unsupported(format!(
                    "{} cannot be sampled on a {} grid",
                    spec.describe(),
                    domain.kind_name()
                )))
            }
        };
        Ok(Generator {
            domain: domain.clone(),
            kind,
            shift,
        })
    }

    pub fn generate(&self, domain: &Domain, n: usize, seed: SeedInfo) -> Result<PathBatch> {
        self.prepare(domain)?.generate(n, seed)
    }
}

#[derive(Debug, Clone)]
enum GeneratorKind {
    Gaussian(GaussianSampler),
    Stable { r: f64, c: f64 },
    Poisson { lambda: f64, jump: Dist1D },
}

/// A process law bound to a grid, ready to emit batches.
#[derive(Debug, Clone)]
pub struct Generator {
    domain: Domain,
    kind: GeneratorKind,
    shift: Option<Dist1D>,
}

impl Generator {
    pub fn domain(&self) -> &Domain {
        &self.domain
    }

    pub fn generate(&self, n: usize, seed: SeedInfo) -> Result<PathBatch> {
        if n == 0 {
            return Err(invalid("n", "at least one path is required"));
        }
        let batch = match (&self.kind, &self.domain) {
            (GeneratorKind::Gaussian(sampler), domain) => {
                sampler.sample(domain.clone(), n, seed)?
            }
            (GeneratorKind::Stable { r, c }, Domain::Line(grid)) => {
                stable::sample(grid, *r, *c, n, seed)
            }
            (GeneratorKind::Poisson { lambda, jump }, Domain::Line(grid)) => {
                poisson::sample(grid, *lambda, jump, n, seed)
            }
            _ => unreachable!("generator kinds are matched to domains in prepare"),
        };
        match &self.shift {
            Some(z) => add_shift(&batch, z, seed),
            None => Ok(batch),
        }
    }
}

/// Add one independent draw of `z` to every value of each path.
pub fn add_shift(batch: &PathBatch, z: &Dist1D, seed: SeedInfo) -> Result<PathBatch> {
    z.validate()?;
    let streams = seed.with_tag(StreamTag::Shift);
    let mut out = batch.clone();
    out.shift_each_row(|i| {
        let mut rng = streams.path_rng(i as u64);
        z.sample(&mut rng)
    });
    Ok(out)
}

/// Convenience for the one-parameter generators.
pub fn line_domain(grid: &TimeGrid) -> Domain {
    Domain::Line(grid.clone())
}

pub fn sheet_domain(grid: &TimeGrid2D) -> Domain {
    Domain::Sheet(grid.clone())
}
