use crate::error::{Error, Result, Shape};
use crate::grid::{TimeGrid, TimeGrid2D};
use crate::rng::SeedInfo;

/// Index set on which paths are observed.
#[derive(Debug, Clone, PartialEq)]
pub enum Domain {
    Line(TimeGrid),
    Sheet(TimeGrid2D),
}

impl Domain {
    pub fn len(&self) -> usize {
        match self {
            Domain::Line(g) => g.len(),
            Domain::Sheet(g) => g.len(),
        }
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn line(&self) -> Option<&TimeGrid> {
        match self {
            Domain::Line(g) => Some(g),
            Domain::Sheet(_) => None,
        }
    }

    pub(crate) fn kind_name(&self) -> &'static str {
        match self {
            Domain::Line(_) => "one-parameter",
            Domain::Sheet(_) => "two-parameter",
        }
    }
}

impl From<TimeGrid> for Domain {
    fn from(g: TimeGrid) -> Self {
        Domain::Line(g)
    }
}

impl From<TimeGrid2D> for Domain {
    fn from(g: TimeGrid2D) -> Self {
        Domain::Sheet(g)
    }
}

/// `n` i.i.d. sample paths on a common grid, stored row-major: `values[i * m + j] = X_i(t_j)`.
#[derive(Debug, Clone, PartialEq)]
pub struct PathBatch {
    domain: Domain,
    values: Vec<f64>,
    n: usize,
    seed: SeedInfo,
}

impl PathBatch {
    pub fn from_rows(domain: Domain, values: Vec<f64>, seed: SeedInfo) -> Result<Self> {
        let m = domain.len();
        if values.is_empty() {
            return Err(Error::Empty("path batch"));
        }
        if !values.len().is_multiple_of(m) {
            return Err(Error::ShapeMismatch {
                expected: Shape(values.len() / m, m),
                found: Shape(values.len(), 1),
            });
        }
        let n = values.len() / m;
        Ok(PathBatch {
            domain,
            values,
            n,
            seed,
        })
    }

    /// Build a batch on a time grid from explicit rows.
    pub fn from_paths(grid: &TimeGrid, paths: &[Vec<f64>]) -> Result<Self> {
        let m = grid.len();
        if let Some(bad) = paths.iter().find(|p| p.len() != m) {
            return Err(Error::ShapeMismatch {
                expected: Shape(paths.len(), m),
                found: Shape(paths.len(), bad.len()),
            });
        }
        let values = paths.concat();
        Self::from_rows(Domain::Line(grid.clone()), values, SeedInfo::new(0))
    }

    pub fn domain(&self) -> &Domain {
        &self.domain
    }

    pub fn grid(&self) -> Option<&TimeGrid> {
        self.domain.line()
    }

    pub fn seed_info(&self) -> SeedInfo {
        self.seed
    }

    /// Number of paths.
    pub fn n(&self) -> usize {
        self.n
    }

    /// Number of grid points.
    pub fn m(&self) -> usize {
        self.domain.len()
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn value(&self, path: usize, point: usize) -> f64 {
        self.values[path * self.m() + point]
    }

    pub fn row(&self, path: usize) -> &[f64] {
        let m = self.m();
        &self.values[path * m..(path + 1) * m]
    }

    pub fn rows(&self) -> impl Iterator<Item = &[f64]> {
        self.values.chunks_exact(self.m())
    }

    /// All path values at one grid point.
    pub fn column(&self, point: usize) -> Vec<f64> {
        self.values
            .iter()
            .skip(point)
            .step_by(self.m())
            .copied()
            .collect()
    }

    pub(crate) fn shift_each_row(&mut self, mut draw: impl FnMut(usize) -> f64) {
        let m = self.m();
        for (i, row) in self.values.chunks_exact_mut(m).enumerate() {
            let z = draw(i);
            row.iter_mut().for_each(|v| *v += z);
        }
    }
}
