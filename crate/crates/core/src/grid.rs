//! Discretizations of the time domain and of the quantile-level interval.

use serde::{Deserialize, Serialize};

use crate::error::{invalid, Result};

/// Strictly increasing times in `[0, T]`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TimeGrid {
    points: Vec<f64>,
}

impl TimeGrid {
    pub fn new(points: Vec<f64>) -> Result<Self> {
        if points.len() < 2 {
            return Err(invalid("grid", "need at least 2 points"));
        }
        if !points.iter().all(|t| t.is_finite()) {
            return Err(invalid("grid", "non-finite time"));
        }
        if points[0] < 0.0 {
            return Err(invalid(
                "grid",
                format!("first point {} is negative", points[0]),
            ));
        }
        if points.windows(2).any(|w| w[1] <= w[0]) {
            return Err(invalid("grid", "times must be strictly increasing"));
        }
        Ok(TimeGrid { points })
    }

    /// `steps + 1` equally spaced points on `[0, horizon]`.
    pub fn uniform(horizon: f64, steps: usize) -> Result<Self> {
        if !(horizon > 0.0) || steps == 0 {
            return Err(invalid("grid", "need horizon > 0 and at least one step"));
        }
        let pts = (0..=steps)
            .map(|k| horizon * k as f64 / steps as f64)
            .collect();
        TimeGrid::new(pts)
    }

    pub fn points(&self) -> &[f64] {
        &self.points
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn horizon(&self) -> f64 {
        *self.points.last().expect("grid has >= 2 points")
    }

    /// Index of a grid time matching `t` to within `1e-12` (relative to `max(1, |t|)`).
    pub fn index_of(&self, t: f64) -> Option<usize> {
        let tol = 1e-12 * t.abs().max(1.0);
        let i = self.points.partition_point(|&p| p < t - tol);
        (i < self.points.len() && (self.points[i] - t).abs() <= tol).then_some(i)
    }

    /// Indices whose time lies in `[lo, hi]`.
    pub fn indices_in(&self, lo: f64, hi: f64) -> Vec<usize> {
        (0..self.points.len())
            .filter(|&i| self.points[i] >= lo && self.points[i] <= hi)
            .collect()
    }

    pub(crate) fn describe(&self) -> String {
        format!(
            "[{} points on {}..{}]",
            self.points.len(),
            self.points[0],
            self.horizon()
        )
    }
}

/// Product grid on `[0, T]^2` for the two-parameter sheet.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TimeGrid2D {
    x: TimeGrid,
    y: TimeGrid,
}

impl TimeGrid2D {
    pub fn new(points_x: Vec<f64>, points_y: Vec<f64>) -> Result<Self> {
        Ok(TimeGrid2D {
            x: TimeGrid::new(points_x)?,
            y: TimeGrid::new(points_y)?,
        })
    }

    pub fn x(&self) -> &TimeGrid {
        &self.x
    }

    pub fn y(&self) -> &TimeGrid {
        &self.y
    }

    /// Number of lattice points.
    pub fn len(&self) -> usize {
        self.x.len() * self.y.len()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// Flattened (row-major in x) column index of lattice point `(i, j)`.
    pub fn flat_index(&self, i: usize, j: usize) -> usize {
        i * self.y.len() + j
    }

    pub fn point(&self, flat: usize) -> (f64, f64) {
        let ny = self.y.len();
        (self.x.points()[flat / ny], self.y.points()[flat % ny])
    }
}

/// Strictly increasing quantile levels inside a closed interval `[a, b] ⊂ (0, 1)`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LevelGrid {
    lower: f64,
    upper: f64,
    levels: Vec<f64>,
}

impl LevelGrid {
    pub fn new(lower: f64, upper: f64, levels: Vec<f64>) -> Result<Self> {
        if !(lower > 0.0 && lower <= upper && upper < 1.0) {
            return Err(invalid(
                "levels",
                format!("interval [{lower}, {upper}] must satisfy 0 < a <= b < 1"),
            ));
        }
        if levels.is_empty() {
            return Err(invalid("levels", "no levels given"));
        }
        if levels.iter().any(|&a| !(a >= lower && a <= upper)) {
            return Err(invalid("levels", "level outside its interval"));
        }
        if levels.windows(2).any(|w| w[1] <= w[0]) {
            return Err(invalid("levels", "levels must be strictly increasing"));
        }
        Ok(LevelGrid {
            lower,
            upper,
            levels,
        })
    }

    /// Levels are their own interval bounds.
    pub fn from_levels(levels: Vec<f64>) -> Result<Self> {
        let (lo, hi) = match (levels.first(), levels.last()) {
            (Some(&lo), Some(&hi)) => (lo, hi),
            _ => return Err(invalid("levels", "no levels given")),
        };
        LevelGrid::new(lo, hi, levels)
    }

    /// `count` equally spaced levels covering `[a, b]`.
    pub fn uniform(lower: f64, upper: f64, count: usize) -> Result<Self> {
        let levels = match count {
            0 => Vec::new(),
            1 => vec![lower],
            _ => (0..count)
                .map(|k| lower + (upper - lower) * k as f64 / (count - 1) as f64)
                .collect(),
        };
        LevelGrid::new(lower, upper, levels)
    }

    pub fn levels(&self) -> &[f64] {
        &self.levels
    }

    pub fn bounds(&self) -> (f64, f64) {
        (self.lower, self.upper)
    }

    pub fn len(&self) -> usize {
        self.levels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.levels.is_empty()
    }

    pub fn index_of(&self, alpha: f64) -> Option<usize> {
        self.levels.iter().position(|&a| (a - alpha).abs() <= 1e-12)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_bad_time_grids() {
        assert!(TimeGrid::new(vec![0.0]).is_err());
        assert!(TimeGrid::new(vec![0.0, 0.5, 0.5]).is_err());
        assert!(TimeGrid::new(vec![-0.1, 1.0]).is_err());
        assert!(TimeGrid::new(vec![0.0, f64::NAN]).is_err());
    }

    #[test]
    fn uniform_grid_hits_endpoints() {
        let g = TimeGrid::uniform(2.0, 8).unwrap();
        assert_eq!(g.points()[0], 0.0);
        assert_eq!(g.horizon(), 2.0);
        assert_eq!(g.index_of(0.5), Some(2));
        assert_eq!(g.index_of(0.55), None);
    }

    #[test]
    fn level_grid_bounds() {
        assert!(LevelGrid::new(0.0, 0.5, vec![0.25]).is_err());
        assert!(LevelGrid::new(0.25, 1.0, vec![0.25]).is_err());
        assert!(LevelGrid::new(0.25, 0.75, vec![0.8]).is_err());
        let l = LevelGrid::uniform(0.25, 0.75, 3).unwrap();
        assert_eq!(l.levels(), &[0.25, 0.5, 0.75]);
    }

    #[test]
    fn sheet_flat_indexing() {
        let g = TimeGrid2D::new(vec![0.0, 0.5, 1.0], vec![0.0, 1.0]).unwrap();
        assert_eq!(g.len(), 6);
        assert_eq!(g.point(g.flat_index(2, 1)), (1.0, 1.0));
        assert_eq!(g.point(g.flat_index(1, 0)), (0.5, 0.0));
    }
}
