//! Empirical distribution functions, order statistics and quantile fields.
//!
//! Quantiles follow the generalized inverse `inf{x : F_n(x) >= alpha}`, which
//! is the `j(alpha)`-th order statistic with `j(alpha) = min{k : k/n >= alpha}`.

use rayon::prelude::*;

use crate::analytic::UnivariateLaw;
use crate::error::{invalid, Error, Result, Shape};
use crate::grid::{LevelGrid, TimeGrid};
use crate::process::{Domain, PathBatch};

/// A sample value with the position it came from.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OrderStat {
    pub value: f64,
    pub index: usize,
}

/// `min{k : k/n >= alpha}`, clamped to `1..=n`.
pub fn j_alpha(n: usize, alpha: f64) -> usize {
    let nf = n as f64;
    let mut k = ((alpha * nf).ceil() as usize).clamp(1, n);
    while k > 1 && ((k - 1) as f64) / nf >= alpha {
        k -= 1;
    }
    while k < n && (k as f64) / nf < alpha {
        k += 1;
    }
    k
}

/// Fraction of `values` that are `<= x`.
pub fn ecdf(values: &[f64], x: f64) -> f64 {
    values.iter().filter(|&&v| v <= x).count() as f64 / values.len() as f64
}

/// `F_n(t, x)` at grid point `t_index`.
pub fn empirical_cdf(batch: &PathBatch, t_index: usize, x: f64) -> f64 {
    ecdf(&batch.column(t_index), x)
}

/// `sqrt(n) (F_n(t, x) - F(t, x))`.
pub fn empirical_process(batch: &PathBatch, t_index: usize, x: f64, f: f64) -> f64 {
    (batch.n() as f64).sqrt() * (empirical_cdf(batch, t_index, x) - f)
}

/// Nondecreasing rearrangement; equal values keep their original order.
pub fn order_statistics(values: &[f64]) -> Result<Vec<OrderStat>> {
    if values.is_empty() {
        return Err(Error::Empty("order statistics of an empty sample"));
    }
    let mut out: Vec<OrderStat> = values
        .iter()
        .enumerate()
        .map(|(index, &value)| OrderStat { value, index })
        .collect();
    out.sort_by(|a, b| a.value.total_cmp(&b.value));
    Ok(out)
}

pub(crate) fn sorted(values: &[f64]) -> Vec<f64> {
    let mut v = values.to_vec();
    v.sort_unstable_by(f64::total_cmp);
    v
}

/// Lower `alpha`-quantile of an already sorted sample.
pub fn quantile_sorted(sorted: &[f64], alpha: f64) -> f64 {
    sorted[j_alpha(sorted.len(), alpha) - 1]
}

/// `inf{x : F_n(x) > beta}` of an already sorted sample, for `beta < 1`.
pub fn upper_quantile_sorted(sorted: &[f64], beta: f64) -> f64 {
    let n = sorted.len();
    let nf = n as f64;
    let k = (1..=n).find(|&k| (k as f64) / nf > beta).unwrap_or(n);
    sorted[k - 1]
}

/// Lower `alpha`-quantile of an unsorted sample.
pub fn sample_quantile(values: &[f64], alpha: f64) -> Result<f64> {
    if values.is_empty() {
        return Err(Error::Empty("quantile of an empty sample"));
    }
    check_level(alpha)?;
    let mut v = values.to_vec();
    let j = j_alpha(v.len(), alpha);
    let (_, q, _) = v.select_nth_unstable_by(j - 1, f64::total_cmp);
    Ok(*q)
}

/// `tau^n_alpha(t)` at grid point `t_index`.
pub fn empirical_quantile(batch: &PathBatch, t_index: usize, alpha: f64) -> Result<f64> {
    sample_quantile(&batch.column(t_index), alpha)
}

fn check_level(alpha: f64) -> Result<()> {
    if alpha > 0.0 && alpha < 1.0 {
        Ok(())
    } else {
        Err(invalid("alpha", format!("{alpha} is outside (0,1)")))
    }
}

/// Empirical quantile surface and its centered, scaled version.
#[derive(Debug, Clone, PartialEq)]
pub struct QuantileField {
    domain: Domain,
    levels: LevelGrid,
    n: usize,
    tau_n: Vec<f64>,
    w_n: Vec<f64>,
}

impl QuantileField {
    pub fn domain(&self) -> &Domain {
        &self.domain
    }

    pub fn grid(&self) -> Option<&TimeGrid> {
        self.domain.line()
    }

    pub fn levels(&self) -> &LevelGrid {
        &self.levels
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn tau_n(&self, t_index: usize, level_index: usize) -> f64 {
        self.tau_n[t_index * self.levels.len() + level_index]
    }

    pub fn w_n(&self, t_index: usize, level_index: usize) -> f64 {
        self.w_n[t_index * self.levels.len() + level_index]
    }

    /// Empirical quantiles at one grid point, one per level.
    pub fn tau_n_row(&self, t_index: usize) -> &[f64] {
        let k = self.levels.len();
        &self.tau_n[t_index * k..(t_index + 1) * k]
    }

    pub fn w_n_row(&self, t_index: usize) -> &[f64] {
        let k = self.levels.len();
        &self.w_n[t_index * k..(t_index + 1) * k]
    }
}

/// Fill `tau_n` from the batch and `w_n = sqrt(n) (tau_n - true_tau)`.
///
/// `true_tau[i][k]` is the true quantile at grid point `i` and level `k`.
pub fn quantile_field(
    batch: &PathBatch,
    levels: &LevelGrid,
    true_tau: &[Vec<f64>],
) -> Result<QuantileField> {
    let m = batch.m();
    let k = levels.len();
    let found_cols = true_tau.first().map_or(0, Vec::len);
    if true_tau.len() != m || true_tau.iter().any(|row| row.len() != k) {
        return Err(Error::ShapeMismatch {
            expected: Shape(m, k),
            found: Shape(true_tau.len(), found_cols),
        });
    }
    let n = batch.n();
    let root_n = (n as f64).sqrt();
    let rows: Vec<Vec<f64>> = (0..m)
        .into_par_iter()
        .map(|i| {
            let col = sorted(&batch.column(i));
            levels
                .levels()
                .iter()
                .map(|&a| quantile_sorted(&col, a))
                .collect()
        })
        .collect();
    let tau_n: Vec<f64> = rows.concat();
    let w_n = tau_n
        .iter()
        .zip(true_tau.iter().flatten())
        .map(|(q, t)| root_n * (q - t))
        .collect();
    Ok(QuantileField {
        domain: batch.domain().clone(),
        levels: levels.clone(),
        n,
        tau_n,
        w_n,
    })
}

/// `max |w_n|` over grid times in `t_range` and levels in `level_range`.
pub fn sup_statistic(
    field: &QuantileField,
    t_range: (f64, f64),
    level_range: (f64, f64),
) -> Result<f64> {
    let grid = field
        .grid()
        .ok_or_else(|| Error::Unsupported("time ranges need a one-parameter grid".into()))?;
    let times = grid.indices_in(t_range.0, t_range.1);
    let levels: Vec<usize> = (0..field.levels.len())
        .filter(|&k| {
            let a = field.levels.levels()[k];
            a >= level_range.0 && a <= level_range.1
        })
        .collect();
    if times.is_empty() || levels.is_empty() {
        return Err(Error::Empty("sup range does not meet the grid"));
    }
    Ok(times
        .iter()
        .flat_map(|&i| levels.iter().map(move |&k| field.w_n(i, k).abs()))
        .fold(0.0, f64::max))
}

/// Largest gap between the two sides of the inverse identity at the given probe levels.
///
/// The left side `inf{beta : F_n(t, F_t^{-1}(beta)) >= alpha}` is located by
/// bisection on `beta`; the right side is `F_t(tau^n_alpha(t))`.
pub fn vervaat_identity_check(
    batch: &PathBatch,
    t_index: usize,
    law: &dyn UnivariateLaw,
    probe_levels: &[f64],
) -> Result<f64> {
    vervaat_discrepancy(&batch.column(t_index), law, probe_levels)
}

/// [`vervaat_identity_check`] on a raw sample.
pub fn vervaat_discrepancy(values: &[f64], law: &dyn UnivariateLaw, probes: &[f64]) -> Result<f64> {
    if values.is_empty() {
        return Err(Error::Empty("identity check on an empty sample"));
    }
    let col = sorted(values);
    let mut worst: f64 = 0.0;
    for &alpha in probes {
        check_level(alpha)?;
        let rhs = law.cdf(quantile_sorted(&col, alpha))?;
        let reached = |beta: f64| -> Result<bool> {
            let x = law.quantile(beta)?;
            let below = col.partition_point(|&v| v <= x);
            Ok((below as f64) / (col.len() as f64) >= alpha)
        };
        let (mut lo, mut hi) = (0.0_f64, 1.0_f64);
        for _ in 0..200 {
            let mid = 0.5 * (lo + hi);
            if mid <= lo || mid >= hi {
                break;
            }
            if reached(mid)? {
                hi = mid;
            } else {
                lo = mid;
            }
        }
        worst = worst.max((hi - rhs).abs());
    }
    Ok(worst)
}

/// Largest displacement of sorted entries versus the largest displacement of the raw entries.
pub fn order_stat_gap(x: &[f64], y: &[f64]) -> Result<(f64, f64)> {
    if x.len() != y.len() {
        return Err(Error::ShapeMismatch {
            expected: Shape(1, x.len()),
            found: Shape(1, y.len()),
        });
    }
    if x.is_empty() {
        return Err(Error::Empty("order statistics of an empty sample"));
    }
    let delta = x
        .iter()
        .zip(y)
        .map(|(a, b)| (a - b).abs())
        .fold(0.0, f64::max);
    let (sx, sy) = (sorted(x), sorted(y));
    let gap = sx
        .iter()
        .zip(&sy)
        .map(|(a, b)| (a - b).abs())
        .fold(0.0, f64::max);
    Ok((delta, gap))
}

/// Whether `q` satisfies `P_n(X <= q) >= alpha` and `P_n(X >= q) >= 1 - alpha`.
pub fn is_alpha_quantile(values: &[f64], q: f64, alpha: f64) -> bool {
    let nf = values.len() as f64;
    let le = values.iter().filter(|&&v| v <= q).count() as f64;
    let ge = values.iter().filter(|&&v| v >= q).count() as f64;
    le / nf >= alpha && ge / nf >= 1.0 - alpha
}

/// `-(upper (1 - alpha)-quantile of -X)`, which is again an `alpha`-quantile of `X`.
pub fn reflected_quantile(values: &[f64], alpha: f64) -> Result<f64> {
    if values.is_empty() {
        return Err(Error::Empty("quantile of an empty sample"));
    }
    check_level(alpha)?;
    let negated: Vec<f64> = values.iter().map(|v| -v).collect();
    Ok(-upper_quantile_sorted(&sorted(&negated), 1.0 - alpha))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dist::Dist1D;

    fn batch(values: &[f64]) -> PathBatch {
        let grid = TimeGrid::new(vec![0.0, 1.0]).unwrap();
        let rows: Vec<Vec<f64>> = values.iter().map(|&v| vec![0.0, v]).collect();
        PathBatch::from_paths(&grid, &rows).unwrap()
    }

    #[test]
    fn cdf_counts() {
        let b = batch(&[1.0, 2.0, 3.0]);
        assert_eq!(empirical_cdf(&b, 1, 2.0), 2.0 / 3.0);
        assert_eq!(empirical_cdf(&b, 1, 0.5), 0.0);
        assert_eq!(empirical_cdf(&b, 1, 3.0), 1.0);
        assert_eq!(empirical_cdf(&batch(&[1.0, 1.0, 3.0]), 1, 1.0), 2.0 / 3.0);
    }

    #[test]
    fn order_statistics_break_ties_by_index() {
        let s = order_statistics(&[3.0, 1.0, 2.0]).unwrap();
        assert_eq!(
            s.iter().map(|o| o.value).collect::<Vec<_>>(),
            [1.0, 2.0, 3.0]
        );
        let s = order_statistics(&[2.0, 2.0, 1.0]).unwrap();
        assert_eq!(
            s,
            [
                OrderStat {
                    value: 1.0,
                    index: 2
                },
                OrderStat {
                    value: 2.0,
                    index: 0
                },
                OrderStat {
                    value: 2.0,
                    index: 1
                }
            ]
        );
        assert_eq!(order_statistics(&[4.5]).unwrap()[0].value, 4.5);
        assert!(order_statistics(&[]).is_err());
    }

    #[test]
    fn quantile_steps() {
        let b = batch(&[3.0, 1.0, 2.0, 5.0]);
        assert_eq!(empirical_quantile(&b, 1, 0.5).unwrap(), 2.0);
        assert_eq!(empirical_quantile(&b, 1, 0.51).unwrap(), 3.0);
        let b = batch(&[7.0, 7.0]);
        for &a in &[0.01, 0.5, 0.99] {
            assert_eq!(empirical_quantile(&b, 1, a).unwrap(), 7.0);
        }
        assert_eq!(j_alpha(10, 0.3), 3);
        assert_eq!(j_alpha(3, 1.0 / 3.0), 1);
    }

    #[test]
    fn field_of_zero_path() {
        let grid = TimeGrid::new(vec![0.0, 1.0]).unwrap();
        let b = PathBatch::from_paths(&grid, &[vec![0.0, 0.0]]).unwrap();
        let levels = LevelGrid::from_levels(vec![0.25, 0.5]).unwrap();
        let f = quantile_field(&b, &levels, &[vec![0.0; 2], vec![0.0; 2]]).unwrap();
        assert!((0..2).all(|i| f.w_n_row(i).iter().all(|&w| w == 0.0)));
        assert_eq!(sup_statistic(&f, (0.0, 1.0), (0.0, 1.0)).unwrap(), 0.0);
        assert!(quantile_field(&b, &levels, &[vec![0.0; 2]]).is_err());
    }

    #[test]
    fn sup_picks_largest_cell() {
        let grid = TimeGrid::new(vec![0.0, 1.0]).unwrap();
        let b = PathBatch::from_paths(&grid, &[vec![0.0, -3.0]]).unwrap();
        let levels = LevelGrid::from_levels(vec![0.5]).unwrap();
        let f = quantile_field(&b, &levels, &[vec![0.0], vec![0.0]]).unwrap();
        assert_eq!(sup_statistic(&f, (0.0, 1.0), (0.1, 0.9)).unwrap(), 3.0);
        assert_eq!(sup_statistic(&f, (0.0, 0.5), (0.1, 0.9)).unwrap(), 0.0);
        assert!(sup_statistic(&f, (0.2, 0.5), (0.1, 0.9)).is_err());
    }

    #[test]
    fn vervaat_single_path() {
        let law = Dist1D::standard_normal();
        let b = batch(&[0.37]);
        let d = vervaat_identity_check(&b, 1, &law, &[0.1, 0.5, 0.9]).unwrap();
        assert!(d <= 1e-15, "{d}");
        let b = batch(&[0.4, -1.2, 2.0]);
        let d = vervaat_identity_check(&b, 1, &law, &[0.05, 0.3334, 0.7]).unwrap();
        assert!(d <= 1e-12, "{d}");
    }

    #[test]
    fn reflection_small_cases() {
        let v = [1.0, 2.0, 2.0, 5.0];
        for &a in &[0.1, 0.25, 0.5, 0.75, 0.9] {
            let q = reflected_quantile(&v, a).unwrap();
            assert!(is_alpha_quantile(&v, q, a), "alpha {a} q {q}");
        }
    }
}
