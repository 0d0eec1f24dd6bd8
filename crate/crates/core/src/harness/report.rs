use std::fmt;
use std::io::Write;

use serde::Serialize;

use super::Pair;
use crate::error::Result;

pub const CSV_HEADER: [&str; 12] = [
    "experiment",
    "pair_s",
    "pair_beta",
    "pair_t",
    "pair_alpha",
    "n",
    "R",
    "estimate",
    "se",
    "analytic",
    "z",
    "verdict",
];

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Verdict {
    Pass,
    Fail,
    /// Reported for context; does not count toward the overall verdict.
    Info,
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Verdict::Pass => "pass",
            Verdict::Fail => "fail",
            Verdict::Info => "info",
        })
    }
}

/// One line of a report. Unused coordinates are `NaN`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ReportRow {
    pub pair_s: f64,
    pub pair_beta: f64,
    pub pair_t: f64,
    pub pair_alpha: f64,
    pub n: usize,
    pub r: usize,
    pub estimate: f64,
    pub se: f64,
    pub analytic: f64,
    pub z: f64,
    pub verdict: Verdict,
}

impl ReportRow {
    /// `z = (estimate - analytic) / se`, passing when `|z| <= z_max`.
    pub fn z_test(
        pair: Pair,
        n: usize,
        r: usize,
        estimate: f64,
        se: f64,
        analytic: f64,
        z_max: f64,
    ) -> Self {
        let z = if se > 0.0 {
            (estimate - analytic) / se
        } else if estimate == analytic {
            0.0
        } else {
            f64::INFINITY.copysign(estimate - analytic)
        };
        ReportRow {
            pair_s: pair.s,
            pair_beta: pair.beta,
            pair_t: pair.t,
            pair_alpha: pair.alpha,
            n,
            r,
            estimate,
            se,
            analytic,
            z,
            verdict: if z.abs() <= z_max {
                Verdict::Pass
            } else {
                Verdict::Fail
            },
        }
    }

    /// Passes when `estimate <= bound`; the bound is stored in the `analytic` column.
    pub fn at_most(pair: Pair, n: usize, r: usize, estimate: f64, se: f64, bound: f64) -> Self {
        ReportRow {
            pair_s: pair.s,
            pair_beta: pair.beta,
            pair_t: pair.t,
            pair_alpha: pair.alpha,
            n,
            r,
            estimate,
            se,
            analytic: bound,
            z: f64::NAN,
            verdict: if estimate <= bound {
                Verdict::Pass
            } else {
                Verdict::Fail
            },
        }
    }

    pub fn info(self) -> Self {
        ReportRow {
            verdict: Verdict::Info,
            ..self
        }
    }

    fn fields(&self, experiment: &str) -> Vec<String> {
        let f = |x: f64| format!("{x:.16e}");
        vec![
            experiment.to_string(),
            f(self.pair_s),
            f(self.pair_beta),
            f(self.pair_t),
            f(self.pair_alpha),
            self.n.to_string(),
            self.r.to_string(),
            f(self.estimate),
            f(self.se),
            f(self.analytic),
            f(self.z),
            self.verdict.to_string(),
        ]
    }
}

/// Rows produced by one experiment plus free-form notes.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Report {
    pub experiment: String,
    pub rows: Vec<ReportRow>,
    pub notes: Vec<String>,
}

/// Covariance experiments report one z-tested row per pair.
pub type CovarianceReport = Report;

impl Report {
    pub fn new(experiment: &str) -> Self {
        Report {
            experiment: experiment.to_string(),
            rows: Vec::new(),
            notes: Vec::new(),
        }
    }

    pub fn verdict(&self) -> Verdict {
        if self.rows.iter().any(|r| r.verdict == Verdict::Fail) {
            Verdict::Fail
        } else {
            Verdict::Pass
        }
    }

    pub fn passed(&self) -> bool {
        self.verdict() == Verdict::Pass
    }

    pub fn failures(&self) -> impl Iterator<Item = &ReportRow> {
        self.rows.iter().filter(|r| r.verdict == Verdict::Fail)
    }

    pub fn write_csv<W: Write>(&self, out: W) -> Result<()> {
        let mut w = csv::Writer::from_writer(out);
        w.write_record(CSV_HEADER)?;
        for row in &self.rows {
            w.write_record(row.fields(&self.experiment))?;
        }
        w.flush()?;
        Ok(())
    }

    pub fn to_csv_string(&self) -> String {
        let mut buf = Vec::new();
        self.write_csv(&mut buf)
            .expect("writing to memory cannot fail");
        String::from_utf8(buf).expect("csv output is utf-8")
    }

    /// Human-readable one-line-per-row summary.
    pub fn summary(&self) -> String {
        let mut s = String::new();
        for r in &self.rows {
            s.push_str(&format!(
                "{:<5} {} s={} beta={} t={} alpha={} n={} R={} estimate={:.6} se={:.6} target={:.6} z={:.3}\n",
                r.verdict, self.experiment, r.pair_s, r.pair_beta, r.pair_t, r.pair_alpha, r.n, r.r,
                r.estimate, r.se, r.analytic, r.z
            ));
        }
        for note in &self.notes {
            s.push_str(&format!("note: {note}\n"));
        }
        s.push_str(&format!("overall: {}\n", self.verdict()));
        s
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn z_rows_and_csv() {
        let mut rep = Report::new("cov_convergence");
        rep.rows.push(ReportRow::z_test(
            Pair::diagonal(1.0, 0.5),
            10,
            20,
            1.0,
            0.5,
            2.0,
            3.0,
        ));
        rep.rows.push(ReportRow::z_test(
            Pair::diagonal(0.0, 0.5),
            10,
            20,
            0.0,
            0.0,
            0.0,
            3.0,
        ));
        assert_eq!(rep.rows[0].z, -2.0);
        assert!(rep.passed());
        let csv = rep.to_csv_string();
        let mut lines = csv.lines();
        assert_eq!(lines.next().unwrap(), CSV_HEADER.join(","));
        let first: Vec<&str> = lines.next().unwrap().split(',').collect();
        assert_eq!(first[1], "1.0000000000000000e0");
        assert_eq!(first[11], "pass");
        rep.rows.push(ReportRow::at_most(
            Pair::diagonal(f64::NAN, f64::NAN),
            1,
            1,
            0.2,
            0.0,
            0.1,
        ));
        assert!(!rep.passed());
        assert!(rep.to_csv_string().contains("NaN"));
    }
}
