//! Experiment runners and their reports.
//!
//! Every runner returns a [`Report`]: a table of rows plus the checks it
//! asserted. A failed check is data, not an error.

mod delta;
mod growth;
mod invariants;
mod radial_bounded;
mod region;
mod rwt;
mod veca;
mod zclass;

use std::collections::BTreeMap;

use serde::Serialize;

pub use delta::run_delta_divergence;
pub use growth::run_growth;
pub use invariants::{run_invariants, InvariantsParams};
pub use radial_bounded::run_radial_bounded;
pub use region::{region_csv, region_rows, region_svg, RegionFigure, RegionRow};
pub use rwt::{run_rwt_probe, SetFamily};
pub use veca::{run_veca, VecaRun};
pub use zclass::{run_zclass, ZClassParams};

use crate::lorentz::{weak_norm, RadialFunction};
use crate::maximal::{maximal_radial_profile, MaximalParams};
use crate::numerics::{f64_to_sci, LogScalar};
use crate::Result;

pub const VERSION: &str = env!("CARGO_PKG_VERSION");

/// Significant digits of every number written to a table.
pub const TABLE_DIGITS: usize = 15;

/// One asserted property of an experiment.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Check {
    pub name: String,
    pub passed: bool,
    pub detail: String,
}

impl Check {
    pub fn new(name: impl Into<String>, passed: bool, detail: impl Into<String>) -> Self {
        Check {
            name: name.into(),
            passed,
            detail: detail.into(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Report {
    pub experiment: String,
    pub params: BTreeMap<String, serde_json::Value>,
    pub citation: String,
    pub columns: Vec<String>,
    pub rows: Vec<Vec<String>>,
    pub verdicts: Vec<Check>,
    pub seed: Option<u64>,
    pub version: String,
}

impl Report {
    pub fn new(experiment: &str, citation: &str, columns: &[&str]) -> Self {
        Report {
            experiment: experiment.into(),
            params: BTreeMap::new(),
            citation: citation.into(),
            columns: columns.iter().map(|c| c.to_string()).collect(),
            rows: Vec::new(),
            verdicts: Vec::new(),
            seed: None,
            version: VERSION.into(),
        }
    }

    pub fn param(&mut self, name: &str, value: impl Serialize) -> &mut Self {
        let v = serde_json::to_value(value).unwrap_or(serde_json::Value::Null);
        self.params.insert(name.into(), v);
        self
    }

    pub fn push_row(&mut self, row: Vec<String>) {
        debug_assert_eq!(row.len(), self.columns.len());
        self.rows.push(row);
    }

    pub fn check(&mut self, name: &str, passed: bool, detail: impl Into<String>) {
        self.verdicts.push(Check::new(name, passed, detail));
    }

    pub fn passed(&self) -> bool {
        self.verdicts.iter().all(|c| c.passed)
    }

    pub fn verdict(&self, name: &str) -> Option<&Check> {
        self.verdicts.iter().find(|c| c.name == name)
    }

    /// Column `name` parsed as floats.
    pub fn column_f64(&self, name: &str) -> Option<Vec<f64>> {
        let i = self.columns.iter().position(|c| c == name)?;
        self.rows.iter().map(|r| r[i].parse().ok()).collect()
    }

    pub fn to_csv(&self) -> Result<String> {
        let mut w = csv::Writer::from_writer(Vec::new());
        w.write_record(&self.columns)?;
        for row in &self.rows {
            w.write_record(row)?;
        }
        let bytes = w.into_inner().map_err(|e| crate::Error::Format(e.to_string()))?;
        String::from_utf8(bytes).map_err(|e| crate::Error::Format(e.to_string()))
    }

    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(self)?)
    }
}

pub(crate) fn sci(v: &LogScalar) -> String {
    v.to_sci(TABLE_DIGITS)
}

pub(crate) fn sci_f64(v: f64) -> String {
    f64_to_sci(v, TABLE_DIGITS)
}

/// Least-squares line through `(x, y)`: `(slope, intercept, r_squared)`.
pub fn linear_fit(x: &[f64], y: &[f64]) -> (f64, f64, f64) {
    let n = x.len() as f64;
    let mx = x.iter().sum::<f64>() / n;
    let my = y.iter().sum::<f64>() / n;
    let sxy: f64 = x.iter().zip(y).map(|(a, b)| (a - mx) * (b - my)).sum();
    let sxx: f64 = x.iter().map(|a| (a - mx).powi(2)).sum();
    let syy: f64 = y.iter().map(|b| (b - my).powi(2)).sum();
    let slope = sxy / sxx;
    let r2 = if syy == 0.0 { 1.0 } else { sxy * sxy / (sxx * syy) };
    (slope, my - slope * mx, r2)
}

/// Running maxima of a sequence.
pub fn running_sup(values: &[f64]) -> Vec<f64> {
    let mut best = f64::NEG_INFINITY;
    values
        .iter()
        .map(|&v| {
            best = best.max(v);
            best
        })
        .collect()
}

/// Relative change of the running sup over its last `window` members.
pub fn late_change(sup: &[f64], window: usize) -> f64 {
    if sup.len() <= window {
        return f64::INFINITY;
    }
    let last = sup[sup.len() - 1];
    let before = sup[sup.len() - 1 - window];
    (last - before) / before
}

/// Family members compared by the stability checks.
pub const STABILITY_WINDOW: usize = 10;

/// Stable when the running sup moves by less than `tol` over the last
/// [`STABILITY_WINDOW`] members. Shorter families are never stable.
pub fn is_stable(sup: &[f64], tol: f64) -> (bool, f64) {
    let change = late_change(sup, STABILITY_WINDOW);
    (change < tol, change)
}

/// Weak norm of `M^gamma f` over `B_{N_f + margin}(o)`, a lower bound for
/// the full weak norm that increases with the margin.
pub(crate) fn maximal_weak_norm(f: &RadialFunction, gamma: f64, target: f64, margin: usize) -> Result<LogScalar> {
    let reach = f.support_radius().unwrap_or(0) + margin;
    let prof = maximal_radial_profile(f, MaximalParams::exact(gamma)?, reach)?;
    let mf = RadialFunction::new(f.tree(), prof.values)?;
    weak_norm(&mf, target)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn fit_recovers_a_line() {
        let x: Vec<f64> = (0..10).map(f64::from).collect();
        let y: Vec<f64> = x.iter().map(|v| 2.5 * v - 1.0).collect();
        let (s, c, r2) = linear_fit(&x, &y);
        assert!((s - 2.5).abs() < 1e-12 && (c + 1.0).abs() < 1e-12 && (r2 - 1.0).abs() < 1e-12);
    }

    #[test]
    fn stability_rule() {
        let flat: Vec<f64> = (0..40).map(|i| 1.0 - 0.5f64.powi(i)).collect();
        assert!(is_stable(&running_sup(&flat), 0.01).0);
        let growing: Vec<f64> = (1..41).map(f64::from).collect();
        assert!(!is_stable(&running_sup(&growing), 0.01).0);
        assert!(!is_stable(&[1.0; 10], 0.01).0);
        assert!(is_stable(&[1.0; 11], 0.01).0);
    }

    #[test]
    fn csv_layout() {
        let mut r = Report::new("demo", "none", &["n", "value"]);
        r.push_row(vec!["0".into(), sci_f64(1.5)]);
        assert_eq!(r.to_csv().unwrap(), "n,value\n0,1.50000000000000e0\n");
    }
}
