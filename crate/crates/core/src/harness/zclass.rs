use rug::Integer;
use serde::Serialize;

use super::{linear_fit, sci, sci_f64, Report};
use crate::error::{Error, Result};
use crate::geometry::{ball_size, sphere_decomposition, sphere_size, TreeParams};
use crate::numerics::LogScalar;

pub const CITE_ZCLASS: &str = "Comparison: weighted sufficient condition";

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct ZClassParams {
    pub epsilon: f64,
    pub gamma: f64,
    pub p: f64,
    pub q: f64,
}

impl ZClassParams {
    pub fn new(epsilon: f64, gamma: f64, p: f64, q: f64) -> Result<Self> {
        if !(epsilon > 0.0 && epsilon < 1.0) {
            return Err(Error::param(format!("epsilon must lie in (0, 1), got {epsilon}")));
        }
        if !(gamma > 0.0 && gamma < 1.0) {
            return Err(Error::param(format!("gamma must lie in (0, 1), got {gamma}")));
        }
        if !(p >= 1.0 && q >= 1.0) {
            return Err(Error::param("p and q must be at least 1"));
        }
        Ok(ZClassParams { epsilon, gamma, p, q })
    }

    /// The critical choice `p = 1/(1-gamma)`.
    pub fn critical(epsilon: f64, gamma: f64, q: f64) -> Result<Self> {
        Self::new(epsilon, gamma, 1.0 / (1.0 - gamma), q)
    }

    /// Growth rate of `log_k C_n`: `2/q - 1/p - epsilon gamma`.
    pub fn theoretical_slope(&self) -> f64 {
        2.0 / self.q - 1.0 / self.p - self.epsilon * self.gamma
    }
}

/// The constant in the counting-measure test inequality for `E = B_n(o)`,
/// `F = B_{2n}(o)`, `r = n`:
/// `C_n = sum_{x in E} |F ∩ S_n(x)| / (k^(epsilon n gamma) |E|^(1/p) |F|^(1-1/q))`.
pub fn run_zclass(tree: TreeParams, zp: ZClassParams, n_max: usize) -> Result<Report> {
    if n_max > 20 {
        return Err(Error::param(format!("n_max is capped at 20, got {n_max}")));
    }
    let k = tree.k();
    let mut report = Report::new("zclass", CITE_ZCLASS, &["n", "lhs", "constant", "log_k_constant"]);
    report
        .param("k", k)
        .param("epsilon", zp.epsilon)
        .param("gamma", zp.gamma)
        .param("p", zp.p)
        .param("q", zp.q)
        .param("n_max", n_max);

    let mut logs = Vec::with_capacity(n_max + 1);
    for n in 0..=n_max {
        // S_n(x) ⊆ B_{2n}(o) for every x in B_n(o)
        let lhs: Integer = (0..=n)
            .map(|m| sphere_size(tree, m) * sphere_decomposition(tree, m, n).total())
            .sum();
        let e = LogScalar::from_integer(&ball_size(tree, n), k)?;
        let f = LogScalar::from_integer(&ball_size(tree, 2 * n), k)?;
        let denom = &(&LogScalar::from_exponent(zp.epsilon * n as f64 * zp.gamma, k) * &e.pow(1.0 / zp.p))
            * &f.pow(1.0 - 1.0 / zp.q);
        let c = &LogScalar::from_integer(&lhs, k)? / &denom;
        let log_c = c.exponent_f64().unwrap_or(f64::NEG_INFINITY);
        logs.push(log_c);
        report.push_row(vec![n.to_string(), lhs.to_string(), sci(&c), sci_f64(log_c)]);
    }

    report.check(
        "c0-is-one",
        logs[0].abs() < 1e-12,
        "n = 0: a single point and its zero-radius sphere",
    );
    let theory = zp.theoretical_slope();
    if n_max >= 2 {
        let xs: Vec<f64> = (1..=n_max).map(|n| n as f64).collect();
        let (slope, _, _) = linear_fit(&xs, &logs[1..]);
        if theory > 0.0 {
            let rel = (slope - theory).abs() / theory;
            report.check(
                "slope",
                rel <= 0.05,
                format!("fitted slope {slope:.6} against 2/q - 1/p - epsilon gamma = {theory:.6} (relative gap {rel:.3e})"),
            );
        } else {
            report.check(
                "slope",
                true,
                format!("fitted slope {slope:.6}; theoretical slope {theory:.6} is not positive, so C_n stays bounded"),
            );
        }
    }
    Ok(report)
}
