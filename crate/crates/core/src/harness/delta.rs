use super::growth::CITE_ENDPOINT;
use super::{linear_fit, sci, sci_f64, Report};
use crate::error::{Error, Result};
use crate::geometry::TreeParams;
use crate::lorentz::{lorentz_norm, LorentzIndex, RadialFunction};
use crate::maximal::ball_weight;
use crate::numerics::LogScalar;

/// Partial sums of the radial surrogate of `||M^gamma delta_o||_{1/gamma,t}^t`:
/// `sum_{j<=N} (k^(j gamma) |B_j(o)|^(-gamma))^t`.
///
/// Each summand tends to `((k-1)/(k+1))^(gamma t)`, so the sums grow
/// affinely. With `t = inf` the surrogate is a maximum and stays at 1.
pub fn run_delta_divergence(tree: TreeParams, gamma: f64, t: f64, big_n: usize) -> Result<Report> {
    if !(gamma > 0.0 && gamma < 1.0) {
        return Err(Error::param(format!("gamma must lie in (0, 1), got {gamma}")));
    }
    if t.is_nan() || t < 1.0 {
        return Err(Error::param(format!("t must lie in [1, inf], got {t}")));
    }
    let k = tree.k();
    let p = 1.0 / gamma;
    let mut report = Report::new(
        "delta-divergence",
        CITE_ENDPOINT,
        &["N", "term", "partial", "exact_truncated"],
    );
    report
        .param("k", k)
        .param("gamma", gamma)
        .param("t", t)
        .param("N", big_n);

    let mdelta: Vec<LogScalar> = (0..=big_n).map(|j| ball_weight(tree, j, gamma)).collect();
    let terms: Vec<LogScalar> = mdelta
        .iter()
        .enumerate()
        .map(|(j, v)| (v * &LogScalar::from_exponent(j as f64 * gamma, k)).pow(if t.is_infinite() { 1.0 } else { t }))
        .collect();

    let mut partials = Vec::with_capacity(big_n + 1);
    let mut acc = LogScalar::zero(k);
    for (n, term) in terms.iter().enumerate() {
        acc = if t.is_infinite() { acc.max(term.clone()) } else { &acc + term };
        partials.push(acc.to_f64());
        let truncated = RadialFunction::new(tree, mdelta[..=n].to_vec())?;
        let exact = lorentz_norm(&truncated, LorentzIndex::new(p, t)?)?;
        let exact = if t.is_infinite() { exact } else { exact.pow(t) };
        report.push_row(vec![n.to_string(), sci(term), sci(&acc), sci(&exact)]);
    }

    report.check(
        "first-term",
        (terms[0].to_f64() - 1.0).abs() < 1e-15,
        "the j = 0 summand is 1",
    );
    if t.is_infinite() {
        let sup = partials[big_n];
        report.check(
            "bounded-sup",
            sup <= 1.0 + 1e-15,
            format!("sup_j k^(j gamma) |B_j|^(-gamma) = {}", sci_f64(sup)),
        );
        return Ok(report);
    }
    let limit = (f64::from(k - 1) / f64::from(k + 1)).powf(gamma * t);
    let last = terms[big_n].to_f64();
    report.check(
        "per-term-limit",
        limit > 0.0 && (big_n < 10 || (last - limit).abs() <= 0.01 * limit),
        format!("last term {} against limit ((k-1)/(k+1))^(gamma t) = {}", sci_f64(last), sci_f64(limit)),
    );
    if big_n >= 2 {
        let xs: Vec<f64> = (0..=big_n).map(|n| n as f64).collect();
        let (slope, _, r2) = linear_fit(&xs, &partials);
        report.check(
            "affine-growth",
            r2 >= 0.99 && slope > 0.0,
            format!("slope {slope:.6}, R^2 {r2:.6}"),
        );
        let c = (1..=big_n)
            .map(|n| partials[n] / n as f64)
            .fold(f64::INFINITY, f64::min);
        report.check("linear-lower-bound", c > 0.0, format!("partial_N >= c N with c = {}", sci_f64(c)));
    }
    Ok(report)
}
