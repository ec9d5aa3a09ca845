use super::{linear_fit, sci, sci_f64, Report};
use crate::error::{Error, Result};
use crate::geometry::TreeParams;
use crate::lorentz::{lorentz_norm, LorentzIndex, RadialFunction};
use crate::maximal::{maximal_radial_profile, MaximalParams};
use crate::theory::{make_ball_indicator, make_lower_profile};

pub const CITE_ENDPOINT: &str = "Proposition: endpoint unboundedness";

/// `||chi_{B_n} M^gamma f_n||_{p,t} / ||f_n||_{p,s}` for `f_n = chi_{B_n}` and
/// `p = 1/(1-gamma)`.
///
/// The full `M^gamma f_n` is not in `L^{p,t}` when `gamma <= 1/2`, so the
/// numerator keeps only the part on `B_n(o)`. That part already dominates
/// `phi_n = f_n k^((n-||x||)(1-gamma))`, so the ratio stays a lower bound
/// for the operator norm.
pub fn run_growth(tree: TreeParams, gamma: f64, s: f64, t: f64, n_max: usize) -> Result<Report> {
    if !(gamma > 0.0 && gamma < 1.0) {
        return Err(Error::param(format!("gamma must lie in (0, 1), got {gamma}")));
    }
    if !t.is_finite() {
        return Err(Error::param("t must be finite"));
    }
    if n_max > 64 {
        return Err(Error::param(format!("n_max is capped at 64, got {n_max}")));
    }
    let p = 1.0 / (1.0 - gamma);
    let num_idx = LorentzIndex::new(p, t)?;
    let den_idx = LorentzIndex::new(p, s)?;
    let params = MaximalParams::exact(gamma)?;

    let mut report = Report::new(
        "growth",
        CITE_ENDPOINT,
        &["n", "numerator", "denominator", "ratio", "lower_bound", "ratio_over_n_pow"],
    );
    report
        .param("k", tree.k())
        .param("gamma", gamma)
        .param("p", p)
        .param("s", s)
        .param("t", t)
        .param("n_max", n_max);

    let mut ratios = Vec::with_capacity(n_max + 1);
    let mut dominated = true;
    let mut closed_form_gap = 0.0;
    let mut c_min = f64::INFINITY;
    for n in 0..=n_max {
        let f = make_ball_indicator(tree, n);
        let mf = maximal_radial_profile(&f, params, n)?.values;
        let phi = make_lower_profile(tree, n, gamma);
        dominated &= mf.iter().zip(phi.values()).all(|(a, b)| b.le_at_precision(a));
        let restricted = RadialFunction::new(tree, mf)?;
        let num = lorentz_norm(&restricted, num_idx)?;
        let den = lorentz_norm(&f, den_idx)?;
        let lower = lorentz_norm(&phi, num_idx)?;
        let ratio = &num / &den;
        let r = ratio.to_f64();
        ratios.push(r);
        if n == 0 {
            let want = (p / t).powf(1.0 / t) / if s.is_infinite() { 1.0 } else { (p / s).powf(1.0 / s) };
            closed_form_gap = (r - want).abs() / want;
        }
        let scaled = if n == 0 {
            String::new()
        } else {
            let v = r / (n as f64).powf(1.0 / t);
            c_min = c_min.min(v);
            sci_f64(v)
        };
        report.push_row(vec![n.to_string(), sci(&num), sci(&den), sci(&ratio), sci(&lower), scaled]);
    }

    report.check(
        "dominates-lower-profile",
        dominated,
        "M^gamma chi_{B_n} >= k^((n-|x|)(1-gamma)) on B_n",
    );
    report.check(
        "dirac-row",
        closed_form_gap < 1e-12,
        format!("n = 0 row against (p/t)^(1/t) / (p/s)^(1/s): relative gap {closed_form_gap:.3e}"),
    );
    if n_max >= 1 {
        report.check(
            "ratio-over-n-power",
            c_min > 0.0 && c_min.is_finite(),
            format!("c = min_n ratio_n / n^(1/t) = {}", sci_f64(c_min)),
        );
        let monotone = ratios.windows(2).all(|w| w[1] >= w[0]);
        report.check("monotone", monotone, "ratio nondecreasing in n");
    }
    if n_max >= 4 {
        let lo = n_max / 4;
        let growth = ratios[n_max] / ratios[lo];
        let need = 0.8 * (n_max as f64 / lo as f64).powf(1.0 / t);
        report.check(
            "quarter-growth",
            growth >= need,
            format!("ratio_{n_max} / ratio_{lo} = {growth:.6} (need >= {need:.6})"),
        );
    }
    if n_max >= 10 {
        let ns: Vec<f64> = (8..=n_max).map(|n| (n as f64).ln()).collect();
        let ys: Vec<f64> = (8..=n_max).map(|n| ratios[n].ln()).collect();
        let (slope, _, _) = linear_fit(&ns, &ys);
        let need = 1.0 / t - 0.15;
        report.check(
            "slope",
            slope >= need,
            format!("log-log slope over n in [8, {n_max}] = {slope:.6} (need >= {need:.6})"),
        );
    }
    Ok(report)
}
