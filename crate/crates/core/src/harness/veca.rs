use serde::Serialize;

use super::{sci, Report};
use crate::error::{Error, Result};
use crate::geometry::TreeParams;
use crate::lorentz::{pytlik_surrogate_detailed, LorentzIndex};
use crate::maximal::{ball_weight, maximal_radial_profile, sphere_sum, MaximalParams};
use crate::numerics::LogScalar;
use crate::theory::{make_veca_g, make_veca_m, VecaParams};

pub const CITE_VECA: &str = "Theorem: M^{1/2} unbounded from L^{2,s} to L^{2,inf}";

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct VecaRun {
    pub params: VecaParams,
    /// Range of the supremum `sup_{n<=N} m(n) k^(n/2)`.
    pub sup_n: usize,
    /// Truncation of `g` for the direct maximal-function check.
    pub direct_n: usize,
    /// Largest norm at which `M^{1/2} g >= c m` is checked.
    pub direct_m: usize,
}

impl VecaRun {
    pub fn new(params: VecaParams, sup_n: usize) -> Self {
        VecaRun {
            params,
            sup_n,
            direct_n: 80,
            direct_m: 40,
        }
    }
}

/// The three computable parts of the `L^{2,s} -> L^{2,inf}` counterexample:
/// `g` has a finite `L^{2,s}` surrogate, `m(n) k^(n/2) = (1+n)^(1-beta)` is
/// unbounded, and `M^{1/2} g >= c m` pointwise.
pub fn run_veca(tree: TreeParams, run: VecaRun) -> Result<Report> {
    if run.sup_n > 400 {
        return Err(Error::param(format!("N is capped at 400, got {}", run.sup_n)));
    }
    if 2 * run.direct_m > run.direct_n {
        return Err(Error::param("the direct check needs ||x|| <= N/2"));
    }
    let k = tree.k();
    let vp = run.params;
    let mut report = Report::new(
        "veca",
        CITE_VECA,
        &["m", "maximal", "sphere_bound", "m_value", "maximal_over_m", "sphere_over_m"],
    );
    report
        .param("k", k)
        .param("s", vp.s())
        .param("beta", vp.beta())
        .param("sup_n", run.sup_n)
        .param("direct_n", run.direct_n)
        .param("direct_m", run.direct_m);

    let g = make_veca_g(tree, vp, run.direct_n);
    let norm = pytlik_surrogate_detailed(&g, LorentzIndex::new(2.0, vp.s())?)?;
    report.check(
        "g-surrogate-finite",
        norm.tail_error < 0.01,
        format!(
            "||g||_(2,s) surrogate {} with tail {} certified to relative error {:.3e}",
            sci(&norm.value),
            sci(&norm.tail),
            norm.tail_error
        ),
    );

    let m_sup = make_veca_m(tree, vp, run.sup_n);
    let sup = (0..=run.sup_n)
        .map(|n| &m_sup.value_at(n) * &LogScalar::from_exponent(n as f64 / 2.0, k))
        .fold(LogScalar::zero(k), LogScalar::max);
    let want = LogScalar::from_u64(1 + run.sup_n as u64, k).pow(1.0 - vp.beta());
    report.check(
        "m-sup-closed-form",
        sup.approx_eq(&want, crate::numerics::comparison_slack()),
        format!("sup_(n<={}) m(n) k^(n/2) = {} against (1+N)^(1-beta) = {}", run.sup_n, sci(&sup), sci(&want)),
    );

    let g_trunc = g.truncated(run.direct_n);
    let m_fn = make_veca_m(tree, vp, run.direct_m);
    let prof = maximal_radial_profile(&g_trunc, MaximalParams::exact(0.5)?, run.direct_m)?;
    let mut c_exact = f64::INFINITY;
    let mut c_sphere = f64::INFINITY;
    let mut consistent = true;
    for m in 0..=run.direct_m {
        let sphere = &sphere_sum(&g_trunc, m, m)? * &ball_weight(tree, m, 0.5);
        let mv = m_fn.value_at(m);
        let re = &prof.values[m] / &mv;
        let rs = &sphere / &mv;
        consistent &= sphere.le_at_precision(&prof.values[m]);
        c_exact = c_exact.min(re.to_f64());
        c_sphere = c_sphere.min(rs.to_f64());
        report.push_row(vec![m.to_string(), sci(&prof.values[m]), sci(&sphere), sci(&mv), sci(&re), sci(&rs)]);
    }
    report.check(
        "sphere-bound-below-maximal",
        consistent,
        "the single sphere S_|x|(x) never exceeds the supremum",
    );
    report.check(
        "maximal-dominates-m",
        c_sphere > 0.0 && c_exact >= c_sphere,
        format!(
            "on ||x|| <= {}: M^(1/2) g >= c m with c = {:.6e} (sphere bound alone gives {:.6e})",
            run.direct_m, c_exact, c_sphere
        ),
    );
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn closed_form_sup() {
        let tree = TreeParams::new(2).unwrap();
        let vp = VecaParams::new(2.0, 0.75).unwrap();
        let mut run = VecaRun::new(vp, 255);
        run.direct_n = 20;
        run.direct_m = 10;
        let r = run_veca(tree, run).unwrap();
        assert!(r.passed(), "{:?}", r.verdicts);
        assert!(r.verdict("m-sup-closed-form").unwrap().detail.contains("4.00000000000000e0"));
    }
}
