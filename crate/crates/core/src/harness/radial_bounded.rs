use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use super::{is_stable, maximal_weak_norm, running_sup, sci, sci_f64, Report};
use crate::error::{Error, Result};
use crate::geometry::TreeParams;
use crate::lorentz::{lorentz_norm, LorentzIndex, RadialFunction};
use crate::numerics::LogScalar;
use crate::theory::{make_ball_indicator, make_sphere_indicator};

pub const CITE_RADIAL: &str = "Proposition: radial functions";

/// Largest support radius in the test family.
pub const MAX_SUPPORT: usize = 30;

/// Norms beyond the support at which `M^gamma f` is sampled.
pub const DEFAULT_MARGIN: usize = 24;

fn cases(gamma: f64) -> Result<Vec<(f64, f64)>> {
    let (a, b) = (1.0 / gamma, 1.0 / (1.0 - gamma));
    if gamma > 0.5 && gamma < 1.0 {
        Ok(vec![(a, a), (b, b)])
    } else if gamma > 0.0 && gamma < 0.5 {
        Ok(vec![(b, a)])
    } else {
        Err(Error::param(format!(
            "the radial estimates cover gamma in (0, 1/2) and (1/2, 1), got {gamma}"
        )))
    }
}

/// Member `i` of the family: kinds cycle through ball, sphere, critical
/// geometric profile and seeded random table, with support radius `i / 4`.
fn member(tree: TreeParams, i: usize, p: f64, seed: u64) -> (&'static str, RadialFunction) {
    let k = tree.k();
    let n = i / 4;
    match i % 4 {
        0 => ("ball", make_ball_indicator(tree, n)),
        1 => ("sphere", make_sphere_indicator(tree, n)),
        2 => {
            let values = (0..=n).map(|m| LogScalar::from_exponent(-(m as f64) / p, k)).collect();
            ("geometric", RadialFunction::new(tree, values).expect("tree base"))
        }
        _ => {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            rng.set_stream(i as u64);
            let mut values: Vec<u64> = (0..=n).map(|_| rng.gen_range(0..10)).collect();
            if values.iter().all(|&v| v == 0) {
                values[0] = 1;
            }
            let values = values.into_iter().map(|v| LogScalar::from_u64(v, k)).collect();
            ("random", RadialFunction::new(tree, values).expect("tree base"))
        }
    }
}

/// `||M^gamma f||_{target,inf} / ||f||_{p,s}` over a family of radial `f`.
pub fn run_radial_bounded(tree: TreeParams, gamma: f64, s: f64, family_size: usize, seed: u64) -> Result<Report> {
    let cases = cases(gamma)?;
    let family_size = family_size.min(4 * (MAX_SUPPORT + 1));
    let mut report = Report::new(
        "radial-bounded",
        CITE_RADIAL,
        &["p", "target", "member", "kind", "support", "numerator", "denominator", "ratio", "running_sup"],
    );
    report
        .param("k", tree.k())
        .param("gamma", gamma)
        .param("s", s)
        .param("family_size", family_size)
        .param("margin", DEFAULT_MARGIN);
    report.seed = Some(seed);

    for (p, target) in cases {
        let idx = LorentzIndex::new(p, s)?;
        let rows = (0..family_size)
            .into_par_iter()
            .map(|i| {
                let (kind, f) = member(tree, i, p, seed);
                let num = maximal_weak_norm(&f, gamma, target, DEFAULT_MARGIN)?;
                let den = lorentz_norm(&f, idx)?;
                Ok((i, kind, f.support_radius().unwrap_or(0), num, den))
            })
            .collect::<Result<Vec<_>>>()?;
        let ratios: Vec<f64> = rows.iter().map(|(_, _, _, n, d)| (n / d).to_f64()).collect();
        let sup = running_sup(&ratios);
        for ((i, kind, support, num, den), (r, rs)) in rows.iter().zip(ratios.iter().zip(&sup)) {
            report.push_row(vec![
                sci_f64(p),
                sci_f64(target),
                i.to_string(),
                kind.to_string(),
                support.to_string(),
                sci(num),
                sci(den),
                sci_f64(*r),
                sci_f64(*rs),
            ]);
        }
        let (stable, change) = is_stable(&sup, 0.01);
        let constant = sup.last().copied().unwrap_or(0.0);
        report.check(
            &format!("stable-p{p:.4}-target{target:.4}"),
            stable,
            format!("empirical constant {} (late relative change {change:.3e})", sci_f64(constant)),
        );
    }
    Ok(report)
}
