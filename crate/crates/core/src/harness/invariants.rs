use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use super::Report;
use crate::error::{Error, Result};
use crate::geometry::{enumerate_ball, TreeParams, DEFAULT_ENUMERATION_BUDGET};
use crate::lorentz::{lebesgue_norm, FiniteFunction};
use crate::maximal::{convolve_finite, maximal_at, maximal_bruteforce, uncentered_bruteforce, MaximalParams, RadialKernel};
use crate::numerics::LogScalar;

pub const CITE_POINTWISE: &str = "Remarks: pointwise bounds";

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct InvariantsParams {
    /// Truncation radius of the tree.
    pub big_r: usize,
    /// Functions are supported in `B_support(o)`.
    pub support: usize,
    pub count: usize,
    pub gammas: Vec<f64>,
}

impl Default for InvariantsParams {
    fn default() -> Self {
        InvariantsParams {
            big_r: 6,
            support: 3,
            count: 100,
            gammas: vec![0.25, 0.5, 0.75],
        }
    }
}

/// A seeded non-radial function with integer values 1..=9 on a random
/// subset of `B_support(o)`.
pub fn random_function(tree: TreeParams, support: usize, seed: u64, index: usize) -> Result<FiniteFunction> {
    let k = tree.k();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(index as u64);
    let density: f64 = rng.gen_range(0.1..1.0);
    let mut f = FiniteFunction::zero(tree);
    for x in enumerate_ball(tree, support, DEFAULT_ENUMERATION_BUDGET)? {
        if rng.gen_bool(density) {
            f.insert(x, LogScalar::from_u64(rng.gen_range(1..10), k))?;
        }
    }
    if f.is_empty() {
        f.insert(tree.root(), LogScalar::one(k))?;
    }
    Ok(f)
}

#[derive(Default)]
struct Violations {
    identity: usize,
    convolution: usize,
    holder: usize,
    uncentered: usize,
}

fn check_one(tree: TreeParams, f: &FiniteFunction, gamma: f64, big_r: usize) -> Result<Violations> {
    let mut v = Violations::default();
    let m = maximal_bruteforce(f, gamma, big_r, DEFAULT_ENUMERATION_BUDGET)?;
    let u = uncentered_bruteforce(f, gamma, big_r, DEFAULT_ENUMERATION_BUDGET)?;
    let holder = lebesgue_norm(f, 1.0 / (1.0 - gamma))?;
    let half = MaximalParams::exact(gamma / 2.0)?;
    let kern = RadialKernel::Full { gamma };
    for x in enumerate_ball(tree, big_r, DEFAULT_ENUMERATION_BUDGET)? {
        let mx = m.get(&x);
        if mx < f.get(&x) {
            v.identity += 1;
        }
        if !mx.le_at_precision(&convolve_finite(f, kern, &x)?) {
            v.convolution += 1;
        }
        if !mx.le_at_precision(&holder) {
            v.holder += 1;
        }
        if !u.get(&x).le_at_precision(&maximal_at(f, &x, half)?.value) {
            v.uncentered += 1;
        }
    }
    Ok(v)
}

/// Counts violations of four pointwise inequalities on `B_R(o)`:
/// `M^gamma f >= |f|`, `M^gamma f <= A^gamma |f|`,
/// `M^gamma f <= ||f||_{1/(1-gamma)}` and `M~^gamma f <= M^{gamma/2} f`.
/// Truncated operators take interior-safe radii; `A^gamma` and the
/// right-hand `M^{gamma/2}` are exact.
pub fn run_invariants(tree: TreeParams, params: &InvariantsParams, seed: u64) -> Result<Report> {
    if params.gammas.iter().any(|&g| !(g > 0.0 && g < 1.0)) {
        return Err(Error::param("invariant gammas must lie in (0, 1)"));
    }
    if params.support > params.big_r {
        return Err(Error::param("support radius exceeds the truncation radius"));
    }
    let mut report = Report::new(
        "invariants",
        CITE_POINTWISE,
        &["member", "gamma", "support_size", "identity", "convolution", "holder", "uncentered"],
    );
    report
        .param("k", tree.k())
        .param("R", params.big_r)
        .param("support", params.support)
        .param("count", params.count)
        .param("gammas", &params.gammas);
    report.seed = Some(seed);

    let jobs: Vec<(usize, f64)> = (0..params.count)
        .flat_map(|i| params.gammas.iter().map(move |&g| (i, g)))
        .collect();
    let results = jobs
        .par_iter()
        .map(|&(i, gamma)| {
            let f = random_function(tree, params.support, seed, i)?;
            Ok((i, gamma, f.len(), check_one(tree, &f, gamma, params.big_r)?))
        })
        .collect::<Result<Vec<_>>>()?;

    let mut totals = Violations::default();
    for (i, gamma, size, v) in results {
        totals.identity += v.identity;
        totals.convolution += v.convolution;
        totals.holder += v.holder;
        totals.uncentered += v.uncentered;
        report.push_row(vec![
            i.to_string(),
            gamma.to_string(),
            size.to_string(),
            v.identity.to_string(),
            v.convolution.to_string(),
            v.holder.to_string(),
            v.uncentered.to_string(),
        ]);
    }
    for (name, count) in [
        ("identity", totals.identity),
        ("convolution", totals.convolution),
        ("holder", totals.holder),
        ("uncentered", totals.uncentered),
    ] {
        report.check(name, count == 0, format!("{count} violations"));
    }
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_suite_is_clean() {
        let tree = TreeParams::new(2).unwrap();
        let params = InvariantsParams {
            big_r: 4,
            support: 2,
            count: 5,
            gammas: vec![0.5],
        };
        let r = run_invariants(tree, &params, 11).unwrap();
        assert_eq!(r.rows.len(), 5);
        assert!(r.passed(), "{:?}", r.verdicts);
    }

    #[test]
    fn random_functions_are_seeded() {
        let tree = TreeParams::new(3).unwrap();
        let a = random_function(tree, 2, 5, 3).unwrap();
        let b = random_function(tree, 2, 5, 3).unwrap();
        let c = random_function(tree, 2, 5, 4).unwrap();
        assert_eq!(a, b);
        assert_ne!(a, c);
    }
}
