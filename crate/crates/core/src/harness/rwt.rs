use std::fmt;
use std::str::FromStr;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use super::{late_change, maximal_weak_norm, running_sup, sci, sci_f64, Report, STABILITY_WINDOW};
use crate::error::{Error, Result};
use crate::geometry::{ball_size, enumerate_ball, TreeParams, DEFAULT_ENUMERATION_BUDGET};
use crate::lorentz::{weak_norm, FiniteFunction, RadialFunction};
use crate::maximal::{maximal_at, MaximalParams};
use crate::numerics::LogScalar;
use crate::theory::{make_ball_indicator, make_dirac, make_sphere_indicator, restricted_verdict, Status};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SetFamily {
    Balls,
    Spheres,
    /// `B_n(o) ∪ S_{2n+1}(o)`.
    BallPlusFarSphere,
    /// Seeded random subsets of a small ball.
    RandomSubsets,
}

impl SetFamily {
    pub const ALL: [SetFamily; 4] = [
        SetFamily::Balls,
        SetFamily::Spheres,
        SetFamily::BallPlusFarSphere,
        SetFamily::RandomSubsets,
    ];

    pub fn name(self) -> &'static str {
        match self {
            SetFamily::Balls => "balls",
            SetFamily::Spheres => "spheres",
            SetFamily::BallPlusFarSphere => "ball-plus-far-sphere",
            SetFamily::RandomSubsets => "random-subsets",
        }
    }
}

impl fmt::Display for SetFamily {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for SetFamily {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        SetFamily::ALL
            .into_iter()
            .find(|f| f.name() == s)
            .ok_or_else(|| Error::param(format!("unknown set family {s:?}")))
    }
}

/// Radius of the ball random subsets are drawn from: at most 5, and small
/// enough that `B_{2r}(o)` stays cheap to evaluate.
fn random_radius(tree: TreeParams) -> usize {
    (0..=5usize)
        .rev()
        .find(|&r| ball_size(tree, 2 * r) <= 5000)
        .unwrap_or(0)
}

const RADIAL_MARGIN: usize = 24;

struct Member {
    size: rug::Integer,
    numerator: LogScalar,
}

fn radial_member(f: &RadialFunction, gamma: f64, q: f64, margin: usize) -> Result<Member> {
    let size = f
        .values()
        .iter()
        .enumerate()
        .filter(|(_, v)| !v.is_zero())
        .map(|(n, _)| crate::geometry::sphere_size(f.tree(), n))
        .sum();
    Ok(Member {
        size,
        numerator: maximal_weak_norm(f, gamma, q, margin)?,
    })
}

fn random_member(tree: TreeParams, gamma: f64, q: f64, index: usize, seed: u64) -> Result<Member> {
    let radius = random_radius(tree);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(index as u64);
    let density: f64 = rng.gen_range(0.05..1.0);
    let mut set: Vec<_> = enumerate_ball(tree, radius, DEFAULT_ENUMERATION_BUDGET)?
        .filter(|_| rng.gen_bool(density))
        .collect();
    if set.is_empty() {
        set.push(tree.root());
    }
    let size = rug::Integer::from(set.len());
    let chi = FiniteFunction::indicator(tree, set)?;
    let params = MaximalParams::exact(gamma)?;
    let mut mf = FiniteFunction::zero(tree);
    for x in enumerate_ball(tree, 2 * radius, DEFAULT_ENUMERATION_BUDGET)? {
        let v = maximal_at(&chi, &x, params)?.value;
        mf.insert(x, v)?;
    }
    Ok(Member {
        size,
        numerator: weak_norm(&mf, q)?,
    })
}

fn family_member(tree: TreeParams, family: SetFamily, gamma: f64, q: f64, n: usize, seed: u64) -> Result<Member> {
    let k = tree.k();
    match family {
        SetFamily::Balls => radial_member(&make_ball_indicator(tree, n), gamma, q, RADIAL_MARGIN),
        SetFamily::Spheres => radial_member(&make_sphere_indicator(tree, n), gamma, q, RADIAL_MARGIN),
        SetFamily::BallPlusFarSphere => {
            let mut values = vec![LogScalar::zero(k); 2 * n + 2];
            for v in values.iter_mut().take(n + 1) {
                *v = LogScalar::one(k);
            }
            values[2 * n + 1] = LogScalar::one(k);
            radial_member(&RadialFunction::new(tree, values)?, gamma, q, RADIAL_MARGIN)
        }
        SetFamily::RandomSubsets => random_member(tree, gamma, q, n, seed),
    }
}

/// `||M^gamma chi_E||_{q,inf} / ||chi_E||_{p,1}` along a family of sets,
/// with `||chi_E||_{p,1} = p |E|^(1/p)`.
///
/// Numerators are weak norms over a finite piece of the tree, so every
/// ratio is a lower bound. In the bounded region the running supremum must
/// settle; in the unbounded region a witness family must grow.
pub fn run_rwt_probe(
    tree: TreeParams,
    gamma: f64,
    p: f64,
    q: f64,
    family: SetFamily,
    n_max: usize,
    seed: u64,
) -> Result<Report> {
    if !p.is_finite() || !q.is_finite() {
        return Err(Error::param("restricted weak type probes need finite p and q"));
    }
    let verdict = restricted_verdict(gamma, p, q)?;
    let mut report = Report::new(
        "rwt-probe",
        verdict.citation,
        &["family", "n", "set_size", "numerator", "denominator", "ratio", "running_sup"],
    );
    report
        .param("k", tree.k())
        .param("gamma", gamma)
        .param("p", p)
        .param("q", q)
        .param("family", family.name())
        .param("n_max", n_max)
        .param("verdict", verdict.status);
    report.seed = Some(seed);

    let rows = |label: &str, eval: &(dyn Fn(usize) -> Result<Member> + Sync)| -> Result<(Vec<Vec<String>>, Vec<f64>)> {
        let members = (0..=n_max).into_par_iter().map(eval).collect::<Result<Vec<_>>>()?;
        let k = tree.k();
        let mut out = Vec::with_capacity(members.len());
        let mut ratios = Vec::with_capacity(members.len());
        for m in &members {
            let den = &LogScalar::from_f64(p, k)? * &LogScalar::from_integer(&m.size, k)?.pow(1.0 / p);
            ratios.push((&m.numerator / &den).to_f64());
        }
        let sup = running_sup(&ratios);
        for (n, m) in members.iter().enumerate() {
            let den = &LogScalar::from_f64(p, k)? * &LogScalar::from_integer(&m.size, k)?.pow(1.0 / p);
            out.push(vec![
                label.to_string(),
                n.to_string(),
                m.size.to_string(),
                sci(&m.numerator),
                sci(&den),
                sci_f64(ratios[n]),
                sci_f64(sup[n]),
            ]);
        }
        Ok((out, ratios))
    };

    let (main_rows, ratios) = rows(family.name(), &|n| family_member(tree, family, gamma, q, n, seed))?;
    for r in main_rows {
        report.push_row(r);
    }
    let sup = running_sup(&ratios);
    let change = late_change(&sup, STABILITY_WINDOW);

    match verdict.status {
        Status::Bounded => {
            report.check(
                "running-sup-stable",
                change < 0.01,
                format!(
                    "running sup {} changed by {change:.3e} over the last {STABILITY_WINDOW} members",
                    sci_f64(*sup.last().unwrap_or(&0.0))
                ),
            );
        }
        Status::Unbounded | Status::Unknown => {
            let by_balls = lt_tol(1.0 / p, 1.0 - gamma) || q < p;
            let (label, witness): (&str, Box<dyn Fn(usize) -> Result<Member> + Sync>) = if by_balls {
                ("witness-balls", Box::new(|n| radial_member(&make_ball_indicator(tree, n), gamma, q, RADIAL_MARGIN)))
            } else {
                ("witness-dirac", Box::new(|n| radial_member(&make_dirac(tree), gamma, q, n)))
            };
            let (w_rows, w) = rows(label, witness.as_ref())?;
            for r in w_rows {
                report.push_row(r);
            }
            let half = n_max / 2;
            let increasing = w[half..].windows(2).all(|x| x[1] > x[0]);
            let factor = w[n_max] / w[half];
            report.check(
                "witness-grows",
                n_max >= 2 && increasing && factor >= 1.5,
                format!("{label}: ratio_{n_max} / ratio_{half} = {factor:.6e}, strictly increasing on the second half: {increasing}"),
            );
        }
    }
    Ok(report)
}

fn lt_tol(a: f64, b: f64) -> bool {
    a < b - crate::theory::EXPONENT_TOL
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn family_names_round_trip() {
        for f in SetFamily::ALL {
            assert_eq!(f.name().parse::<SetFamily>().unwrap(), f);
        }
        assert!("cubes".parse::<SetFamily>().is_err());
    }

    #[test]
    fn dirac_member_matches_closed_form() {
        // E = {o}: ||M chi_E||_{q,inf} = max_m |B_m|^(1/q - gamma) on the sampled ball
        let tree = TreeParams::new(2).unwrap();
        let m = family_member(tree, SetFamily::Balls, 0.5, 2.0, 0, 0).unwrap();
        assert_eq!(m.size, 1);
        assert!((m.numerator.to_f64() - 1.0).abs() < 1e-14);
    }

    #[test]
    fn unbounded_point_grows() {
        let tree = TreeParams::new(2).unwrap();
        let r = run_rwt_probe(tree, 0.25, 2.0, 4.0, SetFamily::Balls, 12, 7).unwrap();
        assert!(r.verdict("witness-grows").unwrap().passed, "{:?}", r.verdicts);
    }

    #[test]
    fn random_radius_is_small() {
        assert_eq!(random_radius(TreeParams::new(2).unwrap()), 5);
        assert_eq!(random_radius(TreeParams::new(3).unwrap()), 3);
    }
}
