//! Centered and uncentered fractional maximal operators and radial
//! convolutions.
//!
//! `M^gamma f(x) = sup_r |B_r(o)|^(-gamma) sum_{y in B_r(x)} |f(y)|`.

use rayon::prelude::*;
use rug::Integer;

use crate::error::{Error, Result};
use crate::geometry::{ball_around, ball_size, enumerate_ball, sphere_shells, TreeParams, VertexAddress};
use crate::lorentz::{geometric_poly_sum, FiniteFunction, RadialFunction};
use crate::numerics::LogScalar;

/// Which radii the supremum runs over.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum RadiusPolicy {
    /// `r <= r_max`.
    UpTo(usize),
    /// Every radius; finite because the ball eventually swallows the support.
    SupportClosure,
    /// `r <= R - ||x||`, so that every ball stays inside `B_R(o)`.
    Interior(usize),
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct MaximalParams {
    gamma: f64,
    policy: RadiusPolicy,
}

impl MaximalParams {
    pub fn new(gamma: f64, policy: RadiusPolicy) -> Result<Self> {
        if !(gamma > 0.0) || !gamma.is_finite() {
            return Err(Error::param(format!("gamma must be positive, got {gamma}")));
        }
        Ok(MaximalParams { gamma, policy })
    }

    pub fn exact(gamma: f64) -> Result<Self> {
        Self::new(gamma, RadiusPolicy::SupportClosure)
    }

    pub fn gamma(&self) -> f64 {
        self.gamma
    }

    pub fn policy(&self) -> RadiusPolicy {
        self.policy
    }
}

/// `|B_r(o)|^(-gamma)`.
pub fn ball_weight(tree: TreeParams, r: usize, gamma: f64) -> LogScalar {
    LogScalar::from_integer(&ball_size(tree, r), tree.k())
        .expect("positive")
        .pow(-gamma)
}

fn check_tree(f: &FiniteFunction, x: &VertexAddress) -> Result<()> {
    if x.k() != f.tree().k() {
        return Err(Error::param(format!(
            "vertex on k={} evaluated against a function on k={}",
            x.k(),
            f.tree().k()
        )));
    }
    Ok(())
}

/// `|B_r(o)|^(-gamma) sum_{y in B_r(x)} |f(y)|`.
pub fn ball_average(f: &FiniteFunction, x: &VertexAddress, r: usize, gamma: f64) -> Result<LogScalar> {
    check_tree(f, x)?;
    let k = f.tree().k();
    let inside: Vec<&LogScalar> = f
        .iter()
        .filter(|(y, _)| x.distance_unchecked(y) <= r)
        .map(|(_, v)| v)
        .collect();
    let total = LogScalar::sum(inside, k)?;
    Ok(&total * &ball_weight(f.tree(), r, gamma))
}

/// The supremum at one vertex, with the smallest maximising radius.
#[derive(Clone, Debug, PartialEq)]
pub struct MaximalValue {
    pub value: LogScalar,
    pub radius: usize,
}

/// `M^gamma f(x)` for finitely supported `f`, evaluated from the distances
/// to the support: the ball sum only changes at those radii, and between
/// them the weight decreases.
pub fn maximal_at(f: &FiniteFunction, x: &VertexAddress, params: MaximalParams) -> Result<MaximalValue> {
    check_tree(f, x)?;
    let tree = f.tree();
    let k = tree.k();
    let cap = match params.policy {
        RadiusPolicy::SupportClosure => usize::MAX,
        RadiusPolicy::UpTo(r) => r,
        RadiusPolicy::Interior(big_r) => big_r.checked_sub(x.norm()).ok_or_else(|| {
            Error::param(format!("vertex {x} lies outside B_{big_r}(o)"))
        })?,
    };
    let mut by_distance: Vec<(usize, &LogScalar)> =
        f.iter().map(|(y, v)| (x.distance_unchecked(y), v)).collect();
    by_distance.sort_by_key(|&(d, _)| d);
    let mut best = MaximalValue {
        value: LogScalar::zero(k),
        radius: 0,
    };
    let mut end = 0;
    while end < by_distance.len() {
        let r = by_distance[end].0;
        if r > cap {
            break;
        }
        while end < by_distance.len() && by_distance[end].0 == r {
            end += 1;
        }
        let total = LogScalar::sum(by_distance[..end].iter().map(|(_, v)| *v), k)?;
        let cand = &total * &ball_weight(tree, r, params.gamma);
        if cand > best.value {
            best = MaximalValue { value: cand, radius: r };
        }
    }
    Ok(best)
}

/// `M^gamma f` on every vertex of `B_R(o)`, taking the supremum over the
/// interior-safe radii `r <= R - ||x||`. Every ball is summed directly
/// from distances to the support.
pub fn maximal_bruteforce(f: &FiniteFunction, gamma: f64, big_r: usize, budget: u64) -> Result<FiniteFunction> {
    let params = MaximalParams::new(gamma, RadiusPolicy::Interior(big_r))?;
    let tree = f.tree();
    let vertices: Vec<VertexAddress> = enumerate_ball(tree, big_r, budget)?.collect();
    let values = vertices
        .par_iter()
        .map(|x| maximal_at(f, x, params).map(|m| m.value))
        .collect::<Result<Vec<_>>>()?;
    let mut out = FiniteFunction::zero(tree);
    for (x, v) in vertices.into_iter().zip(values) {
        out.insert(x, v)?;
    }
    Ok(out)
}

/// The uncentered operator on `B_R(o)`: the supremum of ball averages over
/// every interior-safe ball `B_r(z)`, `r <= R - ||z||`, containing the vertex.
pub fn uncentered_bruteforce(f: &FiniteFunction, gamma: f64, big_r: usize, budget: u64) -> Result<FiniteFunction> {
    MaximalParams::new(gamma, RadiusPolicy::Interior(big_r))?;
    let tree = f.tree();
    let centres: Vec<VertexAddress> = enumerate_ball(tree, big_r, budget)?.collect();
    let mut best: std::collections::BTreeMap<VertexAddress, LogScalar> = std::collections::BTreeMap::new();
    for z in &centres {
        for r in 0..=(big_r - z.norm()) {
            let avg = ball_average(f, z, r, gamma)?;
            if avg.is_zero() {
                continue;
            }
            for y in ball_around(z, r) {
                match best.get_mut(&y) {
                    Some(v) if *v >= avg => {}
                    Some(v) => *v = avg.clone(),
                    None => {
                        best.insert(y, avg.clone());
                    }
                }
            }
        }
    }
    let mut out = FiniteFunction::zero(tree);
    for (y, v) in best {
        out.insert(y, v)?;
    }
    Ok(out)
}

/// `M^gamma f` at each norm `0..=m_max` of a radial `f`, with argmax radii.
#[derive(Clone, Debug, PartialEq)]
pub struct RadialMaximal {
    pub values: Vec<LogScalar>,
    pub argmax: Vec<usize>,
}

/// `M^gamma f(x)` for radial `f` and `||x|| = m`, untruncated.
pub fn maximal_radial(f: &RadialFunction, gamma: f64, m: usize) -> Result<LogScalar> {
    let params = MaximalParams::exact(gamma)?;
    Ok(maximal_radial_profile(f, params, m)?.values.pop().expect("m_max + 1 entries"))
}

/// Like [`maximal_radial`] at every norm up to `m_max`, under any radius policy.
///
/// Ball sums around a vertex of norm `m` are contracted from the sphere
/// shells. The middle shells satisfy `T(m, r) = (k-1) k^(r-2) f(m+r-2) + T(m-1, r-1)`,
/// so the whole table costs `O(m_max * r_max)` operations.
pub fn maximal_radial_profile(f: &RadialFunction, params: MaximalParams, m_max: usize) -> Result<RadialMaximal> {
    let tree = f.tree();
    let k = tree.k();
    let cap = |m: usize| -> Result<usize> {
        match params.policy {
            RadiusPolicy::UpTo(r) => Ok(r),
            RadiusPolicy::Interior(big_r) => big_r
                .checked_sub(m)
                .ok_or_else(|| Error::param(format!("norm {m} lies outside B_{big_r}(o)"))),
            RadiusPolicy::SupportClosure => {
                if f.tail().is_some() {
                    return Err(Error::UnsupportedTail(
                        "the untruncated supremum needs finite support; truncate first".into(),
                    ));
                }
                Ok(f.support_radius().map_or(0, |n| m + n))
            }
        }
    };
    let caps = (0..=m_max).map(cap).collect::<Result<Vec<_>>>()?;
    let r_hi = caps.iter().copied().max().unwrap_or(0);

    let fv: Vec<LogScalar> = (0..=m_max + r_hi).map(|n| f.value_at(n)).collect();
    let powers: Vec<LogScalar> = (0..=r_hi)
        .map(|j| LogScalar::from_integer(&Integer::from(Integer::u_pow_u(k, j as u32)), k).expect("positive"))
        .collect();
    let weights: Vec<LogScalar> = (0..=r_hi).map(|r| ball_weight(tree, r, params.gamma)).collect();
    let k_minus = LogScalar::from_u64(u64::from(k - 1), k);
    let k_plus = LogScalar::from_u64(u64::from(k + 1), k);
    let zero = LogScalar::zero(k);

    let mut values = Vec::with_capacity(m_max + 1);
    let mut argmax = Vec::with_capacity(m_max + 1);
    let mut prev_t: Vec<LogScalar> = vec![zero.clone(); r_hi + 1];
    for m in 0..=m_max {
        let mut row_t = vec![zero.clone(); r_hi + 1];
        for r in 2..=r_hi {
            if m >= 2 {
                let head = &(&k_minus * &powers[r - 2]) * &fv[m + r - 2];
                row_t[r] = &head + &prev_t[r - 1];
            }
        }
        let mut ball = zero.clone();
        let mut best = zero.clone();
        let mut best_r = 0;
        for r in 0..=caps[m] {
            let sphere = if r == 0 {
                fv[m].clone()
            } else if m == 0 {
                &(&k_plus * &powers[r - 1]) * &fv[r]
            } else {
                let outer = &powers[r] * &fv[m + r];
                let inner = if r <= m {
                    fv[m - r].clone()
                } else {
                    &powers[r - m] * &fv[r - m]
                };
                &(&outer + &row_t[r]) + &inner
            };
            ball = &ball + &sphere;
            let cand = &ball * &weights[r];
            if cand > best {
                best = cand;
                best_r = r;
            }
        }
        values.push(best);
        argmax.push(best_r);
        prev_t = row_t;
    }
    Ok(RadialMaximal { values, argmax })
}

/// Radial kernels `a_gamma(n) = k^(-gamma n)` and
/// `a_{r,gamma}(n) = |B_r(o)|^(-gamma) [n <= r]`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum RadialKernel {
    Full { gamma: f64 },
    Truncated { gamma: f64, r: usize },
}

impl RadialKernel {
    pub fn gamma(&self) -> f64 {
        match *self {
            RadialKernel::Full { gamma } | RadialKernel::Truncated { gamma, .. } => gamma,
        }
    }

    pub fn eval(&self, tree: TreeParams, n: usize) -> LogScalar {
        match *self {
            RadialKernel::Full { gamma } => LogScalar::from_exponent(-gamma * n as f64, tree.k()),
            RadialKernel::Truncated { gamma, r } => {
                if n <= r {
                    ball_weight(tree, r, gamma)
                } else {
                    LogScalar::zero(tree.k())
                }
            }
        }
    }
}

/// `sum_{y in S_n(x)} f(y)` for `||x|| = m`.
pub fn sphere_sum(f: &RadialFunction, m: usize, n: usize) -> Result<LogScalar> {
    let tree = f.tree();
    let terms: Vec<LogScalar> = sphere_shells(tree, m, n)
        .into_iter()
        .map(|s| f.value_at(s.norm).scale(&s.count.to_integer(tree)))
        .collect();
    LogScalar::sum(&terms, tree.k())
}

/// `(f * kern)(x) = sum_n kern(n) sum_{y in S_n(x)} f(y)` for `||x|| = m`.
///
/// A tail under the full kernel is summed shell by shell: beyond the table
/// each shell contributes a geometric-times-polynomial series in the norm.
pub fn convolve_radial(f: &RadialFunction, kern: RadialKernel, m: usize) -> Result<LogScalar> {
    let tree = f.tree();
    let k = tree.k();
    let explicit_to = match (kern, f.tail()) {
        (RadialKernel::Truncated { r, .. }, _) => r,
        (RadialKernel::Full { .. }, None) => match f.support_radius() {
            Some(n) => m + n,
            None => return Ok(LogScalar::zero(k)),
        },
        (RadialKernel::Full { .. }, Some(_)) => m + f.table_len(),
    };
    let mut terms = Vec::with_capacity(explicit_to + 2);
    for n in 0..=explicit_to {
        let w = kern.eval(tree, n);
        if !w.is_zero() {
            terms.push(&w * &sphere_sum(f, m, n)?);
        }
    }
    if let (RadialKernel::Full { gamma }, Some(tail)) = (kern, f.tail()) {
        // shell j of S_n(x) sits at norm t = m + n - 2j; stepping n steps t
        let a = 1.0 - gamma + tail.log_ratio;
        let w = kern.eval(tree, explicit_to);
        for shell in sphere_shells(tree, m, explicit_to) {
            let at_end = f.value_at(shell.norm).scale(&shell.count.to_integer(tree));
            let (ratio_sum, _err) = geometric_poly_sum(k, a, tail.degree, shell.norm)?;
            terms.push(&(&w * &at_end) * &LogScalar::from_f64(ratio_sum, k)?);
        }
    }
    LogScalar::sum(&terms, k)
}

/// `(f * kern)(x)` for finitely supported `f`.
pub fn convolve_finite(f: &FiniteFunction, kern: RadialKernel, x: &VertexAddress) -> Result<LogScalar> {
    check_tree(f, x)?;
    let tree = f.tree();
    let terms: Vec<LogScalar> = f
        .iter()
        .map(|(y, v)| v * &kern.eval(tree, x.distance_unchecked(y)))
        .collect();
    LogScalar::sum(&terms, tree.k())
}
