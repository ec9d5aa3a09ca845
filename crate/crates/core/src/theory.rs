//! The boundedness map of `M^gamma` between Lebesgue and Lorentz spaces,
//! and the functions that witness unboundedness.
//!
//! Exponents are compared in the coordinates `(u, v) = (1/p, 1/q)`, where
//! every boundary of the map is a straight line.

use std::fmt;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::geometry::TreeParams;
use crate::lorentz::{RadialFunction, Tail};
use crate::numerics::LogScalar;

/// Tolerance for deciding that two exponents coincide.
pub const EXPONENT_TOL: f64 = 1e-12;

pub const CITE_STRONG_I: &str = "Theorem: strong type (i)";
pub const CITE_STRONG_II: &str = "Theorem: strong type (ii)";
pub const CITE_STRONG_OPTIMALITY: &str = "Proposition: strong-type optimality";
pub const CITE_CRITICAL: &str = "Remark: critical segment";
pub const CITE_LARGE_GAMMA: &str = "Remark: convolution bound for gamma > 1";
pub const CITE_GAMMA_ONE: &str = "Discussion: gamma = 1";
pub const CITE_RWT_DIAGONAL: &str = "Theorem: restricted weak type (1/gamma,1/gamma)";
pub const CITE_RWT_CORNER: &str = "Theorem: restricted weak type (1/(1-gamma),1/gamma)";
pub const CITE_RWT: &str = "Corollary: restricted weak type characterization";

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub enum Status {
    Bounded,
    Unbounded,
    Unknown,
}

impl Status {
    /// One-letter code used in compact region tables.
    pub fn code(self) -> char {
        match self {
            Status::Bounded => 'B',
            Status::Unbounded => 'U',
            Status::Unknown => '?',
        }
    }
}

impl fmt::Display for Status {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Debug::fmt(self, f)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub enum VerdictKind {
    Strong,
    RestrictedWeak,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct Verdict {
    pub status: Status,
    pub kind: VerdictKind,
    pub citation: &'static str,
}

fn eq(a: f64, b: f64) -> bool {
    (a - b).abs() <= EXPONENT_TOL
}

fn lt(a: f64, b: f64) -> bool {
    a < b - EXPONENT_TOL
}

fn le(a: f64, b: f64) -> bool {
    !lt(b, a)
}

fn check(gamma: f64, p: f64, q: f64) -> Result<(f64, f64)> {
    if !(gamma > 0.0) || !gamma.is_finite() {
        return Err(Error::param(format!("gamma must be positive, got {gamma}")));
    }
    for (name, e) in [("p", p), ("q", q)] {
        if e.is_nan() || e < 1.0 {
            return Err(Error::param(format!("{name} must lie in [1, inf], got {e}")));
        }
    }
    Ok((1.0 / p, 1.0 / q))
}

/// Whether `M^gamma` is bounded from `L^p` to `L^q`.
pub fn strong_verdict(gamma: f64, p: f64, q: f64) -> Result<Verdict> {
    let (u, v) = check(gamma, p, q)?;
    Ok(strong_uv(gamma, u, v))
}

fn verdict(status: Status, kind: VerdictKind, citation: &'static str) -> Verdict {
    Verdict { status, kind, citation }
}

fn strong_uv(gamma: f64, u: f64, v: f64) -> Verdict {
    use Status::*;
    let kind = VerdictKind::Strong;
    if eq(gamma, 1.0) {
        let ok = le(v, u) && !eq(v, 1.0);
        return verdict(if ok { Bounded } else { Unbounded }, kind, CITE_GAMMA_ONE);
    }
    if gamma > 1.0 {
        let status = if le(v, u) { Bounded } else { Unbounded };
        return verdict(status, kind, CITE_LARGE_GAMMA);
    }
    let c = 1.0 - gamma;
    let unbounded = lt(u, v) || le(gamma, v) || lt(u, c) || (eq(u, c) && eq(v, c));
    let bounded_i = le(v, u) && lt(v, gamma) && lt(c, u);
    let bounded_ii = eq(u, c) && eq(v, 0.0);
    let unknown = eq(u, c) && lt(0.0, v) && lt(v, gamma.min(c));
    let hits = [unbounded, bounded_i || bounded_ii, unknown];
    assert_eq!(
        hits.iter().filter(|&&h| h).count(),
        1,
        "classifier regions overlap or leave a gap at gamma={gamma}, u={u}, v={v}"
    );
    if unbounded {
        verdict(Unbounded, kind, CITE_STRONG_OPTIMALITY)
    } else if bounded_i {
        verdict(Bounded, kind, CITE_STRONG_I)
    } else if bounded_ii {
        verdict(Bounded, kind, CITE_STRONG_II)
    } else {
        verdict(Unknown, kind, CITE_CRITICAL)
    }
}

/// Whether `M^gamma` is bounded from `L^{p,1}` to `L^{q,inf}`.
///
/// Restricted weak type is defined for finite `q`; `q = inf` falls back to
/// the strong statement into `L^inf`.
pub fn restricted_verdict(gamma: f64, p: f64, q: f64) -> Result<Verdict> {
    let (u, v) = check(gamma, p, q)?;
    Ok(restricted_uv(gamma, u, v, q.is_infinite()))
}

fn restricted_uv(gamma: f64, u: f64, v: f64, q_infinite: bool) -> Verdict {
    use Status::*;
    let kind = VerdictKind::RestrictedWeak;
    if q_infinite {
        let s = strong_uv(gamma, u, v);
        return verdict(s.status, kind, s.citation);
    }
    if eq(gamma, 1.0) {
        let status = if le(v, u) { Bounded } else { Unbounded };
        return verdict(status, kind, CITE_GAMMA_ONE);
    }
    if gamma > 1.0 {
        let status = if le(v, u) { Bounded } else { Unbounded };
        return verdict(status, kind, CITE_LARGE_GAMMA);
    }
    let c = 1.0 - gamma;
    let bounded = le(v, u) && le(v, gamma) && le(c, u);
    if !bounded {
        return verdict(Unbounded, kind, CITE_RWT);
    }
    if eq(u, gamma) && eq(v, gamma) {
        verdict(Bounded, kind, CITE_RWT_DIAGONAL)
    } else if eq(u, c) && eq(v, gamma) {
        verdict(Bounded, kind, CITE_RWT_CORNER)
    } else {
        verdict(Bounded, kind, CITE_RWT)
    }
}

/// Statuses on the grid `(u, v) = (i/n, j/n)`, `0 <= i, j <= n`, indexed `[j][i]`.
pub fn classify_grid(gamma: f64, kind: VerdictKind, n: usize) -> Result<Vec<Vec<Status>>> {
    check(gamma, 1.0, 1.0)?;
    if n == 0 {
        return Err(Error::param("grid needs at least one subdivision"));
    }
    let rows = (0..=n)
        .map(|j| {
            let v = j as f64 / n as f64;
            (0..=n)
                .map(|i| {
                    let u = i as f64 / n as f64;
                    match kind {
                        VerdictKind::Strong => strong_uv(gamma, u, v).status,
                        VerdictKind::RestrictedWeak => restricted_uv(gamma, u, v, j == 0).status,
                    }
                })
                .collect()
        })
        .collect();
    Ok(rows)
}

/// Parameters of the family `g(x) = k^(-||x||/2) (1 + ||x||)^(-beta)`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct VecaParams {
    s: f64,
    beta: f64,
}

impl VecaParams {
    pub fn new(s: f64, beta: f64) -> Result<Self> {
        if !(s > 1.0) || !s.is_finite() {
            return Err(Error::param(format!("s must be a finite number above 1, got {s}")));
        }
        if !(1.0 / s < beta && beta < 1.0) {
            return Err(Error::param(format!("beta must lie in (1/s, 1) = ({}, 1), got {beta}", 1.0 / s)));
        }
        Ok(VecaParams { s, beta })
    }

    pub fn s(&self) -> f64 {
        self.s
    }

    pub fn beta(&self) -> f64 {
        self.beta
    }
}

pub fn make_ball_indicator(tree: TreeParams, n: usize) -> RadialFunction {
    let k = tree.k();
    RadialFunction::new(tree, vec![LogScalar::one(k); n + 1]).expect("tree base")
}

pub fn make_dirac(tree: TreeParams) -> RadialFunction {
    make_ball_indicator(tree, 0)
}

pub fn make_sphere_indicator(tree: TreeParams, n: usize) -> RadialFunction {
    let k = tree.k();
    let mut values = vec![LogScalar::zero(k); n + 1];
    values[n] = LogScalar::one(k);
    RadialFunction::new(tree, values).expect("tree base")
}

/// `phi_n(x) = chi_{B_n}(x) k^((n - ||x||)(1 - gamma))`.
pub fn make_lower_profile(tree: TreeParams, n: usize, gamma: f64) -> RadialFunction {
    let k = tree.k();
    let values = (0..=n)
        .map(|m| LogScalar::from_exponent((n - m) as f64 * (1.0 - gamma), k))
        .collect();
    RadialFunction::new(tree, values).expect("tree base")
}

fn half_decay_times_power(tree: TreeParams, last: usize, degree: f64) -> RadialFunction {
    let k = tree.k();
    let values = (0..=last)
        .map(|n| {
            let decay = LogScalar::from_exponent(-(n as f64) / 2.0, k);
            let poly = LogScalar::from_u64(1 + n as u64, k).pow(degree);
            &decay * &poly
        })
        .collect();
    RadialFunction::new(tree, values)
        .and_then(|f| {
            f.with_tail(Tail {
                log_ratio: -0.5,
                degree,
            })
        })
        .expect("positive anchor")
}

/// `g(n) = k^(-n/2) (1+n)^(-beta)` tabulated to `N`, continued by its exact tail.
pub fn make_veca_g(tree: TreeParams, vp: VecaParams, last: usize) -> RadialFunction {
    half_decay_times_power(tree, last, -vp.beta)
}

/// `m(n) = k^(-n/2) (1+n)^(1-beta)`, the pointwise lower bound for `M^{1/2} g`.
pub fn make_veca_m(tree: TreeParams, vp: VecaParams, last: usize) -> RadialFunction {
    half_decay_times_power(tree, last, 1.0 - vp.beta)
}
