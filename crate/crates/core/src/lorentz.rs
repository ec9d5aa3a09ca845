//! Functions on the tree and their Lebesgue, Lorentz and weak norms.
//!
//! Only `|f|` matters to every operator here, so functions store
//! nonnegative values. Norms are computed from the exact distribution
//! function, which for a finitely supported `f` is a finite step function
//! `d(lambda) = #{x : |f(x)| > lambda}`.

use std::collections::BTreeMap;

use rug::Integer;

use crate::error::{Error, Result};
use crate::geometry::{enumerate_ball, sphere_size, TreeParams, VertexAddress};
use crate::numerics::LogScalar;

/// Exponents `(p, s)` of a Lorentz space `L^{p,s}`. Infinity is `f64::INFINITY`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct LorentzIndex {
    p: f64,
    s: f64,
}

impl LorentzIndex {
    pub fn new(p: f64, s: f64) -> Result<Self> {
        if p.is_nan() || p < 1.0 {
            return Err(Error::param(format!("p must lie in [1, inf], got {p}")));
        }
        if s.is_nan() || s < 1.0 {
            return Err(Error::param(format!("s must lie in [1, inf], got {s}")));
        }
        if p.is_infinite() && s.is_finite() {
            return Err(Error::param("p = inf requires s = inf"));
        }
        Ok(LorentzIndex { p, s })
    }

    pub fn p(&self) -> f64 {
        self.p
    }

    pub fn s(&self) -> f64 {
        self.s
    }

    /// The conjugate exponent `p' = p / (p - 1)`.
    pub fn conjugate(&self) -> f64 {
        conjugate(self.p)
    }
}

pub fn conjugate(p: f64) -> f64 {
    if p == 1.0 {
        f64::INFINITY
    } else if p.is_infinite() {
        1.0
    } else {
        p / (p - 1.0)
    }
}

fn check_p(p: f64) -> Result<()> {
    if p.is_nan() || p < 1.0 {
        return Err(Error::param(format!("p must lie in [1, inf], got {p}")));
    }
    Ok(())
}

/// A finitely supported function, stored as a sparse map of nonzero values.
#[derive(Clone, Debug, PartialEq)]
pub struct FiniteFunction {
    tree: TreeParams,
    support: BTreeMap<VertexAddress, LogScalar>,
}

impl FiniteFunction {
    pub fn zero(tree: TreeParams) -> Self {
        FiniteFunction {
            tree,
            support: BTreeMap::new(),
        }
    }

    pub fn dirac(tree: TreeParams, x: VertexAddress) -> Result<Self> {
        let mut f = Self::zero(tree);
        f.insert(x, LogScalar::one(tree.k()))?;
        Ok(f)
    }

    pub fn indicator<I: IntoIterator<Item = VertexAddress>>(tree: TreeParams, set: I) -> Result<Self> {
        let mut f = Self::zero(tree);
        for x in set {
            f.insert(x, LogScalar::one(tree.k()))?;
        }
        Ok(f)
    }

    pub fn tree(&self) -> TreeParams {
        self.tree
    }

    /// Sets `f(x) = v`; a zero value removes `x` from the support.
    pub fn insert(&mut self, x: VertexAddress, v: LogScalar) -> Result<()> {
        if x.k() != self.tree.k() || v.base() != self.tree.k() {
            return Err(Error::param(format!(
                "vertex/value for k={} inserted into a function on k={}",
                x.k(),
                self.tree.k()
            )));
        }
        if v.is_zero() {
            self.support.remove(&x);
        } else {
            self.support.insert(x, v);
        }
        Ok(())
    }

    pub fn get(&self, x: &VertexAddress) -> LogScalar {
        self.support
            .get(x)
            .cloned()
            .unwrap_or_else(|| LogScalar::zero(self.tree.k()))
    }

    pub fn iter(&self) -> impl Iterator<Item = (&VertexAddress, &LogScalar)> {
        self.support.iter()
    }

    pub fn len(&self) -> usize {
        self.support.len()
    }

    pub fn is_empty(&self) -> bool {
        self.support.is_empty()
    }

    /// Largest norm in the support.
    pub fn support_radius(&self) -> Option<usize> {
        self.support.keys().map(VertexAddress::norm).max()
    }

    /// `c * f`.
    pub fn scaled(&self, c: &LogScalar) -> Result<Self> {
        let mut out = Self::zero(self.tree);
        for (x, v) in &self.support {
            out.insert(x.clone(), v.try_mul(c)?)?;
        }
        Ok(out)
    }
}

/// Geometric-times-polynomial continuation of a radial table beyond its
/// last stored norm `N`:
/// `f(n) = f(N) * k^(log_ratio * (n - N)) * ((1 + n) / (1 + N))^degree`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Tail {
    /// `log_k` of the per-unit-norm decay ratio.
    pub log_ratio: f64,
    pub degree: f64,
}

/// A function of the norm only, `f(x) = values[||x||]`.
#[derive(Clone, Debug, PartialEq)]
pub struct RadialFunction {
    tree: TreeParams,
    values: Vec<LogScalar>,
    tail: Option<Tail>,
}

impl RadialFunction {
    pub fn new(tree: TreeParams, values: Vec<LogScalar>) -> Result<Self> {
        if values.iter().any(|v| v.base() != tree.k()) {
            return Err(Error::param("radial values must use the tree base"));
        }
        Ok(RadialFunction {
            tree,
            values,
            tail: None,
        })
    }

    pub fn from_f64s(tree: TreeParams, values: &[f64]) -> Result<Self> {
        let vals = values
            .iter()
            .map(|&v| LogScalar::from_f64(v, tree.k()))
            .collect::<Result<Vec<_>>>()?;
        Self::new(tree, vals)
    }

    /// Attaches a tail anchored at the last stored value, which must be positive.
    pub fn with_tail(mut self, tail: Tail) -> Result<Self> {
        if !tail.log_ratio.is_finite() || !tail.degree.is_finite() {
            return Err(Error::param("tail parameters must be finite"));
        }
        match self.values.last() {
            Some(v) if !v.is_zero() => {}
            _ => return Err(Error::param("a tail needs a positive anchor value")),
        }
        self.tail = Some(tail);
        Ok(self)
    }

    pub fn tree(&self) -> TreeParams {
        self.tree
    }

    pub fn values(&self) -> &[LogScalar] {
        &self.values
    }

    pub fn tail(&self) -> Option<Tail> {
        self.tail
    }

    /// Index of the last stored norm.
    pub fn table_len(&self) -> usize {
        self.values.len()
    }

    /// Largest norm with a nonzero value, for functions without a tail.
    pub fn support_radius(&self) -> Option<usize> {
        if self.tail.is_some() {
            return None;
        }
        self.values.iter().rposition(|v| !v.is_zero())
    }

    pub fn value_at(&self, n: usize) -> LogScalar {
        let k = self.tree.k();
        if n < self.values.len() {
            return self.values[n].clone();
        }
        match (self.tail, self.values.last()) {
            (Some(t), Some(anchor)) => {
                let last = self.values.len() - 1;
                let steps = (n - last) as f64;
                let poly = (1.0 + n as f64) / (1.0 + last as f64);
                let geo = LogScalar::from_exponent(t.log_ratio * steps, k);
                let poly = LogScalar::from_f64(poly, k).expect("positive").pow(t.degree);
                &(anchor * &geo) * &poly
            }
            _ => LogScalar::zero(k),
        }
    }

    /// The same table without its tail.
    pub fn truncated(&self, last: usize) -> RadialFunction {
        let values = (0..=last).map(|n| self.value_at(n)).collect();
        RadialFunction {
            tree: self.tree,
            values,
            tail: None,
        }
    }

    /// Materialises a finitely supported radial function on the vertices of
    /// its support ball.
    pub fn to_finite(&self, budget: u64) -> Result<FiniteFunction> {
        if self.tail.is_some() {
            return Err(Error::UnsupportedTail("cannot materialise an infinite support".into()));
        }
        let mut f = FiniteFunction::zero(self.tree);
        let Some(radius) = self.support_radius() else {
            return Ok(f);
        };
        for x in enumerate_ball(self.tree, radius, budget)? {
            let v = self.values[x.norm()].clone();
            f.insert(x, v)?;
        }
        Ok(f)
    }
}

/// The distribution function of `|f|` as a step function.
///
/// `breakpoints` are the distinct nonzero values in decreasing order and
/// `counts[j] = #{x : |f(x)| >= breakpoints[j]}`, so that
/// `d(lambda) = counts[j]` for `lambda` in `[breakpoints[j+1], breakpoints[j])`.
#[derive(Clone, Debug, PartialEq)]
pub struct DistributionFunction {
    base: u32,
    pub breakpoints: Vec<LogScalar>,
    pub counts: Vec<Integer>,
}

impl DistributionFunction {
    /// Builds the distribution from `(value, multiplicity)` pairs in any order.
    pub fn from_weighted(base: u32, mut items: Vec<(LogScalar, Integer)>) -> Result<Self> {
        if items.iter().any(|(v, _)| v.base() != base) {
            return Err(Error::param("mixed bases in distribution"));
        }
        items.retain(|(v, c)| !v.is_zero() && *c > 0);
        items.sort_by(|a, b| b.0.partial_cmp(&a.0).expect("same base"));
        let mut breakpoints: Vec<LogScalar> = Vec::new();
        let mut counts: Vec<Integer> = Vec::new();
        let mut running = Integer::new();
        for (v, c) in items {
            running += &c;
            if breakpoints.last() == Some(&v) {
                *counts.last_mut().expect("nonempty") = running.clone();
            } else {
                breakpoints.push(v);
                counts.push(running.clone());
            }
        }
        Ok(DistributionFunction {
            base,
            breakpoints,
            counts,
        })
    }

    pub fn base(&self) -> u32 {
        self.base
    }

    pub fn is_zero(&self) -> bool {
        self.breakpoints.is_empty()
    }

    /// `d(lambda)` for `lambda >= 0`.
    pub fn at(&self, lambda: &LogScalar) -> Integer {
        // counts for the smallest breakpoint strictly above lambda
        match self.breakpoints.iter().rposition(|v| v > lambda) {
            Some(j) => self.counts[j].clone(),
            None => Integer::new(),
        }
    }

    /// Size of the support.
    pub fn support_size(&self) -> Integer {
        self.counts.last().cloned().unwrap_or_default()
    }
}

/// Anything with a finite distribution function.
pub trait Distributed {
    fn distribution(&self) -> Result<DistributionFunction>;
}

impl Distributed for DistributionFunction {
    fn distribution(&self) -> Result<DistributionFunction> {
        Ok(self.clone())
    }
}

impl Distributed for FiniteFunction {
    fn distribution(&self) -> Result<DistributionFunction> {
        let items = self
            .support
            .values()
            .map(|v| (v.clone(), Integer::from(1)))
            .collect();
        DistributionFunction::from_weighted(self.tree.k(), items)
    }
}

impl Distributed for RadialFunction {
    /// Counts come from sphere sizes; no vertex is enumerated.
    fn distribution(&self) -> Result<DistributionFunction> {
        if self.tail.is_some() {
            return Err(Error::UnsupportedTail(
                "the distribution of a radial function with a tail is not finite".into(),
            ));
        }
        let items = self
            .values
            .iter()
            .enumerate()
            .map(|(n, v)| (v.clone(), sphere_size(self.tree, n)))
            .collect();
        DistributionFunction::from_weighted(self.tree.k(), items)
    }
}

/// `||f||_{p,s}`.
///
/// For a step distribution the defining integral collapses to
/// `||f||^s = (p/s) * sum_j c_j^(s/p) (v_j^s - v_{j+1}^s)` with `v_{M+1} = 0`.
/// `s = inf` gives the weak norm and `p = s = inf` the sup norm.
pub fn lorentz_norm<F: Distributed + ?Sized>(f: &F, idx: LorentzIndex) -> Result<LogScalar> {
    let d = f.distribution()?;
    lorentz_norm_of(&d, idx)
}

fn lorentz_norm_of(d: &DistributionFunction, idx: LorentzIndex) -> Result<LogScalar> {
    let k = d.base;
    if idx.p.is_infinite() {
        return Ok(d.breakpoints.first().cloned().unwrap_or_else(|| LogScalar::zero(k)));
    }
    if idx.s.is_infinite() {
        return weak_norm_of(d, idx.p);
    }
    if d.is_zero() {
        return Ok(LogScalar::zero(k));
    }
    let (p, s) = (idx.p, idx.s);
    // powers of v / max v so that inexact exponents cancel on the leading jump
    let top = d.breakpoints[0].clone();
    let powered: Vec<LogScalar> = d.breakpoints.iter().map(|v| (v / &top).pow(s)).collect();
    let mut terms = Vec::with_capacity(powered.len());
    for (j, c) in d.counts.iter().enumerate() {
        let next = powered.get(j + 1).cloned().unwrap_or_else(|| LogScalar::zero(k));
        let jump = powered[j].try_sub(&next)?;
        let weight = LogScalar::from_integer(c, k)?.pow(s / p);
        terms.push(&weight * &jump);
    }
    let total = LogScalar::sum(&terms, k)?;
    let factor = LogScalar::from_f64(p / s, k)?;
    Ok(&top * &(&factor * &total).pow(1.0 / s))
}

/// `||f||_{p,inf} = sup_lambda lambda d(lambda)^(1/p)`, attained at a jump:
/// `max_j v_j c_j^(1/p)`.
pub fn weak_norm<F: Distributed + ?Sized>(f: &F, p: f64) -> Result<LogScalar> {
    check_p(p)?;
    let d = f.distribution()?;
    weak_norm_of(&d, p)
}

fn weak_norm_of(d: &DistributionFunction, p: f64) -> Result<LogScalar> {
    let k = d.base;
    if p.is_infinite() {
        return Ok(d.breakpoints.first().cloned().unwrap_or_else(|| LogScalar::zero(k)));
    }
    let mut best = LogScalar::zero(k);
    for (v, c) in d.breakpoints.iter().zip(&d.counts) {
        let cand = v * &LogScalar::from_integer(c, k)?.pow(1.0 / p);
        best = best.max(cand);
    }
    Ok(best)
}

/// `||f||_p`.
pub fn lebesgue_norm<F: Distributed + ?Sized>(f: &F, p: f64) -> Result<LogScalar> {
    check_p(p)?;
    let d = f.distribution()?;
    let k = d.base;
    if p.is_infinite() {
        return Ok(d.breakpoints.first().cloned().unwrap_or_else(|| LogScalar::zero(k)));
    }
    let Some(top) = d.breakpoints.first().cloned() else {
        return Ok(LogScalar::zero(k));
    };
    let mut prev = Integer::new();
    let mut terms = Vec::with_capacity(d.counts.len());
    for (v, c) in d.breakpoints.iter().zip(&d.counts) {
        let mult = Integer::from(c - &prev);
        terms.push((v / &top).pow(p).scale(&mult));
        prev = c.clone();
    }
    Ok(&top * &LogScalar::sum(&terms, k)?.pow(1.0 / p))
}

/// Breakdown of a sequence-space norm with a certified tail.
#[derive(Clone, Debug)]
pub struct SurrogateNorm {
    /// `||g||_{l^s}`.
    pub value: LogScalar,
    /// Contribution of the stored table: `sum_{n<=N} g(n)^s`, or the max for `s = inf`.
    pub head: LogScalar,
    /// Tail estimate: `sum_{n>N} g(n)^s`, or the tail supremum for `s = inf`.
    pub tail: LogScalar,
    /// Bound on the error of `tail`, relative to the full `s`-th power sum.
    pub tail_error: f64,
}

/// `||g||_{l^s(N)}` with `g(n) = f(n) k^(n/p)`, the radial surrogate of the
/// `L^{p,s}` norm.
pub fn pytlik_surrogate(f: &RadialFunction, idx: LorentzIndex) -> Result<LogScalar> {
    pytlik_surrogate_detailed(f, idx).map(|r| r.value)
}

pub fn pytlik_surrogate_detailed(f: &RadialFunction, idx: LorentzIndex) -> Result<SurrogateNorm> {
    if idx.p.is_infinite() {
        return Err(Error::param("the radial surrogate needs p < inf"));
    }
    let k = f.tree.k();
    let (p, s) = (idx.p, idx.s);
    let g: Vec<LogScalar> = f
        .values
        .iter()
        .enumerate()
        .map(|(n, v)| v * &LogScalar::from_exponent(n as f64 / p, k))
        .collect();
    let zero = LogScalar::zero(k);

    if s.is_infinite() {
        let head = g.iter().cloned().fold(zero.clone(), LogScalar::max);
        let tail = match (f.tail, g.last()) {
            (Some(t), Some(anchor)) => {
                let factor = geometric_poly_sup(k, t.log_ratio + 1.0 / p, t.degree, g.len() - 1)?;
                &LogScalar::from_f64(factor, k)? * anchor
            }
            _ => zero,
        };
        let value = head.clone().max(tail.clone());
        return Ok(SurrogateNorm {
            value,
            head,
            tail,
            tail_error: 0.0,
        });
    }

    let top = g.iter().cloned().fold(zero.clone(), LogScalar::max);
    if top.is_zero() {
        return Ok(SurrogateNorm {
            value: zero.clone(),
            head: zero.clone(),
            tail: zero,
            tail_error: 0.0,
        });
    }
    // powers of g / max g, rescaled on the way out
    let powered: Vec<LogScalar> = g.iter().map(|v| (v / &top).pow(s)).collect();
    let head = LogScalar::sum(&powered, k)?;
    let (tail, bound) = match (f.tail, powered.last()) {
        (Some(t), Some(anchor)) => {
            let (ratio_sum, err) =
                geometric_poly_sum(k, s * (t.log_ratio + 1.0 / p), s * t.degree, g.len() - 1)?;
            let scale = LogScalar::from_f64(ratio_sum, k)?;
            let err_abs = LogScalar::from_f64(err, k)?;
            (&scale * anchor, &err_abs * anchor)
        }
        _ => (zero.clone(), zero),
    };
    let total = &head + &tail;
    let tail_error = if total.is_zero() {
        0.0
    } else {
        (&bound / &total).to_f64()
    };
    let unscale = top.pow(s);
    Ok(SurrogateNorm {
        value: &top * &total.pow(1.0 / s),
        head: &head * &unscale,
        tail: &tail * &unscale,
        tail_error,
    })
}

const FLAT_TOL: f64 = 1e-12;
const MAX_TAIL_TERMS: usize = 10_000_000;

/// `sum_{n>N} k^(a (n-N)) ((1+n)/(1+N))^b` with an absolute error bound.
/// Divergent series are reported as [`Error::Divergence`].
pub(crate) fn geometric_poly_sum(k: u32, a: f64, b: f64, last: usize) -> Result<(f64, f64)> {
    let lnk = f64::from(k).ln();
    let big_n = last as f64;
    if a > FLAT_TOL {
        return Err(Error::Divergence(format!(
            "tail grows geometrically (log_k ratio {a:.6})"
        )));
    }
    if a.abs() <= FLAT_TOL {
        if b >= -1.0 {
            return Err(Error::Divergence(format!(
                "tail decays like n^{b:.6}, which is not summable"
            )));
        }
        // sum_{j >= N+2} j^b, rescaled by (1+N)^(-b)
        let (sum, err) = power_tail_sum(b, last + 2);
        let scale = (1.0 + big_n).powf(-b);
        return Ok((sum * scale, err * scale));
    }
    let ratio = (a * lnk).exp();
    let term_at = |n: usize| -> f64 {
        ((a * (n - last) as f64) * lnk + b * ((1.0 + n as f64) / (1.0 + big_n)).ln()).exp()
    };
    let mut sum = 0.0;
    let mut n = last + 1;
    let mut term = term_at(n);
    for _ in 0..MAX_TAIL_TERMS {
        sum += term;
        let q = ratio * ((n as f64 + 2.0) / (n as f64 + 1.0)).powf(b);
        let next = term * q;
        // q is nonincreasing in n once b >= 0, and bounded by the ratio when b < 0
        let q_bound = if b > 0.0 { q } else { ratio };
        if q_bound < 1.0 {
            let rest = next / (1.0 - q_bound);
            if rest <= 1e-18 * sum || rest == 0.0 {
                return Ok((sum + rest / 2.0, rest / 2.0 + sum * 4.0 * f64::EPSILON));
            }
        }
        term = next;
        n += 1;
    }
    Err(Error::Divergence(format!(
        "tail not certified within {MAX_TAIL_TERMS} terms (log_k ratio {a:.3e})"
    )))
}

/// `sup_{n>N} k^(a (n-N)) ((1+n)/(1+N))^b`.
pub(crate) fn geometric_poly_sup(k: u32, a: f64, b: f64, last: usize) -> Result<f64> {
    let lnk = f64::from(k).ln();
    let big_n = last as f64;
    if a > FLAT_TOL || (a.abs() <= FLAT_TOL && b > 0.0) {
        return Err(Error::Divergence("tail is unbounded".into()));
    }
    if a.abs() <= FLAT_TOL {
        // nonincreasing polynomial: the first tail term is the largest
        return Ok(((2.0 + big_n) / (1.0 + big_n)).powf(b));
    }
    let ratio = (a * lnk).exp();
    let mut best: f64 = 0.0;
    let mut n = last + 1;
    let mut term = ratio * ((2.0 + big_n) / (1.0 + big_n)).powf(b);
    for _ in 0..MAX_TAIL_TERMS {
        best = best.max(term);
        let q = ratio * ((n as f64 + 2.0) / (n as f64 + 1.0)).powf(b);
        if q < 1.0 {
            return Ok(best);
        }
        term *= q;
        n += 1;
    }
    Err(Error::Divergence("tail supremum not reached".into()))
}

const BERNOULLI_OVER_FACTORIAL: [f64; 7] = [
    1.0 / 6.0 / 2.0,
    -1.0 / 30.0 / 24.0,
    1.0 / 42.0 / 720.0,
    -1.0 / 30.0 / 40_320.0,
    5.0 / 66.0 / 3_628_800.0,
    -691.0 / 2730.0 / 479_001_600.0,
    7.0 / 6.0 / 87_178_291_200.0,
];

/// `sum_{j >= start} j^b` for `b < -1`, by Euler-Maclaurin after an
/// explicit head. Returns the value and a bound on the truncation error.
pub(crate) fn power_tail_sum(b: f64, start: usize) -> (f64, f64) {
    debug_assert!(b < -1.0 && start >= 1);
    let switch = start.max(64);
    let mut head = 0.0;
    for j in start..switch {
        head += (j as f64).powf(b);
    }
    let l = switch as f64;
    let mut tail = l.powf(b + 1.0) / (-b - 1.0) + l.powf(b) / 2.0;
    // derivative of order 2i-1 of x^b at l
    let derivative = |order: usize| -> f64 {
        let mut c = 1.0;
        for t in 0..order {
            c *= b - t as f64;
        }
        c * l.powf(b - order as f64)
    };
    let used = BERNOULLI_OVER_FACTORIAL.len() - 1;
    for (i, coeff) in BERNOULLI_OVER_FACTORIAL.iter().take(used).enumerate() {
        tail -= coeff * derivative(2 * i + 1);
    }
    let err = (BERNOULLI_OVER_FACTORIAL[used] * derivative(2 * used + 1)).abs();
    let value = head + tail;
    (value, err + value * 8.0 * f64::EPSILON)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::ball_size;

    fn tp(k: u32) -> TreeParams {
        TreeParams::new(k).unwrap()
    }

    fn ball_indicator(k: u32, n: usize) -> RadialFunction {
        RadialFunction::from_f64s(tp(k), &vec![1.0; n + 1]).unwrap()
    }

    fn close(a: &LogScalar, b: f64, rel: f64) -> bool {
        (a.to_f64() - b).abs() <= rel * b.abs().max(1e-300)
    }

    #[test]
    fn index_validation() {
        assert!(LorentzIndex::new(0.5, 1.0).is_err());
        assert!(LorentzIndex::new(2.0, 0.9).is_err());
        assert!(LorentzIndex::new(f64::INFINITY, 2.0).is_err());
        assert!(LorentzIndex::new(f64::INFINITY, f64::INFINITY).is_ok());
        assert_eq!(LorentzIndex::new(4.0, 1.0).unwrap().conjugate(), 4.0 / 3.0);
        assert_eq!(conjugate(1.0), f64::INFINITY);
    }

    #[test]
    fn distribution_examples() {
        let t = tp(2);
        let delta = FiniteFunction::dirac(t, t.root()).unwrap();
        let d = delta.distribution().unwrap();
        assert_eq!(d.counts, vec![Integer::from(1)]);
        assert_eq!(d.breakpoints[0].to_f64(), 1.0);

        let d = ball_indicator(2, 2).distribution().unwrap();
        assert_eq!(d.counts, vec![Integer::from(10)]);

        let f = RadialFunction::from_f64s(t, &[2.0, 1.0]).unwrap();
        let d = f.distribution().unwrap();
        assert_eq!(d.counts, vec![Integer::from(1), Integer::from(4)]);
        assert_eq!(d.breakpoints[0].to_f64(), 2.0);
        assert_eq!(d.at(&LogScalar::from_f64(1.5, 2).unwrap()), 1);
        assert_eq!(d.at(&LogScalar::from_f64(0.5, 2).unwrap()), 4);
        assert_eq!(d.at(&LogScalar::from_f64(2.0, 2).unwrap()), 0);
    }

    #[test]
    fn tail_blocks_distribution() {
        let f = ball_indicator(2, 3)
            .with_tail(Tail {
                log_ratio: -1.0,
                degree: 0.0,
            })
            .unwrap();
        assert!(matches!(f.distribution(), Err(Error::UnsupportedTail(_))));
    }

    #[test]
    fn ball_indicator_norms() {
        // (p/s)^(1/s) |B_n|^(1/p)
        let f = ball_indicator(2, 1);
        let n = lorentz_norm(&f, LorentzIndex::new(2.0, 1.0).unwrap()).unwrap();
        assert!(close(&n, 4.0, 1e-14));
        let w = weak_norm(&f, 2.0).unwrap();
        assert!(close(&w, 2.0, 1e-14));
        for n in [0usize, 3, 7] {
            let b = ball_size(tp(3), n).to_f64();
            let f = ball_indicator(3, n);
            for &(p, s) in &[(1.0, 1.0), (2.0, 3.0), (4.0 / 3.0, 2.5), (3.0, 1.0)] {
                let got = lorentz_norm(&f, LorentzIndex::new(p, s).unwrap()).unwrap();
                let want = (p / s).powf(1.0 / s) * b.powf(1.0 / p);
                assert!(close(&got, want, 1e-13), "n={n} p={p} s={s}");
            }
        }
    }

    #[test]
    fn dirac_norms() {
        let t = tp(2);
        let delta = FiniteFunction::dirac(t, t.root()).unwrap();
        for &(p, s) in &[(1.0, 1.0), (2.0, 1.0), (3.0, 4.0)] {
            let got = lorentz_norm(&delta, LorentzIndex::new(p, s).unwrap()).unwrap();
            assert!(close(&got, (p / s).powf(1.0 / s), 1e-14));
            assert!(close(&weak_norm(&delta, p).unwrap(), 1.0, 1e-14));
            assert!(close(&lebesgue_norm(&delta, p).unwrap(), 1.0, 1e-14));
        }
        let zero = FiniteFunction::zero(t);
        assert!(lorentz_norm(&zero, LorentzIndex::new(2.0, 1.0).unwrap())
            .unwrap()
            .is_zero());
    }

    #[test]
    fn two_step_weak_norm() {
        let f = RadialFunction::from_f64s(tp(2), &[2.0, 1.0]).unwrap();
        assert!(close(&weak_norm(&f, 2.0).unwrap(), 2.0, 1e-14));
    }

    #[test]
    fn lebesgue_examples() {
        let f = ball_indicator(2, 1);
        assert!(close(&lebesgue_norm(&f, 2.0).unwrap(), 2.0, 1e-14));
        assert!(close(&lebesgue_norm(&f, f64::INFINITY).unwrap(), 1.0, 0.0));
    }

    #[test]
    fn surrogate_examples() {
        let t = tp(2);
        let delta = RadialFunction::from_f64s(t, &[1.0]).unwrap();
        for &(p, s) in &[(1.0, 1.0), (2.0, f64::INFINITY), (3.0, 2.0)] {
            let v = pytlik_surrogate(&delta, LorentzIndex::new(p, s).unwrap()).unwrap();
            assert!(close(&v, 1.0, 1e-14));
        }
        // a_gamma truncated at N with p = 1/gamma: every g(n) is one
        for &gamma in &[0.5, 0.75] {
            let vals: Vec<LogScalar> = (0..=30)
                .map(|n| LogScalar::from_exponent(-gamma * n as f64, 2))
                .collect();
            let f = RadialFunction::new(t, vals).unwrap();
            let v = pytlik_surrogate(&f, LorentzIndex::new(1.0 / gamma, f64::INFINITY).unwrap()).unwrap();
            assert!(close(&v, 1.0, 1e-14));
        }
        // ball indicator: (sum_{j<=n} k^(js/p))^(1/s)
        let f = ball_indicator(3, 5);
        let (p, s) = (2.0, 3.0);
        let want: f64 = (0..=5).map(|j| 3f64.powf(j as f64 * s / p)).sum::<f64>().powf(1.0 / s);
        let got = pytlik_surrogate(&f, LorentzIndex::new(p, s).unwrap()).unwrap();
        assert!(close(&got, want, 1e-13));
    }

    #[test]
    fn geometric_tail_matches_long_table() {
        // f(n) = 3^(-n), p = 2, s = 1: g(n) = 3^(-n/2), a geometric series
        let t = tp(3);
        let head: Vec<LogScalar> = (0..=4).map(|n| LogScalar::from_exponent(-(n as f64), 3)).collect();
        let f = RadialFunction::new(t, head)
            .unwrap()
            .with_tail(Tail {
                log_ratio: -1.0,
                degree: 0.0,
            })
            .unwrap();
        let r = pytlik_surrogate_detailed(&f, LorentzIndex::new(2.0, 1.0).unwrap()).unwrap();
        let q = 3f64.powf(-0.5);
        let want = 1.0 / (1.0 - q);
        assert!(close(&r.value, want, 1e-14));
        assert!(r.tail_error < 1e-12);
    }

    #[test]
    fn polynomial_tail_matches_zeta() {
        // f(n) = k^(-n/2) (1+n)^(-beta), p = 2: g(n) = (1+n)^(-beta); s = 2
        let t = tp(2);
        let beta = 0.75;
        let vals: Vec<LogScalar> = (0..=10)
            .map(|n| {
                let v = LogScalar::from_exponent(-(n as f64) / 2.0, 2);
                &v * &LogScalar::from_f64((1.0 + n as f64).powf(-beta), 2).unwrap()
            })
            .collect();
        let f = RadialFunction::new(t, vals)
            .unwrap()
            .with_tail(Tail {
                log_ratio: -0.5,
                degree: -beta,
            })
            .unwrap();
        let r = pytlik_surrogate_detailed(&f, LorentzIndex::new(2.0, 2.0).unwrap()).unwrap();
        // zeta(1.5) = 2.612375348685488...
        let zeta = 2.612_375_348_685_488_f64;
        assert!(close(&r.value, zeta.sqrt(), 1e-12), "{}", r.value);
        assert!(r.tail_error < 1e-10);
        // the sup norm of the same g is g(0) = 1
        let sup = pytlik_surrogate(&f, LorentzIndex::new(2.0, f64::INFINITY).unwrap()).unwrap();
        assert!(close(&sup, 1.0, 1e-14));
        // beta * s <= 1 diverges
        let err = pytlik_surrogate(&f, LorentzIndex::new(2.0, 1.0).unwrap()).unwrap_err();
        assert!(err.is_divergence());
    }

    #[test]
    fn growing_tail_diverges() {
        let f = ball_indicator(2, 2)
            .with_tail(Tail {
                log_ratio: 0.0,
                degree: 0.0,
            })
            .unwrap();
        let err = pytlik_surrogate(&f, LorentzIndex::new(2.0, f64::INFINITY).unwrap()).unwrap_err();
        assert!(err.is_divergence());
    }

    #[test]
    fn power_tail_sum_accuracy() {
        // sum_{j>=1} j^-2 = pi^2/6
        let (v, err) = power_tail_sum(-2.0, 1);
        assert!((v - std::f64::consts::PI.powi(2) / 6.0).abs() < 1e-14);
        assert!(err < 1e-13);
        // zeta(1.2) - 1 - 2^-1.2
        let (v, _) = power_tail_sum(-1.2, 3);
        let zeta_1_2 = 5.591_582_441_177_75_f64;
        assert!((v - (zeta_1_2 - 1.0 - 2f64.powf(-1.2))).abs() < 1e-12);
    }

    #[test]
    fn radial_matches_materialised() {
        let t = tp(2);
        let f = RadialFunction::from_f64s(t, &[3.0, 0.5, 2.0, 1.0]).unwrap();
        let g = f.to_finite(10_000).unwrap();
        assert_eq!(g.len(), 22);
        for &(p, s) in &[(1.0, 1.0), (2.0, 3.0), (1.5, f64::INFINITY)] {
            let idx = LorentzIndex::new(p, s).unwrap();
            let a = lorentz_norm(&f, idx).unwrap();
            let b = lorentz_norm(&g, idx).unwrap();
            assert!(a.approx_eq(&b, 1e-30));
        }
    }
}
