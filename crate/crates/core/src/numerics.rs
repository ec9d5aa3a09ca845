//! Nonnegative reals with unbounded dynamic range.
//!
//! Ball sizes on a k-homogeneous tree grow like `k^r`, and the operators in
//! this crate multiply them by fractional powers such as `|B_r|^(-gamma)`.
//! [`LogScalar`] carries such quantities without overflow: the value is held
//! as an MPFR float, i.e. a binary exponent with an arbitrary range and a
//! unit-interval mantissa of configurable precision, and tagged with the tree
//! base `k` so that [`LogScalar::exponent`] returns `log_k` of the value.
//!
//! Working precision is process-wide. It defaults to 40 significant decimal
//! digits and can be changed with `TREEMAX_PRECISION_DIGITS` or
//! [`set_precision_digits`] before the first computation.

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Div, Mul};
use std::sync::atomic::{AtomicU32, Ordering as AtomicOrdering};

use rug::ops::Pow;
use rug::{Float, Integer};

use crate::error::{Error, Result};

/// Environment variable overriding the default working precision.
pub const PRECISION_ENV: &str = "TREEMAX_PRECISION_DIGITS";
pub const DEFAULT_PRECISION_DIGITS: u32 = 40;

const MIN_DIGITS: u32 = 17;
const MAX_DIGITS: u32 = 10_000;
const GUARD_BITS: u32 = 16;

static PRECISION_BITS: AtomicU32 = AtomicU32::new(0);

fn digits_to_bits(digits: u32) -> u32 {
    (f64::from(digits) * std::f64::consts::LOG2_10).ceil() as u32 + GUARD_BITS
}

/// Sets the working precision in significant decimal digits.
pub fn set_precision_digits(digits: u32) -> Result<()> {
    if !(MIN_DIGITS..=MAX_DIGITS).contains(&digits) {
        return Err(Error::param(format!(
            "precision digits must lie in {MIN_DIGITS}..={MAX_DIGITS}, got {digits}"
        )));
    }
    PRECISION_BITS.store(digits_to_bits(digits), AtomicOrdering::Relaxed);
    Ok(())
}

/// Working precision in bits (including guard bits).
pub fn precision_bits() -> u32 {
    let bits = PRECISION_BITS.load(AtomicOrdering::Relaxed);
    if bits != 0 {
        return bits;
    }
    let digits = std::env::var(PRECISION_ENV)
        .ok()
        .and_then(|v| v.trim().parse::<u32>().ok())
        .filter(|d| (MIN_DIGITS..=MAX_DIGITS).contains(d))
        .unwrap_or(DEFAULT_PRECISION_DIGITS);
    let bits = digits_to_bits(digits);
    PRECISION_BITS.store(bits, AtomicOrdering::Relaxed);
    bits
}

/// Relative slack below which two values are indistinguishable at the
/// working precision. Used where a mathematical tie can be reached through
/// two different rounding paths.
pub fn comparison_slack() -> f64 {
    2f64.powi(-((precision_bits() - GUARD_BITS / 2) as i32))
}

/// A nonnegative real number tagged with the tree base `k`.
#[derive(Clone)]
pub struct LogScalar {
    base: u32,
    value: Float,
}

impl LogScalar {
    pub fn zero(base: u32) -> Self {
        LogScalar {
            base,
            value: Float::new(precision_bits()),
        }
    }

    pub fn one(base: u32) -> Self {
        Self::from_u64(1, base)
    }

    pub fn from_u64(v: u64, base: u32) -> Self {
        LogScalar {
            base,
            value: Float::with_val(precision_bits(), v),
        }
    }

    /// Converts an exact integer. Negative input is a domain error.
    pub fn from_integer(v: &Integer, base: u32) -> Result<Self> {
        if *v < 0 {
            return Err(Error::domain(format!("negative integer {v}")));
        }
        Ok(LogScalar {
            base,
            value: Float::with_val(precision_bits(), v),
        })
    }

    pub fn from_f64(v: f64, base: u32) -> Result<Self> {
        if !v.is_finite() || v < 0.0 {
            return Err(Error::domain(format!("expected a finite nonnegative value, got {v}")));
        }
        Ok(LogScalar {
            base,
            value: Float::with_val(precision_bits(), v),
        })
    }

    /// `k^e`.
    pub fn from_exponent(e: f64, base: u32) -> Self {
        Self::from_exponent_float(&Float::with_val(precision_bits(), e), base)
    }

    pub fn from_exponent_float(e: &Float, base: u32) -> Self {
        let prec = precision_bits();
        let k = Float::with_val(prec, base);
        LogScalar {
            base,
            value: Float::with_val(prec, k.pow(e)),
        }
    }

    fn from_float(value: Float, base: u32) -> Self {
        debug_assert!(!value.is_sign_negative() || value.is_zero());
        LogScalar { base, value }
    }

    /// Parses a decimal literal such as `12`, `0.25` or `3.5e-40` at the
    /// working precision, without passing through `f64`.
    pub fn parse(s: &str, base: u32) -> Result<Self> {
        let parsed = Float::parse(s.trim()).map_err(|e| Error::Format(format!("bad number {s:?}: {e}")))?;
        let value = Float::with_val(precision_bits(), parsed);
        if !value.is_finite() || (value.is_sign_negative() && !value.is_zero()) {
            return Err(Error::domain(format!("expected a finite nonnegative value, got {s}")));
        }
        Ok(Self::from_float(value.abs(), base))
    }

    pub fn base(&self) -> u32 {
        self.base
    }

    pub fn is_zero(&self) -> bool {
        self.value.is_zero()
    }

    pub fn value(&self) -> &Float {
        &self.value
    }

    /// `log_k` of the value, or `None` for zero.
    pub fn exponent(&self) -> Option<Float> {
        if self.is_zero() {
            return None;
        }
        let prec = precision_bits();
        let num = Float::with_val(prec, self.value.log2_ref());
        let den = Float::with_val(prec, base_float(self.base).log2_ref());
        Some(num / den)
    }

    pub fn exponent_f64(&self) -> Option<f64> {
        self.exponent().map(|e| e.to_f64())
    }

    /// Nearest `f64`; saturates to `0` or `inf` outside the double range.
    pub fn to_f64(&self) -> f64 {
        self.value.to_f64()
    }

    fn check_base(&self, other: &Self) -> Result<()> {
        if self.base != other.base {
            return Err(Error::param(format!(
                "mixed bases {} and {}",
                self.base, other.base
            )));
        }
        Ok(())
    }

    pub fn try_mul(&self, other: &Self) -> Result<Self> {
        self.check_base(other)?;
        Ok(self.mul_unchecked(other))
    }

    pub fn try_div(&self, other: &Self) -> Result<Self> {
        self.check_base(other)?;
        if other.is_zero() {
            return Err(Error::domain("division by zero"));
        }
        Ok(LogScalar {
            base: self.base,
            value: Float::with_val(precision_bits(), &self.value / &other.value),
        })
    }

    /// `self^alpha`. Zero to a non-positive power is a domain error.
    pub fn try_pow(&self, alpha: f64) -> Result<Self> {
        if !alpha.is_finite() {
            return Err(Error::domain(format!("non-finite power {alpha}")));
        }
        if self.is_zero() {
            if alpha <= 0.0 {
                return Err(Error::domain(format!("zero raised to {alpha}")));
            }
            return Ok(self.clone());
        }
        let prec = precision_bits();
        let a = Float::with_val(prec, alpha);
        Ok(LogScalar {
            base: self.base,
            value: Float::with_val(prec, (&self.value).pow(&a)),
        })
    }

    /// `self^alpha` for exponents already known to be admissible.
    pub fn pow(&self, alpha: f64) -> Self {
        self.try_pow(alpha).expect("admissible power")
    }

    pub fn try_add(&self, other: &Self) -> Result<Self> {
        self.check_base(other)?;
        Ok(self.add_unchecked(other))
    }

    /// `self - other`; a negative result is a domain error.
    pub fn try_sub(&self, other: &Self) -> Result<Self> {
        self.check_base(other)?;
        let diff = Float::with_val(precision_bits(), &self.value - &other.value);
        if diff.is_sign_negative() && !diff.is_zero() {
            return Err(Error::domain("negative difference"));
        }
        Ok(LogScalar {
            base: self.base,
            value: diff.abs(),
        })
    }

    /// Correctly rounded sum of all terms.
    ///
    /// The sum is rounded once, so the result does not depend on the order
    /// of the terms. An empty list sums to zero.
    pub fn sum<'a, I>(terms: I, base: u32) -> Result<Self>
    where
        I: IntoIterator<Item = &'a LogScalar>,
    {
        let mut floats: Vec<&Float> = Vec::new();
        for t in terms {
            if t.base != base {
                return Err(Error::param(format!("mixed bases {} and {}", t.base, base)));
            }
            floats.push(&t.value);
        }
        Ok(LogScalar {
            base,
            value: Float::with_val(precision_bits(), Float::sum(floats.into_iter())),
        })
    }

    /// Multiplies by an exact nonnegative integer.
    pub fn scale(&self, count: &Integer) -> Self {
        debug_assert!(*count >= 0);
        let prec = precision_bits();
        LogScalar {
            base: self.base,
            value: Float::with_val(prec, &self.value * count),
        }
    }

    pub fn try_cmp(&self, other: &Self) -> Result<Ordering> {
        self.check_base(other)?;
        Ok(self.value.partial_cmp(&other.value).expect("values are never NaN"))
    }

    pub fn max(self, other: Self) -> Self {
        if other > self {
            other
        } else {
            self
        }
    }

    /// `|self - other| / max(self, other)`, zero when both vanish.
    pub fn rel_diff(&self, other: &Self) -> f64 {
        let prec = precision_bits();
        let diff = Float::with_val(prec, &self.value - &other.value).abs();
        let scale = if self.value > other.value {
            &self.value
        } else {
            &other.value
        };
        if scale.is_zero() {
            return 0.0;
        }
        Float::with_val(prec, diff / scale).to_f64()
    }

    pub fn approx_eq(&self, other: &Self, rel: f64) -> bool {
        self.base == other.base && self.rel_diff(other) <= rel
    }

    /// `self <= other` up to the working-precision slack.
    pub fn le_at_precision(&self, other: &Self) -> bool {
        self <= other || self.rel_diff(other) <= comparison_slack()
    }

    /// Decimal scientific notation with `digits` significant digits,
    /// e.g. `1.25000000000000e3`.
    pub fn to_sci(&self, digits: usize) -> String {
        float_to_sci(&self.value, digits)
    }

    fn mul_unchecked(&self, other: &Self) -> Self {
        LogScalar {
            base: self.base,
            value: Float::with_val(precision_bits(), &self.value * &other.value),
        }
    }

    fn add_unchecked(&self, other: &Self) -> Self {
        LogScalar {
            base: self.base,
            value: Float::with_val(precision_bits(), &self.value + &other.value),
        }
    }
}

fn base_float(base: u32) -> Float {
    Float::with_val(precision_bits(), base)
}

/// Formats a finite float as `d.ddd…e±x` with `digits` significant digits.
pub fn float_to_sci(v: &Float, digits: usize) -> String {
    let digits = digits.max(1);
    if v.is_zero() {
        return format!("{:.*}e0", digits - 1, 0.0);
    }
    if !v.is_finite() {
        return if v.is_nan() {
            "nan".into()
        } else if v.is_sign_negative() {
            "-inf".into()
        } else {
            "inf".into()
        };
    }
    let (neg, mantissa, exp) = v.to_sign_string_exp(10, Some(digits));
    let exp = exp.expect("normal value") - 1;
    let (head, tail) = mantissa.split_at(1);
    let sign = if neg { "-" } else { "" };
    if tail.is_empty() {
        format!("{sign}{head}e{exp}")
    } else {
        format!("{sign}{head}.{tail}e{exp}")
    }
}

/// Formats an `f64` the same way as [`float_to_sci`].
pub fn f64_to_sci(v: f64, digits: usize) -> String {
    if !v.is_finite() {
        return float_to_sci(&Float::with_val(53, v), digits);
    }
    float_to_sci(&Float::with_val(64, v), digits)
}

impl fmt::Debug for LogScalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "LogScalar(k={}, {})", self.base, self.to_sci(20))
    }
}

impl fmt::Display for LogScalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_sci(15))
    }
}

impl PartialEq for LogScalar {
    fn eq(&self, other: &Self) -> bool {
        self.base == other.base && self.value == other.value
    }
}

impl PartialOrd for LogScalar {
    /// `None` when the bases differ.
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        if self.base != other.base {
            return None;
        }
        self.value.partial_cmp(&other.value)
    }
}

// The operator impls panic on mixed bases; the `try_` methods report them.

impl Mul for &LogScalar {
    type Output = LogScalar;
    fn mul(self, rhs: &LogScalar) -> LogScalar {
        self.try_mul(rhs).expect("LogScalar bases must agree")
    }
}

impl Div for &LogScalar {
    type Output = LogScalar;
    fn div(self, rhs: &LogScalar) -> LogScalar {
        self.try_div(rhs).expect("LogScalar division")
    }
}

impl Add for &LogScalar {
    type Output = LogScalar;
    fn add(self, rhs: &LogScalar) -> LogScalar {
        self.try_add(rhs).expect("LogScalar bases must agree")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ls(e: f64) -> LogScalar {
        LogScalar::from_exponent(e, 2)
    }

    #[test]
    fn integer_conversion() {
        assert!(LogScalar::from_integer(&Integer::from(0), 2).unwrap().is_zero());
        let e = LogScalar::from_integer(&Integer::from(32), 2)
            .unwrap()
            .exponent()
            .unwrap();
        assert_eq!(e, 5);
        assert!(matches!(
            LogScalar::from_integer(&Integer::from(-3), 2),
            Err(Error::Domain(_))
        ));
    }

    #[test]
    fn log_of_ten_base_two() {
        let e = LogScalar::from_u64(10, 2).exponent().unwrap();
        // 2^e must give back 10.
        let back = LogScalar::from_exponent_float(&e, 2);
        assert!(back.rel_diff(&LogScalar::from_u64(10, 2)) < 1e-30);
        assert!((e.to_f64() - std::f64::consts::LOG2_10).abs() < 1e-15);
    }

    #[test]
    fn power_scales_exponent() {
        let x = LogScalar::from_exponent(3.0, 2).pow(0.5);
        assert!((x.exponent_f64().unwrap() - 1.5).abs() < 1e-30);
        let inv = LogScalar::from_u64(10, 2).pow(-0.5);
        assert!((inv.to_f64() - 0.31622776601683794).abs() < 1e-15);
    }

    #[test]
    fn add_two_ones() {
        let s = LogScalar::sum([&LogScalar::one(2), &LogScalar::one(2)], 2).unwrap();
        assert_eq!(s.exponent().unwrap(), 1);
        assert!(LogScalar::sum(std::iter::empty(), 2).unwrap().is_zero());
    }

    #[test]
    fn mixed_bases_rejected() {
        let a = LogScalar::one(2);
        let b = LogScalar::one(3);
        assert!(matches!(a.try_mul(&b), Err(Error::Parameter(_))));
        assert!(matches!(LogScalar::sum([&a, &b], 2), Err(Error::Parameter(_))));
        assert!(a.partial_cmp(&b).is_none());
    }

    #[test]
    fn zero_power_domain() {
        let z = LogScalar::zero(2);
        assert!(matches!(z.try_pow(0.0), Err(Error::Domain(_))));
        assert!(matches!(z.try_pow(-1.0), Err(Error::Domain(_))));
        assert!(z.try_pow(2.0).unwrap().is_zero());
    }

    #[test]
    fn sub_rejects_negative() {
        assert!(ls(1.0).try_sub(&ls(2.0)).is_err());
        assert!(ls(2.0).try_sub(&ls(1.0)).unwrap() == ls(1.0));
    }

    #[test]
    fn scientific_formatting() {
        assert_eq!(LogScalar::from_u64(1250, 2).to_sci(15), "1.25000000000000e3");
        assert_eq!(LogScalar::zero(2).to_sci(3), "0.00e0");
        assert_eq!(f64_to_sci(0.001, 3), "1.00e-3");
        assert_eq!(f64_to_sci(-2.5, 2), "-2.5e0");
    }

    #[test]
    fn huge_range_no_overflow() {
        let big = ls(9_000.0);
        let tiny = ls(-9_000.0);
        let prod = &big * &tiny;
        assert!(prod.rel_diff(&LogScalar::one(2)) < 1e-30);
        assert!((big.exponent_f64().unwrap() - 9_000.0).abs() < 1e-25);
    }
}
