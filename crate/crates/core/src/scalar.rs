//! Scalar abstractions.
//!
//! Two families of numbers are used across the crate:
//!
//! * [`Real`]: ordinary floating point (`f32`/`f64`) for eigendata, Markov measures,
//!   growth estimates and potentials.
//! * [`Field`]: ordered fields with *certified* comparisons. Exact types
//!   ([`BigRational`], [`QuadSurd`](crate::QuadSurd)) always answer; the outward-rounded
//!   [`Interval`](crate::Interval) answers only when the enclosures separate.

use std::cmp::Ordering;
use std::fmt::{Debug, Display};
use std::iter::Sum;
use std::ops::{Add, Div, Mul, Sub};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{Float, FloatConst, FromPrimitive, One, Signed, ToPrimitive, Zero};

use crate::interval::Interval;

/// Floating point scalar used by the numerical (non-certified) parts of the crate.
pub trait Real:
    Float + FloatConst + FromPrimitive + ToPrimitive + Sum + Debug + Display + Default + Send + Sync + 'static
{
    fn of(v: f64) -> Self {
        Self::from_f64(v).expect("f64 is representable")
    }

    fn of_usize(v: usize) -> Self {
        Self::from_usize(v).expect("usize is representable")
    }

    fn f64(self) -> f64 {
        self.to_f64().expect("finite conversion")
    }
}

impl Real for f32 {}
impl Real for f64 {}

/// Where a value sits relative to the integers.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum IntegerPosition {
    /// `k < x < k + 1`.
    Interior(BigInt),
    /// `x == k`.
    Exact(BigInt),
    /// The enclosure straddles an integer.
    Unknown,
}

impl IntegerPosition {
    /// `floor(x)` when it is certified.
    pub fn floor(&self) -> Option<BigInt> {
        match self {
            IntegerPosition::Interior(k) | IntegerPosition::Exact(k) => Some(k.clone()),
            IntegerPosition::Unknown => None,
        }
    }
}

/// An ordered field whose comparisons may be uncertain.
pub trait Field:
    Clone
    + Debug
    + PartialEq
    + Send
    + Sync
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Div<Output = Self>
{
    fn from_integer(v: &BigInt) -> Self;

    fn certified_cmp(&self, other: &Self) -> Option<Ordering>;

    fn locate_integer(&self) -> IntegerPosition;

    /// Outward-rounded `f64` enclosure.
    fn enclosure(&self) -> Interval;

    fn from_i64(v: i64) -> Self {
        Self::from_integer(&BigInt::from(v))
    }

    fn zero() -> Self {
        Self::from_i64(0)
    }

    fn one() -> Self {
        Self::from_i64(1)
    }

    fn to_f64(&self) -> f64 {
        self.enclosure().mid()
    }

    fn pow(&self, n: u32) -> Self {
        let mut acc = Self::one();
        let mut base = self.clone();
        let mut e = n;
        while e > 0 {
            if e & 1 == 1 {
                acc = acc * base.clone();
            }
            base = base.clone() * base;
            e >>= 1;
        }
        acc
    }

    /// Certified `self <= other`; `None` when undecidable.
    fn certified_le(&self, other: &Self) -> Option<bool> {
        self.certified_cmp(other).map(|o| o != Ordering::Greater)
    }

    /// Certified minimum; `None` when the order is undecidable.
    fn certified_min(&self, other: &Self) -> Option<Self> {
        match self.certified_cmp(other)? {
            Ordering::Greater => Some(other.clone()),
            _ => Some(self.clone()),
        }
    }
}

/// Plain `f64` as a field: comparisons are always answered. Used where no
/// certification is claimed (e.g. checking against an estimated entropy).
impl Field for f64 {
    fn from_integer(v: &BigInt) -> Self {
        v.to_f64().unwrap_or(f64::INFINITY)
    }

    fn certified_cmp(&self, other: &Self) -> Option<Ordering> {
        self.partial_cmp(other)
    }

    fn locate_integer(&self) -> IntegerPosition {
        if !self.is_finite() {
            return IntegerPosition::Unknown;
        }
        let k = BigInt::from_f64(self.floor()).expect("finite");
        if self.fract() == 0.0 {
            IntegerPosition::Exact(k)
        } else {
            IntegerPosition::Interior(k)
        }
    }

    fn enclosure(&self) -> Interval {
        Interval::point(*self)
    }

    fn to_f64(&self) -> f64 {
        *self
    }
}

impl Field for BigRational {
    fn from_integer(v: &BigInt) -> Self {
        BigRational::from_integer(v.clone())
    }

    fn certified_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }

    fn locate_integer(&self) -> IntegerPosition {
        let (q, r) = self.numer().div_mod_floor(self.denom());
        if r.is_zero() {
            IntegerPosition::Exact(q)
        } else {
            IntegerPosition::Interior(q)
        }
    }

    fn enclosure(&self) -> Interval {
        rational_enclosure(self)
    }

    fn zero() -> Self {
        <BigRational as Zero>::zero()
    }

    fn one() -> Self {
        <BigRational as One>::one()
    }
}

/// Outward-rounded enclosure of a rational.
pub fn rational_enclosure(q: &BigRational) -> Interval {
    let approx = ratio_to_f64(q);
    if !approx.is_finite() {
        return Interval::entire();
    }
    Interval::new(approx.next_down(), approx.next_up())
}

/// Nearest-ish `f64` for a big rational, robust to huge numerators/denominators.
pub fn ratio_to_f64(q: &BigRational) -> f64 {
    if let (Some(n), Some(d)) = (q.numer().to_f64(), q.denom().to_f64()) {
        if n.is_finite() && d.is_finite() && d != 0.0 {
            return n / d;
        }
    }
    // Scale both down by a common power of two.
    let shift = q.numer().bits().max(q.denom().bits()).saturating_sub(1000);
    let n = (q.numer().abs() >> shift).to_f64().unwrap_or(f64::INFINITY);
    let d = (q.denom() >> shift).to_f64().unwrap_or(f64::INFINITY);
    let v = if d == 0.0 { f64::INFINITY } else { n / d };
    if q.is_negative() {
        -v
    } else {
        v
    }
}

/// Parse a decimal (`2.525`), fraction (`101/40`) or integer literal exactly.
pub fn parse_rational(s: &str) -> Option<BigRational> {
    let s = s.trim();
    if let Some((n, d)) = s.split_once('/') {
        let n: BigInt = n.trim().parse().ok()?;
        let d: BigInt = d.trim().parse().ok()?;
        if d.is_zero() {
            return None;
        }
        return Some(BigRational::new(n, d));
    }
    let (neg, body) = match s.strip_prefix('-') {
        Some(rest) => (true, rest),
        None => (false, s),
    };
    let (int_part, frac_part) = body.split_once('.').unwrap_or((body, ""));
    if int_part.is_empty() && frac_part.is_empty() {
        return None;
    }
    if !int_part.chars().chain(frac_part.chars()).all(|c| c.is_ascii_digit()) {
        return None;
    }
    let digits = format!("{int_part}{frac_part}");
    let numer: BigInt = if digits.is_empty() { BigInt::zero() } else { digits.parse().ok()? };
    let denom = num_traits::pow(BigInt::from(10), frac_part.len());
    let q = BigRational::new(numer, denom);
    Some(if neg { -q } else { q })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rational_parsing() {
        let q = parse_rational("2.525").unwrap();
        assert_eq!(q, BigRational::new(101.into(), 40.into()));
        assert_eq!(parse_rational("5/2").unwrap(), BigRational::new(5.into(), 2.into()));
        assert_eq!(parse_rational("-0.5").unwrap(), BigRational::new((-1).into(), 2.into()));
        assert!(parse_rational("1/0").is_none());
        assert!(parse_rational("abc").is_none());
    }

    #[test]
    fn rational_integer_location() {
        let half = BigRational::new(5.into(), 2.into());
        assert_eq!(half.locate_integer(), IntegerPosition::Interior(2.into()));
        let neg = BigRational::new((-5).into(), 2.into());
        assert_eq!(neg.locate_integer(), IntegerPosition::Interior((-3).into()));
        let three = BigRational::from_integer(3.into());
        assert_eq!(three.locate_integer(), IntegerPosition::Exact(3.into()));
    }

    #[test]
    fn enclosure_contains_value() {
        let third = BigRational::new(1.into(), 3.into());
        let e = third.enclosure();
        assert!(e.lo() < 1.0 / 3.0 + 1e-17 && e.hi() > 1.0 / 3.0 - 1e-17);
        assert!(e.lo() < e.hi());
    }

    #[test]
    fn field_pow() {
        let q = BigRational::new(3.into(), 2.into());
        assert_eq!(Field::pow(&q, 3), BigRational::new(27.into(), 8.into()));
        assert_eq!(Field::pow(&2.0f64, 10), 1024.0);
    }
}
