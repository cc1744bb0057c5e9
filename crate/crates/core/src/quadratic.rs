//! Exact arithmetic in a real quadratic field `Q(sqrt d)`.
//!
//! Enough to carry algebraic β such as the golden ratio through the β-transformation
//! without rounding: every comparison and floor is decided exactly.

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::interval::Interval;
use crate::scalar::{rational_enclosure, Field, IntegerPosition};

/// `a + b * sqrt(d)`. A value with `b == 0` is a plain rational and may be combined
/// with any radicand; combining two irrational values with different `d` panics.
#[derive(Clone, PartialEq, Eq)]
pub struct QuadSurd {
    a: BigRational,
    b: BigRational,
    d: u64,
}

impl QuadSurd {
    pub fn new(a: BigRational, b: BigRational, d: u64) -> Self {
        assert!(d >= 2, "radicand must be at least 2");
        let r = (d as f64).sqrt().round() as u64;
        assert!(r * r != d, "radicand {d} is a perfect square");
        QuadSurd { a, b, d }.normalized()
    }

    pub fn rational(a: BigRational) -> Self {
        QuadSurd { a, b: <BigRational as Zero>::zero(), d: 0 }
    }

    /// The golden ratio `(1 + sqrt 5) / 2`.
    pub fn golden() -> Self {
        let half = BigRational::new(1.into(), 2.into());
        QuadSurd::new(half.clone(), half, 5)
    }

    pub fn parts(&self) -> (&BigRational, &BigRational, u64) {
        (&self.a, &self.b, self.d)
    }

    fn normalized(mut self) -> Self {
        if self.b.is_zero() {
            self.d = 0;
        }
        self
    }

    fn radicand(x: &QuadSurd, y: &QuadSurd) -> u64 {
        match (x.d, y.d) {
            (0, d) | (d, 0) => d,
            (d1, d2) => {
                assert_eq!(d1, d2, "mixed radicands");
                d1
            }
        }
    }

    /// Exact sign of `a + b sqrt d`.
    pub fn signum(&self) -> Ordering {
        let sa = self.a.cmp(&<BigRational as Zero>::zero());
        let sb = self.b.cmp(&<BigRational as Zero>::zero());
        match (sa, sb) {
            (s, Ordering::Equal) => s,
            (Ordering::Equal, s) => s,
            (x, y) if x == y => x,
            _ => {
                // Opposite signs: compare a^2 with b^2 d.
                let a2 = &self.a * &self.a;
                let b2d = &self.b * &self.b * BigRational::from_integer(BigInt::from(self.d));
                match a2.cmp(&b2d) {
                    Ordering::Greater => sa,
                    Ordering::Less => sb,
                    Ordering::Equal => Ordering::Equal,
                }
            }
        }
    }

    fn sqrt_d_enclosure(&self) -> Interval {
        let s = (self.d as f64).sqrt();
        Interval::new(s.next_down(), s.next_up())
    }
}

impl fmt::Debug for QuadSurd {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.b.is_zero() {
            write!(f, "{}", self.a)
        } else {
            write!(f, "{} + {}*sqrt({})", self.a, self.b, self.d)
        }
    }
}

impl Add for QuadSurd {
    type Output = QuadSurd;
    fn add(self, rhs: QuadSurd) -> QuadSurd {
        let d = QuadSurd::radicand(&self, &rhs);
        QuadSurd { a: self.a + rhs.a, b: self.b + rhs.b, d }.normalized()
    }
}

impl Neg for QuadSurd {
    type Output = QuadSurd;
    fn neg(self) -> QuadSurd {
        QuadSurd { a: -self.a, b: -self.b, d: self.d }
    }
}

impl Sub for QuadSurd {
    type Output = QuadSurd;
    fn sub(self, rhs: QuadSurd) -> QuadSurd {
        self + (-rhs)
    }
}

impl Mul for QuadSurd {
    type Output = QuadSurd;
    fn mul(self, rhs: QuadSurd) -> QuadSurd {
        let d = QuadSurd::radicand(&self, &rhs);
        let dq = BigRational::from_integer(BigInt::from(d));
        let a = &self.a * &rhs.a + &self.b * &rhs.b * dq;
        let b = &self.a * &rhs.b + &self.b * &rhs.a;
        QuadSurd { a, b, d }.normalized()
    }
}

impl Div for QuadSurd {
    type Output = QuadSurd;
    fn div(self, rhs: QuadSurd) -> QuadSurd {
        let d = QuadSurd::radicand(&self, &rhs);
        let dq = BigRational::from_integer(BigInt::from(d));
        let norm = &rhs.a * &rhs.a - &rhs.b * &rhs.b * dq;
        assert!(!norm.is_zero(), "division by zero in Q(sqrt {d})");
        let conj = QuadSurd { a: rhs.a.clone() / &norm, b: -rhs.b.clone() / &norm, d };
        self * conj.normalized()
    }
}

impl Field for QuadSurd {
    fn from_integer(v: &BigInt) -> Self {
        QuadSurd::rational(BigRational::from_integer(v.clone()))
    }

    fn certified_cmp(&self, other: &Self) -> Option<Ordering> {
        Some((self.clone() - other.clone()).signum())
    }

    fn locate_integer(&self) -> IntegerPosition {
        let guess = self.to_f64().floor();
        let mut k = BigInt::from(guess as i64);
        let as_surd = |k: &BigInt| QuadSurd::from_integer(k);
        // Adjust the floating guess until k <= x < k + 1 holds exactly.
        while (self.clone() - as_surd(&k)).signum() == Ordering::Less {
            k -= 1;
        }
        while (self.clone() - as_surd(&(&k + 1))).signum() != Ordering::Less {
            k += 1;
        }
        if self.b.is_zero() && self.a == BigRational::from_integer(k.clone()) {
            IntegerPosition::Exact(k)
        } else {
            IntegerPosition::Interior(k)
        }
    }

    fn enclosure(&self) -> Interval {
        let a = rational_enclosure(&self.a);
        if self.b.is_zero() {
            return if self.a.denom().is_one() && self.a.abs() < BigRational::from_integer(BigInt::from(1i64 << 52)) {
                Interval::point(self.to_f64_exact_int())
            } else {
                a
            };
        }
        a + rational_enclosure(&self.b) * self.sqrt_d_enclosure()
    }
}

impl QuadSurd {
    fn to_f64_exact_int(&self) -> f64 {
        use num_traits::ToPrimitive;
        self.a.numer().to_f64().unwrap_or(f64::NAN)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(n: i64, d: i64) -> BigRational {
        BigRational::new(n.into(), d.into())
    }

    #[test]
    fn golden_ratio_identities() {
        let phi = QuadSurd::golden();
        let one = QuadSurd::one();
        // phi^2 = phi + 1
        assert_eq!(phi.clone() * phi.clone(), phi.clone() + one.clone());
        // 1/phi = phi - 1
        assert_eq!(one.clone() / phi.clone(), phi.clone() - one);
        assert_eq!(phi.locate_integer(), IntegerPosition::Interior(1.into()));
        let e = phi.enclosure();
        assert!(e.contains(1.618_033_988_749_895));
    }

    #[test]
    fn sign_of_mixed_terms() {
        // 3 - sqrt 5 > 0, 2 - sqrt 5 < 0
        assert_eq!(QuadSurd::new(q(3, 1), q(-1, 1), 5).signum(), Ordering::Greater);
        assert_eq!(QuadSurd::new(q(2, 1), q(-1, 1), 5).signum(), Ordering::Less);
    }

    #[test]
    fn floor_of_golden_products() {
        let phi = QuadSurd::golden();
        // phi * (phi - 1) = 1 exactly
        let x = phi.clone() * (phi.clone() - QuadSurd::one());
        assert_eq!(x.locate_integer(), IntegerPosition::Exact(1.into()));
        // phi^3 = 2 phi + 1 ~ 4.236
        assert_eq!(phi.pow(3).locate_integer(), IntegerPosition::Interior(4.into()));
    }
}
