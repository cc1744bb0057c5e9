//! The β-transformation `f(x) = βx mod 1`, its digit coding and cylinder intervals.

use std::cmp::Ordering;

use num_bigint::BigInt;
use num_traits::ToPrimitive;
use serde::{Deserialize, Serialize};

use crate::error::{arg, Result};
use crate::interval::Interval;
use crate::scalar::{Field, IntegerPosition};
use crate::word::Word;

/// First `n` digits of a point, each flagged certain or not.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Coding {
    pub digits: Word,
    pub certain: Vec<bool>,
}

impl Coding {
    /// Length of the certified prefix.
    pub fn certified_len(&self) -> usize {
        self.certain.iter().take_while(|&&c| c).count()
    }
}

/// `I(w)` as `[left, left + length)`.
#[derive(Debug, Clone, PartialEq)]
pub enum CylinderInterval<F> {
    Empty,
    Nonempty { left: F, length: F },
    /// A comparison could not be decided at the available precision.
    Indeterminate,
}

impl<F: Field> CylinderInterval<F> {
    pub fn is_nonempty(&self) -> Option<bool> {
        match self {
            CylinderInterval::Empty => Some(false),
            CylinderInterval::Nonempty { .. } => Some(true),
            CylinderInterval::Indeterminate => None,
        }
    }

    pub fn length(&self) -> Option<F> {
        match self {
            CylinderInterval::Empty => Some(F::zero()),
            CylinderInterval::Nonempty { length, .. } => Some(length.clone()),
            CylinderInterval::Indeterminate => None,
        }
    }

    /// Decimal dump `left +- radius` of the endpoints' enclosures.
    pub fn describe(&self) -> String {
        match self {
            CylinderInterval::Empty => "empty".into(),
            CylinderInterval::Indeterminate => "indeterminate".into(),
            CylinderInterval::Nonempty { left, length } => {
                let l = left.enclosure();
                let r = (left.clone() + length.clone()).enclosure();
                format!("[{} ± {:e}, {} ± {:e})", l.mid(), l.width() / 2.0, r.mid(), r.width() / 2.0)
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct BetaMap<F> {
    beta: F,
    alphabet: usize,
}

impl<F: Field> BetaMap<F> {
    pub fn new(beta: F) -> Result<Self> {
        if beta.certified_cmp(&F::one()) != Some(Ordering::Greater) {
            return arg(format!("β = {beta:?} is not certified > 1"));
        }
        let alphabet = match beta.locate_integer() {
            IntegerPosition::Exact(k) => k,
            IntegerPosition::Interior(k) => k + 1,
            IntegerPosition::Unknown => return arg(format!("⌈β⌉ is not certified for β = {beta:?}")),
        };
        let alphabet = alphabet.to_usize().filter(|&a| a <= 255).ok_or_else(|| crate::error::Error::Argument("β too large".into()))?;
        Ok(BetaMap { beta, alphabet })
    }

    pub fn beta(&self) -> &F {
        &self.beta
    }

    /// Digits `0..⌈β⌉`.
    pub fn alphabet_size(&self) -> usize {
        self.alphabet
    }

    /// `(⌊βx⌋, f(x))`, or `None` if the floor is not certified.
    pub fn step(&self, x: &F) -> Option<(u8, F)> {
        let y = self.beta.clone() * x.clone();
        let k = y.locate_integer().floor()?;
        let d = k.to_u8()?;
        Some((d, y - F::from_integer(&k)))
    }

    /// `f(x)`, `None` when `⌊βx⌋` is not certified.
    pub fn apply(&self, x: &F) -> Option<F> {
        self.step(x).map(|(_, y)| y)
    }

    /// `y_k = ⌊β f^{k-1}(x)⌋` for `k = 1..=n`.
    ///
    /// A digit is certain iff `β f^{k-1}(x)` is certified to avoid the integers, and all
    /// earlier digits are certain. Past the first undecidable floor the enclosure
    /// midpoint is used and every later digit is flagged uncertain.
    pub fn code(&self, x: &F, n: usize) -> Coding {
        let mut digits = Vec::with_capacity(n);
        let mut certain = Vec::with_capacity(n);
        let mut cur = x.clone();
        let mut ok = true;
        for _ in 0..n {
            let y = self.beta.clone() * cur.clone();
            let (k, sure) = match y.locate_integer() {
                IntegerPosition::Interior(k) => (k, true),
                IntegerPosition::Exact(k) => (k, false),
                IntegerPosition::Unknown => (BigInt::from(y.enclosure().mid().floor() as i64), false),
            };
            ok &= sure;
            let max = self.alphabet as i64 - 1;
            let d = k.to_i64().unwrap_or(0).clamp(0, max);
            digits.push(d as u8);
            certain.push(ok);
            cur = y - F::from_i64(d);
        }
        Coding { digits: Word::new(digits), certain }
    }

    /// `I(w) = ∩_k f^{-(k-1)}(I_{w_k})`.
    ///
    /// The image `f^k(I(w_1..w_k))` is always `[0, y)`; the next symbol `a` is allowed
    /// iff `a < βy`, and then `y ← min(βy - a, 1)`.
    pub fn interval_of_word(&self, w: &[u8]) -> CylinderInterval<F> {
        let mut left = F::zero();
        let mut scale = F::one();
        let mut y = F::one();
        for &a in w {
            if a as usize >= self.alphabet {
                return CylinderInterval::Empty;
            }
            let by = self.beta.clone() * y.clone();
            let a_f = F::from_i64(a as i64);
            match a_f.certified_cmp(&by) {
                Some(Ordering::Less) => {}
                Some(_) => return CylinderInterval::Empty,
                None => return CylinderInterval::Indeterminate,
            }
            let Some(next) = (by - a_f.clone()).certified_min(&F::one()) else {
                return CylinderInterval::Indeterminate;
            };
            left = left + scale.clone() * a_f / self.beta.clone();
            scale = scale / self.beta.clone();
            y = next;
        }
        CylinderInterval::Nonempty { length: scale * y, left }
    }

    /// Quasi-greedy expansion of 1: `d_k = ⌈β r⌉ - 1`, `r ← βr - d_k`, from `r = 1`.
    pub fn quasi_greedy_z(&self, n: usize) -> Coding {
        let mut digits = Vec::with_capacity(n);
        let mut certain = Vec::with_capacity(n);
        let mut r = F::one();
        let mut ok = true;
        for _ in 0..n {
            let y = self.beta.clone() * r.clone();
            let (d, sure) = match y.locate_integer() {
                IntegerPosition::Interior(k) => (k, true),
                IntegerPosition::Exact(k) => (k - 1, true),
                IntegerPosition::Unknown => (BigInt::from(y.enclosure().mid().ceil() as i64 - 1), false),
            };
            ok &= sure;
            let d = d.to_i64().unwrap_or(0).clamp(0, self.alphabet as i64 - 1);
            digits.push(d as u8);
            certain.push(ok);
            r = y - F::from_i64(d);
        }
        Coding { digits: Word::new(digits), certain }
    }
}

/// Outer bounds on `diam ∩_{k ≤ T} B_k(x, ε)` for `T = 0..=horizon`, in the circle metric.
///
/// The set is tracked as a union of pieces on which `f^k` is affine; each piece is cut
/// to the `ε`-ball around `f^k(x)` and split at the discontinuities `a/β`. Endpoints
/// are propagated with outward-rounded intervals and the final hull is widened.
pub fn forward_nonexpansive_probe(beta: Interval, x: f64, eps: f64, horizon: usize) -> Result<Vec<f64>> {
    if !(beta.lo() > 1.0) {
        return arg("β must exceed 1");
    }
    if !(0.0..1.0).contains(&x) || !(eps > 0.0 && eps < 0.5) {
        return arg("need x ∈ [0,1) and ε ∈ (0, 1/2)");
    }
    // (orig_lo, orig_hi, image_lo, image_hi, slope)
    let mut pieces: Vec<(f64, f64, f64, f64, Interval)> = Vec::new();
    // Lifted ball around x.
    let (lo, hi) = (x - eps, x + eps);
    for shift in [-1.0, 0.0, 1.0] {
        let a = (lo + shift).max(0.0);
        let b = (hi + shift).min(1.0);
        if a < b {
            pieces.push((a - shift, b - shift, a, b, Interval::point(1.0)));
        }
    }
    let mut out = Vec::with_capacity(horizon + 1);
    let mut center_iv = Interval::point(x);
    for k in 0..=horizon {
        if k > 0 {
            // Advance every piece by f, splitting at a/β.
            let mut next = Vec::new();
            let hi_digit = beta.hi().ceil() as i64;
            for (ol, oh, il, ih, s) in pieces {
                let mut cuts = vec![il];
                for a in 1..=hi_digit {
                    let c = a as f64 / beta.mid();
                    if c > il && c < ih {
                        cuts.push(c);
                    }
                }
                cuts.push(ih);
                for seg in cuts.windows(2) {
                    let (p, q) = (seg[0], seg[1]);
                    let d = (beta.mid() * (p + q) / 2.0).floor();
                    let np = Interval::point(p) * beta - Interval::point(d);
                    let nq = Interval::point(q) * beta - Interval::point(d);
                    let o_p = Interval::point(ol) + (Interval::point(p) - Interval::point(il)) / s;
                    let o_q = Interval::point(ol) + (Interval::point(q) - Interval::point(il)) / s;
                    next.push((o_p.lo().max(ol), o_q.hi().min(oh), np.lo().max(0.0), nq.hi().min(1.0), s * beta));
                }
            }
            pieces = next;
            center_iv = center_iv * beta;
            let d = center_iv.mid().floor();
            center_iv = center_iv - Interval::point(d);
        }
        let mut cut = Vec::new();
        let c = center_iv.mid().clamp(0.0, 1.0);
        let r = eps + center_iv.width();
        for (ol, oh, il, ih, s) in pieces {
            for shift in [-1.0, 0.0, 1.0] {
                let a = il.max(c - r + shift);
                let b = ih.min(c + r + shift);
                if a < b {
                    let o_a = Interval::point(ol) + (Interval::point(a) - Interval::point(il)) / s;
                    let o_b = Interval::point(ol) + (Interval::point(b) - Interval::point(il)) / s;
                    cut.push((o_a.lo().max(ol), o_b.hi().min(oh), a, b, s));
                }
            }
        }
        pieces = cut;
        let lo = pieces.iter().map(|p| p.0).fold(f64::INFINITY, f64::min);
        let hi = pieces.iter().map(|p| p.1).fold(f64::NEG_INFINITY, f64::max);
        out.push(if lo <= hi { (hi - lo).next_up() } else { 0.0 });
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::quadratic::QuadSurd;
    use num_rational::BigRational;

    fn q(n: i64, d: i64) -> BigRational {
        BigRational::new(n.into(), d.into())
    }

    #[test]
    fn binary_coding() {
        let m = BetaMap::new(q(2, 1)).unwrap();
        let c = m.code(&q(13, 16), 4);
        assert_eq!(c.digits.to_string(), "1101");
        // 13/16 is dyadic: the fourth step hits an integer.
        assert_eq!(c.certified_len(), 3);
    }

    #[test]
    fn two_and_a_half_coding() {
        let m = BetaMap::new(q(5, 2)).unwrap();
        let c = m.code(&q(3, 10), 3);
        assert_eq!(c.digits.symbols(), &[0, 1, 2]);
        assert!(c.certain.iter().all(|&b| b));
        assert_eq!(m.apply(&q(3, 10)), Some(q(3, 4)));
    }

    #[test]
    fn endpoint_digit_is_uncertain() {
        let m = BetaMap::new(q(5, 2)).unwrap();
        assert!(!m.code(&q(2, 5), 1).certain[0]);
    }

    #[test]
    fn cylinder_examples() {
        let m = BetaMap::new(q(2, 1)).unwrap();
        match m.interval_of_word(&[1, 0]) {
            CylinderInterval::Nonempty { left, length } => {
                assert_eq!(left, q(1, 2));
                assert_eq!(length, q(1, 4));
            }
            other => panic!("{other:?}"),
        }
        let m = BetaMap::new(q(5, 2)).unwrap();
        match m.interval_of_word(&[2, 1]) {
            CylinderInterval::Nonempty { left, length } => {
                assert!(left >= q(4, 5));
                assert!(left.clone() + length <= q(1, 1));
            }
            other => panic!("{other:?}"),
        }
        let g = BetaMap::new(QuadSurd::golden()).unwrap();
        assert_eq!(g.interval_of_word(&[1, 1]), CylinderInterval::Empty);
    }

    #[test]
    fn quasi_greedy_expansions() {
        let g = BetaMap::new(QuadSurd::golden()).unwrap();
        assert_eq!(g.quasi_greedy_z(6).digits.to_string(), "101010");
        let b = BetaMap::new(q(101, 40)).unwrap();
        assert_eq!(b.quasi_greedy_z(7).digits.to_string(), "2102001");
        let two = BetaMap::new(q(2, 1)).unwrap();
        assert_eq!(two.quasi_greedy_z(5).digits.to_string(), "11111");
    }

    #[test]
    fn probe_contracts() {
        let d = forward_nonexpansive_probe(Interval::point(2.0), 0.3, 0.1, 10).unwrap();
        assert!((d[0] - 0.2).abs() < 1e-12);
        for (t, v) in d.iter().enumerate() {
            assert!(*v <= 0.2 * 2f64.powi(-(t as i32)) * (1.0 + 1e-9), "T = {t}: {v}");
        }
        let d = forward_nonexpansive_probe(Interval::point(2.5), 0.3, 0.1, 20).unwrap();
        assert!(d[20] <= 0.2 * 2.5f64.powi(-20) * 1.01);
    }
}
