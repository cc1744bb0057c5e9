//! Potentials on one-sided shifts: locally constant tables and summable-variation
//! series, with certified Birkhoff-sum brackets on cylinders.

use std::collections::HashMap;

use serde::{Deserialize, Serialize};

use crate::collection::OrbitCollection;
use crate::error::{arg, Error, Result};
use crate::scalar::Real;
use crate::word::Word;

/// A closed interval `[lo, hi]` of reals.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Bracket<T> {
    pub lo: T,
    pub hi: T,
}

impl<T: Real> Bracket<T> {
    pub fn point(v: T) -> Self {
        Bracket { lo: v, hi: v }
    }

    pub fn width(&self) -> T {
        self.hi - self.lo
    }

    pub fn contains(&self, v: T) -> bool {
        self.lo <= v && v <= self.hi
    }

    pub fn contains_bracket(&self, other: &Bracket<T>, tol: T) -> bool {
        self.lo <= other.lo + tol && other.hi <= self.hi + tol
    }

    pub fn add(&self, other: &Bracket<T>) -> Bracket<T> {
        Bracket { lo: self.lo + other.lo, hi: self.hi + other.hi }
    }

    pub fn shift(&self, c: T) -> Bracket<T> {
        Bracket { lo: self.lo + c, hi: self.hi + c }
    }
}

/// `φ(x) = table[x_1 .. x_k]`.
#[derive(Debug, Clone, PartialEq)]
pub struct LocallyConstant<T> {
    window: usize,
    table: HashMap<Vec<u8>, T>,
    /// `(min, max)` over table entries sharing each proper prefix.
    prefix_range: HashMap<Vec<u8>, (T, T)>,
}

impl<T: Real> LocallyConstant<T> {
    pub fn new(window: usize, entries: impl IntoIterator<Item = (Word, T)>) -> Result<Self> {
        let mut table = HashMap::new();
        for (w, v) in entries {
            if w.len() != window {
                return arg(format!("table word {w} has length {}, expected window {window}", w.len()));
            }
            if !v.is_finite() {
                return arg(format!("table value for {w} is not finite"));
            }
            table.insert(w.into_symbols(), v);
        }
        if table.is_empty() {
            return arg("potential table is empty");
        }
        let mut prefix_range: HashMap<Vec<u8>, (T, T)> = HashMap::new();
        for (w, &v) in &table {
            for p in 0..window {
                let e = prefix_range.entry(w[..p].to_vec()).or_insert((v, v));
                e.0 = e.0.min(v);
                e.1 = e.1.max(v);
            }
        }
        Ok(LocallyConstant { window, table, prefix_range })
    }

    /// A potential depending only on the first symbol.
    pub fn by_first_symbol(values: &[T]) -> Result<Self> {
        LocallyConstant::new(1, values.iter().enumerate().map(|(a, &v)| (Word::new(vec![a as u8]), v)))
    }

    pub fn constant(c: T) -> Self {
        LocallyConstant::new(0, [(Word::empty(), c)]).expect("constant potential is valid")
    }

    pub fn window(&self) -> usize {
        self.window
    }

    pub fn get(&self, w: &[u8]) -> Option<T> {
        self.table.get(&w[..self.window]).copied()
    }

    pub fn entries(&self) -> impl Iterator<Item = (&Vec<u8>, &T)> {
        self.table.iter()
    }

    /// Range of `φ` over points whose first symbols are `s`.
    pub fn term(&self, s: &[u8]) -> Result<Bracket<T>> {
        if s.len() >= self.window {
            return self
                .get(s)
                .map(Bracket::point)
                .ok_or_else(|| Error::Argument(format!("potential table has no entry for {}", Word::from_slice(&s[..self.window]))));
        }
        self.prefix_range
            .get(s)
            .map(|&(lo, hi)| Bracket { lo, hi })
            .ok_or_else(|| Error::Argument(format!("potential table has no entry extending {}", Word::from_slice(s))))
    }

    fn map(&self, f: impl Fn(T) -> T) -> Self {
        LocallyConstant::new(self.window, self.table.iter().map(|(w, &v)| (Word::from_slice(w), f(v))))
            .expect("mapping keeps the table valid")
    }
}

/// `φ(x) = offset + Σ_{j<J} c_j ψ(x_{j+1}) + r(x)` with `|ψ| ≤ 1` and `|r| ≤ tail`.
///
/// Agreement on the first `n` symbols bounds the variation by `2 Σ_{j≥n} c_j`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Series<T> {
    pub coefficients: Vec<T>,
    pub tail: T,
    pub symbol_values: Vec<T>,
    pub offset: T,
}

impl<T: Real> Series<T> {
    pub fn new(coefficients: Vec<T>, tail: T, symbol_values: Vec<T>) -> Result<Self> {
        if coefficients.iter().any(|&c| c < T::zero() || !c.is_finite()) || tail < T::zero() {
            return arg("series coefficients and tail must be finite and non-negative");
        }
        if symbol_values.is_empty() || symbol_values.iter().any(|v| v.abs() > T::one()) {
            return arg("symbol values must be nonempty with |ψ| ≤ 1");
        }
        Ok(Series { coefficients, tail, symbol_values, offset: T::zero() })
    }

    /// `c_j = ratio^j` truncated at `terms`, with the exact geometric tail.
    pub fn geometric(ratio: T, terms: usize, symbol_values: Vec<T>) -> Result<Self> {
        if !(ratio > T::zero() && ratio < T::one()) {
            return arg("geometric ratio must lie in (0, 1)");
        }
        let coefficients = (0..terms).map(|j| ratio.powi(j as i32)).collect();
        let tail = ratio.powi(terms as i32) / (T::one() - ratio);
        Series::new(coefficients, tail, symbol_values)
    }

    /// `c_j = 1/(j+1)` for `j < terms` and nothing beyond: a non-summable profile cut off.
    pub fn harmonic(terms: usize, symbol_values: Vec<T>) -> Result<Self> {
        Series::new((0..terms).map(|j| T::one() / T::of_usize(j + 1)).collect(), T::zero(), symbol_values)
    }

    fn psi_range(&self) -> (T, T) {
        let lo = self.symbol_values.iter().copied().fold(T::infinity(), T::min);
        let hi = self.symbol_values.iter().copied().fold(T::neg_infinity(), T::max);
        (lo, hi)
    }

    fn psi(&self, a: u8) -> Result<T> {
        self.symbol_values
            .get(a as usize)
            .copied()
            .ok_or_else(|| Error::Argument(format!("no symbol value for symbol {a}")))
    }

    pub fn term(&self, s: &[u8]) -> Result<Bracket<T>> {
        let (plo, phi) = self.psi_range();
        let mut b = Bracket::point(self.offset);
        for (j, &c) in self.coefficients.iter().enumerate() {
            let t = match s.get(j) {
                Some(&a) => Bracket::point(c * self.psi(a)?),
                None => Bracket { lo: c * plo, hi: c * phi },
            };
            b = b.add(&t);
        }
        Ok(Bracket { lo: b.lo - self.tail, hi: b.hi + self.tail })
    }

    /// Bound on bracket widths for cylinders of length `≤ depth`:
    /// `2 Σ_j j c_j + 2 · depth · tail` when `|ψ| ≤ 1`.
    pub fn bowen_bound(&self, depth: usize) -> T {
        let (plo, phi) = self.psi_range();
        let spread = phi - plo;
        spread * self.coefficients.iter().enumerate().map(|(j, &c)| T::of_usize(j) * c).sum::<T>()
            + T::of(2.0) * T::of_usize(depth) * self.tail
    }

    /// Closed-form Bowen bound for an untruncated geometric series, `2 r / (1 - r)^2`.
    pub fn geometric_bowen_bound(ratio: T) -> T {
        T::of(2.0) * ratio / ((T::one() - ratio) * (T::one() - ratio))
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum Potential<T> {
    LocallyConstant(LocallyConstant<T>),
    Series(Series<T>),
}

impl<T: Real> Potential<T> {
    pub fn zero() -> Self {
        Potential::constant(T::zero())
    }

    pub fn constant(c: T) -> Self {
        Potential::LocallyConstant(LocallyConstant::constant(c))
    }

    pub fn by_first_symbol(values: &[T]) -> Result<Self> {
        Ok(Potential::LocallyConstant(LocallyConstant::by_first_symbol(values)?))
    }

    pub fn as_locally_constant(&self) -> Option<&LocallyConstant<T>> {
        match self {
            Potential::LocallyConstant(l) => Some(l),
            Potential::Series(_) => None,
        }
    }

    pub fn is_zero(&self) -> bool {
        match self {
            Potential::LocallyConstant(l) => l.table.values().all(|v| v.is_zero()),
            Potential::Series(_) => false,
        }
    }

    /// Symbols needed to evaluate `φ` exactly.
    pub fn window(&self) -> usize {
        match self {
            Potential::LocallyConstant(l) => l.window(),
            Potential::Series(s) => s.coefficients.len(),
        }
    }

    /// Range of `φ` on the cylinder of `s`.
    pub fn term(&self, s: &[u8]) -> Result<Bracket<T>> {
        match self {
            Potential::LocallyConstant(l) => l.term(s),
            Potential::Series(s_) => s_.term(s),
        }
    }

    /// `φ + c`.
    pub fn shifted(&self, c: T) -> Self {
        match self {
            Potential::LocallyConstant(l) => Potential::LocallyConstant(l.map(|v| v + c)),
            Potential::Series(s) => {
                let mut s = s.clone();
                s.offset = s.offset + c;
                Potential::Series(s)
            }
        }
    }

    /// `V_n = sup{|φ(x) - φ(y)| : x, y agree on n symbols}` (an upper bound for series).
    pub fn variation(&self, n: usize) -> T {
        match self {
            Potential::LocallyConstant(l) => {
                if n >= l.window {
                    T::zero()
                } else {
                    l.prefix_range
                        .iter()
                        .filter(|(p, _)| p.len() == n)
                        .map(|(_, &(lo, hi))| hi - lo)
                        .fold(T::zero(), T::max)
                }
            }
            Potential::Series(s) => {
                let (plo, phi) = s.psi_range();
                let spread = phi - plo;
                s.coefficients.iter().skip(n).map(|&c| c * spread).sum::<T>() + T::of(2.0) * s.tail
            }
        }
    }
}

/// Certified bracket for `S_{|w|} φ(x)` over all `x ∈ [w]`.
pub fn birkhoff_bracket<T: Real>(phi: &Potential<T>, w: &[u8]) -> Result<Bracket<T>> {
    if w.is_empty() {
        return arg("Birkhoff sums need a nonempty word");
    }
    let mut acc = Bracket::point(T::zero());
    for k in 0..w.len() {
        acc = acc.add(&phi.term(&w[k..])?);
    }
    Ok(acc)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BowenRow<T> {
    pub n: usize,
    pub variation: T,
    pub max_width: T,
    pub running_max: T,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BowenReport<T> {
    pub collection: String,
    pub rows: Vec<BowenRow<T>>,
    /// Running maximum of cylinder bracket widths at the deepest level.
    pub v_estimate: T,
    pub bound: Option<T>,
    /// Running max at full depth over running max at half depth.
    pub growth: T,
    pub pass: bool,
}

/// Growth allowance between half depth and full depth for a bounded running max.
pub const BOWEN_GROWTH_TOLERANCE: f64 = 1.1;

/// Bracket widths over `(w, n)` with `w ∈ G_n`, `n ≤ depth`. PASS iff the running
/// max grows by at most [`BOWEN_GROWTH_TOLERANCE`] between `depth/2` and `depth`
/// and stays below the series bound when one is known.
pub fn bowen_check<T: Real>(phi: &Potential<T>, g: &OrbitCollection<'_>, depth: usize) -> Result<BowenReport<T>> {
    let depth = depth.min(g.base().depth());
    if depth < 2 {
        return arg("Bowen check needs depth at least 2");
    }
    let mut rows = Vec::with_capacity(depth);
    let mut running = T::zero();
    for n in 1..=depth {
        let mut max_width = T::zero();
        let mut err = None;
        g.for_each_word(n, |w| match birkhoff_bracket(phi, w) {
            Ok(b) => max_width = max_width.max(b.width()),
            Err(e) => err = Some(e),
        });
        if let Some(e) = err {
            return Err(e);
        }
        running = running.max(max_width);
        rows.push(BowenRow { n, variation: phi.variation(n), max_width, running_max: running });
    }
    let half = rows[depth / 2 - 1].running_max;
    let growth = if half > T::zero() { running / half } else if running > T::zero() { T::infinity() } else { T::one() };
    let bound = match phi {
        Potential::Series(s) => Some(s.bowen_bound(depth)),
        Potential::LocallyConstant(_) => None,
    };
    let pass = growth <= T::of(BOWEN_GROWTH_TOLERANCE) && bound.map_or(true, |b| running <= b);
    Ok(BowenReport { collection: g.name().to_string(), rows, v_estimate: running, bound, growth, pass })
}
