//! Growth-rate estimation and the two-sided counting bounds.

use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use serde::{Deserialize, Serialize};

use crate::collection::OrbitCollection;
use crate::error::{arg, Error, Result};
use crate::interval::Interval;
use crate::language::Language;
use crate::scalar::{Field, Real};

/// Inclusive range of lengths `[min, max]`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Window {
    pub min: usize,
    pub max: usize,
}

impl Window {
    pub fn new(min: usize, max: usize) -> Result<Self> {
        if min == 0 || min > max {
            return arg(format!("window {min}:{max} must satisfy 1 ≤ min ≤ max"));
        }
        Ok(Window { min, max })
    }

    pub fn len(&self) -> usize {
        self.max - self.min + 1
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn lengths(&self) -> std::ops::RangeInclusive<usize> {
        self.min..=self.max
    }
}

impl FromStr for Window {
    type Err = Error;

    fn from_str(s: &str) -> Result<Window> {
        let (a, b) = s.split_once(':').ok_or_else(|| Error::Argument(format!("window {s:?} is not of the form a:b")))?;
        let parse = |t: &str| t.trim().parse::<usize>().map_err(|_| Error::Argument(format!("bad window bound {t:?}")));
        Window::new(parse(a)?, parse(b)?)
    }
}

impl fmt::Display for Window {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}", self.min, self.max)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GrowthRow<T> {
    pub n: usize,
    /// `a_n`, in nats.
    pub value: T,
    pub point_estimate: T,
    pub running_fekete: T,
}

/// Estimates of `lim a_n / n` from finitely many `a_n`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GrowthEstimate<T> {
    pub window: Window,
    pub rows: Vec<GrowthRow<T>>,
    /// `min_{n ∈ window} a_n / n`.
    pub fekete_bound: T,
    /// Whether the inputs are subadditive, making `fekete_bound` a certified upper bound.
    pub fekete_certified: bool,
    /// Least-squares slope of `a_n` against `n` over the window.
    pub regression: T,
    /// `max_{n ∈ window} a_n / n`.
    pub tail_max: T,
}

impl<T: Real> GrowthEstimate<T> {
    /// Build from `(n, a_n)` pairs covering the window.
    pub fn from_values(values: &[(usize, T)], window: Window, subadditive: bool) -> Result<Self> {
        let mut rows = Vec::with_capacity(window.len());
        let mut running = T::infinity();
        for n in window.lengths() {
            let Some(&(_, v)) = values.iter().find(|(m, _)| *m == n) else {
                return Err(Error::InsufficientData(format!("no value at n = {n} for window {window}")));
            };
            if !v.is_finite() {
                return Err(Error::Argument(format!("value at n = {n} is not finite (empty collection?)")));
            }
            let point = v / T::of_usize(n);
            running = running.min(point);
            rows.push(GrowthRow { n, value: v, point_estimate: point, running_fekete: running });
        }
        let tail_max = rows.iter().map(|r| r.point_estimate).fold(T::neg_infinity(), T::max);
        Ok(GrowthEstimate {
            window,
            fekete_bound: running,
            fekete_certified: subadditive,
            regression: ols_slope(&rows),
            tail_max,
            rows,
        })
    }

    /// `[min, max]` of the successive differences `a_{n+1} - a_n`, which contains the
    /// regression slope.
    pub fn difference_range(&self) -> (T, T) {
        self.rows.windows(2).map(|p| p[1].value - p[0].value).fold((T::infinity(), T::neg_infinity()), |(lo, hi), d| {
            (lo.min(d), hi.max(d))
        })
    }

    pub fn last(&self) -> &GrowthRow<T> {
        self.rows.last().expect("window is nonempty")
    }
}

fn ols_slope<T: Real>(rows: &[GrowthRow<T>]) -> T {
    if rows.len() < 2 {
        return rows.first().map_or(T::nan(), |r| r.point_estimate);
    }
    let k = T::of_usize(rows.len());
    let mx = rows.iter().map(|r| T::of_usize(r.n)).sum::<T>() / k;
    let my = rows.iter().map(|r| r.value).sum::<T>() / k;
    let sxy: T = rows.iter().map(|r| (T::of_usize(r.n) - mx) * (r.value - my)).sum();
    let sxx: T = rows.iter().map(|r| (T::of_usize(r.n) - mx).powi(2)).sum();
    sxy / sxx
}

fn log_counts<T: Real>(counts: &[u64], window: Window) -> Result<Vec<(usize, T)>> {
    if window.max >= counts.len() {
        return Err(Error::InsufficientData(format!(
            "window {window} exceeds the enumerated depth {}",
            counts.len().saturating_sub(1)
        )));
    }
    if counts[window.min..=window.max].iter().all(|&c| c == 0) {
        return arg("counts are empty over the window");
    }
    Ok(window.lengths().map(|n| (n, T::of(counts[n] as f64).ln())).collect())
}

fn is_subadditive(counts: &[u64]) -> bool {
    let d = counts.len() - 1;
    (1..=d).all(|m| (1..=d - m).all(|n| counts[m + n] as u128 <= counts[m] as u128 * counts[n] as u128))
}

/// Entropy estimate from a full language; Fekete values are certified upper bounds.
pub fn entropy_estimate<T: Real>(lang: &Language, window: Window) -> Result<GrowthEstimate<T>> {
    let counts = lang.counts();
    GrowthEstimate::from_values(&log_counts(&counts, window)?, window, is_subadditive(&counts))
}

/// Entropy estimate of a collection `h(D) = limsup (1/n) log #D_n`.
pub fn collection_entropy_estimate<T: Real>(d: &OrbitCollection<'_>, window: Window) -> Result<GrowthEstimate<T>> {
    GrowthEstimate::from_values(&log_counts(d.counts(), window)?, window, is_subadditive(d.counts()))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Verdict {
    Pass,
    Fail,
    Inconclusive,
}

impl Verdict {
    pub fn and(self, other: Verdict) -> Verdict {
        match (self, other) {
            (Verdict::Fail, _) | (_, Verdict::Fail) => Verdict::Fail,
            (Verdict::Inconclusive, _) | (_, Verdict::Inconclusive) => Verdict::Inconclusive,
            _ => Verdict::Pass,
        }
    }

    pub fn from_bool(ok: bool) -> Verdict {
        if ok {
            Verdict::Pass
        } else {
            Verdict::Fail
        }
    }
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Verdict::Pass => "PASS",
            Verdict::Fail => "FAIL",
            Verdict::Inconclusive => "INCONCLUSIVE",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CountingRow {
    pub n: usize,
    pub count: u64,
    /// `#L_n / e^{nh}` (midpoint of a certified enclosure).
    pub ratio: f64,
    pub lower_ok: Option<bool>,
    pub upper_ok: Option<bool>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CountingReport {
    pub tau: usize,
    /// `Q = (τ + 1) e^{τ h}`.
    pub q: f64,
    pub rows: Vec<CountingRow>,
    pub empirical_q: f64,
    pub verdict: Verdict,
}

/// Check `e^{nh} ≤ #L_n ≤ (τ+1) e^{τh} e^{nh}` for `1 ≤ n ≤ depth`, where `base = e^h`
/// is supplied in a field with certified comparisons.
pub fn counting_bounds_check<F: Field>(counts: &[u64], base: &F, tau: usize) -> CountingReport {
    let q = F::from_i64(tau as i64 + 1) * base.pow(tau as u32);
    let mut rows = Vec::new();
    let mut verdict = Verdict::Pass;
    let mut power = F::one();
    for (n, &count) in counts.iter().enumerate().skip(1) {
        power = power * base.clone();
        let c = F::from_integer(&BigInt::from(count));
        let lower_ok = power.certified_le(&c);
        let upper_ok = c.certified_le(&(q.clone() * power.clone()));
        let row_verdict = match (lower_ok, upper_ok) {
            (Some(true), Some(true)) => Verdict::Pass,
            (Some(false), _) | (_, Some(false)) => Verdict::Fail,
            _ => Verdict::Inconclusive,
        };
        verdict = verdict.and(row_verdict);
        let ratio = (c.enclosure() / power.enclosure()).mid();
        rows.push(CountingRow { n, count, ratio, lower_ok, upper_ok });
    }
    let empirical_q = rows.iter().map(|r| r.ratio).fold(0.0, f64::max);
    CountingReport { tau, q: q.to_f64(), rows, empirical_q, verdict }
}

/// Outward enclosure of `e^h` for a floating `h`.
pub fn exp_enclosure(h: f64) -> Interval {
    let e = h.exp();
    Interval::new(e.next_down().next_down(), e.next_up().next_up())
}
