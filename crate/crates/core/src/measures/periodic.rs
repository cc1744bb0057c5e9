use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Zero;
use serde::{Deserialize, Serialize};

use crate::error::{arg, Result};
use crate::language::Language;
use crate::measures::markov::CylinderMeasure;
use crate::model::ShiftModel;
use crate::scalar::ratio_to_f64;
use crate::word::Word;

/// Periodic orbit data for periods `1..=n_max`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PeriodicTable {
    /// `per[n - 1] = #Per_n`.
    pub per: Vec<u64>,
}

impl PeriodicTable {
    pub fn count(&self, n: usize) -> u64 {
        self.per[n - 1]
    }

    /// Smallest `C` with `C^{-1} e^{nh} ≤ #Per_n ≤ C e^{nh}` over the table.
    pub fn two_sided_constant(&self, h: f64) -> f64 {
        self.per
            .iter()
            .enumerate()
            .map(|(i, &p)| {
                let r = p as f64 / (h * (i + 1) as f64).exp();
                if r > 0.0 {
                    r.max(1.0 / r)
                } else {
                    f64::INFINITY
                }
            })
            .fold(1.0, f64::max)
    }
}

/// `#Per_n = #{w ∈ L_n : w^∞ ∈ X}` for `1 ≤ n ≤ n_max`.
pub fn periodic_counts(model: &ShiftModel, lang: &Language, n_max: usize) -> Result<PeriodicTable> {
    if n_max == 0 || n_max > lang.depth() {
        return arg(format!("periods must lie in 1..={}", lang.depth()));
    }
    let mut per = Vec::with_capacity(n_max);
    for n in 1..=n_max {
        let mut c = 0u64;
        let mut err = None;
        lang.for_each_word(n, |w| match model.periodic_admissible(w) {
            Ok(true) => c += 1,
            Ok(false) => {}
            Err(e) => err = Some(e),
        });
        if let Some(e) = err {
            return Err(e);
        }
        per.push(c);
    }
    Ok(PeriodicTable { per })
}

/// `(1/#Per_n) Σ_{x ∈ Per_n} δ_x` on cylinders of length `≤ depth`, exact.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PeriodicMeasure {
    pub period: usize,
    pub depth: usize,
    alphabet: usize,
    tables: Vec<BTreeMap<Word, BigRational>>,
}

impl PeriodicMeasure {
    pub fn exact_mass(&self, w: &[u8]) -> BigRational {
        self.tables
            .get(w.len())
            .and_then(|t| t.get(&Word::from_slice(w)).cloned())
            .unwrap_or_else(BigRational::zero)
    }

    pub fn listing(&self, j: usize) -> impl Iterator<Item = (&Word, &BigRational)> {
        self.tables[j].iter()
    }
}

impl CylinderMeasure<f64> for PeriodicMeasure {
    fn alphabet_size(&self) -> usize {
        self.alphabet
    }

    fn mass(&self, w: &[u8]) -> f64 {
        ratio_to_f64(&self.exact_mass(w))
    }

    fn max_depth(&self) -> Option<usize> {
        Some(self.depth)
    }
}

pub fn periodic_measure(model: &ShiftModel, lang: &Language, n: usize, depth: usize) -> Result<PeriodicMeasure> {
    if n == 0 || n > lang.depth() {
        return arg(format!("period {n} outside 1..={}", lang.depth()));
    }
    let mut counts: Vec<BTreeMap<Word, u64>> = vec![BTreeMap::new(); depth + 1];
    let mut total = 0u64;
    let mut err = None;
    lang.for_each_word(n, |w| match model.periodic_admissible(w) {
        Ok(true) => {
            total += 1;
            let point: Vec<u8> = w.iter().copied().cycle().take(depth).collect();
            for (j, t) in counts.iter_mut().enumerate() {
                *t.entry(Word::from_slice(&point[..j])).or_default() += 1;
            }
        }
        Ok(false) => {}
        Err(e) => err = Some(e),
    });
    if let Some(e) = err {
        return Err(e);
    }
    if total == 0 {
        return arg(format!("no periodic points of period {n}"));
    }
    let tables = counts
        .into_iter()
        .map(|t| t.into_iter().map(|(w, c)| (w, BigRational::new(BigInt::from(c), BigInt::from(total)))).collect())
        .collect();
    Ok(PeriodicMeasure { period: n, depth, alphabet: lang.alphabet_size(), tables })
}

/// `max_{|w| ≤ depth} |μ[w] - ν[w]|` over words of `lang`.
pub fn max_cylinder_deviation<A: CylinderMeasure<f64>, B: CylinderMeasure<f64>>(
    mu: &A,
    nu: &B,
    lang: &Language,
    depth: usize,
) -> f64 {
    let mut worst = 0.0f64;
    for j in 1..=depth.min(lang.depth()) {
        lang.for_each_word(j, |w| worst = worst.max((mu.mass(w) - nu.mass(w)).abs()));
    }
    worst
}
