use serde::{Deserialize, Serialize};

use crate::collection::OrbitCollection;
use crate::entropy::Verdict;
use crate::error::{arg, Result};
use crate::language::Language;
use crate::measures::markov::CylinderMeasure;
use crate::potential::{birkhoff_bracket, Potential};
use crate::scalar::Real;

/// Relative change of the running `K` over `[depth/2, depth]` below which it is
/// reported as stable.
pub const K_STABILITY: f64 = 0.10;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GibbsRow<T> {
    pub n: usize,
    /// `max_w 1 / ratio(w)`: the constant needed for the lower bound at this length.
    pub k_lower: T,
    /// `max_w ratio(w)`: the constant needed for the upper bound.
    pub k_upper: T,
    /// Running `max(k_lower, k_upper)` over lengths `≤ n`.
    pub running_k: T,
    /// `k_lower` restricted to the supplied collection, if any.
    pub k_lower_restricted: Option<T>,
}

/// Ratios `μ[w] e^{nP - S_n φ(w)}` over the enumerated words.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GibbsReport<T> {
    /// The growth constant tested (`h`, or `P` with a potential).
    pub target: T,
    pub rows: Vec<GibbsRow<T>>,
    pub restriction: Option<String>,
    /// Relative growth of the running `K` between `depth/2` and `depth`.
    pub drift: T,
    pub stable: bool,
    pub declared_k: Option<T>,
    pub verdict: Verdict,
}

impl<T: Real> GibbsReport<T> {
    pub fn k(&self) -> T {
        self.rows.last().map_or(T::one(), |r| r.running_k)
    }
}

/// Evaluate the Gibbs ratios for `1 ≤ n ≤ depth`.
///
/// PASS iff the running `K` is stable and, when `declared_k` is given, every ratio lies
/// in `[1/K, K]`. With a potential, the Birkhoff bracket on each cylinder is used so
/// both bounds are checked against its worst endpoint.
pub fn gibbs_check<T: Real, M: CylinderMeasure<T>>(
    mu: &M,
    target: T,
    phi: Option<&Potential<T>>,
    lang: &Language,
    depth: usize,
    restriction: Option<&OrbitCollection<'_>>,
    declared_k: Option<T>,
) -> Result<GibbsReport<T>> {
    let depth = depth.min(lang.depth()).min(mu.max_depth().unwrap_or(usize::MAX));
    if depth == 0 {
        return arg("Gibbs check needs depth at least 1");
    }
    let mut rows = Vec::with_capacity(depth);
    let mut running = T::one();
    let mut within_declared = true;
    for n in 1..=depth {
        let mut k_lower = T::zero();
        let mut k_upper = T::zero();
        let mut k_lower_r: Option<T> = restriction.map(|_| T::zero());
        let mut err = None;
        lang.for_each_word(n, |w| {
            let (s_lo, s_hi) = match phi {
                None => (T::zero(), T::zero()),
                Some(p) => match birkhoff_bracket(p, w) {
                    Ok(b) => (b.lo, b.hi),
                    Err(e) => {
                        err = Some(e);
                        return;
                    }
                },
            };
            let m = mu.mass(w);
            let scale = T::of_usize(n) * target;
            // ratio(x) = μ[w] e^{nP - S_n φ(x)}; extremes over x ∈ [w].
            let r_lo = m * (scale - s_hi).exp();
            let r_hi = m * (scale - s_lo).exp();
            let inv = if r_lo > T::zero() { T::one() / r_lo } else { T::infinity() };
            k_lower = k_lower.max(inv);
            k_upper = k_upper.max(r_hi);
            if let (Some(kr), Some(c)) = (k_lower_r.as_mut(), restriction) {
                if c.predicate().test(w) {
                    *kr = kr.max(inv);
                }
            }
            if let Some(k) = declared_k {
                within_declared &= inv <= k && r_hi <= k;
            }
        });
        if let Some(e) = err {
            return Err(e);
        }
        running = running.max(k_lower).max(k_upper);
        rows.push(GibbsRow { n, k_lower, k_upper, running_k: running, k_lower_restricted: k_lower_r });
    }
    let half = rows[(depth / 2).max(1) - 1].running_k;
    let drift = (running - half) / half;
    let stable = drift.is_finite() && drift < T::of(K_STABILITY);
    let verdict = Verdict::from_bool(stable && within_declared);
    Ok(GibbsReport {
        target,
        rows,
        restriction: restriction.map(|c| c.name().to_string()),
        drift,
        stable,
        declared_k,
        verdict,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::language::enumerate_language;
    use crate::measures::markov::{parry_measure, MarkovMeasure};
    use crate::model::ShiftModel;

    #[test]
    fn parry_is_gibbs_and_wrong_h_fails() {
        let model = ShiftModel::golden_mean();
        let lang = enumerate_language(&model, 18).unwrap();
        let mu: MarkovMeasure<f64> = parry_measure(model.as_sft().unwrap()).unwrap();
        let h = ((1.0 + 5f64.sqrt()) / 2.0).ln();
        let ok = gibbs_check(&mu, h, None, &lang, 18, None, None).unwrap();
        assert_eq!(ok.verdict, Verdict::Pass);
        let bad = gibbs_check(&mu, 0.4, None, &lang, 18, None, None).unwrap();
        assert_eq!(bad.verdict, Verdict::Fail);
    }

    #[test]
    fn biased_bernoulli_drifts() {
        let lang = enumerate_language(&ShiftModel::full_shift(2).unwrap(), 14).unwrap();
        let mu = MarkovMeasure::bernoulli(&[0.6, 0.4]).unwrap();
        let r = gibbs_check(&mu, 2f64.ln(), None, &lang, 14, None, None).unwrap();
        assert_eq!(r.verdict, Verdict::Fail);
    }

    #[test]
    fn single_length_is_bounded() {
        let lang = enumerate_language(&ShiftModel::full_shift(2).unwrap(), 1).unwrap();
        let mu = MarkovMeasure::bernoulli(&[0.6, 0.4]).unwrap();
        let r = gibbs_check(&mu, 2f64.ln(), None, &lang, 1, None, None).unwrap();
        assert!(r.k().is_finite());
        assert_eq!(r.verdict, Verdict::Pass);
    }
}
