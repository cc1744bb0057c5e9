//! Decompositions `C^p · G · C^s` of a language and the hypotheses of the
//! decomposition uniqueness criterion.

use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::collection::{OrbitCollection, WordPredicate};
use crate::entropy::{collection_entropy_estimate, entropy_estimate, GrowthEstimate, Verdict, Window};
use crate::error::{arg, Error, Result};
use crate::language::Language;
use crate::model::{BetaGraph, ShiftModel};
use crate::potential::{birkhoff_bracket, Potential};
use crate::pressure::{pressure_estimate, PressureEstimate};
use crate::specification::{check_specification, SpecOptions, SpecOutcome};
use crate::word::Word;

/// How a decomposition is built.
#[derive(Debug, Clone)]
pub enum DecompositionRule {
    /// `C^p = {ε}`, `G` = paths from the base vertex back to it, `C^s` = paths that
    /// never return.
    BetaCanonical,
    /// `C^p = {w : S_{|w|} φ ≥ -r|w|}`, `G = {w : S_j φ < -r j for 1 ≤ j ≤ |w|}`,
    /// `C^s = {ε}`; Birkhoff sums use the cylinder supremum.
    Threshold { phi: Potential<f64>, r: f64 },
    /// `C^p = C^s = {ε}`, `G = L`.
    Trivial,
    Custom { prefix: WordPredicate, good: WordPredicate, suffix: WordPredicate },
}

/// `w = u^p v u^s`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Split {
    pub prefix: Word,
    pub good: Word,
    pub suffix: Word,
}

impl Split {
    pub fn join(&self) -> Word {
        Word::join([&self.prefix, &self.good, &self.suffix])
    }
}

#[derive(Debug, Clone)]
pub struct Decomposition {
    pub name: String,
    pub prefix: WordPredicate,
    pub good: WordPredicate,
    pub suffix: WordPredicate,
}

fn empty_only(name: &str) -> WordPredicate {
    WordPredicate::new(name, |w| w.is_empty())
}

impl Decomposition {
    pub fn build(model: &ShiftModel, rule: DecompositionRule) -> Result<Self> {
        Ok(match rule {
            DecompositionRule::Trivial => Decomposition {
                name: "trivial".into(),
                prefix: empty_only("Cp"),
                good: WordPredicate::new("G", |_| true),
                suffix: empty_only("Cs"),
            },
            DecompositionRule::BetaCanonical => {
                let beta = model.as_beta().ok_or_else(|| Error::Argument("canonical decomposition needs a β-shift".into()))?;
                let graph = Arc::new(beta.graph().clone());
                let g = Arc::clone(&graph);
                Decomposition {
                    name: "beta-canonical".into(),
                    prefix: empty_only("Cp"),
                    good: WordPredicate::new("G", move |w| matches!(g.walk(w), Ok(Some(0)))),
                    suffix: WordPredicate::new("Cs", move |w| never_returns(&graph, w)),
                }
            }
            DecompositionRule::Threshold { phi, r } => {
                if !(r.is_finite()) {
                    return arg("threshold r must be finite");
                }
                let phi = Arc::new(phi);
                let p = Arc::clone(&phi);
                Decomposition {
                    name: format!("threshold(r={r})"),
                    prefix: WordPredicate::new("Cp", move |w| sup_sum(&p, w).map_or(false, |s| s >= -r * w.len() as f64)),
                    good: WordPredicate::new("G", move |w| (1..=w.len()).all(|j| sup_sum(&phi, &w[..j]).map_or(false, |s| s < -r * j as f64))),
                    suffix: empty_only("Cs"),
                }
            }
            DecompositionRule::Custom { prefix, good, suffix } => Decomposition { name: "custom".into(), prefix, good, suffix },
        })
    }

    /// Longest prefix in `C^p`, then longest suffix of the rest in `C^s`; the middle
    /// must lie in `G`.
    pub fn split(&self, w: &[u8]) -> Result<Split> {
        let p = (0..=w.len()).rev().find(|&i| self.prefix.test(&w[..i])).ok_or_else(|| no_cover(w, "C^p"))?;
        let rest = &w[p..];
        let s = (0..=rest.len()).rev().find(|&j| self.suffix.test(&rest[rest.len() - j..])).ok_or_else(|| no_cover(w, "C^s"))?;
        let core = &rest[..rest.len() - s];
        if !self.good.test(core) {
            return Err(Error::Construction(format!(
                "{} leaves the core {} of {} outside G",
                self.name,
                Word::from_slice(core),
                Word::from_slice(w)
            )));
        }
        Ok(Split { prefix: Word::from_slice(&w[..p]), good: Word::from_slice(core), suffix: Word::from_slice(&rest[rest.len() - s..]) })
    }

    /// Split every enumerated word, failing on the first one not covered.
    pub fn verify_cover(&self, lang: &Language) -> Result<()> {
        for n in 0..=lang.depth() {
            let mut err = None;
            lang.for_each_word(n, |w| {
                if err.is_none() {
                    match self.split(w) {
                        Ok(s) if s.join().symbols() == w => {}
                        Ok(_) => err = Some(Error::Consistency(format!("split of {} does not concatenate back", Word::from_slice(w)))),
                        Err(e) => err = Some(e),
                    }
                }
            });
            if let Some(e) = err {
                return Err(e);
            }
        }
        Ok(())
    }

    /// `w ∈ G^M`: some split with `|u^p|, |u^s| ≤ M`.
    pub fn in_g_m(&self, w: &[u8], m: usize) -> bool {
        let n = w.len();
        (0..=m.min(n)).any(|i| {
            self.prefix.test(&w[..i]) && (0..=m.min(n - i)).any(|j| self.suffix.test(&w[n - j..]) && self.good.test(&w[i..n - j]))
        })
    }

    pub fn g_m(&self, m: usize) -> WordPredicate {
        let d = self.clone();
        WordPredicate::new(format!("G^{m}"), move |w| d.in_g_m(w, m))
    }

    /// `C^p ∪ C^s`.
    pub fn obstructions(&self) -> WordPredicate {
        self.prefix.or(&self.suffix)
    }
}

fn no_cover(w: &[u8], part: &str) -> Error {
    Error::Construction(format!("no {part} part for {}", Word::from_slice(w)))
}

fn never_returns(graph: &BetaGraph, w: &[u8]) -> bool {
    let mut v = 0;
    for &a in w {
        match graph.step(v, a) {
            Ok(Some(0)) | Ok(None) | Err(_) => return false,
            Ok(Some(next)) => v = next,
        }
    }
    true
}

fn sup_sum(phi: &Potential<f64>, w: &[u8]) -> Option<f64> {
    if w.is_empty() {
        return Some(0.0);
    }
    birkhoff_bracket(phi, w).ok().map(|b| b.hi)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GmRow {
    pub m: usize,
    pub spec: SpecOutcome,
    /// `#G^M_n / #L_n` for `1 ≤ n ≤ depth`.
    pub density: Vec<f64>,
    pub min_density: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct UniquenessReport {
    pub decomposition: String,
    pub depth: usize,
    pub per_m: Vec<GmRow>,
    /// Counts of `C^p ∪ C^s` for `0 ≤ n ≤ depth`.
    pub obstruction_counts: Vec<u64>,
    /// `None` when the obstruction collection is empty beyond `ε`.
    pub obstruction_entropy: Option<GrowthEstimate<f64>>,
    pub entropy: GrowthEstimate<f64>,
    /// Regression estimate of `h(X)` minus the tail maximum of `h(C^p ∪ C^s)`;
    /// `None` when there are no obstructions.
    pub gap: Option<f64>,
    pub specification: Verdict,
    pub verdict: Verdict,
}

/// Hypotheses (I) specification of every `G^M` and (II) an entropy gap, plus the
/// density ratios `#G^M_n / #L_n`. `lang` must reach `depth + tau_max`.
pub fn verify_uniqueness_hypotheses(
    dec: &Decomposition,
    lang: &Language,
    model: Option<&ShiftModel>,
    m_list: &[usize],
    tau_max: usize,
    depth: usize,
    window: Window,
) -> Result<UniquenessReport> {
    if window.max > lang.depth() {
        return Err(Error::InsufficientData(format!("entropy window {window} exceeds the language depth {}", lang.depth())));
    }
    let mut per_m = Vec::with_capacity(m_list.len());
    let mut specification = Verdict::Pass;
    for &m in m_list {
        let gm = OrbitCollection::new(lang, dec.g_m(m));
        let spec = check_specification(&gm, model, &SpecOptions::new(tau_max, depth))?;
        specification = specification.and(match spec {
            SpecOutcome::Certified(_) => Verdict::Pass,
            SpecOutcome::Counterexample(_) => Verdict::Fail,
            SpecOutcome::Inconclusive { .. } => Verdict::Inconclusive,
        });
        let density: Vec<f64> = (1..=depth).map(|n| gm.count(n) as f64 / lang.count(n) as f64).collect();
        let min_density = density.iter().copied().fold(f64::INFINITY, f64::min);
        per_m.push(GmRow { m, spec, density, min_density });
    }
    let obstructions = OrbitCollection::new(lang, dec.obstructions());
    let obstruction_counts = obstructions.counts()[..=depth.min(lang.depth())].to_vec();
    let obstruction_entropy = if obstructions.counts()[window.min..=window.max].iter().all(|&c| c == 0) {
        None
    } else {
        Some(collection_entropy_estimate(&obstructions, window)?)
    };
    let entropy = entropy_estimate(lang, window)?;
    let gap = obstruction_entropy.as_ref().map(|e| entropy.regression - e.tail_max);
    let verdict = specification.and(Verdict::from_bool(gap.map_or(true, |g| g > 0.0)));
    Ok(UniquenessReport {
        decomposition: dec.name.clone(),
        depth,
        per_m,
        obstruction_counts,
        obstruction_entropy,
        entropy,
        gap,
        specification,
        verdict,
    })
}

/// Brackets on `P(C^p ∪ C^s, φ)` and `P(φ)`. Report only: finite windows do not
/// certify the pressure gap.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PressureGapReport {
    /// `None` when the obstruction collection is empty on the window.
    pub obstructions: Option<PressureEstimate<f64>>,
    pub pressure: PressureEstimate<f64>,
    /// Lower regression of `P(φ)` minus the upper tail maximum of the obstruction pressure.
    pub gap: Option<f64>,
}

pub fn pressure_gap_report(dec: &Decomposition, lang: &Language, phi: &Potential<f64>, window: Window) -> Result<PressureGapReport> {
    let obstructions = OrbitCollection::new(lang, dec.obstructions());
    if window.max > lang.depth() {
        return Err(Error::InsufficientData(format!("window {window} exceeds the language depth {}", lang.depth())));
    }
    let obstructions = if obstructions.counts()[window.min..=window.max].iter().all(|&c| c == 0) {
        None
    } else {
        Some(pressure_estimate(&obstructions, phi, window)?)
    };
    let pressure = pressure_estimate(&OrbitCollection::full(lang), phi, window)?;
    let gap = obstructions.as_ref().map(|o| pressure.lower.regression - o.upper.tail_max);
    Ok(PressureGapReport { obstructions, pressure, gap })
}
