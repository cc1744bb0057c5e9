//! Specification checks on collections of words at finite depth.
//!
//! Pairs `(v, w)` from a collection `G` with `|v| + |w| ≤ depth` are glued with a
//! connector `u`; the enclosing language must reach `depth + τ_max` so every glued
//! word can be decided.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::collection::OrbitCollection;
use crate::error::{arg, Error, Result};
use crate::language::{enumerate_language, Language};
use crate::model::{BetaGraph, ShiftModel};
use crate::word::Word;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum SpecVariant {
    /// `|u| ≤ τ`.
    AtMost,
    /// `|u| = τ`.
    Exact,
    /// `|u| = |u'| = τ` and `(v u w u')^∞` lies in the shift.
    PeriodicStrong,
}

impl std::str::FromStr for SpecVariant {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "at-most" => Ok(SpecVariant::AtMost),
            "exact" => Ok(SpecVariant::Exact),
            "periodic-strong" => Ok(SpecVariant::PeriodicStrong),
            _ => arg(format!("unknown specification variant {s:?}")),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum SpecMode {
    Exhaustive,
    Sampled { pairs: usize, seed: u64 },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SpecOptions {
    pub tau_max: usize,
    /// Smallest gap tried; raise it to certify a specific exact gap.
    pub tau_min: usize,
    pub depth: usize,
    pub variant: SpecVariant,
    pub mode: SpecMode,
    /// Triples sampled when pairwise gluing does not stay inside `G`.
    pub triples: usize,
    pub seed: u64,
}

impl SpecOptions {
    pub fn new(tau_max: usize, depth: usize) -> Self {
        SpecOptions { tau_max, tau_min: 0, depth, variant: SpecVariant::AtMost, mode: SpecMode::Exhaustive, triples: 200, seed: 0 }
    }

    pub fn variant(mut self, variant: SpecVariant) -> Self {
        self.variant = variant;
        self
    }

    pub fn mode(mut self, mode: SpecMode) -> Self {
        self.mode = mode;
        self
    }

    pub fn tau_min(mut self, tau: usize) -> Self {
        self.tau_min = tau;
        self
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct GlueEntry {
    pub v: Word,
    pub u: Word,
    pub w: Word,
    /// Closing connector for periodic-strong entries.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub closing: Option<Word>,
}

impl GlueEntry {
    pub fn glued(&self) -> Word {
        Word::join([&self.v, &self.u, &self.w])
    }
}

/// What the gluing of more than two words rests on.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case", tag = "basis")]
pub enum KFoldBasis {
    /// Every glued pair lies in `G` again, so pairwise gluing iterates.
    PairwiseClosed,
    /// Only sampled triples were glued.
    SampledTriples { tested: usize, failed: usize },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SpecCertificate {
    pub collection: String,
    pub tau: usize,
    pub depth: usize,
    pub variant: SpecVariant,
    pub mode: SpecMode,
    pub pairs_checked: usize,
    pub kfold: KFoldBasis,
    pub glue: Vec<GlueEntry>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Counterexample {
    pub v: Word,
    pub w: Word,
    pub tau_max: usize,
    pub depth: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case", tag = "status")]
pub enum SpecOutcome {
    Certified(SpecCertificate),
    Counterexample(Counterexample),
    Inconclusive { reason: String },
}

impl SpecOutcome {
    pub fn tau(&self) -> Option<usize> {
        match self {
            SpecOutcome::Certified(c) => Some(c.tau),
            _ => None,
        }
    }

    pub fn certificate(&self) -> Option<&SpecCertificate> {
        match self {
            SpecOutcome::Certified(c) => Some(c),
            _ => None,
        }
    }

    pub fn counterexample(&self) -> Option<&Counterexample> {
        match self {
            SpecOutcome::Counterexample(c) => Some(c),
            _ => None,
        }
    }
}

fn walk(lang: &Language, mut node: u32, w: &[u8]) -> Option<u32> {
    for &a in w {
        node = lang.child(node, a)?;
    }
    Some(node)
}

/// Words of `lang` of each length `0..=max_len`, in lexicographic order.
fn words_by_length(lang: &Language, max_len: usize) -> Vec<Vec<Vec<u8>>> {
    (0..=max_len)
        .map(|n| {
            let mut out = Vec::new();
            lang.for_each_word(n, |w| out.push(w.to_vec()));
            out
        })
        .collect()
}

struct Search<'a> {
    lang: &'a Language,
    model: Option<&'a ShiftModel>,
    connectors: Vec<Vec<Vec<u8>>>,
    opts: &'a SpecOptions,
}

impl Search<'_> {
    /// Bitmask of gap lengths in `[tau_min, tau_max]` that glue `v` to `w`. With
    /// `first_only` the search stops at the first feasible length.
    fn feasible(&self, v: &[u8], w: &[u8], first_only: bool) -> Result<u64> {
        let vn = self.lang.node(v).expect("v is in the language");
        let mut mask = 0u64;
        for len in self.opts.tau_min..=self.opts.tau_max {
            if self.find(vn, v, w, len)?.is_some() {
                mask |= 1 << len;
                if first_only {
                    break;
                }
            }
        }
        Ok(mask)
    }

    /// First connector (and closing word, for periodic-strong) of length `len`.
    fn find(&self, vn: u32, v: &[u8], w: &[u8], len: usize) -> Result<Option<(Vec<u8>, Option<Vec<u8>>)>> {
        for u in &self.connectors[len] {
            let Some(un) = walk(self.lang, vn, u) else { continue };
            if walk(self.lang, un, w).is_none() {
                continue;
            }
            if self.opts.variant != SpecVariant::PeriodicStrong {
                return Ok(Some((u.clone(), None)));
            }
            let model = self.model.expect("checked by the caller");
            let mut word = [v, u.as_slice(), w].concat();
            let base = word.len();
            for closing in &self.connectors[len] {
                word.truncate(base);
                word.extend_from_slice(closing);
                if model.periodic_admissible(&word)? {
                    return Ok(Some((u.clone(), Some(closing.clone()))));
                }
            }
        }
        Ok(None)
    }

    fn entry(&self, v: &[u8], w: &[u8], tau: usize) -> Result<GlueEntry> {
        let vn = self.lang.node(v).expect("v is in the language");
        let lengths: Vec<usize> = match self.opts.variant {
            SpecVariant::AtMost => (self.opts.tau_min..=tau).collect(),
            SpecVariant::Exact | SpecVariant::PeriodicStrong => vec![tau],
        };
        for len in lengths {
            if let Some((u, closing)) = self.find(vn, v, w, len)? {
                return Ok(GlueEntry {
                    v: Word::from_slice(v),
                    u: Word::new(u),
                    w: Word::from_slice(w),
                    closing: closing.map(Word::new),
                });
            }
        }
        Err(Error::Consistency(format!("connector for ({}, {}) vanished", Word::from_slice(v), Word::from_slice(w))))
    }
}

/// Search for the least gap `τ ≤ τ_max` with which every pair of `G` glues.
///
/// A pair with no connector at all is returned as a counterexample for the
/// enumerated fragment; it does not refute specification with a larger gap.
pub fn check_specification(g: &OrbitCollection<'_>, model: Option<&ShiftModel>, opts: &SpecOptions) -> Result<SpecOutcome> {
    let lang = g.base();
    if opts.tau_max >= 64 || opts.tau_min > opts.tau_max {
        return arg(format!("gap range {}..={} is not supported", opts.tau_min, opts.tau_max));
    }
    if opts.depth + opts.tau_max > lang.depth() {
        return arg(format!(
            "pair depth {} plus τ_max {} exceeds the language depth {}",
            opts.depth,
            opts.tau_max,
            lang.depth()
        ));
    }
    if opts.variant == SpecVariant::PeriodicStrong && model.is_none() {
        return arg("periodic-strong specification needs the shift model");
    }
    let mut members: Vec<Vec<Vec<u8>>> = vec![Vec::new(); opts.depth];
    for (n, bucket) in members.iter_mut().enumerate().skip(1) {
        g.for_each_word(n, |w| bucket.push(w.to_vec()));
    }
    let mut pairs: Vec<(&[u8], &[u8])> = Vec::new();
    match opts.mode {
        SpecMode::Exhaustive => {
            for total in 2..=opts.depth {
                for a in 1..total {
                    for v in &members[a] {
                        for w in &members[total - a] {
                            pairs.push((v, w));
                        }
                    }
                }
            }
        }
        SpecMode::Sampled { pairs: count, seed } => {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let shapes: Vec<(usize, usize)> = (1..opts.depth)
                .flat_map(|a| (1..=opts.depth - a).map(move |b| (a, b)))
                .filter(|&(a, b)| !members[a].is_empty() && !members[b].is_empty())
                .collect();
            if !shapes.is_empty() {
                for _ in 0..count {
                    let (a, b) = shapes[rng.gen_range(0..shapes.len())];
                    let v = &members[a][rng.gen_range(0..members[a].len())];
                    let w = &members[b][rng.gen_range(0..members[b].len())];
                    pairs.push((v, w));
                }
            }
        }
    }
    if pairs.is_empty() {
        return Ok(SpecOutcome::Inconclusive { reason: format!("{} has no pairs within depth {}", g.name(), opts.depth) });
    }
    let search = Search { lang, model, connectors: words_by_length(lang, opts.tau_max), opts };
    let first_only = opts.variant == SpecVariant::AtMost;
    let masks: Vec<Result<u64>> = pairs.par_iter().map(|(v, w)| search.feasible(v, w, first_only)).collect();
    let mut masks_ok = Vec::with_capacity(masks.len());
    for m in masks {
        match m {
            Ok(m) => masks_ok.push(m),
            Err(Error::InsufficientData(reason)) => return Ok(SpecOutcome::Inconclusive { reason }),
            Err(e) => return Err(e),
        }
    }
    if let Some(i) = masks_ok.iter().position(|&m| m == 0) {
        let (v, w) = pairs[i];
        return Ok(SpecOutcome::Counterexample(Counterexample {
            v: Word::from_slice(v),
            w: Word::from_slice(w),
            tau_max: opts.tau_max,
            depth: opts.depth,
        }));
    }
    let tau = match opts.variant {
        SpecVariant::AtMost => masks_ok.iter().map(|m| m.trailing_zeros() as usize).max().expect("nonempty"),
        SpecVariant::Exact | SpecVariant::PeriodicStrong => {
            let common = masks_ok.iter().fold(u64::MAX, |acc, &m| acc & m);
            if common == 0 {
                return Ok(SpecOutcome::Inconclusive {
                    reason: format!("every pair glues with some gap ≤ {}, but no single exact gap serves all", opts.tau_max),
                });
            }
            common.trailing_zeros() as usize
        }
    };
    let glue: Vec<GlueEntry> = pairs.par_iter().map(|(v, w)| search.entry(v, w, tau)).collect::<Result<_>>()?;
    let kfold = kfold_basis(g, &search, &members, &glue, tau)?;
    Ok(SpecOutcome::Certified(SpecCertificate {
        collection: g.name().to_string(),
        tau,
        depth: opts.depth,
        variant: opts.variant,
        mode: opts.mode,
        pairs_checked: pairs.len(),
        kfold,
        glue,
    }))
}

fn kfold_basis(g: &OrbitCollection<'_>, search: &Search<'_>, members: &[Vec<Vec<u8>>], glue: &[GlueEntry], tau: usize) -> Result<KFoldBasis> {
    if glue.iter().all(|e| g.contains(e.glued().symbols())) {
        return Ok(KFoldBasis::PairwiseClosed);
    }
    let opts = search.opts;
    let lang = search.lang;
    let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);
    let budget = opts.depth.saturating_sub(tau);
    let shapes: Vec<[usize; 3]> = (1..budget)
        .flat_map(|a| (1..budget).flat_map(move |b| (1..budget).map(move |c| [a, b, c])))
        .filter(|s| s.iter().sum::<usize>() <= budget && s.iter().all(|&n| n < members.len() && !members[n].is_empty()))
        .collect();
    if shapes.is_empty() {
        return Ok(KFoldBasis::SampledTriples { tested: 0, failed: 0 });
    }
    let lengths: Vec<usize> = match opts.variant {
        SpecVariant::AtMost => (opts.tau_min..=tau).collect(),
        _ => vec![tau],
    };
    let mut failed = 0;
    for _ in 0..opts.triples {
        let s = shapes[rng.gen_range(0..shapes.len())];
        let ws: Vec<&Vec<u8>> = s.iter().map(|&n| &members[n][rng.gen_range(0..members[n].len())]).collect();
        let start = lang.node(ws[0]).expect("member of the language");
        let ok = lengths.iter().any(|&l1| {
            search.connectors[l1].iter().any(|u1| {
                let Some(mid) = walk(lang, start, u1).and_then(|n| walk(lang, n, ws[1])) else { return false };
                lengths.iter().any(|&l2| {
                    search.connectors[l2].iter().any(|u2| walk(lang, mid, u2).and_then(|n| walk(lang, n, ws[2])).is_some())
                })
            })
        });
        failed += usize::from(!ok);
    }
    Ok(KFoldBasis::SampledTriples { tested: opts.triples, failed })
}

/// Re-check every glue entry against the model.
pub fn revalidate(cert: &SpecCertificate, model: &ShiftModel) -> Result<bool> {
    for e in &cert.glue {
        let len_ok = match cert.variant {
            SpecVariant::AtMost => e.u.len() <= cert.tau,
            _ => e.u.len() == cert.tau,
        };
        if !len_ok || !model.concat_check(&e.v, &e.u, &e.w)? {
            return Ok(false);
        }
        if let Some(c) = &e.closing {
            if c.len() != cert.tau || !model.periodic_admissible(Word::join([&e.v, &e.u, &e.w, c]).symbols())? {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

/// Result of checking the whole language at increasing pair depths.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DepthSearch {
    /// `(depth, outcome)` in the order tried; stops at the first counterexample.
    pub trail: Vec<(usize, SpecOutcome)>,
}

impl DepthSearch {
    pub fn last(&self) -> &SpecOutcome {
        &self.trail.last().expect("at least one depth").1
    }

    pub fn counterexample(&self) -> Option<&Counterexample> {
        self.last().counterexample()
    }
}

/// Check `L` itself at pair depths `2..=max_depth`, enumerating the language afresh
/// at each depth, until a counterexample appears.
pub fn grow_counterexample(model: &ShiftModel, tau_max: usize, max_depth: usize) -> Result<DepthSearch> {
    if max_depth < 2 {
        return arg("pair depth must be at least 2");
    }
    let mut trail = Vec::new();
    for depth in 2..=max_depth {
        let lang = enumerate_language(model, depth + tau_max)?;
        let g = OrbitCollection::full(&lang);
        let outcome = check_specification(&g, Some(model), &SpecOptions::new(tau_max, depth))?;
        let stop = matches!(outcome, SpecOutcome::Counterexample(_));
        trail.push((depth, outcome));
        if stop {
            break;
        }
    }
    Ok(DepthSearch { trail })
}

/// Zero-run statistics of a z-prefix and the gap bounds they imply for `L(X_β)`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct BetaSpecCriterion {
    pub longest_zero_run: usize,
    pub trailing_zero_run: usize,
    /// Any gap valid at depths up to the prefix length is at least this.
    pub tau_lower_bound: usize,
    /// Largest vertex-to-base distance over vertices whose distance the prefix decides.
    pub tau_upper_bound: Option<usize>,
    /// Words up to this length are decided by the prefix.
    pub certified_depth: usize,
}

pub fn beta_spec_criterion(z: &Word) -> Result<BetaSpecCriterion> {
    if z.is_empty() {
        return arg("z-prefix is empty");
    }
    let longest = z.longest_run(0);
    let trailing = z.symbols().iter().rev().take_while(|&&a| a == 0).count();
    let graph = BetaGraph::build(z, z.len())?;
    let distances: Vec<Option<usize>> = (0..z.len()).map(|n| graph.distance_to_base(n)).collect();
    let upper = if distances.iter().all(Option::is_some) {
        distances.iter().flatten().copied().max()
    } else {
        // Vertices inside a trailing zero run have undecided distance.
        distances.iter().flatten().copied().max().filter(|_| trailing < longest)
    };
    Ok(BetaSpecCriterion {
        longest_zero_run: longest,
        trailing_zero_run: trailing,
        tau_lower_bound: longest,
        tau_upper_bound: upper,
        certified_depth: z.len(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::word::w;

    fn certify(model: &ShiftModel, tau_max: usize, depth: usize, variant: SpecVariant) -> SpecOutcome {
        let lang = enumerate_language(model, depth + tau_max).unwrap();
        let g = OrbitCollection::full(&lang);
        check_specification(&g, Some(model), &SpecOptions::new(tau_max, depth).variant(variant)).unwrap()
    }

    #[test]
    fn golden_mean_gap_one() {
        let m = ShiftModel::golden_mean();
        let out = certify(&m, 3, 8, SpecVariant::AtMost);
        let cert = out.certificate().unwrap();
        assert_eq!(cert.tau, 1);
        assert!(cert.glue.iter().all(|e| e.u.len() <= 1));
        assert!(cert.glue.iter().filter(|e| !e.u.is_empty()).all(|e| e.u == w("0")));
        assert!(revalidate(cert, &m).unwrap());
        assert_eq!(cert.kfold, KFoldBasis::PairwiseClosed);
    }

    #[test]
    fn full_shift_gap_zero() {
        let out = certify(&ShiftModel::full_shift(2).unwrap(), 2, 6, SpecVariant::AtMost);
        assert_eq!(out.tau(), Some(0));
    }

    #[test]
    fn golden_mean_periodic_strong() {
        let m = ShiftModel::golden_mean();
        let out = certify(&m, 2, 6, SpecVariant::PeriodicStrong);
        let cert = out.certificate().unwrap();
        assert_eq!(cert.tau, 1);
        assert!(revalidate(cert, &m).unwrap());
    }

    #[test]
    fn long_zero_run_counterexample() {
        let z = Word::new([vec![1], vec![0; 12]].concat().repeat(3));
        let m = ShiftModel::beta(z).unwrap();
        let search = grow_counterexample(&m, 6, 6).unwrap();
        let c = search.counterexample().unwrap();
        assert_eq!((c.v.clone(), c.w.clone()), (w("1"), w("1")));
    }

    #[test]
    fn criterion_examples() {
        assert_eq!(beta_spec_criterion(&w("1010101010")).unwrap().longest_zero_run, 1);
        assert_eq!(beta_spec_criterion(&w("1111")).unwrap().longest_zero_run, 0);
        let c = beta_spec_criterion(&w("2102001")).unwrap();
        assert_eq!(c.longest_zero_run, 2);
        assert_eq!(c.tau_upper_bound, Some(3));
    }

    #[test]
    fn depth_must_leave_room_for_connectors() {
        let lang = enumerate_language(&ShiftModel::golden_mean(), 6).unwrap();
        let g = OrbitCollection::full(&lang);
        assert!(check_specification(&g, None, &SpecOptions::new(2, 5)).is_err());
    }
}
