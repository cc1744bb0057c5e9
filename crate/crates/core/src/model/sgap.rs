use std::collections::BTreeSet;
use std::fmt;

use num_integer::Integer;

use crate::error::{arg, Result};
use crate::word::Word;

/// A finite or eventually periodic set of gap lengths: finitely many elements plus
/// arithmetic progressions `{start, start + step, ..}`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GapSet {
    finite: BTreeSet<u32>,
    progressions: Vec<(u32, u32)>,
}

impl GapSet {
    pub fn finite(elements: impl IntoIterator<Item = u32>) -> Result<Self> {
        GapSet::new(elements.into_iter().collect(), Vec::new())
    }

    /// `finite ∪ ⋃ {start + k step : k ≥ 0}`.
    pub fn new(finite: BTreeSet<u32>, progressions: Vec<(u32, u32)>) -> Result<Self> {
        if finite.is_empty() && progressions.is_empty() {
            return arg("gap set S must be nonempty");
        }
        if progressions.iter().any(|&(_, step)| step == 0) {
            return arg("progression step must be positive");
        }
        Ok(GapSet { finite, progressions })
    }

    /// All non-negative integers.
    pub fn all() -> Self {
        GapSet { finite: BTreeSet::new(), progressions: vec![(0, 1)] }
    }

    /// Parse `1,2,5`, `0..` (all ≥ 0) or `3..+2` (3, 5, 7, ..).
    pub fn parse(s: &str) -> Result<Self> {
        let mut finite = BTreeSet::new();
        let mut progressions = Vec::new();
        for tok in s.split(',').map(str::trim).filter(|t| !t.is_empty()) {
            if let Some((start, rest)) = tok.split_once("..") {
                let start: u32 = start.trim().parse().map_err(|_| bad(tok))?;
                let step = match rest.trim() {
                    "" => 1,
                    r => r.trim_start_matches('+').parse().map_err(|_| bad(tok))?,
                };
                progressions.push((start, step));
            } else {
                finite.insert(tok.parse().map_err(|_| bad(tok))?);
            }
        }
        GapSet::new(finite, progressions)
    }

    pub fn contains(&self, s: u32) -> bool {
        self.finite.contains(&s)
            || self.progressions.iter().any(|&(start, step)| s >= start && (s - start) % step == 0)
    }

    pub fn is_finite(&self) -> bool {
        self.progressions.is_empty()
    }

    /// `max S`, or `None` when S is infinite.
    pub fn max(&self) -> Option<u32> {
        if self.is_finite() {
            self.finite.iter().next_back().copied()
        } else {
            None
        }
    }

    /// Run lengths at or beyond this value can be reduced modulo [`GapSet::period`]
    /// without changing membership of any future gap.
    fn periodic_from(&self) -> Option<(u32, u32)> {
        if self.is_finite() {
            return None;
        }
        let period = self.progressions.iter().fold(1u32, |acc, &(_, step)| acc.lcm(&step));
        let offset = self
            .progressions
            .iter()
            .map(|&(start, _)| start)
            .chain(self.finite.iter().copied())
            .max()
            .unwrap_or(0);
        Some((offset + period, period))
    }

    /// Whether some gap in S is at least `k` (a run of `k` zeros can still close).
    pub fn admits_run(&self, k: u32) -> bool {
        self.max().map_or(true, |m| k <= m)
    }

    fn clamp(&self, run: u32) -> u32 {
        match self.periodic_from() {
            Some((from, period)) if run >= from => from - period + (run - from) % period,
            _ => run,
        }
    }
}

fn bad(tok: &str) -> crate::error::Error {
    crate::error::Error::Argument(format!("bad gap set element {tok:?}"))
}

impl fmt::Display for GapSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut parts: Vec<String> = self.finite.iter().map(|s| s.to_string()).collect();
        for &(start, step) in &self.progressions {
            parts.push(if step == 1 { format!("{start}..") } else { format!("{start}..+{step}") });
        }
        f.write_str(&parts.join(","))
    }
}

/// Reading state: either still inside the leading run of zeros, or `k` zeros after a 1.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum GapPhase {
    Leading(u32),
    After(u32),
}

/// S-gap shift on `{0,1}`: runs of 0s between consecutive 1s have lengths in S. Boundary
/// runs only need to fit inside some gap (`≤ max S` for finite S).
#[derive(Debug, Clone, PartialEq)]
pub struct SGap {
    gaps: GapSet,
}

impl SGap {
    pub fn new(gaps: GapSet) -> Self {
        SGap { gaps }
    }

    pub fn gaps(&self) -> &GapSet {
        &self.gaps
    }

    pub fn start(&self) -> GapPhase {
        GapPhase::Leading(0)
    }

    pub fn step(&self, phase: GapPhase, a: u8) -> Option<GapPhase> {
        match (phase, a) {
            (GapPhase::Leading(k), 0) => {
                let k = k + 1;
                if !self.gaps.admits_run(k) {
                    None
                } else if self.gaps.is_finite() {
                    Some(GapPhase::Leading(k))
                } else {
                    Some(GapPhase::Leading(0))
                }
            }
            (GapPhase::Leading(_), 1) => Some(GapPhase::After(0)),
            (GapPhase::After(k), 0) => {
                let k = k + 1;
                self.gaps.admits_run(k).then(|| GapPhase::After(self.gaps.clamp(k)))
            }
            (GapPhase::After(k), 1) => self.gaps.contains(k).then_some(GapPhase::After(0)),
            _ => None,
        }
    }

    /// Membership by splitting the word into its runs.
    pub fn accepts(&self, w: &Word) -> bool {
        sgap_membership(&self.gaps, w)
    }
}

/// Whether `w` is in the language of the S-gap shift.
pub fn sgap_membership(gaps: &GapSet, w: &Word) -> bool {
    let s = w.symbols();
    if s.iter().any(|&a| a > 1) {
        return false;
    }
    let ones: Vec<usize> = s.iter().enumerate().filter(|(_, &a)| a == 1).map(|(i, _)| i).collect();
    let Some((&first, &last)) = ones.first().zip(ones.last()) else {
        return gaps.admits_run(s.len() as u32);
    };
    if !gaps.admits_run(first as u32) || !gaps.admits_run((s.len() - 1 - last) as u32) {
        return false;
    }
    ones.windows(2).all(|p| gaps.contains((p[1] - p[0] - 1) as u32))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::word::w;

    fn s12() -> GapSet {
        GapSet::finite([1, 2]).unwrap()
    }

    #[test]
    fn membership_examples() {
        assert!(!sgap_membership(&s12(), &w("10110")));
        assert!(sgap_membership(&s12(), &w("10100")));
        assert!(sgap_membership(&GapSet::finite([0]).unwrap(), &w("111")));
    }

    #[test]
    fn boundary_runs_bounded_by_max() {
        assert!(!sgap_membership(&s12(), &w("0001")));
        assert!(sgap_membership(&s12(), &w("001")));
        assert!(!sgap_membership(&s12(), &w("000")));
        assert!(sgap_membership(&GapSet::all(), &w("0000000")));
    }

    #[test]
    fn empty_set_rejected() {
        assert!(GapSet::finite([]).is_err());
    }

    #[test]
    fn parse_progressions() {
        let g = GapSet::parse("1, 4..+3").unwrap();
        assert!(g.contains(1) && g.contains(4) && g.contains(7) && !g.contains(5));
        assert_eq!(g.max(), None);
        assert_eq!(g.to_string(), "1,4..+3");
        assert_eq!(GapSet::parse("0..").unwrap(), GapSet::all());
    }

    #[test]
    fn steps_agree_with_run_split() {
        for gaps in [s12(), GapSet::parse("0..+2").unwrap(), GapSet::parse("1,3..+2").unwrap()] {
            let shift = SGap::new(gaps.clone());
            for n in 0..11u32 {
                for bits in 0..(1u32 << n) {
                    let word: Vec<u8> = (0..n).map(|i| ((bits >> i) & 1) as u8).collect();
                    let mut st = Some(shift.start());
                    for &a in &word {
                        st = st.and_then(|p| shift.step(p, a));
                    }
                    assert_eq!(st.is_some(), sgap_membership(&gaps, &Word::new(word.clone())), "{gaps} {word:?}");
                }
            }
        }
    }
}
