//! Executable shift-space presentations.

mod beta;
pub mod config;
mod sft;
mod sgap;
mod sofic;

use std::collections::HashSet;
use std::hash::Hash;

pub use beta::{beta_membership, check_self_admissible, BetaGraph, BetaShift};
pub use sft::Sft;
pub use sgap::{sgap_membership, GapPhase, GapSet, SGap};
pub use sofic::Sofic;

use crate::error::{Error, Result};
use crate::word::Word;

/// Anything that can drive language enumeration: a deterministic successor oracle and
/// an independent membership oracle used to cross-check it.
pub trait LanguageSource: Sync {
    type State: Clone + Eq + Hash + Send + Sync;

    fn alphabet_size(&self) -> usize;

    fn initial(&self) -> Self::State;

    /// `Ok(None)` when appending `a` leaves the language.
    fn advance(&self, state: &Self::State, a: u8) -> Result<Option<Self::State>>;

    fn member(&self, w: &Word) -> Result<bool>;

    /// Longest word length on which the oracles are certified, if bounded.
    fn certifiable_depth(&self) -> Option<usize> {
        None
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum ShiftModel {
    Sft(Sft),
    Sofic(Sofic),
    Beta(BetaShift),
    SGap(SGap),
}

/// Reading state of a [`ShiftModel`] after a word.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum ModelState {
    Sft(Option<u8>),
    Subset(u64),
    Vertex(usize),
    Gap(GapPhase),
}

impl ShiftModel {
    pub fn sft(matrix: Vec<Vec<u8>>) -> Result<Self> {
        Ok(ShiftModel::Sft(Sft::new(matrix)?))
    }

    pub fn full_shift(symbols: usize) -> Result<Self> {
        ShiftModel::sft(vec![vec![1; symbols]; symbols])
    }

    pub fn golden_mean() -> Self {
        ShiftModel::Sft(Sft::new(vec![vec![1, 1], vec![1, 0]]).expect("golden mean matrix is valid"))
    }

    pub fn beta(z: Word) -> Result<Self> {
        Ok(ShiftModel::Beta(BetaShift::new(z)?))
    }

    pub fn sgap(gaps: GapSet) -> Self {
        ShiftModel::SGap(SGap::new(gaps))
    }

    pub fn kind(&self) -> &'static str {
        match self {
            ShiftModel::Sft(_) => "sft",
            ShiftModel::Sofic(_) => "sofic",
            ShiftModel::Beta(_) => "beta",
            ShiftModel::SGap(_) => "sgap",
        }
    }

    pub fn alphabet_size(&self) -> usize {
        match self {
            ShiftModel::Sft(s) => s.alphabet_size(),
            ShiftModel::Sofic(s) => s.alphabet_size(),
            ShiftModel::Beta(b) => b.alphabet_size(),
            ShiftModel::SGap(_) => 2,
        }
    }

    pub fn as_sft(&self) -> Option<&Sft> {
        match self {
            ShiftModel::Sft(s) => Some(s),
            _ => None,
        }
    }

    pub fn as_beta(&self) -> Option<&BetaShift> {
        match self {
            ShiftModel::Beta(b) => Some(b),
            _ => None,
        }
    }

    pub fn start(&self) -> ModelState {
        match self {
            ShiftModel::Sft(_) => ModelState::Sft(None),
            ShiftModel::Sofic(s) => ModelState::Subset(s.start()),
            ShiftModel::Beta(_) => ModelState::Vertex(0),
            ShiftModel::SGap(g) => ModelState::Gap(g.start()),
        }
    }

    pub fn step(&self, state: &ModelState, a: u8) -> Result<Option<ModelState>> {
        if a as usize >= self.alphabet_size() {
            return Ok(None);
        }
        Ok(match (self, state) {
            (ShiftModel::Sft(s), ModelState::Sft(last)) => s.step(*last, a).map(|b| ModelState::Sft(Some(b))),
            (ShiftModel::Sofic(s), ModelState::Subset(q)) => s.step(*q, a).map(ModelState::Subset),
            (ShiftModel::Beta(b), ModelState::Vertex(n)) => b.graph().step(*n, a)?.map(ModelState::Vertex),
            (ShiftModel::SGap(g), ModelState::Gap(p)) => g.step(*p, a).map(ModelState::Gap),
            _ => return Err(Error::Argument(format!("state {state:?} does not belong to a {} model", self.kind()))),
        })
    }

    /// State after reading `w` from the start, or `None` if `w` is not admissible.
    pub fn run(&self, w: &[u8]) -> Result<Option<ModelState>> {
        self.run_from(self.start(), w)
    }

    pub fn run_from(&self, mut state: ModelState, w: &[u8]) -> Result<Option<ModelState>> {
        for &a in w {
            match self.step(&state, a)? {
                Some(next) => state = next,
                None => return Ok(None),
            }
        }
        Ok(Some(state))
    }

    /// Symbols `a` with `wa` admissible, given the state reached by `w`.
    pub fn successors(&self, state: &ModelState) -> Result<Vec<u8>> {
        let mut out = Vec::new();
        for a in 0..self.alphabet_size() as u8 {
            if self.step(state, a)?.is_some() {
                out.push(a);
            }
        }
        Ok(out)
    }

    /// Membership oracle independent of the successor automaton.
    pub fn accepts(&self, w: &Word) -> Result<bool> {
        if w.symbols().iter().any(|&a| a as usize >= self.alphabet_size()) {
            return Ok(false);
        }
        Ok(match self {
            ShiftModel::Sft(s) => s.accepts(w),
            ShiftModel::Sofic(s) => s.accepts(w),
            ShiftModel::Beta(b) => beta_membership(b.z(), w)?,
            ShiftModel::SGap(g) => g.accepts(w),
        })
    }

    /// `true` iff `v u w` is admissible.
    pub fn concat_check(&self, v: &Word, u: &Word, w: &Word) -> Result<bool> {
        for x in [v, u, w] {
            x.check_alphabet(self.alphabet_size())?;
        }
        Ok(self.run(&Word::join([v, u, w]).into_symbols())?.is_some())
    }

    /// Whether the periodic point `w^∞` lies in the shift.
    ///
    /// Every power `w^m` must be admissible; the state after each full period is
    /// iterated until it repeats. For β-shifts this is certified only while the path
    /// stays inside the z-prefix, otherwise an insufficient-data error is returned.
    pub fn periodic_admissible(&self, w: &[u8]) -> Result<bool> {
        if w.is_empty() {
            return Ok(true);
        }
        if let ShiftModel::Sft(s) = self {
            let n = w.len();
            return Ok((0..n).all(|i| s.is_live(w[i]) && s.allowed(w[i], w[(i + 1) % n])));
        }
        let mut seen = HashSet::new();
        let mut state = self.start();
        loop {
            match self.run_from(state.clone(), w)? {
                None => return Ok(false),
                Some(next) => {
                    if !seen.insert(next.clone()) {
                        return Ok(true);
                    }
                    state = next;
                }
            }
        }
    }

    pub fn certifiable_depth(&self) -> Option<usize> {
        match self {
            ShiftModel::Beta(b) => Some(b.z().len()),
            _ => None,
        }
    }
}

impl LanguageSource for ShiftModel {
    type State = ModelState;

    fn alphabet_size(&self) -> usize {
        ShiftModel::alphabet_size(self)
    }

    fn initial(&self) -> ModelState {
        self.start()
    }

    fn advance(&self, state: &ModelState, a: u8) -> Result<Option<ModelState>> {
        self.step(state, a)
    }

    fn member(&self, w: &Word) -> Result<bool> {
        self.accepts(w)
    }

    fn certifiable_depth(&self) -> Option<usize> {
        ShiftModel::certifiable_depth(self)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::word::w;

    #[test]
    fn concat_examples() {
        let g = ShiftModel::golden_mean();
        assert!(g.concat_check(&w("1"), &w("0"), &w("1")).unwrap());
        assert!(!g.concat_check(&w("1"), &w(""), &w("1")).unwrap());
        let full = ShiftModel::full_shift(2).unwrap();
        assert!(full.concat_check(&w("11"), &w(""), &w("11")).unwrap());
        assert!(g.concat_check(&w("2"), &w(""), &w("")).is_err());
    }

    #[test]
    fn periodic_points_of_golden_mean() {
        let g = ShiftModel::golden_mean();
        assert!(g.periodic_admissible(&[1, 0]).unwrap());
        assert!(!g.periodic_admissible(&[1]).unwrap());
        assert!(!g.periodic_admissible(&[1, 0, 1]).unwrap());
    }

    #[test]
    fn periodic_points_of_sofic_and_gap_models() {
        let even = ShiftModel::Sofic(Sofic::new(2, 2, vec![(0, 0, 1), (0, 1, 0), (1, 0, 0)]).unwrap());
        assert!(even.periodic_admissible(&[1, 0, 0]).unwrap());
        assert!(!even.periodic_admissible(&[1, 0]).unwrap());
        let gap = ShiftModel::sgap(GapSet::finite([1, 2]).unwrap());
        assert!(gap.periodic_admissible(&[1, 0, 1, 0, 0]).unwrap());
        assert!(!gap.periodic_admissible(&[1, 0, 0, 0]).unwrap());
    }

    #[test]
    fn beta_periodic_beyond_prefix_is_insufficient() {
        let b = ShiftModel::beta(w("1010")).unwrap();
        assert!(!b.periodic_admissible(&[1, 1]).unwrap());
        assert!(b.periodic_admissible(&[1, 0, 0]).unwrap());
        assert!(matches!(b.periodic_admissible(&[1, 0]), Err(Error::InsufficientData(_))));
    }
}
