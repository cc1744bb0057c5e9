use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{arg, Error, Result};
use crate::language::Language;
use crate::linalg::perron;
use crate::language::enumerate_language;
use crate::model::{ShiftModel, Sft};
use crate::potential::LocallyConstant;
use crate::scalar::Real;
use crate::word::Word;

/// A σ-invariant measure that can be evaluated on cylinders.
pub trait CylinderMeasure<T> {
    fn alphabet_size(&self) -> usize;

    /// `μ[w]`. The empty word has mass 1.
    fn mass(&self, w: &[u8]) -> T;

    /// Deepest cylinder length the measure can answer, if bounded.
    fn max_depth(&self) -> Option<usize> {
        None
    }
}

/// Markov measure on `m`-blocks: states are words of length `m`, and the chain moves
/// `u → v` when `v` is `u` shifted left by one symbol.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MarkovMeasure<T> {
    alphabet: usize,
    block: usize,
    states: Vec<Word>,
    stationary: Vec<T>,
    transition: Vec<Vec<T>>,
}

impl<T: Real> MarkovMeasure<T> {
    /// Validate and build; `pP = p`, `Σ p = 1` and row sums 1 are checked to `tol`.
    pub fn new(alphabet: usize, states: Vec<Word>, stationary: Vec<T>, transition: Vec<Vec<T>>) -> Result<Self> {
        let n = states.len();
        if n == 0 || stationary.len() != n || transition.len() != n || transition.iter().any(|r| r.len() != n) {
            return arg("Markov data dimensions disagree");
        }
        let block = states[0].len();
        if block == 0 || states.iter().any(|s| s.len() != block) {
            return arg("Markov states must be words of a common positive length");
        }
        let tol = T::of(1e-6).max(T::epsilon() * T::of(1e4));
        if stationary.iter().any(|&p| p < -tol) || transition.iter().flatten().any(|&p| p < -tol) {
            return arg("Markov data has negative entries");
        }
        if (stationary.iter().copied().sum::<T>() - T::one()).abs() > tol {
            return arg("stationary vector does not sum to 1");
        }
        for (i, row) in transition.iter().enumerate() {
            if (row.iter().copied().sum::<T>() - T::one()).abs() > tol {
                return arg(format!("transition row {i} is not stochastic"));
            }
        }
        for j in 0..n {
            let pj: T = (0..n).map(|i| stationary[i] * transition[i][j]).sum();
            if (pj - stationary[j]).abs() > tol {
                return arg(format!("vector is not stationary at state {}", states[j]));
            }
        }
        Ok(MarkovMeasure { alphabet, block, states, stationary, transition })
    }

    /// Bernoulli measure with the given symbol probabilities.
    pub fn bernoulli(probs: &[T]) -> Result<Self> {
        let states = (0..probs.len()).map(|a| Word::new(vec![a as u8])).collect();
        MarkovMeasure::new(probs.len(), states, probs.to_vec(), vec![probs.to_vec(); probs.len()])
    }

    /// Markov measure from Perron data of a weighted matrix on the given states:
    /// `P_uv = M_uv r_v / (λ r_u)`, `p_u = l_u r_u`.
    pub fn from_weighted(alphabet: usize, states: Vec<Word>, m: &[Vec<T>]) -> Result<(Self, T)> {
        let pd = perron(m)?;
        let n = states.len();
        let transition: Vec<Vec<T>> = (0..n)
            .map(|u| (0..n).map(|v| m[u][v] * pd.right[v] / (pd.lambda * pd.right[u])).collect())
            .collect();
        let stationary: Vec<T> = (0..n).map(|u| pd.left[u] * pd.right[u]).collect();
        let s: T = stationary.iter().copied().sum();
        let stationary = stationary.into_iter().map(|p| p / s).collect();
        Ok((MarkovMeasure::new(alphabet, states, stationary, transition)?, pd.lambda))
    }

    pub fn block(&self) -> usize {
        self.block
    }

    pub fn states(&self) -> &[Word] {
        &self.states
    }

    pub fn stationary(&self) -> &[T] {
        &self.stationary
    }

    pub fn transition(&self) -> &[Vec<T>] {
        &self.transition
    }

    fn state_index(&self, w: &[u8]) -> Option<usize> {
        self.states.iter().position(|s| s.symbols() == w)
    }

    /// `h_μ = -Σ p_u P_uv log P_uv`.
    pub fn entropy(&self) -> T {
        let mut h = T::zero();
        for (u, row) in self.transition.iter().enumerate() {
            for &p in row {
                if p > T::zero() {
                    h = h - self.stationary[u] * p * p.ln();
                }
            }
        }
        h
    }

    /// `∫ φ dμ` for a locally constant potential.
    pub fn integral(&self, phi: &LocallyConstant<T>) -> T {
        phi.entries().map(|(w, &v)| self.mass(w) * v).sum()
    }

    /// Sample `x_1 .. x_n` from the chain.
    pub fn sample(&self, n: usize, rng: &mut impl Rng) -> Vec<u8> {
        let pick = |weights: &[T], rng: &mut dyn rand::RngCore| {
            let r = T::of(rng.gen::<f64>());
            let mut acc = T::zero();
            for (i, &w) in weights.iter().enumerate() {
                acc = acc + w;
                if r < acc {
                    return i;
                }
            }
            weights.iter().rposition(|&w| w > T::zero()).unwrap_or(0)
        };
        let mut state = pick(&self.stationary, rng);
        let mut out = self.states[state].symbols().to_vec();
        while out.len() < n {
            state = pick(&self.transition[state], rng);
            out.push(*self.states[state].symbols().last().expect("nonempty state"));
        }
        out.truncate(n);
        out
    }
}

impl<T: Real> CylinderMeasure<T> for MarkovMeasure<T> {
    fn alphabet_size(&self) -> usize {
        self.alphabet
    }

    fn mass(&self, w: &[u8]) -> T {
        let m = self.block;
        if w.len() < m {
            return self
                .states
                .iter()
                .zip(&self.stationary)
                .filter(|(s, _)| s.symbols().starts_with(w))
                .map(|(_, &p)| p)
                .sum();
        }
        let Some(mut u) = self.state_index(&w[..m]) else {
            return T::zero();
        };
        let mut mass = self.stationary[u];
        for i in 1..=w.len() - m {
            let Some(v) = self.state_index(&w[i..i + m]) else {
                return T::zero();
            };
            mass = mass * self.transition[u][v];
            u = v;
        }
        mass
    }
}

fn live_states(sft: &Sft) -> Vec<u8> {
    (0..sft.alphabet_size() as u8).filter(|&a| sft.is_live(a)).collect()
}

/// The Parry measure: Markov measure from Perron data of the transition matrix.
pub fn parry_measure<T: Real>(sft: &Sft) -> Result<MarkovMeasure<T>> {
    let live = live_states(sft);
    let m: Vec<Vec<T>> = live
        .iter()
        .map(|&i| live.iter().map(|&j| if sft.allowed(i, j) { T::one() } else { T::zero() }).collect())
        .collect();
    let states = live.iter().map(|&a| Word::new(vec![a])).collect();
    Ok(MarkovMeasure::from_weighted(sft.alphabet_size(), states, &m)?.0)
}

/// Equilibrium state of a locally constant potential on an SFT as a Markov measure
/// on `max(k-1, 1)`-blocks, together with `log ρ` of the weighted matrix (the pressure).
pub fn weighted_gibbs_markov<T: Real>(sft: &Sft, phi: &LocallyConstant<T>) -> Result<(MarkovMeasure<T>, T)> {
    let k = phi.window();
    let m = k.saturating_sub(1).max(1);
    let lang = enumerate_language(&ShiftModel::Sft(sft.clone()), m + 1)?;
    let states = lang.words(m);
    let index = |w: &[u8]| states.iter().position(|s| s.symbols() == w);
    let n = states.len();
    let mut mat = vec![vec![T::zero(); n]; n];
    let mut err = None;
    lang.for_each_word(m + 1, |w| {
        let (Some(u), Some(v)) = (index(&w[..m]), index(&w[1..])) else { return };
        match phi.term(&w[..k.max(1).min(m + 1)]) {
            Ok(b) if b.width() == T::zero() => mat[u][v] = b.lo.exp(),
            Ok(_) => err = Some(Error::Argument(format!("potential is not determined by {}", Word::from_slice(w)))),
            Err(e) => err = Some(e),
        }
    });
    if let Some(e) = err {
        return Err(e);
    }
    let (mu, lambda) = MarkovMeasure::from_weighted(lang.alphabet_size(), states, &mat)?;
    Ok((mu, lambda.ln()))
}

/// `H_μ(α_0^{n-1}) / n` over the words of length `n`.
pub fn static_entropy<T: Real, M: CylinderMeasure<T>>(mu: &M, lang: &Language, n: usize) -> T {
    let mut h = T::zero();
    lang.for_each_word(n, |w| {
        let p = mu.mass(w);
        if p > T::zero() {
            h = h - p * p.ln();
        }
    });
    h / T::of_usize(n)
}
