use std::collections::{BTreeMap, HashMap};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{arg, Error, Result};
use crate::language::Language;
use crate::measures::markov::CylinderMeasure;
use crate::potential::{birkhoff_bracket, Potential};
use crate::scalar::{ratio_to_f64, Real};
use crate::word::Word;

/// Visit every `n`-word `u` together with its admissible extensions of length `n + d`
/// (lexicographic order, extensions contiguous).
fn for_each_group(lang: &Language, n: usize, d: usize, mut f: impl FnMut(&[u8], &[Vec<u8>])) {
    let mut group: Vec<Vec<u8>> = Vec::new();
    lang.for_each_word(n + d, |x| {
        if let Some(first) = group.first() {
            if first[..n] != x[..n] {
                f(&group[0][..n].to_vec(), &group);
                group.clear();
            }
        }
        group.push(x.to_vec());
    });
    if !group.is_empty() {
        f(&group[0][..n].to_vec(), &group);
    }
}

fn check_args(lang: &Language, n: usize, d: usize) -> Result<()> {
    if d >= n {
        return arg(format!("cylinder depth {d} must be smaller than n = {n}"));
    }
    if lang.depth() < n + d {
        return Err(Error::InsufficientData(format!(
            "empirical construction needs a language of depth {} (have {})",
            n + d,
            lang.depth()
        )));
    }
    Ok(())
}

/// `μ_n = (1/n) Σ_{k<n} σ^k_* ν_n` tabulated on all cylinders of length `≤ d`, in exact
/// rational arithmetic.
///
/// `ν_n` gives each `n`-cylinder mass `1/#L_n` and splits it equally over the
/// admissible extensions of length `n + d`, so every window `σ^{-k}[w]` with `k < n`,
/// `|w| ≤ d` is determined.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EmpiricalMeasure {
    pub n: usize,
    pub depth: usize,
    alphabet: usize,
    /// `tables[j]` maps each word of length `j` with positive mass to that mass.
    tables: Vec<BTreeMap<Word, BigRational>>,
}

impl EmpiricalMeasure {
    pub fn exact_mass(&self, w: &[u8]) -> BigRational {
        self.tables
            .get(w.len())
            .and_then(|t| t.get(&Word::from_slice(w)).cloned())
            .unwrap_or_else(BigRational::zero)
    }

    /// `(word, mass)` listing at length `j`.
    pub fn listing(&self, j: usize) -> impl Iterator<Item = (&Word, &BigRational)> {
        self.tables[j].iter()
    }

    /// `Σ_w |μ[w] - Σ_a μ[aw]|` over words of length `j < depth`.
    pub fn invariance_defect(&self, j: usize) -> BigRational {
        assert!(j < self.depth, "defect needs cylinders of length j + 1");
        let mut pulled: HashMap<Vec<u8>, BigRational> = HashMap::new();
        for (w, m) in &self.tables[j + 1] {
            *pulled.entry(w.symbols()[1..].to_vec()).or_insert_with(BigRational::zero) += m;
        }
        let mut keys: Vec<Vec<u8>> = pulled.keys().cloned().collect();
        keys.extend(self.tables[j].keys().map(|w| w.symbols().to_vec()));
        keys.sort();
        keys.dedup();
        keys.iter()
            .map(|k| {
                let a = self.exact_mass(k);
                let b = pulled.get(k).cloned().unwrap_or_else(BigRational::zero);
                (a - b).abs()
            })
            .fold(BigRational::zero(), |acc, x| acc + x)
    }
}

impl CylinderMeasure<f64> for EmpiricalMeasure {
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

/// Empirical measure of maximal entropy from uniform weights on `L_n`.
pub fn empirical_mme(lang: &Language, n: usize, d: usize) -> Result<EmpiricalMeasure> {
    check_args(lang, n, d)?;
    // counts[j][w][E] = number of (x, k) with x_{[k+1, k+j]} = w whose n-prefix has E extensions.
    let mut counts: Vec<HashMap<Vec<u8>, BTreeMap<u64, u64>>> = vec![HashMap::new(); d + 1];
    for_each_group(lang, n, d, |_, group| {
        let e = group.len() as u64;
        for x in group {
            for k in 0..n {
                for (j, table) in counts.iter_mut().enumerate().skip(1) {
                    *table.entry(x[k..k + j].to_vec()).or_default().entry(e).or_default() += 1;
                }
            }
        }
    });
    let denom = BigInt::from(n as u64) * BigInt::from(lang.count(n));
    let mut tables = vec![BTreeMap::from([(Word::empty(), BigRational::from_integer(1.into()))])];
    for table in counts.into_iter().skip(1) {
        let mut out = BTreeMap::new();
        for (w, by_e) in table {
            let total = by_e
                .into_iter()
                .fold(BigRational::zero(), |acc, (e, c)| acc + BigRational::new(BigInt::from(c), BigInt::from(e)));
            out.insert(Word::new(w), total / BigRational::from_integer(denom.clone()));
        }
        tables.push(out);
    }
    Ok(EmpiricalMeasure { n, depth: d, alphabet: lang.alphabet_size(), tables })
}

/// Floating-point empirical table for weighted constructions.
#[derive(Debug, Clone, PartialEq)]
pub struct EmpiricalTable<T> {
    pub n: usize,
    pub depth: usize,
    alphabet: usize,
    tables: Vec<HashMap<Vec<u8>, T>>,
}

impl<T: Real> CylinderMeasure<T> for EmpiricalTable<T> {
    fn alphabet_size(&self) -> usize {
        self.alphabet
    }

    fn mass(&self, w: &[u8]) -> T {
        self.tables.get(w.len()).and_then(|t| t.get(w).copied()).unwrap_or_else(T::zero)
    }

    fn max_depth(&self) -> Option<usize> {
        Some(self.depth)
    }
}

/// Approximate equilibrium state: `ν_n[u] ∝ e^{S_n φ(u)}` (supremum over the cylinder),
/// pushed forward and averaged as in [`empirical_mme`].
pub fn empirical_equilibrium<T: Real>(lang: &Language, phi: &Potential<T>, n: usize, d: usize) -> Result<EmpiricalTable<T>> {
    check_args(lang, n, d)?;
    let mut sums: Vec<(Vec<u8>, T)> = Vec::new();
    let mut err = None;
    lang.for_each_word(n, |u| match birkhoff_bracket(phi, u) {
        Ok(b) => sums.push((u.to_vec(), b.hi)),
        Err(e) => err = Some(e),
    });
    if let Some(e) = err {
        return Err(e);
    }
    let top = sums.iter().map(|s| s.1).fold(T::neg_infinity(), T::max);
    let z: T = sums.iter().map(|s| (s.1 - top).exp()).sum();
    let weight: HashMap<Vec<u8>, T> = sums.into_iter().map(|(u, s)| (u, (s - top).exp() / z)).collect();
    let mut tables: Vec<HashMap<Vec<u8>, T>> = vec![HashMap::new(); d + 1];
    tables[0].insert(Vec::new(), T::one());
    let inv_n = T::one() / T::of_usize(n);
    for_each_group(lang, n, d, |u, group| {
        let w = weight[u] / T::of_usize(group.len()) * inv_n;
        for x in group {
            for k in 0..n {
                for (j, table) in tables.iter_mut().enumerate().skip(1) {
                    let e = table.entry(x[k..k + j].to_vec()).or_insert_with(T::zero);
                    *e = *e + w;
                }
            }
        }
    });
    Ok(EmpiricalTable { n, depth: d, alphabet: lang.alphabet_size(), tables })
}
