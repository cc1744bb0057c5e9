//! Entropy production from specification and the surgery argument for proper
//! subshifts.

use std::collections::{HashMap, HashSet};

use num_bigint::BigUint;
use num_traits::{One, ToPrimitive};
use serde::{Deserialize, Serialize};

use crate::error::{arg, Error, Result};
use crate::language::Language;
use crate::model::{ModelState, ShiftModel};
use crate::specification::{SpecCertificate, SpecVariant};
use crate::word::Word;

/// All words of length `len` over `alphabet`, in lexicographic order.
fn all_words(alphabet: usize, len: usize) -> Vec<Vec<u8>> {
    let mut out = vec![Vec::new()];
    for _ in 0..len {
        out = out
            .into_iter()
            .flat_map(|p| {
                (0..alphabet as u8).map(move |a| {
                    let mut q = p.clone();
                    q.push(a);
                    q
                })
            })
            .collect();
    }
    out
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ProductionRow {
    pub k: usize,
    pub images: usize,
    pub distinct: usize,
    pub length: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ProductionReport {
    pub w1: Word,
    pub w2: Word,
    pub tau: usize,
    /// `log 2 / (n + τ)`.
    pub bound: f64,
    pub rows: Vec<ProductionRow>,
    pub injective: bool,
}

/// Extend `state` by the lexicographically first connector `u` of length `tau` with
/// `u w` admissible from `state`.
fn connect(model: &ShiftModel, state: &ModelState, connectors: &[Vec<u8>], w: &[u8]) -> Result<Option<(Vec<u8>, ModelState)>> {
    for u in connectors {
        if let Some(s) = model.run_from(state.clone(), u)? {
            if let Some(end) = model.run_from(s, w)? {
                return Ok(Some((u.clone(), end)));
            }
        }
    }
    Ok(None)
}

/// Build `Φ(i) = w_{i_1} u_1 w_{i_2} u_2 ... w_{i_k} u_k` for every `i ∈ {1,2}^k`,
/// connectors of length exactly `τ` taken from the certificate, and count distinct
/// images for `1 ≤ k ≤ k_max`.
pub fn entropy_production_bound(
    model: &ShiftModel,
    cert: &SpecCertificate,
    w1: &Word,
    w2: &Word,
    k_max: usize,
) -> Result<ProductionReport> {
    if cert.variant == SpecVariant::AtMost {
        return arg("entropy production needs an exact-gap certificate");
    }
    if w1 == w2 || w1.len() != w2.len() || w1.is_empty() {
        return arg("w1 and w2 must be distinct words of equal positive length");
    }
    if k_max == 0 || k_max > 20 {
        return arg("k_max must lie in 1..=20");
    }
    for x in [w1, w2] {
        if model.run(x.symbols())?.is_none() {
            return arg(format!("{x} is not admissible"));
        }
    }
    let tau = cert.tau;
    let connectors = all_words(model.alphabet_size(), tau);
    let words = [w1.symbols(), w2.symbols()];
    let mut rows = Vec::with_capacity(k_max);
    for k in 1..=k_max {
        let mut seen = HashSet::new();
        for code in 0u32..(1 << k) {
            let mut img = Vec::with_capacity(k * (w1.len() + tau));
            let first = words[(code & 1) as usize];
            let mut state = model.run(first)?.expect("checked admissible");
            img.extend_from_slice(first);
            for j in 1..=k {
                // The trailing connector only has to extend the word.
                let next: &[u8] = if j < k { words[((code >> j) & 1) as usize] } else { &[] };
                let (u, end) = connect(model, &state, &connectors, next)?.ok_or_else(|| {
                    Error::Construction(format!("no connector of length {tau} after {}", Word::from_slice(&img)))
                })?;
                img.extend_from_slice(&u);
                img.extend_from_slice(next);
                state = end;
            }
            seen.insert(img);
        }
        rows.push(ProductionRow { k, images: 1 << k, distinct: seen.len(), length: k * (w1.len() + tau) });
    }
    let injective = rows.iter().all(|r| r.distinct == r.images);
    Ok(ProductionReport {
        w1: w1.clone(),
        w2: w2.clone(),
        tau,
        bound: 2f64.ln() / (w1.len() + tau) as f64,
        rows,
        injective,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SurgeryReport {
    pub w: Word,
    pub tau: usize,
    pub n: usize,
    pub big_n: usize,
    /// `αN`, the number of pieces.
    pub pieces: usize,
    /// `C = #L_{|w| + 2τ}(Y)`.
    pub c: u64,
    /// `#L_{nN}(Y)`.
    pub base_count: u64,
    /// Number of surgery sets `J`.
    pub sets: u64,
    pub realized: u64,
    /// Largest number of `y` sharing an image under a fixed `J`.
    pub max_preimages: u64,
    pub preimage_bound: u64,
    /// `binom(N-1, αN-1) C^{-(αN-1)} #L_{nN}(Y)`.
    pub predicted: f64,
    /// `α e^{-α log α N} e^{-αN log C} #L_{nN}(Y)`.
    pub predicted_alpha_form: f64,
    /// `(α/n)(-log α - log C)`.
    pub rate: f64,
    /// Images found in `L(Y)`; must be zero.
    pub escaped: u64,
    pub pass: bool,
}

fn binomial(n: u64, k: u64) -> BigUint {
    let mut acc = BigUint::one();
    for i in 0..k {
        acc = acc * BigUint::from(n - i) / BigUint::from(i + 1);
    }
    acc
}

fn combinations(points: &[usize], k: usize) -> Vec<Vec<usize>> {
    if k == 0 {
        return vec![Vec::new()];
    }
    if points.len() < k {
        return Vec::new();
    }
    let mut out = Vec::new();
    for (i, &p) in points.iter().enumerate() {
        for mut rest in combinations(&points[i + 1..], k - 1) {
            rest.insert(0, p);
            out.push(rest);
        }
    }
    out
}

/// Insert `v1 w v2` ending at each boundary `j ∈ J` of every `y ∈ L_{nN}(Y)` and count
/// the distinct words of `L(X)` produced.
///
/// `J` ranges over subsets of `{n, 2n, ..., (N-1)n}` of size `pieces - 1`; the
/// connectors are the lexicographically first pair making the word admissible in `X`.
/// PASS iff the realized count reaches the binomial prediction, every image avoids
/// `L(Y)`, and no image has more than `C^{pieces-1}` preimages under a fixed `J`.
pub fn subshift_gap_check(
    x: &ShiftModel,
    ly: &Language,
    w: &Word,
    tau: usize,
    n: usize,
    big_n: usize,
    pieces: usize,
) -> Result<SurgeryReport> {
    let t = w.len();
    if t == 0 || x.run(w.symbols())?.is_none() {
        return arg(format!("{w} must be a nonempty word of L(X)"));
    }
    if t > ly.depth() {
        return Err(Error::InsufficientData(format!("L(Y) known to depth {}, |w| = {t}", ly.depth())));
    }
    if ly.contains(w.symbols()) {
        return arg(format!("{w} lies in L(Y)"));
    }
    let window = t + 2 * tau;
    if n <= window {
        return arg(format!("n = {n} must exceed |w| + 2τ = {window}"));
    }
    if big_n < 2 || pieces == 0 || pieces > big_n {
        return arg("need N ≥ 2 and 1 ≤ αN ≤ N");
    }
    let len = n * big_n;
    if ly.depth() < len {
        return Err(Error::InsufficientData(format!("L(Y) known to depth {}, need {len}", ly.depth())));
    }
    let connectors = all_words(x.alphabet_size(), tau);
    let pairs: Vec<(&Vec<u8>, &Vec<u8>)> =
        connectors.iter().flat_map(|a| connectors.iter().map(move |b| (a, b))).collect();
    let points: Vec<usize> = (1..big_n).map(|i| i * n).collect();
    let sets = combinations(&points, pieces - 1);
    let ys = ly.words(len);

    let mut all = HashSet::new();
    let mut max_pre = 0u64;
    let mut escaped = 0u64;
    for set in &sets {
        let mut per_set: HashMap<Vec<u8>, u64> = HashMap::new();
        for y in &ys {
            let mut img = y.symbols().to_vec();
            for &j in set {
                let start = j - window;
                let mut placed = false;
                for (v1, v2) in &pairs {
                    let mut trial = img.clone();
                    let block: Vec<u8> = v1.iter().chain(w.symbols()).chain(v2.iter()).copied().collect();
                    trial[start..j].copy_from_slice(&block);
                    if x.run(&trial[..j])?.is_some() {
                        img = trial;
                        placed = true;
                        break;
                    }
                }
                if !placed {
                    return Err(Error::Construction(format!("no connectors around {w} at position {j}")));
                }
            }
            if x.run(&img)?.is_none() {
                return Err(Error::Construction(format!("surgery on {y} left L(X)")));
            }
            if ly.contains(&img) {
                escaped += 1;
            }
            *per_set.entry(img.clone()).or_default() += 1;
            all.insert(img);
        }
        max_pre = max_pre.max(per_set.values().copied().max().unwrap_or(0));
    }

    let s = (pieces - 1) as u32;
    let c = ly.count(window);
    let base = ly.count(len);
    let realized = all.len() as u64;
    let binom = binomial((big_n - 1) as u64, (pieces - 1) as u64);
    let c_pow = BigUint::from(c).pow(s);
    // realized ≥ binom · #L / C^s, decided exactly.
    let reaches = BigUint::from(realized) * &c_pow >= &binom * BigUint::from(base);
    let preimage_bound = c_pow.to_u64().unwrap_or(u64::MAX);
    let alpha = pieces as f64 / big_n as f64;
    let cf = c as f64;
    let predicted = binom.to_f64().unwrap_or(f64::INFINITY) * cf.powi(-(s as i32)) * base as f64;
    let predicted_alpha_form =
        alpha * (-alpha * alpha.ln() * big_n as f64).exp() * (-(pieces as f64) * cf.ln()).exp() * base as f64;
    Ok(SurgeryReport {
        w: w.clone(),
        tau,
        n,
        big_n,
        pieces,
        c,
        base_count: base,
        sets: sets.len() as u64,
        realized,
        max_preimages: max_pre,
        preimage_bound,
        predicted,
        predicted_alpha_form,
        rate: alpha / n as f64 * (-alpha.ln() - cf.ln()),
        escaped,
        pass: reaches && escaped == 0 && max_pre <= preimage_bound,
    })
}
