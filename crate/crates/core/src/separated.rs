//! Greedy `(n, ε)`-separated sets for maps of the circle `[0, 1)`.
//!
//! Greedy packing over a uniform grid yields a separated set, so every count here is
//! a lower bound on `Λ(ε, n)`, never the maximum itself.

use std::collections::HashMap;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::entropy::{GrowthEstimate, Window};
use crate::error::{arg, Result};

/// Grid points per `ε` below which a request is refused.
pub const GRID_SAFETY: f64 = 4.0;

pub fn circle_distance(x: f64, y: f64) -> f64 {
    let d = (x - y).abs().fract();
    d.min(1.0 - d)
}

/// `d_n(x, y) = max_{0 ≤ k < n} d(f^k x, f^k y)` from precomputed orbits.
fn close(a: &[f64], b: &[f64], eps: f64) -> bool {
    a.iter().zip(b).all(|(&p, &q)| circle_distance(p, q) <= eps)
}

fn orbit<M: Fn(f64) -> f64>(map: &M, x: f64, n: usize, out: &mut Vec<f64>) {
    out.clear();
    let mut y = x;
    for _ in 0..n {
        out.push(y);
        y = map(y);
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SeparatedSet {
    pub eps: f64,
    pub n: usize,
    pub grid: usize,
    /// Increasing.
    pub points: Vec<f64>,
    /// No further grid point can be added.
    pub greedy_maximal: bool,
}

impl SeparatedSet {
    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    /// Pairwise `d_n > ε`, checked directly on every pair.
    pub fn verify<M: Fn(f64) -> f64>(&self, map: &M) -> bool {
        let orbits: Vec<Vec<f64>> = self
            .points
            .iter()
            .map(|&x| {
                let mut o = Vec::new();
                orbit(map, x, self.n, &mut o);
                o
            })
            .collect();
        (0..orbits.len()).all(|i| (i + 1..orbits.len()).all(|j| !close(&orbits[i], &orbits[j], self.eps)))
    }
}

fn check_grid(eps: f64, grid: usize) -> Result<()> {
    if !(eps > 0.0 && eps < 0.5) {
        return arg(format!("ε = {eps} must lie in (0, 1/2)"));
    }
    if eps * (grid as f64) < GRID_SAFETY {
        return arg(format!("ε = {eps} is below the grid resolution 1/{grid} × {GRID_SAFETY}"));
    }
    Ok(())
}

/// Orbit coordinates used to bucket kept points.
const HASHED_COORDS: usize = 4;

/// Cells of width at least `ε` on the last few orbit coordinates; two `d_n`-close
/// points lie in neighbouring cells on every hashed coordinate.
struct CellIndex {
    buckets: u64,
    coords: Vec<usize>,
    cells: HashMap<u64, Vec<u32>>,
}

impl CellIndex {
    fn new(eps: f64, n: usize) -> Self {
        let buckets = ((1.0 / eps).floor() as u64).max(1);
        let coords = (n.saturating_sub(HASHED_COORDS)..n).collect();
        CellIndex { buckets, coords, cells: HashMap::new() }
    }

    fn bucket(&self, v: f64) -> u64 {
        ((v * self.buckets as f64) as u64).min(self.buckets - 1)
    }

    fn key(&self, orbit: &[f64]) -> u64 {
        self.coords.iter().fold(0, |k, &c| k * self.buckets + self.bucket(orbit[c]))
    }

    fn insert(&mut self, orbit: &[f64], id: u32) {
        let k = self.key(orbit);
        self.cells.entry(k).or_default().push(id);
    }

    /// Keys of all cells adjacent to the orbit's cell, without repeats.
    fn neighbours(&self, orbit: &[f64]) -> Vec<u64> {
        let mut keys = vec![0u64];
        for &c in &self.coords {
            let b = self.bucket(orbit[c]);
            let mut around = vec![(b + self.buckets - 1) % self.buckets, b, (b + 1) % self.buckets];
            around.sort_unstable();
            around.dedup();
            keys = keys.iter().flat_map(|&k| around.iter().map(move |&a| k * self.buckets + a)).collect();
        }
        keys
    }
}

/// Scan the grid points `(i + 1/2)/grid` in order, keeping each one that is
/// `(n, ε)`-separated from everything kept so far.
pub fn greedy_separated_set<M: Fn(f64) -> f64>(map: &M, eps: f64, n: usize, grid: usize) -> Result<SeparatedSet> {
    check_grid(eps, grid)?;
    if n == 0 {
        return arg("order n must be positive");
    }
    let mut points: Vec<f64> = Vec::new();
    let mut orbits: Vec<Vec<f64>> = Vec::new();
    let mut index = CellIndex::new(eps, n);
    let mut cand = Vec::with_capacity(n);
    for i in 0..grid {
        let y = (i as f64 + 0.5) / grid as f64;
        orbit(map, y, n, &mut cand);
        // The most recent point rejects most candidates.
        let mut rejected = orbits.last().is_some_and(|o| close(o, &cand, eps));
        if !rejected {
            rejected = index.neighbours(&cand).iter().any(|k| {
                index.cells.get(k).is_some_and(|ids| ids.iter().any(|&j| close(&orbits[j as usize], &cand, eps)))
            });
        }
        if !rejected {
            index.insert(&cand, points.len() as u32);
            points.push(y);
            orbits.push(cand.clone());
        }
    }
    Ok(SeparatedSet { eps, n, grid, points, greedy_maximal: true })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SeparatedEntropy {
    pub eps: f64,
    pub grid: usize,
    /// `(n, greedy lower bound on Λ(ε, n))`.
    pub counts: Vec<(usize, u64)>,
    /// Growth of `log Λ_lower`; a lower-bound estimate only.
    pub estimate: GrowthEstimate<f64>,
}

/// Greedy separated-set counts for `n` in the window and their growth rate.
pub fn separated_entropy<M: Fn(f64) -> f64 + Sync>(
    map: &M,
    eps: f64,
    window: Window,
    grid: usize,
) -> Result<SeparatedEntropy> {
    check_grid(eps, grid)?;
    let counts: Vec<(usize, u64)> = window
        .lengths()
        .collect::<Vec<_>>()
        .into_par_iter()
        .map(|n| greedy_separated_set(map, eps, n, grid).map(|s| (n, s.len() as u64)))
        .collect::<Result<_>>()?;
    let values: Vec<(usize, f64)> = counts.iter().map(|&(n, c)| (n, (c as f64).ln())).collect();
    let estimate = GrowthEstimate::from_values(&values, window, false)?;
    Ok(SeparatedEntropy { eps, grid, counts, estimate })
}

/// Grid size resolving `(n_max, ε)`-separation for a map expanding by at most `beta`.
pub fn suggested_grid(beta: f64, eps: f64, n_max: usize) -> usize {
    (8.0 * beta.powi(n_max.saturating_sub(1) as i32) / eps).ceil() as usize
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TrendRow {
    pub eps: f64,
    pub greedy: u64,
    /// Best count over all `ε' ≥ ε` in the table, monotone as `ε` decreases.
    pub lower_bound: u64,
}

/// Greedy counts at fixed `n` for each `ε`, sorted by decreasing `ε`.
///
/// An `(n, ε')`-separated set is `(n, ε)`-separated for `ε ≤ ε'`, so the running
/// maximum is still a valid lower bound.
pub fn separated_trend<M: Fn(f64) -> f64 + Sync>(map: &M, eps: &[f64], n: usize, grid: usize) -> Result<Vec<TrendRow>> {
    let mut eps = eps.to_vec();
    eps.sort_by(|a, b| b.total_cmp(a));
    let greedy: Vec<u64> = eps
        .par_iter()
        .map(|&e| greedy_separated_set(map, e, n, grid).map(|s| s.len() as u64))
        .collect::<Result<_>>()?;
    let mut best = 0;
    Ok(eps
        .into_iter()
        .zip(greedy)
        .map(|(e, g)| {
            best = best.max(g);
            TrendRow { eps: e, greedy: g, lower_bound: best }
        })
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn beta_map(beta: f64) -> impl Fn(f64) -> f64 + Sync {
        move |x: f64| (beta * x).fract()
    }

    #[test]
    fn identity_has_zero_entropy() {
        let r = separated_entropy(&|x| x, 0.1, Window::new(1, 6).unwrap(), 1000).unwrap();
        assert!(r.counts.windows(2).all(|p| p[0].1 == p[1].1));
        assert!(r.estimate.regression.abs() < 1e-12);
    }

    #[test]
    fn greedy_set_is_separated() {
        let f = beta_map(2.5);
        let s = greedy_separated_set(&f, 0.1, 5, 4000).unwrap();
        assert!(s.verify(&f));
        assert!(s.len() > 10);
    }

    #[test]
    fn resolution_is_enforced() {
        assert!(greedy_separated_set(&|x| x, 0.001, 2, 100).is_err());
    }

    #[test]
    fn trend_is_monotone() {
        let f = beta_map(2.0);
        let t = separated_trend(&f, &[0.05, 0.2, 0.1], 4, 4000).unwrap();
        assert_eq!(t[0].eps, 0.2);
        assert!(t.windows(2).all(|p| p[0].lower_bound <= p[1].lower_bound));
    }

    #[test]
    fn doubling_entropy() {
        let f = beta_map(2.0);
        let grid = suggested_grid(2.0, 0.1, 14);
        let r = separated_entropy(&f, 0.1, Window::new(1, 14).unwrap(), grid).unwrap();
        assert!((r.estimate.regression - 2f64.ln()).abs() < 0.05, "{:?}", r.counts);
    }
}
