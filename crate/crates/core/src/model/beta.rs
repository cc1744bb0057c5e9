use std::cmp::Ordering;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::word::Word;

/// Whether every suffix of `s` is lexicographically `⪯ z` (compared against the
/// same-length prefix of `z`). Requires `|s| ≤ |z|`.
fn suffixes_below(z: &[u8], s: &[u8]) -> Option<usize> {
    (0..s.len()).find(|&j| s[j..].cmp(&z[..s.len() - j]) == Ordering::Greater)
}

/// Lexicographic membership in the β-shift whose expansion of 1 begins with `z`.
///
/// Errors with [`Error::InsufficientData`] when `|w| > |z|`.
pub fn beta_membership(z: &Word, w: &Word) -> Result<bool> {
    if w.len() > z.len() {
        return Err(Error::InsufficientData(format!(
            "word of length {} exceeds z-prefix depth {}",
            w.len(),
            z.len()
        )));
    }
    Ok(suffixes_below(z.symbols(), w.symbols()).is_none())
}

/// Check that a z-prefix satisfies its own rule `z_{[j,·]} ⪯ z`.
pub fn check_self_admissible(z: &Word) -> Result<()> {
    if z.is_empty() {
        return Err(Error::Construction("z-prefix is empty".into()));
    }
    if z.symbols()[0] == 0 {
        return Err(Error::Construction(format!("z-prefix {z} starts with 0; β > 1 needs z_1 ≥ 1")));
    }
    match suffixes_below(z.symbols(), z.symbols()) {
        None => Ok(()),
        Some(j) => Err(Error::Construction(format!(
            "z-prefix {z} is not self-admissible: suffix starting at position {} exceeds z",
            j + 1
        ))),
    }
}

/// Countable-state graph presentation, truncated at `V = |z|` vertices: vertex `n`
/// has edges labeled `0..=z_{n+1}`; label `z_{n+1}` goes to `n+1`, the rest to 0.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct BetaGraph {
    z: Word,
}

impl BetaGraph {
    pub fn build(z: &Word, vertices: usize) -> Result<Self> {
        if vertices > z.len() {
            return Err(Error::InsufficientData(format!(
                "vertex cap {vertices} exceeds z-prefix depth {}",
                z.len()
            )));
        }
        check_self_admissible(z)?;
        Ok(BetaGraph { z: Word::from_slice(&z.symbols()[..vertices]) })
    }

    pub fn z(&self) -> &Word {
        &self.z
    }

    pub fn vertex_count(&self) -> usize {
        self.z.len()
    }

    /// Out-edges of vertex `n` as `(label, target)`.
    pub fn edges(&self, n: usize) -> Vec<(u8, usize)> {
        let top = self.z.symbols()[n];
        (0..=top).map(|a| (a, if a == top { n + 1 } else { 0 })).collect()
    }

    pub fn step(&self, n: usize, a: u8) -> Result<Option<usize>> {
        let Some(&top) = self.z.symbols().get(n) else {
            return Err(Error::InsufficientData(format!(
                "path reached vertex {n}, beyond the {} certified vertices",
                self.vertex_count()
            )));
        };
        Ok(match a.cmp(&top) {
            Ordering::Less => Some(0),
            Ordering::Equal => Some(n + 1),
            Ordering::Greater => None,
        })
    }

    /// End vertex of the path from the base vertex spelling `w`, if any.
    pub fn walk(&self, w: &[u8]) -> Result<Option<usize>> {
        let mut v = 0;
        for &a in w {
            match self.step(v, a)? {
                Some(next) => v = next,
                None => return Ok(None),
            }
        }
        Ok(Some(v))
    }

    /// Shortest path length from each vertex back to the base vertex (one step for
    /// any vertex with a label below `z_{n+1}`).
    pub fn distance_to_base(&self, n: usize) -> Option<usize> {
        (n..self.vertex_count()).find(|&m| self.z.symbols()[m] > 0).map(|m| m - n + 1)
    }
}

/// A β-shift given by a finite prefix of the quasi-greedy expansion `z` of 1.
#[derive(Debug, Clone, PartialEq)]
pub struct BetaShift {
    graph: BetaGraph,
}

impl BetaShift {
    pub fn new(z: Word) -> Result<Self> {
        let n = z.len();
        Ok(BetaShift { graph: BetaGraph::build(&z, n)? })
    }

    pub fn z(&self) -> &Word {
        self.graph.z()
    }

    pub fn graph(&self) -> &BetaGraph {
        &self.graph
    }

    pub fn alphabet_size(&self) -> usize {
        self.z().symbols()[0] as usize + 1
    }

    /// Longest run of 0s in the prefix and the run of 0s it ends with.
    pub fn zero_runs(&self) -> (usize, usize) {
        let s = self.z().symbols();
        let trailing = s.iter().rev().take_while(|&&a| a == 0).count();
        (self.z().longest_run(0), trailing)
    }
}
