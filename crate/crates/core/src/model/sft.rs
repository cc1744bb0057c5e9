use crate::error::{arg, Error, Result};
use crate::word::Word;

/// Vertex shift defined by a 0/1 transition matrix: `x_i x_{i+1}` is allowed iff
/// `A[x_i][x_{i+1}] == 1`. Symbols with no infinite forward path are pruned.
#[derive(Debug, Clone, PartialEq)]
pub struct Sft {
    matrix: Vec<Vec<u8>>,
    live: Vec<bool>,
}

impl Sft {
    pub fn new(matrix: Vec<Vec<u8>>) -> Result<Self> {
        let n = matrix.len();
        if n == 0 {
            return arg("transition matrix is empty");
        }
        if n > u8::MAX as usize + 1 {
            return arg("alphabet larger than 256 symbols");
        }
        for (i, row) in matrix.iter().enumerate() {
            if row.len() != n {
                return arg(format!("row {i} has length {}, expected {n}", row.len()));
            }
            if let Some(v) = row.iter().find(|&&v| v > 1) {
                return arg(format!("entry {v} in row {i} is not 0/1"));
            }
        }
        let live = live_symbols(&matrix);
        if !live.iter().any(|&l| l) {
            return Err(Error::Construction(format!(
                "transition matrix {matrix:?} admits no infinite path (no cycle); the shift is empty"
            )));
        }
        Ok(Sft { matrix, live })
    }

    /// Vertex presentation of the edge shift of a multigraph given by edge multiplicities.
    /// Returns the SFT together with the `(from, to)` endpoints of each edge symbol.
    pub fn from_edge_multiplicities(counts: &[Vec<u32>]) -> Result<(Self, Vec<(usize, usize)>)> {
        let n = counts.len();
        let mut edges = Vec::new();
        for (i, row) in counts.iter().enumerate() {
            if row.len() != n {
                return arg(format!("row {i} has length {}, expected {n}", row.len()));
            }
            for (j, &c) in row.iter().enumerate() {
                for _ in 0..c {
                    edges.push((i, j));
                }
            }
        }
        let m = edges.len();
        let matrix = (0..m)
            .map(|e| (0..m).map(|f| u8::from(edges[e].1 == edges[f].0)).collect())
            .collect();
        Ok((Sft::new(matrix)?, edges))
    }

    pub fn alphabet_size(&self) -> usize {
        self.matrix.len()
    }

    pub fn matrix(&self) -> &[Vec<u8>] {
        &self.matrix
    }

    pub fn allowed(&self, a: u8, b: u8) -> bool {
        self.matrix[a as usize][b as usize] == 1
    }

    pub fn is_live(&self, a: u8) -> bool {
        self.live[a as usize]
    }

    /// Transition matrix restricted to live symbols (others zeroed).
    pub fn live_matrix(&self) -> Vec<Vec<u8>> {
        let n = self.alphabet_size();
        (0..n)
            .map(|i| (0..n).map(|j| u8::from(self.live[i] && self.live[j] && self.matrix[i][j] == 1)).collect())
            .collect()
    }

    pub fn step(&self, last: Option<u8>, a: u8) -> Option<u8> {
        if !self.live[a as usize] {
            return None;
        }
        match last {
            None => Some(a),
            Some(p) if self.allowed(p, a) => Some(a),
            Some(_) => None,
        }
    }

    /// Direct membership: every adjacent pair allowed and the word extends forever.
    pub fn accepts(&self, w: &Word) -> bool {
        let s = w.symbols();
        if s.iter().any(|&a| a as usize >= self.alphabet_size()) {
            return false;
        }
        if s.windows(2).any(|p| !self.allowed(p[0], p[1])) {
            return false;
        }
        s.last().map_or(true, |&a| self.live[a as usize])
    }
}

fn live_symbols(matrix: &[Vec<u8>]) -> Vec<bool> {
    let n = matrix.len();
    let mut live = vec![true; n];
    loop {
        let mut changed = false;
        for i in 0..n {
            if live[i] && !(0..n).any(|j| live[j] && matrix[i][j] == 1) {
                live[i] = false;
                changed = true;
            }
        }
        if !changed {
            return live;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::word::w;

    #[test]
    fn nilpotent_matrix_is_rejected() {
        let err = Sft::new(vec![vec![0, 1], vec![0, 0]]).unwrap_err();
        assert!(matches!(err, Error::Construction(_)));
    }

    #[test]
    fn dead_symbols_are_pruned() {
        // 1 only leads to itself via nothing: [[1,1],[0,0]]
        let sft = Sft::new(vec![vec![1, 1], vec![0, 0]]).unwrap();
        assert!(sft.is_live(0));
        assert!(!sft.is_live(1));
        assert!(!sft.accepts(&w("01")));
        assert!(sft.accepts(&w("000")));
    }

    #[test]
    fn golden_mean_membership() {
        let sft = Sft::new(vec![vec![1, 1], vec![1, 0]]).unwrap();
        assert!(sft.accepts(&w("10101")));
        assert!(!sft.accepts(&w("0110")));
        assert!(sft.accepts(&w("")));
    }

    #[test]
    fn edge_shift_adapter() {
        // Two loops at a single vertex: the full 2-shift.
        let (sft, edges) = Sft::from_edge_multiplicities(&[vec![2]]).unwrap();
        assert_eq!(edges.len(), 2);
        assert_eq!(sft.matrix(), &[vec![1, 1], vec![1, 1]]);
    }
}
