//! Small dense linear algebra: Perron data of non-negative matrices and exact
//! integer matrix-power oracles.

use num_bigint::BigUint;
use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::scalar::Real;

/// Perron eigendata of an irreducible non-negative matrix: `M r = λ r`, `l M = λ l`,
/// `Σ r = 1`, `l · r = 1`.
#[derive(Debug, Clone, PartialEq)]
pub struct Perron<T> {
    pub lambda: T,
    pub right: Vec<T>,
    pub left: Vec<T>,
}

fn pattern_reach(adj: &[Vec<bool>], from: usize) -> Vec<bool> {
    let n = adj.len();
    let mut seen = vec![false; n];
    let mut stack = vec![from];
    while let Some(i) = stack.pop() {
        for j in 0..n {
            if adj[i][j] && !seen[j] {
                seen[j] = true;
                stack.push(j);
            }
        }
    }
    seen
}

pub fn is_irreducible<T: Real>(m: &[Vec<T>]) -> bool {
    let adj: Vec<Vec<bool>> = m.iter().map(|r| r.iter().map(|&v| v > T::zero()).collect()).collect();
    (0..m.len()).all(|i| pattern_reach(&adj, i).iter().all(|&s| s))
}

/// Primitive iff some power is entrywise positive; Wielandt bounds the exponent by
/// `(n-1)^2 + 1`.
pub fn is_primitive(a: &[Vec<u8>]) -> bool {
    let n = a.len();
    let base: Vec<Vec<bool>> = a.iter().map(|r| r.iter().map(|&v| v > 0).collect()).collect();
    let mut p = base.clone();
    for _ in 0..(n - 1) * (n - 1) + 1 {
        if p.iter().all(|r| r.iter().all(|&v| v)) {
            return true;
        }
        p = (0..n)
            .map(|i| (0..n).map(|j| (0..n).any(|k| p[i][k] && base[k][j])).collect())
            .collect();
    }
    p.iter().all(|r| r.iter().all(|&v| v))
}

fn mat_vec<T: Real>(m: &[Vec<T>], v: &[T], transpose: bool) -> Vec<T> {
    let n = m.len();
    (0..n)
        .map(|i| (0..n).map(|j| if transpose { m[j][i] * v[j] } else { m[i][j] * v[j] }).sum())
        .collect()
}

fn power_vector<T: Real>(m: &[Vec<T>], transpose: bool) -> Vec<T> {
    let n = m.len();
    let mut v = vec![T::one() / T::of_usize(n); n];
    let tol = T::epsilon() * T::of(16.0);
    for _ in 0..200_000 {
        // Iterate with I + M, which is primitive whenever M is irreducible.
        let mv = mat_vec(m, &v, transpose);
        let mut next: Vec<T> = v.iter().zip(&mv).map(|(&a, &b)| a + b).collect();
        let s: T = next.iter().copied().sum();
        next.iter_mut().for_each(|x| *x = *x / s);
        let diff = next.iter().zip(&v).map(|(&a, &b)| (a - b).abs()).fold(T::zero(), T::max);
        v = next;
        if diff <= tol {
            break;
        }
    }
    v
}

pub fn perron<T: Real>(m: &[Vec<T>]) -> Result<Perron<T>> {
    let n = m.len();
    if n == 0 || m.iter().any(|r| r.len() != n) {
        return Err(Error::Argument("matrix must be square and nonempty".into()));
    }
    if m.iter().flatten().any(|&v| v < T::zero() || !v.is_finite()) {
        return Err(Error::Argument("matrix must be finite and non-negative".into()));
    }
    if !is_irreducible(m) {
        return Err(Error::Reducible("matrix is reducible; Perron data is not unique".into()));
    }
    let right = power_vector(m, false);
    let mut left = power_vector(m, true);
    let mr = mat_vec(m, &right, false);
    let lambda = mr.iter().copied().sum::<T>() / right.iter().copied().sum::<T>();
    let dot: T = left.iter().zip(&right).map(|(&a, &b)| a * b).sum();
    left.iter_mut().for_each(|x| *x = *x / dot);
    Ok(Perron { lambda, right, left })
}

/// Convert a 0/1 matrix into a real matrix.
pub fn to_real<T: Real>(a: &[Vec<u8>]) -> Vec<Vec<T>> {
    a.iter().map(|r| r.iter().map(|&v| T::of(v as f64)).collect()).collect()
}

fn big_matrix(a: &[Vec<u8>]) -> Vec<Vec<BigUint>> {
    a.iter().map(|r| r.iter().map(|&v| BigUint::from(v)).collect()).collect()
}

fn big_mul(x: &[Vec<BigUint>], y: &[Vec<BigUint>]) -> Vec<Vec<BigUint>> {
    let n = x.len();
    (0..n)
        .map(|i| {
            (0..n)
                .map(|j| (0..n).fold(BigUint::zero(), |acc, k| acc + &x[i][k] * &y[k][j]))
                .collect()
        })
        .collect()
}

/// `#L_n = Σ_{ij} (A^{n-1})_{ij}` for `n = 0..=n_max` (with `#L_0 = 1`), exact.
/// `a` must already have dead symbols removed.
pub fn sft_word_counts(a: &[Vec<u8>], n_max: usize) -> Vec<BigUint> {
    let n = a.len();
    let base = big_matrix(a);
    let mut out = vec![BigUint::one()];
    let mut p: Vec<Vec<BigUint>> =
        (0..n).map(|i| (0..n).map(|j| if i == j { BigUint::one() } else { BigUint::zero() }).collect()).collect();
    for len in 1..=n_max {
        if len > 1 {
            p = big_mul(&p, &base);
        }
        let live_rows = |i: usize| a[i].iter().any(|&v| v > 0);
        let total = (0..n)
            .filter(|&i| live_rows(i))
            .flat_map(|i| (0..n).filter(|&j| live_rows(j)).map(move |j| (i, j)))
            .fold(BigUint::zero(), |acc, (i, j)| acc + &p[i][j]);
        out.push(total);
    }
    out
}

/// `trace(A^n)` for `n = 1..=n_max`, exact.
pub fn trace_powers(a: &[Vec<u8>], n_max: usize) -> Vec<BigUint> {
    let base = big_matrix(a);
    let mut p = base.clone();
    let mut out = Vec::with_capacity(n_max);
    for n in 1..=n_max {
        if n > 1 {
            p = big_mul(&p, &base);
        }
        out.push((0..a.len()).fold(BigUint::zero(), |acc, i| acc + &p[i][i]));
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn golden_perron() {
        let p = perron(&to_real::<f64>(&[vec![1, 1], vec![1, 0]])).unwrap();
        let phi = (1.0 + 5f64.sqrt()) / 2.0;
        assert_relative_eq!(p.lambda, phi, epsilon = 1e-12);
        assert_relative_eq!(p.right[0] / p.right[1], phi, epsilon = 1e-10);
    }

    #[test]
    fn permutation_matrix_converges() {
        let p = perron(&to_real::<f64>(&[vec![0, 1], vec![1, 0]])).unwrap();
        assert_relative_eq!(p.lambda, 1.0, epsilon = 1e-12);
        assert_relative_eq!(p.right[0], 0.5, epsilon = 1e-12);
    }

    #[test]
    fn reducible_is_rejected() {
        let err = perron(&to_real::<f64>(&[vec![1, 1], vec![0, 1]])).unwrap_err();
        assert!(matches!(err, Error::Reducible(_)));
    }

    #[test]
    fn integer_oracles() {
        let g = [vec![1, 1], vec![1, 0]];
        let counts: Vec<u64> = sft_word_counts(&g, 6).iter().map(|c| c.try_into().unwrap()).collect();
        assert_eq!(counts, vec![1, 2, 3, 5, 8, 13, 21]);
        let traces: Vec<u64> = trace_powers(&g, 4).iter().map(|c| c.try_into().unwrap()).collect();
        assert_eq!(traces, vec![1, 3, 4, 7]);
    }

    #[test]
    fn primitivity() {
        assert!(is_primitive(&[vec![1, 1], vec![1, 0]]));
        assert!(!is_primitive(&[vec![0, 1], vec![1, 0]]));
    }

    #[test]
    fn single_precision_perron() {
        let p = perron(&to_real::<f32>(&[vec![1, 2], vec![1, 0]])).unwrap();
        assert!((p.lambda - 2.0).abs() < 1e-5);
    }
}
