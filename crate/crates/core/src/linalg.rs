//! Small exact matrix routines: determinants over `Q(ζ_N)`, Kronecker products,
//! and the inertia of symmetric integer matrices.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Signed, Zero};

use crate::cyclo::CycloElt;

pub type Matrix = Vec<Vec<CycloElt>>;

/// Determinant by Gaussian elimination in the field. An empty matrix has
/// determinant 1 at `level`.
pub fn det(m: &Matrix, level: u64) -> CycloElt {
    let n = m.len();
    let mut a: Matrix = m.to_vec();
    let mut acc = CycloElt::one(level);
    for k in 0..n {
        let Some(p) = (k..n).find(|&i| !a[i][k].is_zero()) else {
            return CycloElt::zero(level);
        };
        if p != k {
            a.swap(p, k);
            acc = -acc;
        }
        let pivot = a[k][k].clone();
        acc = &acc * &pivot;
        let inv = pivot.inv().expect("nonzero pivot");
        for i in k + 1..n {
            if a[i][k].is_zero() {
                continue;
            }
            let f = &a[i][k] * &inv;
            for j in k + 1..n {
                let t = &f * &a[k][j];
                a[i][j] = &a[i][j] - &t;
            }
            a[i][k] = CycloElt::zero(level);
        }
    }
    acc
}

pub fn mat_mul(a: &Matrix, b: &Matrix, level: u64) -> Matrix {
    let cols = b.first().map_or(0, |r| r.len());
    a.iter()
        .map(|row| {
            (0..cols)
                .map(|j| {
                    row.iter()
                        .zip(b.iter())
                        .fold(CycloElt::zero(level), |s, (x, brow)| &s + &(x * &brow[j]))
                })
                .collect()
        })
        .collect()
}

pub fn conj_transpose(a: &Matrix) -> Matrix {
    let rows = a.len();
    let cols = a.first().map_or(0, |r| r.len());
    (0..cols)
        .map(|j| (0..rows).map(|i| a[i][j].conj()).collect())
        .collect()
}

pub fn is_hermitian(a: &Matrix) -> bool {
    a.iter()
        .enumerate()
        .all(|(i, row)| row.iter().enumerate().all(|(j, x)| *x == a[j][i].conj()))
}

pub fn kron(a: &Matrix, b: &Matrix) -> Matrix {
    let (ar, ac) = (a.len(), a.first().map_or(0, |r| r.len()));
    let (br, bc) = (b.len(), b.first().map_or(0, |r| r.len()));
    let mut out = Vec::with_capacity(ar * br);
    for i in 0..ar * br {
        let mut row = Vec::with_capacity(ac * bc);
        for j in 0..ac * bc {
            row.push(&a[i / br][j / bc] * &b[i % br][j % bc]);
        }
        out.push(row);
    }
    out
}

/// `(positive, negative, zero)` counts of the inertia of a symmetric integer matrix,
/// by exact congruence diagonalisation over `Q`.
pub fn inertia(m: &[Vec<i64>]) -> (usize, usize, usize) {
    let n = m.len();
    let mut a: Vec<Vec<BigRational>> = m
        .iter()
        .map(|r| {
            r.iter()
                .map(|&x| BigRational::from_integer(BigInt::from(x)))
                .collect()
        })
        .collect();
    let (mut pos, mut neg) = (0, 0);
    for k in 0..n {
        if a[k][k].is_zero() {
            if let Some(i) = (k + 1..n).find(|&i| !a[i][i].is_zero()) {
                swap_sym(&mut a, i, k);
            } else if let Some((i, j)) = (k..n)
                .flat_map(|i| (k..n).map(move |j| (i, j)))
                .find(|&(i, j)| i != j && !a[i][j].is_zero())
            {
                // diagonal block is zero: row/col i += row/col j gives 2 a_ij on the diagonal
                for c in 0..n {
                    let t = a[j][c].clone();
                    a[i][c] += t;
                }
                for r in 0..n {
                    let t = a[r][j].clone();
                    a[r][i] += t;
                }
                swap_sym(&mut a, i, k);
            } else {
                break;
            }
        }
        let piv = a[k][k].clone();
        if piv.is_positive() {
            pos += 1;
        } else {
            neg += 1;
        }
        for i in k + 1..n {
            if a[i][k].is_zero() {
                continue;
            }
            let f = &a[i][k] / &piv;
            for c in k..n {
                let t = &f * &a[k][c];
                a[i][c] -= t;
            }
            for r in k..n {
                let t = &f * &a[r][k];
                a[r][i] -= t;
            }
        }
    }
    (pos, neg, n - pos - neg)
}

fn swap_sym(a: &mut [Vec<BigRational>], i: usize, k: usize) {
    a.swap(i, k);
    for row in a.iter_mut() {
        row.swap(i, k);
    }
}

/// Signature `n₊ − n₋` of a symmetric integer matrix.
pub fn signature(m: &[Vec<i64>]) -> i64 {
    let (p, q, _) = inertia(m);
    p as i64 - q as i64
}

pub fn nullity(m: &[Vec<i64>]) -> usize {
    inertia(m).2
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn inertia_examples() {
        assert_eq!(inertia(&[]), (0, 0, 0));
        assert_eq!(inertia(&[vec![0]]), (0, 0, 1));
        assert_eq!(inertia(&[vec![-3]]), (0, 1, 0));
        assert_eq!(inertia(&[vec![0, 1], vec![1, 0]]), (1, 1, 0));
        assert_eq!(inertia(&[vec![0, 2], vec![2, 3]]), (1, 1, 0));
        assert_eq!(inertia(&[vec![2, 1], vec![1, 2]]), (2, 0, 0));
        assert_eq!(inertia(&[vec![1, 1], vec![1, 1]]), (1, 0, 1));
        // E8-like positive chain
        let a2 = vec![vec![2, -1, 0], vec![-1, 2, -1], vec![0, -1, 2]];
        assert_eq!(signature(&a2), 3);
        let z = vec![vec![0, 0, 1], vec![0, 0, 0], vec![1, 0, 0]];
        assert_eq!(inertia(&z), (1, 1, 1));
    }

    #[test]
    fn determinants() {
        let one = CycloElt::one(8);
        let i = CycloElt::root(8, 2);
        let m = vec![vec![one.clone(), i.clone()], vec![i.clone(), one.clone()]];
        assert_eq!(det(&m, 8), CycloElt::from_int(8, 2));
        assert!(det(&vec![], 8).is_one());
        let sing = vec![vec![one.clone(), i.clone()], vec![i.clone(), -&one]];
        assert!(det(&sing, 8).is_zero());
        let swapped = vec![
            vec![CycloElt::zero(8), one.clone()],
            vec![one.clone(), CycloElt::zero(8)],
        ];
        assert_eq!(det(&swapped, 8), CycloElt::from_int(8, -1));
    }

    #[test]
    fn kron_shape_and_det() {
        let a = vec![
            vec![CycloElt::from_int(8, 2), CycloElt::root(8, 1)],
            vec![CycloElt::zero(8), CycloElt::from_int(8, 3)],
        ];
        let k = kron(&a, &a);
        assert_eq!(k.len(), 4);
        // det(A ⊗ A) = det(A)^4 for 2x2 A
        assert_eq!(det(&k, 8), det(&a, 8).pow(4));
    }
}
