//! Exact linear algebra: fraction-free (Bareiss) elimination over integral
//! domains and Gauss-Jordan elimination over fields.

use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::qarith::{CycloElem, FpLaurent, LaurentInt, RatQ};

/// An integral domain with exact division, as needed by Bareiss elimination.
pub trait ExactDomain: Clone {
    fn is_zero_elem(&self) -> bool;
    fn times(&self, rhs: &Self) -> Self;
    fn minus(&self, rhs: &Self) -> Self;
    fn exact_div(&self, rhs: &Self) -> Option<Self>;
}

impl ExactDomain for LaurentInt {
    fn is_zero_elem(&self) -> bool {
        self.is_zero()
    }
    fn times(&self, rhs: &Self) -> Self {
        self * rhs
    }
    fn minus(&self, rhs: &Self) -> Self {
        self - rhs
    }
    fn exact_div(&self, rhs: &Self) -> Option<Self> {
        self.div_exact(rhs)
    }
}

impl ExactDomain for FpLaurent {
    fn is_zero_elem(&self) -> bool {
        self.is_zero()
    }
    fn times(&self, rhs: &Self) -> Self {
        self.mul(rhs)
    }
    fn minus(&self, rhs: &Self) -> Self {
        self.sub(rhs)
    }
    fn exact_div(&self, rhs: &Self) -> Option<Self> {
        self.div_exact(rhs)
    }
}

/// Determinant by Bareiss elimination; `one` is the unit of the domain and is
/// returned for the empty matrix.
pub fn bareiss_det<T: ExactDomain>(mut m: Vec<Vec<T>>, one: T) -> T {
    let n = m.len();
    let zero = one.minus(&one);
    let mut prev = one.clone();
    let mut negate = false;
    for k in 0..n {
        let Some(p) = (k..n).find(|&r| !m[r][k].is_zero_elem()) else {
            return zero;
        };
        if p != k {
            m.swap(p, k);
            negate = !negate;
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let v = m[i][j].times(&m[k][k]).minus(&m[i][k].times(&m[k][j]));
                m[i][j] = v.exact_div(&prev).expect("Bareiss division is exact");
            }
            m[i][k] = zero.clone();
        }
        prev = m[k][k].clone();
    }
    let det = if n == 0 { one } else { prev };
    if negate {
        zero.minus(&det)
    } else {
        det
    }
}

/// Rank by fraction-free elimination (rectangular input allowed).
pub fn bareiss_rank<T: ExactDomain>(mut m: Vec<Vec<T>>, one: T) -> usize {
    let rows = m.len();
    if rows == 0 {
        return 0;
    }
    let cols = m[0].len();
    let mut prev = one;
    let mut rank = 0;
    for c in 0..cols {
        let Some(p) = (rank..rows).find(|&r| !m[r][c].is_zero_elem()) else {
            continue;
        };
        m.swap(p, rank);
        for i in rank + 1..rows {
            for j in c + 1..cols {
                let v = m[i][j].times(&m[rank][c]).minus(&m[i][c].times(&m[rank][j]));
                m[i][j] = v.exact_div(&prev).expect("Bareiss division is exact");
            }
            m[i][c] = m[i][c].minus(&m[i][c]);
        }
        prev = m[rank][c].clone();
        rank += 1;
        if rank == rows {
            break;
        }
    }
    rank
}

/// A field element for Gauss-Jordan elimination.
pub trait FieldElem: Clone {
    fn is_zero_elem(&self) -> bool;
    fn plus(&self, rhs: &Self) -> Self;
    fn minus(&self, rhs: &Self) -> Self;
    fn times(&self, rhs: &Self) -> Self;
    fn inverse(&self) -> Option<Self>;
    fn zero_like(&self) -> Self {
        self.minus(self)
    }
}

impl FieldElem for BigRational {
    fn is_zero_elem(&self) -> bool {
        self.is_zero()
    }
    fn plus(&self, rhs: &Self) -> Self {
        self + rhs
    }
    fn minus(&self, rhs: &Self) -> Self {
        self - rhs
    }
    fn times(&self, rhs: &Self) -> Self {
        self * rhs
    }
    fn inverse(&self) -> Option<Self> {
        (!self.is_zero()).then(|| self.recip())
    }
    fn zero_like(&self) -> Self {
        BigRational::zero()
    }
}

impl FieldElem for RatQ {
    fn is_zero_elem(&self) -> bool {
        self.is_zero()
    }
    fn plus(&self, rhs: &Self) -> Self {
        self + rhs
    }
    fn minus(&self, rhs: &Self) -> Self {
        self - rhs
    }
    fn times(&self, rhs: &Self) -> Self {
        self * rhs
    }
    fn inverse(&self) -> Option<Self> {
        self.inv().ok()
    }
    fn zero_like(&self) -> Self {
        RatQ::zero()
    }
}

impl FieldElem for CycloElem {
    fn is_zero_elem(&self) -> bool {
        self.is_zero()
    }
    fn plus(&self, rhs: &Self) -> Self {
        self.add(rhs)
    }
    fn minus(&self, rhs: &Self) -> Self {
        self.sub(rhs)
    }
    fn times(&self, rhs: &Self) -> Self {
        self.mul(rhs)
    }
    fn inverse(&self) -> Option<Self> {
        self.inv()
    }
}

/// Reduced row echelon form in place; returns the pivot columns.
pub fn rref<T: FieldElem>(m: &mut [Vec<T>]) -> Vec<usize> {
    let rows = m.len();
    let cols = m.first().map_or(0, |r| r.len());
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..cols {
        if r == rows {
            break;
        }
        let Some(p) = (r..rows).find(|&i| !m[i][c].is_zero_elem()) else {
            continue;
        };
        m.swap(p, r);
        let inv = m[r][c].inverse().expect("nonzero pivot is invertible");
        for j in c..cols {
            m[r][j] = m[r][j].times(&inv);
        }
        for i in 0..rows {
            if i != r && !m[i][c].is_zero_elem() {
                let f = m[i][c].clone();
                for j in c..cols {
                    let v = m[i][j].minus(&f.times(&m[r][j]));
                    m[i][j] = v;
                }
            }
        }
        pivots.push(c);
        r += 1;
    }
    pivots
}

pub fn rank<T: FieldElem>(m: &[Vec<T>]) -> usize {
    let mut work = m.to_vec();
    rref(&mut work).len()
}

/// Basis of the right kernel `{v : M v = 0}`; `cols` is needed for empty `m`.
pub fn kernel<T: FieldElem>(m: &[Vec<T>], cols: usize, one: &T) -> Vec<Vec<T>> {
    let mut work = m.to_vec();
    let pivots = rref(&mut work);
    let zero = one.zero_like();
    let free: Vec<usize> = (0..cols).filter(|c| !pivots.contains(c)).collect();
    free.iter()
        .map(|&f| {
            let mut v = vec![zero.clone(); cols];
            v[f] = one.clone();
            for (row, &pc) in pivots.iter().enumerate() {
                v[pc] = zero.minus(&work[row][f]);
            }
            v
        })
        .collect()
}

/// Inverse of a square matrix, `None` when singular.
pub fn inverse<T: FieldElem>(m: &[Vec<T>], one: &T) -> Option<Vec<Vec<T>>> {
    let n = m.len();
    let zero = one.zero_like();
    let mut aug: Vec<Vec<T>> = m
        .iter()
        .enumerate()
        .map(|(i, row)| {
            let mut r = row.clone();
            r.extend((0..n).map(|j| if i == j { one.clone() } else { zero.clone() }));
            r
        })
        .collect();
    let pivots = rref(&mut aug);
    if pivots.len() < n || pivots.iter().enumerate().any(|(i, &p)| p != i) {
        return None;
    }
    Some(aug.into_iter().map(|r| r[n..].to_vec()).collect())
}

pub fn mat_vec<T: FieldElem>(m: &[Vec<T>], v: &[T], zero: &T) -> Vec<T> {
    m.iter()
        .map(|row| row.iter().zip(v).fold(zero.clone(), |acc, (a, b)| acc.plus(&a.times(b))))
        .collect()
}

pub fn rational_matrix(m: &[Vec<i64>]) -> Vec<Vec<BigRational>> {
    m.iter()
        .map(|r| r.iter().map(|&x| BigRational::from_integer(x.into())).collect())
        .collect()
}

pub fn rational_one() -> BigRational {
    BigRational::one()
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn lp(terms: &[(i64, i64)]) -> LaurentInt {
        LaurentInt::from_terms(terms.iter().copied())
    }

    fn brute_det(m: &[Vec<LaurentInt>]) -> LaurentInt {
        // Laplace expansion along the first row
        let n = m.len();
        if n == 0 {
            return LaurentInt::one();
        }
        let mut acc = LaurentInt::zero();
        for j in 0..n {
            let minor: Vec<Vec<LaurentInt>> = m[1..]
                .iter()
                .map(|r| r.iter().enumerate().filter(|(c, _)| *c != j).map(|(_, x)| x.clone()).collect())
                .collect();
            let term = &m[0][j] * &brute_det(&minor);
            acc = if j % 2 == 0 { &acc + &term } else { &acc - &term };
        }
        acc
    }

    #[test]
    fn det_with_pivoting() {
        let m = vec![
            vec![LaurentInt::zero(), lp(&[(1, 1)])],
            vec![lp(&[(0, 1), (1, 1)]), lp(&[(-1, 2)])],
        ];
        assert_eq!(bareiss_det(m.clone(), LaurentInt::one()), brute_det(&m));
        assert_eq!(bareiss_det(Vec::<Vec<LaurentInt>>::new(), LaurentInt::one()), LaurentInt::one());
    }

    #[test]
    fn kernel_of_rank_one() {
        let m = rational_matrix(&[vec![1, 2, 3], vec![2, 4, 6]]);
        assert_eq!(rank(&m), 1);
        let k = kernel(&m, 3, &rational_one());
        assert_eq!(k.len(), 2);
        for v in &k {
            assert!(mat_vec(&m, v, &BigRational::zero()).iter().all(|x| x.is_zero()));
        }
    }

    #[test]
    fn inverse_round_trip() {
        let m = rational_matrix(&[vec![2, 1], vec![7, 4]]);
        let inv = inverse(&m, &rational_one()).unwrap();
        assert_eq!(inv, rational_matrix(&[vec![4, -1], vec![-7, 2]]));
        assert!(inverse(&rational_matrix(&[vec![1, 2], vec![2, 4]]), &rational_one()).is_none());
    }

    fn arb_matrix(n: usize) -> impl Strategy<Value = Vec<Vec<LaurentInt>>> {
        let entry = prop::collection::vec((-2i64..3, -3i64..4), 0..3).prop_map(LaurentInt::from_terms);
        prop::collection::vec(prop::collection::vec(entry, n), n)
    }

    proptest! {
        #[test]
        fn bareiss_matches_laplace(m in arb_matrix(3)) {
            prop_assert_eq!(bareiss_det(m.clone(), LaurentInt::one()), brute_det(&m));
            let full = !brute_det(&m).is_zero();
            prop_assert_eq!(bareiss_rank(m.clone(), LaurentInt::one()) == 3, full);
        }
    }
}
