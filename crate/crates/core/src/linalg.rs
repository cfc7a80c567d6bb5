//! Dense exact matrices: fraction-free determinants, rational inverses and
//! LDLᵀ factorisations.

use crate::Rational;
use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};
use std::fmt::Debug;

/// Row-major dense matrix.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Matrix<T> {
    rows: usize,
    cols: usize,
    data: Vec<T>,
}

impl<T: Clone> Matrix<T> {
    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> T) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                data.push(f(i, j));
            }
        }
        Matrix { rows, cols, data }
    }

    /// Panics if the rows are ragged.
    pub fn from_rows(rows: Vec<Vec<T>>) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, |row| row.len());
        assert!(rows.iter().all(|row| row.len() == c), "ragged rows");
        Matrix {
            rows: r,
            cols: c,
            data: rows.into_iter().flatten().collect(),
        }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> &T {
        &self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: T) {
        self.data[i * self.cols + j] = v;
    }

    pub fn row(&self, i: usize) -> &[T] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn to_rows(&self) -> Vec<Vec<T>> {
        (0..self.rows).map(|i| self.row(i).to_vec()).collect()
    }

    pub fn transpose(&self) -> Self {
        Matrix::from_fn(self.cols, self.rows, |i, j| self.get(j, i).clone())
    }

    pub fn swap_rows(&mut self, a: usize, b: usize) {
        if a != b {
            for j in 0..self.cols {
                self.data.swap(a * self.cols + j, b * self.cols + j);
            }
        }
    }

    pub fn swap_cols(&mut self, a: usize, b: usize) {
        if a != b {
            for i in 0..self.rows {
                self.data.swap(i * self.cols + a, i * self.cols + b);
            }
        }
    }

    pub fn map<U: Clone>(&self, f: impl Fn(&T) -> U) -> Matrix<U> {
        Matrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(f).collect(),
        }
    }

    /// Principal submatrix on the given index set.
    pub fn principal(&self, idx: &[usize]) -> Self {
        Matrix::from_fn(idx.len(), idx.len(), |i, j| self.get(idx[i], idx[j]).clone())
    }

    pub fn submatrix(&self, rows: &[usize], cols: &[usize]) -> Self {
        Matrix::from_fn(rows.len(), cols.len(), |i, j| self.get(rows[i], cols[j]).clone())
    }
}

impl<T> Matrix<T>
where
    T: Clone + Zero + One,
{
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Matrix::from_fn(rows, cols, |_, _| T::zero())
    }

    pub fn identity(n: usize) -> Self {
        Matrix::from_fn(n, n, |i, j| if i == j { T::one() } else { T::zero() })
    }
}

impl<T> Matrix<T>
where
    T: Clone + Zero + std::ops::Mul<Output = T> + std::ops::Add<Output = T>,
{
    pub fn mul(&self, other: &Self) -> Self {
        assert_eq!(self.cols, other.rows, "dimension mismatch");
        Matrix::from_fn(self.rows, other.cols, |i, j| {
            let mut acc = T::zero();
            for k in 0..self.cols {
                acc = acc + self.get(i, k).clone() * other.get(k, j).clone();
            }
            acc
        })
    }

    pub fn mul_vec(&self, v: &[T]) -> Vec<T> {
        assert_eq!(self.cols, v.len(), "dimension mismatch");
        (0..self.rows)
            .map(|i| {
                let mut acc = T::zero();
                for (k, x) in v.iter().enumerate() {
                    acc = acc + self.get(i, k).clone() * x.clone();
                }
                acc
            })
            .collect()
    }
}

impl<T: Clone + PartialEq> Matrix<T> {
    pub fn is_symmetric(&self) -> bool {
        self.is_square() && (0..self.rows).all(|i| (0..i).all(|j| self.get(i, j) == self.get(j, i)))
    }
}

impl<T> Matrix<T>
where
    T: Clone + Integer + Signed,
{
    /// Determinant by Bareiss fraction-free elimination; det of the empty matrix is 1.
    pub fn det_bareiss(&self) -> T {
        assert!(self.is_square(), "determinant of a non-square matrix");
        let n = self.rows;
        let mut a = self.clone();
        let mut sign = T::one();
        let mut prev = T::one();
        for k in 0..n {
            if a.get(k, k).is_zero() {
                match (k + 1..n).find(|&i| !a.get(i, k).is_zero()) {
                    Some(i) => {
                        a.swap_rows(i, k);
                        sign = -sign;
                    }
                    None => return T::zero(),
                }
            }
            let pivot = a.get(k, k).clone();
            for i in k + 1..n {
                for j in k + 1..n {
                    let v = (pivot.clone() * a.get(i, j).clone() - a.get(i, k).clone() * a.get(k, j).clone())
                        / prev.clone();
                    a.set(i, j, v);
                }
                a.set(i, k, T::zero());
            }
            prev = pivot;
        }
        if n == 0 {
            T::one()
        } else {
            sign * a.get(n - 1, n - 1).clone()
        }
    }
}

impl Matrix<BigInt> {
    pub fn to_rational(&self) -> Matrix<Rational> {
        self.map(|x| Rational::from_integer(x.clone()))
    }

    pub fn from_i64_rows(rows: &[Vec<i64>]) -> Self {
        Matrix::from_rows(
            rows.iter()
                .map(|r| r.iter().map(|&x| BigInt::from(x)).collect())
                .collect(),
        )
    }

    /// Entries as machine integers; `None` on overflow.
    pub fn to_i64(&self) -> Option<Matrix<i64>> {
        use num_traits::ToPrimitive;
        let data: Option<Vec<i64>> = self.data.iter().map(|x| x.to_i64()).collect();
        data.map(|data| Matrix {
            rows: self.rows,
            cols: self.cols,
            data,
        })
    }

    /// Adjugate via cofactors; valid for singular matrices too.
    pub fn adjugate_cofactor(&self) -> Matrix<BigInt> {
        let n = self.rows;
        Matrix::from_fn(n, n, |i, j| {
            // adj_{ij} = (-1)^{i+j} det(minor with row j and column i removed)
            let rows: Vec<usize> = (0..n).filter(|&r| r != j).collect();
            let cols: Vec<usize> = (0..n).filter(|&c| c != i).collect();
            let d = self.submatrix(&rows, &cols).det_bareiss();
            if (i + j) % 2 == 0 {
                d
            } else {
                -d
            }
        })
    }
}

impl Matrix<Rational> {
    /// Exact inverse by Gauss–Jordan; `None` when singular.
    pub fn inverse(&self) -> Option<Matrix<Rational>> {
        assert!(self.is_square());
        let n = self.rows;
        let mut a = self.clone();
        let mut inv = Matrix::<Rational>::identity(n);
        for k in 0..n {
            let p = (k..n).find(|&i| !a.get(i, k).is_zero())?;
            a.swap_rows(p, k);
            inv.swap_rows(p, k);
            let pivot = a.get(k, k).clone();
            for j in 0..n {
                let v = a.get(k, j) / &pivot;
                a.set(k, j, v);
                let w = inv.get(k, j) / &pivot;
                inv.set(k, j, w);
            }
            for i in 0..n {
                if i != k && !a.get(i, k).is_zero() {
                    let f = a.get(i, k).clone();
                    for j in 0..n {
                        let v = a.get(i, j) - &f * a.get(k, j);
                        a.set(i, j, v);
                        let w = inv.get(i, j) - &f * inv.get(k, j);
                        inv.set(i, j, w);
                    }
                }
            }
        }
        Some(inv)
    }

    /// LDLᵀ of a symmetric matrix: unit lower-triangular `L` and pivots `D`.
    /// Returns `None` if a zero pivot is met.
    pub fn ldl(&self) -> Option<(Matrix<Rational>, Vec<Rational>)> {
        assert!(self.is_symmetric());
        let n = self.rows;
        let mut l = Matrix::<Rational>::identity(n);
        let mut d: Vec<Rational> = Vec::with_capacity(n);
        for j in 0..n {
            let mut dj = self.get(j, j).clone();
            for k in 0..j {
                dj -= l.get(j, k) * l.get(j, k) * &d[k];
            }
            if dj.is_zero() {
                return None;
            }
            for i in j + 1..n {
                let mut v = self.get(i, j).clone();
                for k in 0..j {
                    v -= l.get(i, k) * l.get(j, k) * &d[k];
                }
                l.set(i, j, v / &dj);
            }
            d.push(dj);
        }
        Some((l, d))
    }

    /// True iff every LDLᵀ pivot is positive.
    pub fn is_positive_definite(&self) -> bool {
        match self.ldl() {
            Some((_, d)) => d.iter().all(|x| x.is_positive()),
            None => false,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn int(rows: &[Vec<i64>]) -> Matrix<BigInt> {
        Matrix::from_i64_rows(rows)
    }

    #[test]
    fn bareiss_small() {
        assert_eq!(int(&[]).det_bareiss(), BigInt::from(1));
        assert_eq!(int(&[vec![-1]]).det_bareiss(), BigInt::from(-1));
        let m = int(&[vec![0, 1], vec![1, 0]]);
        assert_eq!(m.det_bareiss(), BigInt::from(-1));
        let m = int(&[vec![2, 1, 0], vec![1, 2, 1], vec![0, 1, 2]]);
        assert_eq!(m.det_bareiss(), BigInt::from(4));
    }

    #[test]
    fn inverse_and_adjugate_agree() {
        let m = int(&[
            vec![-7, 0, 0, 1],
            vec![0, -3, 0, 1],
            vec![0, 0, -2, 1],
            vec![1, 1, 1, -1],
        ]);
        let det = m.det_bareiss();
        let inv = m.to_rational().inverse().unwrap();
        let adj = m.adjugate_cofactor();
        let scaled = inv.map(|x| x * Rational::from_integer(det.clone()));
        assert_eq!(scaled, adj.to_rational());
    }

    #[test]
    fn ldl_reconstructs() {
        let m = int(&[vec![4, 2, 2], vec![2, 5, 3], vec![2, 3, 6]]).to_rational();
        let (l, d) = m.ldl().unwrap();
        let dm = Matrix::from_fn(3, 3, |i, j| if i == j { d[i].clone() } else { Rational::zero() });
        assert_eq!(l.mul(&dm).mul(&l.transpose()), m);
        assert!(m.is_positive_definite());
    }
}
