//! `H = ℤ^s/Mℤ^s` via Smith normal form, its characters, the linking form and
//! the spin^c set `(2ℤ^s + δ)/2Mℤ^s`.

use crate::error::{Error, Result};
use crate::plumbing::{matrix_of, PlumbingGraph, PlumbingMatrix};
use crate::{IntMatrix, Rat64, Rational};
use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::Serialize;

/// `D = U·M·V` with `U`, `V` unimodular and `D` diagonal with `d₁ | d₂ | …`.
#[derive(Clone, Debug, PartialEq)]
pub struct SmithDecomposition {
    pub u: IntMatrix,
    pub u_inv: IntMatrix,
    pub v: IntMatrix,
    pub d: IntMatrix,
}

impl SmithDecomposition {
    pub fn divisors(&self) -> Vec<BigInt> {
        (0..self.d.rows().min(self.d.cols()))
            .map(|i| self.d.get(i, i).clone())
            .collect()
    }
}

fn row_axpy(m: &mut IntMatrix, dst: usize, src: usize, k: &BigInt) {
    for j in 0..m.cols() {
        let v = m.get(dst, j) + k * m.get(src, j);
        m.set(dst, j, v);
    }
}

fn col_axpy(m: &mut IntMatrix, dst: usize, src: usize, k: &BigInt) {
    for i in 0..m.rows() {
        let v = m.get(i, dst) + k * m.get(i, src);
        m.set(i, dst, v);
    }
}

/// Smith normal form with transforms; pivots are chosen by smallest absolute
/// value, first in row-major order, so the output is deterministic.
pub fn smith(m: &IntMatrix) -> SmithDecomposition {
    let (r, c) = (m.rows(), m.cols());
    let mut a = m.clone();
    let mut u = IntMatrix::identity(r);
    let mut u_inv = IntMatrix::identity(r);
    let mut v = IntMatrix::identity(c);
    for t in 0..r.min(c) {
        loop {
            let mut best: Option<(usize, usize)> = None;
            for i in t..r {
                for j in t..c {
                    let x = a.get(i, j);
                    if !x.is_zero() && best.is_none_or(|(bi, bj)| x.abs() < a.get(bi, bj).abs()) {
                        best = Some((i, j));
                    }
                }
            }
            let Some((pi, pj)) = best else {
                return SmithDecomposition { u, u_inv, v, d: a };
            };
            a.swap_rows(t, pi);
            u.swap_rows(t, pi);
            u_inv.swap_cols(t, pi);
            a.swap_cols(t, pj);
            v.swap_cols(t, pj);
            let mut clean = true;
            for i in t + 1..r {
                let q = a.get(i, t).div_floor(a.get(t, t));
                if !q.is_zero() {
                    let nq = -q.clone();
                    row_axpy(&mut a, i, t, &nq);
                    row_axpy(&mut u, i, t, &nq);
                    col_axpy(&mut u_inv, t, i, &q);
                }
                clean &= a.get(i, t).is_zero();
            }
            for j in t + 1..c {
                let q = a.get(t, j).div_floor(a.get(t, t));
                if !q.is_zero() {
                    let nq = -q;
                    col_axpy(&mut a, j, t, &nq);
                    col_axpy(&mut v, j, t, &nq);
                }
                clean &= a.get(t, j).is_zero();
            }
            if !clean {
                continue;
            }
            let p = a.get(t, t).clone();
            let bad = (t + 1..r).find(|&i| (t + 1..c).any(|j| !a.get(i, j).is_multiple_of(&p)));
            match bad {
                Some(i) => {
                    let one = BigInt::one();
                    row_axpy(&mut a, t, i, &one);
                    row_axpy(&mut u, t, i, &one);
                    col_axpy(&mut u_inv, i, t, &-one);
                }
                None => break,
            }
        }
        if a.get(t, t).is_negative() {
            for j in 0..c {
                let x = -a.get(t, j).clone();
                a.set(t, j, x);
            }
            for j in 0..r {
                let x = -u.get(t, j).clone();
                u.set(t, j, x);
                let y = -u_inv.get(j, t).clone();
                u_inv.set(j, t, y);
            }
        }
    }
    SmithDecomposition { u, u_inv, v, d: a }
}

/// Element of H in reduced coordinates `0 <= x_i < d_i` over the nontrivial divisors.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct GroupElement(pub Vec<i64>);

/// `ℤ^s/Mℤ^s` presented through Smith normal form.
#[derive(Clone, Debug)]
pub struct FiniteAbelianGroup {
    divisors: Vec<i64>,
    /// rows of `U` for the nontrivial divisors
    transform: Vec<Vec<i64>>,
    /// columns of `U⁻¹` for the nontrivial divisors
    lift: Vec<Vec<i64>>,
    s: usize,
}

fn to_i64(x: &BigInt) -> i64 {
    x.to_i64().expect("integer exceeds 64 bits")
}

impl FiniteAbelianGroup {
    /// Requires `det M != 0`.
    pub fn from_matrix(m: &PlumbingMatrix) -> Result<Self> {
        if m.det().is_zero() {
            return Err(Error::Internal("singular plumbing matrix has infinite H".into()));
        }
        let snf = smith(m.entries());
        let s = m.s();
        let mut divisors = Vec::new();
        let mut transform = Vec::new();
        let mut lift = Vec::new();
        for (i, d) in snf.divisors().iter().enumerate() {
            if !d.is_one() {
                divisors.push(to_i64(d));
                transform.push(snf.u.row(i).iter().map(to_i64).collect());
                lift.push((0..s).map(|k| to_i64(snf.u_inv.get(k, i))).collect());
            }
        }
        Ok(FiniteAbelianGroup {
            divisors,
            transform,
            lift,
            s,
        })
    }

    pub fn divisors(&self) -> &[i64] {
        &self.divisors
    }

    pub fn order(&self) -> i64 {
        self.divisors.iter().product()
    }

    /// Exponent of the group (largest divisor).
    pub fn exponent(&self) -> i64 {
        self.divisors.last().copied().unwrap_or(1)
    }

    pub fn identity(&self) -> GroupElement {
        GroupElement(vec![0; self.divisors.len()])
    }

    pub fn class_of(&self, v: &[i64]) -> GroupElement {
        assert_eq!(v.len(), self.s, "vector length differs from s");
        GroupElement(
            self.transform
                .iter()
                .zip(&self.divisors)
                .map(|(row, &d)| {
                    let x: i128 = row.iter().zip(v).map(|(&a, &b)| a as i128 * b as i128).sum();
                    x.rem_euclid(d as i128) as i64
                })
                .collect(),
        )
    }

    /// An integer vector in the class.
    pub fn lift(&self, h: &GroupElement) -> Vec<i64> {
        let mut out = vec![0i64; self.s];
        for (col, &x) in self.lift.iter().zip(&h.0) {
            for (o, &c) in out.iter_mut().zip(col) {
                *o += c * x;
            }
        }
        out
    }

    pub fn add(&self, a: &GroupElement, b: &GroupElement) -> GroupElement {
        GroupElement(
            a.0.iter()
                .zip(&b.0)
                .zip(&self.divisors)
                .map(|((x, y), d)| (x + y).rem_euclid(*d))
                .collect(),
        )
    }

    pub fn neg(&self, a: &GroupElement) -> GroupElement {
        GroupElement(
            a.0.iter()
                .zip(&self.divisors)
                .map(|(x, d)| (-x).rem_euclid(*d))
                .collect(),
        )
    }

    pub fn mul(&self, k: i64, a: &GroupElement) -> GroupElement {
        GroupElement(
            a.0.iter()
                .zip(&self.divisors)
                .map(|(x, d)| (k * x).rem_euclid(*d))
                .collect(),
        )
    }

    pub fn is_identity(&self, a: &GroupElement) -> bool {
        a.0.iter().all(|&x| x == 0)
    }

    pub fn element_order(&self, a: &GroupElement) -> i64 {
        a.0.iter()
            .zip(&self.divisors)
            .fold(1i64, |acc, (&x, &d)| acc.lcm(&(d / x.gcd(&d))))
    }

    /// Mixed-radix position of `a` in [`Self::elements`].
    pub fn index_of(&self, a: &GroupElement) -> usize {
        let mut idx = 0usize;
        let mut radix = 1usize;
        for (&x, &d) in a.0.iter().zip(&self.divisors) {
            idx += x as usize * radix;
            radix *= d as usize;
        }
        idx
    }

    pub fn element_at(&self, mut idx: usize) -> GroupElement {
        GroupElement(
            self.divisors
                .iter()
                .map(|&d| {
                    let x = (idx % d as usize) as i64;
                    idx /= d as usize;
                    x
                })
                .collect(),
        )
    }

    /// All elements in mixed-radix order.
    pub fn elements(&self) -> Vec<GroupElement> {
        (0..self.order() as usize).map(|i| self.element_at(i)).collect()
    }

    /// All characters; the character at index `i` has exponents `k_j/d_j`
    /// where `k` is the `i`-th element tuple.
    pub fn characters(&self) -> Vec<Character> {
        self.elements()
            .into_iter()
            .map(|k| Character {
                exponents: k
                    .0
                    .iter()
                    .zip(&self.divisors)
                    .map(|(&x, &d)| Rat64::new(x, d))
                    .collect(),
            })
            .collect()
    }

    pub fn two_torsion_order(&self) -> i64 {
        self.divisors.iter().map(|d| d.gcd(&2)).product()
    }
}

/// `χ(gen_i) = exp(2πi r_i)` on the elementary-divisor generators.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Character {
    pub exponents: Vec<Rat64>,
}

fn frac(r: Rat64) -> Rat64 {
    r - r.floor()
}

impl Character {
    /// Root-of-unity exponent of `χ(h)`, reduced to `[0, 1)`.
    pub fn eval(&self, h: &GroupElement) -> Rat64 {
        frac(
            self.exponents
                .iter()
                .zip(&h.0)
                .fold(Rat64::zero(), |acc, (r, &x)| acc + r * x),
        )
    }
}

/// `lk([v],[w]) = −(v, M⁻¹w) mod 1`.
pub fn linking(m: &PlumbingMatrix, v: &[i64], w: &[i64]) -> Rat64 {
    let inv = m.inverse().expect("linking form needs invertible M");
    let mut acc = Rational::zero();
    for (i, &vi) in v.iter().enumerate() {
        if vi == 0 {
            continue;
        }
        for (j, &wj) in w.iter().enumerate() {
            if wj != 0 {
                acc += inv.get(i, j) * Rational::from_integer(BigInt::from(vi * wj));
            }
        }
    }
    let r = -acc;
    let r = &r - r.floor();
    Rat64::new(to_i64(r.numer()), to_i64(r.denom()))
}

/// Exact membership test `v ∈ Mℤ^s` by solving `Mx = v` over ℚ.
pub fn in_image(m: &PlumbingMatrix, v: &[i64]) -> bool {
    let inv = m.inverse().expect("membership test needs invertible M");
    let vr: Vec<Rational> = v.iter().map(|&x| Rational::from_integer(x.into())).collect();
    inv.mul_vec(&vr).iter().all(|x| x.is_integer())
}

/// Homological data of a plumbing: matrix, group and spin^c set.
#[derive(Clone, Debug)]
pub struct Homology {
    pub matrix: PlumbingMatrix,
    pub group: FiniteAbelianGroup,
    pub spinc: SpincSet,
}

/// Representatives `δ + 2v` of `(2ℤ^s + δ)/2Mℤ^s`, indexed like the elements of H.
#[derive(Clone, Debug, Serialize)]
pub struct SpincSet {
    pub delta: Vec<i64>,
    pub reps: Vec<Vec<i64>>,
    /// index of the class of `−b`
    pub conjugate: Vec<usize>,
    pub c1: Vec<GroupElement>,
}

impl SpincSet {
    pub fn len(&self) -> usize {
        self.reps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.reps.is_empty()
    }

    /// Index of the class containing the characteristic vector `l`.
    pub fn index_of_vector(&self, group: &FiniteAbelianGroup, l: &[i64]) -> Result<usize> {
        let mut half = Vec::with_capacity(l.len());
        for (x, d) in l.iter().zip(&self.delta) {
            if (x - d) % 2 != 0 {
                return Err(Error::UnknownSpinc(format!("{l:?} is not characteristic")));
            }
            half.push((x - d) / 2);
        }
        Ok(group.index_of(&group.class_of(&half)))
    }

    /// Index of a stored representative.
    pub fn index_of_rep(&self, b: &[i64]) -> Result<usize> {
        self.reps
            .iter()
            .position(|r| r.as_slice() == b)
            .ok_or_else(|| Error::UnknownSpinc(format!("{b:?}")))
    }

    pub fn fixed_points(&self) -> Vec<usize> {
        (0..self.len()).filter(|&i| self.conjugate[i] == i).collect()
    }
}

impl Homology {
    pub fn new(g: &PlumbingGraph) -> Result<Self> {
        let matrix = matrix_of(g);
        if !matrix.is_negative_definite() {
            return Err(Error::NotNegativeDefinite);
        }
        let group = FiniteAbelianGroup::from_matrix(&matrix)?;
        let delta = g.degrees();
        let mut reps = Vec::new();
        let mut conjugate = Vec::new();
        let mut c1 = Vec::new();
        for h in group.elements() {
            let v = group.lift(&h);
            let b: Vec<i64> = delta.iter().zip(&v).map(|(d, x)| d + 2 * x).collect();
            // −b = δ + 2(−δ − v)
            let partner: Vec<i64> = delta.iter().zip(&v).map(|(d, x)| -d - x).collect();
            conjugate.push(group.index_of(&group.class_of(&partner)));
            c1.push(group.class_of(&b));
            reps.push(b);
        }
        Ok(Homology {
            matrix,
            group,
            spinc: SpincSet {
                delta,
                reps,
                conjugate,
                c1,
            },
        })
    }

    /// `[e_v]`.
    pub fn basis_class(&self, v: usize) -> GroupElement {
        let mut e = vec![0; self.matrix.s()];
        e[v] = 1;
        self.group.class_of(&e)
    }

    /// The character `θ(h) = lk(h, −)`, expressed on the divisor generators.
    pub fn theta(&self, h: &GroupElement) -> Character {
        let v = self.group.lift(h);
        let exponents = (0..self.group.divisors().len())
            .map(|i| {
                let mut gen = GroupElement(vec![0; self.group.divisors().len()]);
                gen.0[i] = 1;
                linking(&self.matrix, &v, &self.group.lift(&gen))
            })
            .collect();
        Character { exponents }
    }
}

pub fn spinc_reps(g: &PlumbingGraph) -> Result<SpincSet> {
    Ok(Homology::new(g)?.spinc)
}
