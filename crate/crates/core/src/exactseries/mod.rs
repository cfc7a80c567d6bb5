//! Truncated q-series with rational exponents and exact coefficients.
//!
//! A [`Series`] stores exponents as integer numerators over a common
//! denominator `denom` together with a truncation order `O`.
//!
//! Invariants:
//! - every stored exponent `n/denom` satisfies `n/denom <= O`;
//! - no stored coefficient is zero;
//! - `denom` is the least common denominator of the stored exponents
//!   (`1` when there are none).
//!
//! Terms with exponent `> O` are unknown rather than zero, so comparisons are
//! made through the smaller of two orders ([`Series::agrees_with`]).

mod format;
mod laurent;
mod symexp;

pub use format::{parse_series_json, SeriesRecord};
pub use laurent::{laplace, Laurent};
pub use symexp::{factor_coefficient, factor_terms, sym_coefficient, sym_expand, SymPower, SymTermStream};

use crate::ring::Ring;
use crate::{Rat64, Rational};
use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};
use std::collections::BTreeMap;

#[derive(Clone, Debug, PartialEq)]
pub struct Series<C> {
    denom: i64,
    terms: BTreeMap<i64, C>,
    order: Rat64,
}

fn floor_scaled(order: Rat64, denom: i64) -> i64 {
    // floor(order * denom)
    let num = *order.numer() as i128 * denom as i128;
    let den = *order.denom() as i128;
    i64::try_from(Integer::div_floor(&num, &den)).expect("exponent overflow")
}

impl<C: Ring> Series<C> {
    pub fn zero(order: Rat64) -> Self {
        Series {
            denom: 1,
            terms: BTreeMap::new(),
            order,
        }
    }

    pub fn one(order: Rat64) -> Self {
        Self::monomial(C::one(), Rat64::zero(), order)
    }

    pub fn monomial(coeff: C, exponent: Rat64, order: Rat64) -> Self {
        Self::from_terms([(exponent, coeff)], order)
    }

    /// Builds a series from (exponent, coefficient) pairs; repeated exponents
    /// are summed and terms beyond `order` dropped.
    pub fn from_terms<I>(terms: I, order: Rat64) -> Self
    where
        I: IntoIterator<Item = (Rat64, C)>,
    {
        let terms: Vec<(Rat64, C)> = terms.into_iter().collect();
        let denom = terms.iter().fold(1i64, |acc, (e, _)| acc.lcm(e.denom()));
        let mut map: BTreeMap<i64, C> = BTreeMap::new();
        for (e, c) in terms {
            let n = e.numer() * (denom / e.denom());
            match map.get_mut(&n) {
                Some(slot) => *slot = slot.clone() + c,
                None => {
                    map.insert(n, c);
                }
            }
        }
        Self::from_raw(denom, map, order)
    }

    /// Normalising constructor from numerators over `denom`.
    pub fn from_raw(denom: i64, mut terms: BTreeMap<i64, C>, order: Rat64) -> Self {
        assert!(denom > 0, "denominator must be positive");
        let cap = floor_scaled(order, denom);
        terms.retain(|&n, c| n <= cap && !c.is_zero());
        let g = terms.keys().fold(denom, |g, &n| g.gcd(&n));
        let terms = if g > 1 {
            terms.into_iter().map(|(n, c)| (n / g, c)).collect()
        } else {
            terms
        };
        let denom = if terms.is_empty() { 1 } else { denom / g };
        Series { denom, terms, order }
    }

    pub fn denom(&self) -> i64 {
        self.denom
    }

    pub fn order(&self) -> Rat64 {
        self.order
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    /// True when no term is stored through the truncation order.
    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn raw_terms(&self) -> &BTreeMap<i64, C> {
        &self.terms
    }

    pub fn terms(&self) -> impl Iterator<Item = (Rat64, &C)> + '_ {
        let d = self.denom;
        self.terms.iter().map(move |(&n, c)| (Rat64::new(n, d), c))
    }

    /// Coefficient at `exponent`; `None` when it lies beyond the order.
    pub fn coeff(&self, exponent: Rat64) -> Option<C> {
        if exponent > self.order {
            return None;
        }
        let scaled = exponent * Rat64::from_integer(self.denom);
        if !scaled.is_integer() {
            return Some(C::zero());
        }
        Some(self.terms.get(&scaled.to_integer()).cloned().unwrap_or_else(C::zero))
    }

    pub fn leading(&self) -> Option<(Rat64, &C)> {
        self.terms.iter().next().map(|(&n, c)| (Rat64::new(n, self.denom), c))
    }

    /// Smallest stored exponent, or the order for an empty series.
    pub fn valuation(&self) -> Rat64 {
        self.leading().map_or(self.order, |(e, _)| e)
    }

    fn rescaled(&self, denom: i64) -> impl Iterator<Item = (i64, &C)> + '_ {
        let f = denom / self.denom;
        self.terms.iter().map(move |(&n, c)| (n * f, c))
    }

    pub fn add(&self, other: &Self) -> Self {
        let denom = self.denom.lcm(&other.denom);
        let order = self.order.min(other.order);
        let mut map: BTreeMap<i64, C> = self.rescaled(denom).map(|(n, c)| (n, c.clone())).collect();
        for (n, c) in other.rescaled(denom) {
            match map.get_mut(&n) {
                Some(slot) => *slot = slot.clone() + c.clone(),
                None => {
                    map.insert(n, c.clone());
                }
            }
        }
        Self::from_raw(denom, map, order)
    }

    pub fn neg(&self) -> Self {
        Series {
            denom: self.denom,
            terms: self.terms.iter().map(|(&n, c)| (n, -c.clone())).collect(),
            order: self.order,
        }
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    pub fn scale(&self, k: &C) -> Self {
        let terms = self.terms.iter().map(|(&n, c)| (n, c.clone() * k.clone())).collect();
        Self::from_raw(self.denom, terms, self.order)
    }

    /// Cauchy product, known through `min(O_a + v_b, O_b + v_a)` where `v` is
    /// the valuation.
    pub fn mul(&self, other: &Self) -> Self {
        let order = (self.order + other.valuation()).min(other.order + self.valuation());
        let denom = self.denom.lcm(&other.denom);
        let cap = floor_scaled(order, denom);
        let b: Vec<(i64, &C)> = other.rescaled(denom).collect();
        let mut map: BTreeMap<i64, C> = BTreeMap::new();
        for (na, ca) in self.rescaled(denom) {
            for &(nb, cb) in &b {
                let n = na + nb;
                if n > cap {
                    break;
                }
                let v = ca.clone() * cb.clone();
                match map.get_mut(&n) {
                    Some(slot) => *slot = slot.clone() + v,
                    None => {
                        map.insert(n, v);
                    }
                }
            }
        }
        Self::from_raw(denom, map, order)
    }

    /// Multiplies by `q^delta`.
    pub fn shift(&self, delta: Rat64) -> Self {
        let denom = self.denom.lcm(delta.denom());
        let add = delta.numer() * (denom / delta.denom());
        let terms = self.rescaled(denom).map(|(n, c)| (n + add, c.clone())).collect();
        Self::from_raw(denom, terms, self.order + delta)
    }

    /// Substitutes `q ↦ q^k` for positive rational `k`.
    pub fn scale_exponents(&self, k: Rat64) -> Self {
        assert!(k > Rat64::zero(), "scale factor must be positive");
        let terms = self.terms.iter().map(|(&n, c)| (n * k.numer(), c.clone())).collect();
        Self::from_raw(self.denom * k.denom(), terms, self.order * k)
    }

    /// Lowers the order to `min(order, self.order)`.
    pub fn truncate(&self, order: Rat64) -> Self {
        Self::from_raw(self.denom, self.terms.clone(), order.min(self.order))
    }

    /// Equality of the known parts through the smaller order.
    pub fn agrees_with(&self, other: &Self) -> bool {
        let o = self.order.min(other.order);
        let a = self.truncate(o);
        let b = other.truncate(o);
        a.denom == b.denom && a.terms == b.terms
    }

    /// True when every known coefficient vanishes.
    pub fn is_zero_through_order(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn map_coeffs<D: Ring>(&self, f: impl Fn(&C) -> D) -> Series<D> {
        let terms = self.terms.iter().map(|(&n, c)| (n, f(c))).collect();
        Series::from_raw(self.denom, terms, self.order)
    }

    pub fn try_map_coeffs<D: Ring, E>(
        &self,
        f: impl Fn(&C) -> std::result::Result<D, E>,
    ) -> std::result::Result<Series<D>, E> {
        let mut terms = BTreeMap::new();
        for (&n, c) in &self.terms {
            terms.insert(n, f(c)?);
        }
        Ok(Series::from_raw(self.denom, terms, self.order))
    }

    /// The common class of all exponents mod 1, if there is one; the
    /// representative returned is the leading exponent.
    pub fn exponent_class(&self) -> Option<Rat64> {
        let (lead, _) = self.leading()?;
        self.terms().all(|(e, _)| (e - lead).is_integer()).then_some(lead)
    }
}

impl<C: Ring> std::ops::Add for &Series<C> {
    type Output = Series<C>;
    fn add(self, rhs: Self) -> Series<C> {
        Series::add(self, rhs)
    }
}

impl<C: Ring> std::ops::Sub for &Series<C> {
    type Output = Series<C>;
    fn sub(self, rhs: Self) -> Series<C> {
        Series::sub(self, rhs)
    }
}

impl<C: Ring> std::ops::Mul for &Series<C> {
    type Output = Series<C>;
    fn mul(self, rhs: Self) -> Series<C> {
        Series::mul(self, rhs)
    }
}

impl<C: Ring> std::ops::Neg for &Series<C> {
    type Output = Series<C>;
    fn neg(self) -> Series<C> {
        Series::neg(self)
    }
}

/// Sum of a family of series; the order is the minimum of the orders.
pub fn sum_series<'a, C: Ring + 'a>(items: impl IntoIterator<Item = &'a Series<C>>, order: Rat64) -> Series<C> {
    items.into_iter().fold(Series::zero(order), |acc, s| acc.add(s))
}

/// `1/(q)_∞` through `order`: the partition generating function.
pub fn euler_inverse(order: Rat64) -> Series<Rational> {
    assert!(order >= Rat64::zero(), "order must be nonnegative");
    let n = order.floor().to_integer() as usize;
    let mut p: Vec<BigInt> = vec![BigInt::zero(); n + 1];
    p[0] = BigInt::one();
    for m in 1..=n {
        let mut acc = BigInt::zero();
        for k in 1.. {
            let g1 = k * (3 * k - 1) / 2;
            if g1 > m {
                break;
            }
            let sign_pos = k % 2 == 1;
            let mut t = p[m - g1].clone();
            let g2 = k * (3 * k + 1) / 2;
            if g2 <= m {
                t += &p[m - g2];
            }
            if sign_pos {
                acc += t;
            } else {
                acc -= t;
            }
        }
        p[m] = acc;
    }
    let terms = p
        .into_iter()
        .enumerate()
        .map(|(i, c)| (i as i64, Rational::from_integer(c)))
        .collect();
    Series::from_raw(1, terms, order)
}

/// `(q)_∞ = ∏(1 - q^n)` through `order`.
pub fn euler_product(order: Rat64) -> Series<Rational> {
    let n = order.floor().to_integer().max(0) as usize;
    let mut c: Vec<BigInt> = vec![BigInt::zero(); n + 1];
    c[0] = BigInt::one();
    for k in 1..=n {
        for m in (k..=n).rev() {
            let t = c[m - k].clone();
            c[m] -= t;
        }
    }
    let terms = c
        .into_iter()
        .enumerate()
        .map(|(i, x)| (i as i64, Rational::from_integer(x)))
        .collect();
    Series::from_raw(1, terms, order)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn r(n: i64) -> Rational {
        Rational::from_integer(n.into())
    }

    fn q(p: i64, d: i64) -> Rat64 {
        Rat64::new(p, d)
    }

    fn series(terms: &[(i64, i64, i64)], order: Rat64) -> Series<Rational> {
        Series::from_terms(terms.iter().map(|&(p, d, c)| (q(p, d), r(c))), order)
    }

    #[test]
    fn add_cancels() {
        let o = q(10, 1);
        let a = series(&[(-1, 1, 1), (0, 1, -1)], o);
        let b = series(&[(0, 1, 1), (1, 1, 1)], o);
        assert_eq!(a.add(&b), series(&[(-1, 1, 1), (1, 1, 1)], o));
        assert_eq!(a.add(&Series::zero(o)), a);
    }

    #[test]
    fn scale_exponents_maps_monomials() {
        let a = series(&[(-1, 1, 1), (0, 1, -1), (1, 1, 1)], q(5, 1));
        let b = a.scale_exponents(q(3, 1));
        assert_eq!(b, series(&[(-3, 1, 1), (0, 1, -1), (3, 1, 1)], q(15, 1)));
        assert_eq!(b.scale_exponents(q(1, 3)), a);
    }

    #[test]
    fn mul_and_shift() {
        let o = q(10, 1);
        let a = series(&[(0, 1, 1), (1, 1, -1)], o);
        let b = series(&[(0, 1, 1), (1, 1, 1)], o);
        assert_eq!(a.mul(&b), series(&[(0, 1, 1), (2, 1, -1)], o));
        let c = series(&[(0, 1, 1), (1, 1, -2)], o).shift(q(1, 8));
        assert_eq!(c, series(&[(1, 8, 1), (9, 8, -2)], q(81, 8)));
        assert_eq!(c.denom(), 8);
    }

    #[test]
    fn mul_order_tracks_valuation() {
        let a = series(&[(-1, 1, 1)], q(5, 1));
        let b = series(&[(0, 1, 1)], q(5, 1));
        assert_eq!(a.mul(&b).order(), q(4, 1));
        let c = series(&[(0, 1, 1)], q(7, 1));
        assert_eq!(a.mul(&c).order(), q(5, 1));
    }

    #[test]
    fn euler_inverse_small() {
        let p = euler_inverse(q(5, 1));
        let expect = [1, 1, 2, 3, 5, 7];
        for (i, &e) in expect.iter().enumerate() {
            assert_eq!(p.coeff(q(i as i64, 1)), Some(r(e)));
        }
        assert_eq!(euler_inverse(q(0, 1)), Series::one(q(0, 1)));
        assert_eq!(euler_inverse(q(10, 1)).coeff(q(10, 1)), Some(r(42)));
    }

    #[test]
    fn euler_product_inverts() {
        let o = q(30, 1);
        assert_eq!(euler_product(o).mul(&euler_inverse(o)), Series::one(o));
    }

    #[test]
    fn coeff_beyond_order_is_unknown() {
        let a = series(&[(0, 1, 1)], q(1, 2));
        assert_eq!(a.coeff(q(1, 1)), None);
        assert_eq!(a.coeff(q(1, 3)), Some(r(0)));
    }
}
