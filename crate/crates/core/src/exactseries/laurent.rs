use super::Series;
use crate::ring::Ring;
use crate::Rat64;
use std::collections::BTreeMap;

/// Finite Laurent polynomial in one variable `t`; zero coefficients are never stored.
#[derive(Clone, Debug, PartialEq)]
pub struct Laurent<C> {
    terms: BTreeMap<i64, C>,
}

impl<C: Ring> Default for Laurent<C> {
    fn default() -> Self {
        Laurent { terms: BTreeMap::new() }
    }
}

impl<C: Ring> Laurent<C> {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn from_terms(terms: impl IntoIterator<Item = (i64, C)>) -> Self {
        let mut l = Self::new();
        for (e, c) in terms {
            l.add_term(e, c);
        }
        l
    }

    pub fn add_term(&mut self, exponent: i64, coeff: C) {
        let v = match self.terms.remove(&exponent) {
            Some(old) => old + coeff,
            None => coeff,
        };
        if !v.is_zero() {
            self.terms.insert(exponent, v);
        }
    }

    pub fn coeff(&self, exponent: i64) -> C {
        self.terms.get(&exponent).cloned().unwrap_or_else(C::zero)
    }

    pub fn terms(&self) -> impl Iterator<Item = (i64, &C)> + '_ {
        self.terms.iter().map(|(&e, c)| (e, c))
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn mul(&self, other: &Self) -> Self {
        let mut out = Self::new();
        for (&a, ca) in &self.terms {
            for (&b, cb) in &other.terms {
                out.add_term(a + b, ca.clone() * cb.clone());
            }
        }
        out
    }

    /// Keeps only terms with `|exponent| <= bound`.
    pub fn band(&self, bound: i64) -> Self {
        Laurent {
            terms: self.terms.range(-bound..=bound).map(|(&e, c)| (e, c.clone())).collect(),
        }
    }

    pub fn map<D: Ring>(&self, f: impl Fn(&C) -> D) -> Laurent<D> {
        Laurent::from_terms(self.terms.iter().map(|(&e, c)| (e, f(c))))
    }
}

/// The substitution `t^n ↦ q^{n²/4A}`, truncated at `order`.
///
/// Terms with `n²/4A > order` are dropped, so the input must contain every
/// `n` with `n² <= 4A·order` for the result to be correct through `order`.
pub fn laplace<C: Ring>(f: &Laurent<C>, scale: i64, order: Rat64) -> Series<C> {
    assert!(scale > 0, "Laplace scale must be positive");
    let denom = 4 * scale;
    let mut map: BTreeMap<i64, C> = BTreeMap::new();
    for (n, c) in f.terms() {
        let e = n.checked_mul(n).expect("exponent overflow");
        match map.get_mut(&e) {
            Some(slot) => *slot = slot.clone() + c.clone(),
            None => {
                map.insert(e, c.clone());
            }
        }
    }
    Series::from_raw(denom, map, order)
}
