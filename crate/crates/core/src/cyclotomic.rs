//! Exact arithmetic in cyclotomic fields ℚ(ζ_N).
//!
//! Elements are stored as sparse sums `Σ c_j ζ_N^j` (group-ring form) and are
//! reduced modulo the cyclotomic polynomial Φ_N only for zero tests and
//! rationality checks. Elements of different conductors are lifted to the lcm.

use crate::{Rat64, Rational};
use num_integer::Integer;
use num_traits::{One, Zero};
use std::collections::{BTreeMap, HashMap};
use std::ops::{Add, Mul, Neg, Sub};
use std::sync::{Mutex, OnceLock};

#[derive(Clone, Debug)]
pub struct Cyclotomic {
    conductor: u64,
    coeffs: BTreeMap<u64, Rational>,
}

fn phi_cache() -> &'static Mutex<HashMap<u64, Vec<i64>>> {
    static CACHE: OnceLock<Mutex<HashMap<u64, Vec<i64>>>> = OnceLock::new();
    CACHE.get_or_init(|| Mutex::new(HashMap::new()))
}

/// Coefficients (low degree first) of the cyclotomic polynomial Φ_n.
pub fn cyclotomic_polynomial(n: u64) -> Vec<i64> {
    assert!(n >= 1);
    if let Some(p) = phi_cache().lock().expect("cache poisoned").get(&n) {
        return p.clone();
    }
    // x^n - 1 divided by Φ_d for every proper divisor d.
    let mut num: Vec<i64> = vec![0; n as usize + 1];
    num[0] = -1;
    num[n as usize] = 1;
    for d in 1..n {
        if n.is_multiple_of(d) {
            num = exact_divide(&num, &cyclotomic_polynomial(d));
        }
    }
    phi_cache().lock().expect("cache poisoned").insert(n, num.clone());
    num
}

fn exact_divide(num: &[i64], den: &[i64]) -> Vec<i64> {
    let mut rem = num.to_vec();
    let dd = den.len() - 1;
    assert_eq!(den[dd], 1, "divisor must be monic");
    let qlen = rem.len() - dd;
    let mut quot = vec![0i64; qlen];
    for i in (0..qlen).rev() {
        let c = rem[i + dd];
        quot[i] = c;
        if c != 0 {
            for (k, &dk) in den.iter().enumerate() {
                rem[i + k] -= c * dk;
            }
        }
    }
    assert!(rem.iter().all(|&x| x == 0), "inexact polynomial division");
    quot
}

impl Cyclotomic {
    pub fn from_rational(r: Rational) -> Self {
        let mut coeffs = BTreeMap::new();
        if !r.is_zero() {
            coeffs.insert(0, r);
        }
        Cyclotomic { conductor: 1, coeffs }
    }

    /// `ζ_N^j`.
    pub fn root(conductor: u64, j: i64) -> Self {
        assert!(conductor >= 1);
        let idx = j.rem_euclid(conductor as i64) as u64;
        let mut coeffs = BTreeMap::new();
        coeffs.insert(idx, Rational::one());
        Cyclotomic { conductor, coeffs }
    }

    /// `exp(2πi r)`.
    pub fn exp2pi(r: Rat64) -> Self {
        Self::root(*r.denom() as u64, *r.numer())
    }

    pub fn conductor(&self) -> u64 {
        self.conductor
    }

    fn lifted(&self, n: u64) -> BTreeMap<u64, Rational> {
        let f = n / self.conductor;
        self.coeffs.iter().map(|(&j, c)| (j * f, c.clone())).collect()
    }

    fn combine(a: &Self, b: &Self, sign: bool) -> Self {
        let n = a.conductor.lcm(&b.conductor);
        let mut coeffs = a.lifted(n);
        for (j, c) in b.lifted(n) {
            let e = coeffs.entry(j).or_insert_with(Rational::zero);
            if sign {
                *e += c;
            } else {
                *e -= c;
            }
        }
        coeffs.retain(|_, c| !c.is_zero());
        Cyclotomic { conductor: n, coeffs }
    }

    /// Multiplies by `exp(2πi r)`.
    pub fn mul_root(&self, r: Rat64) -> Self {
        let n = self.conductor.lcm(&(*r.denom() as u64));
        let shift = (r.numer() * (n as i64 / r.denom())).rem_euclid(n as i64) as u64;
        let coeffs = self.lifted(n).into_iter().map(|(j, c)| ((j + shift) % n, c)).collect();
        Cyclotomic { conductor: n, coeffs }
    }

    pub fn scale(&self, k: &Rational) -> Self {
        if k.is_zero() {
            return Self::zero();
        }
        Cyclotomic {
            conductor: self.conductor,
            coeffs: self.coeffs.iter().map(|(&j, c)| (j, c * k)).collect(),
        }
    }

    /// Canonical coordinates in the power basis `1, ζ, …, ζ^{φ(N)-1}`.
    pub fn reduced(&self) -> Vec<Rational> {
        let n = self.conductor as usize;
        let phi = cyclotomic_polynomial(self.conductor);
        let deg = phi.len() - 1;
        let mut poly: Vec<Rational> = vec![Rational::zero(); n.max(deg)];
        for (&j, c) in &self.coeffs {
            poly[j as usize] += c;
        }
        for i in (deg..poly.len()).rev() {
            let c = std::mem::replace(&mut poly[i], Rational::zero());
            if c.is_zero() {
                continue;
            }
            for (k, &pk) in phi.iter().enumerate().take(deg) {
                if pk != 0 {
                    poly[i - deg + k] -= &c * Rational::from_integer(pk.into());
                }
            }
        }
        poly.truncate(deg);
        poly
    }

    /// The value as a rational number, when it lies in ℚ.
    pub fn to_rational(&self) -> Option<Rational> {
        let red = self.reduced();
        if red.iter().skip(1).all(|c| c.is_zero()) {
            Some(red.first().cloned().unwrap_or_else(Rational::zero))
        } else {
            None
        }
    }
}

impl PartialEq for Cyclotomic {
    fn eq(&self, other: &Self) -> bool {
        Cyclotomic::combine(self, other, false).is_zero()
    }
}

impl Zero for Cyclotomic {
    fn zero() -> Self {
        Cyclotomic {
            conductor: 1,
            coeffs: BTreeMap::new(),
        }
    }

    fn is_zero(&self) -> bool {
        self.coeffs.is_empty() || self.reduced().iter().all(|c| c.is_zero())
    }
}

impl One for Cyclotomic {
    fn one() -> Self {
        Cyclotomic::from_rational(Rational::one())
    }
}

impl Add for Cyclotomic {
    type Output = Self;
    fn add(self, rhs: Self) -> Self {
        Cyclotomic::combine(&self, &rhs, true)
    }
}

impl Sub for Cyclotomic {
    type Output = Self;
    fn sub(self, rhs: Self) -> Self {
        Cyclotomic::combine(&self, &rhs, false)
    }
}

impl Neg for Cyclotomic {
    type Output = Self;
    fn neg(self) -> Self {
        Cyclotomic {
            conductor: self.conductor,
            coeffs: self.coeffs.into_iter().map(|(j, c)| (j, -c)).collect(),
        }
    }
}

impl Mul for Cyclotomic {
    type Output = Self;
    fn mul(self, rhs: Self) -> Self {
        let n = self.conductor.lcm(&rhs.conductor);
        let a = self.lifted(n);
        let b = rhs.lifted(n);
        let mut coeffs: BTreeMap<u64, Rational> = BTreeMap::new();
        for (i, x) in &a {
            for (j, y) in &b {
                *coeffs.entry((i + j) % n).or_insert_with(Rational::zero) += x * y;
            }
        }
        coeffs.retain(|_, c| !c.is_zero());
        Cyclotomic { conductor: n, coeffs }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_cyclotomic_polynomials() {
        assert_eq!(cyclotomic_polynomial(1), vec![-1, 1]);
        assert_eq!(cyclotomic_polynomial(3), vec![1, 1, 1]);
        assert_eq!(cyclotomic_polynomial(4), vec![1, 0, 1]);
        assert_eq!(cyclotomic_polynomial(6), vec![1, -1, 1]);
        assert_eq!(cyclotomic_polynomial(12), vec![1, 0, -1, 0, 1]);
    }

    #[test]
    fn root_sums() {
        // ω + ω² = -1
        let w = Cyclotomic::root(3, 1) + Cyclotomic::root(3, 2);
        assert_eq!(w.to_rational(), Some(Rational::from_integer((-1).into())));
        // ζ_4 is not rational but ζ_4² = -1
        let i = Cyclotomic::root(4, 1);
        assert_eq!(i.to_rational(), None);
        assert_eq!((i.clone() * i).to_rational(), Some(-Rational::one()));
    }

    #[test]
    fn orthogonality_over_z60() {
        for h in 0..60i64 {
            let s = (0..60).fold(Cyclotomic::zero(), |acc, k| {
                acc + Cyclotomic::exp2pi(Rat64::new(k * h, 60))
            });
            let expect = if h == 0 { 60 } else { 0 };
            assert_eq!(s.to_rational(), Some(Rational::from_integer(expect.into())));
        }
    }
}
