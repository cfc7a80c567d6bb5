//! Symmetric expansion of `(z - 1/z)^p`.
//!
//! For `p = -n < 0` the expansion at `∞` is `Σ_j C(n+j-1, j) z^{-n-2j}` and the
//! expansion at `0` is `(-1)^n Σ_j C(n+j-1, j) z^{n+2j}`; the symmetric
//! expansion is their average, so every coefficient carries a factor `1/2`.
//! For `p >= 0` the factor is a polynomial and is returned verbatim.

use crate::Rational;
use num_bigint::BigInt;
use num_traits::{One, Zero};

/// Which factor to expand: the leaf factor `(z - 1/z)` or `(z - 1/z)^{-n}`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SymPower {
    Linear,
    Inverse(u32),
}

fn binomial(n: u64, k: u64) -> BigInt {
    let mut acc = BigInt::one();
    for i in 0..k {
        acc = acc * BigInt::from(n - i) / BigInt::from(i + 1);
    }
    acc
}

/// Coefficient of `z^exponent` in the symmetric expansion of `(z - 1/z)^{-n}`.
pub fn sym_coefficient(n: u32, exponent: i64) -> Rational {
    let n64 = n as i64;
    if n == 0 {
        return if exponent == 0 {
            Rational::one()
        } else {
            Rational::zero()
        };
    }
    let a = exponent.abs();
    if a < n64 || (a - n64) % 2 != 0 {
        return Rational::zero();
    }
    let j = ((a - n64) / 2) as u64;
    let c = binomial(n as u64 + j - 1, j);
    let half = Rational::new(c, BigInt::from(2));
    if exponent > 0 && n % 2 == 1 {
        -half
    } else {
        half
    }
}

/// Coefficient of `z^exponent` in (the symmetric expansion of) `(z - 1/z)^power`.
pub fn factor_coefficient(power: i32, exponent: i64) -> Rational {
    if power < 0 {
        return sym_coefficient(power.unsigned_abs(), exponent);
    }
    // (z - 1/z)^m = Σ_i C(m,i) (-1)^i z^{m-2i}
    let m = power as i64;
    if exponent.abs() > m || (m - exponent) % 2 != 0 {
        return Rational::zero();
    }
    let i = ((m - exponent) / 2) as u64;
    let c = Rational::from_integer(binomial(m as u64, i));
    if i % 2 == 1 {
        -c
    } else {
        c
    }
}

/// All nonzero terms of `(z - 1/z)^power` (symmetrically expanded) with
/// `|exponent| <= bound`, by increasing exponent.
pub fn factor_terms(power: i32, bound: i64) -> Vec<(i64, Rational)> {
    let lim = if power >= 0 { (power as i64).min(bound) } else { bound };
    (-lim..=lim)
        .map(|e| (e, factor_coefficient(power, e)))
        .filter(|(_, c)| !c.is_zero())
        .collect()
}

/// The terms of the requested factor with `|exponent| <= bound`.
pub fn sym_expand(power: SymPower, bound: i64) -> Vec<(i64, Rational)> {
    match power {
        SymPower::Linear => factor_terms(1, bound),
        SymPower::Inverse(n) => factor_terms(-(n as i32), bound),
    }
}

/// Unbounded stream of the symmetric expansion of `(z - 1/z)^{-n}`, emitted by
/// increasing `|exponent|`, negative side first.
#[derive(Clone, Debug)]
pub struct SymTermStream {
    power: u32,
    j: u64,
    pending: Option<(i64, Rational)>,
    done: bool,
}

impl SymTermStream {
    pub fn new(power: u32) -> Self {
        SymTermStream {
            power,
            j: 0,
            pending: None,
            done: false,
        }
    }

    pub fn power(&self) -> u32 {
        self.power
    }
}

impl Iterator for SymTermStream {
    type Item = (i64, Rational);

    fn next(&mut self) -> Option<Self::Item> {
        if let Some(t) = self.pending.take() {
            return Some(t);
        }
        if self.done {
            return None;
        }
        if self.power == 0 {
            self.done = true;
            return Some((0, Rational::one()));
        }
        let e = self.power as i64 + 2 * self.j as i64;
        self.j += 1;
        self.pending = Some((e, sym_coefficient(self.power, e)));
        Some((-e, sym_coefficient(self.power, -e)))
    }
}
