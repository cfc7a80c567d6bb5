//! False theta functions and characters of `(p, p′)` singlet models.
//!
//! `Ψ̃^{(a)}_p = Σ_{n>=0} ψ^{(a)}_{2p}(n) q^{n²/4p}` with `ψ = +1` on
//! `n ≡ a`, `−1` on `n ≡ −a (mod 2p)`; when both hold `+1` wins.
//! Series here omit the universal factor `1/(q)_∞`.

use crate::exactseries::{euler_inverse, Series};
use crate::{QSeries, Rat64, Rational};
use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use serde::Serialize;
use std::collections::{BTreeMap, BTreeSet};

/// `ψ^{(a)}_{2p}(n)`.
pub fn psi(p: i64, a: i64, n: i64) -> i64 {
    let r = n.rem_euclid(2 * p);
    if r == a.rem_euclid(2 * p) {
        1
    } else if r == (-a).rem_euclid(2 * p) {
        -1
    } else {
        0
    }
}

/// `Ψ̃^{(a)}_p` through `order`; requires `0 < a < 2p`.
pub fn false_theta(p: i64, a: i64, order: Rat64) -> QSeries {
    assert!(p > 0 && 0 < a && a < 2 * p, "false theta needs 0 < a < 2p");
    let mut terms = BTreeMap::new();
    let lim = order * (4 * p);
    let mut n = 0i64;
    while Rat64::from_integer(n * n) <= lim {
        let s = psi(p, a, n);
        if s != 0 {
            terms.insert(n * n, Rational::from_integer(BigInt::from(s)));
        }
        n += 1;
    }
    Series::from_raw(4 * p, terms, order)
}

/// `1/η = q^{−1/24}/(q)_∞` through `order`.
pub fn eta_inverse(order: Rat64) -> QSeries {
    let shift = Rat64::new(1, 24);
    euler_inverse(order + shift).shift(-shift)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct SingletModel {
    pub p: i64,
    pub p_prime: i64,
}

impl SingletModel {
    pub fn new(p: i64, p_prime: i64) -> Option<Self> {
        (p > 0 && p_prime > 0 && p.gcd(&p_prime) == 1).then_some(SingletModel { p, p_prime })
    }

    /// The `(1,p)` model.
    pub fn one_p(p: i64) -> Self {
        SingletModel { p, p_prime: 1 }
    }

    /// `c = 1 − 6(p − p′)²/pp′`.
    pub fn central_charge(&self) -> Rat64 {
        let d = self.p - self.p_prime;
        Rat64::from_integer(1) - Rat64::new(6 * d * d, self.p * self.p_prime)
    }

    /// `h_min = −(p − p′)²/4pp′`.
    pub fn h_min(&self) -> Rat64 {
        let d = self.p - self.p_prime;
        Rat64::new(-d * d, 4 * self.p * self.p_prime)
    }

    pub fn effective_central_charge(&self) -> Rat64 {
        self.central_charge() - self.h_min() * 24
    }

    /// Leading exponent of `q^{c/24}·χ_{M_{1,s}}` in the `(1,p)` model:
    /// `(p − s)²/4p + (c − 1)/24`.
    pub fn leading_exponent(&self, s: i64) -> Rat64 {
        Rat64::new((self.p - s) * (self.p - s), 4 * self.p) + (self.central_charge() - 1) / 24
    }
}

/// `χ_{M_{r,s}} = η⁻¹ Σ_{n>=0} (q^{(2pp′n + pr − p′s)²/4pp′} − q^{(2pp′n + pr + p′s)²/4pp′})`.
pub fn singlet_character(model: &SingletModel, r: i64, s: i64, order: Rat64) -> QSeries {
    let (p, pp) = (model.p, model.p_prime);
    let den = 4 * p * pp;
    let inner = order + Rat64::new(1, 24);
    let lim = inner * den;
    let mut terms: BTreeMap<i64, Rational> = BTreeMap::new();
    for (base, sign) in [(p * r - pp * s, 1i64), (p * r + pp * s, -1)] {
        let mut n = 0i64;
        loop {
            let x = 2 * p * pp * n + base;
            if x >= 0 && Rat64::from_integer(x * x) > lim {
                break;
            }
            if Rat64::from_integer(x * x) <= lim {
                *terms.entry(x * x).or_insert_with(Rational::zero) += Rational::from_integer(BigInt::from(sign));
            }
            n += 1;
        }
    }
    let sum = Series::from_raw(den, terms, inner);
    sum.mul(&eta_inverse(order))
}

/// Fit of one series by `q^{r} Σ_a c_a Ψ̃^{(a)}_p + u·q^{v}`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct MemberFit {
    /// nonzero `(a, c_a)`; the module label is `s = p − a`
    pub theta: Vec<(i64, Rational)>,
    pub unit: Rational,
    /// leading exponent `Δ_b`
    pub delta: Rat64,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub enum SingletMatch {
    /// every member is a single monomial `q^{Δ_b}`
    PureUnit {
        deltas: Vec<Rat64>,
    },
    Matched {
        p: i64,
        central_charge: Rat64,
        /// family-wide `r`; equals `(c − 1)/24` whenever that fits
        prefactor: Rat64,
        members: Vec<MemberFit>,
    },
    NoMatch,
}

/// Exact solution of an overdetermined system, or `None` when inconsistent.
fn solve_exact(rows: &[Vec<Rational>], rhs: &[Rational]) -> Option<Vec<Rational>> {
    let m = rows.len();
    let n = rows.first().map_or(0, Vec::len);
    let mut a: Vec<Vec<Rational>> = rows
        .iter()
        .zip(rhs)
        .map(|(r, b)| {
            let mut v = r.clone();
            v.push(b.clone());
            v
        })
        .collect();
    let mut pivots = Vec::new();
    let mut row = 0;
    for col in 0..n {
        let Some(pr) = (row..m).find(|&i| !a[i][col].is_zero()) else {
            continue;
        };
        a.swap(row, pr);
        let inv = Rational::one() / &a[row][col];
        for x in a[row].iter_mut() {
            *x *= &inv;
        }
        for i in 0..m {
            if i != row && !a[i][col].is_zero() {
                let f = a[i][col].clone();
                for j in col..=n {
                    let t = &f * &a[row][j];
                    a[i][j] -= t;
                }
            }
        }
        pivots.push(col);
        row += 1;
    }
    if a[row..].iter().any(|r| !r[n].is_zero()) {
        return None;
    }
    let mut x = vec![Rational::zero(); n];
    for (i, &c) in pivots.iter().enumerate() {
        x[c] = a[i][n].clone();
    }
    Some(x)
}

fn fit_member(z: &QSeries, p: i64, pre: Rat64) -> Option<MemberFit> {
    let order = z.order();
    let basis: Vec<QSeries> = (1..=p).map(|a| false_theta(p, a, order - pre).shift(pre)).collect();
    let v = z.valuation();
    let mut exps: BTreeSet<Rat64> = z.terms().map(|(e, _)| e).collect();
    for b in &basis {
        exps.extend(b.terms().map(|(e, _)| e));
    }
    exps.insert(v);
    // the grid of every exponent class involved, so zero coefficients count
    let den = basis.iter().fold(z.denom(), |acc, b| acc.lcm(&b.denom()));
    let start = *exps.iter().next()?;
    let mut grid = Vec::new();
    let mut e = start;
    while e <= order {
        let classes_hit = exps.iter().any(|x| (*x - e).is_integer());
        if classes_hit {
            grid.push(e);
        }
        e += Rat64::new(1, den);
    }
    let unknowns = basis.len() + 1;
    let mut rows = Vec::new();
    let mut rhs = Vec::new();
    for &e in &grid {
        let mut row: Vec<Rational> = basis
            .iter()
            .map(|b| b.coeff(e).unwrap_or_else(Rational::zero))
            .collect();
        row.push(if e == v { Rational::one() } else { Rational::zero() });
        let target = z.coeff(e).unwrap_or_else(Rational::zero);
        if row.iter().all(Zero::is_zero) && target.is_zero() {
            continue;
        }
        rows.push(row);
        rhs.push(target);
    }
    if rows.len() < 3 * unknowns {
        return None;
    }
    let x = solve_exact(&rows, &rhs)?;
    let theta: Vec<(i64, Rational)> = x[..p as usize]
        .iter()
        .enumerate()
        .filter(|(_, c)| !c.is_zero())
        .map(|(i, c)| (i as i64 + 1, c.clone()))
        .collect();
    Some(MemberFit {
        theta,
        unit: x[p as usize].clone(),
        delta: v,
    })
}

fn is_monomial(z: &QSeries) -> bool {
    z.len() == 1
}

/// `(c − 1)/24` first, then every shift placing some `a²/4p` on one of the
/// two lowest exponents of a member.
fn prefactor_candidates(family: &[&QSeries], p: i64) -> Vec<Rat64> {
    let mut out = vec![(SingletModel::one_p(p).central_charge() - 1) / 24];
    for z in family {
        for (e, _) in z.terms().take(2) {
            for a in 1..=p {
                let r = e - Rat64::new(a * a, 4 * p);
                if !out.contains(&r) {
                    out.push(r);
                }
            }
        }
    }
    out
}

/// Smallest `p <= max_p` for which every member is a `(1,p)` combination.
pub fn identify_singlet(family: &[QSeries], max_p: i64) -> SingletMatch {
    let nonzero: Vec<&QSeries> = family.iter().filter(|z| !z.is_empty()).collect();
    if nonzero.is_empty() {
        return SingletMatch::NoMatch;
    }
    if nonzero.iter().all(|z| is_monomial(z)) {
        return SingletMatch::PureUnit {
            deltas: nonzero.iter().map(|z| z.valuation()).collect(),
        };
    }
    for p in 1..=max_p {
        for pre in prefactor_candidates(&nonzero, p) {
            let fits: Option<Vec<MemberFit>> = nonzero.iter().map(|z| fit_member(z, p, pre)).collect();
            // at least one member must use the theta part
            if let Some(members) = fits.filter(|ms| ms.iter().any(|m| !m.theta.is_empty())) {
                return SingletMatch::Matched {
                    p,
                    central_charge: SingletModel::one_p(p).central_charge(),
                    prefactor: pre,
                    members,
                };
            }
        }
    }
    SingletMatch::NoMatch
}

/// Whether `coeff·q^{Δ}` is the whole series through its order.
pub fn is_pure_unit(z: &QSeries) -> bool {
    is_monomial(z) && z.leading().is_some_and(|(_, c)| c.abs() == Rational::one())
}
