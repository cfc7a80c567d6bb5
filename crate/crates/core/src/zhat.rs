//! Lattice-sum evaluation of `Ẑ_b`, `Z₀` and `Ẑ'_h`.
//!
//! With `K = adj(−M) = −|H|·M⁻¹` (a positive-definite integer matrix) the
//! exponent of a lattice vector is `(ℓ, Kℓ)/4|H|`, and
//!
//! `Ẑ_b = q^{Δ₀} Σ_{ℓ ≡ b mod 2Mℤ^s} c_ℓ q^{(ℓ,Kℓ)/4|H|}`, `Δ₀ = (−3s − Tr M)/4`,
//!
//! where `c_ℓ` is the product over vertices of the coefficient of `z^{ℓ_v}` in
//! the symmetric expansion of `(z − 1/z)^{2 − deg v}`.
//!
//! Enumeration fixes every non-node coordinate (finitely many choices) and
//! walks node coordinates inside the ellipsoid using an exact LDLᵀ of the node
//! block of `K`. Each branch is pruned by the exact minimum of the form over
//! its free coordinates, so every vector with exponent `<= order` is emitted
//! and the truncation order of every result is certified.

use crate::cyclotomic::Cyclotomic;
use crate::error::{Error, Result};
use crate::exactseries::{factor_coefficient, factor_terms, Series};
use crate::homology::{GroupElement, Homology};
use crate::plumbing::PlumbingGraph;
use crate::{CycSeries, Matrix, QSeries, Rat64, Rational};
use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use rayon::prelude::*;
use std::collections::BTreeMap;
use std::sync::atomic::{AtomicU64, Ordering};

/// Per-vertex exponents `2 − deg v` of the integrand factors `(z − 1/z)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IntegrandSupport {
    pub powers: Vec<i32>,
}

impl IntegrandSupport {
    pub fn new(g: &PlumbingGraph) -> Self {
        IntegrandSupport {
            powers: (0..g.s()).map(|v| 2 - g.degree(v) as i32).collect(),
        }
    }

    pub fn s(&self) -> usize {
        self.powers.len()
    }

    /// Product of the per-vertex coefficients of `ℓ`.
    pub fn coefficient(&self, ell: &[i64]) -> Rational {
        self.powers
            .iter()
            .zip(ell)
            .fold(Rational::one(), |acc, (&p, &x)| acc * factor_coefficient(p, x))
    }
}

/// The quadratic form `K = adj(−M)`, `|H|` and the prefactor `Δ₀`.
#[derive(Clone, Debug, PartialEq)]
pub struct LaplaceForm {
    pub k: Matrix<i64>,
    pub order_h: i64,
    pub delta0: Rat64,
    /// LDLᵀ pivots of `−M⁻¹`; all positive
    pub pivots: Vec<Rational>,
}

impl LaplaceForm {
    pub fn new(h: &Homology) -> Result<Self> {
        let m = &h.matrix;
        let s = m.s();
        let inv = m.inverse().ok_or(Error::NotNegativeDefinite)?;
        let neg_inv = inv.map(|x| -x);
        let (_, pivots) = neg_inv.ldl().ok_or(Error::NotNegativeDefinite)?;
        if pivots.iter().any(|p| !p.is_positive()) {
            return Err(Error::NotNegativeDefinite);
        }
        let order_h = m
            .order()
            .to_i64()
            .ok_or_else(|| Error::Internal("|H| exceeds 64 bits".into()))?;
        let sign = if s % 2 == 1 { 1 } else { -1 };
        let k = m
            .adjugate()
            .map(|x| x.clone() * sign)
            .to_i64()
            .ok_or_else(|| Error::Internal("adjugate entry exceeds 64 bits".into()))?;
        let trace = m
            .trace()
            .to_i64()
            .ok_or_else(|| Error::Internal("trace exceeds 64 bits".into()))?;
        Ok(LaplaceForm {
            k,
            order_h,
            delta0: Rat64::new(-3 * s as i64 - trace, 4),
            pivots,
        })
    }

    /// `(ℓ, Kℓ)`, i.e. `4|H|` times the exponent.
    pub fn value(&self, ell: &[i64]) -> i128 {
        let s = ell.len();
        let mut acc: i128 = 0;
        for i in 0..s {
            if ell[i] == 0 {
                continue;
            }
            let mut row: i128 = 0;
            for j in 0..s {
                row += *self.k.get(i, j) as i128 * ell[j] as i128;
            }
            acc += row * ell[i] as i128;
        }
        acc
    }

    /// `(ℓ, −M⁻¹ℓ)/4`.
    pub fn exponent(&self, ell: &[i64]) -> Rat64 {
        let v = i64::try_from(self.value(ell)).expect("exponent overflow");
        Rat64::new(v, 4 * self.order_h)
    }
}

/// One emitted lattice vector; `exponent` excludes the prefactor `Δ₀`.
#[derive(Clone, Debug, PartialEq)]
pub struct LatticeTerm {
    pub ell: Vec<i64>,
    pub coeff: Rational,
    pub exponent: Rat64,
}

/// Progress report: vectors emitted so far and the exponent bound in force.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Progress {
    pub vectors: u64,
    pub branches_done: u64,
    pub branches_total: u64,
    pub frontier: Rat64,
}

pub type ProgressFn<'a> = &'a (dyn Fn(Progress) + Sync);

fn to_f64(r: &Rational) -> f64 {
    r.to_f64().unwrap_or(0.0)
}

/// Integers `y` with `(y − c)² <= r2`, as an inclusive range.
fn int_range(c: &Rational, r2: &Rational) -> Option<(i64, i64)> {
    if r2.is_negative() {
        return None;
    }
    let inside = |y: i64| {
        let d = Rational::from_integer(BigInt::from(y)) - c;
        &d * &d <= *r2
    };
    let cf = to_f64(c);
    let rf = to_f64(r2).max(0.0).sqrt();
    let mut lo = (cf - rf).floor() as i64;
    let mut hi = (cf + rf).ceil() as i64;
    while inside(lo - 1) {
        lo -= 1;
    }
    while lo <= hi && !inside(lo) {
        lo += 1;
    }
    while inside(hi + 1) {
        hi += 1;
    }
    while hi >= lo && !inside(hi) {
        hi -= 1;
    }
    (lo <= hi).then_some((lo, hi))
}

struct NodeGeometry {
    nodes: Vec<usize>,
    fixed: Vec<usize>,
    /// unit lower-triangular factor and pivots of the node block of K
    l: Matrix<Rational>,
    d: Vec<Rational>,
    /// −K_NN⁻¹ K_NF
    center_map: Matrix<Rational>,
    /// Schur complement K_FF − K_FN K_NN⁻¹ K_NF
    schur: Matrix<Rational>,
}

impl NodeGeometry {
    fn new(support: &IntegrandSupport, form: &LaplaceForm) -> Self {
        let s = support.s();
        let nodes: Vec<usize> = (0..s).filter(|&v| support.powers[v] < 0).collect();
        let fixed: Vec<usize> = (0..s).filter(|&v| support.powers[v] >= 0).collect();
        let kq = form.k.map(|&x| Rational::from_integer(BigInt::from(x)));
        let knn = kq.principal(&nodes);
        let knf = kq.submatrix(&nodes, &fixed);
        let kff = kq.principal(&fixed);
        let (l, d) = if nodes.is_empty() {
            (Matrix::zeros(0, 0), Vec::new())
        } else {
            knn.ldl().expect("node block of a positive-definite form")
        };
        let (center_map, schur) = if nodes.is_empty() {
            (Matrix::zeros(0, fixed.len()), kff)
        } else {
            let inv = knn.inverse().expect("node block is invertible");
            let cm = inv.mul(&knf).map(|x| -x);
            let schur_sub = knf.transpose().mul(&inv).mul(&knf);
            let schur = Matrix::from_fn(fixed.len(), fixed.len(), |i, j| kff.get(i, j) - schur_sub.get(i, j));
            (cm, schur)
        };
        NodeGeometry {
            nodes,
            fixed,
            l,
            d,
            center_map,
            schur,
        }
    }
}

fn cartesian(choices: &[Vec<(i64, Rational)>]) -> Vec<(Vec<i64>, Rational)> {
    let mut out = vec![(Vec::new(), Rational::one())];
    for opts in choices {
        let mut next = Vec::with_capacity(out.len() * opts.len());
        for (prefix, c) in &out {
            for (x, cx) in opts {
                let mut p = prefix.clone();
                p.push(*x);
                next.push((p, c * cx));
            }
        }
        out = next;
    }
    out
}

/// Every support vector `ℓ` with `(ℓ, −M⁻¹ℓ)/4 <= order − Δ₀`, exactly once.
pub fn enumerate_lattice(
    support: &IntegrandSupport,
    form: &LaplaceForm,
    order: Rat64,
    progress: Option<ProgressFn<'_>>,
) -> Vec<LatticeTerm> {
    let budget = order - form.delta0;
    if budget.is_negative() {
        return Vec::new();
    }
    // integer bound on (ℓ, Kℓ)
    let bound = (budget * Rat64::from_integer(4 * form.order_h)).floor().to_integer() as i128;
    let bound_q = Rational::from_integer(BigInt::from(bound));
    let geo = NodeGeometry::new(support, form);
    let choices: Vec<Vec<(i64, Rational)>> = geo
        .fixed
        .iter()
        .map(|&v| {
            let p = support.powers[v];
            factor_terms(p, p as i64)
        })
        .collect();
    let branches = cartesian(&choices);
    let total = branches.len() as u64;
    let emitted = AtomicU64::new(0);
    let done = AtomicU64::new(0);
    let per_branch: Vec<Vec<LatticeTerm>> = branches
        .par_iter()
        .map(|(xf, cf)| {
            let xq: Vec<Rational> = xf.iter().map(|&x| Rational::from_integer(x.into())).collect();
            let min = {
                let sx = geo.schur.mul_vec(&xq);
                sx.iter().zip(&xq).fold(Rational::zero(), |a, (p, q)| a + p * q)
            };
            let mut out = Vec::new();
            if min <= bound_q {
                let center = geo.center_map.mul_vec(&xq);
                let mut ell = vec![0i64; support.s()];
                for (&v, &x) in geo.fixed.iter().zip(xf) {
                    ell[v] = x;
                }
                let mut w: Vec<Rational> = vec![Rational::zero(); geo.nodes.len()];
                walk_nodes(
                    &geo,
                    support,
                    form,
                    &center,
                    geo.nodes.len(),
                    &(&bound_q - &min),
                    &mut w,
                    &mut ell,
                    cf.clone(),
                    bound,
                    &mut out,
                );
            }
            let n = emitted.fetch_add(out.len() as u64, Ordering::Relaxed) + out.len() as u64;
            let k = done.fetch_add(1, Ordering::Relaxed) + 1;
            if let Some(cb) = progress {
                cb(Progress {
                    vectors: n,
                    branches_done: k,
                    branches_total: total,
                    frontier: order,
                });
            }
            out
        })
        .collect();
    per_branch.into_iter().flatten().collect()
}

#[allow(clippy::too_many_arguments)]
fn walk_nodes(
    geo: &NodeGeometry,
    support: &IntegrandSupport,
    form: &LaplaceForm,
    center: &[Rational],
    level: usize,
    remaining: &Rational,
    w: &mut Vec<Rational>,
    ell: &mut Vec<i64>,
    coeff: Rational,
    bound: i128,
    out: &mut Vec<LatticeTerm>,
) {
    if level == 0 {
        let val = form.value(ell);
        if val <= bound {
            out.push(LatticeTerm {
                ell: ell.clone(),
                coeff,
                exponent: Rat64::new(val as i64, 4 * form.order_h),
            });
        }
        return;
    }
    let i = level - 1;
    let mut c = Rational::zero();
    for j in level..geo.nodes.len() {
        c += geo.l.get(j, i) * &w[j];
    }
    let r2 = remaining / &geo.d[i];
    // y_i = center_i + w_i with (w_i + c)² <= r2
    let mid = &center[i] - &c;
    let Some((lo, hi)) = int_range(&mid, &r2) else {
        return;
    };
    let v = geo.nodes[i];
    let n = -support.powers[v] as i64;
    let mut y = lo;
    if (y - n).rem_euclid(2) != 0 {
        y += 1;
    }
    while y <= hi {
        if y.abs() >= n {
            let wi = Rational::from_integer(BigInt::from(y)) - &center[i];
            let z = &wi + &c;
            let rest = remaining - &geo.d[i] * &z * &z;
            w[i] = wi;
            ell[v] = y;
            let cy = factor_coefficient(support.powers[v], y);
            walk_nodes(geo, support, form, center, i, &rest, w, ell, &coeff * cy, bound, out);
        }
        y += 2;
    }
    ell[v] = 0;
    w[i] = Rational::zero();
}

/// Evaluator bundling a graph with its homology and quadratic form.
#[derive(Clone, Debug)]
pub struct Zhat {
    graph: PlumbingGraph,
    homology: Homology,
    support: IntegrandSupport,
    form: LaplaceForm,
}

impl Zhat {
    pub fn new(g: &PlumbingGraph) -> Result<Self> {
        let homology = Homology::new(g)?;
        let form = LaplaceForm::new(&homology)?;
        Ok(Zhat {
            graph: g.clone(),
            support: IntegrandSupport::new(g),
            homology,
            form,
        })
    }

    pub fn graph(&self) -> &PlumbingGraph {
        &self.graph
    }

    pub fn homology(&self) -> &Homology {
        &self.homology
    }

    pub fn form(&self) -> &LaplaceForm {
        &self.form
    }

    pub fn support(&self) -> &IntegrandSupport {
        &self.support
    }

    pub fn delta0(&self) -> Rat64 {
        self.form.delta0
    }

    pub fn order_h(&self) -> i64 {
        self.form.order_h
    }

    pub fn enumerate(&self, order: Rat64, progress: Option<ProgressFn<'_>>) -> Vec<LatticeTerm> {
        enumerate_lattice(&self.support, &self.form, order, progress)
    }

    fn assemble(&self, buckets: Vec<BTreeMap<i64, Rational>>, order: Rat64) -> Result<Vec<QSeries>> {
        let denom = 4 * self.form.order_h;
        buckets
            .into_iter()
            .map(|map| {
                let s = Series::from_raw(denom, map, order - self.form.delta0).shift(self.form.delta0);
                if denom % s.denom() != 0 {
                    return Err(Error::Internal(format!(
                        "exponent denominator {} exceeds 4|det M| = {denom}",
                        s.denom()
                    )));
                }
                Ok(s)
            })
            .collect()
    }

    fn bucketed(
        &self,
        order: Rat64,
        progress: Option<ProgressFn<'_>>,
        label: impl Fn(&[i64]) -> Result<usize>,
    ) -> Result<Vec<QSeries>> {
        let n = self.homology.group.order() as usize;
        let mut buckets: Vec<BTreeMap<i64, Rational>> = vec![BTreeMap::new(); n];
        let denom = 4 * self.form.order_h;
        for t in self.enumerate(order, progress) {
            let key = t.exponent.numer() * (denom / t.exponent.denom());
            *buckets[label(&t.ell)?].entry(key).or_insert_with(Rational::zero) += t.coeff;
        }
        self.assemble(buckets, order)
    }

    /// `Ẑ_b` for every spin^c class, indexed like `homology().spinc.reps`.
    pub fn zhat_all(&self, order: Rat64, progress: Option<ProgressFn<'_>>) -> Result<Vec<QSeries>> {
        let h = &self.homology;
        self.bucketed(order, progress, |ell| h.spinc.index_of_vector(&h.group, ell))
    }

    pub fn zhat_b(&self, b: &[i64], order: Rat64) -> Result<QSeries> {
        let idx = self.homology.spinc.index_of_rep(b)?;
        Ok(self.zhat_all(order, None)?.swap_remove(idx))
    }

    /// `Ẑ'_h` for every `h`, indexed like `homology().group.elements()`.
    pub fn zhat_prime_all(&self, order: Rat64) -> Result<Vec<QSeries>> {
        let g = &self.homology.group;
        self.bucketed(order, None, |ell| Ok(g.index_of(&g.class_of(ell))))
    }

    pub fn zhat_prime_h(&self, h: &GroupElement, order: Rat64) -> Result<QSeries> {
        let idx = self.homology.group.index_of(h);
        Ok(self.zhat_prime_all(order)?.swap_remove(idx))
    }

    pub fn z0(&self, order: Rat64) -> Result<QSeries> {
        // bucket 0 collects every vector
        self.bucketed(order, None, |_| Ok(0)).map(|mut v| v.swap_remove(0))
    }

    /// `Ẑ'_h` through the character average
    /// `(1/|H|) Σ_χ χ(h⁻¹) Σ_ℓ c_ℓ χ([ℓ]) q^{…}` in cyclotomic arithmetic.
    pub fn zhat_prime_via_characters(&self, h: &GroupElement, order: Rat64) -> Result<QSeries> {
        let g = &self.homology.group;
        let terms = self.enumerate(order, None);
        let classes: Vec<GroupElement> = terms.iter().map(|t| g.class_of(&t.ell)).collect();
        let mut total: CycSeries = Series::zero(order);
        for chi in g.characters() {
            let weight = Cyclotomic::exp2pi(-chi.eval(h));
            let twisted: CycSeries = Series::from_terms(
                terms.iter().zip(&classes).map(|(t, cls)| {
                    (
                        t.exponent + self.form.delta0,
                        Cyclotomic::exp2pi(chi.eval(cls)).scale(&t.coeff) * weight.clone(),
                    )
                }),
                order,
            );
            total = total.add(&twisted);
        }
        let inv = Rational::new(BigInt::one(), BigInt::from(g.order()));
        total.try_map_coeffs(|c| {
            c.to_rational()
                .map(|r| r * &inv)
                .ok_or_else(|| Error::NonrationalResult(format!("{c:?}")))
        })
    }

    /// `|H|·Δ_b mod 1` style data: the exponent class of each `Ẑ_b`.
    pub fn exponent_classes(&self, series: &[QSeries]) -> Vec<Option<Rat64>> {
        series.iter().map(|s| s.exponent_class()).collect()
    }
}

pub fn zhat_b(g: &PlumbingGraph, b: &[i64], order: Rat64) -> Result<QSeries> {
    Zhat::new(g)?.zhat_b(b, order)
}

pub fn z0(g: &PlumbingGraph, order: Rat64) -> Result<QSeries> {
    Zhat::new(g)?.z0(order)
}

pub fn zhat_prime_h(g: &PlumbingGraph, h: &GroupElement, order: Rat64) -> Result<QSeries> {
    Zhat::new(g)?.zhat_prime_h(h, order)
}

/// Brute-force reference: every support vector in a box, filtered exactly.
/// Exponentially slow; intended for tests on tiny graphs.
pub fn enumerate_box(support: &IntegrandSupport, form: &LaplaceForm, order: Rat64, radius: i64) -> Vec<LatticeTerm> {
    let budget = order - form.delta0;
    let mut out = Vec::new();
    let s = support.s();
    let mut ell = vec![-radius; s];
    loop {
        let c = support.coefficient(&ell);
        if !c.is_zero() {
            let e = form.exponent(&ell);
            if e <= budget {
                out.push(LatticeTerm {
                    ell: ell.clone(),
                    coeff: c,
                    exponent: e,
                });
            }
        }
        let mut i = 0;
        loop {
            if i == s {
                return out;
            }
            ell[i] += 1;
            if ell[i] > radius {
                ell[i] = -radius;
                i += 1;
            } else {
                break;
            }
        }
    }
}

/// `gcd` helper kept for callers assembling exponent classes.
pub fn denominator_lcm(series: &[QSeries]) -> i64 {
    series.iter().fold(1i64, |a, s| a.lcm(&s.denom()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corpus;

    fn rat(n: i64, d: i64) -> Rat64 {
        Rat64::new(n, d)
    }

    #[test]
    fn single_minus_one_vertex() {
        let g = PlumbingGraph::new(vec![-1], vec![]).unwrap();
        let z = Zhat::new(&g).unwrap();
        assert_eq!(z.delta0(), rat(-1, 2));
        let mut terms = z.enumerate(rat(2, 1), None);
        terms.sort_by_key(|t| t.ell[0]);
        let got: Vec<(i64, Rational, Rat64)> = terms.into_iter().map(|t| (t.ell[0], t.coeff, t.exponent)).collect();
        let r = |x: i64| Rational::from_integer(x.into());
        assert_eq!(
            got,
            vec![(-2, r(1), rat(1, 1)), (0, r(-2), rat(0, 1)), (2, r(1), rat(1, 1))]
        );
        // hand evaluation: q^{-1/2}(2q - 2)
        let series = z.z0(rat(5, 1)).unwrap();
        let expect = QSeries::from_terms([(rat(-1, 2), r(-2)), (rat(1, 2), r(2))], rat(5, 1));
        assert_eq!(series, expect);
    }

    #[test]
    fn ellipsoid_matches_box() {
        for (g, order, radius) in [
            (corpus::e12(), rat(4, 1), 13),
            (corpus::d_n(5), rat(3, 1), 7),
            (corpus::e6(), rat(2, 1), 5),
        ] {
            let z = Zhat::new(&g).unwrap();
            let mut a: Vec<(Vec<i64>, Rational)> =
                z.enumerate(order, None).into_iter().map(|t| (t.ell, t.coeff)).collect();
            // the box must strictly contain the ellipsoid
            assert!(a.iter().all(|(l, _)| l.iter().all(|x| x.abs() < radius)));
            let mut b: Vec<(Vec<i64>, Rational)> = enumerate_box(z.support(), z.form(), order, radius)
                .into_iter()
                .map(|t| (t.ell, t.coeff))
                .collect();
            a.sort();
            b.sort();
            assert!(!a.is_empty());
            assert_eq!(a, b);
        }
    }

    #[test]
    fn empty_ellipsoid() {
        let z = Zhat::new(&corpus::e6()).unwrap();
        assert!(z.enumerate(z.delta0() - rat(1, 1), None).is_empty());
    }
}
