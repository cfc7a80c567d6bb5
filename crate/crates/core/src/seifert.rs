//! Seifert data `M(b; (a₁,b₁),…,(a_k,b_k))`, star plumbings and the
//! one-variable reduction of `Z₀` and `Ẑ'_h`.
//!
//! With `A = ∏a_i`, `ā_i = A/a_i` and generators `g_i` (far end of leg `i`),
//! `g₀` (the node):
//!
//! `Z₀(q^{|H|}) = q^Δ 𝓛_A(s.e. f₀)`, `f₀(t) = ∏(t^{ā_i} − t^{−ā_i}) / (t^A − t^{−A})^{k−2}`,
//!
//! `Ẑ'_h(q^{|H|}) = q^Δ 𝓛_A(s.e. f_h)`, `f_h = |H|⁻¹ Σ_χ χ(−h) f_χ`,
//!
//! where `f_χ` twists each `t^{±ā_i}` by `χ(g_i)^{±1}` and `t^{±A}` by `χ(g₀)^{±1}`,
//! and `4Δ = 24λ − A(2 − k + Σ 1/a_i²)`.

use crate::cyclotomic::Cyclotomic;
use crate::error::{Error, Result};
use crate::exactseries::{laplace, Laurent, SymTermStream};
use crate::homology::{GroupElement, Homology};
use crate::plumbing::{PlumbingGraph, Role};
use crate::splice::casson_walker64;
use crate::{QSeries, Rat64, Rational};
use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use std::collections::BTreeMap;
use std::fmt;

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct SeifertData {
    b: i64,
    /// padded with `(1, 0)` to at least three entries
    pairs: Vec<(i64, i64)>,
}

/// `[c₁,…,c_n]` with `a/b = c₁ − 1/(c₂ − 1/(… − 1/c_n))` and every `c_i >= 2`.
pub fn neg_continued_fraction(a: i64, b: i64) -> Result<Vec<i64>> {
    if !(0 < b && b < a) || a.gcd(&b) != 1 {
        return Err(Error::InvalidPair(format!("{a}/{b}")));
    }
    let (mut p, mut q) = (a, b);
    let mut out = Vec::new();
    while q > 0 {
        let c = Integer::div_ceil(&p, &q);
        out.push(c);
        (p, q) = (q, c * q - p);
    }
    Ok(out)
}

/// Inverse of [`neg_continued_fraction`].
pub fn eval_continued_fraction(cs: &[i64]) -> (i64, i64) {
    let (mut p, mut q) = (1i64, 0i64);
    for &c in cs.iter().rev() {
        (p, q) = (c * p - q, p);
    }
    (p, q)
}

/// Vertex indices of the star plumbing: the node and each leg from the node outwards.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct StarLayout {
    pub node: usize,
    pub legs: Vec<Vec<usize>>,
}

impl SeifertData {
    pub fn new(b: i64, pairs: Vec<(i64, i64)>) -> Result<Self> {
        for &(a, bi) in &pairs {
            if (a, bi) != (1, 0) {
                neg_continued_fraction(a, bi)?;
            }
        }
        let mut pairs = pairs;
        while pairs.len() < 3 {
            pairs.push((1, 0));
        }
        Ok(SeifertData { b, pairs })
    }

    /// Parses `b; a1/b1 a2/b2 …`.
    pub fn parse(text: &str) -> Result<Self> {
        let text = text.trim_end();
        let semi = text
            .find(';')
            .ok_or_else(|| Error::parse(1, text.len() + 1, "expected `b; a1/b1 ...`"))?;
        let head = &text[..semi];
        let b: i64 = head.trim().parse().map_err(|_| {
            Error::parse(
                1,
                1 + head.len() - head.trim_start().len(),
                format!("bad integer `{}`", head.trim()),
            )
        })?;
        let mut pairs = Vec::new();
        let rest = &text[semi + 1..];
        let mut offset = semi + 1;
        for tok in rest.split(' ') {
            let col = offset + 1;
            offset += tok.len() + 1;
            if tok.is_empty() {
                continue;
            }
            let (a, bi) = tok
                .split_once('/')
                .ok_or_else(|| Error::parse(1, col, format!("expected a/b, found `{tok}`")))?;
            let a: i64 = a
                .parse()
                .map_err(|_| Error::parse(1, col, format!("bad integer `{a}`")))?;
            let bi: i64 = bi
                .parse()
                .map_err(|_| Error::parse(1, col, format!("bad integer `{bi}`")))?;
            pairs.push((a, bi));
        }
        SeifertData::new(b, pairs)
    }

    /// Reads Seifert data off a star-shaped graph whose legs have framings <= −2.
    pub fn from_plumbing(g: &PlumbingGraph) -> Result<Self> {
        let nodes = g.vertices_with_role(Role::Node);
        let [node] = nodes[..] else {
            return Err(Error::Inapplicable("graph is not star-shaped".into()));
        };
        let mut pairs = Vec::new();
        for &first in g.neighbors(node) {
            let (mut prev, mut cur) = (node, first);
            let mut cs = Vec::new();
            loop {
                cs.push(-g.framing(cur));
                match g.neighbors(cur).iter().find(|&&x| x != prev) {
                    Some(&next) => (prev, cur) = (cur, next),
                    None => break,
                }
            }
            if cs.iter().any(|&c| c < 2) {
                return Err(Error::Inapplicable("leg framing above −2".into()));
            }
            pairs.push(eval_continued_fraction(&cs));
        }
        SeifertData::new(-g.framing(node), pairs)
    }

    pub fn b(&self) -> i64 {
        self.b
    }

    pub fn pairs(&self) -> &[(i64, i64)] {
        &self.pairs
    }

    pub fn k(&self) -> usize {
        self.pairs.len()
    }

    pub fn a_product(&self) -> i64 {
        self.pairs.iter().map(|p| p.0).product()
    }

    /// `ā_i = A/a_i`.
    pub fn a_bar(&self) -> Vec<i64> {
        let a = self.a_product();
        self.pairs.iter().map(|p| a / p.0).collect()
    }

    /// `e = −b + Σ b_i/a_i`.
    pub fn euler(&self) -> Rat64 {
        self.pairs
            .iter()
            .fold(Rat64::from_integer(-self.b), |acc, &(a, b)| acc + Rat64::new(b, a))
    }

    /// `|H| = |−Ab + Σ ā_i b_i| = A·|e|`.
    pub fn h_order(&self) -> i64 {
        let a = self.a_product();
        let s: i64 = -a * self.b + self.a_bar().iter().zip(&self.pairs).map(|(x, p)| x * p.1).sum::<i64>();
        s.abs()
    }

    pub fn layout(&self) -> StarLayout {
        let mut next = 1;
        let legs = self
            .pairs
            .iter()
            .map(|&(a, b)| {
                let n = if (a, b) == (1, 0) {
                    0
                } else {
                    neg_continued_fraction(a, b).expect("validated").len()
                };
                let leg: Vec<usize> = (next..next + n).collect();
                next += n;
                leg
            })
            .collect();
        StarLayout { node: 0, legs }
    }

    /// Star plumbing: node framed `−b`, leg `i` framed `−c₁,…,−c_n` outwards.
    pub fn to_plumbing(&self) -> Result<PlumbingGraph> {
        if !self.euler().is_negative() {
            return Err(Error::NotNegativeDefinite);
        }
        let mut framings = vec![-self.b];
        let mut edges = Vec::new();
        for &(a, b) in &self.pairs {
            if (a, b) == (1, 0) {
                continue;
            }
            let mut prev = 0;
            for c in neg_continued_fraction(a, b)? {
                let v = framings.len();
                framings.push(-c);
                edges.push((prev, v));
                prev = v;
            }
        }
        PlumbingGraph::new(framings, edges)
    }

    /// `4Δ = 24λ − A(2 − k + Σ 1/a_i²)`.
    pub fn delta(&self) -> Result<Rat64> {
        let lambda = casson_walker64(&self.to_plumbing()?)?;
        Ok(delta_from_lambda(self, lambda))
    }

    /// `lcm(a_i)·|e|`, the order of `g₀`.
    pub fn g0_order_formula(&self) -> i64 {
        let l = self.pairs.iter().fold(1i64, |acc, p| acc.lcm(&p.0));
        l * self.h_order() / self.a_product()
    }
}

impl fmt::Display for SeifertData {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{};", self.b)?;
        for (a, b) in &self.pairs {
            write!(f, " {a}/{b}")?;
        }
        Ok(())
    }
}

fn delta_from_lambda(sd: &SeifertData, lambda: Rat64) -> Rat64 {
    let sum_inv: Rat64 = sd.pairs.iter().map(|p| Rat64::new(1, p.0 * p.0)).sum();
    let bracket = Rat64::from_integer(2 - sd.k() as i64) + sum_inv;
    (lambda * 24 - bracket * sd.a_product()) / 4
}

/// Homology classes of `g₀, g₁, …, g_k` on the star plumbing.
#[derive(Clone, Debug)]
pub struct StarClasses {
    pub homology: Homology,
    pub g0: GroupElement,
    pub legs: Vec<GroupElement>,
}

pub fn star_classes(sd: &SeifertData) -> Result<StarClasses> {
    let g = sd.to_plumbing()?;
    let homology = Homology::new(&g)?;
    let layout = sd.layout();
    let g0 = homology.basis_class(layout.node);
    let legs = layout
        .legs
        .iter()
        .map(|leg| match leg.last() {
            Some(&v) => homology.basis_class(v),
            None => g0.clone(),
        })
        .collect();
    Ok(StarClasses { homology, g0, legs })
}

/// Terms `(t-exponent, class, coefficient)` of the H-graded s.e. of the
/// integrand, restricted to `|exponent| <= bound`.
fn graded_integrand(sd: &SeifertData, cls: &StarClasses, bound: i64) -> BTreeMap<(i64, usize), Rational> {
    let grp = &cls.homology.group;
    let abar = sd.a_bar();
    let a = sd.a_product();
    let k = sd.k();
    let span: i64 = abar.iter().sum();
    // numerator: 2^k sign choices
    let mut numer: Vec<(i64, GroupElement, i64)> = vec![(0, grp.identity(), 1)];
    for i in 0..k {
        let mut next = Vec::with_capacity(numer.len() * 2);
        for (e, h, c) in &numer {
            next.push((e + abar[i], grp.add(h, &cls.legs[i]), *c));
            next.push((e - abar[i], grp.add(h, &grp.neg(&cls.legs[i])), -c));
        }
        numer = next;
    }
    let mut out: BTreeMap<(i64, usize), Rational> = BTreeMap::new();
    let lim = bound + span;
    for (m, cm) in SymTermStream::new(k as u32 - 2) {
        if (a * m).abs() > lim {
            break;
        }
        let gm = grp.mul(m, &cls.g0);
        for (e, h, c) in &numer {
            let n = e + a * m;
            if n.abs() > bound {
                continue;
            }
            let key = (n, grp.index_of(&grp.add(h, &gm)));
            let slot = out.entry(key).or_insert_with(Rational::zero);
            *slot += &cm * Rational::from_integer(BigInt::from(*c));
        }
    }
    out.retain(|_, c| !c.is_zero());
    out
}

/// `floor(sqrt(4A·(order − Δ)))`, the largest `|n|` surviving the Laplace map.
fn laplace_bound(a: i64, budget: Rat64) -> i64 {
    if budget.is_negative() {
        return -1;
    }
    let lim = budget * (4 * a);
    let mut n = (*lim.numer() as f64 / *lim.denom() as f64).sqrt() as i64;
    while Rat64::from_integer((n + 1) * (n + 1)) <= lim {
        n += 1;
    }
    while n >= 0 && Rat64::from_integer(n * n) > lim {
        n -= 1;
    }
    n
}

/// Precomputed reduction data for one Seifert manifold.
#[derive(Clone, Debug)]
pub struct Reduction {
    pub data: SeifertData,
    pub classes: StarClasses,
    pub delta: Rat64,
}

impl Reduction {
    pub fn new(sd: &SeifertData) -> Result<Self> {
        let classes = star_classes(sd)?;
        Ok(Reduction {
            data: sd.clone(),
            delta: sd.delta()?,
            classes,
        })
    }

    pub fn h_order(&self) -> i64 {
        self.classes.homology.group.order()
    }

    fn bound(&self, order: Rat64) -> i64 {
        laplace_bound(self.data.a_product(), order - self.delta)
    }

    /// s.e. of `f₀` with `|exponent| <= bound`.
    pub fn f0_expansion(&self, bound: i64) -> Laurent<Rational> {
        let mut f = Laurent::new();
        for ((n, _), c) in graded_integrand(&self.data, &self.classes, bound) {
            f.add_term(n, c);
        }
        f
    }

    /// `f_χ` for the `idx`-th character, over ℚ(ζ).
    pub fn twisted_integrand(&self, idx: usize, bound: i64) -> Laurent<Cyclotomic> {
        let grp = &self.classes.homology.group;
        let chi = &grp.characters()[idx];
        let mut f = Laurent::new();
        for ((n, h), c) in graded_integrand(&self.data, &self.classes, bound) {
            f.add_term(n, Cyclotomic::exp2pi(chi.eval(&grp.element_at(h))).scale(&c));
        }
        f
    }

    /// `Z₀(q^{|H|})` through `order`.
    pub fn z0(&self, order: Rat64) -> QSeries {
        let f = self.f0_expansion(self.bound(order));
        laplace(&f, self.data.a_product(), order - self.delta).shift(self.delta)
    }

    /// `Ẑ'_h(q^{|H|})` for every `h`, indexed like `group.elements()`.
    ///
    /// The character average is evaluated once per class difference:
    /// `Σ_χ χ(x − h)` is reduced in ℚ(ζ) and must be rational.
    pub fn zhat_prime_all(&self, order: Rat64) -> Result<Vec<QSeries>> {
        let grp = &self.classes.homology.group;
        let n = grp.order() as usize;
        let chars = grp.characters();
        let mut kernel = Vec::with_capacity(n);
        for y in grp.elements() {
            let sum = chars
                .iter()
                .fold(Cyclotomic::zero(), |acc, chi| acc + Cyclotomic::exp2pi(chi.eval(&y)));
            let r = sum
                .to_rational()
                .ok_or_else(|| Error::NonrationalResult(format!("character sum at {:?}", y.0)))?;
            kernel.push(r / Rational::from_integer(BigInt::from(n)));
        }
        let terms = graded_integrand(&self.data, &self.classes, self.bound(order));
        let elems = grp.elements();
        let mut per_h: Vec<Laurent<Rational>> = vec![Laurent::new(); n];
        for ((t, x), c) in &terms {
            for (hi, h) in elems.iter().enumerate() {
                let y = grp.add(&elems[*x], &grp.neg(h));
                let w = &kernel[grp.index_of(&y)];
                if !w.is_zero() {
                    per_h[hi].add_term(*t, c * w);
                }
            }
        }
        let a = self.data.a_product();
        Ok(per_h
            .iter()
            .map(|f| laplace(f, a, order - self.delta).shift(self.delta))
            .collect())
    }

    /// `Ẑ'_h(q^{|H|})` by the literal character average over ℚ(ζ).
    pub fn zhat_prime_by_characters(&self, h: &GroupElement, order: Rat64) -> Result<QSeries> {
        let grp = &self.classes.homology.group;
        let bound = self.bound(order);
        let mut acc: Laurent<Cyclotomic> = Laurent::new();
        for (idx, chi) in grp.characters().iter().enumerate() {
            let w = Cyclotomic::exp2pi(-chi.eval(h));
            for (n, c) in self.twisted_integrand(idx, bound).terms() {
                acc.add_term(n, c.clone() * w.clone());
            }
        }
        let inv = Rational::new(BigInt::one(), BigInt::from(grp.order()));
        let mut f = Laurent::new();
        for (n, c) in acc.terms() {
            let r = c
                .to_rational()
                .ok_or_else(|| Error::NonrationalResult(format!("coefficient of t^{n}")))?;
            f.add_term(n, r * &inv);
        }
        Ok(laplace(&f, self.data.a_product(), order - self.delta).shift(self.delta))
    }

    pub fn g0_order(&self) -> i64 {
        self.classes.homology.group.element_order(&self.classes.g0)
    }

    /// Upper bound on the number of nonzero `Ẑ'_h`: `2^k` when `g₀` is trivial.
    pub fn vanishing_bound(&self) -> i64 {
        if self.g0_order() == 1 {
            1 << self.data.k()
        } else {
            self.h_order()
        }
    }
}

pub fn reduce_z0(sd: &SeifertData, order: Rat64) -> Result<QSeries> {
    Ok(Reduction::new(sd)?.z0(order))
}

pub fn reduce_zhat_prime(sd: &SeifertData, h: &GroupElement, order: Rat64) -> Result<QSeries> {
    Reduction::new(sd)?.zhat_prime_by_characters(h, order)
}

pub fn reduce_zhat_prime_all(sd: &SeifertData, order: Rat64) -> Result<Vec<QSeries>> {
    Reduction::new(sd)?.zhat_prime_all(order)
}

pub fn g0_order(sd: &SeifertData) -> Result<i64> {
    Ok(Reduction::new(sd)?.g0_order())
}

pub fn vanishing_bound(sd: &SeifertData) -> Result<i64> {
    Ok(Reduction::new(sd)?.vanishing_bound())
}
