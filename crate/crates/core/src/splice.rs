//! Splice diagrams, the adjugate identity and the Casson–Walker invariant.
//!
//! The weight at `v` on the edge `v–w` is `det(−M')` where `M'` is the
//! plumbing matrix of the component of `Γ ∖ (v–w)` containing `w`.
//! Empty components have determinant 1.

use crate::error::{Error, Result};
use crate::plumbing::{matrix_of, PlumbingGraph, Role};
use crate::zhat::Zhat;
use crate::{QSeries, Rat64, Rational};
use num_bigint::BigInt;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};
use std::collections::{BTreeMap, HashMap};
use std::fmt;

/// Determinants of `−M` on every branch of the tree, memoised per directed edge.
struct BranchDets<'a> {
    g: &'a PlumbingGraph,
    /// `(u, p)` ↦ det of the branch at `u` away from `p`
    full: HashMap<(usize, usize), BigInt>,
}

impl<'a> BranchDets<'a> {
    fn new(g: &'a PlumbingGraph) -> Self {
        BranchDets {
            g,
            full: HashMap::new(),
        }
    }

    /// det of the branch at `u` with `u` itself removed.
    fn punctured(&mut self, u: usize, p: Option<usize>) -> BigInt {
        let children: Vec<usize> = self.children(u, p);
        children
            .into_iter()
            .fold(BigInt::one(), |acc, c| acc * self.branch(c, Some(u)))
    }

    fn children(&self, u: usize, p: Option<usize>) -> Vec<usize> {
        self.g.neighbors(u).iter().copied().filter(|&c| Some(c) != p).collect()
    }

    /// det(−M) of the branch at `u` away from `p` (whole tree when `p` is None).
    fn branch(&mut self, u: usize, p: Option<usize>) -> BigInt {
        if let Some(pp) = p {
            if let Some(d) = self.full.get(&(u, pp)) {
                return d.clone();
            }
        }
        let children = self.children(u, p);
        let dets: Vec<BigInt> = children.iter().map(|&c| self.branch(c, Some(u))).collect();
        let prod_all = dets.iter().fold(BigInt::one(), |a, d| a * d);
        // expansion along u: w_u·∏D_c − Σ_c D°_c·∏_{c'≠c} D_{c'}
        let mut d = BigInt::from(-self.g.framing(u)) * &prod_all;
        for (i, &c) in children.iter().enumerate() {
            let others = dets
                .iter()
                .enumerate()
                .filter(|&(j, _)| j != i)
                .fold(BigInt::one(), |a, (_, x)| a * x);
            d -= self.punctured(c, Some(u)) * others;
        }
        if let Some(pp) = p {
            self.full.insert((u, pp), d.clone());
        }
        d
    }
}

/// Weight at `v` on every edge `v–w`, keyed by `(v, w)`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct MaximalSpliceDiagram {
    pub weights: BTreeMap<(usize, usize), BigInt>,
}

impl MaximalSpliceDiagram {
    pub fn weight(&self, v: usize, w: usize) -> Option<&BigInt> {
        self.weights.get(&(v, w))
    }

    /// `N_ab`: product of the weights adjacent to, but not on, the path `a…b`.
    pub fn path_product(&self, g: &PlumbingGraph, a: usize, b: usize) -> BigInt {
        let path = g.path(a, b);
        let mut acc = BigInt::one();
        for &v in &path {
            for &w in g.neighbors(v) {
                if !path.contains(&w) {
                    acc *= &self.weights[&(v, w)];
                }
            }
        }
        acc
    }
}

pub fn maximal_splice(g: &PlumbingGraph) -> MaximalSpliceDiagram {
    let mut dets = BranchDets::new(g);
    let mut weights = BTreeMap::new();
    for &(a, b) in g.edges() {
        weights.insert((a, b), dets.branch(b, Some(a)));
        weights.insert((b, a), dets.branch(a, Some(b)));
    }
    MaximalSpliceDiagram { weights }
}

/// `det(−M)` computed by the same branch recursion.
pub fn tree_determinant(g: &PlumbingGraph) -> BigInt {
    if g.s() == 0 {
        return BigInt::one();
    }
    BranchDets::new(g).branch(0, None)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SpliceEdge {
    pub ends: (usize, usize),
    /// weight at each end; present only at node ends
    pub weights: (Option<BigInt>, Option<BigInt>),
}

/// Nodes and leaves of the plumbing tree with joints contracted.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SpliceDiagram {
    pub vertices: Vec<(usize, String)>,
    pub edges: Vec<SpliceEdge>,
}

fn role_tag(r: Role) -> &'static str {
    match r {
        Role::Isolated => "isolated",
        Role::Leaf => "leaf",
        Role::Joint => "joint",
        Role::Node => "node",
    }
}

impl SpliceDiagram {
    pub fn nodes(&self) -> Vec<usize> {
        self.vertices
            .iter()
            .filter(|(_, t)| t == "node")
            .map(|&(v, _)| v)
            .collect()
    }

    /// Sorted weights around node `v`.
    pub fn node_weights(&self, v: usize) -> Vec<BigInt> {
        let mut out = Vec::new();
        for e in &self.edges {
            if e.ends.0 == v {
                out.extend(e.weights.0.clone());
            }
            if e.ends.1 == v {
                out.extend(e.weights.1.clone());
            }
        }
        out.sort();
        out
    }

    /// Label-independent summary: sorted node weight lists and sorted
    /// weight pairs of node–node edges.
    pub fn signature(&self) -> (Vec<Vec<BigInt>>, Vec<(BigInt, BigInt)>) {
        let mut nodes: Vec<Vec<BigInt>> = self.nodes().into_iter().map(|v| self.node_weights(v)).collect();
        nodes.sort();
        let mut links: Vec<(BigInt, BigInt)> = self
            .edges
            .iter()
            .filter_map(|e| match (&e.weights.0, &e.weights.1) {
                (Some(x), Some(y)) => Some(if x <= y {
                    (x.clone(), y.clone())
                } else {
                    (y.clone(), x.clone())
                }),
                _ => None,
            })
            .collect();
        links.sort();
        (nodes, links)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("splice diagram serialises")
    }

    pub fn render(&self) -> String {
        let mut out = String::new();
        for (v, tag) in &self.vertices {
            if tag == "node" {
                let w: Vec<String> = self.node_weights(*v).iter().map(|x| x.to_string()).collect();
                out.push_str(&format!("node {v} weights ({})\n", w.join(", ")));
            } else {
                out.push_str(&format!("{tag} {v}\n"));
            }
        }
        for e in &self.edges {
            let side = |w: &Option<BigInt>| w.as_ref().map(|x| format!("{x}")).unwrap_or_default();
            out.push_str(&format!(
                "{} ({})----({}) {}\n",
                e.ends.0,
                side(&e.weights.0),
                side(&e.weights.1),
                e.ends.1
            ));
        }
        out
    }
}

impl fmt::Display for SpliceDiagram {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.render())
    }
}

pub fn splice_of(g: &PlumbingGraph) -> SpliceDiagram {
    let max = maximal_splice(g);
    let roles = g.roles();
    let kept: Vec<usize> = (0..g.s()).filter(|&v| roles[v] != Role::Joint).collect();
    let vertices = kept.iter().map(|&v| (v, role_tag(roles[v]).to_string())).collect();
    let mut edges = Vec::new();
    for &v in &kept {
        for &first in g.neighbors(v) {
            // walk through joints to the next kept vertex
            let (mut prev, mut cur) = (v, first);
            while roles[cur] == Role::Joint {
                let next = g
                    .neighbors(cur)
                    .iter()
                    .copied()
                    .find(|&x| x != prev)
                    .expect("joint has two neighbours");
                prev = cur;
                cur = next;
            }
            if v < cur {
                let at = |x: usize, toward: usize| (roles[x] == Role::Node).then(|| max.weights[&(x, toward)].clone());
                edges.push(SpliceEdge {
                    ends: (v, cur),
                    weights: (at(v, first), at(cur, prev)),
                });
            }
        }
    }
    edges.sort_by_key(|e| e.ends);
    SpliceDiagram { vertices, edges }
}

/// Outcome of checking `N_ab = adj(−M)_ab` for every pair.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct AdjugateCheck {
    pub holds: bool,
    /// first violating `(a, b, adj(−M)_ab, N_ab)`
    pub witness: Option<(usize, usize, BigInt, BigInt)>,
}

pub fn verify_adjugate(g: &PlumbingGraph) -> AdjugateCheck {
    let m = matrix_of(g);
    let s = g.s();
    let sign = if s % 2 == 1 { BigInt::one() } else { -BigInt::one() };
    let max = maximal_splice(g);
    for a in 0..s {
        for b in a..s {
            let expected = m.adjugate().get(a, b) * &sign;
            let got = max.path_product(g, a, b);
            if expected != got {
                return AdjugateCheck {
                    holds: false,
                    witness: Some((a, b, expected, got)),
                };
            }
        }
    }
    AdjugateCheck {
        holds: true,
        witness: None,
    }
}

/// `λ = −(|H|/24)·(Σ m_v + 3s + Σ (2 − δ_v)(M⁻¹)_vv)`.
pub fn casson_walker(g: &PlumbingGraph) -> Result<Rational> {
    let m = matrix_of(g);
    if !m.is_negative_definite() {
        return Err(Error::NotNegativeDefinite);
    }
    let inv = m.inverse().ok_or(Error::NotNegativeDefinite)?;
    let s = g.s();
    let mut total = Rational::from_integer(BigInt::from(g.framings().iter().sum::<i64>() + 3 * s as i64));
    for v in 0..s {
        let w = 2 - g.degree(v) as i64;
        if w != 0 {
            total += inv.get(v, v) * Rational::from_integer(BigInt::from(w));
        }
    }
    Ok(-total * Rational::new(m.order(), BigInt::from(24)))
}

fn to_rat64(r: &Rational) -> Result<Rat64> {
    match (r.numer().to_i64(), r.denom().to_i64()) {
        (Some(n), Some(d)) => Ok(Rat64::new(n, d)),
        _ => Err(Error::Internal(format!("{r} exceeds 64 bits"))),
    }
}

pub fn casson_walker64(g: &PlumbingGraph) -> Result<Rat64> {
    to_rat64(&casson_walker(g)?)
}

/// `q^{−6λ}·Z₀(q^{|H|})`, truncated at `order` in its own exponent units.
pub fn normalized_z0(g: &PlumbingGraph, order: Rat64) -> Result<QSeries> {
    let z = Zhat::new(g)?;
    normalized_z0_with(&z, order)
}

pub fn normalized_z0_with(z: &Zhat, order: Rat64) -> Result<QSeries> {
    let six_lambda = casson_walker64(z.graph())? * 6;
    let h = Rat64::from_integer(z.order_h());
    let inner = (order + six_lambda) / h;
    Ok(z.z0(inner)?.scale_exponents(h).shift(-six_lambda))
}

/// Checks that every entry of `adj(−M)` is positive, as the splice weights force.
pub fn adjugate_positive(g: &PlumbingGraph) -> bool {
    let m = matrix_of(g);
    let sign = if g.s() % 2 == 1 { BigInt::one() } else { -BigInt::one() };
    m.adjugate()
        .to_rows()
        .iter()
        .flatten()
        .all(|x| (x * &sign).is_positive() && !x.is_zero())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corpus;

    fn ints(v: &[i64]) -> Vec<BigInt> {
        v.iter().map(|&x| BigInt::from(x)).collect()
    }

    #[test]
    fn tree_det_matches_bareiss() {
        for g in [corpus::e6(), corpus::e8(), corpus::y1(), corpus::y2(), corpus::e12()] {
            let m = matrix_of(&g);
            let neg = m.entries().map(|x| -x);
            assert_eq!(tree_determinant(&g), neg.det_bareiss());
        }
    }

    #[test]
    fn y1_maximal_weights() {
        let g = corpus::y1();
        let max = maximal_splice(&g);
        let w = |a: usize, b: usize| max.weight(a, b).unwrap().to_string().parse::<i64>().unwrap();
        // node 2: towards leaves 0, 1 and the joint 3
        assert_eq!((w(2, 0), w(2, 1), w(2, 3)), (2, 3, 7));
        // node 4: towards joint 3, joint 5 and leaf 7
        assert_eq!((w(4, 3), w(4, 5), w(4, 7)), (11, 5, 2));
        assert_eq!((w(3, 4), w(4, 3)), (1, 11));
        assert_eq!((w(5, 6), w(6, 5)), (2, 5));
        assert_eq!((w(4, 7), w(7, 4)), (2, 28));
    }

    #[test]
    fn two_vertex_path() {
        let g = PlumbingGraph::new(vec![-2, -2], vec![(0, 1)]).unwrap();
        let max = maximal_splice(&g);
        assert_eq!(max.weight(0, 1), Some(&BigInt::from(2)));
        assert_eq!(max.weight(1, 0), Some(&BigInt::from(2)));
        let single = corpus::lens(5);
        assert!(maximal_splice(&single).weights.is_empty());
        assert!(verify_adjugate(&single).holds);
    }

    #[test]
    fn star_weights() {
        let d = splice_of(&corpus::e6());
        assert_eq!(d.node_weights(0), ints(&[2, 3, 3]));
        let d = splice_of(&corpus::e12());
        assert_eq!(d.node_weights(3), ints(&[2, 3, 7]));
    }

    #[test]
    fn y1_y2_share_splice_diagram() {
        let a = splice_of(&corpus::y1());
        let b = splice_of(&corpus::y2());
        assert_eq!(a.signature(), b.signature());
        assert_eq!(a.node_weights(2), ints(&[2, 3, 7]));
        assert_eq!(a.node_weights(4), ints(&[2, 5, 11]));
    }

    #[test]
    fn y1_adjugate_matches_printed() {
        let g = corpus::y1();
        assert!(verify_adjugate(&g).holds);
        let (order, rows) = corpus::y1_adjugate_printed();
        let max = maximal_splice(&g);
        for (i, &a) in order.iter().enumerate() {
            for (j, &b) in order.iter().enumerate() {
                assert_eq!(max.path_product(&g, a, b), BigInt::from(rows[i][j]), "entry ({a},{b})");
            }
        }
    }

    #[test]
    fn casson_walker_values() {
        let r = |n: i64, d: i64| Rational::new(n.into(), d.into());
        assert_eq!(casson_walker(&corpus::y1()).unwrap(), r(-4, 1));
        assert_eq!(casson_walker(&corpus::y2()).unwrap(), r(-9, 1));
        assert_eq!(casson_walker(&corpus::e6()).unwrap(), r(-11, 12));
    }
}
