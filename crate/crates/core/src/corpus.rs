//! Reference graphs, Seifert data and printed series prefixes.

use crate::plumbing::PlumbingGraph;
use crate::seifert::SeifertData;
use crate::{QSeries, Rat64, Rational};
use num_bigint::BigInt;

fn graph(framings: &[i64], edges: &[(usize, usize)]) -> PlumbingGraph {
    PlumbingGraph::new(framings.to_vec(), edges.to_vec()).expect("reference graph is a tree")
}

/// E₆ Dynkin graph: centre 0, legs 0–3, 0–4–1, 0–5–2, all framed −2.
pub fn e6() -> PlumbingGraph {
    graph(&[-2; 6], &[(0, 3), (0, 4), (0, 5), (1, 4), (2, 5)])
}

/// E₈ Dynkin graph (Poincaré sphere): centre 0, legs of length 1, 2 and 4.
pub fn e8() -> PlumbingGraph {
    graph(&[-2; 8], &[(0, 1), (0, 2), (2, 3), (0, 4), (4, 5), (5, 6), (6, 7)])
}

/// D_n Dynkin graph with all framings −2; requires `n >= 4`.
pub fn d_n(n: usize) -> PlumbingGraph {
    assert!(n >= 4);
    // chain 0–1–…–(n−3), fork at n−3 with extra leaves n−2 and n−1
    let mut edges: Vec<(usize, usize)> = (0..n - 3).map(|i| (i, i + 1)).collect();
    edges.push((n - 3, n - 2));
    edges.push((n - 3, n - 1));
    graph(&vec![-2; n], &edges)
}

/// Lens space L(p,1): one vertex framed −p.
pub fn lens(p: i64) -> PlumbingGraph {
    graph(&[-p], &[])
}

/// Σ(2,3,7) star: leaves −7, −3, −2 on a −1 centre (vertex 3).
pub fn e12() -> PlumbingGraph {
    graph(&[-7, -3, -2, -1], &[(0, 3), (1, 3), (2, 3)])
}

/// The eight-vertex H-shaped integral homology sphere.
///
/// Index `i` is vertex `i + 1` of the usual picture: nodes are 2 and 4,
/// leaves 0, 1, 6, 7 and joints 3, 5.
pub fn y1() -> PlumbingGraph {
    graph(
        &[-2, -3, -1, -17, -1, -3, -2, -2],
        &[(0, 2), (1, 2), (2, 3), (3, 4), (4, 5), (5, 6), (4, 7)],
    )
}

/// Ten-vertex graph with `H = ℤ/17` sharing the splice diagram of [`y1`].
pub fn y2() -> PlumbingGraph {
    graph(
        &[-2, -2, -3, -2, -2, -2, -2, -2, -2, -2],
        &[(0, 1), (1, 2), (2, 4), (2, 3), (4, 5), (4, 6), (6, 7), (7, 8), (8, 9)],
    )
}

pub fn e6_seifert() -> SeifertData {
    SeifertData::new(2, vec![(2, 1), (3, 2), (3, 2)]).expect("valid data")
}

pub fn sigma_2_3_7() -> SeifertData {
    SeifertData::new(1, vec![(2, 1), (3, 1), (7, 1)]).expect("valid data")
}

/// `M(2; (n,n−1), (n,n−1), (n,1))`, with `|H| = n²` and trivial `g₀`.
pub fn vanishing_family(n: i64) -> SeifertData {
    SeifertData::new(2, vec![(n, n - 1), (n, n - 1), (n, 1)]).expect("valid data")
}

/// `M(1; (3,1), (4,1), (5,1))`, with `|H| = 13` generated by `g₀`.
pub fn thirteen() -> SeifertData {
    SeifertData::new(1, vec![(3, 1), (4, 1), (5, 1)]).expect("valid data")
}

fn printed(prefactor: Rat64, scale: Rational, terms: &[(i64, i64)], order: Rat64) -> QSeries {
    QSeries::from_terms(
        terms.iter().map(|&(e, c)| {
            (
                prefactor + Rat64::from_integer(e),
                Rational::from_integer(BigInt::from(c)) * &scale,
            )
        }),
        order,
    )
}

fn one() -> Rational {
    Rational::from_integer(1.into())
}

/// Printed prefix of `Ẑ₀(E₆)`, known through `q^56`.
pub fn e6_zhat0() -> QSeries {
    printed(
        Rat64::from_integer(0),
        one(),
        &[
            (-1, 1),
            (0, -1),
            (1, 1),
            (4, 1),
            (6, -1),
            (11, -1),
            (14, 1),
            (21, 1),
            (25, -1),
            (34, -1),
            (39, 1),
            (50, 1),
            (56, -1),
        ],
        Rat64::from_integer(56),
    )
}

/// Printed prefix of `Ẑ₁(E₆) = Ẑ₂(E₆)`, known through `q^{-2/3+108}`.
pub fn e6_zhat1() -> QSeries {
    let pre = Rat64::new(-2, 3);
    printed(
        pre,
        one(),
        &[
            (0, -1),
            (3, 1),
            (9, -1),
            (18, 1),
            (30, -1),
            (45, 1),
            (63, -1),
            (84, 1),
            (108, -1),
        ],
        pre + Rat64::from_integer(108),
    )
}

/// Printed prefix of `Z₀(E₆)(q³)`, known through `q^75`.
pub fn e6_z0_cubed() -> QSeries {
    printed(
        Rat64::from_integer(0),
        one(),
        &[
            (-3, 1),
            (-2, -2),
            (0, -1),
            (3, 1),
            (7, 2),
            (12, 1),
            (18, -1),
            (25, -2),
            (33, -1),
            (42, 1),
            (52, 2),
            (63, 1),
            (75, -1),
        ],
        Rat64::from_integer(75),
    )
}

/// Printed Laplace image `q^{1/8}(1 − 2q − …)` of the E₆ symmetric expansion.
pub fn e6_laplace_f0() -> QSeries {
    let pre = Rat64::new(1, 8);
    printed(
        pre,
        one(),
        &[
            (0, 1),
            (1, -2),
            (3, -1),
            (6, 1),
            (10, 2),
            (15, 1),
            (21, -1),
            (28, -2),
            (36, -1),
            (45, 1),
            (55, 2),
            (66, 1),
            (78, -1),
        ],
        pre + Rat64::from_integer(78),
    )
}

/// Printed prefix `½q^{7/2}(−1 + q − …)` of `Z₀(Y₁)`, known through `q^{7/2+17}`.
pub fn y1_z0() -> QSeries {
    let pre = Rat64::new(7, 2);
    printed(
        pre,
        Rational::new(1.into(), 2.into()),
        &[
            (0, -1),
            (1, 1),
            (2, -2),
            (3, 1),
            (5, 1),
            (9, 3),
            (10, 1),
            (14, -1),
            (16, -1),
            (17, -1),
        ],
        pre + Rat64::from_integer(17),
    )
}

/// Printed bracket `1 − q + q² + q⁵ − q⁷` of `q·Ẑ₀(E₆)`, known through `q^7`.
pub fn e6_voa_bracket() -> QSeries {
    printed(
        Rat64::from_integer(0),
        one(),
        &[(0, 1), (1, -1), (2, 1), (5, 1), (7, -1)],
        Rat64::from_integer(7),
    )
}

/// Printed matrix `adj(−M)` of [`y1`] in the order
/// nodes (2, 4), leaves (0, 1, 7, 6), joints (3, 5).
pub fn y1_adjugate_printed() -> (Vec<usize>, Vec<Vec<i64>>) {
    (
        vec![2, 4, 0, 1, 7, 6, 3, 5],
        vec![
            vec![42, 60, 21, 14, 30, 12, 6, 24],
            vec![60, 110, 30, 20, 55, 22, 10, 44],
            vec![21, 30, 11, 7, 15, 6, 3, 12],
            vec![14, 20, 7, 5, 10, 4, 2, 8],
            vec![30, 55, 15, 10, 28, 11, 5, 22],
            vec![12, 22, 6, 4, 11, 5, 2, 9],
            vec![6, 10, 3, 2, 5, 2, 1, 4],
            vec![24, 44, 12, 8, 22, 9, 4, 18],
        ],
    )
}
