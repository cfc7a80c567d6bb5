//! Generators shared by the integration test targets.
#![allow(dead_code)]

use rand::Rng;
use zhat::plumbing::{matrix_of, PlumbingGraph};
use zhat::seifert::SeifertData;

/// Random negative-definite tree with `1..=max_s` vertices and `|det M| <= max_det`.
///
/// Framings lie in `[−deg − 2, −1]`, biased towards `−deg − 1`.
pub fn random_nd_tree<R: Rng>(rng: &mut R, max_s: usize, max_det: u64) -> PlumbingGraph {
    loop {
        let s = rng.gen_range(1..=max_s);
        let edges: Vec<(usize, usize)> = (1..s).map(|i| (rng.gen_range(0..i), i)).collect();
        let mut deg = vec![0i64; s];
        for &(a, b) in &edges {
            deg[a] += 1;
            deg[b] += 1;
        }
        let framings: Vec<i64> = deg
            .iter()
            .map(|&d| {
                if rng.gen_bool(0.8) {
                    -d - rng.gen_range(0..=2)
                } else {
                    rng.gen_range(-d - 2..=-1)
                }
                .min(-1)
            })
            .collect();
        let Ok(g) = PlumbingGraph::new(framings, edges) else {
            continue;
        };
        let m = matrix_of(&g);
        if !m.is_negative_definite() {
            continue;
        }
        let det: u64 = match m.order().try_into() {
            Ok(d) => d,
            Err(_) => continue,
        };
        if det <= max_det {
            return g;
        }
    }
}

fn sd(b: i64, pairs: &[(i64, i64)]) -> SeifertData {
    SeifertData::new(b, pairs.to_vec()).expect("valid Seifert data")
}

/// Negative-definite Seifert data with `k = 3..5` and `|H| <= 60`.
pub fn seifert_corpus() -> Vec<(&'static str, SeifertData)> {
    vec![
        ("e6", sd(2, &[(2, 1), (3, 2), (3, 2)])),
        ("sigma237", sd(1, &[(2, 1), (3, 1), (7, 1)])),
        ("thirteen", sd(1, &[(3, 1), (4, 1), (5, 1)])),
        ("vanishing2", sd(2, &[(2, 1), (2, 1), (2, 1)])),
        ("vanishing3", sd(2, &[(3, 2), (3, 2), (3, 1)])),
        ("vanishing4", sd(2, &[(4, 3), (4, 3), (4, 1)])),
        ("e8", sd(2, &[(2, 1), (3, 2), (5, 4)])),
        ("e7", sd(2, &[(2, 1), (3, 2), (4, 3)])),
        ("d5", sd(2, &[(2, 1), (2, 1), (3, 2)])),
        ("m2_3_11", sd(1, &[(2, 1), (3, 1), (11, 1)])),
        ("m2_5_7", sd(1, &[(2, 1), (5, 1), (7, 1)])),
        ("m3_3_4", sd(1, &[(3, 1), (3, 1), (4, 1)])),
        ("m3_3_3", sd(2, &[(3, 1), (3, 1), (3, 1)])),
        ("m2_4_5", sd(1, &[(2, 1), (4, 1), (5, 1)])),
        ("m2_3_5b", sd(2, &[(2, 1), (3, 1), (5, 2)])),
        ("m3_5_7", sd(2, &[(3, 2), (5, 3), (7, 3)])),
        ("m3_4_4", sd(1, &[(3, 1), (4, 1), (4, 1)])),
        ("k4_3333", sd(3, &[(3, 2), (3, 2), (3, 2), (3, 2)])),
        ("k4_2357", sd(3, &[(2, 1), (3, 2), (5, 4), (7, 6)])),
        ("k4_2222", sd(3, &[(2, 1), (2, 1), (2, 1), (2, 1)])),
        ("k4_2233", sd(2, &[(2, 1), (2, 1), (3, 1), (3, 1)])),
        ("k4_2335", sd(2, &[(2, 1), (3, 1), (3, 2), (5, 2)])),
        ("k5_22222", sd(3, &[(2, 1), (2, 1), (2, 1), (2, 1), (2, 1)])),
        ("k5_22233", sd(3, &[(2, 1), (2, 1), (2, 1), (3, 2), (3, 2)])),
        ("k5_22335", sd(2, &[(2, 1), (2, 1), (3, 1), (3, 1), (5, 1)])),
    ]
}

/// Groups of negative-definite data sharing `(a_i)` with distinct `(b, b_i)`.
pub fn seifert_pair_groups(max_h: i64) -> Vec<Vec<SeifertData>> {
    let tuples: [&[i64]; 6] = [
        &[2, 3, 5],
        &[2, 3, 7],
        &[2, 5, 7],
        &[3, 4, 5],
        &[2, 2, 3],
        &[2, 3, 3, 5],
    ];
    tuples
        .iter()
        .map(|a| {
            let mut out = Vec::new();
            for b in 1..=3 {
                for bs in b_choices(a) {
                    let pairs: Vec<(i64, i64)> = a.iter().copied().zip(bs).collect();
                    let Ok(d) = SeifertData::new(b, pairs) else { continue };
                    if *d.euler().numer() < 0 && d.h_order() <= max_h {
                        out.push(d);
                    }
                }
            }
            out
        })
        .collect()
}

fn b_choices(a: &[i64]) -> Vec<Vec<i64>> {
    let mut acc = vec![vec![]];
    for &ai in a {
        let opts: Vec<i64> = (1..ai).filter(|b| num_integer::gcd(*b, ai) == 1).collect();
        acc = acc
            .into_iter()
            .flat_map(|pre| {
                opts.iter().map(move |&b| {
                    let mut v = pre.clone();
                    v.push(b);
                    v
                })
            })
            .collect();
    }
    acc
}

/// Non-decreasing pairwise-coprime tuples of length `k` with entries in `1..=max`.
pub fn coprime_tuples(k: usize, max: i64) -> Vec<Vec<i64>> {
    fn go(k: usize, max: i64, start: i64, cur: &mut Vec<i64>, out: &mut Vec<Vec<i64>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for x in start..=max {
            if cur.iter().all(|&y| num_integer::gcd(x, y) == 1) {
                cur.push(x);
                go(k, max, x, cur, out);
                cur.pop();
            }
        }
    }
    let mut out = Vec::new();
    go(k, max, 1, &mut Vec::new(), &mut out);
    out
}
