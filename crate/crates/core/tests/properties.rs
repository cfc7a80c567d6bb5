mod common;

use num_bigint::BigInt;
use num_rational::Rational64;
use num_traits::Zero;
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use std::collections::BTreeMap;
use zhat::exactseries::{euler_inverse, euler_product, factor_terms, parse_series_json};
use zhat::flatconn::{component_census, spectrum_3fiber};
use zhat::homology::smith;
use zhat::plumbing::{matrix_of, neumann_move, NeumannMove, PlumbingGraph};
use zhat::seifert::{eval_continued_fraction, neg_continued_fraction, SeifertData};
use zhat::splice::{casson_walker, normalized_z0, verify_adjugate};
use zhat::zhat::Zhat;
use zhat::{IntMatrix, QSeries, Rational};

fn r(n: i64, d: i64) -> Rational64 {
    Rational64::new(n, d)
}

fn rat(n: i64, d: i64) -> Rational {
    Rational::new(n.into(), d.into())
}

prop_compose! {
    fn series()(terms in prop::collection::vec((-8i64..40, -5i64..6, 1i64..4), 0..12),
                denom in 1i64..5, order in 5i64..12) -> QSeries {
        QSeries::from_terms(
            terms.into_iter().map(|(e, c, d)| (r(e, denom), rat(c, d))),
            r(order, 1),
        )
    }
}

fn tree(seed: u64, max_s: usize, max_det: u64) -> PlumbingGraph {
    common::random_nd_tree(&mut ChaCha8Rng::seed_from_u64(seed), max_s, max_det)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn ring_laws(a in series(), b in series(), c in series()) {
        prop_assert_eq!(a.add(&b), b.add(&a));
        prop_assert_eq!(a.mul(&b), b.mul(&a));
        prop_assert_eq!(a.add(&b).add(&c), a.add(&b.add(&c)));
        prop_assert_eq!(a.mul(&b).mul(&c), a.mul(&b.mul(&c)));
        prop_assert_eq!(a.mul(&b.add(&c)), a.mul(&b).add(&a.mul(&c)));
        prop_assert!(a.sub(&a).is_empty());
    }

    #[test]
    fn exponent_rescaling_round_trips(a in series(), n in 1i64..6, d in 1i64..6, sh in -7i64..7) {
        let k = r(n, d);
        prop_assert_eq!(a.scale_exponents(k).scale_exponents(k.recip()), a.clone());
        prop_assert_eq!(a.shift(r(sh, 3)).shift(r(-sh, 3)), a);
    }

    #[test]
    fn json_round_trip(a in series()) {
        let text = a.to_json().to_string();
        prop_assert_eq!(parse_series_json(&text).unwrap(), a);
    }

    #[test]
    fn euler_product_inverts(n in 1i64..80) {
        let o = r(n, 1);
        let one = euler_inverse(o).mul(&euler_product(o));
        prop_assert_eq!(one, QSeries::one(o));
    }

    #[test]
    fn sym_expansion_inverts_factor(n in 0i32..9, bound in 4i64..40) {
        let mut prod: BTreeMap<i64, Rational> = BTreeMap::new();
        for (e, c) in factor_terms(-n, bound + n as i64) {
            for (f, d) in factor_terms(n, n as i64) {
                *prod.entry(e + f).or_default() += &c * &d;
            }
        }
        for (e, c) in prod.into_iter().filter(|(e, _)| e.abs() <= bound) {
            prop_assert_eq!(c, rat((e == 0) as i64, 1), "n = {}, exponent {}", n, e);
        }
    }

    #[test]
    fn smith_form(rows in prop::collection::vec(prop::collection::vec(-6i64..7, 4), 1..5)) {
        let cols = 4;
        let m = IntMatrix::from_i64_rows(&rows);
        let snf = smith(&m);
        prop_assert_eq!(snf.u.mul(&m).mul(&snf.v), snf.d.clone());
        prop_assert_eq!(snf.u.mul(&snf.u_inv), IntMatrix::identity(rows.len()));
        let det_v = snf.v.det_bareiss();
        prop_assert!(det_v == BigInt::from(1) || det_v == BigInt::from(-1));
        for i in 0..snf.d.rows() {
            for j in 0..cols {
                if i != j {
                    prop_assert!(snf.d.get(i, j).is_zero());
                }
            }
        }
        let ds = snf.divisors();
        for w in ds.windows(2) {
            if !w[1].is_zero() {
                prop_assert!(!w[0].is_zero() && (&w[1] % &w[0]).is_zero());
            }
        }
    }

    #[test]
    fn continued_fraction_round_trip(a in 2i64..200, b in 1i64..200) {
        prop_assume!(b < a && num_integer::gcd(a, b) == 1);
        let cf = neg_continued_fraction(a, b).unwrap();
        prop_assert!(cf.iter().all(|&c| c >= 2));
        prop_assert_eq!(eval_continued_fraction(&cf), (a, b));
    }

    #[test]
    fn adjugate_identity(seed in any::<u64>()) {
        let g = tree(seed, 12, u64::MAX);
        let c = verify_adjugate(&g);
        prop_assert!(c.holds, "{:?} {:?}", g.to_text(), c.witness);
    }

    #[test]
    fn coset_partition_and_weyl_symmetry(seed in any::<u64>()) {
        let g = tree(seed, 8, 40);
        let o = r(10, 1);
        let z = Zhat::new(&g).unwrap();
        let fam = z.zhat_all(o, None).unwrap();
        let z0 = z.z0(o).unwrap();
        prop_assert_eq!(fam.iter().fold(QSeries::zero(o), |acc, s| acc.add(s)), z0.clone());
        let primes = z.zhat_prime_all(o).unwrap();
        prop_assert_eq!(primes.iter().fold(QSeries::zero(o), |acc, s| acc.add(s)), z0);
        let conj = &z.homology().spinc.conjugate;
        for (b, s) in fam.iter().enumerate() {
            prop_assert_eq!(s, &fam[conj[b]]);
        }
        let h = r(z.order_h(), 1);
        let classes: Vec<Rational64> = fam
            .iter()
            .filter_map(|s| s.exponent_class())
            .map(|c| (c * h) - (c * h).floor())
            .collect();
        prop_assert!(classes.windows(2).all(|w| w[0] == w[1]), "{:?}", classes);
    }

    #[test]
    fn character_route_matches_buckets(seed in any::<u64>()) {
        let g = tree(seed, 6, 20);
        let o = r(8, 1);
        let z = Zhat::new(&g).unwrap();
        let all = z.zhat_prime_all(o).unwrap();
        for (i, h) in z.homology().group.elements().iter().enumerate() {
            prop_assert_eq!(&z.zhat_prime_via_characters(h, o).unwrap(), &all[i]);
        }
    }

    #[test]
    fn blow_up_invariance(seed in any::<u64>(), pick in any::<prop::sample::Index>(), leaf in any::<bool>()) {
        let g = tree(seed, 7, 40);
        let mv = if leaf || g.edges().is_empty() {
            NeumannMove::BlowUpLeaf { at: g.label(pick.index(g.s())), sign: -1 }
        } else {
            let (a, b) = g.edges()[pick.index(g.edges().len())];
            NeumannMove::BlowUpEdge { between: (g.label(a), g.label(b)), sign: -1 }
        };
        let g2 = neumann_move(&g, &mv).unwrap();
        prop_assert_eq!(matrix_of(&g).order(), matrix_of(&g2).order());
        prop_assert_eq!(casson_walker(&g).unwrap(), casson_walker(&g2).unwrap());
        let o = r(10, 1);
        prop_assert_eq!(Zhat::new(&g).unwrap().z0(o).unwrap(), Zhat::new(&g2).unwrap().z0(o).unwrap());
        let new_vertex = g2.label(g2.s() - 1);
        let back = neumann_move(&g2, &NeumannMove::BlowDown { vertex: new_vertex }).unwrap();
        prop_assert_eq!(back.framings(), g.framings());
    }

    #[test]
    fn seifert_round_trip(b in 1i64..4, pairs in prop::collection::vec((2i64..9, 1i64..9), 3..6)) {
        let pairs: Vec<(i64, i64)> = pairs.into_iter().map(|(a, x)| (a, 1 + (x - 1) % (a - 1))).collect();
        prop_assume!(pairs.iter().all(|&(a, x)| num_integer::gcd(a, x) == 1));
        let sd = SeifertData::new(b, pairs).unwrap();
        prop_assume!(*sd.euler().numer() < 0);
        let g = sd.to_plumbing().unwrap();
        prop_assert_eq!(matrix_of(&g).order(), BigInt::from(sd.h_order()));
        let back = SeifertData::from_plumbing(&g).unwrap();
        prop_assert_eq!(back.to_string(), sd.to_string());
    }

    #[test]
    fn census_counts_are_integral(a in prop::collection::vec(1i64..14, 3..6)) {
        prop_assume!((0..a.len()).all(|i| (i + 1..a.len()).all(|j| num_integer::gcd(a[i], a[j]) == 1)));
        let c = component_census(&a).unwrap();
        let total: i64 = c.rows.iter().map(|row| row.contribution()).sum();
        prop_assert_eq!(total, c.lambda_p);
        if a.len() == 3 {
            let spec = spectrum_3fiber(a[0], a[1], a[2]).unwrap();
            let mut mirrored: Vec<Rational64> = spec.iter().map(|s| r(3, 1) - s).collect();
            mirrored.sort();
            prop_assert_eq!(mirrored, spec);
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(16))]

    #[test]
    fn splice_normalisation_ignores_b(group in 0usize..6, i in any::<prop::sample::Index>(), j in any::<prop::sample::Index>()) {
        let groups = common::seifert_pair_groups(60);
        let members = &groups[group];
        prop_assume!(members.len() >= 2);
        let (x, y) = (&members[i.index(members.len())], &members[j.index(members.len())]);
        let o = r(40, 1);
        let nx = normalized_z0(&x.to_plumbing().unwrap(), o).unwrap();
        let ny = normalized_z0(&y.to_plumbing().unwrap(), o).unwrap();
        prop_assert_eq!(nx, ny, "{} vs {}", x, y);
    }
}
