use num_rational::Rational64;
use zhat::corpus;
use zhat::seifert::Reduction;
use zhat::splice::normalized_z0;
use zhat::zhat::Zhat;
use zhat::QSeries;

fn r(n: i64, d: i64) -> Rational64 {
    Rational64::new(n, d)
}

fn e6_by_c1(order: Rational64) -> (QSeries, QSeries, QSeries) {
    let z = Zhat::new(&corpus::e6()).unwrap();
    let all = z.zhat_all(order, None).unwrap();
    let h = z.homology();
    let idx0 = h.spinc.c1.iter().position(|c| h.group.is_identity(c)).unwrap();
    let others: Vec<usize> = (0..all.len()).filter(|&i| i != idx0).collect();
    (all[idx0].clone(), all[others[0]].clone(), all[others[1]].clone())
}

#[test]
fn e6_zhat_prefixes() {
    let (z0, z1, z2) = e6_by_c1(r(110, 1));
    assert!(z0.agrees_with(&corpus::e6_zhat0()), "{z0}");
    assert!(z1.agrees_with(&corpus::e6_zhat1()), "{z1}");
    assert_eq!(z1, z2);
}

#[test]
fn e6_z0_cubed() {
    let z = Zhat::new(&corpus::e6()).unwrap();
    let s = z.z0(r(26, 1)).unwrap().scale_exponents(r(3, 1));
    assert!(s.agrees_with(&corpus::e6_z0_cubed()), "{s}");
}

#[test]
fn y1_z0_prefix() {
    let z = Zhat::new(&corpus::y1()).unwrap();
    let s = z.z0(r(22, 1)).unwrap();
    assert!(s.agrees_with(&corpus::y1_z0()), "{s}");
}

#[test]
fn y1_y2_normalized_agree() {
    let a = normalized_z0(&corpus::y1(), r(60, 1)).unwrap();
    let b = normalized_z0(&corpus::y2(), r(60, 1)).unwrap();
    assert_eq!(a.valuation(), r(55, 2));
    assert!(a.len() >= 10);
    assert_eq!(a, b);
}

#[test]
fn e6_reduction_matches_plumbing() {
    let sd = corpus::e6_seifert();
    let red = Reduction::new(&sd).unwrap();
    let z = Zhat::new(&sd.to_plumbing().unwrap()).unwrap();
    let o = r(120, 1);
    let fast = red.z0(o);
    let slow = z.z0(o / 3).unwrap().scale_exponents(r(3, 1));
    assert_eq!(fast, slow);
    let fast_all = red.zhat_prime_all(o).unwrap();
    let slow_all = z.zhat_prime_all(o / 3).unwrap();
    for (a, b) in fast_all.iter().zip(&slow_all) {
        assert_eq!(a, &b.scale_exponents(r(3, 1)));
    }
}

#[test]
fn d_family_singlet_parameter() {
    for n in 4..=7 {
        let z = Zhat::new(&corpus::d_n(n)).unwrap();
        let fam = z.zhat_all(r(60, 1), None).unwrap();
        match zhat::voa::identify_singlet(&fam, 12) {
            zhat::voa::SingletMatch::Matched { p, .. } => assert_eq!(p, n as i64 - 2, "D{n}"),
            other => panic!("D{n}: {other:?}"),
        }
    }
}
