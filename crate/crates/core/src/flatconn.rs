//! Irreducible SL(2,ℂ) flat connections on Seifert homology spheres
//! `Σ(a₁,…,a_k)` and the monodromy data of the associated singularity.
//!
//! Components of dimension `2n − 6` (`3 <= n <= k`) number
//! `e_n(a₁−1,…,a_k−1)/2^{n−1}` and have Euler characteristic
//! `C(n−1,2)·2^{n−3}`; `λ^P` is the weighted total. Hamm's characteristic
//! polynomial has one factor per subset `S`, `|S| >= 3`, with multiplicity
//! `C(|S|−1,2)`, so `μ = Σ_S C(|S|−1,2) ∏_{i∈S}(a_i − 1) = 4λ^P`.

use crate::error::{Error, Result};
use crate::Rat64;
use num_integer::Integer;
use serde::Serialize;
use std::collections::BTreeMap;
use std::fmt;

fn check(a: &[i64]) -> Result<()> {
    if a.len() < 3 {
        return Err(Error::Inapplicable(format!("need at least three fibres, got {a:?}")));
    }
    if let Some(x) = a.iter().find(|&&x| x < 1) {
        return Err(Error::InvalidPair(format!("fibre order {x}")));
    }
    for i in 0..a.len() {
        for j in i + 1..a.len() {
            if a[i].gcd(&a[j]) != 1 {
                return Err(Error::NotCoprime(format!("{} and {}", a[i], a[j])));
            }
        }
    }
    Ok(())
}

/// Elementary symmetric polynomials `e_0..=e_k` of `xs`.
pub fn elementary_symmetric(xs: &[i64]) -> Vec<i128> {
    let mut e = vec![0i128; xs.len() + 1];
    e[0] = 1;
    for (i, &x) in xs.iter().enumerate() {
        for j in (1..=i + 1).rev() {
            e[j] += e[j - 1] * x as i128;
        }
    }
    e
}

fn choose2(n: i64) -> i64 {
    n * (n - 1) / 2
}

/// `C(n−1,2)·2^{n−3}`.
pub fn euler_characteristic(n: usize) -> i64 {
    choose2(n as i64 - 1) << (n - 3)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CensusRow {
    pub n: usize,
    pub dimension: usize,
    pub count: i64,
    pub euler: i64,
}

impl CensusRow {
    pub fn contribution(&self) -> i64 {
        self.count * self.euler
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ComponentCensus {
    pub fibres: Vec<i64>,
    pub rows: Vec<CensusRow>,
    pub lambda_p: i64,
}

impl ComponentCensus {
    pub fn count(&self, n: usize) -> i64 {
        self.rows.iter().find(|r| r.n == n).map_or(0, |r| r.count)
    }
}

pub fn component_census(a: &[i64]) -> Result<ComponentCensus> {
    check(a)?;
    let shifted: Vec<i64> = a.iter().map(|x| x - 1).collect();
    let e = elementary_symmetric(&shifted);
    let mut rows = Vec::new();
    for n in 3..=a.len() {
        let den = 1i128 << (n - 1);
        if e[n] % den != 0 {
            return Err(Error::Internal(format!("e_{n} = {} not divisible by {den}", e[n])));
        }
        rows.push(CensusRow {
            n,
            dimension: 2 * n - 6,
            count: (e[n] / den) as i64,
            euler: euler_characteristic(n),
        });
    }
    let lambda_p = rows.iter().map(CensusRow::contribution).sum();
    Ok(ComponentCensus {
        fibres: a.to_vec(),
        rows,
        lambda_p,
    })
}

/// Orbit of `(d₁,…,d_k)` under flips `d_i ↦ a_i − d_i` on an even number of
/// nonzero coordinates; `rep` is its lexicographically least member.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct RotationOrbit {
    pub rep: Vec<i64>,
    pub size: u64,
}

/// Lexicographically least member of the orbit of `d`.
pub fn canonical_rotation(a: &[i64], d: &[i64]) -> Vec<i64> {
    let support: Vec<usize> = (0..d.len()).filter(|&i| d[i] != 0).collect();
    let mut out = d.to_vec();
    let Some((&last, init)) = support.split_last() else {
        return out;
    };
    let mut parity = 0;
    let mut free = false;
    for &i in init {
        let flipped = a[i] - d[i];
        if flipped == d[i] {
            free = true;
        } else if flipped < d[i] {
            out[i] = flipped;
            parity ^= 1;
        }
    }
    let flipped = a[last] - d[last];
    if free {
        out[last] = d[last].min(flipped);
    } else if parity == 1 {
        out[last] = flipped;
    }
    out
}

fn orbit_size(a: &[i64], d: &[i64]) -> u64 {
    let n = d.iter().filter(|&&x| x != 0).count() as u32;
    let fixed = (0..d.len()).filter(|&i| d[i] != 0 && 2 * d[i] == a[i]).count() as u32;
    let stabiliser = if fixed == 0 { 1 } else { 1u64 << (fixed - 1) };
    (1u64 << (n.max(1) - 1)) / stabiliser
}

/// Orbit representatives with exactly `n` nonzero coordinates.
pub fn rotation_orbits(a: &[i64], n: usize) -> Result<Vec<RotationOrbit>> {
    check(a)?;
    let k = a.len();
    let mut out = Vec::new();
    let mut d = vec![0i64; k];
    fn rec(a: &[i64], n: usize, i: usize, used: usize, d: &mut Vec<i64>, out: &mut Vec<RotationOrbit>) {
        if i == a.len() {
            if used == n && canonical_rotation(a, d) == *d {
                out.push(RotationOrbit {
                    rep: d.clone(),
                    size: orbit_size(a, d),
                });
            }
            return;
        }
        if a.len() - i > n - used {
            d[i] = 0;
            rec(a, n, i + 1, used, d, out);
        }
        if used < n {
            let last = used + 1 == n;
            // non-final support coordinates of a representative lie in [1, a/2]
            let hi = if last { a[i] - 1 } else { a[i] / 2 };
            for x in 1..=hi {
                d[i] = x;
                rec(a, n, i + 1, used + 1, d, out);
            }
            d[i] = 0;
        }
    }
    if n <= k {
        rec(a, n, 0, 0, &mut d, &mut out);
    }
    Ok(out)
}

/// Exhaustive orbit enumeration by explicit group action; reference for tests.
pub fn rotation_orbits_brute(a: &[i64], n: usize) -> Vec<Vec<i64>> {
    let k = a.len();
    let total: i64 = a.iter().product();
    let mut reps = std::collections::BTreeSet::new();
    for mut idx in 0..total {
        let mut d = vec![0i64; k];
        for i in 0..k {
            d[i] = idx % a[i];
            idx /= a[i];
        }
        let support: Vec<usize> = (0..k).filter(|&i| d[i] != 0).collect();
        if support.len() != n {
            continue;
        }
        let mut best = d.clone();
        for mask in 0u32..(1 << support.len()) {
            if mask.count_ones() % 2 != 0 {
                continue;
            }
            let mut e = d.clone();
            for (bit, &i) in support.iter().enumerate() {
                if mask >> bit & 1 == 1 {
                    e[i] = a[i] - e[i];
                }
            }
            best = best.min(e);
        }
        reps.insert(best);
    }
    reps.into_iter().collect()
}

/// Eigenvalues of the monodromy as exponents `r ∈ [0,1)` with multiplicities.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct MonodromySpectrum {
    pub eigenvalues: BTreeMap<Rat64, u64>,
    pub mu: u64,
}

fn frac(r: Rat64) -> Rat64 {
    r - r.floor()
}

/// All sums `Σ_{i∈S} d_i/a_i` with `0 < d_i < a_i`, unreduced.
fn subset_sums(a: &[i64]) -> Vec<Rat64> {
    let mut sums = vec![Rat64::from_integer(0)];
    for &ai in a {
        sums = sums
            .iter()
            .flat_map(|s| (1..ai).map(move |d| s + Rat64::new(d, ai)))
            .collect();
    }
    sums
}

pub fn hamm_charpoly(a: &[i64]) -> Result<MonodromySpectrum> {
    check(a)?;
    let k = a.len();
    let mut eigenvalues: BTreeMap<Rat64, u64> = BTreeMap::new();
    let mut mu = 0u64;
    for mask in 0u32..(1 << k) {
        let n = mask.count_ones() as i64;
        if n < 3 {
            continue;
        }
        let mult = choose2(n - 1) as u64;
        let sub: Vec<i64> = (0..k).filter(|&i| mask >> i & 1 == 1).map(|i| a[i]).collect();
        for s in subset_sums(&sub) {
            *eigenvalues.entry(frac(s)).or_insert(0) += mult;
            mu += mult;
        }
    }
    Ok(MonodromySpectrum { eigenvalues, mu })
}

/// Spectral numbers `d₁/a₁ + d₂/a₂ + d₃/a₃`, sorted.
pub fn spectrum_3fiber(a1: i64, a2: i64, a3: i64) -> Result<Vec<Rat64>> {
    check(&[a1, a2, a3])?;
    let mut v = subset_sums(&[a1, a2, a3]);
    v.sort();
    Ok(v)
}

/// `μ = 4λ^P`.
pub fn verify_casson_milnor(a: &[i64]) -> Result<bool> {
    let census = component_census(a)?;
    let spec = hamm_charpoly(a)?;
    Ok(spec.mu as i64 == 4 * census.lambda_p)
}

impl fmt::Display for ComponentCensus {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(
            f,
            "{:>3} {:>5} {:>8} {:>6} {:>12}",
            "n", "dim", "count", "chi", "contribution"
        )?;
        for r in &self.rows {
            writeln!(
                f,
                "{:>3} {:>5} {:>8} {:>6} {:>12}",
                r.n,
                r.dimension,
                r.count,
                r.euler,
                r.contribution()
            )?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn census_2357() {
        let c = component_census(&[2, 3, 5, 7]).unwrap();
        assert_eq!(c.count(3), 23);
        assert_eq!(c.count(4), 6);
        assert_eq!(c.lambda_p, 59);
        assert_eq!(hamm_charpoly(&[2, 3, 5, 7]).unwrap().mu, 236);
        assert!(verify_casson_milnor(&[2, 3, 5, 7]).unwrap());
    }

    #[test]
    fn census_small() {
        assert_eq!(component_census(&[2, 3, 7]).unwrap().lambda_p, 3);
        for n in 2..9 {
            assert_eq!(component_census(&[1, 1, n]).unwrap().lambda_p, 0);
        }
        assert!(matches!(component_census(&[2, 4, 5]), Err(Error::NotCoprime(_))));
    }

    #[test]
    fn orbits_match_brute_force() {
        for a in [vec![2, 3, 5], vec![2, 3, 7], vec![3, 4, 5, 7], vec![2, 3, 5, 7]] {
            for n in 1..=a.len() {
                let fast: Vec<Vec<i64>> = rotation_orbits(&a, n).unwrap().into_iter().map(|o| o.rep).collect();
                assert_eq!(fast, rotation_orbits_brute(&a, n), "{a:?} n={n}");
            }
        }
        assert_eq!(rotation_orbits(&[2, 3, 5], 3).unwrap().len(), 2);
        assert_eq!(rotation_orbits(&[2, 3, 7], 3).unwrap().len(), 3);
    }

    #[test]
    fn three_fibre_spectrum() {
        let s = spectrum_3fiber(2, 3, 7).unwrap();
        assert_eq!(s.len(), 12);
        assert_eq!(s[0], Rat64::new(41, 42));
        assert_eq!(s[11], Rat64::new(85, 42));
        let mu = hamm_charpoly(&[2, 3, 7]).unwrap();
        assert_eq!(mu.mu, 12);
        let reduced: u64 = s.iter().filter(|&&x| mu.eigenvalues.contains_key(&frac(x))).count() as u64;
        assert_eq!(reduced, 12);
        assert!(spectrum_3fiber(2, 2, 5).is_err());
    }
}
