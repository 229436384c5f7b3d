//! Symplectic similitudes over `F_l`: transvection random walks, exact
//! enumeration of `Sp_{2g}(F_l)` cosets, and signed cycle types of
//! characteristic polynomials.

use std::collections::{BTreeMap, HashSet};

use num_bigint::BigInt;
use num_rational::BigRational;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::distribution::{Provenance, TypeDistribution};
use crate::error::{Error, Result};
use crate::modpoly::{Poly, Zp};
use crate::primes::is_prime;
use crate::weilpoly::{Cycle, Sign, SignedCycleType};

pub const DEFAULT_WALK_LENGTH: usize = 128;
/// Largest group exact enumeration will build.
pub const MAX_EXACT_ORDER: u64 = 1_000_000;

/// Derive the seed of task `index` from a master seed (SplitMix64 finalizer
/// over `seed + (index + 1) * golden gamma`).
pub fn split_seed(master: u64, index: u64) -> u64 {
    let mut z = master.wrapping_add(index.wrapping_add(1).wrapping_mul(0x9E37_79B9_7F4A_7C15));
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

pub fn stream(master: u64, index: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(split_seed(master, index))
}

fn check_field(l: u64) -> Result<()> {
    if !is_prime(l) {
        return Err(Error::NotPrime(l));
    }
    if l == 2 {
        return Err(Error::EvenCharacteristic(l));
    }
    if l >= 1 << 31 {
        return Err(Error::InvalidArgument(format!("prime {l} too large for matrix arithmetic")));
    }
    Ok(())
}

/// `2g x 2g` matrix over `F_l`, row-major, with `M^T J M = gamma J` for
/// `J = [[0, I], [-I, 0]]`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct SymplecticMatrix {
    l: u64,
    g: usize,
    gamma: u64,
    entries: Vec<u32>,
}

fn mat_mul(a: &[u32], b: &[u32], n: usize, l: u64) -> Vec<u32> {
    let mut out = vec![0u32; n * n];
    for i in 0..n {
        for k in 0..n {
            let aik = a[i * n + k] as u64;
            if aik == 0 {
                continue;
            }
            for j in 0..n {
                let idx = i * n + j;
                out[idx] = ((out[idx] as u64 + aik * b[k * n + j] as u64) % l) as u32;
            }
        }
    }
    out
}

fn j_matrix(g: usize, l: u64) -> Vec<u32> {
    let n = 2 * g;
    let mut j = vec![0u32; n * n];
    for i in 0..g {
        j[i * n + g + i] = 1;
        j[(g + i) * n + i] = (l - 1) as u32;
    }
    j
}

fn transpose(a: &[u32], n: usize) -> Vec<u32> {
    let mut t = vec![0u32; n * n];
    for i in 0..n {
        for j in 0..n {
            t[j * n + i] = a[i * n + j];
        }
    }
    t
}

/// Multiplier of `a` if it is a symplectic similitude.
fn multiplier(a: &[u32], g: usize, l: u64) -> Option<u64> {
    let n = 2 * g;
    let j = j_matrix(g, l);
    let lhs = mat_mul(&mat_mul(&transpose(a, n), &j, n, l), a, n, l);
    let gamma = lhs[g] as u64;
    if gamma == 0 {
        return None;
    }
    let scaled: Vec<u32> = j.iter().map(|&x| ((x as u64 * gamma) % l) as u32).collect();
    (lhs == scaled).then_some(gamma)
}

impl SymplecticMatrix {
    /// Validate a row-major matrix; the multiplier is read off `M^T J M`.
    pub fn new(g: usize, l: u64, entries: Vec<u64>) -> Result<Self> {
        check_field(l)?;
        let n = 2 * g;
        if g == 0 || entries.len() != n * n {
            return Err(Error::InvalidArgument(format!("expected {} entries", n * n)));
        }
        let entries: Vec<u32> = entries.iter().map(|&x| (x % l) as u32).collect();
        let gamma = multiplier(&entries, g, l)
            .ok_or_else(|| Error::InvalidArgument("matrix is not a symplectic similitude".into()))?;
        Ok(SymplecticMatrix { l, g, gamma, entries })
    }

    fn from_trusted(g: usize, l: u64, gamma: u64, entries: Vec<u32>) -> Self {
        debug_assert_eq!(multiplier(&entries, g, l), Some(gamma));
        SymplecticMatrix { l, g, gamma, entries }
    }

    pub fn l(&self) -> u64 {
        self.l
    }

    pub fn genus(&self) -> usize {
        self.g
    }

    pub fn multiplier(&self) -> u64 {
        self.gamma
    }

    pub fn entries(&self) -> &[u32] {
        &self.entries
    }

    pub fn entry(&self, i: usize, j: usize) -> u64 {
        self.entries[i * 2 * self.g + j] as u64
    }

    /// Recompute `M^T J M` and compare with `gamma J`.
    pub fn verify(&self) -> bool {
        multiplier(&self.entries, self.g, self.l) == Some(self.gamma)
    }

    pub fn determinant(&self) -> u64 {
        let n = 2 * self.g;
        let zp = Zp::new(self.l);
        let mut a: Vec<u64> = self.entries.iter().map(|&x| x as u64).collect();
        let mut det = 1u64;
        for c in 0..n {
            let Some(p) = (c..n).find(|&r| a[r * n + c] != 0) else { return 0 };
            if p != c {
                for k in 0..n {
                    a.swap(p * n + k, c * n + k);
                }
                det = zp.sub_s(0, det);
            }
            let piv = a[c * n + c];
            det = zp.mul_s(det, piv);
            let inv = zp.inv_s(piv);
            for r in c + 1..n {
                let f = zp.mul_s(a[r * n + c], inv);
                if f == 0 {
                    continue;
                }
                for k in c..n {
                    a[r * n + k] = zp.sub_s(a[r * n + k], zp.mul_s(f, a[c * n + k]));
                }
            }
        }
        det
    }

    /// Characteristic polynomial, little-endian, monic of degree `2g`.
    pub fn charpoly(&self) -> Poly {
        charpoly(&self.entries, 2 * self.g, self.l)
    }
}

/// Characteristic polynomial over `F_l` by reduction to Hessenberg form.
pub fn charpoly(m: &[u32], n: usize, l: u64) -> Poly {
    let zp = Zp::new(l);
    let mut h: Vec<u64> = m.iter().map(|&x| x as u64).collect();
    let at = |i: usize, j: usize| i * n + j;
    for k in 0..n.saturating_sub(2) {
        let Some(p) = (k + 1..n).find(|&i| h[at(i, k)] != 0) else { continue };
        if p != k + 1 {
            for c in 0..n {
                h.swap(at(p, c), at(k + 1, c));
            }
            for r in 0..n {
                h.swap(at(r, p), at(r, k + 1));
            }
        }
        let inv = zp.inv_s(h[at(k + 1, k)]);
        for i in k + 2..n {
            let u = zp.mul_s(h[at(i, k)], inv);
            if u == 0 {
                continue;
            }
            for c in 0..n {
                h[at(i, c)] = zp.sub_s(h[at(i, c)], zp.mul_s(u, h[at(k + 1, c)]));
            }
            for r in 0..n {
                h[at(r, k + 1)] = zp.add_s(h[at(r, k + 1)], zp.mul_s(u, h[at(r, i)]));
            }
        }
    }
    // p_m = (x - h_mm) p_{m-1} - sum_i h_{m-i,m} (prod_{j=m-i+1}^{m} h_{j,j-1}) p_{m-i-1}, 1-based
    let mut p: Vec<Poly> = vec![vec![1]];
    for m in 1..=n {
        let mut next = zp.mul(&p[m - 1], &[zp.sub_s(0, h[at(m - 1, m - 1)]), 1]);
        let mut t = 1u64;
        for i in 1..m {
            t = zp.mul_s(t, h[at(m - i, m - i - 1)]);
            let c = zp.mul_s(h[at(m - i - 1, m - 1)], t);
            if c != 0 {
                next = zp.sub(&next, &zp.scale(&p[m - i - 1], c));
            }
        }
        p.push(next);
    }
    p.pop().unwrap()
}

/// `f*(T) = T^deg f(gamma/T) / f(0)`, monic. `f(0)` must be nonzero.
pub fn gamma_reciprocal(f: &[u64], gamma: u64, zp: &Zp) -> Poly {
    let k = f.len() - 1;
    let mut star = vec![0u64; k + 1];
    let mut gp = 1u64;
    for (j, &a) in f.iter().enumerate() {
        star[k - j] = zp.mul_s(a, gp);
        gp = zp.mul_s(gp, gamma);
    }
    zp.monic(&star)
}

/// Signed cycle type of a monic characteristic polynomial of an element with
/// multiplier `gamma`: factors pair with `f*(T) = T^deg f(gamma/T) / f(0)`.
pub fn charpoly_type(f: &[u64], gamma: u64, l: u64) -> SignedCycleType {
    let zp = Zp::new(l);
    let factors = zp.factor(f);
    if factors.iter().any(|(_, e)| *e > 1) {
        return SignedCycleType::NonRegular;
    }
    let polys: Vec<&Poly> = factors.iter().map(|(p, _)| p).collect();
    let mut done = vec![false; polys.len()];
    let mut cycles = Vec::new();
    for i in 0..polys.len() {
        if done[i] {
            continue;
        }
        let phi = polys[i];
        let k = phi.len() - 1;
        let star = gamma_reciprocal(phi, gamma, &zp);
        if &star == phi {
            if k % 2 == 1 {
                return SignedCycleType::NonRegular;
            }
            cycles.push(Cycle::new(k / 2, Sign::Minus));
            done[i] = true;
        } else {
            let Some(j) = (i + 1..polys.len()).find(|&j| !done[j] && *polys[j] == star) else {
                return SignedCycleType::NonRegular;
            };
            done[i] = true;
            done[j] = true;
            cycles.push(Cycle::new(k, Sign::Plus));
        }
    }
    SignedCycleType::from_cycles(cycles)
}

pub fn matrix_type(m: &SymplecticMatrix) -> SignedCycleType {
    charpoly_type(&m.charpoly(), m.gamma, m.l)
}

/// Transvection vectors: `e_i`, `f_i`, `e_i +- e_j`, `f_i +- f_j`, `e_i +- f_j`.
fn transvection_vectors(g: usize, l: u64) -> Vec<Vec<u32>> {
    let n = 2 * g;
    let minus = (l - 1) as u32;
    let unit = |i: usize| {
        let mut v = vec![0u32; n];
        v[i] = 1;
        v
    };
    let combo = |i: usize, j: usize, s: u32| {
        let mut v = unit(i);
        v[j] = s;
        v
    };
    let mut out = Vec::new();
    for i in 0..n {
        out.push(unit(i));
    }
    for i in 0..g {
        for j in i + 1..g {
            for s in [1, minus] {
                out.push(combo(i, j, s));
                out.push(combo(g + i, g + j, s));
            }
        }
    }
    for i in 0..g {
        for j in 0..g {
            for s in [1, minus] {
                out.push(combo(i, g + j, s));
            }
        }
    }
    out
}

/// `S <- S (I + a v v^T J)`, i.e. `S <- S + a (S v)(v^T J)`.
fn apply_transvection(s: &mut [u32], v: &[u32], a: u64, g: usize, l: u64) {
    let n = 2 * g;
    // (v^T J)_j: J = [[0, I], [-I, 0]] so (v^T J)_j = -v_{j+g} for j < g, v_{j-g} for j >= g
    let vj: Vec<u64> = (0..n)
        .map(|j| if j < g { (l - v[j + g] as u64) % l } else { v[j - g] as u64 })
        .collect();
    for i in 0..n {
        let sv: u64 = (0..n).map(|k| s[i * n + k] as u64 * v[k] as u64 % l).sum::<u64>() % l;
        if sv == 0 {
            continue;
        }
        let c = sv * a % l;
        for j in 0..n {
            if vj[j] != 0 {
                let idx = i * n + j;
                s[idx] = ((s[idx] as u64 + c * vj[j]) % l) as u32;
            }
        }
    }
}

fn identity(n: usize) -> Vec<u32> {
    let mut m = vec![0u32; n * n];
    for i in 0..n {
        m[i * n + i] = 1;
    }
    m
}

/// Fixed similitude `diag(gamma I_g, I_g)`.
pub fn coset_representative(g: usize, l: u64, gamma: u64) -> Vec<u32> {
    let mut r = identity(2 * g);
    for i in 0..g {
        r[i * 2 * g + i] = (gamma % l) as u32;
    }
    r
}

/// Alternative representative `diag(I_g, gamma I_g)`.
pub fn alternative_representative(g: usize, l: u64, gamma: u64) -> Vec<u32> {
    let mut r = identity(2 * g);
    for i in g..2 * g {
        r[i * 2 * g + i] = (gamma % l) as u32;
    }
    r
}

fn check_gamma(gamma: u64, l: u64) -> Result<u64> {
    let gamma = gamma % l;
    if gamma == 0 {
        return Err(Error::BadMultiplier);
    }
    Ok(gamma)
}

/// Random element of the `gamma`-coset: `diag(gamma I, I)` times a random walk
/// of `walk_length` transvection steps.
pub fn sp_sample<R: Rng>(g: usize, l: u64, gamma: u64, walk_length: usize, rng: &mut R) -> Result<SymplecticMatrix> {
    check_field(l)?;
    let gamma = check_gamma(gamma, l)?;
    let gens = transvection_vectors(g, l);
    let mut s = identity(2 * g);
    for _ in 0..walk_length {
        let v = &gens[rng.gen_range(0..gens.len())];
        let a = if rng.gen::<bool>() { 1 } else { l - 1 };
        apply_transvection(&mut s, v, a, g, l);
    }
    let m = mat_mul(&coset_representative(g, l, gamma), &s, 2 * g, l);
    Ok(SymplecticMatrix::from_trusted(g, l, gamma, m))
}

/// `|Sp_{2g}(F_l)| = l^{g^2} prod_{i=1}^{g} (l^{2i} - 1)`.
pub fn sp_order(g: usize, l: u64) -> BigInt {
    let lb = BigInt::from(l);
    (1..=g as u32).fold(lb.pow((g * g) as u32), |acc, i| acc * (lb.pow(2 * i) - 1))
}

/// Every element of `Sp_{2g}(F_l)`, by closure under the transvection generators.
pub fn enumerate_sp(g: usize, l: u64) -> Result<Vec<Vec<u32>>> {
    check_field(l)?;
    let order = sp_order(g, l);
    if order > BigInt::from(MAX_EXACT_ORDER) {
        return Err(Error::EnumerationTooLarge(format!("|Sp_{}(F_{l})| = {order}", 2 * g)));
    }
    let gens = transvection_vectors(g, l);
    let start = identity(2 * g);
    let mut seen: HashSet<Vec<u32>> = HashSet::from([start.clone()]);
    let mut all = vec![start];
    let mut frontier = 0;
    while frontier < all.len() {
        let s = all[frontier].clone();
        frontier += 1;
        for v in &gens {
            let mut next = s.clone();
            apply_transvection(&mut next, v, 1, g, l);
            if seen.insert(next.clone()) {
                all.push(next);
            }
        }
    }
    all.sort();
    Ok(all)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "mode")]
pub enum SamplingMode {
    Exact,
    MonteCarlo { samples: u64, seed: u64 },
}

/// A coset distribution with exact or sampled weights.
#[derive(Clone, Debug, PartialEq)]
pub enum CosetDistribution {
    Exact(TypeDistribution<BigRational>),
    Sampled(TypeDistribution<f64>),
}

impl CosetDistribution {
    pub fn to_f64(&self) -> TypeDistribution<f64> {
        match self {
            CosetDistribution::Exact(d) => d.to_f64(),
            CosetDistribution::Sampled(d) => d.clone(),
        }
    }
}

/// Exact type distribution of the coset `R Sp_{2g}(F_l)` for a given
/// representative `R` (row-major, multiplier `gamma`).
pub fn exact_coset_distribution_with(
    g: usize,
    l: u64,
    gamma: u64,
    representative: &[u32],
) -> Result<TypeDistribution<BigRational>> {
    let gamma = check_gamma(gamma, l)?;
    if multiplier(representative, g, l) != Some(gamma) {
        return Err(Error::InvalidArgument("representative has the wrong multiplier".into()));
    }
    let group = enumerate_sp(g, l)?;
    let n = 2 * g;
    let types: Vec<SignedCycleType> = group
        .par_iter()
        .map(|s| {
            let m = mat_mul(representative, s, n, l);
            debug_assert_eq!(multiplier(&m, g, l), Some(gamma));
            charpoly_type(&charpoly(&m, n, l), gamma, l)
        })
        .collect();
    let mut counts = BTreeMap::new();
    for t in types {
        *counts.entry(t).or_insert(0u64) += 1;
    }
    Ok(TypeDistribution::from_counts(counts, Provenance::ExactEnumeration))
}

pub fn exact_coset_distribution(g: usize, l: u64, gamma: u64) -> Result<TypeDistribution<BigRational>> {
    check_field(l)?;
    let gamma = check_gamma(gamma, l)?;
    exact_coset_distribution_with(g, l, gamma, &coset_representative(g, l, gamma))
}

pub fn sampled_coset_distribution(
    g: usize,
    l: u64,
    gamma: u64,
    samples: u64,
    seed: u64,
    walk_length: usize,
) -> Result<TypeDistribution<f64>> {
    check_field(l)?;
    let gamma = check_gamma(gamma, l)?;
    let types: Vec<SignedCycleType> = (0..samples)
        .into_par_iter()
        .map(|i| {
            let mut rng = stream(seed, i);
            sp_sample(g, l, gamma, walk_length, &mut rng).map(|m| matrix_type(&m))
        })
        .collect::<Result<_>>()?;
    let mut counts = BTreeMap::new();
    for t in types {
        *counts.entry(t).or_insert(0u64) += 1;
    }
    Ok(TypeDistribution::from_counts(counts, Provenance::MonteCarlo))
}

pub fn coset_type_distribution(g: usize, l: u64, gamma: u64, mode: SamplingMode) -> Result<CosetDistribution> {
    match mode {
        SamplingMode::Exact => exact_coset_distribution(g, l, gamma).map(CosetDistribution::Exact),
        SamplingMode::MonteCarlo { samples, seed } => {
            sampled_coset_distribution(g, l, gamma, samples, seed, DEFAULT_WALK_LENGTH).map(CosetDistribution::Sampled)
        }
    }
}

/// Mass of the all-plus identity type in `Sp_{2g}(F_l)`.
pub fn split_class_fraction(g: usize, l: u64, mode: SamplingMode) -> Result<f64> {
    Ok(coset_type_distribution(g, l, 1, mode)?.to_f64().split_weight())
}

pub fn split_class_fraction_exact(g: usize, l: u64) -> Result<BigRational> {
    Ok(exact_coset_distribution(g, l, 1)?.split_weight())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn mat(g: usize, l: u64, e: &[u64]) -> SymplecticMatrix {
        SymplecticMatrix::new(g, l, e.to_vec()).unwrap()
    }

    fn rat(n: i64, d: i64) -> BigRational {
        BigRational::new(BigInt::from(n), BigInt::from(d))
    }

    #[test]
    fn matrix_type_examples() {
        assert_eq!(matrix_type(&mat(1, 5, &[2, 0, 0, 3])).to_string(), "[(1,+)]");
        assert_eq!(matrix_type(&mat(1, 3, &[0, 2, 1, 0])).to_string(), "[(1,-)]");
        assert_eq!(matrix_type(&mat(1, 7, &[1, 0, 0, 1])), SignedCycleType::NonRegular);
        assert!(SymplecticMatrix::new(2, 5, vec![1; 16]).is_err());
    }

    #[test]
    fn samples_are_similitudes() {
        let mut rng = stream(7, 0);
        for (g, l, gamma) in [(1, 3, 2), (1, 5, 1), (2, 7, 3), (3, 5, 4)] {
            for _ in 0..20 {
                let m = sp_sample(g, l, gamma, DEFAULT_WALK_LENGTH, &mut rng).unwrap();
                assert!(m.verify());
                assert_eq!(m.multiplier(), gamma);
                let det = (0..g).fold(1, |acc, _| acc * gamma % l);
                assert_eq!(m.determinant(), det);
            }
        }
        assert_eq!(sp_sample(1, 5, 0, 10, &mut rng).unwrap_err(), Error::BadMultiplier);
        assert_eq!(sp_sample(1, 5, 5, 10, &mut rng).unwrap_err(), Error::BadMultiplier);
    }

    #[test]
    fn generators_reach_the_whole_group() {
        assert_eq!(enumerate_sp(1, 3).unwrap().len(), 24);
        assert_eq!(enumerate_sp(1, 5).unwrap().len(), 120);
        assert_eq!(BigInt::from(enumerate_sp(2, 3).unwrap().len()), sp_order(2, 3));
        assert!(matches!(enumerate_sp(2, 7), Err(Error::EnumerationTooLarge(_))));
    }

    #[test]
    fn exact_distributions() {
        let d = exact_coset_distribution(1, 3, 2).unwrap();
        assert_eq!(d.total_count(), 24);
        assert_eq!(d.weight(&"[(1,+)]".parse().unwrap()), rat(1, 2));
        assert_eq!(d.weight(&"[(1,-)]".parse().unwrap()), rat(1, 2));
        assert_eq!(split_class_fraction_exact(1, 3).unwrap(), rat(0, 1));
        assert_eq!(split_class_fraction_exact(1, 5).unwrap(), rat(1, 4));
        let alt = exact_coset_distribution_with(1, 3, 2, &alternative_representative(1, 3, 2)).unwrap();
        assert_eq!(alt, d);
    }

    #[test]
    fn charpoly_satisfies_cayley_hamilton() {
        let mut rng = stream(11, 0);
        for (g, l) in [(1, 5), (2, 7), (3, 11)] {
            let m = sp_sample(g, l, 3, 64, &mut rng).unwrap();
            let n = 2 * g;
            let f = m.charpoly();
            assert_eq!(f.len(), n + 1);
            let mut acc = vec![0u32; n * n];
            let mut power = identity(n);
            for &c in &f {
                for (a, p) in acc.iter_mut().zip(&power) {
                    *a = ((*a as u64 + c * *p as u64) % l) as u32;
                }
                power = mat_mul(&power, m.entries(), n, l);
            }
            assert!(acc.iter().all(|&x| x == 0));
        }
    }

    #[test]
    fn seeds_split_deterministically() {
        assert_eq!(split_seed(1, 2), split_seed(1, 2));
        assert_ne!(split_seed(1, 2), split_seed(1, 3));
        assert_ne!(split_seed(1, 2), split_seed(2, 2));
    }
}
