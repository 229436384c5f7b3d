//! Factorization of monic squarefree integer polynomials: factor modulo a
//! good prime, Hensel-lift to a power exceeding the Landau-Mignotte bound,
//! recombine subsets by trial division over `Z`.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};

use crate::intpoly::IntPoly;
use crate::modpoly::{Poly, Zp};
use crate::primes::is_prime;

/// How many good primes to try when looking for the smallest modular
/// factorization.
const PRIME_TRIALS: usize = 6;

fn to_int(f: &[u64]) -> IntPoly {
    IntPoly::new(f.iter().map(|&c| BigInt::from(c)).collect())
}

fn reduce_mod(f: &IntPoly, m: &BigInt) -> IntPoly {
    IntPoly::new(f.coeffs().iter().map(|c| c.mod_floor(m)).collect())
}

/// Lift `f = g h (mod p)` to `F = G H (mod p^k)`, `g` and `h` monic and coprime mod `p`.
fn lift_pair(f: &IntPoly, g: &Poly, h: &Poly, p: u64, k: u32) -> (IntPoly, IntPoly) {
    let zp = Zp::new(p);
    let (one, _s, t) = zp.xgcd(g, h);
    debug_assert_eq!(one, vec![1]);
    let pb = BigInt::from(p);
    let mut big_g = to_int(g);
    let mut big_h = to_int(h);
    let mut pj = pb.clone();
    for _ in 1..k {
        let next = &pj * &pb;
        let err = reduce_mod(&f.sub(&big_g.mul(&big_h)), &next);
        let e: Vec<BigInt> = err.coeffs().iter().map(|c| c / &pj).collect();
        let e = IntPoly::new(e).reduce(p);
        let dg = zp.rem(&zp.mul(&t, &e), g);
        let (dh, r) = zp.divrem(&zp.sub(&e, &zp.mul(h, &dg)), g);
        debug_assert!(r.is_empty());
        big_g = big_g.add(&to_int(&dg).scale(&pj));
        big_h = big_h.add(&to_int(&dh).scale(&pj));
        pj = next;
    }
    (reduce_mod(&big_g, &pj), reduce_mod(&big_h, &pj))
}

/// Hensel-lift a complete modular factorization of monic `f`.
fn lift_all(f: &IntPoly, factors: &[Poly], p: u64, k: u32) -> Vec<IntPoly> {
    let modulus = BigInt::from(p).pow(k);
    if factors.len() == 1 {
        return vec![reduce_mod(f, &modulus)];
    }
    let zp = Zp::new(p);
    let rest = factors[1..]
        .iter()
        .fold(vec![1u64], |acc, g| zp.mul(&acc, g));
    let (g, h) = lift_pair(f, &factors[0], &rest, p, k);
    let mut out = vec![g];
    out.extend(lift_all(&h, &factors[1..], p, k));
    out
}

fn landau_mignotte(f: &IntPoly) -> BigInt {
    let norm2: BigInt = f.coeffs().iter().map(|c| c * c).sum();
    (norm2.sqrt() + BigInt::one()) << f.degree()
}

/// Choose a prime for which `f mod p` is squarefree, preferring the fewest factors.
fn choose_prime(f: &IntPoly) -> (u64, Vec<Poly>) {
    let mut best: Option<(u64, Vec<Poly>)> = None;
    let mut tried = 0;
    let mut p = 2u64;
    while tried < PRIME_TRIALS {
        p += 1;
        if !is_prime(p) {
            continue;
        }
        let zp = Zp::new(p);
        let fp = f.reduce(p);
        if !zp.is_squarefree(&fp) {
            continue;
        }
        tried += 1;
        let fac: Vec<Poly> = zp.factor(&fp).into_iter().map(|(g, _)| g).collect();
        if best.as_ref().map_or(true, |(_, b)| fac.len() < b.len()) {
            best = Some((p, fac));
        }
        if best.as_ref().is_some_and(|(_, b)| b.len() == 1) {
            break;
        }
    }
    best.expect("some prime is good for a squarefree polynomial")
}

fn combinations(n: usize, k: usize) -> Vec<Vec<usize>> {
    fn rec(start: usize, n: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for i in start..n {
            cur.push(i);
            rec(i + 1, n, k, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    rec(0, n, k, &mut Vec::new(), &mut out);
    out
}

/// Irreducible monic factors of a monic squarefree `f` over `Z`, sorted by
/// degree then coefficients.
pub fn factor_monic_squarefree(f: &IntPoly) -> Vec<IntPoly> {
    assert!(f.is_monic(), "monic input required");
    if f.degree() <= 1 {
        return vec![f.clone()];
    }
    let (p, modular) = choose_prime(f);
    if modular.len() == 1 {
        return vec![f.clone()];
    }
    let bound = landau_mignotte(f) * 2;
    let pb = BigInt::from(p);
    let mut k = 1u32;
    let mut pk = pb.clone();
    while pk <= bound {
        pk *= &pb;
        k += 1;
    }
    let mut lifted = lift_all(f, &modular, p, k);
    let mut current = f.clone();
    let mut found = Vec::new();
    let mut size = 1;
    while 2 * size <= lifted.len() {
        let mut hit = None;
        for subset in combinations(lifted.len(), size) {
            let prod = subset
                .iter()
                .fold(IntPoly::one(), |acc, &i| reduce_mod(&acc.mul(&lifted[i]), &pk));
            let candidate = IntPoly::from_residues_symmetric(prod.coeffs(), &pk);
            // constant-term screen before full division
            let c0 = candidate.coeff(0);
            if !c0.is_zero() && !current.coeff(0).is_multiple_of(&c0) {
                continue;
            }
            if let Some(q) = current.div_exact(&candidate) {
                hit = Some((subset, candidate, q));
                break;
            }
        }
        match hit {
            Some((subset, g, q)) => {
                found.push(g);
                current = q;
                lifted = lifted
                    .into_iter()
                    .enumerate()
                    .filter(|(i, _)| !subset.contains(i))
                    .map(|(_, g)| g)
                    .collect();
            }
            None => size += 1,
        }
    }
    found.push(current);
    found.sort_by(|a, b| {
        a.degree()
            .cmp(&b.degree())
            .then_with(|| a.coeffs().iter().rev().cmp(b.coeffs().iter().rev()))
    });
    found
}

/// Rational (hence integer) roots of a monic squarefree polynomial.
pub fn rational_roots(f: &IntPoly) -> Vec<BigInt> {
    let mut roots: Vec<BigInt> = factor_monic_squarefree(f)
        .into_iter()
        .filter(|g| g.degree() == 1)
        .map(|g| -g.coeff(0))
        .collect();
    roots.sort();
    roots
}

/// Exact square test for integers.
pub fn is_square(n: &BigInt) -> bool {
    if n.sign() == num_bigint::Sign::Minus {
        return false;
    }
    let r = n.sqrt();
    &r * &r == *n
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn p(c: &[i64]) -> IntPoly {
        IntPoly::from_i64(c)
    }

    #[test]
    fn splits_products() {
        let a = p(&[6, 5, 1]);
        assert_eq!(factor_monic_squarefree(&a), vec![p(&[2, 1]), p(&[3, 1])]);
        // (T^2 + 2T + 5)(T^2 + 5): product of two Weil polynomials
        let b = p(&[5, 2, 1]).mul(&p(&[5, 0, 1]));
        assert_eq!(factor_monic_squarefree(&b), vec![p(&[5, 0, 1]), p(&[5, 2, 1])]);
        // x^4 + 1 is irreducible over Q but reducible mod every prime
        assert_eq!(factor_monic_squarefree(&p(&[1, 0, 0, 0, 1])), vec![p(&[1, 0, 0, 0, 1])]);
        // Swinnerton-Dyer style: (x^2-2)(x^2-3) and the irreducible x^4-10x^2+1
        let c = p(&[-2, 0, 1]).mul(&p(&[-3, 0, 1]));
        assert_eq!(factor_monic_squarefree(&c).len(), 2);
        assert_eq!(factor_monic_squarefree(&p(&[1, 0, -10, 0, 1])).len(), 1);
    }

    #[test]
    fn large_coefficients() {
        // two Weil quadratics with w = 7^4 and a cubic factor
        let w = 2401i64;
        let f = p(&[w, 50, 1]).mul(&p(&[w, -97, 1])).mul(&p(&[-1, 1, 0, 1]));
        let fac = factor_monic_squarefree(&f);
        assert_eq!(fac.len(), 3);
        let prod = fac.iter().fold(IntPoly::one(), |acc, g| acc.mul(g));
        assert_eq!(prod, f);
    }

    #[test]
    fn roots() {
        let f = p(&[-2, 0, 1]).mul(&p(&[-3, 1])).mul(&p(&[7, 1]));
        assert_eq!(rational_roots(&f), vec![BigInt::from(-7), BigInt::from(3)]);
        assert!(is_square(&BigInt::from(625)));
        assert!(!is_square(&BigInt::from(-4)));
        assert!(!is_square(&BigInt::from(8)));
    }

    proptest! {
        #[test]
        fn products_of_random_factors_recombine(
            a in prop::collection::vec(-20i64..20, 1..4),
            b in prop::collection::vec(-20i64..20, 1..4),
            c in prop::collection::vec(-20i64..20, 0..3),
        ) {
            let mk = |v: &Vec<i64>| { let mut v = v.clone(); v.push(1); p(&v) };
            let f = mk(&a).mul(&mk(&b)).mul(&mk(&c));
            prop_assume!(f.is_squarefree());
            let fac = factor_monic_squarefree(&f);
            let prod = fac.iter().fold(IntPoly::one(), |acc, g| acc.mul(g));
            prop_assert_eq!(prod, f);
            prop_assert!(fac.len() >= 2);
            for g in &fac {
                if g.degree() > 1 {
                    // an irreducible factor has no rational root
                    prop_assert!(g.integer_roots().is_empty());
                }
            }
        }
    }
}
