//! Dense univariate polynomials over a prime field `F_p`.
//!
//! Polynomials are little-endian coefficient vectors with no trailing zeros;
//! the zero polynomial is the empty vector. Factorization is squarefree
//! decomposition, distinct-degree splitting and Cantor-Zassenhaus
//! equal-degree splitting (trace splitting in characteristic 2).

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::primes::inv_mod;

pub type Poly = Vec<u64>;

/// Arithmetic context for `F_p[x]`. Requires `p < 2^32` so products fit in `u64`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Zp {
    pub p: u64,
}

pub fn trim(f: &mut Poly) {
    while f.last() == Some(&0) {
        f.pop();
    }
}

/// Degree, with `None` for the zero polynomial.
pub fn degree(f: &[u64]) -> Option<usize> {
    if f.is_empty() {
        None
    } else {
        Some(f.len() - 1)
    }
}

impl Zp {
    pub fn new(p: u64) -> Self {
        assert!(p >= 2 && p < (1 << 32), "prime modulus out of range: {p}");
        Zp { p }
    }

    #[inline]
    pub fn add_s(&self, a: u64, b: u64) -> u64 {
        let s = a + b;
        if s >= self.p {
            s - self.p
        } else {
            s
        }
    }

    #[inline]
    pub fn sub_s(&self, a: u64, b: u64) -> u64 {
        if a >= b {
            a - b
        } else {
            a + self.p - b
        }
    }

    #[inline]
    pub fn mul_s(&self, a: u64, b: u64) -> u64 {
        a * b % self.p
    }

    pub fn inv_s(&self, a: u64) -> u64 {
        inv_mod(a, self.p)
    }

    /// Reduce signed integer coefficients.
    pub fn from_i64(&self, coeffs: &[i64]) -> Poly {
        let p = self.p as i64;
        let mut f: Poly = coeffs.iter().map(|&c| c.rem_euclid(p) as u64).collect();
        trim(&mut f);
        f
    }

    pub fn normalize(&self, coeffs: &[u64]) -> Poly {
        let mut f: Poly = coeffs.iter().map(|&c| c % self.p).collect();
        trim(&mut f);
        f
    }

    pub fn add(&self, a: &[u64], b: &[u64]) -> Poly {
        let n = a.len().max(b.len());
        let mut out = Vec::with_capacity(n);
        for i in 0..n {
            let x = a.get(i).copied().unwrap_or(0);
            let y = b.get(i).copied().unwrap_or(0);
            out.push(self.add_s(x, y));
        }
        trim(&mut out);
        out
    }

    pub fn sub(&self, a: &[u64], b: &[u64]) -> Poly {
        let n = a.len().max(b.len());
        let mut out = Vec::with_capacity(n);
        for i in 0..n {
            let x = a.get(i).copied().unwrap_or(0);
            let y = b.get(i).copied().unwrap_or(0);
            out.push(self.sub_s(x, y));
        }
        trim(&mut out);
        out
    }

    pub fn scale(&self, a: &[u64], c: u64) -> Poly {
        let mut out: Poly = a.iter().map(|&x| self.mul_s(x, c)).collect();
        trim(&mut out);
        out
    }

    pub fn mul(&self, a: &[u64], b: &[u64]) -> Poly {
        if a.is_empty() || b.is_empty() {
            return Vec::new();
        }
        let mut out = vec![0u64; a.len() + b.len() - 1];
        for (i, &x) in a.iter().enumerate() {
            if x == 0 {
                continue;
            }
            for (j, &y) in b.iter().enumerate() {
                out[i + j] = (out[i + j] + x * y) % self.p;
            }
        }
        trim(&mut out);
        out
    }

    /// Quotient and remainder; panics on division by the zero polynomial.
    pub fn divrem(&self, a: &[u64], b: &[u64]) -> (Poly, Poly) {
        let db = degree(b).expect("division by zero polynomial");
        let mut r: Poly = a.to_vec();
        trim(&mut r);
        if r.len() < b.len() {
            return (Vec::new(), r);
        }
        let lead_inv = self.inv_s(b[db]);
        let mut q = vec![0u64; r.len() - db];
        for i in (db..r.len()).rev() {
            let c = self.mul_s(r[i], lead_inv);
            if c == 0 {
                continue;
            }
            q[i - db] = c;
            for j in 0..=db {
                r[i - db + j] = self.sub_s(r[i - db + j], self.mul_s(c, b[j]));
            }
        }
        r.truncate(db);
        trim(&mut r);
        trim(&mut q);
        (q, r)
    }

    pub fn rem(&self, a: &[u64], b: &[u64]) -> Poly {
        self.divrem(a, b).1
    }

    pub fn monic(&self, a: &[u64]) -> Poly {
        match a.last() {
            None => Vec::new(),
            Some(&lc) => {
                let inv = self.inv_s(lc);
                self.scale(a, inv)
            }
        }
    }

    /// Monic gcd.
    pub fn gcd(&self, a: &[u64], b: &[u64]) -> Poly {
        let mut x = a.to_vec();
        let mut y = b.to_vec();
        trim(&mut x);
        trim(&mut y);
        while !y.is_empty() {
            let r = self.rem(&x, &y);
            x = y;
            y = r;
        }
        self.monic(&x)
    }

    /// Extended gcd: returns `(g, s, t)` with `s a + t b = g`, `g` monic.
    pub fn xgcd(&self, a: &[u64], b: &[u64]) -> (Poly, Poly, Poly) {
        let (mut r0, mut r1) = (a.to_vec(), b.to_vec());
        trim(&mut r0);
        trim(&mut r1);
        let (mut s0, mut s1): (Poly, Poly) = (vec![1], Vec::new());
        let (mut t0, mut t1): (Poly, Poly) = (Vec::new(), vec![1]);
        while !r1.is_empty() {
            let (q, r) = self.divrem(&r0, &r1);
            let s2 = self.sub(&s0, &self.mul(&q, &s1));
            let t2 = self.sub(&t0, &self.mul(&q, &t1));
            r0 = r1;
            r1 = r;
            s0 = s1;
            s1 = s2;
            t0 = t1;
            t1 = t2;
        }
        match r0.last() {
            None => (r0, s0, t0),
            Some(&lc) => {
                let inv = self.inv_s(lc);
                (self.scale(&r0, inv), self.scale(&s0, inv), self.scale(&t0, inv))
            }
        }
    }

    pub fn derivative(&self, a: &[u64]) -> Poly {
        let mut out: Poly = a
            .iter()
            .enumerate()
            .skip(1)
            .map(|(i, &c)| self.mul_s(c, i as u64 % self.p))
            .collect();
        trim(&mut out);
        out
    }

    pub fn eval(&self, a: &[u64], x: u64) -> u64 {
        a.iter()
            .rev()
            .fold(0, |acc, &c| self.add_s(self.mul_s(acc, x), c))
    }

    pub fn mulmod(&self, a: &[u64], b: &[u64], m: &[u64]) -> Poly {
        self.rem(&self.mul(a, b), m)
    }

    pub fn powmod(&self, base: &[u64], mut exp: u64, m: &[u64]) -> Poly {
        let mut acc: Poly = self.rem(&[1], m);
        let mut b = self.rem(base, m);
        while exp > 0 {
            if exp & 1 == 1 {
                acc = self.mulmod(&acc, &b, m);
            }
            b = self.mulmod(&b, &b, m);
            exp >>= 1;
        }
        acc
    }

    /// `true` iff `gcd(f, f') = 1`.
    pub fn is_squarefree(&self, f: &[u64]) -> bool {
        let d = self.derivative(f);
        if d.is_empty() {
            return degree(f).map_or(true, |n| n == 0);
        }
        self.gcd(f, &d).len() == 1
    }

    fn pth_root(&self, f: &[u64]) -> Poly {
        let p = self.p as usize;
        let mut out: Poly = f.iter().step_by(p).copied().collect();
        trim(&mut out);
        out
    }

    /// Squarefree decomposition of a monic polynomial: pairwise coprime
    /// squarefree parts with their multiplicities.
    pub fn squarefree_decomposition(&self, f: &[u64]) -> Vec<(Poly, u32)> {
        let f = self.monic(f);
        let mut out = Vec::new();
        if f.len() <= 1 {
            return out;
        }
        let fd = self.derivative(&f);
        if fd.is_empty() {
            let root = self.pth_root(&f);
            for (g, m) in self.squarefree_decomposition(&root) {
                out.push((g, m * self.p as u32));
            }
            return out;
        }
        let mut c = self.gcd(&f, &fd);
        let mut w = self.divrem(&f, &c).0;
        let mut i = 1u32;
        while w.len() > 1 {
            let y = self.gcd(&w, &c);
            let z = self.divrem(&w, &y).0;
            if z.len() > 1 {
                out.push((self.monic(&z), i));
            }
            i += 1;
            w = y;
            c = self.divrem(&c, &w).0;
        }
        if c.len() > 1 {
            let root = self.pth_root(&self.monic(&c));
            for (g, m) in self.squarefree_decomposition(&root) {
                out.push((g, m * self.p as u32));
            }
        }
        out
    }

    /// Distinct-degree factorization of a squarefree monic polynomial:
    /// `(d, product of all irreducible factors of degree d)`.
    pub fn distinct_degree(&self, f: &[u64]) -> Vec<(usize, Poly)> {
        let mut out = Vec::new();
        let mut rest = self.monic(f);
        let x: Poly = vec![0, 1];
        let mut h = self.rem(&x, &rest);
        let mut d = 1;
        while rest.len() > 2 * d {
            h = self.powmod(&h, self.p, &rest);
            let g = self.gcd(&rest, &self.sub(&h, &x));
            if g.len() > 1 {
                rest = self.divrem(&rest, &g).0;
                h = self.rem(&h, &rest);
                out.push((d, g));
            }
            d += 1;
        }
        if rest.len() > 1 {
            out.push((rest.len() - 1, rest));
        }
        out
    }

    /// Split a monic squarefree product of irreducibles all of degree `d`.
    pub fn equal_degree(&self, f: &[u64], d: usize, rng: &mut ChaCha8Rng) -> Vec<Poly> {
        let n = f.len() - 1;
        if n == d {
            return vec![f.to_vec()];
        }
        loop {
            let mut a: Poly = (0..n).map(|_| rng.gen_range(0..self.p)).collect();
            trim(&mut a);
            if a.len() <= 1 {
                continue;
            }
            let candidate = if self.p == 2 {
                // absolute trace F_{2^d} -> F_2, evaluated factorwise
                let mut t = a.clone();
                let mut u = a.clone();
                for _ in 1..d {
                    u = self.mulmod(&u, &u, f);
                    t = self.add(&t, &u);
                }
                t
            } else {
                // a^((p^d - 1)/2) = (a * a^p * ... * a^(p^(d-1)))^((p-1)/2)
                let mut norm = a.clone();
                let mut u = a.clone();
                for _ in 1..d {
                    u = self.powmod(&u, self.p, f);
                    norm = self.mulmod(&norm, &u, f);
                }
                let b = self.powmod(&norm, (self.p - 1) / 2, f);
                self.sub(&b, &[1])
            };
            let g = self.gcd(f, &candidate);
            if g.len() > 1 && g.len() < f.len() {
                let h = self.divrem(f, &g).0;
                let mut out = self.equal_degree(&g, d, rng);
                out.extend(self.equal_degree(&self.monic(&h), d, rng));
                return out;
            }
        }
    }

    /// Complete factorization of a nonzero polynomial into monic irreducibles
    /// with multiplicities, sorted canonically (degree, then coefficients from
    /// the top down). The leading coefficient is discarded.
    pub fn factor(&self, f: &[u64]) -> Vec<(Poly, u32)> {
        let mut rng = ChaCha8Rng::seed_from_u64(0x5eed_0f_f4c7 ^ self.p);
        let mut out = Vec::new();
        for (part, mult) in self.squarefree_decomposition(f) {
            for (d, block) in self.distinct_degree(&part) {
                for irr in self.equal_degree(&block, d, &mut rng) {
                    out.push((irr, mult));
                }
            }
        }
        out.sort_by(|a, b| canonical_cmp(&a.0, &b.0).then(a.1.cmp(&b.1)));
        out
    }

    pub fn is_irreducible(&self, f: &[u64]) -> bool {
        let f = self.normalize(f);
        if f.len() < 2 {
            return false;
        }
        let fac = self.factor(&f);
        fac.len() == 1 && fac[0].1 == 1
    }
}

/// Order polynomials by degree, then by coefficients from the leading term down.
pub fn canonical_cmp(a: &[u64], b: &[u64]) -> std::cmp::Ordering {
    a.len()
        .cmp(&b.len())
        .then_with(|| a.iter().rev().cmp(b.iter().rev()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn expand(zp: &Zp, fac: &[(Poly, u32)]) -> Poly {
        let mut acc: Poly = vec![1];
        for (f, m) in fac {
            for _ in 0..*m {
                acc = zp.mul(&acc, f);
            }
        }
        acc
    }

    #[test]
    fn worked_reductions() {
        // T^2 + 2T + 5
        let z5 = Zp::new(5);
        let f = z5.from_i64(&[5, 2, 1]);
        assert_eq!(z5.factor(&f), vec![(vec![0, 1], 1), (vec![2, 1], 1)]);
        let z2 = Zp::new(2);
        assert_eq!(z2.factor(&z2.from_i64(&[5, 2, 1])), vec![(vec![1, 1], 2)]);
        let z3 = Zp::new(3);
        assert_eq!(z3.factor(&z3.from_i64(&[5, 2, 1])), vec![(vec![2, 2, 1], 1)]);
    }

    #[test]
    fn pth_power_inputs() {
        let z3 = Zp::new(3);
        // (x + 1)^3 (x^2 + 1)^2 over F_3
        let a = z3.mul(&z3.mul(&[1, 1], &[1, 1]), &[1, 1]);
        let b = z3.mul(&[1, 0, 1], &[1, 0, 1]);
        let f = z3.mul(&a, &b);
        let fac = z3.factor(&f);
        assert_eq!(fac, vec![(vec![1, 1], 3), (vec![1, 0, 1], 2)]);
    }

    #[test]
    fn irreducible_counts_match_necklace_formula() {
        // number of monic irreducible cubics over F_5 is (125 - 5) / 3 = 40
        let z5 = Zp::new(5);
        let mut count = 0;
        for c0 in 0..5 {
            for c1 in 0..5 {
                for c2 in 0..5 {
                    if z5.is_irreducible(&[c0, c1, c2, 1]) {
                        count += 1;
                    }
                }
            }
        }
        assert_eq!(count, 40);
    }

    proptest! {
        #[test]
        fn factorization_multiplies_back(p in prop::sample::select(vec![2u64, 3, 5, 7, 13, 101, 65_537]),
                                         coeffs in prop::collection::vec(0u64..1_000_000, 1..10)) {
            let zp = Zp::new(p);
            let mut f = zp.normalize(&coeffs);
            f.push(1);
            let fac = zp.factor(&f);
            prop_assert_eq!(expand(&zp, &fac), f);
            for (g, _) in &fac {
                prop_assert!(zp.is_squarefree(g));
                prop_assert_eq!(zp.distinct_degree(g).len(), 1);
            }
        }

        #[test]
        fn xgcd_bezout(p in prop::sample::select(vec![3u64, 7, 31]),
                       a in prop::collection::vec(0u64..100, 1..7),
                       b in prop::collection::vec(0u64..100, 1..7)) {
            let zp = Zp::new(p);
            let (a, b) = (zp.normalize(&a), zp.normalize(&b));
            prop_assume!(!a.is_empty() || !b.is_empty());
            let (g, s, t) = zp.xgcd(&a, &b);
            prop_assert_eq!(zp.add(&zp.mul(&s, &a), &zp.mul(&t, &b)), g.clone());
            prop_assert_eq!(g, zp.gcd(&a, &b));
        }
    }
}
