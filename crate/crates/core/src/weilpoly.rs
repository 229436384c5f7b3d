//! Reductions of CM-shaped integer polynomials modulo primes: factor
//! patterns, irreducibility over `Q`, the real-subfield polynomial and
//! signed cycle types.

use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{ToPrimitive, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};
use crate::intpoly::IntPoly;
use crate::modpoly::{degree, Poly, Zp};
use crate::primes::is_prime;
use crate::zfactor::factor_monic_squarefree;

pub const DEFAULT_PRIME_BUDGET: usize = 200;
/// Largest degree the lift-and-recombine fallback runs on.
pub const FALLBACK_MAX_DEGREE: usize = 8;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FactorPattern {
    pub l: u64,
    /// `(degree, multiplicity)`, sorted.
    pub factors: Vec<(usize, u32)>,
    pub squarefree: bool,
}

fn check_monic_prime(h: &IntPoly, l: u64) -> Result<()> {
    if !is_prime(l) {
        return Err(Error::NotPrime(l));
    }
    if l >= 1 << 32 {
        return Err(Error::InvalidArgument(format!("prime {l} exceeds 32 bits")));
    }
    if !h.is_monic() {
        return Err(Error::InvalidArgument(format!("{h} is not monic")));
    }
    Ok(())
}

/// Irreducible factors of `h mod l` with multiplicities, canonically sorted.
pub fn factor_mod_l_full(h: &IntPoly, l: u64) -> Result<Vec<(Poly, u32)>> {
    check_monic_prime(h, l)?;
    let zp = Zp::new(l);
    let hl = h.reduce(l);
    let factors = zp.factor(&hl);
    let product = factors.iter().fold(vec![1u64], |acc, (f, e)| {
        (0..*e).fold(acc, |a, _| zp.mul(&a, f))
    });
    if product != hl {
        return Err(Error::InternalError(format!("factorization of {h} mod {l} does not multiply back")));
    }
    Ok(factors)
}

pub fn factor_mod_l(h: &IntPoly, l: u64) -> Result<FactorPattern> {
    let full = factor_mod_l_full(h, l)?;
    let mut factors: Vec<(usize, u32)> = full
        .iter()
        .map(|(f, e)| (degree(f).unwrap_or(0), *e))
        .collect();
    factors.sort();
    let squarefree = factors.iter().all(|&(_, e)| e == 1);
    Ok(FactorPattern { l, factors, squarefree })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "verdict")]
pub enum Irreducibility {
    /// `certificate_prime` is `None` when the verdict came from the
    /// factorization fallback or the degree is at most 1.
    Irreducible { certificate_prime: Option<u64> },
    Reducible { factors: Vec<IntPoly> },
    Inconclusive,
}

/// Decide irreducibility over `Q`: rational-root screen, then up to
/// `prime_budget` primes looking for an irreducible reduction, then (if
/// `fallback` and degree <= 8) exact factorization.
pub fn irreducibility_over_q(h: &IntPoly, prime_budget: usize, fallback: bool) -> Result<Irreducibility> {
    if !h.is_monic() {
        return Err(Error::InvalidArgument(format!("{h} is not monic")));
    }
    if !h.is_squarefree() {
        return Err(Error::PolyNotSquarefree);
    }
    let d = h.degree();
    if d <= 1 {
        return Ok(Irreducibility::Irreducible { certificate_prime: None });
    }
    let roots = h.integer_roots();
    if let Some(r) = roots.first() {
        let factors = if d <= FALLBACK_MAX_DEGREE {
            factor_monic_squarefree(h)
        } else {
            let lin = IntPoly::linear(r);
            let rest = h.div_exact(&lin).expect("root divides");
            vec![lin, rest]
        };
        return Ok(Irreducibility::Reducible { factors });
    }
    let disc = h.discriminant();
    let mut l = 1u64;
    for _ in 0..prime_budget {
        l = crate::primes::next_prime(l + 1);
        if disc.mod_floor(&BigInt::from(l)).is_zero() {
            continue;
        }
        if Zp::new(l).is_irreducible(&h.reduce(l)) {
            return Ok(Irreducibility::Irreducible { certificate_prime: Some(l) });
        }
    }
    if fallback && d <= FALLBACK_MAX_DEGREE {
        let factors = factor_monic_squarefree(h);
        return Ok(if factors.len() == 1 {
            Irreducibility::Irreducible { certificate_prime: None }
        } else {
            Irreducibility::Reducible { factors }
        });
    }
    Ok(Irreducibility::Inconclusive)
}

pub fn poly_discriminant(h: &IntPoly) -> BigInt {
    h.discriminant()
}

/// `c_i = w^{g-i} c_{2g-i}` for `0 <= i <= g`, `h` monic of degree `2g`.
pub fn is_cm_symmetric(h: &IntPoly, w: &BigInt) -> bool {
    let d = h.degree();
    if d % 2 == 1 || !h.is_monic() {
        return false;
    }
    let g = d / 2;
    (0..=g).all(|i| h.coeff(i) == w.pow((g - i) as u32) * h.coeff(d - i))
}

/// The degree-`g` polynomial `h_real` with `h(T) = T^g h_real(T + w/T)`.
pub fn real_subfield_poly(h: &IntPoly, w: &BigInt) -> Result<IntPoly> {
    if !is_cm_symmetric(h, w) {
        return Err(Error::NotCMSymmetric);
    }
    let g = h.degree() / 2;
    let t2w = IntPoly::new(vec![w.clone(), BigInt::zero(), BigInt::from(1)]);
    let mut rem = h.clone();
    let mut real = vec![BigInt::zero(); g + 1];
    for j in (0..=g).rev() {
        let r = rem.coeff(g + j);
        if r.is_zero() {
            continue;
        }
        let term = t2w.pow(j as u32).shift(g - j).scale(&r);
        rem = rem.sub(&term);
        real[j] = r;
    }
    if !rem.is_zero() {
        return Err(Error::NotCMSymmetric);
    }
    Ok(IntPoly::new(real))
}

/// `T^g h_real(T + w/T)` as an integer polynomial.
pub fn lift_real_poly(h_real: &IntPoly, w: &BigInt) -> IntPoly {
    let g = h_real.degree();
    let t2w = IntPoly::new(vec![w.clone(), BigInt::zero(), BigInt::from(1)]);
    (0..=g).fold(IntPoly::zero(), |acc, j| {
        acc.add(&t2w.pow(j as u32).shift(g - j).scale(&h_real.coeff(j)))
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Sign {
    Plus,
    Minus,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Cycle {
    pub length: usize,
    pub sign: Sign,
}

impl Cycle {
    pub fn new(length: usize, sign: Sign) -> Self {
        Cycle { length, sign }
    }
}

/// Conjugacy invariant in `(Z/2)^g x| S_g`: a partition of `g` with a sign
/// per part. Text form `[(1,+),(2,-)]`, `Ramified`, `NonRegular`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum SignedCycleType {
    Cycles(Vec<Cycle>),
    Ramified,
    NonRegular,
}

impl SignedCycleType {
    /// Sorts the cycles into canonical order.
    pub fn from_cycles(mut cycles: Vec<Cycle>) -> Self {
        cycles.sort();
        SignedCycleType::Cycles(cycles)
    }

    pub fn identity(g: usize) -> Self {
        SignedCycleType::Cycles(vec![Cycle::new(1, Sign::Plus); g])
    }

    pub fn cycles(&self) -> Option<&[Cycle]> {
        match self {
            SignedCycleType::Cycles(c) => Some(c),
            _ => None,
        }
    }

    pub fn is_regular(&self) -> bool {
        matches!(self, SignedCycleType::Cycles(_))
    }

    /// All parts `(1, +)`: the split-completely class.
    pub fn is_split(&self) -> bool {
        self.cycles()
            .is_some_and(|c| c.iter().all(|x| x.length == 1 && x.sign == Sign::Plus))
    }

    pub fn genus(&self) -> Option<usize> {
        self.cycles().map(|c| c.iter().map(|x| x.length).sum())
    }

    /// Cycle lengths of the image in `S_g`, sorted.
    pub fn permutation_type(&self) -> Option<Vec<usize>> {
        self.cycles().map(|c| {
            let mut v: Vec<usize> = c.iter().map(|x| x.length).collect();
            v.sort_unstable();
            v
        })
    }

    pub fn minus_count(&self) -> Option<usize> {
        self.cycles().map(|c| c.iter().filter(|x| x.sign == Sign::Minus).count())
    }
}

impl fmt::Display for SignedCycleType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SignedCycleType::Ramified => write!(f, "Ramified"),
            SignedCycleType::NonRegular => write!(f, "NonRegular"),
            SignedCycleType::Cycles(c) => {
                write!(f, "[")?;
                for (i, x) in c.iter().enumerate() {
                    if i > 0 {
                        write!(f, ",")?;
                    }
                    let s = if x.sign == Sign::Plus { '+' } else { '-' };
                    write!(f, "({},{s})", x.length)?;
                }
                write!(f, "]")
            }
        }
    }
}

impl FromStr for SignedCycleType {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::InvalidArgument(format!("bad signed cycle type {s:?}"));
        let s = s.trim();
        match s {
            "Ramified" => return Ok(SignedCycleType::Ramified),
            "NonRegular" => return Ok(SignedCycleType::NonRegular),
            _ => {}
        }
        let inner = s.strip_prefix('[').and_then(|r| r.strip_suffix(']')).ok_or_else(bad)?;
        let compact: String = inner.chars().filter(|c| !c.is_whitespace()).collect();
        if compact.is_empty() {
            return Ok(SignedCycleType::Cycles(Vec::new()));
        }
        let mut cycles = Vec::new();
        for part in compact.split("),") {
            let part = part.trim_start_matches('(').trim_end_matches(')');
            let (len, sign) = part.split_once(',').ok_or_else(bad)?;
            let length: usize = len.parse().map_err(|_| bad())?;
            let sign = match sign {
                "+" => Sign::Plus,
                "-" => Sign::Minus,
                _ => return Err(bad()),
            };
            if length == 0 {
                return Err(bad());
            }
            cycles.push(Cycle::new(length, sign));
        }
        Ok(SignedCycleType::from_cycles(cycles))
    }
}

impl Serialize for SignedCycleType {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for SignedCycleType {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        use serde::de::Error as _;
        String::deserialize(d)?.parse().map_err(D::Error::custom)
    }
}

/// A CM-symmetric polynomial with its real-subfield polynomial and both
/// discriminants, ready for repeated classification at many primes.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CmPair {
    h: IntPoly,
    h_real: IntPoly,
    w: BigInt,
    disc_h: BigInt,
    disc_real: BigInt,
}

impl CmPair {
    pub fn new(h: &IntPoly, w: &BigInt) -> Result<Self> {
        let h_real = real_subfield_poly(h, w)?;
        Ok(Self::from_parts(h.clone(), h_real, w.clone()))
    }

    fn from_parts(h: IntPoly, h_real: IntPoly, w: BigInt) -> Self {
        let disc_h = h.discriminant();
        let disc_real = h_real.discriminant();
        CmPair { h, h_real, w, disc_h, disc_real }
    }

    /// Pair an explicit `h_real`; it must satisfy `T^g h_real(T + w/T) = h`.
    pub fn with_real(h: &IntPoly, h_real: &IntPoly, w: &BigInt) -> Result<Self> {
        if 2 * h_real.degree() != h.degree() || lift_real_poly(h_real, w) != *h {
            return Err(Error::NotCMSymmetric);
        }
        Ok(Self::from_parts(h.clone(), h_real.clone(), w.clone()))
    }

    pub fn h(&self) -> &IntPoly {
        &self.h
    }

    pub fn h_real(&self) -> &IntPoly {
        &self.h_real
    }

    pub fn weight(&self) -> &BigInt {
        &self.w
    }

    pub fn genus(&self) -> usize {
        self.h_real.degree()
    }

    pub fn disc_h(&self) -> &BigInt {
        &self.disc_h
    }

    pub fn disc_real(&self) -> &BigInt {
        &self.disc_real
    }

    pub fn is_ramified_at(&self, l: u64) -> bool {
        let lb = BigInt::from(l);
        self.disc_h.mod_floor(&lb).is_zero() || self.disc_real.mod_floor(&lb).is_zero()
    }

    pub fn signed_cycle_type(&self, l: u64) -> Result<SignedCycleType> {
        check_monic_prime(&self.h, l)?;
        if self.is_ramified_at(l) {
            return Ok(SignedCycleType::Ramified);
        }
        let zp = Zp::new(l);
        let real_factors = zp.factor(&self.h_real.reduce(l));
        let h_factors = zp.factor(&self.h.reduce(l));
        let wl = self.w.mod_floor(&BigInt::from(l)).to_u64().unwrap();
        let t2w = vec![wl, 0, 1];
        let mut used = vec![false; h_factors.len()];
        let mut cycles = Vec::with_capacity(real_factors.len());
        for (phi, e) in &real_factors {
            if *e != 1 {
                return Err(Error::InconsistentLift(l));
            }
            let k = phi.len() - 1;
            // H = T^k phi(T + w/T) mod l
            let mut lifted: Poly = Vec::new();
            let mut power = vec![1u64];
            for (j, &a) in phi.iter().enumerate() {
                let mut shifted = vec![0u64; k - j];
                shifted.extend(zp.scale(&power, a));
                lifted = zp.add(&lifted, &shifted);
                power = zp.mul(&power, &t2w);
            }
            let over: Vec<usize> = h_factors
                .iter()
                .enumerate()
                .filter(|(i, (psi, _))| !used[*i] && zp.rem(&lifted, psi).is_empty())
                .map(|(i, _)| i)
                .collect();
            let degs: Vec<usize> = over.iter().map(|&i| h_factors[i].0.len() - 1).collect();
            let sign = match degs.as_slice() {
                [a, b] if *a == k && *b == k => Sign::Plus,
                [a] if *a == 2 * k => Sign::Minus,
                _ => return Err(Error::InconsistentLift(l)),
            };
            for i in over {
                used[i] = true;
            }
            cycles.push(Cycle::new(k, sign));
        }
        if used.iter().any(|u| !u) || h_factors.iter().any(|(_, e)| *e != 1) {
            return Err(Error::InconsistentLift(l));
        }
        Ok(SignedCycleType::from_cycles(cycles))
    }
}

/// Signed cycle type of `h` at `l`, given its real-subfield polynomial and weight.
pub fn signed_cycle_type(h: &IntPoly, h_real: &IntPoly, w: &BigInt, l: u64) -> Result<SignedCycleType> {
    CmPair::with_real(h, h_real, w)?.signed_cycle_type(l)
}
