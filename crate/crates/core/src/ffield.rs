//! Prime fields `F_q` and their extensions `F_{q^m}`, each realized as a
//! single quotient ring `F_q[x]/(modulus)`.
//!
//! The modulus is the smallest monic irreducible of degree `m`, where monic
//! polynomials are ordered by their coefficient vectors read from the top
//! down (equivalently by the base-`q` integer `sum c_i q^i`). Elements are
//! indexed by the same integer, which gives a total order used for
//! deterministic scans and embeddings.

use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::modpoly::Zp;
use crate::primes::is_prime;

/// Default cap on the number of elements in any full-field scan.
pub const DEFAULT_ENUMERATION_CAP: u64 = 1 << 24;

/// Largest supported extension degree.
pub const MAX_EXTENSION_DEGREE: usize = 32;

const MAX_CHARACTERISTIC: u64 = 1 << 28;

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct FieldDescriptor {
    q: u64,
    m: usize,
    modulus: Vec<u64>,
    tag: u64,
}

/// An element of `F_{q^m}` as a little-endian residue vector, tagged with
/// the field it belongs to.
#[derive(Clone, Copy, PartialEq, Eq, Hash)]
pub struct FieldElement {
    coeffs: [u32; MAX_EXTENSION_DEGREE],
    m: u8,
    tag: u64,
}

impl fmt::Debug for FieldDescriptor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "F_{}^{} mod {:?}", self.q, self.m, self.modulus)
    }
}

impl fmt::Debug for FieldElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}", &self.coeffs[..self.m as usize])
    }
}

impl FieldElement {
    pub fn coeffs(&self) -> Vec<u64> {
        self.coeffs[..self.m as usize].iter().map(|&c| c as u64).collect()
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs[..self.m as usize].iter().all(|&c| c == 0)
    }

    /// `Some(c)` when the element lies in the prime field.
    pub fn as_prime_field(&self) -> Option<u64> {
        if self.coeffs[1..self.m as usize].iter().all(|&c| c == 0) {
            Some(self.coeffs[0] as u64)
        } else {
            None
        }
    }
}

fn fingerprint(q: u64, modulus: &[u64]) -> u64 {
    // FNV-1a over (q, modulus)
    let mut h: u64 = 0xcbf2_9ce4_8422_2325;
    for w in std::iter::once(q).chain(modulus.iter().copied()) {
        for byte in w.to_le_bytes() {
            h ^= byte as u64;
            h = h.wrapping_mul(0x0100_0000_01b3);
        }
    }
    h
}

/// `q^m`, or `None` on overflow.
pub fn checked_order(q: u64, m: usize) -> Option<u64> {
    let mut acc: u64 = 1;
    for _ in 0..m {
        acc = acc.checked_mul(q)?;
    }
    Some(acc)
}

/// Build `F_{q^m}` under the default enumeration cap.
pub fn build_field(q: u64, m: usize) -> Result<FieldDescriptor> {
    build_field_with_cap(q, m, DEFAULT_ENUMERATION_CAP)
}

pub fn build_field_with_cap(q: u64, m: usize, cap: u64) -> Result<FieldDescriptor> {
    if !is_prime(q) {
        return Err(Error::NotPrime(q));
    }
    if q == 2 {
        return Err(Error::EvenCharacteristic(q));
    }
    if q >= MAX_CHARACTERISTIC {
        return Err(Error::InvalidArgument(format!("characteristic {q} too large")));
    }
    if m == 0 || m > MAX_EXTENSION_DEGREE {
        return Err(Error::InvalidArgument(format!("extension degree {m} out of range")));
    }
    match checked_order(q, m) {
        Some(order) if order <= cap => {}
        Some(order) => {
            return Err(Error::BudgetExceeded {
                size: order.to_string(),
                cap,
            })
        }
        None => {
            return Err(Error::BudgetExceeded {
                size: format!("{q}^{m}"),
                cap,
            })
        }
    }
    let modulus = smallest_irreducible(q, m);
    Ok(FieldDescriptor::from_modulus(q, modulus))
}

/// Smallest monic irreducible of degree `m` in the top-down coefficient order.
fn smallest_irreducible(q: u64, m: usize) -> Vec<u64> {
    if m == 1 {
        return vec![0, 1];
    }
    let zp = Zp::new(q);
    let mut low = vec![0u64; m];
    loop {
        let mut f = low.clone();
        f.push(1);
        if low[0] != 0 && zp.is_irreducible(&f) {
            return f;
        }
        // increment the base-q counter, least significant digit first
        let mut i = 0;
        loop {
            low[i] += 1;
            if low[i] < q {
                break;
            }
            low[i] = 0;
            i += 1;
            assert!(i < m, "no irreducible of degree {m} over F_{q}");
        }
    }
}

impl FieldDescriptor {
    /// Wrap a caller-supplied monic irreducible modulus.
    pub fn with_modulus(q: u64, modulus: Vec<u64>) -> Result<Self> {
        if !is_prime(q) {
            return Err(Error::NotPrime(q));
        }
        if q == 2 {
            return Err(Error::EvenCharacteristic(q));
        }
        let zp = Zp::new(q);
        let m = modulus.len().saturating_sub(1);
        if m == 0 || m > MAX_EXTENSION_DEGREE || modulus.last() != Some(&1) || !zp.is_irreducible(&modulus) {
            return Err(Error::InvalidArgument("modulus must be monic irreducible".into()));
        }
        Ok(Self::from_modulus(q, modulus))
    }

    fn from_modulus(q: u64, modulus: Vec<u64>) -> Self {
        let m = modulus.len() - 1;
        let tag = fingerprint(q, &modulus);
        FieldDescriptor { q, m, modulus, tag }
    }

    pub fn q(&self) -> u64 {
        self.q
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn modulus(&self) -> &[u64] {
        &self.modulus
    }

    /// Number of elements, `q^m`.
    pub fn order(&self) -> u64 {
        checked_order(self.q, self.m).expect("order checked at construction")
    }

    pub fn contains(&self, a: &FieldElement) -> bool {
        a.tag == self.tag
    }

    fn raw(&self) -> FieldElement {
        FieldElement {
            coeffs: [0; MAX_EXTENSION_DEGREE],
            m: self.m as u8,
            tag: self.tag,
        }
    }

    pub fn zero(&self) -> FieldElement {
        self.raw()
    }

    pub fn one(&self) -> FieldElement {
        self.constant(1)
    }

    /// Image of an integer in the prime subfield.
    pub fn constant(&self, c: i64) -> FieldElement {
        let mut e = self.raw();
        e.coeffs[0] = c.rem_euclid(self.q as i64) as u32;
        e
    }

    /// The class of `x`.
    pub fn generator(&self) -> FieldElement {
        if self.m == 1 {
            // x = 0 in F_q[x]/(x)
            return self.zero();
        }
        let mut e = self.raw();
        e.coeffs[1] = 1;
        e
    }

    pub fn element(&self, coeffs: &[u64]) -> Result<FieldElement> {
        if coeffs.len() > self.m {
            return Err(Error::InvalidArgument(format!(
                "{} coefficients for a degree-{} extension",
                coeffs.len(),
                self.m
            )));
        }
        let mut e = self.raw();
        for (i, &c) in coeffs.iter().enumerate() {
            if c >= self.q {
                return Err(Error::InvalidArgument(format!("coefficient {c} not reduced mod {}", self.q)));
            }
            e.coeffs[i] = c as u32;
        }
        Ok(e)
    }

    pub fn from_index(&self, mut index: u64) -> FieldElement {
        let mut e = self.raw();
        for i in 0..self.m {
            e.coeffs[i] = (index % self.q) as u32;
            index /= self.q;
        }
        e
    }

    pub fn index(&self, a: &FieldElement) -> u64 {
        a.coeffs[..self.m]
            .iter()
            .rev()
            .fold(0u64, |acc, &c| acc * self.q + c as u64)
    }

    /// All elements in index order.
    pub fn elements(&self) -> impl Iterator<Item = FieldElement> + '_ {
        (0..self.order()).map(move |i| self.from_index(i))
    }

    pub fn add(&self, a: &FieldElement, b: &FieldElement) -> FieldElement {
        debug_assert!(self.contains(a) && self.contains(b));
        let q = self.q as u32;
        let mut e = self.raw();
        for i in 0..self.m {
            let s = a.coeffs[i] + b.coeffs[i];
            e.coeffs[i] = if s >= q { s - q } else { s };
        }
        e
    }

    pub fn neg(&self, a: &FieldElement) -> FieldElement {
        let q = self.q as u32;
        let mut e = self.raw();
        for i in 0..self.m {
            e.coeffs[i] = if a.coeffs[i] == 0 { 0 } else { q - a.coeffs[i] };
        }
        e
    }

    pub fn sub(&self, a: &FieldElement, b: &FieldElement) -> FieldElement {
        self.add(a, &self.neg(b))
    }

    pub fn mul(&self, a: &FieldElement, b: &FieldElement) -> FieldElement {
        debug_assert!(self.contains(a) && self.contains(b));
        let q = self.q;
        let m = self.m;
        let mut e = self.raw();
        if m == 1 {
            e.coeffs[0] = (a.coeffs[0] as u64 * b.coeffs[0] as u64 % q) as u32;
            return e;
        }
        let mut prod = [0u64; 2 * MAX_EXTENSION_DEGREE];
        for i in 0..m {
            let x = a.coeffs[i] as u64;
            if x == 0 {
                continue;
            }
            for j in 0..m {
                prod[i + j] += x * b.coeffs[j] as u64;
            }
        }
        for i in (m..2 * m - 1).rev() {
            let c = prod[i] % q;
            if c == 0 {
                continue;
            }
            let neg_c = q - c;
            for j in 0..m {
                prod[i - m + j] = (prod[i - m + j] + neg_c * self.modulus[j]) % q;
            }
        }
        for i in 0..m {
            e.coeffs[i] = (prod[i] % q) as u32;
        }
        e
    }

    pub fn pow(&self, a: &FieldElement, mut exp: u64) -> FieldElement {
        let mut acc = self.one();
        let mut base = *a;
        while exp > 0 {
            if exp & 1 == 1 {
                acc = self.mul(&acc, &base);
            }
            base = self.mul(&base, &base);
            exp >>= 1;
        }
        acc
    }

    pub fn inv(&self, a: &FieldElement) -> Result<FieldElement> {
        if a.is_zero() {
            return Err(Error::DivisionByZero);
        }
        Ok(self.pow(a, self.order() - 2))
    }

    /// `chi(a) = a^((q^m - 1)/2)` mapped to `{-1, 0, +1}`.
    pub fn quadratic_character(&self, a: &FieldElement) -> i8 {
        if a.is_zero() {
            return 0;
        }
        let r = self.pow(a, (self.order() - 1) / 2);
        if r == self.one() {
            1
        } else {
            debug_assert_eq!(r, self.constant(-1));
            -1
        }
    }

    /// Horner evaluation of a polynomial with coefficients in this field.
    pub fn eval_poly(&self, coeffs: &[FieldElement], x: &FieldElement) -> FieldElement {
        coeffs
            .iter()
            .rev()
            .fold(self.zero(), |acc, c| self.add(&self.mul(&acc, x), c))
    }
}

/// Operation selector for [`field_arith`].
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum FieldOp {
    Add,
    Sub,
    Mul,
    Inv,
    Neg,
    Pow(u64),
}

/// Checked arithmetic: operands must belong to `field`; binary operations
/// require `b`.
pub fn field_arith(
    field: &FieldDescriptor,
    op: FieldOp,
    a: &FieldElement,
    b: Option<&FieldElement>,
) -> Result<FieldElement> {
    if !field.contains(a) || b.is_some_and(|b| !field.contains(b)) {
        return Err(Error::DescriptorMismatch);
    }
    let rhs = || b.ok_or_else(|| Error::InvalidArgument(format!("{op:?} needs a second operand")));
    match op {
        FieldOp::Add => Ok(field.add(a, rhs()?)),
        FieldOp::Sub => Ok(field.sub(a, rhs()?)),
        FieldOp::Mul => Ok(field.mul(a, rhs()?)),
        FieldOp::Inv => field.inv(a),
        FieldOp::Neg => Ok(field.neg(a)),
        FieldOp::Pow(e) => Ok(field.pow(a, e)),
    }
}

/// A ring embedding `F_{q^k} -> F_{q^m}` for `k | m`, sending the generator
/// of the small field to the smallest-index root of its modulus.
#[derive(Clone, Debug)]
pub struct Embedding {
    small: Arc<FieldDescriptor>,
    big: Arc<FieldDescriptor>,
    /// Images of `1, x, ..., x^(k-1)`.
    basis: Vec<FieldElement>,
}

pub fn embed_subfield(big: &FieldDescriptor, small: &FieldDescriptor) -> Result<Embedding> {
    if small.q != big.q || big.m % small.m != 0 {
        return Err(Error::NotASubfield {
            small_q: small.q,
            small_m: small.m,
            big_q: big.q,
            big_m: big.m,
        });
    }
    let modulus: Vec<FieldElement> = small
        .modulus
        .iter()
        .map(|&c| big.constant(c as i64))
        .collect();
    let root = big
        .elements()
        .find(|x| big.eval_poly(&modulus, x).is_zero())
        .ok_or_else(|| Error::InternalError("subfield modulus has no root".into()))?;
    let mut basis = Vec::with_capacity(small.m);
    let mut power = big.one();
    for _ in 0..small.m {
        basis.push(power);
        power = big.mul(&power, &root);
    }
    Ok(Embedding {
        small: Arc::new(small.clone()),
        big: Arc::new(big.clone()),
        basis,
    })
}

impl Embedding {
    pub fn small(&self) -> &FieldDescriptor {
        &self.small
    }

    pub fn big(&self) -> &FieldDescriptor {
        &self.big
    }

    pub fn generator_image(&self) -> FieldElement {
        if self.small.m == 1 {
            self.big.zero()
        } else {
            self.basis[1]
        }
    }

    pub fn apply(&self, a: &FieldElement) -> Result<FieldElement> {
        if !self.small.contains(a) {
            return Err(Error::DescriptorMismatch);
        }
        let big = &self.big;
        let mut acc = big.zero();
        for (i, b) in self.basis.iter().enumerate() {
            let c = big.constant(a.coeffs[i] as i64);
            acc = big.add(&acc, &big.mul(&c, b));
        }
        Ok(acc)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn build_examples() {
        assert_eq!(build_field(5, 1).unwrap().modulus(), &[0, 1]);
        assert_eq!(build_field(5, 2).unwrap().modulus(), &[2, 0, 1]);
        assert_eq!(build_field(4, 1), Err(Error::NotPrime(4)));
        assert!(matches!(build_field(3, 30), Err(Error::BudgetExceeded { .. })));
    }

    #[test]
    fn smallest_quadratic_modulus_by_exhaustion() {
        // independent check: a monic quadratic over F_5 is irreducible iff it
        // has no root in F_5; walk candidates in top-down order
        let mut first = None;
        'outer: for c1 in 0..5u64 {
            for c0 in 0..5u64 {
                if (0..5u64).all(|x| (x * x + c1 * x + c0) % 5 != 0) {
                    first = Some(vec![c0, c1, 1]);
                    break 'outer;
                }
            }
        }
        assert_eq!(first.as_deref(), Some(&[2u64, 0, 1][..]));
    }

    #[test]
    fn arithmetic_examples() {
        let f5 = build_field(5, 1).unwrap();
        let two = f5.constant(2);
        assert_eq!(field_arith(&f5, FieldOp::Inv, &two, None).unwrap(), f5.constant(3));
        let f25 = build_field(5, 2).unwrap();
        let x = f25.generator();
        assert_eq!(field_arith(&f25, FieldOp::Mul, &x, Some(&x)).unwrap(), f25.constant(3));
        let f7 = build_field(7, 1).unwrap();
        assert_eq!(f7.pow(&f7.constant(3), 6), f7.one());
        assert_eq!(f5.inv(&f5.zero()), Err(Error::DivisionByZero));
        assert_eq!(
            field_arith(&f5, FieldOp::Add, &two, Some(&x)),
            Err(Error::DescriptorMismatch)
        );
    }

    #[test]
    fn character_examples() {
        let f5 = build_field(5, 1).unwrap();
        let f7 = build_field(7, 1).unwrap();
        assert_eq!(f5.quadratic_character(&f5.constant(4)), 1);
        assert_eq!(f7.quadratic_character(&f7.constant(3)), -1);
        assert_eq!(f7.quadratic_character(&f7.zero()), 0);
    }

    #[test]
    fn field_axioms_exhaustive() {
        for (q, m) in [(3, 1), (3, 2), (5, 2), (3, 3), (7, 2), (3, 4)] {
            let f = build_field(q, m).unwrap();
            let order = f.order();
            let mut squares = 0;
            for a in f.elements() {
                if a.is_zero() {
                    continue;
                }
                assert_eq!(f.pow(&a, order - 1), f.one(), "{q}^{m}");
                assert_eq!(f.mul(&a, &f.inv(&a).unwrap()), f.one());
                if f.quadratic_character(&a) == 1 {
                    squares += 1;
                }
            }
            assert_eq!(squares, (order - 1) / 2);
            // multiplicativity of chi on a sub-grid
            for a in f.elements().filter(|a| !a.is_zero()).step_by(3) {
                for b in f.elements().filter(|b| !b.is_zero()).step_by(5) {
                    assert_eq!(
                        f.quadratic_character(&f.mul(&a, &b)),
                        f.quadratic_character(&a) * f.quadratic_character(&b)
                    );
                }
            }
        }
    }

    #[test]
    fn index_roundtrip() {
        let f = build_field(5, 3).unwrap();
        for i in 0..f.order() {
            assert_eq!(f.index(&f.from_index(i)), i);
        }
    }

    #[test]
    fn embeddings() {
        let f5 = build_field(5, 1).unwrap();
        let f25 = build_field(5, 2).unwrap();
        let f625 = build_field(5, 4).unwrap();
        let f125 = build_field(5, 3).unwrap();
        let e = embed_subfield(&f25, &f5).unwrap();
        for a in f5.elements() {
            assert_eq!(e.apply(&a).unwrap().coeffs(), vec![a.coeffs()[0], 0]);
        }
        let e = embed_subfield(&f625, &f25).unwrap();
        let g = e.generator_image();
        let modulus: Vec<_> = f25.modulus().iter().map(|&c| f625.constant(c as i64)).collect();
        assert!(f625.eval_poly(&modulus, &g).is_zero());
        assert!(matches!(embed_subfield(&f125, &f25), Err(Error::NotASubfield { .. })));

        // injective ring homomorphism
        let mut seen = std::collections::HashSet::new();
        for a in f25.elements() {
            let ia = e.apply(&a).unwrap();
            assert!(seen.insert(f625.index(&ia)));
            for b in f25.elements().step_by(7) {
                let ib = e.apply(&b).unwrap();
                assert_eq!(e.apply(&f25.add(&a, &b)).unwrap(), f625.add(&ia, &ib));
                assert_eq!(e.apply(&f25.mul(&a, &b)).unwrap(), f625.mul(&ia, &ib));
            }
        }

        // composition along F_5 -> F_25 -> F_625 agrees with the direct map
        let low = embed_subfield(&f25, &f5).unwrap();
        let direct = embed_subfield(&f625, &f5).unwrap();
        for a in f5.elements() {
            let via = e.apply(&low.apply(&a).unwrap()).unwrap();
            assert_eq!(via, direct.apply(&a).unwrap());
        }
    }

    #[test]
    fn chained_embeddings_land_in_the_same_subfield() {
        let f9 = build_field(3, 2).unwrap();
        let f81 = build_field(3, 4).unwrap();
        let f6561 = build_field(3, 8).unwrap();
        let lo = embed_subfield(&f81, &f9).unwrap();
        let hi = embed_subfield(&f6561, &f81).unwrap();
        let direct = embed_subfield(&f6561, &f9).unwrap();
        let mut via: Vec<u64> = f9
            .elements()
            .map(|a| f6561.index(&hi.apply(&lo.apply(&a).unwrap()).unwrap()))
            .collect();
        let mut straight: Vec<u64> = f9
            .elements()
            .map(|a| f6561.index(&direct.apply(&a).unwrap()))
            .collect();
        via.sort_unstable();
        straight.sort_unstable();
        assert_eq!(via, straight);
    }
}
