//! Dense polynomials over `Z` with arbitrary-precision coefficients.

use std::cmp::Ordering;
use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::modpoly::{Poly, Zp};

/// Little-endian integer coefficients without trailing zeros.
/// Serializes as a list of decimal strings.
#[derive(Clone, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
#[serde(transparent)]
pub struct IntPoly(#[serde(with = "crate::decimal::bigint_vec")] Vec<BigInt>);

impl fmt::Debug for IntPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl fmt::Display for IntPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return write!(f, "0");
        }
        let mut first = true;
        for (i, c) in self.0.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            let sign = if c.is_negative() { "-" } else { "+" };
            if first {
                if c.is_negative() {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {sign} ")?;
            }
            first = false;
            let a = c.abs();
            match i {
                0 => write!(f, "{a}")?,
                _ => {
                    if !a.is_one() {
                        write!(f, "{a}*")?;
                    }
                    if i == 1 {
                        write!(f, "T")?;
                    } else {
                        write!(f, "T^{i}")?;
                    }
                }
            }
        }
        Ok(())
    }
}

impl IntPoly {
    pub fn new(mut coeffs: Vec<BigInt>) -> Self {
        while coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        IntPoly(coeffs)
    }

    pub fn from_i64(coeffs: &[i64]) -> Self {
        Self::new(coeffs.iter().map(|&c| BigInt::from(c)).collect())
    }

    pub fn zero() -> Self {
        IntPoly(Vec::new())
    }

    pub fn one() -> Self {
        IntPoly(vec![BigInt::one()])
    }

    /// `T - r`
    pub fn linear(r: &BigInt) -> Self {
        IntPoly(vec![-r, BigInt::one()])
    }

    pub fn coeffs(&self) -> &[BigInt] {
        &self.0
    }

    pub fn coeff(&self, i: usize) -> BigInt {
        self.0.get(i).cloned().unwrap_or_default()
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_empty()
    }

    /// Degree; the zero polynomial reports 0.
    pub fn degree(&self) -> usize {
        self.0.len().saturating_sub(1)
    }

    pub fn lc(&self) -> BigInt {
        self.0.last().cloned().unwrap_or_default()
    }

    pub fn is_monic(&self) -> bool {
        self.0.last().is_some_and(|c| c.is_one())
    }

    pub fn eval(&self, x: &BigInt) -> BigInt {
        self.0.iter().rev().fold(BigInt::zero(), |acc, c| acc * x + c)
    }

    pub fn eval_rational(&self, x: &BigRational) -> BigRational {
        self.0
            .iter()
            .rev()
            .fold(BigRational::zero(), |acc, c| acc * x + BigRational::from_integer(c.clone()))
    }

    pub fn eval_f64(&self, x: f64) -> f64 {
        self.0
            .iter()
            .rev()
            .fold(0.0, |acc, c| acc * x + c.to_f64().unwrap_or(f64::NAN))
    }

    pub fn add(&self, other: &Self) -> Self {
        let n = self.0.len().max(other.0.len());
        Self::new((0..n).map(|i| self.coeff(i) + other.coeff(i)).collect())
    }

    pub fn sub(&self, other: &Self) -> Self {
        let n = self.0.len().max(other.0.len());
        Self::new((0..n).map(|i| self.coeff(i) - other.coeff(i)).collect())
    }

    pub fn neg(&self) -> Self {
        IntPoly(self.0.iter().map(|c| -c).collect())
    }

    pub fn scale(&self, c: &BigInt) -> Self {
        Self::new(self.0.iter().map(|x| x * c).collect())
    }

    pub fn mul(&self, other: &Self) -> Self {
        if self.is_zero() || other.is_zero() {
            return Self::zero();
        }
        let mut out = vec![BigInt::zero(); self.0.len() + other.0.len() - 1];
        for (i, a) in self.0.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.0.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        Self::new(out)
    }

    pub fn pow(&self, e: u32) -> Self {
        (0..e).fold(Self::one(), |acc, _| acc.mul(self))
    }

    /// Multiply by `T^k`.
    pub fn shift(&self, k: usize) -> Self {
        if self.is_zero() {
            return Self::zero();
        }
        let mut v = vec![BigInt::zero(); k];
        v.extend(self.0.iter().cloned());
        IntPoly(v)
    }

    pub fn derivative(&self) -> Self {
        Self::new(
            self.0
                .iter()
                .enumerate()
                .skip(1)
                .map(|(i, c)| c * BigInt::from(i))
                .collect(),
        )
    }

    /// Reduction modulo a prime `l < 2^32`.
    pub fn reduce(&self, l: u64) -> Poly {
        let zp = Zp::new(l);
        let lb = BigInt::from(l);
        let v: Vec<u64> = self
            .0
            .iter()
            .map(|c| c.mod_floor(&lb).to_u64().expect("residue fits"))
            .collect();
        zp.normalize(&v)
    }

    /// Lift residues with symmetric representatives in `(-m/2, m/2]`.
    pub fn from_residues_symmetric(residues: &[BigInt], modulus: &BigInt) -> Self {
        let half = modulus / 2;
        Self::new(
            residues
                .iter()
                .map(|r| {
                    let r = r.mod_floor(modulus);
                    if r > half {
                        r - modulus
                    } else {
                        r
                    }
                })
                .collect(),
        )
    }

    pub fn content(&self) -> BigInt {
        self.0.iter().fold(BigInt::zero(), |acc, c| acc.gcd(c))
    }

    /// Primitive part with positive leading coefficient.
    pub fn primitive_part(&self) -> Self {
        if self.is_zero() {
            return Self::zero();
        }
        let mut c = self.content();
        if self.lc().is_negative() {
            c = -c;
        }
        Self::new(self.0.iter().map(|x| x / &c).collect())
    }

    /// Division by a monic divisor: `(quotient, remainder)`.
    pub fn divrem_monic(&self, d: &Self) -> (Self, Self) {
        assert!(d.is_monic(), "divisor must be monic");
        let dd = d.degree();
        let mut r = self.0.clone();
        if r.len() < d.0.len() {
            return (Self::zero(), self.clone());
        }
        let mut q = vec![BigInt::zero(); r.len() - dd];
        for i in (dd..r.len()).rev() {
            let c = r[i].clone();
            if c.is_zero() {
                continue;
            }
            for j in 0..=dd {
                r[i - dd + j] -= &c * &d.0[j];
            }
            q[i - dd] = c;
        }
        r.truncate(dd);
        (Self::new(q), Self::new(r))
    }

    /// Exact quotient `self / d` over `Z` when `d` divides `self`.
    pub fn div_exact(&self, d: &Self) -> Option<Self> {
        if d.is_zero() {
            return None;
        }
        let dd = d.degree();
        let lc = d.lc();
        let mut r = self.0.clone();
        if r.len() < d.0.len() {
            return if self.is_zero() { Some(Self::zero()) } else { None };
        }
        let mut q = vec![BigInt::zero(); r.len() - dd];
        for i in (dd..r.len()).rev() {
            if r[i].is_zero() {
                continue;
            }
            let (c, rem) = r[i].div_rem(&lc);
            if !rem.is_zero() {
                return None;
            }
            for j in 0..=dd {
                r[i - dd + j] -= &c * &d.0[j];
            }
            q[i - dd] = c;
        }
        if r.iter().all(|c| c.is_zero()) {
            Some(Self::new(q))
        } else {
            None
        }
    }

    /// Pseudo-remainder: `lc(d)^(deg a - deg d + 1) * a mod d`.
    pub fn pseudo_rem(&self, d: &Self) -> Self {
        let dd = d.degree();
        if self.is_zero() || self.degree() < dd {
            return self.clone();
        }
        let lc = d.lc();
        let mut r = self.clone();
        let mut steps = self.degree() - dd + 1;
        while !r.is_zero() && r.degree() >= dd {
            let k = r.degree() - dd;
            let top = r.lc();
            r = r.scale(&lc).sub(&d.shift(k).scale(&top));
            steps -= 1;
        }
        // account for the missing scalings so the result is exactly prem
        r.scale(&lc.pow(steps as u32))
    }

    /// Primitive gcd over `Q`, normalized to positive leading coefficient.
    pub fn gcd(&self, other: &Self) -> Self {
        let mut a = self.primitive_part();
        let mut b = other.primitive_part();
        if a.degree() < b.degree() {
            std::mem::swap(&mut a, &mut b);
        }
        while !b.is_zero() {
            let r = a.pseudo_rem(&b);
            a = b;
            b = r.primitive_part();
        }
        a.primitive_part()
    }

    /// `true` when `gcd(f, f')` is constant.
    pub fn is_squarefree(&self) -> bool {
        self.degree() == 0 || self.gcd(&self.derivative()).degree() == 0
    }

    /// `f / gcd(f, f')`, primitive.
    pub fn squarefree_part(&self) -> Self {
        let g = self.gcd(&self.derivative());
        if g.degree() == 0 {
            return self.primitive_part();
        }
        self.primitive_part()
            .div_exact(&g)
            .expect("gcd divides")
            .primitive_part()
    }

    /// Resultant by fraction-free elimination on the Sylvester matrix.
    pub fn resultant(&self, other: &Self) -> BigInt {
        let (m, n) = (self.degree(), other.degree());
        if self.is_zero() || other.is_zero() {
            return BigInt::zero();
        }
        if m == 0 && n == 0 {
            return BigInt::one();
        }
        let size = m + n;
        let mut mat = vec![vec![BigInt::zero(); size]; size];
        for row in 0..n {
            for (j, c) in self.0.iter().rev().enumerate() {
                mat[row][row + j] = c.clone();
            }
        }
        for row in 0..m {
            for (j, c) in other.0.iter().rev().enumerate() {
                mat[n + row][row + j] = c.clone();
            }
        }
        bareiss_determinant(mat)
    }

    /// `disc(h) = (-1)^(d(d-1)/2) Res(h, h') / lc(h)`.
    pub fn discriminant(&self) -> BigInt {
        let d = self.degree();
        if d == 0 {
            return BigInt::one();
        }
        let res = self.resultant(&self.derivative());
        let sign = if (d * (d - 1) / 2) % 2 == 0 { 1 } else { -1 };
        let (q, r) = res.div_rem(&self.lc());
        debug_assert!(r.is_zero());
        q * BigInt::from(sign)
    }

    /// Sign of `self` as `x -> +infinity` or `-infinity`.
    fn sign_at_infinity(&self, positive: bool) -> Ordering {
        let s = self.lc().sign();
        let flip = !positive && self.degree() % 2 == 1;
        let c = match s {
            num_bigint::Sign::Plus => Ordering::Greater,
            num_bigint::Sign::Minus => Ordering::Less,
            num_bigint::Sign::NoSign => Ordering::Equal,
        };
        if flip {
            c.reverse()
        } else {
            c
        }
    }

    /// Sturm chain built from pseudo-remainders with sign correction.
    pub fn sturm_chain(&self) -> Vec<IntPoly> {
        let mut chain = vec![self.clone(), self.derivative()];
        loop {
            let n = chain.len();
            let (a, b) = (&chain[n - 2], &chain[n - 1]);
            if b.is_zero() || b.degree() == 0 {
                break;
            }
            let k = (a.degree() - b.degree() + 1) as u32;
            let r = a.pseudo_rem(b);
            if r.is_zero() {
                break;
            }
            // prem = lc(b)^k * rem; remove the sign of lc(b)^k, then negate
            let neg_scale = b.lc().is_negative() && k % 2 == 1;
            let mut next = r.primitive_part_keep_sign();
            if !neg_scale {
                next = next.neg();
            }
            chain.push(next);
        }
        chain
    }

    fn primitive_part_keep_sign(&self) -> Self {
        let c = self.content();
        if c.is_zero() {
            return Self::zero();
        }
        Self::new(self.0.iter().map(|x| x / &c).collect())
    }

    /// Number of distinct real roots.
    pub fn count_real_roots(&self) -> usize {
        if self.degree() == 0 {
            return 0;
        }
        let chain = self.sturm_chain();
        let changes = |positive: bool| {
            sign_changes(chain.iter().map(|p| p.sign_at_infinity(positive)))
        };
        changes(false) - changes(true)
    }

    /// Number of distinct real roots in the half-open interval `(a, b]`.
    pub fn count_real_roots_in(&self, a: &BigRational, b: &BigRational) -> usize {
        let chain = self.sturm_chain();
        let at = |x: &BigRational| {
            sign_changes(chain.iter().map(|p| p.eval_rational(x).cmp(&BigRational::zero())))
        };
        at(a).saturating_sub(at(b))
    }

    /// Approximations of the distinct real roots, by Sturm bisection.
    pub fn real_roots_approx(&self) -> Vec<f64> {
        let total = self.count_real_roots();
        if total == 0 {
            return Vec::new();
        }
        // Cauchy bound
        let lc = self.lc().abs();
        let max = self.0.iter().map(|c| c.abs()).max().unwrap_or_default();
        let bound = BigRational::new(max + &lc, lc) + BigRational::one();
        let mut out = Vec::new();
        let mut stack = vec![(-bound.clone(), bound)];
        while let Some((a, b)) = stack.pop() {
            let k = self.count_real_roots_in(&a, &b);
            if k == 0 {
                continue;
            }
            let width = &b - &a;
            let tiny = width.to_f64().unwrap_or(1.0).abs()
                <= 1e-14 * (1.0 + b.to_f64().unwrap_or(0.0).abs());
            if k == 1 && tiny {
                out.push(b.to_f64().unwrap_or(f64::NAN));
                continue;
            }
            let mid = (&a + &b) / BigRational::from_integer(BigInt::from(2));
            stack.push((a, mid.clone()));
            stack.push((mid, b));
        }
        out.sort_by(|x, y| x.partial_cmp(y).unwrap_or(Ordering::Equal));
        out
    }

    /// Integer roots via numeric approximation and exact confirmation.
    pub fn integer_roots(&self) -> Vec<BigInt> {
        if self.is_zero() {
            return Vec::new();
        }
        let mut roots = Vec::new();
        if self.coeff(0).is_zero() {
            roots.push(BigInt::zero());
        }
        for r in self.real_roots_approx() {
            let Some(center) = BigInt::from_f64_rounded(r) else {
                continue;
            };
            for delta in -1..=1 {
                let cand = &center + BigInt::from(delta);
                if !roots.contains(&cand) && self.eval(&cand).is_zero() {
                    roots.push(cand);
                }
            }
        }
        roots.sort();
        roots
    }
}

trait FromF64Rounded: Sized {
    fn from_f64_rounded(x: f64) -> Option<Self>;
}

impl FromF64Rounded for BigInt {
    fn from_f64_rounded(x: f64) -> Option<Self> {
        if !x.is_finite() {
            return None;
        }
        num_traits::FromPrimitive::from_f64(x.round())
    }
}

fn sign_changes(signs: impl Iterator<Item = Ordering>) -> usize {
    let mut last = Ordering::Equal;
    let mut count = 0;
    for s in signs {
        if s == Ordering::Equal {
            continue;
        }
        if last != Ordering::Equal && s != last {
            count += 1;
        }
        last = s;
    }
    count
}

/// Determinant by Bareiss fraction-free elimination with row pivoting.
pub fn bareiss_determinant(mut a: Vec<Vec<BigInt>>) -> BigInt {
    let n = a.len();
    if n == 0 {
        return BigInt::one();
    }
    let mut sign = BigInt::one();
    let mut prev = BigInt::one();
    for k in 0..n - 1 {
        if a[k][k].is_zero() {
            match (k + 1..n).find(|&r| !a[r][k].is_zero()) {
                Some(r) => {
                    a.swap(k, r);
                    sign = -sign;
                }
                None => return BigInt::zero(),
            }
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let v = &a[i][j] * &a[k][k] - &a[i][k] * &a[k][j];
                a[i][j] = v / &prev;
            }
        }
        prev = a[k][k].clone();
    }
    sign * a[n - 1][n - 1].clone()
}
