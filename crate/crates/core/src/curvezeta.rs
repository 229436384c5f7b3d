//! The one-parameter family `y^2 = (x - t) * prod_{i=1}^{2g} (x - i)` over
//! `F_{q^n}`: point counts over extensions and the Frobenius characteristic
//! polynomial recovered from them.

use std::sync::Arc;

use num_bigint::BigInt;
use num_complex::Complex;
use num_integer::binomial;
use num_traits::{Float, One, Signed, ToPrimitive, Zero};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::ffield::{build_field_with_cap, embed_subfield, Embedding, FieldDescriptor, FieldElement, DEFAULT_ENUMERATION_CAP};
use crate::intpoly::IntPoly;
use crate::roots::aberth_roots;

/// Default relative tolerance on root moduli.
pub const ROOT_MODULUS_TOLERANCE: f64 = 1e-9;

#[derive(Clone, Debug)]
pub struct Curve {
    g: usize,
    n: usize,
    base: Arc<FieldDescriptor>,
    t: FieldElement,
    f: Vec<FieldElement>,
}

impl Curve {
    pub fn genus(&self) -> usize {
        self.g
    }

    pub fn q(&self) -> u64 {
        self.base.q()
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn base(&self) -> &FieldDescriptor {
        &self.base
    }

    pub fn t(&self) -> &FieldElement {
        &self.t
    }

    /// Coefficients of `f`, little-endian, over the base field.
    pub fn f_coeffs(&self) -> &[FieldElement] {
        &self.f
    }

    /// `q^n`
    pub fn weight(&self) -> BigInt {
        BigInt::from(self.q()).pow(self.n as u32)
    }
}

/// Specialize the family at `t` over the given base field `F_{q^n}`.
pub fn specialize_curve(g: usize, base: &FieldDescriptor, t: &FieldElement) -> Result<Curve> {
    if g == 0 {
        return Err(Error::InvalidArgument("genus must be at least 1".into()));
    }
    let q = base.q();
    if q <= 2 * g as u64 {
        return Err(Error::GenusPrimeConflict { q, two_g: 2 * g });
    }
    if !base.contains(t) {
        return Err(Error::DescriptorMismatch);
    }
    if (1..=2 * g as i64).any(|i| base.constant(i) == *t) {
        return Err(Error::NotSquarefree(format!("{:?}", t.coeffs())));
    }
    // expand (x - t) * prod (x - i)
    let mut f = vec![base.neg(t), base.one()];
    for i in 1..=2 * g as i64 {
        let root = base.constant(i);
        let mut next = vec![base.zero(); f.len() + 1];
        for (k, c) in f.iter().enumerate() {
            next[k + 1] = base.add(&next[k + 1], c);
            next[k] = base.sub(&next[k], &base.mul(c, &root));
        }
        f = next;
    }
    Ok(Curve {
        g,
        n: base.m(),
        base: Arc::new(base.clone()),
        t: *t,
        f,
    })
}

/// Build `F_{q^n}` and specialize at the element with the given coefficients.
pub fn specialize_curve_at(g: usize, q: u64, n: usize, t: &[u64]) -> Result<Curve> {
    let base = build_field_with_cap(q, n, DEFAULT_ENUMERATION_CAP)?;
    if q <= 2 * g as u64 {
        return Err(Error::GenusPrimeConflict { q, two_g: 2 * g });
    }
    let t = base.element(t)?;
    specialize_curve(g, &base, &t)
}

struct Level {
    field: FieldDescriptor,
    embedding: Option<Embedding>,
}

/// Extension fields `F_{q^{nm}}`, `m = 1..=max_m`, with embeddings of the base
/// field, shared by every curve over the same `F_{q^n}`.
pub struct CountingContext {
    base: FieldDescriptor,
    levels: Vec<Level>,
}

impl CountingContext {
    pub fn new(q: u64, n: usize, max_m: usize, cap: u64) -> Result<Self> {
        let base = build_field_with_cap(q, n, cap)?;
        let mut levels = Vec::with_capacity(max_m);
        for m in 1..=max_m {
            if m == 1 {
                levels.push(Level { field: base.clone(), embedding: None });
                continue;
            }
            let field = build_field_with_cap(q, n * m, cap)?;
            let embedding = embed_subfield(&field, &base)?;
            levels.push(Level { field, embedding: Some(embedding) });
        }
        Ok(CountingContext { base, levels })
    }

    /// Context sized for [`zeta_numerator`] on genus-`g` curves.
    pub fn for_genus(q: u64, n: usize, g: usize, cap: u64) -> Result<Self> {
        Self::new(q, n, g, cap)
    }

    pub fn base(&self) -> &FieldDescriptor {
        &self.base
    }

    pub fn max_m(&self) -> usize {
        self.levels.len()
    }

    fn level(&self, curve: &Curve, m: usize) -> Result<(&FieldDescriptor, Vec<FieldElement>)> {
        if curve.base.as_ref() != &self.base {
            return Err(Error::DescriptorMismatch);
        }
        let level = self.levels.get(m.wrapping_sub(1)).ok_or_else(|| {
            Error::InvalidArgument(format!("extension degree {m} outside 1..={}", self.levels.len()))
        })?;
        let f = match &level.embedding {
            None => curve.f.clone(),
            Some(e) => curve.f.iter().map(|c| e.apply(c)).collect::<Result<_>>()?,
        };
        Ok((&level.field, f))
    }

    /// `#C(F_{q^{nm}})` by the character sum `1 + sum_x (1 + chi(f(x)))`.
    pub fn count(&self, curve: &Curve, m: usize) -> Result<u64> {
        let (field, f) = self.level(curve, m)?;
        let order = field.order();
        let chi_sum: i64 = (0..order)
            .into_par_iter()
            .map(|i| {
                let x = field.from_index(i);
                field.quadratic_character(&field.eval_poly(&f, &x)) as i64
            })
            .sum();
        Ok((1 + order as i64 + chi_sum) as u64)
    }

    /// `#C(F_{q^{nm}})` by tabulating square roots: for each `x`, the number
    /// of `y` with `y^2 = f(x)`. Independent of the character route.
    pub fn count_direct(&self, curve: &Curve, m: usize) -> Result<u64> {
        let (field, f) = self.level(curve, m)?;
        let order = field.order();
        let mut roots_of = vec![0u8; order as usize];
        for y in field.elements() {
            let sq = field.mul(&y, &y);
            roots_of[field.index(&sq) as usize] += 1;
        }
        let affine: u64 = field
            .elements()
            .map(|x| roots_of[field.index(&field.eval_poly(&f, &x)) as usize] as u64)
            .sum();
        Ok(affine + 1)
    }

    /// Frobenius characteristic polynomial from the counts over `m = 1..=g`.
    pub fn zeta_numerator(&self, curve: &Curve) -> Result<WeilPolynomial> {
        let g = curve.g;
        if self.levels.len() < g {
            return Err(Error::InvalidArgument(format!(
                "context covers m <= {}, genus {g} needs m <= {g}",
                self.levels.len()
            )));
        }
        let counts: Vec<u64> = (1..=g).map(|m| self.count(curve, m)).collect::<Result<_>>()?;
        Ok(WeilPolynomial::from_counts(g, curve.q(), curve.n, &counts))
    }
}

/// `#C(F_{q^{nm}})` for a single curve (builds the extension on the fly).
pub fn count_points(curve: &Curve, m: usize) -> Result<u64> {
    count_points_with_cap(curve, m, DEFAULT_ENUMERATION_CAP)
}

pub fn count_points_with_cap(curve: &Curve, m: usize, cap: u64) -> Result<u64> {
    let ctx = CountingContext::single(curve, m, cap)?;
    ctx.count(curve, m)
}

/// Direct `(x, y)` enumeration count for a single curve.
pub fn count_points_direct(curve: &Curve, m: usize) -> Result<u64> {
    let ctx = CountingContext::single(curve, m, DEFAULT_ENUMERATION_CAP)?;
    ctx.count_direct(curve, m)
}

impl CountingContext {
    fn single(curve: &Curve, m: usize, cap: u64) -> Result<Self> {
        if m == 0 {
            return Err(Error::InvalidArgument("extension degree must be positive".into()));
        }
        let base = curve.base.as_ref().clone();
        let mut levels: Vec<Level> = (1..m)
            .map(|_| Level { field: base.clone(), embedding: None })
            .collect();
        if m == 1 {
            levels.push(Level { field: base.clone(), embedding: None });
        } else {
            let field = build_field_with_cap(base.q(), base.m() * m, cap)?;
            let embedding = embed_subfield(&field, &base)?;
            levels.push(Level { field, embedding: Some(embedding) });
        }
        Ok(CountingContext { base, levels })
    }
}

pub fn zeta_numerator(curve: &Curve) -> Result<WeilPolynomial> {
    let ctx = CountingContext::for_genus(curve.q(), curve.n, curve.g, DEFAULT_ENUMERATION_CAP)?;
    ctx.zeta_numerator(curve)
}

/// Monic characteristic polynomial of Frobenius, degree `2g`, with its
/// `(g, q, n)` context. The reciprocal numerator `P(T) = T^{2g} h(1/T)` is
/// available through [`WeilPolynomial::reciprocal`].
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct WeilPolynomial {
    h: IntPoly,
    g: usize,
    q: u64,
    n: usize,
    #[serde(with = "crate::decimal::bigint")]
    weight: BigInt,
}

impl WeilPolynomial {
    /// Wrap an arbitrary monic polynomial with a weight; no validation.
    pub fn new(h: IntPoly, g: usize, q: u64, n: usize) -> Self {
        let weight = BigInt::from(q).pow(n as u32);
        WeilPolynomial { h, g, q, n, weight }
    }

    /// Wrap a polynomial with an explicit weight `w` (for inputs not coming
    /// from a curve, e.g. `w = 1`).
    pub fn with_weight(h: IntPoly, weight: BigInt) -> Self {
        let g = h.degree() / 2;
        WeilPolynomial { h, g, q: 0, n: 0, weight }
    }

    /// Newton's identities on `s_m = q^{nm} + 1 - N_m`, `m = 1..=g`, then the
    /// functional equation for the upper half.
    pub fn from_counts(g: usize, q: u64, n: usize, counts: &[u64]) -> Self {
        assert_eq!(counts.len(), g, "need counts over F_{{q^(nm)}}, m = 1..=g");
        let w = BigInt::from(q).pow(n as u32);
        let s: Vec<BigInt> = counts
            .iter()
            .enumerate()
            .map(|(i, &c)| w.pow(i as u32 + 1) + BigInt::one() - BigInt::from(c))
            .collect();
        let mut e = vec![BigInt::one()];
        for k in 1..=g {
            let mut acc = BigInt::zero();
            for i in 1..=k {
                let term = &e[k - i] * &s[i - 1];
                if i % 2 == 1 {
                    acc += term;
                } else {
                    acc -= term;
                }
            }
            let kb = BigInt::from(k);
            debug_assert!((&acc % &kb).is_zero(), "Newton step not integral");
            e.push(acc / kb);
        }
        e.resize(2 * g + 1, BigInt::zero());
        for k in 0..g {
            e[2 * g - k] = w.pow((g - k) as u32) * &e[k];
        }
        let mut coeffs = vec![BigInt::zero(); 2 * g + 1];
        for (k, ek) in e.iter().enumerate() {
            let c = if k % 2 == 0 { ek.clone() } else { -ek };
            coeffs[2 * g - k] = c;
        }
        WeilPolynomial { h: IntPoly::new(coeffs), g, q, n, weight: w }
    }

    pub fn h(&self) -> &IntPoly {
        &self.h
    }

    pub fn genus(&self) -> usize {
        self.g
    }

    pub fn q(&self) -> u64 {
        self.q
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn weight(&self) -> &BigInt {
        &self.weight
    }

    /// `P(T) = T^{2g} h(1/T)`.
    pub fn reciprocal(&self) -> IntPoly {
        let mut c: Vec<BigInt> = self.h.coeffs().to_vec();
        c.resize(2 * self.g + 1, BigInt::zero());
        c.reverse();
        IntPoly::new(c)
    }

    /// Power sums of the roots, `s_1..=s_k`, from the coefficients.
    pub fn power_sums(&self, k: usize) -> Vec<BigInt> {
        let d = 2 * self.g;
        // e_i = (-1)^i c_{d-i}
        let e: Vec<BigInt> = (0..=d)
            .map(|i| {
                let c = self.h.coeff(d - i);
                if i % 2 == 0 {
                    c
                } else {
                    -c
                }
            })
            .collect();
        let mut s: Vec<BigInt> = Vec::with_capacity(k);
        for m in 1..=k {
            let mut acc = BigInt::zero();
            for i in 1..m {
                if i > d {
                    break;
                }
                let term = &e[i] * &s[m - i - 1];
                if i % 2 == 1 {
                    acc += term;
                } else {
                    acc -= term;
                }
            }
            if m <= d {
                let term = BigInt::from(m) * &e[m];
                if m % 2 == 1 {
                    acc += term;
                } else {
                    acc -= term;
                }
            }
            s.push(acc);
        }
        s
    }

    /// Point counts over `F_{q^{nm}}`, `m = 1..=k`, implied by `h`.
    pub fn predicted_counts(&self, k: usize) -> Vec<BigInt> {
        self.power_sums(k)
            .into_iter()
            .enumerate()
            .map(|(i, s)| self.weight.pow(i as u32 + 1) + BigInt::one() - s)
            .collect()
    }
}

/// Outcome of [`validate_weil`], one flag per check.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct WeilReport {
    pub functional_equation: bool,
    pub root_moduli: bool,
    pub coefficient_bounds: bool,
    /// Largest `| |root| - sqrt(w) | / sqrt(w)` observed.
    pub max_relative_deviation: f64,
}

impl WeilReport {
    pub fn passed(&self) -> bool {
        self.functional_equation && self.root_moduli && self.coefficient_bounds
    }
}

/// Exact functional equation `b_{2g-i} = w^{g-i} b_i` on `P(T)`.
pub fn functional_equation_holds(p: &WeilPolynomial) -> bool {
    let d = 2 * p.g;
    if p.h.degree() != d || !p.h.is_monic() {
        return false;
    }
    let b = |j: usize| p.h.coeff(d - j);
    (0..=p.g).all(|i| b(d - i) == p.weight.pow((p.g - i) as u32) * b(i))
}

/// `|c_{2g-i}| <= C(2g, i) w^{i/2}`, compared in squares.
pub fn coefficient_bounds_hold(p: &WeilPolynomial) -> bool {
    let d = 2 * p.g;
    (1..=d).all(|i| {
        let c = p.h.coeff(d - i);
        let bin = binomial(BigInt::from(d), BigInt::from(i));
        &c * &c <= &bin * &bin * p.weight.pow(i as u32)
    })
}

/// Largest relative deviation of a root modulus from `sqrt(w)`, computed on
/// the squarefree part after scaling `T = sqrt(w) U`.
pub fn root_modulus_deviation<F: Float>(p: &WeilPolynomial) -> F {
    let sf = p.h.squarefree_part();
    let d = sf.degree();
    if d == 0 {
        return F::zero();
    }
    let w = F::from(p.weight.to_f64().unwrap_or(f64::INFINITY)).unwrap();
    let sqrt_w = w.sqrt();
    let lead = F::from(sf.lc().to_f64().unwrap()).unwrap();
    let scaled: Vec<F> = sf
        .coeffs()
        .iter()
        .enumerate()
        .map(|(i, c)| {
            let c = F::from(c.to_f64().unwrap()).unwrap();
            c / lead * sqrt_w.powi(i as i32 - d as i32)
        })
        .collect();
    aberth_roots(&scaled)
        .into_iter()
        .map(|z: Complex<F>| (z.norm() - F::one()).abs())
        .fold(F::zero(), F::max)
}

pub fn validate_weil(p: &WeilPolynomial) -> WeilReport {
    validate_weil_with::<f64>(p, ROOT_MODULUS_TOLERANCE)
}

pub fn validate_weil_with<F: Float>(p: &WeilPolynomial, tolerance: F) -> WeilReport {
    let functional_equation = functional_equation_holds(p);
    let deviation: F = if p.weight.is_positive() {
        root_modulus_deviation(p)
    } else {
        F::infinity()
    };
    WeilReport {
        functional_equation,
        root_moduli: deviation <= tolerance,
        coefficient_bounds: coefficient_bounds_hold(p),
        max_relative_deviation: deviation.to_f64().unwrap_or(f64::NAN),
    }
}
