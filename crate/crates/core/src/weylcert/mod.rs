//! One-sided certification that `Q(pi)` is a CM field whose normal closure
//! has Galois group `(Z/2)^g x| S_g`, from signed cycle types at unramified
//! primes.

mod quartic;

pub use quartic::{quartic_galois_oracle, resolvent_cubic, QuarticGroup};

use num_bigint::BigInt;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::intpoly::IntPoly;
use crate::primes::{is_prime, next_prime};
use crate::weilpoly::{
    irreducibility_over_q, real_subfield_poly, CmPair, Irreducibility, SignedCycleType, DEFAULT_PRIME_BUDGET,
};
use crate::zfactor::is_square;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CmReport {
    pub is_cm: bool,
    /// `gcd(h, T^2 - w)` is constant.
    pub coprime_to_t2_minus_w: bool,
    pub real_roots_of_h: usize,
    pub real_roots_of_h_real: Option<usize>,
    pub h_real_squarefree: Option<bool>,
    /// Approximate real roots of `h`, when there are any.
    pub real_root_witness: Vec<f64>,
    /// Set when irreducibility of `h` was not established beforehand.
    pub conditional: bool,
}

/// CM test for monic `h` of degree `2g` with weight `w`: no real roots of
/// `h`, and `g` distinct real roots of `h_real`.
pub fn cm_check(h: &IntPoly, w: &BigInt) -> Result<CmReport> {
    cm_check_inner(h, w, true)
}

fn cm_check_inner(h: &IntPoly, w: &BigInt, conditional: bool) -> Result<CmReport> {
    let t2w = IntPoly::new(vec![-w.clone(), BigInt::zero(), BigInt::one()]);
    let coprime = h.gcd(&t2w).degree() == 0;
    let real_roots_of_h = h.count_real_roots();
    let mut report = CmReport {
        is_cm: false,
        coprime_to_t2_minus_w: coprime,
        real_roots_of_h,
        real_roots_of_h_real: None,
        h_real_squarefree: None,
        real_root_witness: Vec::new(),
        conditional,
    };
    if !coprime || real_roots_of_h > 0 {
        report.real_root_witness = h.real_roots_approx();
        return Ok(report);
    }
    let h_real = real_subfield_poly(h, w)?;
    let g = h_real.degree();
    let n_real = h_real.count_real_roots();
    let sf = h_real.is_squarefree();
    report.real_roots_of_h_real = Some(n_real);
    report.h_real_squarefree = Some(sf);
    report.is_cm = n_real == g && sf;
    Ok(report)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum CertStatus {
    Certified,
    Refuted,
    Inconclusive,
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Criteria {
    pub irreducible: bool,
    pub cm: bool,
    pub sg_projection_full: bool,
    pub kernel_full: bool,
}

impl Criteria {
    pub fn all(&self) -> bool {
        self.irreducible && self.cm && self.sg_projection_full && self.kernel_full
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Observation {
    pub l: u64,
    pub cycle_type: SignedCycleType,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind")]
pub enum Witness {
    /// Monic factors multiplying back to `h` (or to `h_real`).
    Factorization { factors: Vec<IntPoly> },
    RealRoots { roots: Vec<f64> },
    /// Coefficients violate `c_i = w^{g-i} c_{2g-i}`.
    NotCmSymmetric,
    /// `disc(h_real)` is a perfect square, so the `S_g` image lies in `A_g`.
    SquareDiscriminant {
        #[serde(with = "crate::decimal::bigint")]
        disc: BigInt,
    },
    OracleGroup { group: QuarticGroup },
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct WeylCertificate {
    pub status: CertStatus,
    pub g: usize,
    pub evidence: Vec<Observation>,
    pub criteria_met: Criteria,
    pub refutation_reason: Option<String>,
    pub witness: Option<Witness>,
    pub irreducibility: Option<Irreducibility>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CertifyOptions {
    /// Number of primes scanned (ascending from 2), both for irreducible
    /// reductions and for cycle-type evidence.
    pub prime_budget: usize,
    /// Exact factorization over `Z` for degree <= 8 when no prime certifies.
    pub fallback: bool,
    /// Consult the quartic oracle at `g = 2` and refute non-`D4` fields.
    pub quartic_oracle: bool,
}

impl Default for CertifyOptions {
    fn default() -> Self {
        CertifyOptions { prime_budget: DEFAULT_PRIME_BUDGET, fallback: true, quartic_oracle: true }
    }
}

impl WeylCertificate {
    fn refuted(g: usize, reason: &str, witness: Witness, criteria: Criteria, irr: Option<Irreducibility>) -> Self {
        WeylCertificate {
            status: CertStatus::Refuted,
            g,
            evidence: Vec::new(),
            criteria_met: criteria,
            refutation_reason: Some(reason.to_string()),
            witness: Some(witness),
            irreducibility: irr,
        }
    }
}

/// A type whose suitable power is a single cycle of length `k` (all other
/// cycle lengths prime to `k`).
fn isolates_cycle(lengths: &[usize], k: usize) -> bool {
    let hits = lengths.iter().filter(|&&x| x == k).count();
    hits == 1 && lengths.iter().all(|&x| x == k || num_integer::gcd(x, k) == 1)
}

fn kernel_witness(t: &SignedCycleType, g: usize) -> bool {
    let Some(cycles) = t.cycles() else { return false };
    if cycles.iter().any(|c| c.length != 1) {
        return false;
    }
    let omega = t.minus_count().unwrap_or(0);
    omega == 1 || (omega % 2 == 1 && omega > 0 && omega < g)
}

fn transposition_witness(t: &SignedCycleType) -> bool {
    t.permutation_type().is_some_and(|lens| isolates_cycle(&lens, 2))
}

fn long_prime_cycle_witness(t: &SignedCycleType, g: usize) -> bool {
    t.permutation_type().is_some_and(|lens| {
        lens.iter()
            .any(|&p| is_prime(p as u64) && 2 * p > g && isolates_cycle(&lens, p))
    })
}

/// Certify `h` of weight `w` (degree `2g`).
pub fn certify_weyl(h: &IntPoly, w: &BigInt, opts: &CertifyOptions) -> Result<WeylCertificate> {
    if !h.is_monic() || h.degree() == 0 || h.degree() % 2 == 1 {
        return Err(Error::InvalidArgument(format!("{h} is not monic of even degree")));
    }
    let g = h.degree() / 2;
    let mut criteria = Criteria::default();

    // (1) irreducibility over Q
    if !h.is_squarefree() {
        let d = h.gcd(&h.derivative());
        let rest = h.div_exact(&d).expect("gcd divides");
        return Ok(WeylCertificate::refuted(
            g,
            "Reducible",
            Witness::Factorization { factors: vec![d, rest] },
            criteria,
            None,
        ));
    }
    let irr = irreducibility_over_q(h, opts.prime_budget, opts.fallback)?;
    match &irr {
        Irreducibility::Reducible { factors } => {
            return Ok(WeylCertificate::refuted(
                g,
                "Reducible",
                Witness::Factorization { factors: factors.clone() },
                criteria,
                Some(irr.clone()),
            ));
        }
        Irreducibility::Irreducible { .. } => criteria.irreducible = true,
        Irreducibility::Inconclusive => {}
    }

    // (2) CM
    let cm = match cm_check_inner(h, w, !criteria.irreducible) {
        Ok(r) => r,
        Err(Error::NotCMSymmetric) => {
            return Ok(WeylCertificate::refuted(g, "NotCMSymmetric", Witness::NotCmSymmetric, criteria, Some(irr)));
        }
        Err(e) => return Err(e),
    };
    if !cm.is_cm {
        let witness = if cm.real_root_witness.is_empty() {
            Witness::RealRoots { roots: real_subfield_poly(h, w)?.real_roots_approx() }
        } else {
            Witness::RealRoots { roots: cm.real_root_witness.clone() }
        };
        let reason = if cm.real_roots_of_h > 0 { "RealRoot" } else { "RealSubfieldNotTotallyReal" };
        return Ok(WeylCertificate::refuted(g, reason, witness, criteria, Some(irr)));
    }
    criteria.cm = true;
    let pair = CmPair::new(h, w)?;

    // exact oracle at g = 2
    if g == 2 && opts.quartic_oracle && criteria.irreducible {
        let group = quartic_galois_oracle(h)?;
        if group != QuarticGroup::D4 {
            return Ok(WeylCertificate::refuted(
                g,
                "OracleGroup",
                Witness::OracleGroup { group },
                criteria,
                Some(irr),
            ));
        }
    }

    // (3) S_g projection, low genus
    let mut needs_jordan = false;
    if g <= 3 {
        let real_irr = irreducibility_over_q(pair.h_real(), opts.prime_budget, opts.fallback)?;
        match real_irr {
            Irreducibility::Reducible { factors } => {
                return Ok(WeylCertificate::refuted(
                    g,
                    "RealSubfieldReducible",
                    Witness::Factorization { factors },
                    criteria,
                    Some(irr),
                ));
            }
            Irreducibility::Irreducible { .. } => {
                if g == 3 && is_square(pair.disc_real()) {
                    return Ok(WeylCertificate::refuted(
                        g,
                        "RealSubfieldAlternating",
                        Witness::SquareDiscriminant { disc: pair.disc_real().clone() },
                        criteria,
                        Some(irr),
                    ));
                }
                criteria.sg_projection_full = true;
            }
            Irreducibility::Inconclusive => {}
        }
    } else {
        let real_irr = irreducibility_over_q(pair.h_real(), opts.prime_budget, opts.fallback)?;
        if let Irreducibility::Reducible { factors } = real_irr {
            return Ok(WeylCertificate::refuted(
                g,
                "RealSubfieldReducible",
                Witness::Factorization { factors },
                criteria,
                Some(irr),
            ));
        }
        needs_jordan = matches!(real_irr, Irreducibility::Irreducible { .. });
    }

    // (3)-(4) evidence at unramified primes
    let mut evidence = Vec::new();
    let mut saw_transposition = false;
    let mut saw_long_cycle = false;
    let mut l = 1u64;
    for _ in 0..opts.prime_budget {
        if criteria.kernel_full && (criteria.sg_projection_full || !needs_jordan) {
            break;
        }
        l = next_prime(l + 1);
        if pair.is_ramified_at(l) {
            continue;
        }
        let t = pair.signed_cycle_type(l)?;
        if kernel_witness(&t, g) {
            criteria.kernel_full = true;
        }
        if needs_jordan {
            saw_transposition |= transposition_witness(&t);
            saw_long_cycle |= long_prime_cycle_witness(&t, g);
            if saw_transposition && saw_long_cycle {
                criteria.sg_projection_full = true;
            }
        }
        evidence.push(Observation { l, cycle_type: t });
    }

    let status = if criteria.all() { CertStatus::Certified } else { CertStatus::Inconclusive };
    Ok(WeylCertificate {
        status,
        g,
        evidence,
        criteria_met: criteria,
        refutation_reason: None,
        witness: None,
        irreducibility: Some(irr),
    })
}

/// [`certify_weyl`] with weight `q^n`.
pub fn certify_weyl_qn(h: &IntPoly, q: u64, n: usize, opts: &CertifyOptions) -> Result<WeylCertificate> {
    certify_weyl(h, &BigInt::from(q).pow(n as u32), opts)
}
