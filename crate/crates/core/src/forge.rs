//! Family scans with prescribed local behaviour, the family-side type
//! distribution, and the per-`n` selection of a certified candidate.

use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::census::{
    disc_window, ln_big, split_census_with_cap, CensusReport, DiscWindow, SplitCountVerdict, split_count_condition,
};
use crate::curvezeta::{validate_weil, CountingContext, WeilPolynomial};
use crate::distribution::{tv_distance, Provenance, TypeDistribution};
use crate::error::{Error, Result};
use crate::ffield::DEFAULT_ENUMERATION_CAP;
use crate::intpoly::IntPoly;
use crate::modpoly::Zp;
use crate::primes::{is_prime, next_prime};
use crate::sympstat::{exact_coset_distribution, gamma_reciprocal};
use crate::weilpoly::{factor_mod_l, factor_mod_l_full, CmPair, SignedCycleType};
use crate::weylcert::{certify_weyl, CertStatus, CertifyOptions, WeylCertificate};

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum ConditionKind {
    SplitCompletely,
    RepeatedRoot,
    InertPair,
    TypeEquals(SignedCycleType),
}

/// Prescribed behaviour of `h` at one prime. Text form `split:3`,
/// `repeated:2`, `inert:7`, `type:13=[(1,-)]`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct LocalCondition {
    pub prime: u64,
    pub kind: ConditionKind,
}

impl LocalCondition {
    pub fn new(prime: u64, kind: ConditionKind) -> Self {
        LocalCondition { prime, kind }
    }

    /// Decide the condition from `h` and its weight alone.
    pub fn holds(&self, h: &IntPoly, w: &BigInt) -> Result<bool> {
        let l = self.prime;
        let d = h.degree();
        Ok(match &self.kind {
            ConditionKind::SplitCompletely => {
                let p = factor_mod_l(h, l)?;
                p.squarefree && p.factors.len() == d && p.factors.iter().all(|&(k, _)| k == 1)
            }
            ConditionKind::RepeatedRoot => !factor_mod_l(h, l)?.squarefree,
            ConditionKind::InertPair => {
                let gamma = w.mod_floor(&BigInt::from(l)).to_u64().unwrap();
                if gamma == 0 {
                    return Ok(false);
                }
                let zp = Zp::new(l);
                factor_mod_l_full(h, l)?
                    .iter()
                    .any(|(f, _)| f.len() == 3 && gamma_reciprocal(f, gamma, &zp) == *f)
            }
            ConditionKind::TypeEquals(t) => CmPair::new(h, w)?.signed_cycle_type(l)? == *t,
        })
    }
}

impl fmt::Display for LocalCondition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.kind {
            ConditionKind::SplitCompletely => write!(f, "split:{}", self.prime),
            ConditionKind::RepeatedRoot => write!(f, "repeated:{}", self.prime),
            ConditionKind::InertPair => write!(f, "inert:{}", self.prime),
            ConditionKind::TypeEquals(t) => write!(f, "type:{}={t}", self.prime),
        }
    }
}

impl FromStr for LocalCondition {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::InvalidArgument(format!("bad local condition {s:?}"));
        let (kind, rest) = s.trim().split_once(':').ok_or_else(bad)?;
        let (prime, ty) = match rest.split_once('=') {
            Some((p, t)) => (p, Some(t)),
            None => (rest, None),
        };
        let prime: u64 = prime.trim().parse().map_err(|_| bad())?;
        let kind = match (kind, ty) {
            ("split", None) => ConditionKind::SplitCompletely,
            ("repeated", None) => ConditionKind::RepeatedRoot,
            ("inert", None) => ConditionKind::InertPair,
            ("type", Some(t)) => ConditionKind::TypeEquals(t.parse()?),
            _ => return Err(bad()),
        };
        Ok(LocalCondition { prime, kind })
    }
}

/// One condition per prime; every prime is prime and differs from `q`.
pub fn validate_constraints(q: u64, constraints: &[LocalCondition]) -> Result<()> {
    let mut seen = Vec::new();
    for c in constraints {
        if !is_prime(c.prime) {
            return Err(Error::NotPrime(c.prime));
        }
        if c.prime == q {
            return Err(Error::InvalidArgument(format!("constraint at the characteristic {q}")));
        }
        if seen.contains(&c.prime) {
            return Err(Error::ConflictingConstraints(c.prime));
        }
        seen.push(c.prime);
    }
    Ok(())
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CensusSummary {
    pub bound: u64,
    pub primes_scanned: u64,
    pub split_completely: u64,
    pub ramified: u64,
    pub density_estimate: f64,
    #[serde(with = "crate::decimal::rational")]
    pub expected_density: BigRational,
}

impl From<&CensusReport> for CensusSummary {
    fn from(r: &CensusReport) -> Self {
        CensusSummary {
            bound: r.bound,
            primes_scanned: r.primes_scanned,
            split_completely: r.split_completely,
            ramified: r.ramified,
            density_estimate: r.density_estimate,
            expected_density: r.expected_density.clone(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CandidateRecord {
    /// Coefficients of `t` in the base field `F_{q^n}`, little-endian.
    pub t: Vec<u64>,
    /// Base-`q` index of `t`; records are ordered by it.
    pub t_index: u64,
    pub h: WeilPolynomial,
    /// `|disc(h)|`.
    #[serde(rename = "D", with = "crate::decimal::bigint")]
    pub disc: BigInt,
    /// Number of parameters in the scan with the same `h`.
    pub multiplicity: u64,
    pub weil_valid: bool,
    pub certificate: Option<WeylCertificate>,
    pub census: Option<CensusSummary>,
    pub conditions_met: Vec<LocalCondition>,
}

impl CandidateRecord {
    pub fn status(&self) -> Option<CertStatus> {
        self.certificate.as_ref().map(|c| c.status)
    }

    /// Re-check every listed condition from `h` alone.
    pub fn verify_conditions(&self) -> Result<bool> {
        for c in &self.conditions_met {
            if !c.holds(self.h.h(), self.h.weight())? {
                return Ok(false);
            }
        }
        Ok(true)
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ScanOptions {
    pub certify: Option<CertifyOptions>,
    /// Census bound per candidate, if any.
    pub census_bound: Option<u64>,
    pub enumeration_cap: u64,
    /// Keep every `stride`-th parameter (by index).
    pub stride: u64,
}

impl Default for ScanOptions {
    fn default() -> Self {
        ScanOptions { certify: None, census_bound: None, enumeration_cap: DEFAULT_ENUMERATION_CAP, stride: 1 }
    }
}

/// `(t index, t coefficients, h)` for every admissible `t` of the family.
pub fn family_polynomials(q: u64, n: usize, g: usize, cap: u64, stride: u64) -> Result<Vec<(u64, Vec<u64>, WeilPolynomial)>> {
    if q <= 2 * g as u64 {
        if !is_prime(q) {
            return Err(Error::NotPrime(q));
        }
        return Err(Error::GenusPrimeConflict { q, two_g: 2 * g });
    }
    let ctx = CountingContext::for_genus(q, n, g, cap)?;
    let base = ctx.base();
    let forbidden: Vec<u64> = (1..=2 * g as i64).map(|i| base.index(&base.constant(i))).collect();
    let indices: Vec<u64> = (0..base.order())
        .step_by(stride.max(1) as usize)
        .filter(|i| !forbidden.contains(i))
        .collect();
    indices
        .into_par_iter()
        .map(|i| {
            let t = base.from_index(i);
            let curve = crate::curvezeta::specialize_curve(g, base, &t)?;
            let h = ctx.zeta_numerator(&curve)?;
            Ok((i, t.coeffs(), h))
        })
        .collect()
}

pub fn scan_family(
    q: u64,
    n: usize,
    g: usize,
    constraints: &[LocalCondition],
    opts: &ScanOptions,
) -> Result<Vec<CandidateRecord>> {
    validate_constraints(q, constraints)?;
    let family = family_polynomials(q, n, g, opts.enumeration_cap, opts.stride)?;
    let mut multiplicity: HashMap<&IntPoly, u64> = HashMap::new();
    for (_, _, h) in &family {
        *multiplicity.entry(h.h()).or_insert(0) += 1;
    }
    let kept: Vec<&(u64, Vec<u64>, WeilPolynomial)> = family
        .iter()
        .map(|entry| {
            let (_, _, h) = entry;
            for c in constraints {
                if !c.holds(h.h(), h.weight())? {
                    return Ok(None);
                }
            }
            Ok(Some(entry))
        })
        .collect::<Result<Vec<_>>>()?
        .into_iter()
        .flatten()
        .collect();
    kept.into_par_iter()
        .map(|(i, t, h)| {
            let certificate = match &opts.certify {
                Some(o) => Some(certify_weyl(h.h(), h.weight(), o)?),
                None => None,
            };
            let census = match opts.census_bound {
                Some(bound) => {
                    let pair = CmPair::new(h.h(), h.weight())?;
                    let certified = certificate.as_ref().is_some_and(|c| c.status == CertStatus::Certified);
                    Some(CensusSummary::from(&split_census_with_cap(&pair, bound, u64::MAX, certified)?))
                }
                None => None,
            };
            Ok(CandidateRecord {
                t: t.clone(),
                t_index: *i,
                h: h.clone(),
                disc: h.h().discriminant().abs(),
                multiplicity: multiplicity[h.h()],
                weil_valid: validate_weil(h).passed(),
                certificate,
                census,
                conditions_met: constraints.to_vec(),
            })
        })
        .collect()
}

/// Distribution of signed cycle types at `l` over every admissible `t`,
/// with exact weights.
pub fn family_type_distribution(q: u64, n: usize, g: usize, l: u64) -> Result<TypeDistribution<BigRational>> {
    family_type_distribution_with_cap(q, n, g, l, DEFAULT_ENUMERATION_CAP)
}

pub fn family_type_distribution_with_cap(
    q: u64,
    n: usize,
    g: usize,
    l: u64,
    cap: u64,
) -> Result<TypeDistribution<BigRational>> {
    if !is_prime(l) {
        return Err(Error::NotPrime(l));
    }
    let family = family_polynomials(q, n, g, cap, 1)?;
    let types: Vec<SignedCycleType> = family
        .par_iter()
        .map(|(_, _, h)| CmPair::new(h.h(), h.weight())?.signed_cycle_type(l))
        .collect::<Result<_>>()?;
    let mut counts = BTreeMap::new();
    for t in types {
        *counts.entry(t).or_insert(0u64) += 1;
    }
    Ok(TypeDistribution::from_counts(counts, Provenance::FamilyEmpirical))
}

/// One row of the family-versus-coset comparison.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct EquidistRow {
    pub n: usize,
    /// `q^n mod l`.
    pub gamma: u64,
    pub family: TypeDistribution<BigRational>,
    pub group: TypeDistribution<BigRational>,
    /// TV distance after conditioning both sides on regular types.
    #[serde(with = "crate::decimal::rational")]
    pub tv_regular: BigRational,
    /// TV distance over all bins, irregular ones included.
    #[serde(with = "crate::decimal::rational")]
    pub tv_unconditioned: BigRational,
    #[serde(with = "crate::decimal::rational")]
    pub family_split_mass: BigRational,
    pub family_size: u64,
    pub family_ramified: u64,
    pub group_nonregular: u64,
}

pub fn equidistribution_row(q: u64, g: usize, l: u64, n: usize, cap: u64) -> Result<EquidistRow> {
    let family = family_type_distribution_with_cap(q, n, g, l, cap)?;
    let gamma = crate::primes::pow_mod(q, n as u64, l);
    let group = exact_coset_distribution(g, l, gamma)?;
    let fam_reg = family.condition_on_regular();
    let grp_reg = group.condition_on_regular();
    Ok(EquidistRow {
        n,
        gamma,
        tv_regular: tv_distance(&fam_reg, &grp_reg),
        tv_unconditioned: tv_distance(&family, &group),
        family_split_mass: family.split_weight(),
        family_size: family.total_count(),
        family_ramified: family.counts.get(&SignedCycleType::Ramified).copied().unwrap_or(0),
        group_nonregular: group.counts.get(&SignedCycleType::NonRegular).copied().unwrap_or(0),
        family,
        group,
    })
}

/// Auxiliary prime window `(lo, hi)`, both ends exclusive.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind")]
pub enum AuxWindow {
    /// `(n^e, 2 n^e)`; `e = 5` is the asymptotic choice.
    Power { exponent: u32 },
    /// `(n + 1, 4 (n + 1))`.
    Desk,
}

impl AuxWindow {
    pub fn bounds(&self, n: usize) -> (u64, u64) {
        let n = n as u64;
        match self {
            AuxWindow::Power { exponent } => {
                let lo = n.pow(*exponent);
                (lo, 2 * lo)
            }
            AuxWindow::Desk => (n + 1, 4 * (n + 1)),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SequenceParams {
    pub preset: String,
    /// Target `q^{n e}` for the product of forced-ramification primes.
    #[serde(with = "crate::decimal::rational")]
    pub ramify_target_exponent: BigRational,
    pub aux_window: AuxWindow,
    pub c_g: f64,
    #[serde(with = "crate::decimal::rational")]
    pub c1: BigRational,
    #[serde(with = "crate::decimal::rational")]
    pub c2: BigRational,
    /// Cap on the per-candidate census bound `2 (ln D)^5`.
    pub census_cap: u64,
    pub certify: CertifyOptions,
    pub enumeration_cap: u64,
}

impl SequenceParams {
    /// Asymptotic exponents: `1/(32 g^2)` and the `(n^5, 2 n^5)` window.
    pub fn asymptotic(g: usize) -> Self {
        SequenceParams {
            preset: "asymptotic".into(),
            ramify_target_exponent: BigRational::new(BigInt::one(), BigInt::from(32 * g * g)),
            aux_window: AuxWindow::Power { exponent: 5 },
            c_g: 1.0,
            c1: BigRational::one(),
            c2: BigRational::one(),
            census_cap: 1_000_000,
            certify: CertifyOptions::default(),
            enumeration_cap: DEFAULT_ENUMERATION_CAP,
        }
    }

    /// Desk-scale exponents: `1/(8 g^2)` and the `(n+1, 4(n+1))` window.
    pub fn desk(g: usize) -> Self {
        SequenceParams {
            preset: "desk".into(),
            ramify_target_exponent: BigRational::new(BigInt::one(), BigInt::from(8 * g * g)),
            aux_window: AuxWindow::Desk,
            ..Self::asymptotic(g)
        }
    }
}

/// `x <= q^{n e}` exactly, for rational `x > 0` and `e = a/b > 0`.
fn le_power(x: &BigRational, q: u64, n: usize, e: &BigRational) -> bool {
    let a = e.numer().to_u32().expect("small exponent numerator");
    let b = e.denom().to_u32().expect("small exponent denominator");
    let lhs = num_traits::pow(x.clone(), b as usize);
    lhs <= BigRational::from_integer(BigInt::from(q).pow(n as u32 * a))
}

fn ge_power(x: &BigRational, q: u64, n: usize, e: &BigRational) -> bool {
    let a = e.numer().to_u32().expect("small exponent numerator");
    let b = e.denom().to_u32().expect("small exponent denominator");
    num_traits::pow(x.clone(), b as usize) >= BigRational::from_integer(BigInt::from(q).pow(n as u32 * a))
}

/// Primes `l_1 < l_2 < ...`, odd and prime to `q`, with product in
/// `[T/2, 2T]` for `T = q^{n e}`. Greedy: jump straight into the window
/// with the smallest admissible prime when one exists, otherwise take the
/// smallest admissible prime and continue. The flag reports whether the
/// window was reached.
pub fn ramification_primes(q: u64, n: usize, e: &BigRational) -> (Vec<u64>, bool) {
    let half = BigRational::new(BigInt::one(), BigInt::from(2));
    let two = BigRational::from_integer(BigInt::from(2));
    let in_window = |p: &BigRational| ge_power(&(p * &two), q, n, e) && le_power(&(p * &half), q, n, e);
    let below_window = |p: &BigRational| !ge_power(&(p * &two), q, n, e);
    let admissible = |p: u64| p != 2 && p != q;
    let mut chosen = Vec::new();
    let mut product = BigRational::one();
    let mut next = 3u64;
    loop {
        if in_window(&product) {
            return (chosen, true);
        }
        if !below_window(&product) {
            return (chosen, false);
        }
        // smallest admissible prime landing in the window
        let mut p = next;
        let mut jump = None;
        loop {
            if admissible(p) {
                let cand = &product * BigRational::from_integer(BigInt::from(p));
                if in_window(&cand) {
                    jump = Some(p);
                    break;
                }
                if !below_window(&cand) {
                    break;
                }
            }
            p = next_prime(p + 1);
        }
        if let Some(p) = jump {
            chosen.push(p);
            return (chosen, true);
        }
        let mut p = next;
        while !admissible(p) {
            p = next_prime(p + 1);
        }
        let cand = &product * BigRational::from_integer(BigInt::from(p));
        if !below_window(&cand) && !in_window(&cand) {
            return (chosen, false);
        }
        chosen.push(p);
        product = cand;
        next = next_prime(p + 1);
    }
}

/// Odd primes prime to `q` strictly inside the window, excluding `avoid`.
pub fn aux_primes(window: &AuxWindow, n: usize, q: u64, avoid: &[u64]) -> Result<Vec<u64>> {
    let (lo, hi) = window.bounds(n);
    let primes: Vec<u64> = (lo + 1..hi)
        .filter(|&p| is_prime(p) && p != 2 && p != q && !avoid.contains(&p))
        .collect();
    if primes.is_empty() {
        return Err(Error::EmptyWindow { lo, hi });
    }
    Ok(primes)
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Selection {
    pub record: CandidateRecord,
    /// Split primes below `min(2 (ln D)^5, census_cap)`.
    pub split_count: u64,
    pub split_bound: u64,
    pub split_bound_capped: bool,
    /// Window primes at which the record splits completely.
    pub aux_split_primes: Vec<u64>,
    pub split_condition: std::result::Result<SplitCountVerdict, String>,
    pub disc_window: DiscWindow,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SequenceEntry {
    pub n: usize,
    pub preset: String,
    pub ramify_primes: Vec<u64>,
    pub ramify_window_reached: bool,
    pub aux_primes: Vec<u64>,
    pub pool_size: u64,
    pub certified: u64,
    /// `None` is the gap marker: no candidate certified at this `n`.
    pub selection: Option<Selection>,
    pub gap_reason: Option<String>,
}

fn split_bound(d: &BigInt, cap: u64) -> (u64, bool) {
    if *d <= BigInt::from(2) {
        return (2.min(cap), false);
    }
    let b = 2.0 * ln_big(d).powi(5);
    if b >= cap as f64 {
        (cap, true)
    } else {
        (b.floor() as u64, false)
    }
}

pub fn build_sequence(q: u64, g: usize, n_list: &[usize], params: &SequenceParams) -> Result<Vec<SequenceEntry>> {
    if n_list.windows(2).any(|w| w[0] >= w[1]) {
        return Err(Error::InvalidArgument("n_list must be strictly ascending".into()));
    }
    let mut out = Vec::new();
    for &n in n_list {
        let (ramify, reached) = ramification_primes(q, n, &params.ramify_target_exponent);
        let aux = aux_primes(&params.aux_window, n, q, &ramify)?;
        let constraints: Vec<LocalCondition> =
            ramify.iter().map(|&l| LocalCondition::new(l, ConditionKind::RepeatedRoot)).collect();
        let opts = ScanOptions {
            certify: Some(params.certify),
            census_bound: None,
            enumeration_cap: params.enumeration_cap,
            stride: 1,
        };
        let pool = scan_family(q, n, g, &constraints, &opts)?;
        let certified: Vec<&CandidateRecord> =
            pool.iter().filter(|r| r.status() == Some(CertStatus::Certified)).collect();
        let scored: Vec<(u64, u64, bool, &CandidateRecord)> = certified
            .par_iter()
            .map(|r| {
                let (bound, capped) = split_bound(&r.disc, params.census_cap);
                let pair = CmPair::new(r.h.h(), r.h.weight())?;
                let census = split_census_with_cap(&pair, bound, u64::MAX, true)?;
                Ok((census.split_completely, bound, capped, *r))
            })
            .collect::<Result<_>>()?;
        let best = scored.iter().min_by(|a, b| {
            b.0.cmp(&a.0)
                .then_with(|| a.3.disc.cmp(&b.3.disc))
                .then_with(|| a.3.t_index.cmp(&b.3.t_index))
        });
        let selection = match best {
            None => None,
            Some(&(split_count, bound, capped, rec)) => {
                let pair = CmPair::new(rec.h.h(), rec.h.weight())?;
                let mut aux_split = Vec::new();
                for &m in &aux {
                    if LocalCondition::new(m, ConditionKind::SplitCompletely).holds(rec.h.h(), rec.h.weight())? {
                        aux_split.push(m);
                    }
                }
                let census = split_census_with_cap(&pair, bound, u64::MAX, true)?;
                let mut record = rec.clone();
                record.census = Some(CensusSummary::from(&census));
                let split_condition = split_count_condition(&census, params.c_g).map_err(|e| e.code().to_string());
                let window = disc_window(&rec.disc, q, n as u32, g as u32, &params.c1, &params.c2);
                Some(Selection {
                    record,
                    split_count,
                    split_bound: bound,
                    split_bound_capped: capped,
                    aux_split_primes: aux_split,
                    split_condition,
                    disc_window: window,
                })
            }
        };
        out.push(SequenceEntry {
            n,
            preset: params.preset.clone(),
            ramify_primes: ramify,
            ramify_window_reached: reached,
            aux_primes: aux,
            pool_size: pool.len() as u64,
            certified: certified.len() as u64,
            gap_reason: selection.is_none().then(|| "NoCertifiedCandidate".to_string()),
            selection,
        });
    }
    Ok(out)
}

/// Split count used for selection, for checking optimality from outside.
pub fn selection_split_count(record: &CandidateRecord, cap: u64) -> Result<u64> {
    let (bound, _) = split_bound(&record.disc, cap);
    let pair = CmPair::new(record.h.h(), record.h.weight())?;
    Ok(split_census_with_cap(&pair, bound, u64::MAX, false)?.split_completely)
}
