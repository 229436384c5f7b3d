//! Split-prime censuses: tallies of signed cycle types over all primes up
//! to a bound, the split-count and discriminant-window checks, and the
//! bounded search for a totally split prime.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::intpoly::IntPoly;
use crate::primes::{next_prime, primes_up_to, DEFAULT_SIEVE_CAP};
use crate::weilpoly::{CmPair, SignedCycleType};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CensusReport {
    pub h: IntPoly,
    pub h_real: IntPoly,
    #[serde(with = "crate::decimal::bigint")]
    pub weight: BigInt,
    pub g: usize,
    /// Census bound `X`: every prime `p <= X` is classified.
    pub bound: u64,
    pub primes_scanned: u64,
    pub split_completely: u64,
    pub ramified: u64,
    /// Unramified primes by signed cycle type.
    pub by_type: BTreeMap<SignedCycleType, u64>,
    pub split_primes: Vec<u64>,
    /// `split_completely / (primes_scanned - ramified)`.
    pub density_estimate: f64,
    #[serde(with = "crate::decimal::rational")]
    pub expected_density: BigRational,
    /// `|disc(h)|`, the discriminant of the order `Z[pi]`.
    #[serde(with = "crate::decimal::bigint")]
    pub order_discriminant: BigInt,
    /// Whether the caller vouched for a certified field.
    pub certified_input: bool,
}

impl CensusReport {
    pub fn unramified(&self) -> u64 {
        self.primes_scanned - self.ramified
    }

    /// `|density - rho| / sqrt(rho (1 - rho) / N)` with `N` unramified primes.
    pub fn z_score(&self) -> f64 {
        let rho = self.expected_density.to_f64().unwrap_or(f64::NAN);
        let n = self.unramified() as f64;
        (self.density_estimate - rho).abs() / (rho * (1.0 - rho) / n).sqrt()
    }

    /// `N_K(x)` for `x <= bound`.
    pub fn split_count_up_to(&self, x: f64) -> u64 {
        self.split_primes.partition_point(|&p| (p as f64) <= x) as u64
    }
}

/// `1 / (2^g g!)`.
pub fn expected_split_density(g: usize) -> BigRational {
    let order = (1..=g as u64).fold(BigInt::one() << g, |acc, k| acc * BigInt::from(k));
    BigRational::new(BigInt::one(), order)
}

/// Signed cycle type at every prime `p <= bound`, ascending.
pub fn classify_primes(pair: &CmPair, bound: u64) -> Result<Vec<(u64, SignedCycleType)>> {
    classify_primes_with_cap(pair, bound, DEFAULT_SIEVE_CAP)
}

pub fn classify_primes_with_cap(pair: &CmPair, bound: u64, cap: u64) -> Result<Vec<(u64, SignedCycleType)>> {
    if bound > cap {
        return Err(Error::BudgetExceeded { size: format!("census bound {bound}"), cap });
    }
    primes_up_to(bound)
        .into_par_iter()
        .map(|p| pair.signed_cycle_type(p).map(|t| (p, t)))
        .collect()
}

pub fn split_census(pair: &CmPair, bound: u64) -> Result<CensusReport> {
    split_census_with_cap(pair, bound, DEFAULT_SIEVE_CAP, false)
}

pub fn split_census_with_cap(pair: &CmPair, bound: u64, cap: u64, certified_input: bool) -> Result<CensusReport> {
    let rows = classify_primes_with_cap(pair, bound, cap)?;
    Ok(census_from_rows(pair, bound, &rows, certified_input))
}

/// Tally already-classified primes into a report.
pub fn census_from_rows(
    pair: &CmPair,
    bound: u64,
    rows: &[(u64, SignedCycleType)],
    certified_input: bool,
) -> CensusReport {
    let mut by_type = BTreeMap::new();
    let mut ramified = 0;
    let mut split_primes = Vec::new();
    for (p, t) in rows {
        if *t == SignedCycleType::Ramified {
            ramified += 1;
            continue;
        }
        if t.is_split() {
            split_primes.push(*p);
        }
        *by_type.entry(t.clone()).or_insert(0u64) += 1;
    }
    let scanned = rows.len() as u64;
    let unramified = scanned - ramified;
    let split = split_primes.len() as u64;
    CensusReport {
        h: pair.h().clone(),
        h_real: pair.h_real().clone(),
        weight: pair.weight().clone(),
        g: pair.genus(),
        bound,
        primes_scanned: scanned,
        split_completely: split,
        ramified,
        by_type,
        split_primes,
        density_estimate: if unramified == 0 { 0.0 } else { split as f64 / unramified as f64 },
        expected_density: expected_split_density(pair.genus()),
        order_discriminant: pair.disc_h().abs(),
        certified_input,
    }
}

/// Smallest totally split prime `p <= bound`, skipping ramified primes.
pub fn find_split_prime_below(pair: &CmPair, bound: u64) -> Result<Option<u64>> {
    let mut p = 2;
    while p <= bound {
        if pair.signed_cycle_type(p)?.is_split() {
            return Ok(Some(p));
        }
        p = next_prime(p + 1);
    }
    Ok(None)
}

/// Natural log of a positive big integer, accurate for values beyond `f64`.
pub fn ln_big(x: &BigInt) -> f64 {
    let bits = x.bits();
    if bits < 1000 {
        return x.to_f64().unwrap_or(f64::NAN).ln();
    }
    let shift = bits - 64;
    let top: BigInt = x >> shift;
    top.to_f64().unwrap().ln() + shift as f64 * std::f64::consts::LN_2
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SplitCountVerdict {
    pub holds: bool,
    /// `c_g (ln D)^5 / ln ln D`.
    pub threshold: f64,
    /// Split primes `p <= 2 (ln D)^5`.
    pub count: u64,
    /// `2 (ln D)^5`.
    pub prime_bound: f64,
    pub log_base: String,
}

/// Condition (1): at least `c_g (ln D)^5 / ln ln D` primes `p <= 2 (ln D)^5`
/// split completely.
pub fn split_count_condition(report: &CensusReport, c_g: f64) -> Result<SplitCountVerdict> {
    let d = &report.order_discriminant;
    if *d <= BigInt::from(2) {
        return Err(Error::DegenerateD(d.to_string()));
    }
    let ln_d = ln_big(d);
    let l5 = ln_d.powi(5);
    let prime_bound = 2.0 * l5;
    if (report.bound as f64) < prime_bound.floor() {
        return Err(Error::InsufficientCensus { have: report.bound, need: format!("{prime_bound:.3}") });
    }
    let threshold = c_g * l5 / ln_d.ln();
    let count = report.split_count_up_to(prime_bound);
    Ok(SplitCountVerdict {
        holds: count as f64 >= threshold,
        threshold,
        count,
        prime_bound,
        log_base: "natural".into(),
    })
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DiscWindow {
    pub holds: bool,
    /// `c1^{32g^2} q^n <= D^{32g^2}`.
    pub lower_holds: bool,
    /// `D <= c2 q^{n g^2}`.
    pub upper_holds: bool,
    /// `c1 q^{n/(32 g^2)}`, for display only.
    pub lower: f64,
    #[serde(with = "crate::decimal::rational")]
    pub upper: BigRational,
}

/// Condition (3): `c1 q^{n/(32g^2)} <= D <= c2 q^{n g^2}`, decided exactly.
pub fn disc_window(d: &BigInt, q: u64, n: u32, g: u32, c1: &BigRational, c2: &BigRational) -> DiscWindow {
    let e = 32 * g * g;
    let qn = BigInt::from(q).pow(n);
    let d_rat = BigRational::from_integer(d.clone());
    let lower_holds = num_traits::pow(c1.clone(), e as usize) * BigRational::from_integer(qn.clone())
        <= num_traits::pow(d_rat.clone(), e as usize);
    let upper = c2 * BigRational::from_integer(qn.pow(g * g));
    let upper_holds = d_rat <= upper;
    let lower = c1.to_f64().unwrap_or(f64::NAN) * (q as f64).powf(n as f64 / e as f64);
    DiscWindow { holds: lower_holds && upper_holds, lower_holds, upper_holds, lower, upper }
}

/// Sample points `(x, N_K(x), x / (d ln x))` of the split-prime counting
/// function against the Chebotarev reference, `d = 2^g g!`.
pub fn counting_curve(report: &CensusReport, points: usize) -> Vec<(u64, u64, f64)> {
    let d = expected_split_density(report.g).recip().to_f64().unwrap_or(f64::NAN);
    let points = points.max(1) as u64;
    (1..=points)
        .map(|i| {
            let x = (report.bound * i / points).max(2);
            let reference = x as f64 / (d * (x as f64).ln());
            (x, report.split_count_up_to(x as f64), reference)
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn gaussian() -> CmPair {
        CmPair::new(&IntPoly::from_i64(&[5, 2, 1]), &BigInt::from(5)).unwrap()
    }

    fn rat(n: i64, d: i64) -> BigRational {
        BigRational::new(BigInt::from(n), BigInt::from(d))
    }

    #[test]
    fn census_examples() {
        let r = split_census(&gaussian(), 50).unwrap();
        assert_eq!(r.split_primes, vec![5, 13, 17, 29, 37, 41]);
        assert_eq!(r.ramified, 1);
        let total: u64 = r.by_type.values().sum();
        assert_eq!(total + r.ramified, r.primes_scanned);
        let r = split_census(&gaussian(), 2).unwrap();
        assert_eq!((r.split_completely, r.ramified, r.primes_scanned), (0, 1, 1));
        assert_eq!(expected_split_density(2), rat(1, 8));
        assert!(matches!(
            split_census_with_cap(&gaussian(), 1000, 100, false),
            Err(Error::BudgetExceeded { .. })
        ));
    }

    #[test]
    fn split_count_examples() {
        let r = split_census(&gaussian(), 400).unwrap();
        let v = split_count_condition(&r, 1.0).unwrap();
        assert!(!v.holds);
        assert!((v.threshold - 160.7).abs() < 0.1, "{}", v.threshold);
        assert!(v.count <= 66);
        let v = split_count_condition(&r, 0.01).unwrap();
        assert!(v.holds);
        let small = split_census(&gaussian(), 100).unwrap();
        assert!(matches!(split_count_condition(&small, 1.0), Err(Error::InsufficientCensus { .. })));
        let mut degenerate = r.clone();
        degenerate.order_discriminant = BigInt::from(2);
        assert!(matches!(split_count_condition(&degenerate, 1.0), Err(Error::DegenerateD(_))));
    }

    #[test]
    fn window_examples() {
        let d = BigInt::from(16);
        assert!(!disc_window(&d, 5, 1, 1, &rat(1, 1), &rat(1, 1)).holds);
        assert!(disc_window(&d, 5, 1, 1, &rat(1, 1), &rat(4, 1)).holds);
        assert!(!disc_window(&BigInt::one(), 5, 1, 1, &rat(2, 1), &rat(100, 1)).holds);
        // D^32 = q exactly at the lower boundary
        let w = disc_window(&BigInt::from(2), 1 << 32, 1, 1, &rat(1, 1), &rat(1, 1));
        assert!(w.lower_holds);
        let w = disc_window(&BigInt::from(2), (1 << 32) + 1, 1, 1, &rat(1, 1), &rat(1, 1));
        assert!(!w.lower_holds);
    }

    #[test]
    fn split_search() {
        let pair = gaussian();
        assert_eq!(find_split_prime_below(&pair, 10).unwrap(), Some(5));
        assert_eq!(find_split_prime_below(&pair, 4).unwrap(), None);
        assert_eq!(find_split_prime_below(&pair, 1).unwrap(), None);
    }
}
