//! Fast checks of the library against hand-derived values.

use num_bigint::BigInt;
use num_rational::BigRational;
use serde::Serialize;
use weylcm::census::{disc_window, expected_split_density, split_census};
use weylcm::curvezeta::{count_points, count_points_direct, specialize_curve_at, zeta_numerator};
use weylcm::forge::{family_type_distribution, scan_family, ConditionKind, ScanOptions};
use weylcm::sympstat::{exact_coset_distribution, split_class_fraction_exact};
use weylcm::weylcert::{quartic_galois_oracle, QuarticGroup};
use weylcm::{certify_weyl, CertStatus, CertifyOptions, CmPair, IntPoly, LocalCondition, SignedCycleType};

#[derive(Clone, Debug, Serialize)]
pub struct Check {
    pub name: &'static str,
    pub passed: bool,
    pub detail: String,
}

fn rat(n: i64, d: i64) -> BigRational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

fn check(name: &'static str, f: impl FnOnce() -> Result<(bool, String), weylcm::Error>) -> Check {
    match f() {
        Ok((passed, detail)) => Check { name, passed, detail },
        Err(e) => Check { name, passed: false, detail: format!("error {}: {e}", e.code()) },
    }
}

pub fn run() -> Vec<Check> {
    vec![
        check("zeta_counts_t0", || {
            let c = specialize_curve_at(1, 5, 1, &[0])?;
            let got = (count_points(&c, 1)?, count_points(&c, 2)?, count_points_direct(&c, 2)?);
            Ok((got == (8, 32, 32), format!("{got:?}")))
        }),
        check("zeta_numerators", || {
            let h0 = zeta_numerator(&specialize_curve_at(1, 5, 1, &[0])?)?;
            let h4 = zeta_numerator(&specialize_curve_at(1, 5, 1, &[4])?)?;
            let ok = *h0.h() == IntPoly::from_i64(&[5, 2, 1]) && *h4.h() == IntPoly::from_i64(&[5, -2, 1]);
            Ok((ok, format!("{:?} {:?}", h0.h(), h4.h())))
        }),
        check("split_class_fractions", || {
            let a = split_class_fraction_exact(1, 3)?;
            let b = split_class_fraction_exact(1, 5)?;
            Ok((a == rat(0, 1) && b == rat(1, 4), format!("{a} {b}")))
        }),
        check("coset_l3_gamma2", || {
            let d = exact_coset_distribution(1, 3, 2)?;
            let plus: SignedCycleType = "[(1,+)]".parse()?;
            let minus: SignedCycleType = "[(1,-)]".parse()?;
            let ok = d.total_count() == 24 && d.weight(&plus) == rat(1, 2) && d.weight(&minus) == rat(1, 2);
            Ok((ok, format!("{} elements", d.total_count())))
        }),
        check("certify_gaussian", || {
            let c = certify_weyl(&IntPoly::from_i64(&[5, 2, 1]), &BigInt::from(5), &CertifyOptions::default())?;
            Ok((c.status == CertStatus::Certified, format!("{:?}", c.status)))
        }),
        check("quartic_adversaries", || {
            let w1 = BigInt::from(1);
            let opts = CertifyOptions::default();
            let c4 = IntPoly::from_i64(&[1, 1, 1, 1, 1]);
            let v4 = IntPoly::from_i64(&[1, 0, 0, 0, 1]);
            let groups = (quartic_galois_oracle(&c4)?, quartic_galois_oracle(&v4)?);
            let never = certify_weyl(&c4, &w1, &opts)?.status != CertStatus::Certified
                && certify_weyl(&v4, &w1, &opts)?.status != CertStatus::Certified;
            Ok((groups == (QuarticGroup::C4, QuarticGroup::V4) && never, format!("{groups:?}")))
        }),
        check("census_mod4_rule", || {
            let pair = CmPair::new(&IntPoly::from_i64(&[5, 2, 1]), &BigInt::from(5))?;
            let r = split_census(&pair, 2000)?;
            let bad: Vec<u64> = weylcm::primes::primes_up_to(2000)
                .into_iter()
                .filter(|&p| p != 2 && (p % 4 == 1) != r.split_primes.contains(&p))
                .collect();
            Ok((bad.is_empty() && r.expected_density == expected_split_density(1), format!("mismatches {bad:?}")))
        }),
        check("family_tv_n1", || {
            let fam = family_type_distribution(5, 1, 1, 3)?;
            let grp = exact_coset_distribution(1, 3, 2)?;
            let tv = weylcm::tv_distance(&fam.condition_on_regular(), &grp.condition_on_regular());
            Ok((tv == rat(1, 2), tv.to_string()))
        }),
        check("repeated_root_forcing", || {
            let rep = [LocalCondition::new(2, ConditionKind::RepeatedRoot)];
            let r = scan_family(5, 1, 1, &rep, &ScanOptions::default())?;
            let ok = r.iter().all(|c| &c.disc % 2 == BigInt::from(0)) && r.len() == 3;
            Ok((ok, format!("{} records", r.len())))
        }),
        check("disc_window_boundary", || {
            let one = rat(1, 1);
            let at = disc_window(&BigInt::from(2), 1 << 32, 1, 1, &one, &one).lower_holds;
            let past = disc_window(&BigInt::from(2), (1 << 32) + 1, 1, 1, &one, &one).lower_holds;
            Ok((at && !past, format!("{at} {past}")))
        }),
    ]
}
