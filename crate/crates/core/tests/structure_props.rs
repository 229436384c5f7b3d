use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use proptest::prelude::*;
use weylcm::census::{split_census, CensusReport};
use weylcm::distribution::{tv_distance, Provenance, TypeDistribution};
use weylcm::forge::{
    build_sequence, family_polynomials, scan_family, selection_split_count, ConditionKind, LocalCondition,
    ScanOptions, SequenceParams,
};
use weylcm::sympstat::{sp_sample, stream};
use weylcm::weilpoly::{factor_mod_l, lift_real_poly};
use weylcm::{CertStatus, CmPair, IntPoly, SignedCycleType};

fn gaussian() -> CmPair {
    CmPair::new(&IntPoly::from_i64(&[5, 2, 1]), &BigInt::from(5)).unwrap()
}

fn genus2_pairs() -> Vec<CmPair> {
    [7u64, 11]
        .into_iter()
        .flat_map(|q| family_polynomials(q, 1, 2, 1 << 24, 1).unwrap())
        .filter_map(|(_, _, h)| CmPair::new(h.h(), h.weight()).ok())
        .collect()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn sampled_matrices_are_similitudes(
        g in 1usize..=3,
        l in prop::sample::select(vec![3u64, 5, 7, 11, 101]),
        gamma in 1u64..100,
        seed in any::<u64>(),
    ) {
        let gamma = gamma % l;
        prop_assume!(gamma != 0);
        let m = sp_sample(g, l, gamma, 32, &mut stream(seed, 0)).unwrap();
        prop_assert!(m.verify());
        prop_assert_eq!(m.multiplier(), gamma);
        // det of a similitude of dimension 2g is gamma^g
        prop_assert_eq!(m.determinant(), weylcm::primes::pow_mod(gamma, g as u64, l));
    }

    #[test]
    fn tv_is_a_metric(
        a in prop::collection::vec(0u64..20, 4),
        b in prop::collection::vec(0u64..20, 4),
        c in prop::collection::vec(0u64..20, 4),
    ) {
        let keys: Vec<SignedCycleType> =
            ["[(1,+),(1,+)]", "[(1,-),(1,+)]", "[(2,+)]", "[(2,-)]"].iter().map(|s| s.parse().unwrap()).collect();
        let mk = |v: &[u64]| {
            let counts: BTreeMap<_, _> = keys.iter().cloned().zip(v.iter().copied()).collect();
            TypeDistribution::<BigRational>::from_counts(counts, Provenance::ExactEnumeration)
        };
        prop_assume!(a.iter().sum::<u64>() > 0 && b.iter().sum::<u64>() > 0 && c.iter().sum::<u64>() > 0);
        let (da, db, dc) = (mk(&a), mk(&b), mk(&c));
        let ab = tv_distance(&da, &db);
        prop_assert_eq!(&ab, &tv_distance(&db, &da));
        prop_assert!(ab >= BigRational::zero() && ab <= BigRational::one());
        prop_assert!(tv_distance(&da, &dc) <= &ab + tv_distance(&db, &dc));
        prop_assert!(tv_distance(&da, &da).is_zero());
    }
}

#[test]
fn signed_types_have_genus_g_and_match_pattern() {
    for pair in genus2_pairs() {
        for l in weylcm::primes::primes_up_to(200) {
            let t = pair.signed_cycle_type(l).unwrap();
            if t == SignedCycleType::Ramified {
                assert!(pair.is_ramified_at(l));
                continue;
            }
            assert_eq!(t.genus(), Some(2));
            // factor degrees of h mod l are read off the signed type
            let mut expected: Vec<usize> = t
                .cycles()
                .unwrap()
                .iter()
                .flat_map(|c| match c.sign {
                    weylcm::weilpoly::Sign::Plus => vec![c.length, c.length],
                    weylcm::weilpoly::Sign::Minus => vec![2 * c.length],
                })
                .collect();
            expected.sort();
            let mut got: Vec<usize> = factor_mod_l(pair.h(), l)
                .unwrap()
                .factors
                .iter()
                .flat_map(|&(d, e)| std::iter::repeat_n(d, e as usize))
                .collect();
            got.sort();
            assert_eq!(got, expected, "h = {:?}, l = {l}", pair.h());
        }
    }
}

#[test]
fn real_subfield_lifts_back() {
    for pair in genus2_pairs() {
        assert_eq!(lift_real_poly(pair.h_real(), pair.weight()), *pair.h());
    }
}

#[test]
fn census_partitions_primes() {
    let r: CensusReport = split_census(&gaussian(), 5000).unwrap();
    let total: u64 = r.by_type.values().sum();
    assert_eq!(total + r.ramified, r.primes_scanned);
    assert_eq!(r.split_completely as usize, r.split_primes.len());
    assert!(r.split_primes.windows(2).all(|w| w[0] < w[1]));
    assert_eq!(r.split_count_up_to(5000.0), r.split_completely);
}

fn holds_all(h: &weylcm::WeilPolynomial, cs: &[LocalCondition]) -> bool {
    cs.iter().all(|c| c.holds(h.h(), h.weight()).unwrap())
}

#[test]
fn constrained_scan_equals_filtered_scan() {
    let opts = ScanOptions::default();
    let sets: Vec<Vec<LocalCondition>> = vec![
        vec![LocalCondition::new(2, ConditionKind::RepeatedRoot)],
        vec![LocalCondition::new(3, ConditionKind::SplitCompletely)],
        vec![LocalCondition::new(3, ConditionKind::InertPair)],
        vec![LocalCondition::new(7, ConditionKind::SplitCompletely), LocalCondition::new(2, ConditionKind::RepeatedRoot)],
        vec![LocalCondition::new(13, ConditionKind::TypeEquals("[(1,-)]".parse().unwrap()))],
    ];
    for n in 1..=2 {
        let all = scan_family(5, n, 1, &[], &opts).unwrap();
        for cs in &sets {
            let constrained = scan_family(5, n, 1, cs, &opts).unwrap();
            let filtered: Vec<u64> = all.iter().filter(|r| holds_all(&r.h, cs)).map(|r| r.t_index).collect();
            assert_eq!(constrained.iter().map(|r| r.t_index).collect::<Vec<_>>(), filtered, "n={n} {cs:?}");
            for r in &constrained {
                assert!(r.verify_conditions().unwrap());
                for c in cs {
                    match c.kind {
                        ConditionKind::RepeatedRoot => {
                            assert!((&r.disc % BigInt::from(c.prime)).is_zero())
                        }
                        ConditionKind::SplitCompletely => {
                            let p = factor_mod_l(r.h.h(), c.prime).unwrap();
                            assert!(p.squarefree && p.factors.iter().all(|&(d, _)| d == 1));
                        }
                        _ => {}
                    }
                }
            }
        }
    }
}

#[test]
fn scan_is_sorted_and_counts_multiplicity() {
    let all = scan_family(5, 2, 1, &[], &ScanOptions::default()).unwrap();
    assert!(all.windows(2).all(|w| w[0].t_index < w[1].t_index));
    for r in &all {
        let same = all.iter().filter(|s| s.h == r.h).count() as u64;
        assert_eq!(same, r.multiplicity);
    }
}

#[test]
fn selection_is_optimal() {
    let params = SequenceParams::desk(1);
    let entries = build_sequence(5, 1, &[1, 2], &params).unwrap();
    for e in &entries {
        let Some(sel) = &e.selection else { continue };
        let opts = ScanOptions { certify: Some(params.certify), ..ScanOptions::default() };
        let constraints: Vec<LocalCondition> =
            e.ramify_primes.iter().map(|&l| LocalCondition::new(l, ConditionKind::RepeatedRoot)).collect();
        for r in scan_family(5, e.n, 1, &constraints, &opts).unwrap() {
            if r.status() == Some(CertStatus::Certified) {
                assert!(selection_split_count(&r, params.census_cap).unwrap() <= sel.split_count);
            }
        }
        assert!(sel.record.verify_conditions().unwrap());
    }
}

#[test]
fn genus2_certification_matches_quartic_oracle() {
    use weylcm::weylcert::{quartic_galois_oracle, QuarticGroup};
    use weylcm::CertifyOptions;
    let with_oracle = CertifyOptions::default();
    let evidence_only = CertifyOptions { quartic_oracle: false, ..CertifyOptions::default() };
    let mut d4 = 0;
    for q in [19u64, 23, 29, 31] {
        for (_, _, h) in family_polynomials(q, 1, 2, 1 << 24, 1).unwrap() {
            let Ok(group) = quartic_galois_oracle(h.h()) else { continue };
            let a = weylcm::certify_weyl(h.h(), h.weight(), &with_oracle).unwrap().status;
            let b = weylcm::certify_weyl(h.h(), h.weight(), &evidence_only).unwrap().status;
            assert_eq!(a == CertStatus::Certified, group == QuarticGroup::D4, "q={q} h={:?}", h.h());
            // cycle types alone never certify a smaller group
            if group != QuarticGroup::D4 {
                assert_ne!(b, CertStatus::Certified, "q={q} h={:?}", h.h());
            } else {
                d4 += 1;
                assert_eq!(b, CertStatus::Certified);
            }
        }
    }
    assert!(d4 > 0);
}
