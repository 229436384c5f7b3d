//! Acceptance criteria, one line per criterion.
//!
//! A criterion listed in `EXPECTED_FAILURES` is still evaluated in full and
//! reported as FAIL; the run only fails on an unexpected FAIL or on an
//! expected failure that starts passing.

use std::collections::BTreeMap;
use std::process::Command;
use std::time::{Duration, Instant};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Zero;
use weylcm::census::split_census;
use weylcm::curvezeta::{specialize_curve, specialize_curve_at, validate_weil, CountingContext};
use weylcm::forge::{family_type_distribution, scan_family, ConditionKind, LocalCondition, ScanOptions};
use weylcm::primes::{pow_mod, primes_up_to};
use weylcm::sympstat::{
    exact_coset_distribution, sampled_coset_distribution, split_class_fraction_exact, DEFAULT_WALK_LENGTH,
};
use weylcm::weilpoly::{factor_mod_l, irreducibility_over_q, Irreducibility};
use weylcm::weylcert::{cm_check, quartic_galois_oracle, QuarticGroup};
use weylcm::{
    certify_weyl, tv_distance, CertStatus, CertifyOptions, CmPair, IntPoly, SignedCycleType, TypeDistribution,
};

/// Criterion number and the reason it cannot pass as stated.
const EXPECTED_FAILURES: &[(u32, &str)] = &[(
    7,
    "T^4-2 has oracle group D4 but real roots, so no sound certifier may call it a Weyl CM field",
)];

const MASTER_SEED: u64 = 20_261_016;

struct Outcome {
    passed: bool,
    detail: String,
}

fn rat(n: i64, d: i64) -> BigRational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

fn ty(s: &str) -> SignedCycleType {
    s.parse().unwrap()
}

fn within(start: Instant, limit: Duration) -> bool {
    start.elapsed() <= limit
}

/// Every `(q, n, g)` scan of criteria 2 and 3, with the largest `m` such
/// that `q^{nm} <= 10^4`.
fn scans() -> Vec<(u64, usize, usize, usize)> {
    let mut out = Vec::new();
    for (g, qs, n_max) in [(1usize, [5u64, 7], 4usize), (2, [7, 11], 2)] {
        for q in qs {
            for n in 1..=n_max {
                let mut m = 0;
                while (q as f64).powi((n * (m + 1)) as i32) <= 1e4 && m < 2 * g {
                    m += 1;
                }
                if m > 0 {
                    out.push((q, n, g, m));
                }
            }
        }
    }
    out
}

fn c1() -> Outcome {
    let start = Instant::now();
    let c0 = specialize_curve_at(1, 5, 1, &[0]).unwrap();
    let c4 = specialize_curve_at(1, 5, 1, &[4]).unwrap();
    let ctx = CountingContext::new(5, 1, 2, 1 << 24).unwrap();
    let counts = (ctx.count(&c0, 1).unwrap(), ctx.count(&c0, 2).unwrap(), ctx.count(&c4, 1).unwrap());
    let h0 = ctx.zeta_numerator(&c0).unwrap();
    let h4 = ctx.zeta_numerator(&c4).unwrap();
    let ok = counts == (8, 32, 4)
        && *h0.h() == IntPoly::from_i64(&[5, 2, 1])
        && *h4.h() == IntPoly::from_i64(&[5, -2, 1]);
    let secs = start.elapsed().as_secs_f64();
    Outcome {
        passed: ok && within(start, Duration::from_secs(1)),
        detail: format!("counts (t=0: {}, {}; t=4: {}), {secs:.3}s", counts.0, counts.1, counts.2),
    }
}

fn c2() -> Outcome {
    let start = Instant::now();
    let mut curves = 0u64;
    let mut checks = 0u64;
    let mut mismatches = Vec::new();
    for (q, n, g, m_max) in scans() {
        let ctx = CountingContext::new(q, n, m_max, 1 << 24).unwrap();
        for t in ctx.base().elements() {
            let Ok(curve) = specialize_curve(g, ctx.base(), &t) else { continue };
            curves += 1;
            for m in 1..=m_max {
                checks += 1;
                if ctx.count(&curve, m).unwrap() != ctx.count_direct(&curve, m).unwrap() {
                    mismatches.push((q, n, g, m, ctx.base().index(&t)));
                }
            }
        }
    }
    let secs = start.elapsed().as_secs_f64();
    Outcome {
        passed: mismatches.is_empty() && curves > 0 && within(start, Duration::from_secs(120)),
        detail: format!("{curves} curves, {checks} counts, {} mismatches, {secs:.1}s", mismatches.len()),
    }
}

fn c3() -> Outcome {
    let start = Instant::now();
    let mut total = 0u64;
    let mut failed = 0u64;
    let mut worst = 0.0f64;
    for (q, n, g, _) in scans() {
        let ctx = CountingContext::for_genus(q, n, g, 1 << 24).unwrap();
        for t in ctx.base().elements() {
            let Ok(curve) = specialize_curve(g, ctx.base(), &t) else { continue };
            let h = ctx.zeta_numerator(&curve).unwrap();
            let r = validate_weil(&h);
            total += 1;
            worst = worst.max(r.max_relative_deviation);
            if !(r.functional_equation && r.root_moduli) {
                failed += 1;
            }
        }
    }
    let secs = start.elapsed().as_secs_f64();
    Outcome {
        passed: failed == 0 && total > 0 && within(start, Duration::from_secs(60)),
        detail: format!("{total} curves, {failed} failures, max relative deviation {worst:.2e}, {secs:.1}s"),
    }
}

fn c4() -> Outcome {
    let start = Instant::now();
    let e3 = split_class_fraction_exact(1, 3).unwrap();
    let e5 = split_class_fraction_exact(1, 5).unwrap();
    let mc = |l: u64, i: u64| {
        sampled_coset_distribution(1, l, 1, 100_000, MASTER_SEED + i, DEFAULT_WALK_LENGTH)
            .unwrap()
            .split_weight()
    };
    let (m5, m101, m211) = (mc(5, 0), mc(101, 1), mc(211, 2));
    let ok = e3.is_zero()
        && e5 == rat(1, 4)
        && (m5 - 0.25).abs() <= 0.02
        && (m101 - 0.5).abs() <= 0.05
        && (m211 - 0.5).abs() <= 0.05;
    let secs = start.elapsed().as_secs_f64();
    Outcome {
        passed: ok && within(start, Duration::from_secs(120)),
        detail: format!("exact l=3: {e3}, l=5: {e5}; MC l=5: {m5:.4}, l=101: {m101:.4}, l=211: {m211:.4}, {secs:.1}s"),
    }
}

fn c5() -> Outcome {
    let d = exact_coset_distribution(1, 3, 2).unwrap();
    let ok = d.total_count() == 24
        && d.weight(&ty("[(1,+)]")) == rat(1, 2)
        && d.weight(&ty("[(1,-)]")) == rat(1, 2)
        && d.weights.len() == 2;
    Outcome { passed: ok, detail: format!("{} elements, weights {:?}", d.total_count(), exact_text(&d)) }
}

fn exact_text(d: &TypeDistribution<BigRational>) -> BTreeMap<String, String> {
    d.weights.iter().map(|(t, w)| (t.to_string(), w.to_string())).collect()
}

fn c6() -> Outcome {
    let start = Instant::now();
    let mut tv = BTreeMap::new();
    let mut split_mass = BTreeMap::new();
    for n in 1..=4usize {
        let fam = family_type_distribution(5, n, 1, 3).unwrap();
        let grp = exact_coset_distribution(1, 3, pow_mod(5, n as u64, 3)).unwrap();
        tv.insert(n, tv_distance(&fam.condition_on_regular(), &grp.condition_on_regular()));
        split_mass.insert(n, fam.split_weight());
    }
    let ok = tv[&1] == rat(1, 2) && tv[&4] < tv[&1] && split_mass[&2].is_zero() && split_mass[&4].is_zero();
    let secs = start.elapsed().as_secs_f64();
    let shown: Vec<String> = tv.iter().map(|(n, v)| format!("TV({n})={v}")).collect();
    Outcome {
        passed: ok && within(start, Duration::from_secs(300)),
        detail: format!(
            "{} (regular-conditioned); split mass n=2: {}, n=4: {}; {secs:.1}s",
            shown.join(" "),
            split_mass[&2],
            split_mass[&4]
        ),
    }
}

fn c7() -> Outcome {
    let start = Instant::now();
    let opts = CertifyOptions::default();
    let mut inputs: Vec<(String, IntPoly, BigInt)> = Vec::new();
    let scan = scan_family(7, 1, 2, &[], &ScanOptions::default()).unwrap();
    for r in &scan {
        let h = r.h.h();
        let irreducible = matches!(irreducibility_over_q(h, 200, true).unwrap(), Irreducibility::Irreducible { .. });
        if irreducible && cm_check(h, r.h.weight()).unwrap().is_cm {
            inputs.push((format!("t={}", r.t_index), h.clone(), r.h.weight().clone()));
        }
    }
    let scanned = inputs.len();
    for (name, c) in [("C4 cyclotomic", [1, 1, 1, 1, 1]), ("V4 T^4+1", [1, 0, 0, 0, 1]), ("D4 T^4-2", [-2, 0, 0, 0, 1])] {
        inputs.push((name.to_string(), IntPoly::from_i64(&c), BigInt::from(1)));
    }
    let mut disagreements = Vec::new();
    let mut adversary_certified = false;
    for (i, (name, h, w)) in inputs.iter().enumerate() {
        let cert = certify_weyl(h, w, &opts).unwrap();
        let group = quartic_galois_oracle(h).unwrap();
        let certified = cert.status == CertStatus::Certified;
        if certified != (group == QuarticGroup::D4) {
            disagreements.push(format!("{name}: {:?} vs {group:?} ({:?})", cert.status, cert.refutation_reason));
        }
        if i >= scanned && group != QuarticGroup::D4 && certified {
            adversary_certified = true;
        }
    }
    let secs = start.elapsed().as_secs_f64();
    Outcome {
        passed: disagreements.is_empty() && !adversary_certified && within(start, Duration::from_secs(300)),
        detail: format!(
            "{scanned} scanned CM quartics + 3 adversaries, C4/V4 certified: {adversary_certified}, disagreements: [{}], {secs:.1}s",
            disagreements.join("; ")
        ),
    }
}

fn c8() -> Outcome {
    let start = Instant::now();
    let pair = CmPair::new(&IntPoly::from_i64(&[5, 2, 1]), &BigInt::from(5)).unwrap();
    let small = split_census(&pair, 10_000).unwrap();
    let rule: Vec<u64> = primes_up_to(10_000).into_iter().filter(|p| p % 4 == 1).collect();
    let exact = small.split_primes == rule && small.ramified == 1;
    let big = split_census(&pair, 1_000_000).unwrap();
    let z = big.z_score();
    let secs = start.elapsed().as_secs_f64();
    Outcome {
        passed: exact && z < 4.0 && within(start, Duration::from_secs(120)),
        detail: format!(
            "mod-4 rule to 1e4: {exact}; density to 1e6: {:.5} over {} primes, z = {z:.2}, {secs:.1}s",
            big.density_estimate,
            big.unramified()
        ),
    }
}

fn c9() -> Outcome {
    let start = Instant::now();
    let opts = ScanOptions::default();
    let mut checked = 0;
    let mut bad = Vec::new();
    for n in 1..=2usize {
        let all = scan_family(5, n, 1, &[], &opts).unwrap();
        for l in [2u64, 3, 7, 11, 13] {
            for kind in [ConditionKind::RepeatedRoot, ConditionKind::SplitCompletely] {
                let c = LocalCondition::new(l, kind.clone());
                let got = scan_family(5, n, 1, std::slice::from_ref(&c), &opts).unwrap();
                let filtered: Vec<u64> = all
                    .iter()
                    .filter(|r| c.holds(r.h.h(), r.h.weight()).unwrap())
                    .map(|r| r.t_index)
                    .collect();
                let forced = got.iter().all(|r| match kind {
                    ConditionKind::RepeatedRoot => (&r.disc % BigInt::from(l)).is_zero(),
                    _ => {
                        let p = factor_mod_l(r.h.h(), l).unwrap();
                        p.squarefree && p.factors.iter().all(|&(d, _)| d == 1) && p.factors.len() == 2
                    }
                });
                let ids: Vec<u64> = got.iter().map(|r| r.t_index).collect();
                if !forced || ids != filtered {
                    bad.push(format!("n={n} {c}"));
                }
                checked += 1;
            }
        }
    }
    let secs = start.elapsed().as_secs_f64();
    Outcome {
        passed: bad.is_empty() && within(start, Duration::from_secs(60)),
        detail: format!("{checked} constraint scans, failures [{}], {secs:.2}s", bad.join(", ")),
    }
}

fn c10() -> Outcome {
    use weylcm::census::{disc_window, split_count_condition};
    let start = Instant::now();
    let pair = CmPair::new(&IntPoly::from_i64(&[5, 2, 1]), &BigInt::from(5)).unwrap();
    let report = split_census(&pair, 400).unwrap();
    let strict = split_count_condition(&report, 1.0).unwrap();
    let loose = split_count_condition(&report, 0.01).unwrap();
    let short = split_count_condition(&split_census(&pair, 100).unwrap(), 1.0);
    let d16 = BigInt::from(16);
    let one = rat(1, 1);
    let w1 = disc_window(&d16, 5, 1, 1, &one, &one).holds;
    let w2 = disc_window(&d16, 5, 1, 1, &one, &rat(4, 1)).holds;
    let w3 = disc_window(&BigInt::from(1), 5, 1, 1, &rat(2, 1), &rat(100, 1)).holds;
    // D^32 = q exactly, then one past the boundary
    let at = disc_window(&BigInt::from(2), 1 << 32, 1, 1, &one, &one).lower_holds;
    let past = disc_window(&BigInt::from(2), (1 << 32) + 1, 1, 1, &one, &one).lower_holds;
    let ok = !strict.holds
        && (strict.threshold - 160.7).abs() < 0.05
        && strict.count <= 66
        && loose.holds
        && (loose.threshold - 1.607).abs() < 0.005
        && matches!(short, Err(weylcm::Error::InsufficientCensus { .. }))
        && !w1
        && w2
        && !w3
        && at
        && !past;
    Outcome {
        passed: ok && within(start, Duration::from_secs(1)),
        detail: format!(
            "c_g=1: threshold {:.2}, count {}, holds {}; c_g=0.01: holds {}; windows {w1} {w2} {w3}; boundary {at} {past}",
            strict.threshold, strict.count, strict.holds, loose.holds
        ),
    }
}

fn c11() -> Outcome {
    let dir = std::env::temp_dir().join(format!("weylcm-acceptance-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let config = dir.join("sequence.toml");
    std::fs::write(&config, "command = \"sequence\"\n\n[params]\nq = 5\nn_list = [1, 2, 3]\ng = 1\npreset = \"desk\"\n")
        .unwrap();
    let run = |name: &str| {
        let out = dir.join(name);
        let status = Command::new(env!("CARGO_BIN_EXE_weylcm"))
            .arg("run")
            .arg("--config")
            .arg(&config)
            .arg("--output")
            .arg(&out)
            .status()
            .unwrap();
        (status.success(), std::fs::read(&out).unwrap_or_default())
    };
    let (ok_a, a) = run("a.json");
    let (ok_b, b) = run("b.json");
    let _ = std::fs::remove_dir_all(&dir);
    Outcome {
        passed: ok_a && ok_b && !a.is_empty() && a == b,
        detail: format!("two runs, {} and {} bytes, identical: {}", a.len(), b.len(), a == b),
    }
}

fn main() {
    let criteria: Vec<(u32, &str, fn() -> Outcome)> = vec![
        (1, "worked zeta values", c1),
        (2, "counting oracle agreement", c2),
        (3, "Weil validation", c3),
        (4, "split-class fractions", c4),
        (5, "coset distribution l=3 gamma=2", c5),
        (6, "equidistribution trend", c6),
        (7, "certification soundness", c7),
        (8, "census density", c8),
        (9, "constraint forcing", c9),
        (10, "split-count and window arithmetic", c10),
        (11, "determinism", c11),
    ];
    let filter: Vec<String> = std::env::args().skip(1).filter(|a| !a.starts_with('-')).collect();
    let mut unexpected = 0;
    for (id, name, f) in criteria {
        if !filter.is_empty() && !filter.iter().any(|s| name.contains(s.as_str()) || *s == id.to_string()) {
            continue;
        }
        let outcome = f();
        let expected = EXPECTED_FAILURES.iter().find(|(c, _)| *c == id).map(|(_, why)| *why);
        let tag = match (outcome.passed, expected) {
            (true, None) => "PASS".to_string(),
            (false, None) => {
                unexpected += 1;
                "FAIL".to_string()
            }
            (false, Some(why)) => format!("FAIL (expected: {why})"),
            (true, Some(_)) => {
                unexpected += 1;
                "XPASS (listed as expected failure)".to_string()
            }
        };
        println!("criterion {id:>2} {name}: {tag} | {}", outcome.detail);
    }
    if unexpected > 0 {
        println!("{unexpected} unexpected result(s)");
        std::process::exit(1);
    }
}
