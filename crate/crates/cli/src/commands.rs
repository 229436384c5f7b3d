//! One function per subcommand. Parameter problems surface as `Usage`
//! (exit 2), library failures as `Domain` (exit 1).

use num_bigint::BigInt;
use num_rational::BigRational;
use serde::Serialize;
use serde_json::{json, Value};
use weylcm::census::{census_from_rows, classify_primes_with_cap, counting_curve};
use weylcm::curvezeta::{specialize_curve_at, validate_weil, CountingContext};
use weylcm::ffield::DEFAULT_ENUMERATION_CAP;
use weylcm::forge::{build_sequence, equidistribution_row, scan_family, ScanOptions, SequenceParams};
use weylcm::primes::DEFAULT_SIEVE_CAP;
use weylcm::sympstat::{exact_coset_distribution, sampled_coset_distribution, DEFAULT_WALK_LENGTH};
use weylcm::{certify_weyl, CertStatus, CertifyOptions, CmPair, Error, IntPoly, LocalCondition};

use crate::config::{Command, ExperimentConfig, Format, Mode, Params, Preset};
use crate::selftest;

pub enum Failure {
    Usage(String),
    Domain(Error),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Domain(e)
    }
}

pub type Outcome<T> = Result<T, Failure>;

/// What a run produces before the envelope is attached.
pub enum Payload {
    Document(Value),
    /// Header plus one JSON value per line.
    Lines(Vec<Value>),
    /// Column names and rows.
    Table(Vec<&'static str>, Vec<Vec<String>>),
}

pub struct RunResult {
    pub payload: Payload,
    /// Selftest reports failure through the exit code, not an error.
    pub all_passed: bool,
}

fn need<T: Clone>(v: &Option<T>, name: &str) -> Outcome<T> {
    v.clone().ok_or_else(|| Failure::Usage(format!("missing parameter `{name}`")))
}

fn to_value<T: Serialize>(v: &T) -> Value {
    serde_json::to_value(v).expect("library types serialize")
}

fn parse_bigint(s: &str, name: &str) -> Outcome<BigInt> {
    s.trim().parse().map_err(|_| Failure::Usage(format!("`{name}`: not an integer: {s:?}")))
}

fn parse_rational(s: &Option<String>, name: &str) -> Outcome<BigRational> {
    match s {
        None => Ok(BigRational::from_integer(BigInt::from(1))),
        Some(s) => s
            .trim()
            .parse()
            .map_err(|_| Failure::Usage(format!("`{name}`: not a rational: {s:?}"))),
    }
}

fn poly(p: &Params) -> Outcome<IntPoly> {
    let coeffs = need(&p.h, "h")?
        .iter()
        .map(|c| parse_bigint(c, "h"))
        .collect::<Outcome<Vec<_>>>()?;
    Ok(IntPoly::new(coeffs))
}

/// `weight` if given, else `q^n`.
fn weight(p: &Params) -> Outcome<BigInt> {
    if let Some(w) = &p.weight {
        return parse_bigint(w, "weight");
    }
    match (p.q, p.n) {
        (Some(q), Some(n)) => Ok(BigInt::from(q).pow(n as u32)),
        _ => Err(Failure::Usage("give `weight`, or both `q` and `n`".into())),
    }
}

fn certify_opts(p: &Params) -> CertifyOptions {
    let d = CertifyOptions::default();
    CertifyOptions {
        prime_budget: p.prime_budget.unwrap_or(d.prime_budget),
        fallback: p.fallback.unwrap_or(d.fallback),
        quartic_oracle: p.quartic_oracle.unwrap_or(d.quartic_oracle),
    }
}

fn constraints(p: &Params) -> Outcome<Vec<LocalCondition>> {
    p.constraints
        .iter()
        .flatten()
        .map(|s| s.parse().map_err(|e: Error| Failure::Usage(e.to_string())))
        .collect()
}

fn format_for(cfg: &ExperimentConfig) -> Outcome<Format> {
    let allowed: &[Format] = match cfg.command {
        Command::Census | Command::Equidist => &[Format::Json, Format::Csv],
        Command::Forge => &[Format::Jsonl, Format::Json],
        _ => &[Format::Json],
    };
    let f = cfg.params.format.unwrap_or(allowed[0]);
    if !allowed.contains(&f) {
        return Err(Failure::Usage(format!("format {f:?} not available for {}", cfg.command.name())));
    }
    Ok(f)
}

pub fn run(cfg: &ExperimentConfig) -> Outcome<RunResult> {
    let format = format_for(cfg)?;
    let p = &cfg.params;
    let payload = match cfg.command {
        Command::Zeta => zeta(p)?,
        Command::Certify => certify(p)?,
        Command::Census => census(p, format)?,
        Command::Haar => haar(p, cfg.master_seed())?,
        Command::Equidist => equidist(p, format)?,
        Command::Forge => forge(p, format)?,
        Command::Sequence => sequence(p)?,
        Command::Selftest => {
            let report = selftest::run();
            let all_passed = report.iter().all(|c| c.passed);
            return Ok(RunResult { payload: Payload::Document(to_value(&report)), all_passed });
        }
    };
    Ok(RunResult { payload, all_passed: true })
}

fn zeta(p: &Params) -> Outcome<Payload> {
    let g = need(&p.g, "g")?;
    let q = need(&p.q, "q")?;
    let n = p.n.unwrap_or(1);
    let t = p.t.clone().unwrap_or_else(|| vec![0]);
    let cap = p.enumeration_cap.unwrap_or(DEFAULT_ENUMERATION_CAP);
    let curve = specialize_curve_at(g, q, n, &t)?;
    let ctx = CountingContext::for_genus(q, n, g, cap)?;
    let counts = (1..=g).map(|m| ctx.count(&curve, m)).collect::<Result<Vec<_>, _>>()?;
    let h = ctx.zeta_numerator(&curve)?;
    let report = validate_weil(&h);
    Ok(Payload::Document(json!({
        "t": curve.t().coeffs(),
        "counts": counts,
        "h": h.h(),
        "weil_polynomial": h,
        "validation": report,
    })))
}

fn certify(p: &Params) -> Outcome<Payload> {
    let h = poly(p)?;
    let w = weight(p)?;
    let cert = certify_weyl(&h, &w, &certify_opts(p))?;
    Ok(Payload::Document(json!({ "h": h, "weight": w.to_string(), "certificate": cert })))
}

const CENSUS_COLUMNS: [&str; 3] = ["p", "signed_type", "split"];

fn census(p: &Params, format: Format) -> Outcome<Payload> {
    let h = poly(p)?;
    let w = weight(p)?;
    let bound = need(&p.bound, "bound")?;
    let pair = CmPair::new(&h, &w)?;
    let certified = certify_weyl(&h, &w, &certify_opts(p))?.status == CertStatus::Certified;
    let rows = classify_primes_with_cap(&pair, bound, p.prime_cap.unwrap_or(DEFAULT_SIEVE_CAP))?;
    if format == Format::Csv {
        let table = rows
            .iter()
            .map(|(l, t)| vec![l.to_string(), t.to_string(), t.is_split().to_string()])
            .collect();
        return Ok(Payload::Table(CENSUS_COLUMNS.to_vec(), table));
    }
    let report = census_from_rows(&pair, bound, &rows, certified);
    let curve: Vec<Value> = counting_curve(&report, p.points.unwrap_or(10))
        .into_iter()
        .map(|(x, count, reference)| json!({ "x": x, "split_count": count, "reference": reference }))
        .collect();
    Ok(Payload::Document(json!({
        "report": report,
        "z_score": report.z_score(),
        "counting_curve": curve,
    })))
}

fn haar(p: &Params, seed: u64) -> Outcome<Payload> {
    let g = need(&p.g, "g")?;
    let l = need(&p.l, "l")?;
    let gamma = p.gamma.unwrap_or(1);
    let dist = match p.mode.unwrap_or(Mode::Exact) {
        Mode::Exact => to_value(&exact_coset_distribution(g, l, gamma)?),
        Mode::Montecarlo => {
            let samples = p.samples.unwrap_or(100_000);
            let walk = p.walk_length.unwrap_or(DEFAULT_WALK_LENGTH);
            to_value(&sampled_coset_distribution(g, l, gamma, samples, seed, walk)?)
        }
    };
    Ok(Payload::Document(json!({ "g": g, "l": l, "gamma": gamma, "distribution": dist })))
}

const EQUIDIST_COLUMNS: [&str; 9] = [
    "n",
    "gamma",
    "family_size",
    "family_ramified",
    "group_nonregular",
    "tv_regular",
    "tv_regular_exact",
    "tv_unconditioned",
    "family_split_mass",
];

fn equidist(p: &Params, format: Format) -> Outcome<Payload> {
    let q = need(&p.q, "q")?;
    let g = need(&p.g, "g")?;
    let l = need(&p.l, "l")?;
    let n_list = need(&p.n_list, "n_list")?;
    let cap = p.enumeration_cap.unwrap_or(DEFAULT_ENUMERATION_CAP);
    let rows = n_list
        .iter()
        .map(|&n| equidistribution_row(q, g, l, n, cap))
        .collect::<Result<Vec<_>, _>>()?;
    if format == Format::Csv {
        let f = |r: &BigRational| format!("{:.12}", num_traits::ToPrimitive::to_f64(r).unwrap_or(f64::NAN));
        let table = rows
            .iter()
            .map(|r| {
                vec![
                    r.n.to_string(),
                    r.gamma.to_string(),
                    r.family_size.to_string(),
                    r.family_ramified.to_string(),
                    r.group_nonregular.to_string(),
                    f(&r.tv_regular),
                    r.tv_regular.to_string(),
                    f(&r.tv_unconditioned),
                    r.family_split_mass.to_string(),
                ]
            })
            .collect();
        return Ok(Payload::Table(EQUIDIST_COLUMNS.to_vec(), table));
    }
    Ok(Payload::Document(json!({ "q": q, "g": g, "l": l, "rows": rows })))
}

fn forge(p: &Params, format: Format) -> Outcome<Payload> {
    let q = need(&p.q, "q")?;
    let g = need(&p.g, "g")?;
    let n = p.n.unwrap_or(1);
    let opts = ScanOptions {
        certify: p.certify.unwrap_or(false).then(|| certify_opts(p)),
        census_bound: p.census_bound,
        enumeration_cap: p.enumeration_cap.unwrap_or(DEFAULT_ENUMERATION_CAP),
        stride: p.stride.unwrap_or(1),
    };
    let records = scan_family(q, n, g, &constraints(p)?, &opts)?;
    Ok(match format {
        Format::Json => Payload::Document(json!({ "records": records })),
        _ => Payload::Lines(records.iter().map(to_value).collect()),
    })
}

fn sequence(p: &Params) -> Outcome<Payload> {
    let q = need(&p.q, "q")?;
    let g = need(&p.g, "g")?;
    let n_list = need(&p.n_list, "n_list")?;
    let mut params = match p.preset.unwrap_or(Preset::Desk) {
        Preset::Asymptotic => SequenceParams::asymptotic(g),
        Preset::Desk => SequenceParams::desk(g),
    };
    params.certify = certify_opts(p);
    if let Some(c) = p.c_g {
        params.c_g = c;
    }
    params.c1 = parse_rational(&p.c1, "c1")?;
    params.c2 = parse_rational(&p.c2, "c2")?;
    if let Some(c) = p.census_cap {
        params.census_cap = c;
    }
    if let Some(c) = p.enumeration_cap {
        params.enumeration_cap = c;
    }
    let entries = build_sequence(q, g, &n_list, &params)?;
    Ok(Payload::Document(json!({ "q": q, "g": g, "params": params, "entries": entries })))
}
