//! Experiment configuration and its canonical TOML form.

use clap::{Args, ValueEnum};
use serde::{Deserialize, Serialize};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize, ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum Command {
    Zeta,
    Certify,
    Census,
    Haar,
    Equidist,
    Forge,
    Sequence,
    Selftest,
}

impl Command {
    pub fn name(self) -> &'static str {
        match self {
            Command::Zeta => "zeta",
            Command::Certify => "certify",
            Command::Census => "census",
            Command::Haar => "haar",
            Command::Equidist => "equidist",
            Command::Forge => "forge",
            Command::Sequence => "sequence",
            Command::Selftest => "selftest",
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize, ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Json,
    Jsonl,
    Csv,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize, ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum Mode {
    Exact,
    Montecarlo,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize, ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum Preset {
    Asymptotic,
    Desk,
}

/// Every parameter a run can take. Unset fields fall back to the
/// library defaults; the command decides which fields are required.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize, Args)]
#[serde(deny_unknown_fields)]
pub struct Params {
    /// Base prime q.
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub q: Option<u64>,
    /// Extension degree n (base field F_{q^n}).
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub n: Option<usize>,
    /// Ascending list of extension degrees.
    #[arg(long, value_delimiter = ',')]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub n_list: Option<Vec<usize>>,
    /// Genus.
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub g: Option<usize>,
    /// Parameter t as coefficients over F_q, constant term first.
    #[arg(long, value_delimiter = ',')]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub t: Option<Vec<u64>>,
    /// Auxiliary prime l.
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub l: Option<u64>,
    /// Multiplier gamma mod l.
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub gamma: Option<u64>,
    /// Integer polynomial, coefficients constant term first.
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub h: Option<Vec<String>>,
    /// Weight w with alpha * conj(alpha) = w; defaults to q^n when q and n are set.
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub weight: Option<String>,
    /// Census bound X.
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub bound: Option<u64>,
    /// Local conditions such as split:3, repeated:2, inert:7, type:13=[(1,-)].
    #[arg(long = "constraint")]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub constraints: Option<Vec<String>>,
    #[arg(long, value_enum)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub preset: Option<Preset>,
    #[arg(long, value_enum)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub mode: Option<Mode>,
    /// Monte-Carlo sample count.
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub samples: Option<u64>,
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub walk_length: Option<usize>,
    /// Certify each scanned candidate.
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub certify: Option<bool>,
    /// Census bound per scanned candidate.
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub census_bound: Option<u64>,
    /// Keep every k-th parameter of a scan.
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub stride: Option<u64>,
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub prime_budget: Option<usize>,
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub fallback: Option<bool>,
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub quartic_oracle: Option<bool>,
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub c_g: Option<f64>,
    /// Rational constant, e.g. 1 or 3/2.
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub c1: Option<String>,
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub c2: Option<String>,
    /// Largest field or group enumerated.
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub enumeration_cap: Option<u64>,
    /// Largest census bound accepted.
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub prime_cap: Option<u64>,
    /// Cap on the selection census bound 2 (ln D)^5.
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub census_cap: Option<u64>,
    /// Sample points of the split-prime counting curve in census output.
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub points: Option<usize>,
    /// Master seed; per-task streams are derived from it.
    #[arg(long)]
    #[serde(default, skip_serializing_if = "Option::is_none", with = "seed_text")]
    pub master_seed: Option<u64>,
    #[arg(long, value_enum)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub format: Option<Format>,
    /// Output file; stdout when unset.
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub output: Option<String>,
}

/// TOML integers are signed; seeds above `i64::MAX` are written as strings.
mod seed_text {
    use serde::{Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(v: &Option<u64>, s: S) -> Result<S::Ok, S::Error> {
        match v {
            Some(x) if *x <= i64::MAX as u64 => s.serialize_i64(*x as i64),
            Some(x) => s.serialize_str(&x.to_string()),
            None => s.serialize_none(),
        }
    }

    #[derive(Deserialize)]
    #[serde(untagged)]
    enum Raw {
        Int(u64),
        Text(String),
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Option<u64>, D::Error> {
        match Option::<Raw>::deserialize(d)? {
            None => Ok(None),
            Some(Raw::Int(x)) => Ok(Some(x)),
            Some(Raw::Text(t)) => t.parse().map(Some).map_err(serde::de::Error::custom),
        }
    }
}

macro_rules! overlay {
    ($dst:ident, $src:ident, $($f:ident),*) => {
        $( if $src.$f.is_some() { $dst.$f = $src.$f.clone(); } )*
    };
}

impl Params {
    /// Fields set in `other` win.
    pub fn overlay(&mut self, other: &Params) {
        overlay!(
            self, other, q, n, n_list, g, t, l, gamma, h, weight, bound, constraints, preset, mode, samples,
            walk_length, certify, census_bound, stride, prime_budget, fallback, quartic_oracle, c_g, c1, c2,
            enumeration_cap, prime_cap, census_cap, points, master_seed, format, output
        );
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    pub command: Command,
    #[serde(default)]
    pub params: Params,
}

impl ExperimentConfig {
    pub fn from_toml(text: &str) -> Result<Self, String> {
        toml::from_str(text).map_err(|e| e.to_string())
    }

    /// Canonical text: fixed key order, unset keys omitted.
    pub fn to_toml(&self) -> String {
        toml::to_string(self).expect("config is always representable")
    }

    pub fn master_seed(&self) -> u64 {
        self.params.master_seed.unwrap_or(0)
    }
}
