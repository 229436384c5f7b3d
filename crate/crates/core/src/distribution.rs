//! Probability distributions over signed cycle types, with exact rational
//! or floating-point weights.

use std::collections::BTreeMap;
use std::ops::{Add, Div, Sub};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Signed, ToPrimitive, Zero};
use serde::ser::SerializeStruct;
use serde::{Deserialize, Serialize, Serializer};

use crate::weilpoly::SignedCycleType;

/// Scalar a distribution can be weighted in.
pub trait Weight:
    Clone + PartialOrd + Zero + Signed + Add<Output = Self> + Sub<Output = Self> + Div<Output = Self>
{
    fn ratio(num: u64, den: u64) -> Self;
    fn to_f64(&self) -> f64;
    /// Exact text form, when the weight has one.
    fn exact_text(&self) -> Option<String> {
        None
    }
}

impl Weight for f64 {
    fn ratio(num: u64, den: u64) -> Self {
        num as f64 / den as f64
    }

    fn to_f64(&self) -> f64 {
        *self
    }
}

impl Weight for BigRational {
    fn ratio(num: u64, den: u64) -> Self {
        BigRational::new(BigInt::from(num), BigInt::from(den))
    }

    fn to_f64(&self) -> f64 {
        ToPrimitive::to_f64(self).unwrap_or(f64::NAN)
    }

    fn exact_text(&self) -> Option<String> {
        Some(self.to_string())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Provenance {
    ExactEnumeration,
    MonteCarlo,
    FamilyEmpirical,
}

#[derive(Clone, Debug, PartialEq)]
pub struct TypeDistribution<W> {
    pub weights: BTreeMap<SignedCycleType, W>,
    /// Raw tallies behind the weights.
    pub counts: BTreeMap<SignedCycleType, u64>,
    /// Number of draws; 0 for exact enumeration.
    pub sample_count: u64,
    pub provenance: Provenance,
}

impl<W: Weight> TypeDistribution<W> {
    pub fn from_counts(counts: BTreeMap<SignedCycleType, u64>, provenance: Provenance) -> Self {
        let total: u64 = counts.values().sum();
        let weights = counts
            .iter()
            .filter(|(_, &c)| c > 0)
            .map(|(t, &c)| (t.clone(), W::ratio(c, total)))
            .collect();
        let sample_count = if provenance == Provenance::ExactEnumeration { 0 } else { total };
        TypeDistribution { weights, counts, sample_count, provenance }
    }

    pub fn total_count(&self) -> u64 {
        self.counts.values().sum()
    }

    pub fn weight(&self, t: &SignedCycleType) -> W {
        self.weights.get(t).cloned().unwrap_or_else(W::zero)
    }

    pub fn total_weight(&self) -> W {
        self.weights.values().cloned().fold(W::zero(), |a, b| a + b)
    }

    /// Mass on the all-plus identity type.
    pub fn split_weight(&self) -> W {
        self.weights
            .iter()
            .filter(|(t, _)| t.is_split())
            .fold(W::zero(), |a, (_, w)| a + w.clone())
    }

    pub fn regular_count(&self) -> u64 {
        self.counts.iter().filter(|(t, _)| t.is_regular()).map(|(_, c)| c).sum()
    }

    /// Drop the `Ramified` and `NonRegular` bins and renormalize.
    pub fn condition_on_regular(&self) -> Self {
        let counts: BTreeMap<_, _> = self
            .counts
            .iter()
            .filter(|(t, _)| t.is_regular())
            .map(|(t, c)| (t.clone(), *c))
            .collect();
        Self::from_counts(counts, self.provenance)
    }

    /// Per-bin `sqrt(p (1 - p) / N)`; zero for exact distributions.
    pub fn standard_errors(&self) -> BTreeMap<SignedCycleType, f64> {
        let n = self.sample_count as f64;
        self.weights
            .iter()
            .map(|(t, w)| {
                let p = w.to_f64();
                let se = if self.sample_count == 0 { 0.0 } else { (p * (1.0 - p) / n).sqrt() };
                (t.clone(), se)
            })
            .collect()
    }

    pub fn to_f64(&self) -> TypeDistribution<f64> {
        TypeDistribution {
            weights: self.weights.iter().map(|(t, w)| (t.clone(), w.to_f64())).collect(),
            counts: self.counts.clone(),
            sample_count: self.sample_count,
            provenance: self.provenance,
        }
    }
}

/// `(1/2) sum_t |d1(t) - d2(t)|`, missing bins counting as 0.
pub fn tv_distance<W: Weight>(d1: &TypeDistribution<W>, d2: &TypeDistribution<W>) -> W {
    let mut keys: Vec<&SignedCycleType> = d1.weights.keys().chain(d2.weights.keys()).collect();
    keys.sort();
    keys.dedup();
    let sum = keys
        .into_iter()
        .fold(W::zero(), |acc, t| acc + (d1.weight(t) - d2.weight(t)).abs());
    sum / (W::ratio(2, 1))
}

impl<W: Weight> Serialize for TypeDistribution<W> {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        let weights: BTreeMap<String, f64> =
            self.weights.iter().map(|(t, w)| (t.to_string(), w.to_f64())).collect();
        let counts: BTreeMap<String, u64> = self.counts.iter().map(|(t, c)| (t.to_string(), *c)).collect();
        let exact: Option<BTreeMap<String, String>> = self
            .weights
            .iter()
            .map(|(t, w)| w.exact_text().map(|e| (t.to_string(), e)))
            .collect();
        let mut st = s.serialize_struct("TypeDistribution", 6)?;
        st.serialize_field("provenance", &self.provenance)?;
        st.serialize_field("sample_count", &self.sample_count)?;
        st.serialize_field("weights", &weights)?;
        st.serialize_field("exact_weights", &exact)?;
        st.serialize_field("counts", &counts)?;
        if self.provenance == Provenance::ExactEnumeration {
            st.skip_field("standard_errors")?;
        } else {
            let se: BTreeMap<String, f64> =
                self.standard_errors().into_iter().map(|(t, e)| (t.to_string(), e)).collect();
            st.serialize_field("standard_errors", &se)?;
        }
        st.end()
    }
}
