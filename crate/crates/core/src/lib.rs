pub mod decimal;
pub mod error;
pub mod ffield;
pub mod modpoly;
pub mod primes;
pub mod intpoly;
pub mod zfactor;
pub mod roots;
pub mod curvezeta;
pub mod weilpoly;
pub mod weylcert;
pub mod census;
pub mod distribution;
pub mod sympstat;
pub mod forge;

pub use census::{split_census, CensusReport};
pub use curvezeta::{count_points, specialize_curve, specialize_curve_at, validate_weil, zeta_numerator, Curve, WeilPolynomial};
pub use distribution::{tv_distance, Provenance, TypeDistribution};
pub use error::{Error, Result};
pub use ffield::{FieldDescriptor, FieldElement};
pub use forge::{build_sequence, scan_family, CandidateRecord, LocalCondition};
pub use intpoly::IntPoly;
pub use weilpoly::{signed_cycle_type, CmPair, SignedCycleType};
pub use weylcert::{certify_weyl, CertStatus, CertifyOptions, WeylCertificate};

pub type ExactDistribution = TypeDistribution<num_rational::BigRational>;
pub type SampledDistribution = TypeDistribution<f64>;
