//! Identification geometry: covers, weights, system matrices and
//! identifier signals.

pub mod cover;
pub mod identifier;
pub mod scheme;
pub mod weights;

pub use cover::{covers, find_cover, CoverOptions, CoverResult};
pub use identifier::{realize_identifier, IdentifierSpec};
pub use scheme::{is_prime, SamplingScheme};
pub use weights::{
    condition_number, cubic_phase, full_spark_certificate, gabor_system_matrix, make_weights, with_weights,
    SparkCertificate, MAX_CONDITION,
};
