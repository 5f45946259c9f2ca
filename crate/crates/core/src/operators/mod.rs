//! Operators with compactly supported spreading functions: storage,
//! conversions between representations, application and norms.

pub mod io;
pub mod norms;
pub mod operator;
pub mod random;
pub mod support;

pub use norms::{operator_norm_estimate, sup_norm_on, NormEstimate, SupNorm};
pub use operator::{BandlimitedOperator, KernelOperator, Operator, Representation, Route};
pub use random::{random_opw, DEFAULT_SMOOTHING};
pub use support::{Rect, SupportRegion};
