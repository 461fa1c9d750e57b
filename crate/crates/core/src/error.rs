use thiserror::Error;

use crate::coeffs::Indeterminate;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("no value assigned to indeterminate {0}")]
    MissingAssignment(Indeterminate),
    #[error("indeterminate {0} with negative exponent evaluated at zero")]
    SingularSubstitution(Indeterminate),
    #[error("elliptic weight degenerate: |theta({arg})| < {threshold:e}")]
    EllipticDegenerate { arg: String, threshold: f64 },
    #[error("degenerate parameter: {0}")]
    DegenerateParameter(String),
    #[error("theta function evaluated at zero argument")]
    ZeroArgument,
    #[error("balancing condition a^2 q^(n+1) = bcde violated (relative error {0:e})")]
    BalancingViolation(f64),
    #[error("non-finite value produced by {0}")]
    NonFinite(String),
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error("{0} is not available for this weight family")]
    NotApplicable(String),
    #[error("path region too large: {steps} steps exceeds limit {limit}")]
    TooLarge { steps: u32, limit: u32 },
    #[error("parse error: {0}")]
    Parse(String),
}
