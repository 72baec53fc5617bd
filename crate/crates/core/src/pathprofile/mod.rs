//! Path homomorphism profiles: the lifted cone, the inequality checker,
//! R-family rays with their decomposition, and witness search.

pub mod cone;
pub mod ineq;
pub mod rays;
pub mod witness;

pub use cone::{
    build_cone_c, check_path_inequality, derived_inequality_rows, in_cone_c, lift_membership, verify_certificate,
    Certificate, CertificateTerm, PathConeC, PathVerdict,
};
pub use ineq::{BinomialInequality, Family, IneqParseError};
pub use rays::{decompose_ray, rfamily_check, rfamily_ray, symmetrize_d, truncate_d, RFamilySpec, RayPart};
pub use witness::{find_witness, Witness, WitnessOptions, WitnessSource};

use crate::exactlp::LpError;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum PathError {
    #[error(transparent)]
    Parse(#[from] IneqParseError),
    #[error("expected a path inequality, got family {0:?}")]
    WrongFamily(Family),
    #[error("unknown generator label {0:?}")]
    UnknownLabel(String),
    #[error("precondition violated: {0}")]
    Precondition(String),
    #[error(transparent)]
    Lp(#[from] LpError),
}
