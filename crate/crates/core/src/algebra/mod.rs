//! Symbols of homogeneous constant-coefficient operators and the linear
//! algebra built on them.

mod homop;
mod rank;
mod roots;
pub mod scalar;

use thiserror::Error;

pub use homop::{Direction, HomOp};
pub use rank::{det_integer, rank_exact, select_independent, svd_rank, Selection, DEFAULT_RANK_TOL};
pub use roots::{char_roots, poly_roots};
pub use scalar::{Angle, GaussRat, Real, Scalar, C64};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum AlgebraError {
    #[error("operator degree mismatch: expected {expected}, found {found}")]
    DegreeMismatch { expected: u32, found: u32 },
    #[error("interior operator has real characteristic root {0} (not elliptic)")]
    RealRoot(C64),
    #[error("repeated characteristic root {0} is not supported")]
    RepeatedRoot(C64),
    #[error("coefficient of ζ2^2m vanishes; rotate coordinates first")]
    DegenerateLeading,
    #[error("interior operator must have even order >= 2, got {0}")]
    OddOrder(u32),
    #[error("companion eigenvalue computation failed")]
    RootFinding,
}
