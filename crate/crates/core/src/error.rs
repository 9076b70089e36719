use thiserror::Error;

use crate::groups::GroupId;

/// Every failure the library can report. The variant name doubles as the
/// error's taxonomy name in CLI output (see [`Error::kind`]).
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("variable index {index} out of range 1..={arity}")]
    VarOutOfRange { index: usize, arity: usize },
    #[error("arity mismatch: expected {expected}, found {found}")]
    ArityMismatch { expected: usize, found: usize },
    #[error("integer overflow in {0}")]
    Overflow(&'static str),
    #[error("carrier mismatch: expected {expected}, found {found}")]
    CarrierMismatch { expected: GroupId, found: GroupId },
    #[error("{0} is outside the domain <a^2, b^4> of the unique square root")]
    NotInDomain(String),
    #[error("{0} does not lie in the fibred product")]
    NotInImage(String),
    #[error("{0} does not lie in the index-two subgroup")]
    NotInSubgroup(String),
    #[error("value {0} of the word does not lie in K")]
    TargetNotInK(String),
    #[error("transferred solution failed verification: {0}")]
    VerificationFailed(String),
    #[error("parse error at column {pos}: {msg}")]
    Parse { pos: usize, msg: String },
}

impl Error {
    pub fn kind(&self) -> &'static str {
        match self {
            Error::VarOutOfRange { .. } => "VarOutOfRange",
            Error::ArityMismatch { .. } => "ArityMismatch",
            Error::Overflow(_) => "Overflow",
            Error::CarrierMismatch { .. } => "CarrierMismatch",
            Error::NotInDomain(_) => "NotInDomain",
            Error::NotInImage(_) => "NotInImage",
            Error::NotInSubgroup(_) => "NotInSubgroup",
            Error::TargetNotInK(_) => "TargetNotInK",
            Error::VerificationFailed(_) => "VerificationFailed",
            Error::Parse { .. } => "ParseError",
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;

/// Checked integer helpers; every group law goes through these.
pub(crate) mod checked {
    use super::{Error, Result};

    #[inline]
    pub fn add(a: i64, b: i64) -> Result<i64> {
        a.checked_add(b).ok_or(Error::Overflow("addition"))
    }

    #[inline]
    pub fn sub(a: i64, b: i64) -> Result<i64> {
        a.checked_sub(b).ok_or(Error::Overflow("subtraction"))
    }

    #[inline]
    pub fn mul(a: i64, b: i64) -> Result<i64> {
        a.checked_mul(b).ok_or(Error::Overflow("multiplication"))
    }

    #[inline]
    pub fn neg(a: i64) -> Result<i64> {
        a.checked_neg().ok_or(Error::Overflow("negation"))
    }

    /// `a` if `positive`, else `-a`.
    #[inline]
    pub fn signed(a: i64, positive: bool) -> Result<i64> {
        if positive {
            Ok(a)
        } else {
            neg(a)
        }
    }
}
