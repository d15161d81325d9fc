//! Crate-wide error type.

use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("{0} is not prime")]
    NotPrime(u64),

    #[error("field size q = {q} exceeds the table cap of {cap}")]
    CapExceeded { q: u64, cap: u64 },

    #[error("alphabet M = {m_ary} must exceed 2 and divide {group_order}")]
    AlphabetMismatch { m_ary: u32, group_order: u64 },

    #[error("power residue sequences need a prime field, got GF({p}^{m})")]
    PrimeFieldRequired { p: u64, m: u32 },

    #[error("argument out of range: {0}")]
    RangeError(String),

    #[error("product character is identically one")]
    TrivialCharacter,

    #[error("operation requires a {expected} matrix, got {found}")]
    FamilyMismatch {
        expected: &'static str,
        found: &'static str,
    },

    #[error("measurement is zero; finite SNR is undefined")]
    ZeroSignal,

    #[error("verification mismatch: {0}")]
    VerifyMismatch(String),

    #[error("parse error at line {line}: {msg}")]
    ParseError { line: usize, msg: String },

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
