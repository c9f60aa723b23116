//! Crate-wide error type.

use num_complex::Complex64;
use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, Error)]
pub enum Error {
    #[error("gamma factor pole at s = {0}")]
    GammaPole(Complex64),

    #[error("{label} has a pole at s = {s}")]
    LSeriesPole { label: String, s: Complex64 },

    #[error("character mod {modulus} is not primitive (conductor {conductor})")]
    ImprimitiveCharacter { modulus: u64, conductor: u64 },

    #[error("character mod {0} is trivial; operation requires a nontrivial character")]
    TrivialCharacter(u64),

    #[error("integral diverges: {0}")]
    Divergent(String),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("test function support must not contain 0 (support is [{lo}, {hi}])")]
    SupportContainsZero { lo: f64, hi: f64 },

    #[error("test function support must lie in (0, inf) (support is [{lo}, {hi}])")]
    SupportNotPositive { lo: f64, hi: f64 },

    #[error("prime bound {bound} is below the support requirement {needed}")]
    InsufficientPrimeBound { bound: u64, needed: f64 },

    #[error("box boundary too close to a zero or pole (min modulus {min_modulus:.3e} after {attempts} perturbations)")]
    BoundaryTooClose { min_modulus: f64, attempts: u32 },

    #[error("zero list incomplete for {label}: located {located} zeros in (0,{t}] but the argument principle counts {expected}")]
    CompletenessMismatch {
        label: String,
        located: usize,
        expected: i64,
        t: f64,
    },

    #[error("zero list from {found} cannot feed a formula for {expected}")]
    SourceMismatch { expected: String, found: String },

    #[error("winding number did not stabilize: {0}")]
    UnstableWinding(String),

    #[error("matrix is singular (|det| = {0:.3e})")]
    SingularMatrix(f64),

    #[error("{0} is not a subgroup")]
    NotASubgroup(String),

    #[error("orbit model invalid: {0}")]
    InvalidModel(String),

    #[error("representation invalid: {0}")]
    InvalidRepresentation(String),

    #[error("operator does not commute with the group action (defect {0:.3e})")]
    NonCommuting(f64),

    #[error("operator minus z*Id is not nilpotent on the invariant subspace (defect {0:.3e})")]
    NotNilpotent(f64),

    #[error("point {0} lies outside the closed critical strip")]
    PointOutsideStrip(Complex64),

    #[error("multiset too large: {len} points (limit {limit})")]
    MultisetTooLarge { len: usize, limit: usize },

    #[error("sign table does not cover iterate k = {k} of orbit {orbit}")]
    SignTableIncomplete { orbit: usize, k: i64 },

    #[error("io error: {0}")]
    Io(String),

    #[error("parse error: {0}")]
    Parse(String),
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

impl From<serde_json::Error> for Error {
    fn from(e: serde_json::Error) -> Self {
        Error::Parse(e.to_string())
    }
}
