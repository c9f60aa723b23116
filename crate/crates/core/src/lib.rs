//! Numerical laboratory for explicit formulas of L-functions and for a
//! finite orbit model of equivariant Lefschetz trace formulas.
//!
//! The crate computes both sides of four explicit formulas (Riemann zeta,
//! primitive Dirichlet L, Dedekind zeta of cyclotomic fields, abelian Artin
//! L) against certified zero lists, and verifies the orbit-model trace
//! identity of a flow on a finite Galois cover together with its fixed-point
//! factor identities.

pub mod arith;
pub mod characters;
pub mod error;
pub mod explicit;
pub mod lefschetz;
pub mod lseries;
pub mod moments;
pub mod numberfield;
pub mod quadrature;
pub mod special;
pub mod zeros;

pub use error::{Error, Result};
