//! Galois groups of `L(x) + tx` over `F_q(t)` for q-linearized `L`.
//!
//! The crate is organised bottom-up:
//!
//! - [`ff`]: finite field towers with packed element encodings.
//! - [`poly`]: dense polynomials, factorization, resultants and discriminants.
//! - [`linpoly`]: q-linearized polynomials, specialization and root spaces.
//! - [`group`]: Singer cycles, their normalizers and cycle-type censuses.
//! - [`engine`]: cycle-type sampling, witnesses, verdicts and exhaustive checkers.
//! - [`cli`]: argument parsing and JSON reports for the `linmono` binary.

pub mod arith;
pub mod cli;
pub mod engine;
pub mod error;
pub mod ff;
pub mod group;
mod linalg;
pub mod linpoly;
pub mod poly;

pub use error::{Error, Result};
pub use ff::{extend_field, make_field, FieldCtx, FieldElem};
pub use group::{Census, MatGL, SingerModel};
pub use linpoly::{LinPoly, SquareClass};
pub use poly::{CycleType, Poly};
