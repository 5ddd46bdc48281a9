//! Exact-arithmetic construction and verification of determinant identities
//! for classical orthogonal polynomials: Wronskian/Casorati master theorems,
//! the named Casorati symmetries, Selberg-type sums over discrete measures,
//! and multivariate constant-term identities.  Every scalar is an
//! arbitrary-precision rational; every identity is checked exactly.

pub mod arith;
pub mod constterm;
pub mod detcore;
pub mod families;
pub mod operators;
pub mod poly;
pub mod report;
pub mod selberg;
pub mod suite;
pub mod symmetry;

pub use arith::{ParamError, ParamErrorKind, Rational};
pub use poly::Poly;
