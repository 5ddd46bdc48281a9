//! Identity reports: the outcome of one exact verification, and the JSON
//! wire format the CLI and the suite runner emit.

use crate::poly::Poly;
use serde_json::{json, Value};
use std::collections::BTreeMap;

/// Outcome of verifying one identity instance.  `holds` is true exactly when
/// the residual polynomial (and any auxiliary residuals recorded in
/// `constants`) vanish.
#[derive(Clone, Debug)]
pub struct IdentityReport {
    pub identity: String,
    pub family: String,
    pub params: BTreeMap<String, String>,
    pub n: usize,
    pub m: usize,
    pub holds: bool,
    /// Named constants of the identity (C_{n,m}, Ω's, ...), serialized "p/q".
    pub constants: BTreeMap<String, String>,
    pub lhs: Poly,
    pub rhs: Poly,
    pub residual: Poly,
}

impl IdentityReport {
    pub fn residual_degree(&self) -> i64 {
        self.residual.degree().map(|d| d as i64).unwrap_or(-1)
    }

    pub fn to_json(&self) -> Value {
        json!({
            "identity": self.identity,
            "family": self.family,
            "params": self.params,
            "n": self.n,
            "m": self.m,
            "holds": self.holds,
            "constants": self.constants,
            "residual_degree": self.residual_degree(),
        })
    }
}
