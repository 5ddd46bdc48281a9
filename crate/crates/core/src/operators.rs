//! Degree-lowering operators T and the two polynomial sequences attached to
//! them: the adapted basis (r_n) with T(r_n) = r_{n-1} and prescribed values
//! at an anchor point, and its convolution inverse (s_n).

use crate::arith::{ParamError, Rational, Result};
use crate::poly::{expand_in_graded_basis, Poly};
use num_traits::Zero;

/// A linear operator on polynomials lowering the degree by exactly one.
#[derive(Clone, Debug)]
pub enum LoweringOperator {
    /// d/dx.
    Derivative,
    /// Δ: p(x+1) - p(x).
    ForwardDifference,
    /// T(p_n) = p_{n-1} by linearity on an explicit graded basis p_0..p_N
    /// (T(p_0) = 0).
    BasisLowering(Vec<Poly>),
}

impl LoweringOperator {
    /// Apply the operator once.
    pub fn apply(&self, p: &Poly) -> Result<Poly> {
        match self {
            LoweringOperator::Derivative => Ok(p.derivative()),
            LoweringOperator::ForwardDifference => Ok(p.forward_difference()),
            LoweringOperator::BasisLowering(basis) => {
                let coeffs = expand_in_graded_basis(p, basis)?;
                let mut out = Poly::zero();
                for (n, c) in coeffs.iter().enumerate().skip(1) {
                    if !c.is_zero() {
                        out = &out + &basis[n - 1].scale(c);
                    }
                }
                Ok(out)
            }
        }
    }

    /// Apply the operator k times.
    pub fn apply_pow(&self, p: &Poly, k: usize) -> Result<Poly> {
        let mut cur = p.clone();
        for _ in 0..k {
            cur = self.apply(&cur)?;
        }
        Ok(cur)
    }
}

/// The sequence r_0..r_N with r_0 = 1, deg r_n = n, T(r_n) = r_{n-1} and
/// anchor values r_n(x0) = ξ_n.
#[derive(Clone, Debug)]
pub struct AdaptedBasis {
    pub rs: Vec<Poly>,
    /// Leading coefficients σ_n of r_n.
    pub sigma: Vec<Rational>,
    pub x0: Rational,
    /// ξ_n = r_n(x0) for n >= 1 (index 0 unused, always r_0(x0) = 1).
    pub anchor_values: Vec<Rational>,
}

/// Build the adapted basis by the recursion
/// r_{n+1} = [(x-x0)^{n+1} - Σ_{j<n} α_j (r_{j+1} - ξ_{j+1})]/α_n + ξ_{n+1},
/// where T((x-x0)^{n+1}) = Σ_{j<=n} α_j r_j.
pub fn build_adapted_basis(
    op: &LoweringOperator,
    x0: &Rational,
    anchor_values: &[Rational],
    max_degree: usize,
) -> Result<AdaptedBasis> {
    if anchor_values.len() < max_degree {
        return Err(ParamError::out_of_range(format!(
            "need {} anchor values, got {}",
            max_degree,
            anchor_values.len()
        )));
    }
    let shifted = &Poly::var() - &Poly::constant(x0.clone());
    let mut rs = vec![Poly::one()];
    for n in 0..max_degree {
        let power = shifted.pow(n + 1);
        let image = op.apply(&power)?;
        let alphas = expand_in_graded_basis(&image, &rs)?;
        let alpha_n = alphas[n].clone();
        if alpha_n.is_zero() {
            return Err(ParamError::degenerate(format!(
                "operator does not lower (x-x0)^{} by one degree",
                n + 1
            )));
        }
        let mut num = power;
        for (j, alpha) in alphas.iter().enumerate().take(n) {
            if alpha.is_zero() {
                continue;
            }
            let centered =
                &rs[j + 1] - &Poly::constant(anchor_values[j].clone());
            num = &num - &centered.scale(alpha);
        }
        let r_next = &num.scale(&alpha_n.recip())
            + &Poly::constant(anchor_values[n].clone());
        rs.push(r_next);
    }
    let sigma = rs.iter().map(Poly::leading_coeff).collect();
    Ok(AdaptedBasis {
        rs,
        sigma,
        x0: x0.clone(),
        anchor_values: anchor_values[..max_degree].to_vec(),
    })
}

/// The convolution inverse (s_n) of (r_n): s_0 = 1, Σ_j s_j r_{n-j} = 0.
#[derive(Clone, Debug)]
pub struct InverseSequence {
    pub ss: Vec<Poly>,
}

pub fn build_inverse_sequence(basis: &AdaptedBasis) -> InverseSequence {
    InverseSequence { ss: inverse_sequence_from_rs(&basis.rs) }
}

/// s_n = -Σ_{j=0}^{n-1} s_j r_{n-j}, using r_0 = 1.
pub fn inverse_sequence_from_rs(rs: &[Poly]) -> Vec<Poly> {
    let mut ss = vec![Poly::one()];
    for n in 1..rs.len() {
        let mut acc = Poly::zero();
        for (j, s) in ss.iter().enumerate() {
            acc = &acc + &(s * &rs[n - j]);
        }
        ss.push(-&acc);
    }
    ss
}
