//! Vandermonde-squared multiple sums over finite discrete measures and the
//! Selberg-type identities they satisfy: the determinant evaluation at the
//! anchor point, its two classical corollaries, the symmetrization lemma,
//! the Racah sum and the Jacobi case at unit exponent.

use crate::arith::{
    choose2, factorial, neg_one_pow, pochhammer, qi, qu, rat_pow, ParamError, Rational, Result,
};
use crate::detcore::{det_rational, OpKind};
use crate::families::{DiscreteMeasure, FamilySpec};
use crate::poly::Poly;
use crate::report::IdentityReport;
use num_traits::{One, Zero};
use rayon::prelude::*;
use std::collections::BTreeMap;

const TUPLE_GUARD: f64 = 1e7;

/// A symmetric scalar factor s(x_1, ..., x_m) of the integrand.
#[derive(Clone, Debug)]
pub enum SymFactor {
    One,
    /// Elementary symmetric polynomial e_k.
    ElementaryE(usize),
    /// Power sum x_1^k + ... + x_m^k.
    PowerSum(usize),
    /// prod_j p(x_j).
    PerVariableProduct(Poly),
}

impl SymFactor {
    fn eval(&self, xs: &[Rational]) -> Rational {
        match self {
            SymFactor::One => Rational::one(),
            SymFactor::ElementaryE(k) => elementary_symmetric(xs, *k),
            SymFactor::PowerSum(k) => {
                xs.iter().map(|x| rat_pow(x, *k as i64)).sum()
            }
            SymFactor::PerVariableProduct(p) => {
                xs.iter().map(|x| p.eval(x)).product()
            }
        }
    }
}

fn elementary_symmetric(xs: &[Rational], k: usize) -> Rational {
    // coefficient extraction from prod (1 + x_i t)
    let mut coeffs = vec![Rational::zero(); k + 1];
    coeffs[0] = Rational::one();
    for x in xs {
        for j in (1..=k).rev() {
            let t = &coeffs[j - 1] * x;
            coeffs[j] = &coeffs[j] + &t;
        }
    }
    coeffs[k].clone()
}

/// The extra determinantal factor of the integrand.
#[derive(Clone, Debug)]
pub enum ExtraFactor {
    None,
    /// Λ²(x).
    VandermondeSquared,
    /// Λ(x) prod_j ψ_{j-1}(x_j) with an explicit basis row.
    VandermondeTimesBasisRow(Vec<Poly>),
}

/// One multiple-sum specification over a finite measure.
#[derive(Clone, Debug)]
pub struct MultiSumSpec {
    pub measure: DiscreteMeasure,
    pub m: usize,
    /// Same factor applied at every variable (e.g. r_{n,u}).
    pub per_variable: Option<Poly>,
    pub extra: ExtraFactor,
    pub symmetric: SymFactor,
}

fn guard(support: usize, m: usize) -> Result<()> {
    if (support as f64).powi(m as i32) > TUPLE_GUARD {
        return Err(ParamError::out_of_range(format!(
            "enumeration guard: {support}^{m} tuples exceed the budget"
        )));
    }
    Ok(())
}

struct Enumerator<'a> {
    support: &'a [(Rational, Rational)],
    m: usize,
    vand_power: u32,
    psis: Option<&'a [Poly]>,
    per_var: Option<&'a Poly>,
    symmetric: &'a SymFactor,
}

impl Enumerator<'_> {
    /// Depth-first sum; the Vandermonde product grows one column of pair
    /// differences per level, so each tuple reuses its predecessor's work.
    fn descend(&self, xs: &mut Vec<Rational>, w: &Rational, vand: &Rational) -> Rational {
        if xs.len() == self.m {
            let mut term = w * rat_pow(vand, self.vand_power as i64);
            if !matches!(self.symmetric, SymFactor::One) {
                term *= self.symmetric.eval(xs);
            }
            return term;
        }
        let depth = xs.len();
        let mut total = Rational::zero();
        for (y, wy) in self.support {
            let mut v2 = vand.clone();
            if self.vand_power > 0 {
                for x in xs.iter() {
                    v2 *= x - y;
                }
                if v2.is_zero() {
                    // a repeated point kills every completion of this prefix
                    continue;
                }
            }
            let mut w2 = w * wy;
            if let Some(p) = self.per_var {
                w2 *= p.eval(y);
            }
            if let Some(ps) = self.psis {
                w2 *= ps[depth].eval(y);
            }
            if w2.is_zero() {
                continue;
            }
            xs.push(y.clone());
            total += self.descend(xs, &w2, &v2);
            xs.pop();
        }
        total
    }

    fn run(&self) -> Rational {
        if self.m == 0 {
            return Rational::one();
        }
        // partition on the outermost index; each worker owns its subtree
        (0..self.support.len())
            .into_par_iter()
            .map(|t| {
                let (y, wy) = &self.support[t];
                let mut w = wy.clone();
                if let Some(p) = self.per_var {
                    w *= p.eval(y);
                }
                if let Some(ps) = self.psis {
                    w *= ps[0].eval(y);
                }
                if w.is_zero() {
                    return Rational::zero();
                }
                let mut xs = vec![y.clone()];
                self.descend(&mut xs, &w, &Rational::one())
            })
            .reduce(Rational::zero, |a, b| a + b)
    }
}

/// Exact sum of the integrand over all m-tuples of support points.
pub fn brute_force_sum(spec: &MultiSumSpec) -> Result<Rational> {
    guard(spec.measure.support.len(), spec.m)?;
    let (vand_power, psis) = match &spec.extra {
        ExtraFactor::None => (0u32, None),
        ExtraFactor::VandermondeSquared => (2u32, None),
        ExtraFactor::VandermondeTimesBasisRow(ps) => {
            if ps.len() < spec.m {
                return Err(ParamError::out_of_range("basis row shorter than m"));
            }
            (1u32, Some(ps.as_slice()))
        }
    };
    let e = Enumerator {
        support: &spec.measure.support,
        m: spec.m,
        vand_power,
        psis,
        per_var: spec.per_variable.as_ref(),
        symmetric: &spec.symmetric,
    };
    Ok(e.run())
}

/// Naive full re-evaluation over all tuples; the correctness oracle for the
/// incremental enumeration.
pub fn brute_force_sum_naive(spec: &MultiSumSpec) -> Result<Rational> {
    guard(spec.measure.support.len(), spec.m)?;
    let s = spec.measure.support.len();
    let mut total = Rational::zero();
    let mut idx = vec![0usize; spec.m];
    loop {
        let xs: Vec<Rational> =
            idx.iter().map(|&t| spec.measure.support[t].0.clone()).collect();
        let mut term: Rational =
            idx.iter().map(|&t| spec.measure.support[t].1.clone()).product();
        if let Some(p) = &spec.per_variable {
            for x in &xs {
                term *= p.eval(x);
            }
        }
        match &spec.extra {
            ExtraFactor::None => {}
            ExtraFactor::VandermondeSquared => {
                let v = crate::detcore::vandermonde(&xs);
                term *= &v * &v;
            }
            ExtraFactor::VandermondeTimesBasisRow(ps) => {
                term *= crate::detcore::vandermonde(&xs);
                for (j, x) in xs.iter().enumerate() {
                    term *= ps[j].eval(x);
                }
            }
        }
        term *= spec.symmetric.eval(&xs);
        total += term;
        // odometer
        let mut d = 0;
        loop {
            if d == spec.m {
                return Ok(total);
            }
            idx[d] += 1;
            if idx[d] < s {
                break;
            }
            idx[d] = 0;
            d += 1;
        }
    }
}

/// The anchored adapted-basis factor r_{n,u} of the two relevant operators.
fn anchored_r(op: OpKind, u: &Rational, n: usize) -> Result<(Poly, Rational)> {
    let shifted = &Poly::var() - &Poly::constant(u.clone());
    match op {
        OpKind::Ddx => Ok((shifted.pow(n).scale(&factorial(n).recip()), factorial(n).recip())),
        OpKind::Delta => Ok((shifted.binom(n), factorial(n).recip())),
        OpKind::Tmu => Err(ParamError::forbidden(
            "the sum identity needs a factored adapted basis; use ddx or delta",
        )),
    }
}

/// Apply T^k to a polynomial for the two concrete operators.
fn op_power(op: OpKind, p: &Poly, k: usize) -> Poly {
    let mut cur = p.clone();
    for _ in 0..k {
        cur = match op {
            OpKind::Ddx => cur.derivative(),
            OpKind::Delta => cur.forward_difference(),
            OpKind::Tmu => unreachable!(),
        };
    }
    cur
}

#[allow(clippy::too_many_arguments)]
fn scalar_report(
    identity: &str,
    family: String,
    params: BTreeMap<String, String>,
    n: usize,
    m: usize,
    lhs: Rational,
    rhs: Rational,
    constants: BTreeMap<String, String>,
) -> IdentityReport {
    let l = Poly::constant(lhs);
    let r = Poly::constant(rhs);
    let residual = &l - &r;
    IdentityReport {
        identity: identity.into(),
        family,
        params,
        n,
        m,
        holds: residual.is_zero(),
        constants,
        lhs: l,
        rhs: r,
        residual,
    }
}

/// The sum identity: ∫...∫ Λ²(x) prod_j r_{n,u}(x_j) dμ equals
/// C_{T,n,m} det(T^{i-1}(p̂_{m+j-1})(u)) with
/// C_{T,n,m} = (-1)^{mn} m! σ_n^m prod_{j<m} ||p̂_j||² prod_{j<n} σ_j.
pub fn verify_tise(
    spec: &FamilySpec,
    op: OpKind,
    n: usize,
    m: usize,
    u: &Rational,
) -> Result<IdentityReport> {
    let measure = spec.measure(None)?;
    let (r_poly, sigma_n) = anchored_r(op, u, n)?;
    let lhs = brute_force_sum(&MultiSumSpec {
        measure,
        m,
        per_variable: Some(r_poly),
        extra: ExtraFactor::VandermondeSquared,
        symmetric: SymFactor::One,
    })?;

    let mut c = neg_one_pow(m * n) * factorial(m) * rat_pow(&sigma_n, m as i64);
    for j in 0..m {
        c *= spec.norm_squared(j)?;
    }
    for j in 0..n {
        c *= factorial(j).recip();
    }
    let det = {
        let rows: Vec<Vec<Rational>> = (0..n)
            .map(|i| {
                (0..n)
                    .map(|j| Ok(op_power(op, &spec.monic(m + j)?, i).eval(u)))
                    .collect::<Result<Vec<_>>>()
            })
            .collect::<Result<Vec<_>>>()?;
        det_rational(&rows)
    };
    let rhs = c.clone() * det;

    let mut constants = BTreeMap::new();
    constants.insert("C_Tnm".into(), c.to_string());
    let mut params = BTreeMap::new();
    params.insert("op".into(), op.name().into());
    params.insert("u".into(), u.to_string());
    Ok(scalar_report("selberg-sum", spec.to_string(), params, n, m, lhs, rhs, constants))
}

/// The two corollary forms: prod (x_j - u)^n against derivative rows and
/// prod (x_j - u - n + 1)_n against difference rows, both with
/// C_{n,m} = (-1)^{mn} m! prod_{j<m} ||p̂_j||² / prod_{j<n} j!.
pub fn verify_tise_corollary(
    spec: &FamilySpec,
    op: OpKind,
    n: usize,
    m: usize,
    u: &Rational,
) -> Result<IdentityReport> {
    let measure = spec.measure(None)?;
    let shifted = &Poly::var() - &Poly::constant(u.clone());
    let factor = match op {
        OpKind::Ddx => shifted.pow(n),
        OpKind::Delta => {
            (&Poly::var() - &Poly::constant(u + qu(n) - Rational::one())).pochhammer(n)
        }
        OpKind::Tmu => {
            return Err(ParamError::forbidden("corollary forms exist for ddx and delta"))
        }
    };
    let lhs = brute_force_sum(&MultiSumSpec {
        measure,
        m,
        per_variable: Some(factor),
        extra: ExtraFactor::VandermondeSquared,
        symmetric: SymFactor::One,
    })?;
    let mut c = neg_one_pow(m * n) * factorial(m);
    for j in 0..m {
        c *= spec.norm_squared(j)?;
    }
    for j in 0..n {
        c *= factorial(j).recip();
    }
    let det = {
        let rows: Vec<Vec<Rational>> = (0..n)
            .map(|i| {
                (0..n)
                    .map(|j| Ok(op_power(op, &spec.monic(m + j)?, i).eval(u)))
                    .collect::<Result<Vec<_>>>()
            })
            .collect::<Result<Vec<_>>>()?;
        det_rational(&rows)
    };
    let rhs = c.clone() * det;
    let mut constants = BTreeMap::new();
    constants.insert("C_nm".into(), c.to_string());
    let mut params = BTreeMap::new();
    params.insert("op".into(), op.name().into());
    params.insert("u".into(), u.to_string());
    Ok(scalar_report("selberg-corollary", spec.to_string(), params, n, m, lhs, rhs, constants))
}

/// The symmetrization lemma: ∫ s Λ prod ψ_{j-1}(x_j) dμ equals
/// (-1)^{binom(m,2)} (prod_{j<m} υ_j / m!) ∫ s Λ² dμ.
pub fn verify_llhi(
    measure: &DiscreteMeasure,
    psis: &[Poly],
    s: &SymFactor,
    m: usize,
) -> Result<bool> {
    let lhs = brute_force_sum(&MultiSumSpec {
        measure: measure.clone(),
        m,
        per_variable: None,
        extra: ExtraFactor::VandermondeTimesBasisRow(psis.to_vec()),
        symmetric: s.clone(),
    })?;
    let rhs_int = brute_force_sum(&MultiSumSpec {
        measure: measure.clone(),
        m,
        per_variable: None,
        extra: ExtraFactor::VandermondeSquared,
        symmetric: s.clone(),
    })?;
    let mut c = neg_one_pow(choose2(m)) / factorial(m);
    for p in psis.iter().take(m) {
        c *= p.leading_coeff();
    }
    Ok(lhs == c * rhs_int)
}

/// The r-basis-only rewrite: with p̂_n = Σ_j θ^n_j r_j for a factored basis
/// r_j = σ_j prod_{t<=j} (x - a_t), the sum equals
/// C_{T,n,m} det(θ^{m+j-1}_{i-1}).
pub fn verify_corf(
    spec: &FamilySpec,
    nodes: &[Rational],
    sigmas: &[Rational],
    n: usize,
    m: usize,
) -> Result<IdentityReport> {
    if sigmas.is_empty() || !sigmas[0].is_one() {
        return Err(ParamError::forbidden("the factored basis needs sigma_0 = 1"));
    }
    let measure = spec.measure(None)?;
    let kmax = n.max(m + n);
    if nodes.len() < kmax || sigmas.len() <= kmax {
        return Err(ParamError::out_of_range("need nodes a_1..a_K and sigmas 0..K"));
    }
    // r_j = sigma_j prod_{t=1}^{j} (x - a_t)
    let mut rs = vec![Poly::one()];
    for j in 1..=kmax {
        if sigmas[j].is_zero() {
            return Err(ParamError::forbidden("sigma_j = 0 breaks the graded basis"));
        }
        let prev = rs[j - 1].scale(&sigmas[j - 1].clone().recip());
        let next = &prev * &(&Poly::var() - &Poly::constant(nodes[j - 1].clone()));
        rs.push(next.scale(&sigmas[j]));
    }
    let u = nodes[0].clone();

    let lhs = brute_force_sum(&MultiSumSpec {
        measure,
        m,
        per_variable: Some(rs[n].clone()),
        extra: ExtraFactor::VandermondeSquared,
        symmetric: SymFactor::One,
    })?;

    // θ-coefficients by exact change of basis
    let mut theta_rows = Vec::with_capacity(n);
    for i in 0..n {
        let coeffs = crate::poly::expand_in_graded_basis(&spec.monic(m + i)?, &rs)?;
        theta_rows.push(coeffs);
    }
    // det(θ^{m+j-1}_{i-1})_{i,j=1}^n
    let det_rows: Vec<Vec<Rational>> = (0..n)
        .map(|i| (0..n).map(|j| theta_rows[j][i].clone()).collect())
        .collect();
    let det = det_rational(&det_rows);

    let mut c = neg_one_pow(m * n) * factorial(m) * rat_pow(&sigmas[n], m as i64);
    for j in 0..m {
        c *= spec.norm_squared(j)?;
    }
    for sig in sigmas.iter().take(n) {
        c *= sig;
    }
    let rhs = c.clone() * det;
    let mut constants = BTreeMap::new();
    constants.insert("C_Tnm".into(), c.to_string());
    let mut params = BTreeMap::new();
    params.insert("u".into(), u.to_string());
    Ok(scalar_report("selberg-factored-basis", spec.to_string(), params, n, m, lhs, rhs, constants))
}

/// The Racah sum: the Λ²-weighted m-fold sum of the lattice weights times
/// the shifted-factorial column equals the closed Pochhammer product.
pub fn verify_racah_selberg(
    nn: usize,
    beta: &Rational,
    gamma: &Rational,
    delta: &Rational,
    n: usize,
    m: usize,
) -> Result<IdentityReport> {
    if n > nn {
        return Err(ParamError::out_of_range("the sum needs n <= N"));
    }
    guard(nn - n + 1, m)?;
    let u = gamma + delta + Rational::one();
    let half = &u / qi(2);
    let nq = qu(nn);

    let poch_den = |base: &Rational, k: usize, what: &str| -> Result<Rational> {
        let v = pochhammer(base, k);
        if v.is_zero() {
            return Err(ParamError::forbidden(format!("{what} vanishes")));
        }
        Ok(v)
    };

    // per-point factor of the sum
    let mut lhs = Rational::zero();
    let xs: Vec<usize> = (n..=nn).collect();
    let factor = |x: usize| -> Result<Rational> {
        let num = pochhammer(&-nq.clone(), x)
            * pochhammer(&(beta + delta + Rational::one()), x)
            * pochhammer(&(gamma + Rational::one()), x)
            * pochhammer(&(&half + Rational::one()), x)
            * pochhammer(&u, x + n);
        let den = poch_den(&(&nq + gamma + delta + qi(2)), x, "(N+gamma+delta+2)_x")?
            * poch_den(&(gamma - beta + Rational::one()), x, "(-beta+gamma+1)_x")?
            * poch_den(&half, x, "((gamma+delta+1)/2)_x")?
            * poch_den(&(delta + Rational::one()), x, "(delta+1)_x")?
            * factorial(x - n);
        Ok(num / den)
    };
    let factors: Vec<Rational> = xs.iter().map(|&x| factor(x)).collect::<Result<Vec<_>>>()?;
    let lam_pts: Vec<Rational> = xs.iter().map(|&x| qu(x) * (qu(x) + &u)).collect();
    // enumerate tuples over the truncated lattice
    let mut idx = vec![0usize; m];
    'outer: loop {
        let pts: Vec<Rational> = idx.iter().map(|&t| lam_pts[t].clone()).collect();
        let v = crate::detcore::vandermonde(&pts);
        if !v.is_zero() {
            let mut term = &v * &v;
            for &t in &idx {
                term *= &factors[t];
            }
            lhs += term;
        }
        let mut d = 0;
        loop {
            if d == m {
                break 'outer;
            }
            idx[d] += 1;
            if idx[d] < xs.len() {
                break;
            }
            idx[d] = 0;
            d += 1;
        }
    }

    // rhs: (-1)^{mn} M^m prod_{j=0}^{m-1} [...]
    let m_mass = pochhammer(&-beta.clone(), nn) * pochhammer(&(gamma + delta + qi(2)), nn)
        / (poch_den(&(gamma - beta + Rational::one()), nn, "(-beta+gamma+1)_N")?
            * poch_den(&(delta + Rational::one()), nn, "(delta+1)_N")?);
    let mut rhs = neg_one_pow(m * n) * rat_pow(&m_mass, m as i64);
    for j in 0..m {
        let num = factorial(j + 1)
            * pochhammer(&(beta - gamma - &nq), j)
            * pochhammer(&(-delta.clone() - &nq), j)
            * pochhammer(&(beta + Rational::one()), j)
            * pochhammer(&-nq.clone(), n + j)
            * pochhammer(&(beta + delta + Rational::one()), n + j)
            * pochhammer(&(gamma + Rational::one()), n + j);
        let den = poch_den(&(beta - &nq + Rational::one()), 2 * j, "(beta-N+1)_{2j}")?
            * poch_den(&(beta - &nq + qu(j)), j, "(beta-N+j)_j")?
            * poch_den(&(beta - &nq + qu(m) + qu(j)), n, "(beta-N+m+j)_n")?;
        rhs *= num / den;
    }

    let mut constants = BTreeMap::new();
    constants.insert("M".into(), m_mass.to_string());
    let mut params = BTreeMap::new();
    params.insert("N".into(), nn.to_string());
    params.insert("beta".into(), beta.to_string());
    params.insert("gamma".into(), gamma.to_string());
    params.insert("delta".into(), delta.to_string());
    Ok(scalar_report("racah-selberg-sum", "racah".into(), params, n, m, lhs, rhs, constants))
}

/// The Jacobi case at unit exponent: the normalized Gamma-product closed
/// form against the Heine norm product, both as exact rationals (no
/// quadrature; the weight x^{α-1}(1-x)^{β-1} enters through its moments
/// (α)_k/(α+β)_k).
pub fn verify_jacobi_selberg_gamma1(
    alpha: &Rational,
    beta: &Rational,
    m: usize,
) -> Result<IdentityReport> {
    // normalized Gamma product: prod_{j<m} (α)_j (β)_j (j+1)! / (α+β)_{m+j-1}
    let mut gamma_side = Rational::one();
    for j in 0..m {
        let den = pochhammer(&(alpha + beta), m + j - 1);
        if den.is_zero() {
            return Err(ParamError::forbidden("(alpha+beta)_{m+j-1} vanishes"));
        }
        gamma_side *= pochhammer(alpha, j) * pochhammer(beta, j) * factorial(j + 1) / den;
    }
    // Heine side: m! det of the moment Hankel matrix
    let moments: Vec<Rational> = (0..2 * m.max(1))
        .map(|k| {
            let den = pochhammer(&(alpha + beta), k);
            if den.is_zero() {
                return Err(ParamError::forbidden("(alpha+beta)_k vanishes"));
            }
            Ok(pochhammer(alpha, k) / den)
        })
        .collect::<Result<Vec<_>>>()?;
    let hankel: Vec<Vec<Rational>> = (0..m)
        .map(|i| (0..m).map(|j| moments[i + j].clone()).collect())
        .collect();
    let heine_side = factorial(m) * det_rational(&hankel);

    let mut params = BTreeMap::new();
    params.insert("alpha".into(), alpha.to_string());
    params.insert("beta".into(), beta.to_string());
    Ok(scalar_report(
        "jacobi-selberg-gamma1",
        "jacobi".into(),
        params,
        0,
        m,
        gamma_side,
        heine_side,
        BTreeMap::new(),
    ))
}

/// Heine: the Λ² m-fold sum over any finite measure equals m! times the
/// m x m Hankel determinant of its power moments.
pub fn heine_check(measure: &DiscreteMeasure, m: usize) -> Result<bool> {
    let lhs = brute_force_sum(&MultiSumSpec {
        measure: measure.clone(),
        m,
        per_variable: None,
        extra: ExtraFactor::VandermondeSquared,
        symmetric: SymFactor::One,
    })?;
    let moments: Vec<Rational> = (0..2 * m.max(1))
        .map(|k| {
            measure
                .support
                .iter()
                .map(|(x, w)| rat_pow(x, k as i64) * w)
                .sum()
        })
        .collect();
    let hankel: Vec<Vec<Rational>> = (0..m)
        .map(|i| (0..m).map(|j| moments[i + j].clone()).collect())
        .collect();
    Ok(lhs == factorial(m) * det_rational(&hankel))
}

/// Elementary two-variable expansion, written out by hand:
/// the m = 2, n = 0 sum is 2(μ0 μ2 - μ1²).
pub fn heine_two_by_two(measure: &DiscreteMeasure) -> Rational {
    let mom = |k: i64| -> Rational {
        measure.support.iter().map(|(x, w)| rat_pow(x, k) * w).sum()
    };
    qi(2) * (mom(0) * mom(2) - mom(1) * mom(1))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::q;

    fn kraw(n: i64) -> FamilySpec {
        FamilySpec::parse(&format!("krawtchouk:a=1,N={n}")).unwrap()
    }

    #[test]
    fn brute_force_small_cases() {
        let meas = kraw(3).measure(None).unwrap();
        // m = 1, n = 0: total mass
        let spec = MultiSumSpec {
            measure: meas.clone(),
            m: 1,
            per_variable: None,
            extra: ExtraFactor::VandermondeSquared,
            symmetric: SymFactor::One,
        };
        assert_eq!(brute_force_sum(&spec).unwrap(), qi(1));
        // m = 2: 2(mu0 mu2 - mu1^2)
        let spec2 = MultiSumSpec { m: 2, ..spec.clone() };
        assert_eq!(brute_force_sum(&spec2).unwrap(), heine_two_by_two(&meas));
    }

    #[test]
    fn incremental_matches_naive() {
        let meas = FamilySpec::parse("hahn:alpha=12,c=2,N=4")
            .unwrap()
            .measure(None)
            .unwrap();
        for m in 1..=3usize {
            for s in [SymFactor::One, SymFactor::ElementaryE(1), SymFactor::PowerSum(2)] {
                let spec = MultiSumSpec {
                    measure: meas.clone(),
                    m,
                    per_variable: Some(Poly::from_coeffs(vec![qi(1), qi(2)])),
                    extra: ExtraFactor::VandermondeSquared,
                    symmetric: s,
                };
                assert_eq!(
                    brute_force_sum(&spec).unwrap(),
                    brute_force_sum_naive(&spec).unwrap()
                );
            }
        }
    }

    #[test]
    fn permutation_symmetry_of_enumeration() {
        let spec = kraw(4);
        let mut meas = spec.measure(None).unwrap();
        let base = MultiSumSpec {
            measure: meas.clone(),
            m: 2,
            per_variable: Some(Poly::from_coeffs(vec![qi(-1), qi(1)])),
            extra: ExtraFactor::VandermondeSquared,
            symmetric: SymFactor::ElementaryE(2),
        };
        let v1 = brute_force_sum(&base).unwrap();
        meas.support.reverse();
        let v2 = brute_force_sum(&MultiSumSpec { measure: meas, ..base }).unwrap();
        assert_eq!(v1, v2);
    }

    #[test]
    fn tise_holds_across_finite_families() {
        let families = [
            "krawtchouk:a=1,N=4",
            "krawtchouk:a=2/3,N=5",
            "hahn:alpha=11,c=3/2,N=4",
            "dualhahn:alpha=21/2,c=5/4,N=4",
        ];
        for fam in families {
            let spec = FamilySpec::parse(fam).unwrap();
            for op in [OpKind::Ddx, OpKind::Delta] {
                for n in 0..=2usize {
                    for m in 1..=2usize {
                        for u in [qi(0), qi(1), qi(-1)] {
                            let rep = verify_tise(&spec, op, n, m, &u).unwrap();
                            assert!(
                                rep.holds,
                                "tise fails for {fam} {op:?} n={n} m={m} u={u}"
                            );
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn tise_n0_is_heine() {
        // n = 0 reduces to m! prod ||p̂_j||²
        let spec = kraw(5);
        let rep = verify_tise(&spec, OpKind::Delta, 0, 3, &qi(0)).unwrap();
        assert!(rep.holds);
        let mut expect = factorial(3);
        for j in 0..3 {
            expect *= spec.norm_squared(j).unwrap();
        }
        assert_eq!(rep.lhs.coeff(0), expect);
        assert!(heine_check(&spec.measure(None).unwrap(), 3).unwrap());
    }

    #[test]
    fn corollary_forms_hold() {
        let ha = FamilySpec::parse("hahn:alpha=4,c=1,N=3").unwrap();
        let rep = verify_tise_corollary(&ha, OpKind::Ddx, 1, 2, &qi(0)).unwrap();
        assert!(rep.holds);
        let kr = kraw(4);
        let rep = verify_tise_corollary(&kr, OpKind::Delta, 2, 2, &qi(0)).unwrap();
        assert!(rep.holds);
        // and at nonzero u
        let rep = verify_tise_corollary(&kr, OpKind::Delta, 2, 2, &qi(1)).unwrap();
        assert!(rep.holds);
    }

    #[test]
    fn llhi_lemma_holds() {
        let meas = kraw(4).measure(None).unwrap();
        // monomial basis, s = 1 and s = e_1; then a family basis
        let mono: Vec<Poly> = (0..4).map(|k| Poly::monomial(qi(1), k)).collect();
        for m in 1..=3usize {
            assert!(verify_llhi(&meas, &mono, &SymFactor::One, m).unwrap());
            assert!(verify_llhi(&meas, &mono, &SymFactor::ElementaryE(1), m).unwrap());
        }
        let fam_basis: Vec<Poly> =
            (0..4).map(|k| kraw(4).monic(k).unwrap()).collect();
        assert!(verify_llhi(&meas, &fam_basis, &SymFactor::ElementaryE(1), 3).unwrap());
        // m = 1 trivial case
        assert!(verify_llhi(&meas, &mono, &SymFactor::PowerSum(2), 1).unwrap());
    }

    #[test]
    fn corf_reduces_to_tise_for_monomials() {
        let spec = kraw(4);
        let nodes = vec![qi(0); 8];
        let sigmas: Vec<Rational> = (0..=8).map(|_| qi(1)).collect();
        for (n, m) in [(1usize, 1usize), (1, 2), (2, 2)] {
            let rep = verify_corf(&spec, &nodes, &sigmas, n, m).unwrap();
            assert!(rep.holds, "corf fails at n={n}, m={m}");
        }
        // random distinct nodes and nontrivial sigmas
        let nodes = vec![qi(0), qi(1), qi(-1), qi(2), q(1, 2), qi(3), qi(-2), qi(4)];
        let sigmas: Vec<Rational> =
            vec![qi(1), qi(2), q(1, 3), qi(-1), q(5, 2), qi(1), q(2, 7), qi(3), qi(1)];
        for (n, m) in [(1usize, 2usize), (2, 2), (3, 2)] {
            let rep = verify_corf(&spec, &nodes, &sigmas, n, m).unwrap();
            assert!(rep.holds, "corf with general nodes fails at n={n}, m={m}");
        }
    }

    #[test]
    fn corf_racah_theta_closed_form() {
        // the factored-basis coefficients of the monic lattice Racah
        // polynomials have the closed form
        // theta^n_j = (-1)^n (-n)_j (n+beta-N)_j / (n! sigma_n (beta+n-N)_n)
        use crate::families::{f_poly, racah_sigma};
        let (nn, beta, gamma, delta) = (4usize, q(17, 2), q(1, 3), q(2, 5));
        let spec = FamilySpec::parse(&format!(
            "racah:alpha={},beta={beta},gamma={gamma},delta={delta}",
            -qi(nn as i64) - Rational::one()
        ))
        .unwrap();
        let u = &gamma + &delta + Rational::one();
        let kmax = 4usize;
        // r_j = sigma_j prod_{i<j} (y - lambda(i))
        let mut rs = vec![Poly::one()];
        let mut nodes = vec![];
        for j in 1..=kmax {
            nodes.push(qu(j - 1) * (qu(j - 1) + &u));
            let sig = racah_sigma(&qu(nn), &beta, &gamma, &delta, j).unwrap();
            let base = f_poly(&u, j).scale(&(neg_one_pow(j) * factorial(j)));
            rs.push(base.scale(&sig));
        }
        for n in 1..=kmax {
            let theta =
                crate::poly::expand_in_graded_basis(&spec.monic(n).unwrap(), &rs).unwrap();
            let sig_n = racah_sigma(&qu(nn), &beta, &gamma, &delta, n).unwrap();
            for (j, th) in theta.iter().enumerate().take(n + 1) {
                let expect = neg_one_pow(n)
                    * pochhammer(&-qi(n as i64), j)
                    * pochhammer(&(qu(n) + &beta - qu(nn)), j)
                    / (factorial(n) * &sig_n * pochhammer(&(&beta + qu(n) - qu(nn)), n));
                assert_eq!(th, &expect, "theta closed form fails at n={n}, j={j}");
            }
        }
        // and the factored-basis sum identity holds with these nodes/sigmas
        // (the construction lives on 0..N, so the basis stops at degree N)
        let sigmas: Vec<Rational> = (0..=nn)
            .map(|j| racah_sigma(&qu(nn), &beta, &gamma, &delta, j).unwrap())
            .collect();
        let full_nodes: Vec<Rational> =
            (0..nn).map(|t| qu(t) * (qu(t) + &u)).collect();
        for (n, m) in [(1usize, 2usize), (1, 1), (2, 2)] {
            let rep = verify_corf(&spec, &full_nodes, &sigmas, n, m).unwrap();
            assert!(rep.holds, "Racah corf fails at n={n}, m={m}");
        }
    }

    #[test]
    fn racah_selberg_sum_holds() {
        for (nn, beta, gamma, delta, n, m) in [
            (2usize, qi(7), qi(1), qi(1), 0usize, 1usize),
            (2, qi(7), qi(1), qi(1), 1, 1),
            (3, qi(9), qi(2), qi(1), 1, 2),
            (3, q(17, 2), q(1, 3), q(2, 5), 1, 2),
        ] {
            let rep = verify_racah_selberg(nn, &beta, &gamma, &delta, n, m).unwrap();
            assert!(rep.holds, "racah sum fails at N={nn}, n={n}, m={m}");
        }
        // m = 0: empty product on both sides
        let rep = verify_racah_selberg(2, &qi(7), &qi(1), &qi(1), 0, 0).unwrap();
        assert!(rep.holds);
        assert_eq!(rep.lhs.coeff(0), qi(1));
    }

    #[test]
    fn jacobi_selberg_gamma1_holds() {
        for alpha in [qi(1), qi(2), qi(3), q(5, 2)] {
            for beta in [qi(1), qi(2), q(5, 2)] {
                for m in 1..=4usize {
                    let rep = verify_jacobi_selberg_gamma1(&alpha, &beta, m).unwrap();
                    assert!(rep.holds, "alpha={alpha}, beta={beta}, m={m}");
                }
            }
        }
        // m = 1: both sides equal 1 after normalization
        let rep = verify_jacobi_selberg_gamma1(&qi(1), &qi(1), 1).unwrap();
        assert_eq!(rep.lhs.coeff(0), qi(1));
    }

    #[test]
    fn guard_rejects_oversized_enumerations() {
        let meas = kraw(12).measure(None).unwrap();
        let spec = MultiSumSpec {
            measure: meas,
            m: 8,
            per_variable: None,
            extra: ExtraFactor::VandermondeSquared,
            symmetric: SymFactor::One,
        };
        assert!(brute_force_sum(&spec).is_err());
    }
}
