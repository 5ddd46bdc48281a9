//! Exact determinant engine and the master Wronskian/Casorati identities:
//! the Ω_n moment determinants, the n x n operator-power determinant against
//! the m x m dual determinant, and their constants.

use crate::arith::{choose2, neg_one_pow, qu, ParamError, Rational, Result};
use crate::families::{FamilySpec, MomentTable, PsiKind};
use crate::operators::inverse_sequence_from_rs;
use crate::poly::Poly;
use crate::report::IdentityReport;
use num_traits::{One, Zero};
use std::collections::BTreeMap;

pub mod quad;

/// Rectangular grid of polynomials.
#[derive(Clone, Debug)]
pub struct PolyMatrix {
    entries: Vec<Vec<Poly>>,
}

impl PolyMatrix {
    pub fn new(entries: Vec<Vec<Poly>>) -> Self {
        if let Some(first) = entries.first() {
            let w = first.len();
            assert!(entries.iter().all(|r| r.len() == w), "ragged PolyMatrix");
        }
        PolyMatrix { entries }
    }

    pub fn rows(&self) -> usize {
        self.entries.len()
    }

    pub fn cols(&self) -> usize {
        self.entries.first().map_or(0, Vec::len)
    }

    pub fn get(&self, i: usize, j: usize) -> &Poly {
        &self.entries[i][j]
    }
}

/// Exact determinant by fraction-free (Bareiss) elimination; the 0 x 0
/// determinant is 1 by convention.
pub fn det_poly(m: &PolyMatrix) -> Poly {
    let n = m.rows();
    assert_eq!(n, m.cols(), "determinant of a non-square matrix");
    if n == 0 {
        return Poly::one();
    }
    let mut a = m.entries.clone();
    let mut sign = 1i32;
    let mut prev = Poly::one();
    for k in 0..n - 1 {
        if a[k][k].is_zero() {
            match (k + 1..n).find(|&r| !a[r][k].is_zero()) {
                None => return Poly::zero(),
                Some(r) => {
                    a.swap(k, r);
                    sign = -sign;
                }
            }
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let t = &(&a[k][k] * &a[i][j]) - &(&a[i][k] * &a[k][j]);
                a[i][j] = t
                    .div_exact(&prev)
                    .expect("Bareiss division is exact over an integral domain");
            }
        }
        for row in a.iter_mut().skip(k + 1) {
            row[k] = Poly::zero();
        }
        prev = a[k][k].clone();
    }
    let d = a[n - 1][n - 1].clone();
    if sign < 0 {
        -&d
    } else {
        d
    }
}

/// Cofactor expansion along the first row; the small-size oracle for
/// `det_poly`.
pub fn det_cofactor(m: &PolyMatrix) -> Poly {
    let n = m.rows();
    assert_eq!(n, m.cols());
    if n == 0 {
        return Poly::one();
    }
    if n == 1 {
        return m.entries[0][0].clone();
    }
    let mut acc = Poly::zero();
    for j in 0..n {
        if m.entries[0][j].is_zero() {
            continue;
        }
        let minor: Vec<Vec<Poly>> = m.entries[1..]
            .iter()
            .map(|row| {
                row.iter()
                    .enumerate()
                    .filter(|(c, _)| *c != j)
                    .map(|(_, p)| p.clone())
                    .collect()
            })
            .collect();
        let term = &m.entries[0][j] * &det_cofactor(&PolyMatrix::new(minor));
        if j % 2 == 0 {
            acc = &acc + &term;
        } else {
            acc = &acc - &term;
        }
    }
    acc
}

/// Exact determinant of a scalar matrix.
pub fn det_rational(a: &[Vec<Rational>]) -> Rational {
    let n = a.len();
    if n == 0 {
        return Rational::one();
    }
    assert!(a.iter().all(|r| r.len() == n));
    let mut a: Vec<Vec<Rational>> = a.to_vec();
    let mut det = Rational::one();
    for k in 0..n {
        let pivot = match (k..n).find(|&r| !a[r][k].is_zero()) {
            None => return Rational::zero(),
            Some(r) => r,
        };
        if pivot != k {
            a.swap(k, pivot);
            det = -det;
        }
        det *= &a[k][k];
        let inv = a[k][k].clone().recip();
        for i in k + 1..n {
            let factor = &a[i][k] * &inv;
            if factor.is_zero() {
                continue;
            }
            let pivot_row = a[k][k..n].to_vec();
            for (j, pv) in pivot_row.iter().enumerate() {
                let t = pv * &factor;
                a[i][k + j] = &a[i][k + j] - &t;
            }
        }
    }
    det
}

/// Which specialization of the lowering operator drives a verification.
#[derive(Clone, Copy, Debug, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum OpKind {
    /// d/dx with the shifted-monomial bases.
    Ddx,
    /// Δ with the binomial bases.
    Delta,
    /// T_μ(p_n) = p_{n-1} on the family's own basis.
    Tmu,
}

impl OpKind {
    pub fn parse(s: &str) -> Result<Self> {
        match s {
            "ddx" | "derivative" => Ok(OpKind::Ddx),
            "delta" => Ok(OpKind::Delta),
            "tmu" => Ok(OpKind::Tmu),
            other => Err(ParamError::forbidden(format!("unknown operator '{other}'"))),
        }
    }

    pub fn name(&self) -> &'static str {
        match self {
            OpKind::Ddx => "ddx",
            OpKind::Delta => "delta",
            OpKind::Tmu => "tmu",
        }
    }
}

/// Everything the master identities need for one (family, operator) pair up
/// to a degree cap: the adapted basis, its inverse sequence, the ψ basis,
/// the moment table and the family polynomials with their leading
/// coefficients.
pub struct MasterContext {
    pub op: OpKind,
    pub rs: Vec<Poly>,
    pub ss: Vec<Poly>,
    pub psis: Vec<Poly>,
    /// mu[j][i] = μ_j^i.
    pub mu: Vec<Vec<Rational>>,
    /// Family polynomials in the normalization entering the measure-side
    /// identity (monic for d/dx and Δ, the lowered normalization for T_μ).
    pub family_p: Vec<Poly>,
    /// σ_n: leading coefficients of r_n.
    pub sigma: Vec<Rational>,
    /// ξ_n: leading coefficients of family_p[n].
    pub xi: Vec<Rational>,
}

pub fn master_context(spec: &FamilySpec, op: OpKind, kmax: usize) -> Result<MasterContext> {
    let (rs, ss, psis, table, family_p): (Vec<Poly>, Vec<Poly>, Vec<Poly>, MomentTable, Vec<Poly>) =
        match op {
            OpKind::Ddx => {
                let x0 = spec.natural_x0();
                let shifted = &Poly::var() - &Poly::constant(x0.clone());
                let rs: Vec<Poly> = (0..=kmax)
                    .map(|n| shifted.pow(n).scale(&crate::arith::factorial(n).recip()))
                    .collect();
                let ss: Vec<Poly> = (0..=kmax)
                    .map(|n| {
                        (-&shifted).pow(n).scale(&crate::arith::factorial(n).recip())
                    })
                    .collect();
                let psis: Vec<Poly> = (0..=kmax).map(|i| shifted.pow(i)).collect();
                let table = spec.moment_table(&PsiKind::ShiftedMonomial(x0), kmax)?;
                let fam = (0..=kmax)
                    .map(|n| spec.monic(n))
                    .collect::<Result<Vec<_>>>()?;
                (rs, ss, psis, table, fam)
            }
            OpKind::Delta => {
                let rs: Vec<Poly> = (0..=kmax).map(crate::poly::binom_poly).collect();
                let ss: Vec<Poly> = (0..=kmax).map(|n| (-&Poly::var()).binom(n)).collect();
                let psis = rs.clone();
                let table = spec.moment_table(&PsiKind::Binomial, kmax)?;
                let fam = (0..=kmax)
                    .map(|n| spec.monic(n))
                    .collect::<Result<Vec<_>>>()?;
                (rs, ss, psis, table, fam)
            }
            OpKind::Tmu => {
                let fam = (0..=kmax)
                    .map(|n| spec.natural_tmu_polynomial(n))
                    .collect::<Result<Vec<_>>>()?;
                let ss = inverse_sequence_from_rs(&fam);
                let table = spec.moment_table(&PsiKind::FamilyBasis, kmax)?;
                (fam.clone(), ss, fam.clone(), table, fam)
            }
        };
    let sigma = rs.iter().map(Poly::leading_coeff).collect();
    let xi = family_p.iter().map(Poly::leading_coeff).collect();
    Ok(MasterContext { op, rs, ss, psis, mu: table.mu, family_p, sigma, xi })
}

impl MasterContext {
    /// q_n^i = Σ_j μ_j^i s_{n-j}.
    pub fn q_poly(&self, n: usize, i: usize) -> Poly {
        let mut acc = Poly::zero();
        for j in 0..=n {
            let c = &self.mu[j][i];
            if !c.is_zero() {
                acc = &acc + &self.ss[n - j].scale(c);
            }
        }
        acc
    }

    /// The pseudo-orthogonal polynomial of the moment determinant formula.
    pub fn pseudo_p(&self, k: usize) -> Poly {
        let mut rows = Vec::with_capacity(k + 1);
        for t in 0..=k {
            let mut row: Vec<Poly> = (0..k)
                .map(|s| Poly::constant(self.mu[k - t][s].clone()))
                .collect();
            row.push(self.rs[k - t].clone());
            rows.push(row);
        }
        det_poly(&PolyMatrix::new(rows))
    }

    /// Ω_n as the (n+1) x (n+1) determinant of generalized moments with rows
    /// in descending order.
    pub fn omega(&self, n: usize) -> Rational {
        let a: Vec<Vec<Rational>> = (0..=n)
            .map(|t| (0..=n).map(|s| self.mu[n - t][s].clone()).collect())
            .collect();
        det_rational(&a)
    }

    /// The Ω_{m-1} variant written inside the measure-side theorem, built
    /// from its own index pattern det(μ_{m-i}^{j-1}).
    pub fn omega_mti(&self, m: usize) -> Rational {
        if m == 0 {
            return Rational::one();
        }
        let a: Vec<Vec<Rational>> = (1..=m)
            .map(|i| (1..=m).map(|j| self.mu[m - i][j - 1].clone()).collect())
            .collect();
        det_rational(&a)
    }

    /// One application of T in this specialization (for T_μ: lower the
    /// family index).
    fn apply_t(&self, p: &Poly) -> Result<Poly> {
        match self.op {
            OpKind::Ddx => Ok(p.derivative()),
            OpKind::Delta => Ok(p.forward_difference()),
            OpKind::Tmu => {
                let coeffs = crate::poly::expand_in_graded_basis(p, &self.family_p)?;
                let mut out = Poly::zero();
                for (n, c) in coeffs.iter().enumerate().skip(1) {
                    if !c.is_zero() {
                        out = &out + &self.family_p[n - 1].scale(c);
                    }
                }
                Ok(out)
            }
        }
    }
}

/// Row convention of the n x n operator-power determinant.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum RowForm {
    /// Entry (i, j) = T^{i-1}(p_{m+j-1}).
    OperatorPowers,
    /// Entry (i, j) = p_{m+j-1}(x+i-1); equivalent to `OperatorPowers` for
    /// T = Δ by row combinations.
    Shifts,
}

/// The n x n matrix with entries T^{i-1}(p_{m+j-1}), using either the family
/// polynomials or the pseudo-orthogonal ones.
pub fn wronskian_matrix(
    ctx: &MasterContext,
    n: usize,
    m: usize,
    use_family: bool,
    form: RowForm,
) -> Result<PolyMatrix> {
    let base: Vec<Poly> = (0..n)
        .map(|j| {
            if use_family {
                ctx.family_p[m + j].clone()
            } else {
                ctx.pseudo_p(m + j)
            }
        })
        .collect();
    let mut rows = Vec::with_capacity(n);
    match form {
        RowForm::OperatorPowers => {
            let mut current = base;
            for _ in 0..n {
                rows.push(current.clone());
                current = current
                    .iter()
                    .map(|p| ctx.apply_t(p))
                    .collect::<Result<Vec<_>>>()?;
            }
        }
        RowForm::Shifts => {
            if ctx.op != OpKind::Delta {
                return Err(ParamError::forbidden(
                    "the row-shift form is the Casorati shape of the Δ specialization",
                ));
            }
            for i in 0..n {
                rows.push(base.iter().map(|p| p.shift(&qu(i))).collect());
            }
        }
    }
    Ok(PolyMatrix::new(rows))
}

/// Column orientation of the m x m dual determinant.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum QOrder {
    /// Entry (i, j) = q^{j-1}_{n+m-i}.
    DescendingRows,
    /// Entry (i, j) = q^{j-1}_{n+i-1}; the row reversal of the other order.
    AscendingRows,
}

pub fn q_matrix(ctx: &MasterContext, n: usize, m: usize, order: QOrder) -> PolyMatrix {
    let rows: Vec<Vec<Poly>> = (1..=m)
        .map(|i| {
            let deg = match order {
                QOrder::DescendingRows => n + m - i,
                QOrder::AscendingRows => n + i - 1,
            };
            (0..m).map(|j| ctx.q_poly(deg, j)).collect()
        })
        .collect();
    PolyMatrix::new(rows)
}

/// Internal corruption hooks for the negative-control suite.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Corruption {
    #[default]
    None,
    /// Flip the sign of both structure constants.
    FlipConstantSign,
    /// Add 5/7 to the moment entry μ_1^0 before building the dual side.
    BumpMoment,
    /// Shift one dual-determinant row index by one, as a wrong-Pochhammer
    /// stand-in.
    ShiftIndex,
}

/// Verify both master identities for one (family, operator, n, m) instance:
/// the formal one with the moment-determinant polynomials and descending
/// dual rows, and the measure one with the family polynomials, Ω_{m-1} and
/// ascending dual rows.  The residual reported is the measure-side one.
pub fn verify_main(spec: &FamilySpec, op: OpKind, n: usize, m: usize) -> Result<IdentityReport> {
    verify_main_corrupted(spec, op, n, m, Corruption::None)
}

pub fn verify_main_corrupted(
    spec: &FamilySpec,
    op: OpKind,
    n: usize,
    m: usize,
    corruption: Corruption,
) -> Result<IdentityReport> {
    if n == 0 {
        return Err(ParamError::out_of_range("n must be at least 1"));
    }
    let kmax = n + m;
    let mut ctx = master_context(spec, op, kmax)?;
    if corruption == Corruption::BumpMoment {
        ctx.mu[1][0] += crate::arith::q(5, 7);
    }
    // Orthogonality must exist through the degrees in play.
    for k in 0..=(n + m).saturating_sub(2) {
        if ctx.omega(k).is_zero() {
            return Err(ParamError::degenerate(format!("Omega_{k} = 0")));
        }
    }

    let sign_flip = if corruption == Corruption::FlipConstantSign {
        -Rational::one()
    } else {
        Rational::one()
    };
    let row_bump = usize::from(corruption == Corruption::ShiftIndex);

    // Formal identity: det(T^{i-1} p_{m+j-1}) = C det(q^{j-1}_{n+m-i}),
    // C = (-1)^{binom(n,2)} prod_{j=0}^{n-2} Omega_{m+j}.
    let lhs_mth = det_poly(&wronskian_matrix(&ctx, n, m, false, RowForm::OperatorPowers)?);
    let mut c_mth = neg_one_pow(choose2(n)) * &sign_flip;
    for j in 0..n.saturating_sub(1) {
        c_mth *= ctx.omega(m + j);
    }
    let q_mth = {
        let rows: Vec<Vec<Poly>> = (1..=m)
            .map(|i| (0..m).map(|j| ctx.q_poly(n + m - i + row_bump, j)).collect())
            .collect();
        PolyMatrix::new(rows)
    };
    let rhs_mth = det_poly(&q_mth).scale(&c_mth);
    let residual_mth = &lhs_mth - &rhs_mth;

    // Measure identity: Omega_{m-1} det(T^{i-1} p_{m+j-1}) =
    //   (-1)^{mn+binom(m,2)} prod (xi/sigma) det(q^{j-1}_{n+i-1}).
    let omega_m1 = ctx.omega_mti(m);
    let lhs_mti = det_poly(&wronskian_matrix(&ctx, n, m, true, RowForm::OperatorPowers)?)
        .scale(&omega_m1);
    let mut c_mti = neg_one_pow(m * n + choose2(m)) * &sign_flip;
    for j in 0..n {
        c_mti *= &ctx.xi[m + j] / &ctx.sigma[m + j];
    }
    let q_mti = {
        let rows: Vec<Vec<Poly>> = (1..=m)
            .map(|i| (0..m).map(|j| ctx.q_poly(n + i - 1 + row_bump, j)).collect())
            .collect();
        PolyMatrix::new(rows)
    };
    let rhs_mti = det_poly(&q_mti).scale(&c_mti);
    let residual_mti = &lhs_mti - &rhs_mti;

    let mut constants = BTreeMap::new();
    constants.insert("Omega_{m-1}".into(), omega_m1.to_string());
    constants.insert("C_nm_formal".into(), c_mth.to_string());
    constants.insert("C_nm_measure".into(), c_mti.to_string());
    constants.insert(
        "formal_residual_degree".into(),
        residual_mth.degree().map(|d| d as i64).unwrap_or(-1).to_string(),
    );

    let mut params = BTreeMap::new();
    params.insert("op".into(), op.name().into());

    Ok(IdentityReport {
        identity: "main-theorem".into(),
        family: spec.to_string(),
        params,
        n,
        m,
        holds: residual_mth.is_zero() && residual_mti.is_zero(),
        constants,
        lhs: lhs_mti,
        rhs: rhs_mti,
        residual: residual_mti,
    })
}

/// The two sides of the measure-form identity for an already-built context
/// (used by the scale-invariance and consistency property suites).
pub fn mti_sides(ctx: &MasterContext, n: usize, m: usize) -> Result<(Poly, Poly)> {
    let omega_m1 = ctx.omega_mti(m);
    let lhs = det_poly(&wronskian_matrix(ctx, n, m, true, RowForm::OperatorPowers)?)
        .scale(&omega_m1);
    let mut c = neg_one_pow(m * n + choose2(m));
    for j in 0..n {
        c *= &ctx.xi[m + j] / &ctx.sigma[m + j];
    }
    let rhs = det_poly(&q_matrix(ctx, n, m, QOrder::AscendingRows)).scale(&c);
    Ok((lhs, rhs))
}

/// Λ(x_1, ..., x_m) = prod_{i<j} (x_i - x_j).
pub fn vandermonde(xs: &[Rational]) -> Rational {
    let mut acc = Rational::one();
    for i in 0..xs.len() {
        for j in i + 1..xs.len() {
            acc *= &xs[i] - &xs[j];
        }
    }
    acc
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::{q, qi};
    use rand::rngs::StdRng;
    use rand::{Rng, SeedableRng};

    fn pm(rows: Vec<Vec<Poly>>) -> PolyMatrix {
        PolyMatrix::new(rows)
    }

    #[test]
    fn det_examples() {
        assert_eq!(det_poly(&pm(vec![])), Poly::one());
        let x = Poly::var();
        let one = Poly::one();
        let m = pm(vec![vec![x.clone(), one.clone()], vec![one.clone(), x.clone()]]);
        assert_eq!(det_poly(&m), Poly::from_coeffs(vec![qi(-1), qi(0), qi(1)]));
        // 3x3 Vandermonde at 0, 1, 2: det = prod of differences = 2
        let rows: Vec<Vec<Poly>> = [0i64, 1, 2]
            .iter()
            .map(|&v| (0..3).map(|k| Poly::constant(qi(v).pow(k as i32))).collect())
            .collect();
        assert_eq!(det_poly(&pm(rows)), Poly::constant(qi(2)));
    }

    #[test]
    fn bareiss_agrees_with_cofactor() {
        let mut rng = StdRng::seed_from_u64(42);
        for _ in 0..12 {
            let rows: Vec<Vec<Poly>> = (0..4)
                .map(|_| {
                    (0..4)
                        .map(|_| {
                            let coeffs: Vec<Rational> = (0..3)
                                .map(|_| q(rng.random_range(-6..=6), rng.random_range(1..=4)))
                                .collect();
                            Poly::from_coeffs(coeffs)
                        })
                        .collect()
                })
                .collect();
            let m = pm(rows);
            assert_eq!(det_poly(&m), det_cofactor(&m));
        }
    }

    #[test]
    fn zero_column_gives_zero_det() {
        let z = Poly::zero();
        let x = Poly::var();
        let m = pm(vec![vec![z.clone(), x.clone()], vec![z.clone(), x.clone()]]);
        assert_eq!(det_poly(&m), Poly::zero());
    }

    #[test]
    fn q_matrix_orders_differ_by_row_reversal() {
        let spec = FamilySpec::parse("meixner:a=1/3,c=2").unwrap();
        let ctx = master_context(&spec, OpKind::Delta, 6).unwrap();
        for (n, m) in [(2usize, 2usize), (1, 3), (3, 2)] {
            let desc = det_poly(&q_matrix(&ctx, n, m, QOrder::DescendingRows));
            let asc = det_poly(&q_matrix(&ctx, n, m, QOrder::AscendingRows));
            let sign = neg_one_pow(choose2(m));
            assert_eq!(desc, asc.scale(&sign), "row reversal sign fails at n={n}, m={m}");
        }
    }

    #[test]
    fn casorati_row_forms_agree_for_delta() {
        let spec = FamilySpec::parse("charlier:a=1").unwrap();
        let ctx = master_context(&spec, OpKind::Delta, 6).unwrap();
        for (n, m) in [(2usize, 1usize), (2, 2), (3, 2)] {
            let a = det_poly(&wronskian_matrix(&ctx, n, m, true, RowForm::OperatorPowers).unwrap());
            let b = det_poly(&wronskian_matrix(&ctx, n, m, true, RowForm::Shifts).unwrap());
            assert_eq!(a, b, "row forms differ at n={n}, m={m}");
        }
    }

    #[test]
    fn n_equals_one_gives_single_polynomial_row() {
        let spec = FamilySpec::parse("meixner:a=1/3,c=2").unwrap();
        let ctx = master_context(&spec, OpKind::Delta, 5).unwrap();
        for m in 1..=3usize {
            let w = wronskian_matrix(&ctx, 1, m, true, RowForm::OperatorPowers).unwrap();
            assert_eq!(det_poly(&w), ctx.family_p[m]);
        }
    }

    #[test]
    fn m_zero_is_the_empty_identity() {
        // both sides reduce to the size-0 convention det = 1
        let spec = FamilySpec::parse("charlier:a=2").unwrap();
        let ctx = master_context(&spec, OpKind::Delta, 4).unwrap();
        assert_eq!(det_poly(&q_matrix(&ctx, 2, 0, QOrder::DescendingRows)), Poly::one());
        assert_eq!(ctx.omega_mti(0), qi(1));
    }

    #[test]
    fn omega_matches_norm_product_formula() {
        // Ω_n = (-1)^{n(n+1)/2} prod σ_j υ_j ||p̂_j||²
        for (fam, op) in [
            ("charlier:a=2", OpKind::Delta),
            ("hahn:alpha=9/2,c=5/3,N=13/7", OpKind::Delta),
            ("jacobi:alpha=1/2,beta=-1/3", OpKind::Ddx),
            ("laguerre:alpha=7/5", OpKind::Ddx),
        ] {
            let spec = FamilySpec::parse(fam).unwrap();
            let ctx = master_context(&spec, op, 6).unwrap();
            for n in 0..=4usize {
                let mut prod = neg_one_pow(n * (n + 1) / 2);
                for j in 0..=n {
                    prod *= &ctx.sigma[j]
                        * ctx.psis[j].leading_coeff()
                        * spec.norm_squared(j).unwrap();
                }
                assert_eq!(ctx.omega(n), prod, "norm-product formula fails for {fam} at n={n}");
                assert_eq!(ctx.omega(n), ctx.omega_mti(n + 1), "mti variant differs");
            }
        }
    }

    #[test]
    fn scale_invariance_of_measure_identity() {
        let spec = FamilySpec::parse("charlier:a=2").unwrap();
        let (n, m) = (2usize, 2usize);
        let mut ctx = master_context(&spec, OpKind::Delta, n + m).unwrap();
        let (lhs, rhs) = mti_sides(&ctx, n, m).unwrap();
        assert_eq!(lhs, rhs);
        let kappa = q(3, 7);
        for row in ctx.mu.iter_mut() {
            for v in row.iter_mut() {
                *v *= &kappa;
            }
        }
        let (lhs2, rhs2) = mti_sides(&ctx, n, m).unwrap();
        assert_eq!(lhs2, rhs2, "identity must survive moment rescaling");
        let kappa_m = crate::arith::rat_pow(&kappa, m as i64);
        assert_eq!(lhs2, lhs.scale(&kappa_m), "both sides scale by kappa^m");
    }

    #[test]
    fn negative_controls_flip_to_fail() {
        let spec = FamilySpec::parse("charlier:a=2").unwrap();
        for corruption in [Corruption::FlipConstantSign, Corruption::BumpMoment, Corruption::ShiftIndex] {
            let rep = verify_main_corrupted(&spec, OpKind::Delta, 2, 2, corruption).unwrap();
            assert!(!rep.holds, "corruption {corruption:?} must break the identity");
            assert!(rep.residual_degree() >= 0);
        }
        let rep = verify_main_corrupted(&spec, OpKind::Delta, 2, 2, Corruption::None).unwrap();
        assert!(rep.holds);
    }
}
