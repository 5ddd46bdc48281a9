//! Classical orthogonal families over exact rational parameters: explicit
//! coefficients, discrete measures, generalized moments, norms, and the
//! closed forms for the dual polynomials q_n^i.
//!
//! Gamma functions are never evaluated: every Gamma ratio in a weight, moment
//! or norm is rewritten as a Pochhammer/factorial ratio against a per-family
//! rational base, and the discarded transcendental factor is recorded in the
//! measure's `normalization_note`.  All identities checked downstream are
//! homogeneous in the moments, so a common rational renormalization leaves
//! them intact.

use crate::arith::{
    binom_int, factorial, is_positive_int, neg_one_pow, parse_rational, pochhammer, qi, qu,
    rat_pow, ParamError, Rational, Result,
};
use crate::detcore::OpKind as QOpKind;
use crate::poly::{binom_poly, expand_in_graded_basis, Poly};
use num_traits::{One, Zero};
use std::fmt;

/// A classical family instance: kind plus exact rational parameters.
#[derive(Clone, Debug, PartialEq)]
pub enum FamilyKind {
    Charlier { a: Rational },
    Meixner { a: Rational, c: Rational },
    Krawtchouk { a: Rational, nn: Rational },
    Hahn { alpha: Rational, c: Rational, nn: Rational },
    DualHahn { alpha: Rational, c: Rational, nn: Rational },
    Racah { alpha: Rational, beta: Rational, gamma: Rational, delta: Rational },
    Wilson { a: Rational, b: Rational, c: Rational, d: Rational },
    Jacobi { alpha: Rational, beta: Rational },
    Laguerre { alpha: Rational },
    Ultraspherical { lambda: Rational },
}

#[derive(Clone, Debug, PartialEq)]
pub struct FamilySpec {
    pub kind: FamilyKind,
}

/// Which normalization `polynomial` returns.  `Normalized` is the one the
/// symmetry determinants are stated in (degree-n polynomial divided by n! for
/// the discrete lattice families, the textbook normalization for Jacobi,
/// Laguerre and ultraspherical).
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Variant {
    Monic,
    Normalized,
}

/// A finitely supported measure with exact rational weights.
#[derive(Clone, Debug)]
pub struct DiscreteMeasure {
    pub support: Vec<(Rational, Rational)>,
    /// Which transcendental factor was divided out of the textbook weight.
    pub normalization_note: String,
}

impl DiscreteMeasure {
    pub fn total_mass(&self) -> Rational {
        self.support.iter().map(|(_, w)| w.clone()).sum()
    }

    /// Exact integral of a polynomial against the measure.
    pub fn integrate(&self, p: &Poly) -> Rational {
        self.support.iter().map(|(x, w)| p.eval(x) * w).sum()
    }
}

/// Which graded basis a moment table is expressed in.
#[derive(Clone, Debug, PartialEq)]
pub enum PsiKind {
    /// ψ_i = (x - x0)^i (derivative specialization).
    ShiftedMonomial(Rational),
    /// ψ_i = binom(x, i) (Δ specialization).
    Binomial,
    /// ψ_j = f_j on the quadratic lattice with parameter u.
    FBasis(Rational),
    /// ψ_i = p_i, the family's own basis (T_μ specialization).
    FamilyBasis,
}

/// The generalized moments μ_j^i = <r_j, ψ_i> for 0 <= i, j <= N.
#[derive(Clone, Debug)]
pub struct MomentTable {
    /// mu[j][i] = μ_j^i.
    pub mu: Vec<Vec<Rational>>,
    pub psi_kind: PsiKind,
}

impl MomentTable {
    pub fn get(&self, j: usize, i: usize) -> &Rational {
        &self.mu[j][i]
    }
    pub fn size(&self) -> usize {
        self.mu.len()
    }
}

/// A linear functional on polynomials known by its values on a graded basis.
#[derive(Clone, Debug)]
pub struct MomentFunctional {
    pub basis: Vec<Poly>,
    pub values: Vec<Rational>,
}

impl MomentFunctional {
    /// L(p), by expanding p on the stored basis.
    pub fn pair(&self, p: &Poly) -> Result<Rational> {
        let coeffs = expand_in_graded_basis(p, &self.basis)?;
        Ok(coeffs
            .iter()
            .zip(&self.values)
            .map(|(c, v)| c * v)
            .sum())
    }
}

fn check_nonzero(r: &Rational, what: &str) -> Result<()> {
    if r.is_zero() {
        Err(ParamError::forbidden(format!("{what} vanishes")))
    } else {
        Ok(())
    }
}

/// Pochhammer that reports which factor vanished, for denominator use.
fn poch_den(u: &Rational, n: usize, what: &str) -> Result<Rational> {
    let v = pochhammer(u, n);
    if v.is_zero() {
        return Err(ParamError::forbidden(format!("denominator Pochhammer {what} vanishes")));
    }
    Ok(v)
}

// ---------------------------------------------------------------------------
// Free-standing polynomial constructors (also used by constterm and symmetry)
// ---------------------------------------------------------------------------

/// Monic Charlier polynomial: sum over j of (-a)^{n-j} C(n,j) binom(x,j) j!.
pub fn charlier_monic(a: &Rational, n: usize) -> Result<Poly> {
    check_nonzero(a, "Charlier parameter a")?;
    let mut acc = Poly::zero();
    for j in 0..=n {
        let c = rat_pow(&-a.clone(), (n - j) as i64) * binom_int(n, j) * factorial(j);
        acc = &acc + &binom_poly(j).scale(&c);
    }
    Ok(acc)
}

/// Monic Meixner polynomial, written with (c+j)_{n-j} so that it is a
/// polynomial in the parameter c.
pub fn meixner_monic(a: &Rational, c: &Rational, n: usize) -> Result<Poly> {
    check_nonzero(a, "Meixner parameter a")?;
    check_nonzero(&(a - Rational::one()), "Meixner parameter a - 1")?;
    let w = Rational::one() - a.recip(); // 1 - 1/a
    let mut acc = Poly::zero();
    for j in 0..=n {
        let coef = pochhammer(&(c + qu(j)), n - j)
            * rat_pow(&w, j as i64 - n as i64)
            * binom_int(n, j)
            * factorial(j);
        acc = &acc + &binom_poly(j).scale(&coef);
    }
    Ok(acc)
}

/// Meixner polynomial in the generating-function normalization
/// m_n^{a,c} = (a-1)^n/(a^n n!) \hat m_n^{a,c}.
pub fn meixner_gf(a: &Rational, c: &Rational, n: usize) -> Result<Poly> {
    let scale = rat_pow(&(a - Rational::one()), n as i64)
        / (rat_pow(a, n as i64) * factorial(n));
    Ok(meixner_monic(a, c, n)?.scale(&scale))
}

/// Monic Krawtchouk polynomial.
pub fn krawtchouk_monic(a: &Rational, nn: &Rational, n: usize) -> Result<Poly> {
    check_nonzero(a, "Krawtchouk parameter a")?;
    check_nonzero(&(a + Rational::one()), "Krawtchouk parameter a + 1")?;
    let front = rat_pow(&-a.clone(), n as i64) * rat_pow(&(Rational::one() + a), -(n as i64));
    let mut acc = Poly::zero();
    for j in 0..=n {
        let coef = neg_one_pow(j)
            * rat_pow(&(Rational::one() + a), j as i64)
            * pochhammer(&(nn - qu(n)), n - j)
            * rat_pow(a, -(j as i64))
            * binom_int(n, j)
            * factorial(j);
        acc = &acc + &binom_poly(j).scale(&coef);
    }
    Ok(acc.scale(&front))
}

/// Monic Hahn polynomial.
pub fn hahn_monic(alpha: &Rational, c: &Rational, nn: &Rational, n: usize) -> Result<Poly> {
    let mut acc = Poly::zero();
    for j in 0..=n {
        let den = poch_den(
            &(qu(n) + alpha + c - nn + qu(j)),
            n - j,
            "(n+alpha+c-N+j)_{n-j} in the Hahn sum",
        )?;
        let coef = pochhammer(&(Rational::one() - nn + qu(j)), n - j)
            * pochhammer(&(c + qu(j)), n - j)
            / den
            * binom_int(n, j)
            * factorial(j);
        acc = &acc + &binom_poly(j).scale(&coef);
    }
    Ok(acc)
}

/// f_j on the quadratic lattice with parameter u: degree-j polynomial in the
/// λ variable with roots λ(0), ..., λ(j-1) and leading coefficient (-1)^j/j!.
pub fn f_poly(u: &Rational, j: usize) -> Poly {
    let mut acc = Poly::one();
    for i in 0..j {
        let node = qu(i) * (u + qu(i));
        acc = &acc * &(&Poly::var() - &Poly::constant(node));
    }
    acc.scale(&(neg_one_pow(j) / factorial(j)))
}

/// f_{k,m}: the same product window started at node index k.
pub fn f_km_poly(u: &Rational, k: usize, m: usize) -> Poly {
    let mut acc = Poly::one();
    for i in k..k + m {
        let node = qu(i) * (u + qu(i));
        acc = &acc * &(&Poly::var() - &Poly::constant(node));
    }
    acc.scale(&(neg_one_pow(m) / factorial(m)))
}

/// λ(x) = x(x+u) as a polynomial.
pub fn lambda_poly(u: &Rational) -> Poly {
    &Poly::var() * &(&Poly::var() + &Poly::constant(u.clone()))
}

/// r_j(x) = (-x)_j (x+u)_j / j! = f_j(λ(x)).
pub fn quad_r_poly(u: &Rational, j: usize) -> Poly {
    let a = (-&Poly::var()).pochhammer(j);
    let b = (&Poly::var() + &Poly::constant(u.clone())).pochhammer(j);
    (&a * &b).scale(&factorial(j).recip())
}

/// s_j^{u,m,n}(x) = (x)_j binom(x+u+n+m-2, j).
pub fn quad_s_poly(u: &Rational, n: usize, m: usize, j: usize) -> Poly {
    let a = Poly::var().pochhammer(j);
    let b = (&Poly::var() + &Poly::constant(u + qu(n) + qu(m) - qi(2))).binom(j);
    &a * &b
}

/// Monic dual Hahn polynomial in the λ variable.
pub fn dual_hahn_monic(alpha: &Rational, c: &Rational, nn: &Rational, n: usize) -> Result<Poly> {
    let u = alpha + c - nn;
    let mut acc = Poly::zero();
    for j in 0..=n {
        let coef = pochhammer(&qi(-(n as i64)), j)
            * pochhammer(&(Rational::one() - nn + qu(j)), n - j)
            * pochhammer(&(c + qu(j)), n - j);
        acc = &acc + &f_poly(&u, j).scale(&coef);
    }
    Ok(acc)
}

/// Racah polynomial r_n^{α,β,γ,δ} in the λ variable (leading coefficient
/// 1/n!; the monic variant is n! times this).
pub fn racah_normalized(
    alpha: &Rational,
    beta: &Rational,
    gamma: &Rational,
    delta: &Rational,
    n: usize,
) -> Result<Poly> {
    let u = gamma + delta + Rational::one();
    let mut acc = Poly::zero();
    for j in 0..=n {
        let den = poch_den(
            &(qu(n) + alpha + beta + Rational::one() + qu(j)),
            n - j,
            "(n+alpha+beta+1+j)_{n-j} in the Racah sum",
        )?;
        let coef = pochhammer(&(alpha + Rational::one() + qu(j)), n - j)
            * pochhammer(&(beta + delta + Rational::one() + qu(j)), n - j)
            * pochhammer(&(gamma + Rational::one() + qu(j)), n - j)
            / (neg_one_pow(j) * factorial(n - j) * den);
        acc = &acc + &f_poly(&u, j).scale(&coef);
    }
    Ok(acc)
}

/// Wilson polynomial w_n^{a,b,c,d} as a polynomial in its own argument
/// (leading coefficient (-1)^n/n!).
pub fn wilson_normalized(
    a: &Rational,
    b: &Rational,
    c: &Rational,
    d: &Rational,
    n: usize,
) -> Result<Poly> {
    let mut acc = Poly::zero();
    for j in 0..=n {
        let den = poch_den(
            &(qu(n) + a + b + c + d - Rational::one() + qu(j)),
            n - j,
            "(n+a+b+c+d-1+j)_{n-j} in the Wilson sum",
        )?;
        let coef = pochhammer(&(a + b + qu(j)), n - j)
            * pochhammer(&(a + c + qu(j)), n - j)
            * pochhammer(&(a + d + qu(j)), n - j)
            / (factorial(n - j) * den);
        // g_j(x) = (-1)^j/j! prod_{i<j} (x + (a+i)^2)
        let mut g = Poly::one();
        for i in 0..j {
            let node = (a + qu(i)) * (a + qu(i));
            g = &g * &(&Poly::var() + &Poly::constant(node));
        }
        let g = g.scale(&(neg_one_pow(j) / factorial(j)));
        acc = &acc + &g.scale(&coef);
    }
    Ok(acc)
}

/// Jacobi polynomial P_n^{α,β} in the hypergeometric normalization, written
/// so it is polynomial in both parameters.
pub fn jacobi_standard(alpha: &Rational, beta: &Rational, n: usize) -> Poly {
    let mut acc = Poly::zero();
    let xm1 = &Poly::var() - &Poly::one();
    for j in 0..=n {
        let coef = pochhammer(&(qu(n) + alpha + beta + Rational::one()), j)
            * pochhammer(&(alpha + qu(j) + Rational::one()), n - j)
            / (factorial(j) * factorial(n - j) * rat_pow(&qi(2), j as i64));
        acc = &acc + &xm1.pow(j).scale(&coef);
    }
    acc
}

/// Laguerre polynomial L_n^α in the textbook normalization.
pub fn laguerre_standard(alpha: &Rational, n: usize) -> Poly {
    let mut acc = Poly::zero();
    for j in 0..=n {
        let coef = pochhammer(&(alpha + qu(j) + Rational::one()), n - j)
            / (factorial(n - j) * factorial(j))
            * neg_one_pow(j);
        acc = &acc + &Poly::monomial(coef, j);
    }
    acc
}

/// Ultraspherical (Gegenbauer) polynomial C_n^λ from the generating function
/// (1-2xz+z^2)^{-λ}; valid for every rational λ, including the negative
/// integers where the family degenerates.
pub fn ultraspherical(lambda: &Rational, n: usize) -> Poly {
    let mut acc = Poly::zero();
    for t in 0..=n / 2 {
        let coef = neg_one_pow(t) * pochhammer(lambda, n - t)
            / (factorial(t) * factorial(n - 2 * t))
            * rat_pow(&qi(2), (n - 2 * t) as i64);
        acc = &acc + &Poly::monomial(coef, n - 2 * t);
    }
    acc
}

/// Chebyshev polynomial of the first kind from its generating function
/// (1-xz)/(1-2xz+z^2).
pub fn chebyshev_t(n: usize) -> Poly {
    // T_n = (C_n^1 - compose shift): easiest exactly via the recurrence
    // T_0 = 1, T_1 = x, T_{n+1} = 2x T_n - T_{n-1}.
    let two_x = Poly::monomial(qi(2), 1);
    let mut prev = Poly::one();
    if n == 0 {
        return prev;
    }
    let mut cur = Poly::var();
    for _ in 1..n {
        let next = &(&two_x * &cur) - &prev;
        prev = cur;
        cur = next;
    }
    cur
}

/// Chebyshev polynomial of the second kind, generating function
/// 1/(1-2xz+z^2).
pub fn chebyshev_u(n: usize) -> Poly {
    let two_x = Poly::monomial(qi(2), 1);
    let mut prev = Poly::one();
    if n == 0 {
        return prev;
    }
    let mut cur = two_x.clone();
    for _ in 1..n {
        let next = &(&two_x * &cur) - &prev;
        prev = cur;
        cur = next;
    }
    cur
}

// ---------------------------------------------------------------------------
// FamilySpec
// ---------------------------------------------------------------------------

impl FamilySpec {
    pub fn new(kind: FamilyKind) -> Self {
        FamilySpec { kind }
    }

    /// Parse a registry string like "charlier:a=2" or
    /// "hahn:alpha=3,c=1,N=4".
    pub fn parse(s: &str) -> Result<Self> {
        let (name, rest) = s
            .split_once(':')
            .ok_or_else(|| ParamError::forbidden(format!("family string '{s}' has no ':'")))?;
        let mut params = std::collections::BTreeMap::new();
        for kv in rest.split(',') {
            let (k, v) = kv.split_once('=').ok_or_else(|| {
                ParamError::forbidden(format!("bad parameter assignment '{kv}'"))
            })?;
            params.insert(k.trim().to_string(), parse_rational(v)?);
        }
        let get = |k: &str| -> Result<Rational> {
            params
                .get(k)
                .cloned()
                .ok_or_else(|| ParamError::forbidden(format!("family '{name}' needs parameter '{k}'")))
        };
        let kind = match name.trim() {
            "charlier" => FamilyKind::Charlier { a: get("a")? },
            "meixner" => FamilyKind::Meixner { a: get("a")?, c: get("c")? },
            "krawtchouk" => FamilyKind::Krawtchouk { a: get("a")?, nn: get("N")? },
            "hahn" => FamilyKind::Hahn { alpha: get("alpha")?, c: get("c")?, nn: get("N")? },
            "dualhahn" => {
                FamilyKind::DualHahn { alpha: get("alpha")?, c: get("c")?, nn: get("N")? }
            }
            "racah" => FamilyKind::Racah {
                alpha: get("alpha")?,
                beta: get("beta")?,
                gamma: get("gamma")?,
                delta: get("delta")?,
            },
            "wilson" => {
                FamilyKind::Wilson { a: get("a")?, b: get("b")?, c: get("c")?, d: get("d")? }
            }
            "jacobi" => FamilyKind::Jacobi { alpha: get("alpha")?, beta: get("beta")? },
            "laguerre" => FamilyKind::Laguerre { alpha: get("alpha")? },
            "ultraspherical" => FamilyKind::Ultraspherical { lambda: get("lambda")? },
            other => {
                return Err(ParamError::forbidden(format!("unknown family '{other}'")));
            }
        };
        Ok(FamilySpec { kind })
    }

    pub fn name(&self) -> &'static str {
        match self.kind {
            FamilyKind::Charlier { .. } => "charlier",
            FamilyKind::Meixner { .. } => "meixner",
            FamilyKind::Krawtchouk { .. } => "krawtchouk",
            FamilyKind::Hahn { .. } => "hahn",
            FamilyKind::DualHahn { .. } => "dualhahn",
            FamilyKind::Racah { .. } => "racah",
            FamilyKind::Wilson { .. } => "wilson",
            FamilyKind::Jacobi { .. } => "jacobi",
            FamilyKind::Laguerre { .. } => "laguerre",
            FamilyKind::Ultraspherical { .. } => "ultraspherical",
        }
    }

    /// The family polynomial of degree n.  For the quadratic-lattice families
    /// (dual Hahn, Racah, Wilson) the returned polynomial lives in the λ
    /// variable, and "monic" refers to that variable.
    pub fn polynomial(&self, n: usize, variant: Variant) -> Result<Poly> {
        let p = match &self.kind {
            FamilyKind::Charlier { a } => charlier_monic(a, n)?,
            FamilyKind::Meixner { a, c } => meixner_monic(a, c, n)?,
            FamilyKind::Krawtchouk { a, nn } => krawtchouk_monic(a, nn, n)?,
            FamilyKind::Hahn { alpha, c, nn } => hahn_monic(alpha, c, nn, n)?,
            FamilyKind::DualHahn { alpha, c, nn } => dual_hahn_monic(alpha, c, nn, n)?,
            FamilyKind::Racah { alpha, beta, gamma, delta } => {
                let r = racah_normalized(alpha, beta, gamma, delta, n)?;
                match variant {
                    Variant::Normalized => return Ok(r),
                    Variant::Monic => return Ok(r.scale(&factorial(n))),
                }
            }
            FamilyKind::Wilson { a, b, c, d } => {
                let w = wilson_normalized(a, b, c, d, n)?;
                match variant {
                    Variant::Normalized => return Ok(w),
                    Variant::Monic => {
                        return Ok(w.scale(&(neg_one_pow(n) * factorial(n))));
                    }
                }
            }
            FamilyKind::Jacobi { alpha, beta } => {
                let p = jacobi_standard(alpha, beta, n);
                match variant {
                    Variant::Normalized => return Ok(p),
                    Variant::Monic => {
                        let lead = p.leading_coeff();
                        if lead.is_zero() {
                            return Err(ParamError::forbidden(
                                "Jacobi polynomial degenerates; (n+alpha+beta+1)_n = 0",
                            ));
                        }
                        return Ok(p.scale(&lead.recip()));
                    }
                }
            }
            FamilyKind::Laguerre { alpha } => {
                let p = laguerre_standard(alpha, n);
                match variant {
                    Variant::Normalized => return Ok(p),
                    Variant::Monic => return Ok(p.scale(&(neg_one_pow(n) * factorial(n)))),
                }
            }
            FamilyKind::Ultraspherical { lambda } => {
                if lambda.is_zero() {
                    return Err(ParamError::forbidden("ultraspherical lambda = 0"));
                }
                let p = ultraspherical(lambda, n);
                match variant {
                    Variant::Normalized => return Ok(p),
                    Variant::Monic => {
                        let lead = p.leading_coeff();
                        if lead.is_zero() {
                            return Err(ParamError::forbidden(format!(
                                "C_{n}^lambda degenerates at lambda = {lambda}"
                            )));
                        }
                        return Ok(p.scale(&lead.recip()));
                    }
                }
            }
        };
        // Lattice families reaching here are monic as constructed.
        Ok(match variant {
            Variant::Monic => p,
            Variant::Normalized => p.scale(&factorial(n).recip()),
        })
    }

    pub fn monic(&self, n: usize) -> Result<Poly> {
        self.polynomial(n, Variant::Monic)
    }

    /// The discrete measure, normalized to rational weights.  Infinite
    /// families (Charlier, Meixner) require a truncation point; such
    /// truncated measures back brute-force oracles only, never identity
    /// paths.
    pub fn measure(&self, truncation: Option<usize>) -> Result<DiscreteMeasure> {
        match &self.kind {
            FamilyKind::Charlier { a } => {
                check_nonzero(a, "Charlier parameter a")?;
                let tx = truncation.ok_or_else(|| {
                    ParamError::out_of_range("Charlier measure needs a truncation point")
                })?;
                let support = (0..=tx)
                    .map(|x| (qu(x), rat_pow(a, x as i64) / factorial(x)))
                    .collect();
                Ok(DiscreteMeasure {
                    support,
                    normalization_note: "e^a divided out; truncated tail dropped".into(),
                })
            }
            FamilyKind::Meixner { a, c } => {
                check_nonzero(a, "Meixner parameter a")?;
                let tx = truncation.ok_or_else(|| {
                    ParamError::out_of_range("Meixner measure needs a truncation point")
                })?;
                let support = (0..=tx)
                    .map(|x| {
                        (qu(x), rat_pow(a, x as i64) * pochhammer(c, x) / factorial(x))
                    })
                    .collect();
                Ok(DiscreteMeasure {
                    support,
                    normalization_note: "(1-a)^c Gamma(c) divided out; truncated tail dropped"
                        .into(),
                })
            }
            FamilyKind::Krawtchouk { a, nn } => {
                let n_int = positive_int(nn, "Krawtchouk N")?;
                check_nonzero(&(a + Rational::one()), "Krawtchouk 1 + a")?;
                let den = rat_pow(&(Rational::one() + a), n_int as i64 - 1);
                let support = (0..n_int)
                    .map(|x| {
                        let w = pochhammer(&qu(n_int - x), x) * rat_pow(a, x as i64)
                            / (factorial(x) * &den);
                        (qu(x), w)
                    })
                    .collect();
                Ok(DiscreteMeasure {
                    support,
                    normalization_note: "Gamma(N)/Gamma(N-x) as Pochhammer; mass 1".into(),
                })
            }
            FamilyKind::Hahn { alpha, c, nn } => {
                let n_int = positive_int(nn, "Hahn N")?;
                let den = poch_den(
                    &(alpha + c - nn + Rational::one()),
                    n_int - 1,
                    "(alpha+c-N+1)_{N-1} in the Hahn mass",
                )?;
                let mut support = Vec::with_capacity(n_int);
                for x in 0..n_int {
                    let w = pochhammer(&qu(n_int - x), x)
                        * pochhammer(c, x)
                        * pochhammer(&(alpha - nn + Rational::one()), n_int - 1 - x)
                        / (factorial(x) * &den);
                    if w.is_zero() {
                        return Err(ParamError::forbidden(format!("Hahn weight at x={x} vanishes")));
                    }
                    support.push((qu(x), w));
                }
                Ok(DiscreteMeasure {
                    support,
                    normalization_note: "Gamma ratios as Pochhammers; mass 1".into(),
                })
            }
            FamilyKind::DualHahn { alpha, c, nn } => {
                let n_int = positive_int(nn, "dual Hahn N")?;
                let u = alpha + c - nn;
                let renorm = pochhammer(&(alpha - nn + Rational::one()), n_int - 1);
                let mut support = Vec::with_capacity(n_int);
                for x in 0..n_int {
                    let den = poch_den(&(qu(x) + &u), n_int, "(x+alpha+c-N)_N in the dual Hahn weight")?
                        * poch_den(
                            &(alpha - nn + Rational::one()),
                            x,
                            "(alpha-N+1)_x in the dual Hahn weight",
                        )?
                        * factorial(x);
                    let w = (qu(2 * x) + &u) * pochhammer(c, x) * pochhammer(&qu(n_int - x), x)
                        * &renorm
                        / den;
                    let point = qu(x) * (qu(x) + &u);
                    support.push((point, w));
                }
                Ok(DiscreteMeasure {
                    support,
                    normalization_note:
                        "Gamma(alpha+1-N)/Gamma(alpha) divided out; support on lambda(x); mass 1"
                            .into(),
                })
            }
            FamilyKind::Racah { alpha, beta, gamma, delta } => {
                // The r_n^{α,β,γ,δ} family is orthogonal on a finite lattice
                // when α = -N-1 with N a positive integer; the weight below
                // is the hatted-family weight of that case.
                let n_int = racah_cap(alpha)?;
                let u = gamma + delta + Rational::one();
                let half = &u / qi(2); // (gamma+delta+1)/2
                let mut support = Vec::with_capacity(n_int + 1);
                for x in 0..=n_int {
                    let num = pochhammer(&qi(-(n_int as i64)), x)
                        * pochhammer(&(beta + delta + Rational::one()), x)
                        * pochhammer(&(gamma + Rational::one()), x)
                        * pochhammer(&u, x)
                        * pochhammer(&(&half + Rational::one()), x);
                    let den = poch_den(&(qu(n_int) + gamma + delta + qi(2)), x, "(N+gamma+delta+2)_x")?
                        * poch_den(&(gamma - beta + Rational::one()), x, "(-beta+gamma+1)_x")?
                        * poch_den(&half, x, "((gamma+delta+1)/2)_x")?
                        * poch_den(&(delta + Rational::one()), x, "(delta+1)_x")?
                        * factorial(x);
                    let point = qu(x) * (qu(x) + &u);
                    support.push((point, num / den));
                }
                Ok(DiscreteMeasure {
                    support,
                    normalization_note: "weights rational as stated; mass M".into(),
                })
            }
            FamilyKind::Wilson { .. }
            | FamilyKind::Jacobi { .. }
            | FamilyKind::Laguerre { .. }
            | FamilyKind::Ultraspherical { .. } => Err(ParamError::forbidden(format!(
                "{} has no discrete measure here; its identities run on closed-form moments",
                self.name()
            ))),
        }
    }

    /// Squared norm of the *monic* polynomial of degree n against the
    /// normalized measure.
    pub fn norm_squared(&self, n: usize) -> Result<Rational> {
        match &self.kind {
            FamilyKind::Charlier { a } => {
                check_nonzero(a, "Charlier parameter a")?;
                Ok(factorial(n) * rat_pow(a, n as i64))
            }
            FamilyKind::Meixner { a, c } => {
                check_nonzero(a, "Meixner parameter a")?;
                let om = Rational::one() - a;
                check_nonzero(&om, "Meixner 1 - a")?;
                Ok(rat_pow(a, n as i64) * factorial(n) * pochhammer(c, n)
                    / rat_pow(&om, 2 * n as i64))
            }
            FamilyKind::Krawtchouk { a, nn } => {
                check_nonzero(a, "Krawtchouk parameter a")?;
                check_nonzero(&(a + Rational::one()), "Krawtchouk 1 + a")?;
                Ok(factorial(n)
                    * pochhammer(&(nn - qu(n)), n)
                    * rat_pow(a, n as i64)
                    / rat_pow(&(Rational::one() + a), 2 * n as i64))
            }
            FamilyKind::Hahn { alpha, c, nn } => {
                if n == 0 {
                    return Ok(Rational::one());
                }
                let u = alpha + c - nn;
                let den = check_nonzero_val(&u + qu(2 * n), "alpha+c-N+2n")?
                    * poch_den(&(&u + Rational::one()), n - 1, "(alpha+c-N+1)_{n-1}")?
                    * {
                        let p = poch_den(&(&u + qu(n)), n, "(alpha+c-N+n)_n")?;
                        &p * &p
                    };
                Ok(factorial(n)
                    * pochhammer(&(nn - qu(n)), n)
                    * pochhammer(&(alpha - nn + Rational::one()), n)
                    * pochhammer(c, n)
                    * pochhammer(&(alpha + c), n)
                    / den)
            }
            FamilyKind::DualHahn { alpha, c, nn } => Ok(factorial(n)
                * pochhammer(c, n)
                * pochhammer(&(nn - qu(n)), n)
                * pochhammer(&(alpha - qu(n)), n)),
            FamilyKind::Racah { alpha, beta, gamma, delta } => {
                // Norm of the monic polynomial (n! r_n), mass M, in the
                // lattice case alpha = -N-1.
                let nn = qu(racah_cap(alpha)?);
                let m_mass = self.total_mass()?;
                let sigma = racah_sigma(&nn, beta, gamma, delta, n)?;
                let den = sigma
                    * poch_den(&(beta - &nn + Rational::one()), 2 * n, "(beta-N+1)_{2n}")?
                    * poch_den(&(beta - &nn + qu(n)), n, "(beta-N+n)_n")?;
                Ok(neg_one_pow(n)
                    * m_mass
                    * pochhammer(&(beta - gamma - &nn), n)
                    * pochhammer(&(-delta.clone() - &nn), n)
                    * pochhammer(&(beta + Rational::one()), n)
                    / den)
            }
            FamilyKind::Jacobi { alpha, beta } => {
                let den = poch_den(
                    &(qu(n) + alpha + beta + Rational::one()),
                    n,
                    "(n+alpha+beta+1)_n",
                )? * poch_den(&(alpha + beta + qi(2)), 2 * n, "(alpha+beta+2)_{2n}")?;
                Ok(rat_pow(&qi(4), n as i64)
                    * factorial(n)
                    * pochhammer(&(alpha + Rational::one()), n)
                    * pochhammer(&(beta + Rational::one()), n)
                    / den)
            }
            FamilyKind::Laguerre { alpha } => {
                Ok(factorial(n) * pochhammer(&(alpha + Rational::one()), n))
            }
            FamilyKind::Ultraspherical { lambda } => {
                // Monic norm against the mass-1 measure on [-1, 1].
                check_nonzero(lambda, "ultraspherical lambda")?;
                let lead = ultraspherical(lambda, n).leading_coeff();
                if lead.is_zero() {
                    return Err(ParamError::forbidden("degenerate ultraspherical leading coefficient"));
                }
                let cn = lambda.clone() * pochhammer(&(lambda * qi(2)), n)
                    / ((qu(n) + lambda) * factorial(n));
                Ok(cn / (&lead * &lead))
            }
            FamilyKind::Wilson { .. } => Err(ParamError::forbidden(
                "Wilson norms are not rationalized here; quadratic verification derives moments instead",
            )),
        }
    }

    /// Total mass of the normalized measure (μ^0_0).
    pub fn total_mass(&self) -> Result<Rational> {
        match &self.kind {
            FamilyKind::Racah { alpha, beta, gamma, delta } => {
                // In the lattice case alpha = -N-1 the mass is
                // M = (-beta)_N (gamma+delta+2)_N / ((-beta+gamma+1)_N (delta+1)_N);
                // for generic alpha the formal functional is normalized to 1.
                match racah_cap(alpha) {
                    Err(_) => Ok(Rational::one()),
                    Ok(n_int) => {
                        let den = poch_den(
                            &(gamma - beta + Rational::one()),
                            n_int,
                            "(-beta+gamma+1)_N",
                        )? * poch_den(&(delta + Rational::one()), n_int, "(delta+1)_N")?;
                        Ok(pochhammer(&-beta.clone(), n_int)
                            * pochhammer(&(gamma + delta + qi(2)), n_int)
                            / den)
                    }
                }
            }
            _ => Ok(Rational::one()),
        }
    }

    /// Anchor point x0 of the derivative specialization.
    pub fn natural_x0(&self) -> Rational {
        match &self.kind {
            FamilyKind::Jacobi { .. } => Rational::one(),
            _ => Rational::zero(),
        }
    }

    /// Lattice parameter u of the quadratic specialization.
    pub fn lattice_u(&self) -> Result<Rational> {
        match &self.kind {
            FamilyKind::DualHahn { alpha, c, nn } => Ok(alpha + c - nn),
            FamilyKind::Racah { gamma, delta, .. } => Ok(gamma + delta + Rational::one()),
            FamilyKind::Wilson { a, .. } => Ok(a * qi(2)),
            _ => Err(ParamError::forbidden(format!(
                "{} is not a quadratic-lattice family",
                self.name()
            ))),
        }
    }

    /// μ^0_j of the Δ specialization: the integral of binom(x, j).
    pub fn binomial_moment(&self, j: usize) -> Result<Rational> {
        match &self.kind {
            FamilyKind::Charlier { a } => {
                check_nonzero(a, "Charlier parameter a")?;
                Ok(rat_pow(a, j as i64) / factorial(j))
            }
            FamilyKind::Meixner { a, c } => {
                let om = Rational::one() - a;
                check_nonzero(a, "Meixner a")?;
                check_nonzero(&om, "Meixner 1 - a")?;
                Ok(rat_pow(a, j as i64) * pochhammer(c, j)
                    / (rat_pow(&om, j as i64) * factorial(j)))
            }
            FamilyKind::Krawtchouk { a, nn } => {
                check_nonzero(&(a + Rational::one()), "Krawtchouk 1 + a")?;
                Ok(pochhammer(&(nn - qu(j)), j) * rat_pow(a, j as i64)
                    / (rat_pow(&(Rational::one() + a), j as i64) * factorial(j)))
            }
            FamilyKind::Hahn { alpha, c, nn } => {
                let den =
                    poch_den(&(alpha + c - nn + Rational::one()), j, "(alpha+c-N+1)_j")?;
                Ok(pochhammer(&(nn - qu(j)), j) * pochhammer(c, j) / (den * factorial(j)))
            }
            _ => Err(ParamError::forbidden(format!(
                "{} has no Δ-specialization moments",
                self.name()
            ))),
        }
    }

    /// Raw shifted moments of the derivative specialization:
    /// the integral of (x - x0)^k against the normalized measure.
    pub fn shifted_moment(&self, k: usize) -> Result<Rational> {
        match &self.kind {
            FamilyKind::Jacobi { alpha, beta } => {
                let den = poch_den(&(alpha + beta + qi(2)), k, "(alpha+beta+2)_k")?;
                Ok(rat_pow(&qi(-2), k as i64) * pochhammer(&(alpha + Rational::one()), k) / den)
            }
            FamilyKind::Laguerre { alpha } => Ok(pochhammer(&(alpha + Rational::one()), k)),
            FamilyKind::Ultraspherical { lambda } => {
                if k % 2 == 1 {
                    return Ok(Rational::zero());
                }
                let half = k / 2;
                let den = poch_den(&(lambda + Rational::one()), half, "(lambda+1)_{k/2}")?;
                Ok(pochhammer(&crate::arith::q(1, 2), half) / den)
            }
            _ => Err(ParamError::forbidden(format!(
                "{} has no derivative-specialization moments",
                self.name()
            ))),
        }
    }

    /// μ^0_j of the quadratic specialization: the functional on f_j.  Closed
    /// form for dual Hahn; for Racah and Wilson the values are derived from
    /// the family's own orthogonality, which pins them down triangularly.
    pub fn f_moment_table(&self, jmax: usize) -> Result<Vec<Rational>> {
        match &self.kind {
            FamilyKind::DualHahn { alpha: _, c, nn } => (0..=jmax)
                .map(|j| {
                    Ok(neg_one_pow(j) * pochhammer(c, j) * pochhammer(&(nn - qu(j)), j)
                        / factorial(j))
                })
                .collect(),
            FamilyKind::Racah { .. } | FamilyKind::Wilson { .. } => {
                let coeffs = self.lambda_coeffs(jmax)?;
                let mut mu0 = vec![self.total_mass()?];
                for n in 1..=jmax {
                    let mut acc = Rational::zero();
                    for (j, mu_j) in mu0.iter().enumerate().take(n) {
                        acc += &coeffs[n][j] * mu_j;
                    }
                    let lead = &coeffs[n][n];
                    if lead.is_zero() {
                        return Err(ParamError::degenerate("zero leading f-coefficient"));
                    }
                    mu0.push(-acc / lead);
                }
                Ok(mu0)
            }
            _ => Err(ParamError::forbidden(format!(
                "{} is not a quadratic-lattice family",
                self.name()
            ))),
        }
    }

    /// f-basis coefficients of the λ-variable family polynomials:
    /// row k holds the coefficients of p_k on f_0..f_k.  For Wilson the
    /// polynomials are transported to the lattice u = 2a, which flips the
    /// sign of every odd f-coefficient.
    pub fn lambda_coeffs(&self, kmax: usize) -> Result<Vec<Vec<Rational>>> {
        let mut rows = Vec::with_capacity(kmax + 1);
        for n in 0..=kmax {
            let mut row = vec![Rational::zero(); n + 1];
            match &self.kind {
                FamilyKind::DualHahn { alpha: _, c, nn } => {
                    for (j, slot) in row.iter_mut().enumerate() {
                        *slot = pochhammer(&qi(-(n as i64)), j)
                            * pochhammer(&(Rational::one() - nn + qu(j)), n - j)
                            * pochhammer(&(c + qu(j)), n - j);
                    }
                }
                FamilyKind::Racah { alpha, beta, gamma, delta } => {
                    for (j, slot) in row.iter_mut().enumerate() {
                        let den = poch_den(
                            &(qu(n) + alpha + beta + Rational::one() + qu(j)),
                            n - j,
                            "(n+alpha+beta+1+j)_{n-j}",
                        )?;
                        *slot = pochhammer(&(alpha + Rational::one() + qu(j)), n - j)
                            * pochhammer(&(beta + delta + Rational::one() + qu(j)), n - j)
                            * pochhammer(&(gamma + Rational::one() + qu(j)), n - j)
                            / (neg_one_pow(j) * factorial(n - j) * den);
                    }
                }
                FamilyKind::Wilson { a, b, c, d } => {
                    for (j, slot) in row.iter_mut().enumerate() {
                        let den = poch_den(
                            &(qu(n) + a + b + c + d - Rational::one() + qu(j)),
                            n - j,
                            "(n+a+b+c+d-1+j)_{n-j}",
                        )?;
                        *slot = neg_one_pow(j)
                            * pochhammer(&(a + b + qu(j)), n - j)
                            * pochhammer(&(a + c + qu(j)), n - j)
                            * pochhammer(&(a + d + qu(j)), n - j)
                            / (factorial(n - j) * den);
                    }
                }
                _ => {
                    return Err(ParamError::forbidden(format!(
                        "{} is not a quadratic-lattice family",
                        self.name()
                    )))
                }
            }
            rows.push(row);
        }
        Ok(rows)
    }

    /// The moment functional of the family on its natural graded basis, up
    /// to degree kmax.  Usable to pair any polynomial of degree <= kmax.
    pub fn functional(&self, kmax: usize) -> Result<MomentFunctional> {
        match &self.kind {
            FamilyKind::Charlier { .. }
            | FamilyKind::Meixner { .. }
            | FamilyKind::Krawtchouk { .. }
            | FamilyKind::Hahn { .. } => {
                let basis = (0..=kmax).map(binom_poly).collect();
                let values = (0..=kmax)
                    .map(|j| self.binomial_moment(j))
                    .collect::<Result<Vec<_>>>()?;
                Ok(MomentFunctional { basis, values })
            }
            FamilyKind::Jacobi { .. }
            | FamilyKind::Laguerre { .. }
            | FamilyKind::Ultraspherical { .. } => {
                let x0 = self.natural_x0();
                let shifted = &Poly::var() - &Poly::constant(x0);
                let basis = (0..=kmax).map(|k| shifted.pow(k)).collect();
                let values = (0..=kmax)
                    .map(|k| self.shifted_moment(k))
                    .collect::<Result<Vec<_>>>()?;
                Ok(MomentFunctional { basis, values })
            }
            FamilyKind::DualHahn { .. } | FamilyKind::Racah { .. } | FamilyKind::Wilson { .. } => {
                let u = self.lattice_u()?;
                let basis = (0..=kmax).map(|j| f_poly(&u, j)).collect();
                let values = self.f_moment_table(kmax)?;
                Ok(MomentFunctional { basis, values })
            }
        }
    }

    /// Full μ_j^i table for the given specialization, built from the μ^0
    /// closed forms through the expansion formulas of the respective
    /// sections.
    pub fn moment_table(&self, psi: &PsiKind, size: usize) -> Result<MomentTable> {
        let mut mu = vec![vec![Rational::zero(); size + 1]; size + 1];
        match psi {
            PsiKind::ShiftedMonomial(x0) => {
                if *x0 != self.natural_x0() {
                    return Err(ParamError::forbidden(
                        "closed-form moments exist at the family's natural anchor only",
                    ));
                }
                // μ^i_j = μ_{i+j}/j!
                let raw: Vec<Rational> = (0..=2 * size)
                    .map(|k| self.shifted_moment(k))
                    .collect::<Result<Vec<_>>>()?;
                for (j, row) in mu.iter_mut().enumerate() {
                    for (i, slot) in row.iter_mut().enumerate() {
                        *slot = &raw[i + j] / factorial(j);
                    }
                }
            }
            PsiKind::Binomial => {
                let raw: Vec<Rational> = (0..=2 * size)
                    .map(|j| self.binomial_moment(j))
                    .collect::<Result<Vec<_>>>()?;
                for (j, row) in mu.iter_mut().enumerate() {
                    for (i, slot) in row.iter_mut().enumerate() {
                        let mut acc = Rational::zero();
                        for l in 0..=i {
                            let b1 = binom_int(j, i - l);
                            if b1.is_zero() {
                                continue;
                            }
                            acc += b1 * binom_int(j + l, l) * &raw[j + l];
                        }
                        *slot = acc;
                    }
                }
            }
            PsiKind::FBasis(u) => {
                if *u != self.lattice_u()? {
                    return Err(ParamError::forbidden("wrong lattice parameter u"));
                }
                let raw = self.f_moment_table(2 * size)?;
                for (j, row) in mu.iter_mut().enumerate() {
                    for (i, slot) in row.iter_mut().enumerate() {
                        let mut acc = Rational::zero();
                        for l in 0..=i.min(j) {
                            acc += neg_one_pow(l)
                                * binom_int(j, l)
                                * binom_int(j + i - l, j)
                                * pochhammer(&(u + qu(i) + qu(j) - qu(l)), l)
                                * &raw[i + j - l];
                        }
                        *slot = acc;
                    }
                }
            }
            PsiKind::FamilyBasis => {
                for (j, row) in mu.iter_mut().enumerate() {
                    row[j] = self.natural_norm_squared(j)?;
                }
            }
        }
        Ok(MomentTable { mu, psi_kind: psi.clone() })
    }

    /// Squared norm of the family polynomial in the normalization the T_μ
    /// specialization lowers (C_n^λ for ultraspherical, the generating
    /// function normalization for Meixner, L_n^α for Laguerre).
    pub fn natural_norm_squared(&self, n: usize) -> Result<Rational> {
        match &self.kind {
            FamilyKind::Ultraspherical { lambda } => {
                check_nonzero(lambda, "ultraspherical lambda")?;
                let den = check_nonzero_val(qu(n) + lambda, "n + lambda")?;
                Ok(lambda.clone() * pochhammer(&(lambda * qi(2)), n) / (den * factorial(n)))
            }
            FamilyKind::Meixner { a, c } => {
                check_nonzero(a, "Meixner a")?;
                Ok(pochhammer(c, n) / (rat_pow(a, n as i64) * factorial(n)))
            }
            FamilyKind::Laguerre { alpha } => {
                Ok(pochhammer(&(alpha + Rational::one()), n) / factorial(n))
            }
            _ => Err(ParamError::forbidden(format!(
                "{} has no T_mu specialization here",
                self.name()
            ))),
        }
    }

    /// The family polynomial in the normalization that its T_μ operator
    /// lowers.
    pub fn natural_tmu_polynomial(&self, n: usize) -> Result<Poly> {
        match &self.kind {
            FamilyKind::Ultraspherical { lambda } => {
                check_nonzero(lambda, "ultraspherical lambda")?;
                Ok(ultraspherical(lambda, n))
            }
            FamilyKind::Meixner { a, c } => meixner_gf(a, c, n),
            FamilyKind::Laguerre { alpha } => Ok(laguerre_standard(alpha, n)),
            _ => Err(ParamError::forbidden(format!(
                "{} has no T_mu specialization here",
                self.name()
            ))),
        }
    }

    /// Closed form of the inverse sequence s_k of the T_μ specialization:
    /// C_k^{-λ} for ultraspherical, m_k^{a,-c}(-x) for Meixner,
    /// L_k^{-α-2}(-x) for Laguerre.
    pub fn tmu_inverse_closed_form(&self, k: usize) -> Result<Poly> {
        match &self.kind {
            FamilyKind::Ultraspherical { lambda } => {
                check_nonzero(lambda, "ultraspherical lambda")?;
                Ok(ultraspherical(&-lambda.clone(), k))
            }
            FamilyKind::Meixner { a, c } => {
                Ok(meixner_gf(a, &-c.clone(), k)?.compose(&-&Poly::var()))
            }
            FamilyKind::Laguerre { alpha } => {
                Ok(laguerre_standard(&(-alpha.clone() - qi(2)), k).compose(&-&Poly::var()))
            }
            _ => Err(ParamError::forbidden(format!(
                "{} has no T_mu specialization here",
                self.name()
            ))),
        }
    }

    /// The closed form for q_n^i from the specialization the operator kind
    /// selects, with the family's transcendental normalization divided out.
    pub fn q_closed_form(&self, op: QOpKind, n: usize, i: usize) -> Result<Poly> {
        let minus_x_plus_i = &Poly::constant(qu(i)) - &Poly::var();
        if op == QOpKind::Tmu {
            // q_n^i = ||p_i||^2 s_{n-i} with the family's inverse sequence.
            if i > n {
                return Ok(Poly::zero());
            }
            let norm = self.natural_norm_squared(i)?;
            let s = self.tmu_inverse_closed_form(n - i)?;
            return Ok(s.scale(&norm));
        }
        match &self.kind {
            FamilyKind::Charlier { a } => {
                let scale = rat_pow(a, i as i64) / (factorial(i) * factorial(n));
                Ok(charlier_monic(&-a.clone(), n)?.compose(&minus_x_plus_i).scale(&scale))
            }
            FamilyKind::Meixner { a, c } => {
                let om = Rational::one() - a;
                check_nonzero(&om, "Meixner 1 - a")?;
                let scale = rat_pow(a, i as i64) * pochhammer(c, i)
                    / (factorial(i) * factorial(n) * rat_pow(&om, i as i64));
                let inner = meixner_monic(
                    a,
                    &(-c.clone() - qu(n) - qu(i) + Rational::one()),
                    n,
                )?;
                Ok(inner.compose(&minus_x_plus_i).scale(&scale))
            }
            FamilyKind::Krawtchouk { a, nn } => {
                let scale = rat_pow(a, i as i64) * pochhammer(&(nn - qu(i)), i)
                    / (factorial(i)
                        * factorial(n)
                        * rat_pow(&(Rational::one() + a), i as i64));
                let inner =
                    krawtchouk_monic(a, &(-nn.clone() + qu(i) + qu(n) + Rational::one()), n)?;
                Ok(inner.compose(&minus_x_plus_i).scale(&scale))
            }
            FamilyKind::Hahn { alpha, c, nn } => {
                let mu_i = self.binomial_moment(i)?;
                let scale = mu_i / factorial(n);
                let inner = hahn_monic(
                    &(qu(i) - alpha),
                    &(-c.clone() - qu(n) - qu(i) + Rational::one()),
                    &(qu(n) + Rational::one() + qu(i) - nn),
                    n,
                )?;
                Ok(inner.compose(&minus_x_plus_i).scale(&scale))
            }
            FamilyKind::Jacobi { alpha, beta } => {
                // q_n^i = c (-2)^{i+j} expansion divided by c_{alpha,beta}
                let mut acc = Poly::zero();
                let one_minus_x = &Poly::one() - &Poly::var();
                for j in 0..=n {
                    let den = poch_den(&(alpha + beta + qi(2)), i + j, "(alpha+beta+2)_{i+j}")?;
                    let coef = rat_pow(&qi(-2), (i + j) as i64)
                        * pochhammer(&(alpha + Rational::one()), i + j)
                        / (den * factorial(j) * factorial(n - j));
                    acc = &acc + &one_minus_x.pow(n - j).scale(&coef);
                }
                Ok(acc)
            }
            FamilyKind::Laguerre { alpha } => {
                let scale = neg_one_pow(n) * pochhammer(&(alpha + Rational::one()), i);
                let inner = laguerre_standard(
                    &(-alpha.clone() - qu(i) - qu(n) - Rational::one()),
                    n,
                );
                Ok(inner.compose(&-&Poly::var()).scale(&scale))
            }
            _ => Err(ParamError::forbidden(format!(
                "no q closed form wired for {} under {:?}",
                self.name(),
                op
            ))),
        }
    }

    /// The dual Hahn closed form for q_k^i on the quadratic lattice, where
    /// k is the combined index n+m-1 of the quadratic theorem.
    pub fn q_closed_form_quadratic(&self, k: usize, i: usize) -> Result<Poly> {
        let minus_x_plus_i = &Poly::constant(qu(i)) - &Poly::var();
        match &self.kind {
            FamilyKind::DualHahn { alpha, c, nn } => {
                let mu_i = &self.f_moment_table(i)?[i];
                // parameters of the reflected family
                let (na, nc, nnn) = (
                    -alpha.clone() + qu(k) + Rational::one(),
                    qi(2) - c - qu(k) - Rational::one() - qu(i),
                    -nn.clone() + qu(k) + Rational::one() + qu(i),
                );
                let inner = dual_hahn_monic(&na, &nc, &nnn, k)?;
                let u2 = &na + &nc - &nnn;
                let arg = &minus_x_plus_i * &(&minus_x_plus_i + &Poly::constant(u2));
                Ok(inner.compose(&arg).scale(&(mu_i / factorial(k))))
            }
            _ => Err(ParamError::forbidden(format!(
                "no quadratic q closed form wired for {}",
                self.name()
            ))),
        }
    }
}

fn check_nonzero_val(r: Rational, what: &str) -> Result<Rational> {
    if r.is_zero() {
        Err(ParamError::forbidden(format!("{what} vanishes")))
    } else {
        Ok(r)
    }
}

/// σ_n of the Racah construction in the Selberg section.
pub fn racah_sigma(
    nn: &Rational,
    beta: &Rational,
    gamma: &Rational,
    delta: &Rational,
    n: usize,
) -> Result<Rational> {
    let den = poch_den(&-nn.clone(), n, "(-N)_n")?
        * poch_den(&(beta + delta + Rational::one()), n, "(beta+delta+1)_n")?
        * poch_den(&(gamma + Rational::one()), n, "(gamma+1)_n")?
        * factorial(n);
    Ok(neg_one_pow(n) / den)
}

fn positive_int(r: &Rational, what: &str) -> Result<usize> {
    if !is_positive_int(r) {
        return Err(ParamError::forbidden(format!("{what} must be a positive integer, got {r}")));
    }
    crate::arith::as_usize(r)
        .ok_or_else(|| ParamError::out_of_range(format!("{what} too large")))
}

/// The Racah lattice size N in the orthogonal case alpha = -N-1.
fn racah_cap(alpha: &Rational) -> Result<usize> {
    positive_int(&(-alpha.clone() - Rational::one()), "Racah -alpha-1 (= N)")
}

impl fmt::Display for FamilySpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.kind {
            FamilyKind::Charlier { a } => write!(f, "charlier:a={a}"),
            FamilyKind::Meixner { a, c } => write!(f, "meixner:a={a},c={c}"),
            FamilyKind::Krawtchouk { a, nn } => write!(f, "krawtchouk:a={a},N={nn}"),
            FamilyKind::Hahn { alpha, c, nn } => write!(f, "hahn:alpha={alpha},c={c},N={nn}"),
            FamilyKind::DualHahn { alpha, c, nn } => {
                write!(f, "dualhahn:alpha={alpha},c={c},N={nn}")
            }
            FamilyKind::Racah { alpha, beta, gamma, delta } => {
                write!(f, "racah:alpha={alpha},beta={beta},gamma={gamma},delta={delta}")
            }
            FamilyKind::Wilson { a, b, c, d } => write!(f, "wilson:a={a},b={b},c={c},d={d}"),
            FamilyKind::Jacobi { alpha, beta } => write!(f, "jacobi:alpha={alpha},beta={beta}"),
            FamilyKind::Laguerre { alpha } => write!(f, "laguerre:alpha={alpha}"),
            FamilyKind::Ultraspherical { lambda } => write!(f, "ultraspherical:lambda={lambda}"),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::q;

    /// Gram-Schmidt over a moment functional: the monic orthogonal
    /// polynomial of degree n, independent of every closed form.
    fn monic_from_functional(f: &MomentFunctional, n: usize) -> Poly {
        let mut ps: Vec<Poly> = vec![];
        for k in 0..=n {
            let mut p = Poly::monomial(Rational::one(), k);
            for prev in &ps {
                let num = f.pair(&(&p * prev)).unwrap();
                let den = f.pair(&(prev * prev)).unwrap();
                p = &p - &prev.scale(&(num / den));
            }
            ps.push(p);
        }
        ps.pop().unwrap()
    }

    fn generic_specs() -> Vec<FamilySpec> {
        vec![
            FamilySpec::parse("charlier:a=2").unwrap(),
            FamilySpec::parse("charlier:a=-1/3").unwrap(),
            FamilySpec::parse("meixner:a=1/2,c=1").unwrap(),
            FamilySpec::parse("meixner:a=-2/5,c=7/3").unwrap(),
            FamilySpec::parse("krawtchouk:a=1,N=13").unwrap(),
            FamilySpec::parse("krawtchouk:a=3/4,N=17/2").unwrap(),
            FamilySpec::parse("hahn:alpha=12,c=2,N=9").unwrap(),
            FamilySpec::parse("hahn:alpha=9/2,c=5/3,N=13/7").unwrap(),
            FamilySpec::parse("jacobi:alpha=0,beta=0").unwrap(),
            FamilySpec::parse("jacobi:alpha=1/2,beta=-1/3").unwrap(),
            FamilySpec::parse("laguerre:alpha=0").unwrap(),
            FamilySpec::parse("laguerre:alpha=7/5").unwrap(),
            FamilySpec::parse("ultraspherical:lambda=1").unwrap(),
            FamilySpec::parse("ultraspherical:lambda=3/2").unwrap(),
            FamilySpec::parse("dualhahn:alpha=9/2,c=1/3,N=13/5").unwrap(),
            FamilySpec::parse("racah:alpha=15/2,beta=1/3,gamma=2/5,delta=3/7").unwrap(),
            FamilySpec::parse("racah:alpha=-8,beta=1/3,gamma=2/5,delta=3/7").unwrap(),
            FamilySpec::parse("wilson:a=1,b=2,c=3,d=5/2").unwrap(),
            FamilySpec::parse("wilson:a=1/2,b=4/3,c=2,d=3").unwrap(),
        ]
    }

    /// The lambda-variable monic polynomial that Gram-Schmidt over the
    /// family functional must reproduce.
    fn gs_reference(spec: &FamilySpec, n: usize) -> Poly {
        match &spec.kind {
            FamilyKind::Wilson { a, .. } => {
                // transported to the lattice u = 2a: x = -y - a^2
                let arg = &(-&Poly::var()) - &Poly::constant(a * a);
                spec.monic(n).unwrap().compose(&arg).scale(&neg_one_pow(n))
            }
            _ => spec.monic(n).unwrap(),
        }
    }

    #[test]
    fn gram_schmidt_reproduces_closed_forms() {
        for spec in generic_specs() {
            let f = spec.functional(12).unwrap();
            for n in 0..=5 {
                let gs = monic_from_functional(&f, n);
                assert_eq!(gs, gs_reference(&spec, n), "family {spec}, degree {n}");
            }
        }
    }

    #[test]
    fn functional_norms_match_closed_forms() {
        for spec in generic_specs() {
            if matches!(spec.kind, FamilyKind::Wilson { .. }) {
                continue;
            }
            if matches!(&spec.kind, FamilyKind::Racah { alpha, .. }
                if !is_positive_int(&(-alpha.clone() - Rational::one())))
            {
                continue;
            }
            let f = spec.functional(12).unwrap();
            for n in 0..=5 {
                let p = gs_reference(&spec, n);
                let via_pairing = f.pair(&(&p * &p)).unwrap();
                assert_eq!(
                    via_pairing,
                    spec.norm_squared(n).unwrap(),
                    "norm mismatch for {spec}, n={n}"
                );
            }
        }
    }

    #[test]
    fn finite_measures_match_functionals() {
        let finite = vec![
            FamilySpec::parse("krawtchouk:a=1,N=3").unwrap(),
            FamilySpec::parse("krawtchouk:a=2/3,N=6").unwrap(),
            FamilySpec::parse("hahn:alpha=3,c=1,N=2").unwrap(),
            FamilySpec::parse("hahn:alpha=13/2,c=4/3,N=5").unwrap(),
            FamilySpec::parse("dualhahn:alpha=17/2,c=1/3,N=6").unwrap(),
            FamilySpec::parse("racah:alpha=-7,beta=1/3,gamma=2/5,delta=3/7").unwrap(),
        ];
        for spec in finite {
            let meas = spec.measure(None).unwrap();
            let f = spec.functional(8).unwrap();
            assert_eq!(meas.total_mass(), spec.total_mass().unwrap(), "mass for {spec}");
            for (j, b) in f.basis.iter().enumerate().take(6) {
                assert_eq!(
                    meas.integrate(b),
                    f.values[j],
                    "moment {j} of {spec} disagrees with its measure"
                );
            }
        }
    }

    #[test]
    fn orthogonality_against_measures() {
        let finite = vec![
            FamilySpec::parse("krawtchouk:a=1,N=7").unwrap(),
            FamilySpec::parse("hahn:alpha=12,c=2,N=7").unwrap(),
            FamilySpec::parse("dualhahn:alpha=19/2,c=5/4,N=7").unwrap(),
            FamilySpec::parse("racah:alpha=-8,beta=1/2,gamma=1/5,delta=2/7").unwrap(),
        ];
        for spec in finite {
            let meas = spec.measure(None).unwrap();
            for n in 0..=5usize {
                let pn = spec.monic(n).unwrap();
                for k in 0..=n {
                    let pk = spec.monic(k).unwrap();
                    let ip = meas.integrate(&(&pn * &pk));
                    if k < n {
                        assert!(ip.is_zero(), "<p_{n}, p_{k}> != 0 for {spec}");
                    } else {
                        assert_eq!(ip, spec.norm_squared(n).unwrap(), "norm for {spec}, n={n}");
                    }
                }
            }
        }
    }

    #[test]
    fn spec_polynomial_examples() {
        let ch = FamilySpec::parse("charlier:a=2").unwrap();
        assert_eq!(ch.monic(1).unwrap(), Poly::from_coeffs(vec![qi(-2), qi(1)]));
        let me = FamilySpec::parse("meixner:a=1/2,c=1").unwrap();
        assert_eq!(me.monic(1).unwrap(), Poly::from_coeffs(vec![qi(-1), qi(1)]));
        let ul = FamilySpec::parse("ultraspherical:lambda=1").unwrap();
        assert_eq!(
            ul.polynomial(2, Variant::Normalized).unwrap(),
            Poly::from_coeffs(vec![qi(-1), qi(0), qi(4)])
        );
    }

    #[test]
    fn spec_measure_examples() {
        let kr = FamilySpec::parse("krawtchouk:a=1,N=3").unwrap();
        let m = kr.measure(None).unwrap();
        assert_eq!(
            m.support,
            vec![(qi(0), q(1, 4)), (qi(1), q(1, 2)), (qi(2), q(1, 4))]
        );
        let ha = FamilySpec::parse("hahn:alpha=3,c=1,N=2").unwrap();
        let m = ha.measure(None).unwrap();
        assert_eq!(m.support.len(), 2);
        assert_eq!(m.total_mass(), qi(1));
        let ch = FamilySpec::parse("charlier:a=1").unwrap();
        let m = ch.measure(Some(4)).unwrap();
        for (x, w) in &m.support {
            let xi = crate::arith::as_usize(x).unwrap();
            assert_eq!(w, &factorial(xi).recip());
        }
    }

    #[test]
    fn spec_moment_examples() {
        let ch = FamilySpec::parse("charlier:a=1").unwrap();
        for j in 0..6 {
            assert_eq!(ch.binomial_moment(j).unwrap(), factorial(j).recip());
        }
        let ja = FamilySpec::parse("jacobi:alpha=0,beta=0").unwrap();
        for n in 0..6usize {
            assert_eq!(
                ja.shifted_moment(n).unwrap(),
                rat_pow(&qi(-2), n as i64) / qu(n + 1)
            );
        }
        let me = FamilySpec::parse("meixner:a=1/2,c=1").unwrap();
        // section 5.3 diagonal table: mu_j^i = 0 off the diagonal
        let t = me.moment_table(&PsiKind::FamilyBasis, 4).unwrap();
        for j in 0..=4 {
            for i in 0..=4 {
                if i != j {
                    assert!(t.get(j, i).is_zero());
                }
            }
        }
    }

    #[test]
    fn spec_norm_examples() {
        let ch = FamilySpec::parse("charlier:a=2").unwrap();
        assert_eq!(ch.norm_squared(3).unwrap(), qi(48));
        let me = FamilySpec::parse("meixner:a=1/2,c=1").unwrap();
        assert_eq!(me.norm_squared(2).unwrap(), qi(16));
        for spec in generic_specs() {
            if matches!(spec.kind, FamilyKind::Wilson { .. } | FamilyKind::Racah { .. }) {
                continue;
            }
            assert_eq!(spec.norm_squared(0).unwrap(), qi(1), "mass-1 family {spec}");
        }
    }

    #[test]
    fn dual_hahn_f_moments_match_triangular_derivation() {
        let spec = FamilySpec::parse("dualhahn:alpha=19/4,c=3/2,N=23/6").unwrap();
        let closed = spec.f_moment_table(6).unwrap();
        // re-derive triangularly from orthogonality to the constant
        let coeffs = spec.lambda_coeffs(6).unwrap();
        let mut derived = vec![Rational::one()];
        for n in 1..=6 {
            let mut acc = Rational::zero();
            for j in 0..n {
                acc += &coeffs[n][j] * &derived[j];
            }
            derived.push(-acc / &coeffs[n][n]);
        }
        assert_eq!(closed, derived);
    }

    #[test]
    fn duality_identities() {
        // Charlier: (-1)^n/a^n c^_n(m) symmetric in (n, m)
        for a in [qi(1), qi(2), q(-1, 2)] {
            for n in 0..=6usize {
                for m in 0..=6usize {
                    let lhs = neg_one_pow(n) / rat_pow(&a, n as i64)
                        * charlier_monic(&a, n).unwrap().eval(&qu(m));
                    let rhs = neg_one_pow(m) / rat_pow(&a, m as i64)
                        * charlier_monic(&a, m).unwrap().eval(&qu(n));
                    assert_eq!(lhs, rhs);
                }
            }
        }
        // Meixner: (a-1)^n/(a^n (1+c)_{n-1}) m^_n(m) symmetric (extended
        // Pochhammer at n = 0)
        let (a, c) = (q(1, 3), q(7, 5));
        let pre = |n: usize| -> Rational {
            rat_pow(&(&a - Rational::one()), n as i64)
                / (rat_pow(&a, n as i64)
                    * crate::arith::pochhammer_ext(&(Rational::one() + &c), n as i64 - 1)
                        .unwrap())
        };
        for n in 0..=6usize {
            for m in 0..=6usize {
                let lhs = pre(n) * meixner_monic(&a, &c, n).unwrap().eval(&qu(m));
                let rhs = pre(m) * meixner_monic(&a, &c, m).unwrap().eval(&qu(n));
                assert_eq!(lhs, rhs);
            }
        }
        // Krawtchouk: n!(a+1)^n/(a^n (2-N)_{n-1}) k_n(m) symmetric
        let (a, nn) = (q(2, 3), q(17, 4));
        let pre = |n: usize| -> Rational {
            factorial(n) * rat_pow(&(&a + Rational::one()), n as i64)
                / (rat_pow(&a, n as i64)
                    * crate::arith::pochhammer_ext(&(qi(2) - &nn), n as i64 - 1).unwrap())
        };
        for n in 0..=6usize {
            for m in 0..=6usize {
                let kn = krawtchouk_monic(&a, &nn, n).unwrap().scale(&factorial(n).recip());
                let km = krawtchouk_monic(&a, &nn, m).unwrap().scale(&factorial(m).recip());
                assert_eq!(pre(n) * kn.eval(&qu(m)), pre(m) * km.eval(&qu(n)));
            }
        }
        // dual Hahn at lambda(n) against Hahn at k
        let (al, c, nn) = (q(19, 3), q(3, 2), q(11, 4));
        let u = &al + &c - &nn;
        for k in 0..=5usize {
            for n in 0..=5usize {
                let lam_n = qu(n) * (qu(n) + &u);
                let lhs = dual_hahn_monic(&al, &c, &nn, k).unwrap().eval(&lam_n)
                    / (pochhammer(&c, k) * pochhammer(&(Rational::one() - &nn), k));
                let rhs = pochhammer(&(qu(n) + &u), n)
                    / (pochhammer(&c, n) * pochhammer(&(Rational::one() - &nn), n))
                    * hahn_monic(&al, &c, &nn, n).unwrap().eval(&qu(k));
                assert_eq!(lhs, rhs, "dual Hahn duality at k={k}, n={n}");
            }
        }
    }

    #[test]
    fn positivity_range_weights_are_positive() {
        use num_traits::Signed;
        let positive = vec![
            FamilySpec::parse("krawtchouk:a=2,N=6").unwrap(),
            FamilySpec::parse("hahn:alpha=8,c=3/2,N=5").unwrap(),
            FamilySpec::parse("dualhahn:alpha=7,c=2,N=5").unwrap(),
            FamilySpec::parse("charlier:a=3").unwrap(),
        ];
        for spec in positive {
            let meas = spec.measure(Some(6)).unwrap();
            for (x, w) in &meas.support {
                assert!(w.is_positive(), "weight at {x} of {spec} is not positive");
            }
        }
    }

    #[test]
    fn registry_roundtrip() {
        for spec in generic_specs() {
            let s = spec.to_string();
            assert_eq!(FamilySpec::parse(&s).unwrap(), spec, "roundtrip of {s}");
        }
        assert!(FamilySpec::parse("nosuch:a=1").is_err());
        assert!(FamilySpec::parse("charlier:b=1").is_err());
    }
}
