//! Dense univariate polynomials over exact rationals: arithmetic, evaluation,
//! composition, argument shifts, derivative and difference maps, and the
//! graded-basis expansions the determinant identities are built from.

use crate::arith::{factorial, qi, ParamError, Rational, Result};
use num_traits::{One, Zero};
use std::fmt;
use std::ops::{Add, AddAssign, Mul, Neg, Sub, SubAssign};

/// A polynomial stored as its coefficient list, lowest power first, with
/// trailing zeros trimmed (the zero polynomial has an empty list).
#[derive(Clone, PartialEq, Eq, Default)]
pub struct Poly {
    coeffs: Vec<Rational>,
}

impl Poly {
    pub fn zero() -> Self {
        Poly { coeffs: vec![] }
    }

    pub fn one() -> Self {
        Poly::constant(Rational::one())
    }

    pub fn constant(c: Rational) -> Self {
        let mut p = Poly { coeffs: vec![c] };
        p.trim();
        p
    }

    /// The variable x.
    pub fn var() -> Self {
        Poly { coeffs: vec![Rational::zero(), Rational::one()] }
    }

    /// c * x^k.
    pub fn monomial(c: Rational, k: usize) -> Self {
        if c.is_zero() {
            return Poly::zero();
        }
        let mut coeffs = vec![Rational::zero(); k + 1];
        coeffs[k] = c;
        Poly { coeffs }
    }

    pub fn from_coeffs(coeffs: Vec<Rational>) -> Self {
        let mut p = Poly { coeffs };
        p.trim();
        p
    }

    fn trim(&mut self) {
        while matches!(self.coeffs.last(), Some(c) if c.is_zero()) {
            self.coeffs.pop();
        }
    }

    pub fn coeffs(&self) -> &[Rational] {
        &self.coeffs
    }

    /// Coefficient of x^k (zero beyond the degree).
    pub fn coeff(&self, k: usize) -> Rational {
        self.coeffs.get(k).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Degree, with None for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    /// Leading coefficient (zero for the zero polynomial).
    pub fn leading_coeff(&self) -> Rational {
        self.coeffs.last().cloned().unwrap_or_else(Rational::zero)
    }

    /// Horner evaluation at a rational point.
    pub fn eval(&self, x: &Rational) -> Rational {
        let mut acc = Rational::zero();
        for c in self.coeffs.iter().rev() {
            acc = acc * x + c;
        }
        acc
    }

    /// p(q(x)) by Horner on the coefficient list.
    pub fn compose(&self, inner: &Poly) -> Poly {
        let mut acc = Poly::zero();
        for c in self.coeffs.iter().rev() {
            acc = &(&acc * inner) + &Poly::constant(c.clone());
        }
        acc
    }

    /// p(x + c), synthetic Horner shift.
    pub fn shift(&self, c: &Rational) -> Poly {
        let mut acc: Vec<Rational> = vec![];
        for coef in self.coeffs.iter().rev() {
            // acc <- acc * (x + c) + coef
            let mut next = vec![Rational::zero(); acc.len() + 1];
            for (k, a) in acc.iter().enumerate() {
                next[k + 1] += a;
                next[k] += a * c;
            }
            if next.is_empty() {
                next.push(Rational::zero());
            }
            next[0] += coef;
            acc = next;
        }
        Poly::from_coeffs(acc)
    }

    pub fn derivative(&self) -> Poly {
        let coeffs = self
            .coeffs
            .iter()
            .enumerate()
            .skip(1)
            .map(|(k, c)| c * qi(k as i64))
            .collect();
        Poly::from_coeffs(coeffs)
    }

    /// Forward difference Δp = p(x+1) - p(x).
    pub fn forward_difference(&self) -> Poly {
        &self.shift(&Rational::one()) - self
    }

    /// Backward difference ∇p = p(x) - p(x-1).
    pub fn backward_difference(&self) -> Poly {
        self - &self.shift(&-Rational::one())
    }

    pub fn scale(&self, c: &Rational) -> Poly {
        if c.is_zero() {
            return Poly::zero();
        }
        Poly { coeffs: self.coeffs.iter().map(|a| a * c).collect() }
    }

    pub fn pow(&self, e: usize) -> Poly {
        let mut acc = Poly::one();
        for _ in 0..e {
            acc = &acc * self;
        }
        acc
    }

    /// Exact division; errors when the divisor is zero or does not divide.
    pub fn div_exact(&self, d: &Poly) -> Result<Poly> {
        if d.is_zero() {
            return Err(ParamError::forbidden("polynomial division by zero"));
        }
        if self.is_zero() {
            return Ok(Poly::zero());
        }
        let (dn, dd) = (self.degree().unwrap(), d.degree().unwrap());
        if dn < dd {
            return Err(ParamError::forbidden("inexact polynomial division"));
        }
        let lead = d.leading_coeff();
        let mut rem = self.coeffs.clone();
        let mut quo = vec![Rational::zero(); dn - dd + 1];
        for k in (dd..=dn).rev() {
            let c = &rem[k] / &lead;
            if !c.is_zero() {
                for (j, dc) in d.coeffs.iter().enumerate() {
                    let idx = k - dd + j;
                    rem[idx] = &rem[idx] - &(dc * &c);
                }
            }
            quo[k - dd] = c;
        }
        if rem.iter().any(|c| !c.is_zero()) {
            return Err(ParamError::forbidden("inexact polynomial division"));
        }
        Ok(Poly::from_coeffs(quo))
    }

    /// Rising factorial of a polynomial argument: p(p+1)...(p+n-1).
    pub fn pochhammer(&self, n: usize) -> Poly {
        let mut acc = Poly::one();
        let mut term = self.clone();
        for _ in 0..n {
            acc = &acc * &term;
            term = &term + &Poly::one();
        }
        acc
    }

    /// binom(p, k) with a polynomial upper argument.
    pub fn binom(&self, k: usize) -> Poly {
        let mut acc = Poly::one();
        let mut term = self.clone();
        for _ in 0..k {
            acc = &acc * &term;
            term = &term - &Poly::one();
        }
        acc.scale(&factorial(k).recip())
    }

    /// Newton expansion on the binomial basis binom(x, k): the coefficient of
    /// binom(x, k) is (Δ^k p)(0).
    pub fn to_binomial_basis(&self) -> Vec<Rational> {
        let deg = match self.degree() {
            None => return vec![],
            Some(d) => d,
        };
        let mut out = Vec::with_capacity(deg + 1);
        let mut cur = self.clone();
        for _ in 0..=deg {
            out.push(cur.eval(&Rational::zero()));
            cur = cur.forward_difference();
        }
        out
    }

    /// Inverse of `to_binomial_basis`.
    pub fn from_binomial_basis(coeffs: &[Rational]) -> Poly {
        let mut acc = Poly::zero();
        for (k, c) in coeffs.iter().enumerate() {
            acc = &acc + &binom_poly(k).scale(c);
        }
        acc
    }
}

/// binom(x, n) as a polynomial.
pub fn binom_poly(n: usize) -> Poly {
    Poly::var().binom(n)
}

/// Expand p on a graded basis (deg basis[k] = k, nonzero leading
/// coefficients) by triangular elimination from the top degree down.
pub fn expand_in_graded_basis(p: &Poly, basis: &[Poly]) -> Result<Vec<Rational>> {
    let deg = match p.degree() {
        None => return Ok(vec![Rational::zero(); basis.len()]),
        Some(d) => d,
    };
    if deg >= basis.len() {
        return Err(ParamError::out_of_range(format!(
            "degree {deg} exceeds stored basis of length {}",
            basis.len()
        )));
    }
    for (k, b) in basis.iter().enumerate().take(deg + 1) {
        if b.degree() != Some(k) && !(k == 0 && !b.is_zero()) {
            return Err(ParamError::degenerate(format!("basis element {k} has wrong degree")));
        }
    }
    let mut out = vec![Rational::zero(); basis.len()];
    let mut rem = p.clone();
    for k in (0..=deg).rev() {
        let c = rem.coeff(k) / basis[k].leading_coeff();
        if !c.is_zero() {
            rem = &rem - &basis[k].scale(&c);
        }
        out[k] = c;
    }
    if !rem.is_zero() {
        return Err(ParamError::degenerate("graded-basis expansion left a remainder"));
    }
    Ok(out)
}

/// Vandermonde-style product of binomials evaluated as a polynomial in x:
/// prod over the given rational roots of (x - root).
pub fn poly_from_roots(roots: &[Rational]) -> Poly {
    let mut acc = Poly::one();
    for r in roots {
        acc = &acc * &(&Poly::var() - &Poly::constant(r.clone()));
    }
    acc
}

impl fmt::Display for Poly {
    /// Canonical text form: coefficient list low-to-high, "p/q" scalars.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for (k, c) in self.coeffs.iter().enumerate() {
            if k > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{c}")?;
        }
        write!(f, "]")
    }
}

impl fmt::Debug for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Poly{self}")
    }
}

impl Add for &Poly {
    type Output = Poly;
    fn add(self, rhs: &Poly) -> Poly {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        let mut coeffs = Vec::with_capacity(n);
        for k in 0..n {
            coeffs.push(self.coeff(k) + rhs.coeff(k));
        }
        Poly::from_coeffs(coeffs)
    }
}

impl Sub for &Poly {
    type Output = Poly;
    fn sub(self, rhs: &Poly) -> Poly {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        let mut coeffs = Vec::with_capacity(n);
        for k in 0..n {
            coeffs.push(self.coeff(k) - rhs.coeff(k));
        }
        Poly::from_coeffs(coeffs)
    }
}

impl Mul for &Poly {
    type Output = Poly;
    fn mul(self, rhs: &Poly) -> Poly {
        if self.is_zero() || rhs.is_zero() {
            return Poly::zero();
        }
        let mut coeffs =
            vec![Rational::zero(); self.coeffs.len() + rhs.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in rhs.coeffs.iter().enumerate() {
                coeffs[i + j] += a * b;
            }
        }
        Poly::from_coeffs(coeffs)
    }
}

impl Neg for &Poly {
    type Output = Poly;
    fn neg(self) -> Poly {
        Poly { coeffs: self.coeffs.iter().map(|c| -c).collect() }
    }
}

impl AddAssign<&Poly> for Poly {
    fn add_assign(&mut self, rhs: &Poly) {
        *self = &*self + rhs;
    }
}

impl SubAssign<&Poly> for Poly {
    fn sub_assign(&mut self, rhs: &Poly) {
        *self = &*self - rhs;
    }
}
