//! Exact rational scalars and the combinatorial primitives (factorial,
//! Pochhammer symbol, generalized binomial) used everywhere else.

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Arbitrary-precision rational number, always reduced, denominator positive.
/// This is the sole scalar type of the whole crate; no floating point appears
/// on any identity path.
pub type Rational = num_rational::BigRational;

/// What went wrong while building a family, a measure or a moment table.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum ParamErrorKind {
    /// A parameter hit the family's forbidden set (vanishing Pochhammer in a
    /// denominator, zero measure weight, ...).
    ForbiddenParameter,
    /// An orthogonality determinant vanished: no orthogonal family exists.
    DegenerateMeasure,
    /// An index exceeded a stored basis, a truncation or an enumeration guard.
    IndexOutOfRange,
}

#[derive(Debug, Clone, Error, PartialEq, Eq)]
#[error("{kind:?}: {detail}")]
pub struct ParamError {
    pub kind: ParamErrorKind,
    pub detail: String,
}

impl ParamError {
    pub fn forbidden(detail: impl Into<String>) -> Self {
        ParamError { kind: ParamErrorKind::ForbiddenParameter, detail: detail.into() }
    }
    pub fn degenerate(detail: impl Into<String>) -> Self {
        ParamError { kind: ParamErrorKind::DegenerateMeasure, detail: detail.into() }
    }
    pub fn out_of_range(detail: impl Into<String>) -> Self {
        ParamError { kind: ParamErrorKind::IndexOutOfRange, detail: detail.into() }
    }
}

pub type Result<T> = std::result::Result<T, ParamError>;

/// Rational from an integer pair. Panics on zero denominator.
pub fn q(num: i64, den: i64) -> Rational {
    Rational::new(BigInt::from(num), BigInt::from(den))
}

/// Rational from an integer.
pub fn qi(num: i64) -> Rational {
    Rational::from_integer(BigInt::from(num))
}

/// Rational from a usize.
pub fn qu(num: usize) -> Rational {
    Rational::from_integer(BigInt::from(num))
}

/// n! as a rational.
pub fn factorial(n: usize) -> Rational {
    let mut acc = BigInt::one();
    for k in 2..=n {
        acc *= BigInt::from(k);
    }
    Rational::from_integer(acc)
}

/// Rising factorial (u)_n = u(u+1)...(u+n-1), with (u)_0 = 1.
pub fn pochhammer(u: &Rational, n: usize) -> Rational {
    let mut acc = Rational::one();
    let mut term = u.clone();
    for _ in 0..n {
        acc *= &term;
        term += Rational::one();
    }
    acc
}

/// Pochhammer extended to negative indices by the analytic continuation
/// (u)_{-k} = 1/((u-k)_k), the convention under which
/// (u)_a (u+a)_b = (u)_{a+b} keeps holding.
pub fn pochhammer_ext(u: &Rational, n: i64) -> Result<Rational> {
    if n >= 0 {
        return Ok(pochhammer(u, n as usize));
    }
    let k = (-n) as usize;
    let d = pochhammer(&(u - Rational::from_integer(BigInt::from(k))), k);
    if d.is_zero() {
        return Err(ParamError::forbidden(format!("(u)_{{{n}}} pole at u = {u}")));
    }
    Ok(d.recip())
}

/// Generalized binomial coefficient binom(x, k) = x(x-1)...(x-k+1)/k! for a
/// rational x and nonnegative integer k.
pub fn binom(x: &Rational, k: usize) -> Rational {
    let mut acc = Rational::one();
    let mut term = x.clone();
    for _ in 0..k {
        acc *= &term;
        term -= Rational::one();
    }
    acc / factorial(k)
}

/// Integer binomial coefficient, zero when k > n.
pub fn binom_int(n: usize, k: usize) -> Rational {
    if k > n {
        return Rational::zero();
    }
    binom(&qu(n), k)
}

/// binom(n, 2) = n(n-1)/2 as an exponent helper.
pub fn choose2(n: usize) -> usize {
    n * (n - 1) / 2
}

/// (-1)^k as a rational.
pub fn neg_one_pow(k: usize) -> Rational {
    if k % 2 == 0 {
        Rational::one()
    } else {
        -Rational::one()
    }
}

/// Exact integer power with negative exponents allowed (base must be nonzero
/// for e < 0).
pub fn rat_pow(base: &Rational, e: i64) -> Rational {
    if e >= 0 {
        num_traits::pow::pow(base.clone(), e as usize)
    } else {
        num_traits::pow::pow(base.clone(), (-e) as usize).recip()
    }
}

/// Parse "p/q" or "p" into a rational; the canonical wire format of every
/// scalar in reports and on the command line.
pub fn parse_rational(s: &str) -> Result<Rational> {
    let t = s.trim();
    let parse_int = |v: &str| -> Result<BigInt> {
        v.parse::<BigInt>()
            .map_err(|_| ParamError::forbidden(format!("cannot parse integer '{v}'")))
    };
    match t.split_once('/') {
        None => Ok(Rational::from_integer(parse_int(t)?)),
        Some((p, qq)) => {
            let num = parse_int(p)?;
            let den = parse_int(qq)?;
            if den.is_zero() {
                return Err(ParamError::forbidden(format!("zero denominator in '{t}'")));
            }
            Ok(Rational::new(num, den))
        }
    }
}

/// Canonical "p/q" (or "p" when the denominator is 1).
pub fn format_rational(r: &Rational) -> String {
    r.to_string()
}

/// True when r is a nonpositive integer (0, -1, -2, ...); the usual forbidden
/// set of Pochhammer denominators.
pub fn is_nonpositive_int(r: &Rational) -> bool {
    r.is_integer() && !r.is_positive()
}

/// True when r is a positive integer.
pub fn is_positive_int(r: &Rational) -> bool {
    r.is_integer() && r.is_positive()
}

/// r as usize if it is a small nonnegative integer.
pub fn as_usize(r: &Rational) -> Option<usize> {
    use num_traits::ToPrimitive;
    if r.is_integer() && !r.is_negative() {
        r.to_integer().to_usize()
    } else {
        None
    }
}
