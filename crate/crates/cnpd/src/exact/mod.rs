//! Exact arithmetic substrate: arbitrary-precision rationals, prime
//! factorization, and integer/rational linear algebra.

mod factor;
mod linalg;

pub use factor::{divisors, factorize, FactorError, PrimeFactorization};
pub use linalg::{integer_kernel_basis, rational_rank, solve_row_combination, IntMatrix};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

/// Exact rational number, always kept in lowest terms with positive denominator.
pub type Rational = BigRational;

/// Parses a rational from its canonical string form `"p"` or `"p/q"`.
pub fn parse_rational(s: &str) -> Result<Rational, RationalParseError> {
    let s = s.trim();
    let (num, den) = match s.split_once('/') {
        Some((n, d)) => (n.trim(), Some(d.trim())),
        None => (s, None),
    };
    let numer: BigInt = num.parse().map_err(|_| RationalParseError(s.to_string()))?;
    let denom: BigInt = match den {
        Some(d) => d.parse().map_err(|_| RationalParseError(s.to_string()))?,
        None => BigInt::one(),
    };
    if denom.is_zero() {
        return Err(RationalParseError(s.to_string()));
    }
    Ok(BigRational::new(numer, denom))
}

/// Renders a rational canonically: `"p"` when the denominator is 1, else `"p/q"`.
pub fn format_rational(r: &Rational) -> String {
    if r.denom().is_one() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

/// Squared magnitude of a complex number with rational parts.
pub fn gaussian_norm_sq(re: &Rational, im: &Rational) -> Rational {
    re * re + im * im
}

/// `base^exp` over the rationals, `exp` a signed 32-bit integer.
pub fn rational_pow(base: &Rational, exp: i32) -> Rational {
    if exp >= 0 {
        base.pow(exp)
    } else {
        BigRational::one() / base.pow(-exp)
    }
}

/// Returns true when `r` is an integer.
pub fn is_integer(r: &Rational) -> bool {
    r.denom().is_one()
}

/// Sign of a rational as -1, 0, or 1.
pub fn rational_sign(r: &Rational) -> i32 {
    if r.is_zero() {
        0
    } else if r.is_positive() {
        1
    } else {
        -1
    }
}

#[derive(Debug, Clone, thiserror::Error)]
#[error("cannot parse rational from {0:?}")]
pub struct RationalParseError(pub String);
