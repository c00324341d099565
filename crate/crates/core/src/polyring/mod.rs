//! Sparse multivariate polynomials with exact rational coefficients.
//!
//! Every other layer of the crate (root dictionaries, push-forwards,
//! symmetric reduction) is expressed in terms of [`MultiPoly`]. Terms are
//! kept in graded lexicographic order so equality, hashing of reports and
//! the canonical text form are deterministic.

mod parse;
mod poly;

pub use parse::{parse_poly, ParseError};
pub use num_rational::BigRational;
pub use poly::{Homogeneity, Monomial, MultiPoly, PolyError};

use num_bigint::BigInt;

/// Shorthand for an integer-valued rational.
pub fn rat(n: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(n))
}

/// Shorthand for `num / den`. Panics if `den == 0`.
pub fn frac(num: i64, den: i64) -> BigRational {
    BigRational::new(BigInt::from(num), BigInt::from(den))
}

/// Renders a rational as `p/q`, or `p` when the denominator is one.
pub fn fmt_rat(q: &BigRational) -> String {
    if q.is_integer() {
        q.numer().to_string()
    } else {
        format!("{}/{}", q.numer(), q.denom())
    }
}

/// Parses `p/q` or `p` (optionally signed) into an exact rational.
pub fn parse_rat(s: &str) -> Option<BigRational> {
    let s = s.trim();
    let (num, den) = match s.split_once('/') {
        Some((n, d)) => (n.trim(), d.trim()),
        None => (s, "1"),
    };
    let num: BigInt = num.parse().ok()?;
    let den: BigInt = den.parse().ok()?;
    if den == BigInt::from(0) {
        return None;
    }
    Some(BigRational::new(num, den))
}

/// Binomial coefficient for the small arguments used throughout.
pub fn binom(n: u64, k: u64) -> u64 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    (0..k).fold(1u64, |acc, i| acc * (n - i) / (i + 1))
}
