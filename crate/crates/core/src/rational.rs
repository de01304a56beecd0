//! Exact rational scalars.
//!
//! The ground field is Q with arbitrary-precision integers.  Values are kept
//! reduced (gcd 1, positive denominator) by the underlying representation, so
//! structural equality is semantic equality.

use crate::error::{Error, Result};
use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use std::str::FromStr;

pub type Rational = num_rational::BigRational;

/// Rational from an integer.
pub fn rat(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

/// Rational from a numerator/denominator pair.  Panics on zero denominator.
pub fn ratio(num: i64, den: i64) -> Rational {
    assert!(den != 0, "zero denominator");
    Rational::new(BigInt::from(num), BigInt::from(den))
}

/// Parse `n` or `n/d` with optional sign, e.g. `3`, `-1/2`, `+7/3`.
pub fn parse_rational(input: &str) -> Result<Rational> {
    let s = input.trim().strip_prefix('+').unwrap_or(input.trim());
    Rational::from_str(s).map_err(|e| Error::Parse(format!("bad rational {input:?}: {e}")))
}

/// Render reduced, `n` when the denominator is 1, `n/d` otherwise.
pub fn render_rational(q: &Rational) -> String {
    if q.denom().is_one() {
        q.numer().to_string()
    } else {
        format!("{}/{}", q.numer(), q.denom())
    }
}

/// Binomial coefficient C(n, k) as a rational (used for multiset splittings).
pub fn binomial(n: u64, k: u64) -> Rational {
    if k > n {
        return Rational::zero();
    }
    let mut acc = BigInt::one();
    for i in 0..k {
        acc *= BigInt::from(n - i);
        acc /= BigInt::from(i + 1);
    }
    Rational::from_integer(acc)
}

/// True iff the value is a (possibly negative) integer.
pub fn is_integer(q: &Rational) -> bool {
    q.denom().is_one()
}

/// Absolute value.
pub fn rat_abs(q: &Rational) -> Rational {
    q.abs()
}
