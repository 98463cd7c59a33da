//! Exact rational scalars.
//!
//! `Rat` is a canonical-form big rational: always gcd-reduced with a positive
//! denominator, so equality is structural and `to_string`/`parse` round-trip.
//! The textual form is `"p/q"`, or just `"p"` when the denominator is 1.

use crate::error::{Error, Result};
use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use std::str::FromStr;

pub type Rat = num_rational::BigRational;

/// Integer as a rational.
pub fn rat_int(n: i64) -> Rat {
    Rat::from_integer(BigInt::from(n))
}

/// `n/d` as a canonical rational. Panics if `d == 0` (use only with literals).
pub fn rat(n: i64, d: i64) -> Rat {
    Rat::new(BigInt::from(n), BigInt::from(d))
}

/// Checked division: error instead of panic on a zero divisor.
pub fn checked_div(a: &Rat, b: &Rat) -> Result<Rat> {
    if b.is_zero() {
        return Err(Error::DivisionByZero);
    }
    Ok(a / b)
}

/// Canonical string form, `"p/q"` or `"p"`.
pub fn rat_string(x: &Rat) -> String {
    x.to_string()
}

/// Parse `"p/q"` or `"p"`, rejecting zero denominators and garbage.
pub fn parse_rat(s: &str) -> Result<Rat> {
    let t = s.trim();
    match t.split_once('/') {
        Some((_, d)) => {
            let dt = d.trim();
            if let Ok(di) = BigInt::from_str(dt) {
                if di.is_zero() {
                    return Err(Error::Invalid(format!("zero denominator in `{t}`")));
                }
            }
        }
        None => {}
    }
    Rat::from_str(t).map_err(|e| Error::Invalid(format!("bad rational `{t}`: {e}")))
}

/// True if `x` is an integer.
pub fn is_integer(x: &Rat) -> bool {
    x.denom().is_one()
}

/// Absolute value.
pub fn rat_abs(x: &Rat) -> Rat {
    if x.is_negative() {
        -x.clone()
    } else {
        x.clone()
    }
}
