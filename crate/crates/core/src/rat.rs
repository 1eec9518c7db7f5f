//! Exact rational scalars and their string form.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde_json::Value;
use std::str::FromStr;

use crate::error::{Error, Result};

pub type Q = BigRational;

pub fn q(n: i64) -> Q {
    Q::from_integer(BigInt::from(n))
}

pub fn qf(n: i64, d: i64) -> Q {
    Q::new(BigInt::from(n), BigInt::from(d))
}

pub fn parse_q(s: &str) -> Result<Q> {
    let t = s.trim();
    Q::from_str(t).map_err(|_| Error::invalid(format!("not a rational number: {t:?}")))
}

/// Formats as `p` or `p/q`, the interchange form used in JSON.
pub fn fmt_q(x: &Q) -> String {
    x.to_string()
}

/// Reads a JSON rational: a `"p/q"` string or an integer.
pub fn read_q(x: &Value) -> Result<Q> {
    match x {
        Value::String(s) => parse_q(s),
        Value::Number(n) => n.as_i64().map(q).ok_or_else(|| Error::invalid(format!("not an exact rational: {n}"))),
        other => Err(Error::invalid(format!("not a rational: {other}"))),
    }
}

pub fn is_integer(x: &Q) -> bool {
    x.denom().is_one()
}

pub fn lcm_of_denoms<'a>(xs: impl IntoIterator<Item = &'a Q>) -> BigInt {
    let mut l = BigInt::one();
    for x in xs {
        l = l.lcm(x.denom());
    }
    l
}

/// Scales a rational vector to a primitive integer vector (content 1, sign
/// preserved). The zero vector maps to itself.
pub fn primitive_integer_vector(v: &[Q]) -> Vec<BigInt> {
    let l = lcm_of_denoms(v.iter());
    let ints: Vec<BigInt> = v.iter().map(|x| (x * Q::from_integer(l.clone())).to_integer()).collect();
    let mut g = BigInt::zero();
    for x in &ints {
        g = g.gcd(x);
    }
    if g.is_zero() {
        return ints;
    }
    ints.into_iter().map(|x| x / &g).collect()
}

pub fn abs(x: &Q) -> Q {
    x.abs()
}
