//! Rational helpers on top of `BigRational`.

use alloc::string::String;
use alloc::format;
use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

pub type Q = BigRational;

pub fn q(n: i64) -> Q {
    Q::from_integer(BigInt::from(n))
}

pub fn qf(n: i64, d: i64) -> Q {
    Q::new(BigInt::from(n), BigInt::from(d))
}

pub fn floor_i64(x: &Q) -> i64 {
    x.floor().to_integer().to_i64().expect("floor out of range")
}

/// `Some(n)` when `x` is an integer that fits.
pub fn as_i64(x: &Q) -> Option<i64> {
    if x.is_integer() {
        x.to_integer().to_i64()
    } else {
        None
    }
}

pub fn as_nat(x: &Q) -> Option<u64> {
    if x.is_integer() && !x.is_negative() {
        x.to_integer().to_u64()
    } else {
        None
    }
}

pub fn factorial(n: u64) -> BigInt {
    let mut r = BigInt::one();
    for k in 2..=n {
        r *= k;
    }
    r
}

pub fn lcm_den<'a>(it: impl IntoIterator<Item = &'a Q>) -> BigInt {
    let mut l = BigInt::one();
    for x in it {
        l = l.lcm(x.denom());
    }
    l
}

/// Parses `a`, `-a`, `a/b`.
pub fn parse_q(s: &str) -> Option<Q> {
    let s = s.trim();
    let (n, d) = match s.split_once('/') {
        Some((n, d)) => (n.trim(), d.trim()),
        None => (s, "1"),
    };
    let n: BigInt = n.parse().ok()?;
    let d: BigInt = d.parse().ok()?;
    if d.is_zero() {
        return None;
    }
    Some(Q::new(n, d))
}

pub fn show_q(x: &Q) -> String {
    if x.is_integer() {
        format!("{}", x.numer())
    } else {
        format!("{}/{}", x.numer(), x.denom())
    }
}

pub fn sign(x: &Q) -> i32 {
    if x.is_zero() {
        0
    } else if x.is_positive() {
        1
    } else {
        -1
    }
}
