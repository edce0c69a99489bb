//! Exact rationals and their `"num/den"` string form.

use std::cmp::Ordering;

use num::bigint::BigInt;
use num::{BigRational, One, Signed, Zero};

use crate::error::{Error, Result};

pub type Rational = BigRational;

/// `a/b` as a reduced rational. Panics when `b == 0`.
pub fn q(a: i64, b: i64) -> Rational {
    Rational::new(BigInt::from(a), BigInt::from(b))
}

pub fn int(a: i64) -> Rational {
    Rational::from_integer(BigInt::from(a))
}

pub fn zero() -> Rational {
    Rational::zero()
}

pub fn one() -> Rational {
    Rational::one()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ArithOp {
    Add,
    Sub,
    Mul,
    Div,
}

pub fn arith(a: &Rational, b: &Rational, op: ArithOp) -> Result<Rational> {
    Ok(match op {
        ArithOp::Add => a + b,
        ArithOp::Sub => a - b,
        ArithOp::Mul => a * b,
        ArithOp::Div => {
            if b.is_zero() {
                return Err(Error::DivisionByZero);
            }
            a / b
        }
    })
}

pub fn compare(a: &Rational, b: &Rational) -> Ordering {
    a.cmp(b)
}

pub fn to_string(r: &Rational) -> String {
    format!("{}/{}", r.numer(), r.denom())
}

pub fn parse(s: &str) -> Result<Rational> {
    let s = s.trim();
    let bad = || Error::Malformed(format!("not a rational: {s:?}"));
    match s.split_once('/') {
        Some((n, d)) => {
            let n: BigInt = n.trim().parse().map_err(|_| bad())?;
            let d: BigInt = d.trim().parse().map_err(|_| bad())?;
            if d.is_zero() {
                return Err(Error::DivisionByZero);
            }
            Ok(Rational::new(n, d))
        }
        None => Ok(Rational::from_integer(s.parse().map_err(|_| bad())?)),
    }
}

pub fn abs(r: &Rational) -> Rational {
    r.abs()
}

pub fn min(a: &Rational, b: &Rational) -> Rational {
    if a <= b {
        a.clone()
    } else {
        b.clone()
    }
}

pub fn max(a: &Rational, b: &Rational) -> Rational {
    if a >= b {
        a.clone()
    } else {
        b.clone()
    }
}

/// Lossy conversion for diagnostics only.
pub fn to_f64(r: &Rational) -> f64 {
    use num::ToPrimitive;
    r.to_f64().unwrap_or(f64::NAN)
}

// serde helpers, used via #[serde(with = "...")]

pub mod rat {
    use super::*;
    use serde::{Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(r: &Rational, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&to_string(r))
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> std::result::Result<Rational, D::Error> {
        let s = String::deserialize(d)?;
        parse(&s).map_err(serde::de::Error::custom)
    }
}

pub mod rat_vec {
    use super::*;
    use serde::{Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(v: &[Rational], s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_seq(v.iter().map(to_string))
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> std::result::Result<Vec<Rational>, D::Error> {
        let v = Vec::<String>::deserialize(d)?;
        v.iter().map(|s| parse(s).map_err(serde::de::Error::custom)).collect()
    }
}

pub mod rat_vec_vec {
    use super::*;
    use serde::{Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(v: &[Vec<Rational>], s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_seq(v.iter().map(|row| row.iter().map(to_string).collect::<Vec<_>>()))
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> std::result::Result<Vec<Vec<Rational>>, D::Error> {
        let v = Vec::<Vec<String>>::deserialize(d)?;
        v.iter().map(|row| row.iter().map(|s| parse(s).map_err(serde::de::Error::custom)).collect()).collect()
    }
}

pub mod rat_vec_vec_vec {
    use super::*;
    use serde::{Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(v: &[Vec<Vec<Rational>>], s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_seq(
            v.iter().map(|set| set.iter().map(|row| row.iter().map(to_string).collect::<Vec<_>>()).collect::<Vec<_>>()),
        )
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> std::result::Result<Vec<Vec<Vec<Rational>>>, D::Error> {
        let v = Vec::<Vec<Vec<String>>>::deserialize(d)?;
        v.iter()
            .map(|set| {
                set.iter().map(|row| row.iter().map(|s| parse(s).map_err(serde::de::Error::custom)).collect()).collect()
            })
            .collect()
    }
}
