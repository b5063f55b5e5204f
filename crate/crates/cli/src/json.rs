//! Number encodings shared by instance and trace files.
//!
//! Rationals are written as `"p/q"` strings (plain `"p"` when integral) and
//! read from JSON integers or strings. Integers are written as JSON numbers
//! when they fit in an `i64` and as decimal strings otherwise.

use std::fmt;

use lexcut::rational::{format_rational, parse_rational, Int, Rational};
use num_traits::ToPrimitive;
use serde::{Deserialize, Serialize};

#[derive(Deserialize, Serialize)]
#[serde(untagged)]
enum Raw {
    Int(i64),
    Str(String),
}

#[derive(Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "Raw", into = "String")]
pub struct Rat(pub Rational);

impl TryFrom<Raw> for Rat {
    type Error = String;

    fn try_from(r: Raw) -> Result<Self, String> {
        match r {
            Raw::Int(v) => Ok(Rat(Rational::from_integer(Int::from(v)))),
            Raw::Str(s) => parse_rational(&s).map(Rat).map_err(|e| e.to_string()),
        }
    }
}

impl From<Rat> for String {
    fn from(r: Rat) -> String {
        format_rational(&r.0)
    }
}

impl fmt::Debug for Rat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&format_rational(&self.0))
    }
}

#[derive(Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "Raw", into = "Raw")]
pub struct Integer(pub Int);

impl TryFrom<Raw> for Integer {
    type Error = String;

    fn try_from(r: Raw) -> Result<Self, String> {
        match r {
            Raw::Int(v) => Ok(Integer(Int::from(v))),
            Raw::Str(s) => s
                .trim()
                .parse::<Int>()
                .map(Integer)
                .map_err(|_| format!("cannot parse {s:?} as an integer")),
        }
    }
}

impl From<Integer> for Raw {
    fn from(v: Integer) -> Raw {
        match v.0.to_i64() {
            Some(x) => Raw::Int(x),
            None => Raw::Str(v.0.to_string()),
        }
    }
}

impl fmt::Debug for Integer {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

pub fn rats(v: &[Rat]) -> Vec<Rational> {
    v.iter().map(|r| r.0.clone()).collect()
}

pub fn ints(v: &[Integer]) -> Vec<Int> {
    v.iter().map(|r| r.0.clone()).collect()
}

pub fn to_rats(v: &[Rational]) -> Vec<Rat> {
    v.iter().cloned().map(Rat).collect()
}

pub fn to_ints(v: &[Int]) -> Vec<Integer> {
    v.iter().cloned().map(Integer).collect()
}
