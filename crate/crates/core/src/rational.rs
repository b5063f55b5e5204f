//! Exact scalars.
//!
//! Every quantity the solver reasons about is a [`Rational`] backed by
//! arbitrary-precision integers, always kept in lowest terms with a positive
//! denominator.

use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer as _;
use num_traits::{One, Signed, ToPrimitive, Zero};

pub type Int = BigInt;
pub type Rational = num_rational::BigRational;

pub fn int(v: i64) -> Int {
    Int::from(v)
}

pub fn rat(num: i64, den: i64) -> Rational {
    Rational::new(Int::from(num), Int::from(den))
}

pub fn rat_int(v: i64) -> Rational {
    Rational::from_integer(Int::from(v))
}

pub fn from_int(v: &Int) -> Rational {
    Rational::from_integer(v.clone())
}

pub fn ceil(v: &Rational) -> Int {
    v.ceil().to_integer()
}

pub fn floor(v: &Rational) -> Int {
    v.floor().to_integer()
}

pub fn ints_to_rats(v: &[Int]) -> Vec<Rational> {
    v.iter().map(from_int).collect()
}

pub fn rats_to_ints(v: &[Rational]) -> Option<Vec<Int>> {
    v.iter()
        .map(|x| x.is_integer().then(|| x.to_integer()))
        .collect()
}

pub fn dot(a: &[Rational], b: &[Rational]) -> Rational {
    debug_assert_eq!(a.len(), b.len());
    a.iter()
        .zip(b)
        .fold(Rational::zero(), |acc, (x, y)| acc + x * y)
}

pub fn dot_int(a: &[Int], b: &[Rational]) -> Rational {
    debug_assert_eq!(a.len(), b.len());
    a.iter()
        .zip(b)
        .fold(Rational::zero(), |acc, (x, y)| acc + y * x)
}

pub fn to_f64(v: &Rational) -> f64 {
    v.to_f64().unwrap_or(f64::NAN)
}

/// Nearest rational with denominator `2^bits` to a finite float.
pub fn dyadic(v: f64, bits: u32) -> Rational {
    let scale = (1u64 << bits) as f64;
    let num = (v * scale).round();
    Rational::new(Int::from(num as i128), Int::from(1u64 << bits))
}

/// Decimal approximation of a rational with `digits` fractional digits.
pub fn to_decimal(v: &Rational, digits: usize) -> String {
    let scale = num_traits::pow(Int::from(10), digits);
    let scaled = (v * Rational::from_integer(scale.clone()))
        .round()
        .to_integer();
    let neg = scaled.is_negative();
    let abs = scaled.abs();
    let (whole, frac) = abs.div_rem(&scale);
    let mut s = String::new();
    if neg {
        s.push('-');
    }
    s.push_str(&whole.to_string());
    if digits > 0 {
        s.push('.');
        s.push_str(&format!("{:0>width$}", frac.to_string(), width = digits));
    }
    s
}

/// Exact `p/q` (or plain `p`) rendering.
pub fn format_rational(v: &Rational) -> String {
    if v.denom().is_one() {
        v.numer().to_string()
    } else {
        format!("{}/{}", v.numer(), v.denom())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("cannot parse {input:?} as a rational")]
pub struct ParseRationalError {
    pub input: String,
}

/// Parses `p`, `p/q` or a finite decimal such as `-0.25` or `1e-9`.
pub fn parse_rational(s: &str) -> Result<Rational, ParseRationalError> {
    let err = || ParseRationalError {
        input: s.to_string(),
    };
    let t = s.trim();
    if t.is_empty() {
        return Err(err());
    }
    if let Some((p, q)) = t.split_once('/') {
        let p = Int::from_str(p.trim()).map_err(|_| err())?;
        let q = Int::from_str(q.trim()).map_err(|_| err())?;
        if q.is_zero() {
            return Err(err());
        }
        return Ok(Rational::new(p, q));
    }
    if let Ok(p) = Int::from_str(t) {
        return Ok(Rational::from_integer(p));
    }
    parse_decimal(t).ok_or_else(err)
}

fn parse_decimal(t: &str) -> Option<Rational> {
    let (mantissa, exp) = match t.find(['e', 'E']) {
        Some(i) => (&t[..i], t[i + 1..].parse::<i32>().ok()?),
        None => (t, 0),
    };
    let (neg, body) = match mantissa.strip_prefix('-') {
        Some(rest) => (true, rest),
        None => (false, mantissa.strip_prefix('+').unwrap_or(mantissa)),
    };
    let (whole, frac) = body.split_once('.').unwrap_or((body, ""));
    if whole.is_empty() && frac.is_empty() {
        return None;
    }
    if !whole
        .chars()
        .chain(frac.chars())
        .all(|c| c.is_ascii_digit())
    {
        return None;
    }
    let digits = format!("{whole}{frac}");
    let mut value = Rational::from_integer(Int::from_str(&digits).ok()?);
    let shift = exp - frac.len() as i32;
    let ten = Rational::from_integer(Int::from(10));
    if shift >= 0 {
        value *= num_traits::pow(ten, shift as usize);
    } else {
        value /= num_traits::pow(ten, (-shift) as usize);
    }
    Some(if neg { -value } else { value })
}

/// Display adaptor for a rational vector: `(1,3/2,0)`.
pub struct Tuple<'a>(pub &'a [Rational]);

impl fmt::Display for Tuple<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, v) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{}", format_rational(v))?;
        }
        write!(f, ")")
    }
}
