//! Parsing of inequalities such as `2x1 + x2 >= 2`, `x2>=0` or `0>=-1`.

use std::sync::LazyLock;

use anyhow::{bail, Result};
use lexcut::lex::LinearInequality;
use lexcut::rational::{parse_rational, Rational};
use num_traits::{One, Zero};
use regex::Regex;

static TERM: LazyLock<Regex> =
    LazyLock::new(|| Regex::new(r"^([+-]?)(\d+(?:/\d+|\.\d+)?)?\*?(?:x(\d+))?$").unwrap());

/// Splits a side into signed terms, keeping the sign with each term.
fn terms(side: &str) -> Vec<String> {
    let mut out = Vec::new();
    let mut cur = String::new();
    for ch in side.chars().filter(|c| !c.is_whitespace()) {
        if (ch == '+' || ch == '-') && !cur.is_empty() {
            out.push(std::mem::take(&mut cur));
        }
        cur.push(ch);
    }
    if !cur.is_empty() {
        out.push(cur);
    }
    out
}

/// Adds `sign * side` into `coeffs`/`constant`.
fn accumulate(
    side: &str,
    sign: i64,
    n: usize,
    coeffs: &mut [Rational],
    constant: &mut Rational,
) -> Result<()> {
    let parts = terms(side);
    if parts.is_empty() {
        bail!("empty side in inequality");
    }
    for t in parts {
        let Some(m) = TERM.captures(&t) else {
            bail!("cannot parse term {t:?}")
        };
        let mut v = match m.get(2) {
            Some(c) => parse_rational(c.as_str())?,
            None if m.get(3).is_some() => Rational::one(),
            None => bail!("cannot parse term {t:?}"),
        };
        if &m[1] == "-" {
            v = -v;
        }
        v *= Rational::from_integer(sign.into());
        match m.get(3) {
            Some(idx) => {
                let i: usize = idx.as_str().parse()?;
                if i == 0 || i > n {
                    bail!("variable x{i} out of range 1..={n}");
                }
                coeffs[i - 1] += v;
            }
            None => *constant += v,
        }
    }
    Ok(())
}

/// Parses `lhs >= rhs` or `lhs <= rhs` over `x1..xn` into `a x >= b`.
pub fn parse_inequality(s: &str, n: usize) -> Result<LinearInequality> {
    let (lhs, rhs, flip) = if let Some((l, r)) = s.split_once(">=") {
        (l, r, false)
    } else if let Some((l, r)) = s.split_once("<=") {
        (l, r, true)
    } else {
        bail!("inequality {s:?} needs >= or <=");
    };
    // Collect lhs - rhs as coeffs·x + constant, then a x >= -constant.
    let mut coeffs = vec![Rational::zero(); n];
    let mut constant = Rational::zero();
    accumulate(lhs, 1, n, &mut coeffs, &mut constant)?;
    accumulate(rhs, -1, n, &mut coeffs, &mut constant)?;
    let mut ineq = LinearInequality::new(coeffs, -constant);
    if flip {
        ineq = LinearInequality::new(ineq.coeffs.iter().map(|v| -v).collect(), -ineq.rhs);
    }
    Ok(ineq)
}

#[cfg(test)]
mod tests {
    use super::*;
    use lexcut::rational::{rat, rat_int};

    fn ineq(c: &[i64], r: Rational) -> LinearInequality {
        LinearInequality::new(c.iter().map(|&v| rat_int(v)).collect(), r)
    }

    #[test]
    fn spec_forms() {
        assert_eq!(
            parse_inequality("x2>=0", 2).unwrap(),
            ineq(&[0, 1], rat_int(0))
        );
        assert_eq!(
            parse_inequality("2x1+x2>=2", 2).unwrap(),
            ineq(&[2, 1], rat_int(2))
        );
        assert_eq!(
            parse_inequality("0>=-1", 2).unwrap(),
            ineq(&[0, 0], rat_int(-1))
        );
    }

    #[test]
    fn mixed_forms() {
        assert_eq!(
            parse_inequality("3 x1 + 1 x2 + 1 x3 >= 6", 3).unwrap(),
            ineq(&[3, 1, 1], rat_int(6))
        );
        assert_eq!(
            parse_inequality("x1 - 1/2*x2 <= 3/2", 2).unwrap(),
            LinearInequality::new(vec![rat_int(-1), rat(1, 2)], rat(-3, 2))
        );
        assert_eq!(
            parse_inequality("x1 >= x2 + 1", 2).unwrap(),
            ineq(&[1, -1], rat_int(1))
        );
    }

    #[test]
    fn rejects_garbage() {
        assert!(parse_inequality("x1 = 2", 2).is_err());
        assert!(parse_inequality("x3 >= 0", 2).is_err());
        assert!(parse_inequality("y1 >= 0", 2).is_err());
        assert!(parse_inequality(">= 0", 2).is_err());
    }
}
