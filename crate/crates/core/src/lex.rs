//! Lexicographic orderings induced by a lattice basis, lex-rounding, lex-cuts
//! and the inequality description of `Q(x̄) = conv{x ∈ K ∩ Z^n : x ⪰ x̄}`.
//!
//! Indices `k` are one-based throughout this module, matching the usual
//! numbering of the basis rows `c^1..c^n`.

use std::cmp::Ordering;
use std::fmt;

use num_traits::{One, Signed, Zero};

use crate::lattice::{solve_unimodular, LatticeBasis, LatticeError};
use crate::rational::{ceil, from_int, ints_to_rats, Int, Rational};

pub type Point = Vec<Rational>;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum LexError {
    #[error(transparent)]
    Lattice(#[from] LatticeError),
    #[error("point is zero")]
    ZeroPoint,
    #[error("point lies outside the cone K (c^{index} x < 0)")]
    OutsideCone { index: usize },
    #[error("c^{index} x is not integral")]
    NonIntegerProducts { index: usize },
    #[error("index {k} out of range 1..={n}")]
    IndexOutOfRange { k: usize, n: usize },
}

/// The halfspace `coeffs · x >= rhs`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct LinearInequality {
    pub coeffs: Vec<Rational>,
    pub rhs: Rational,
}

impl LinearInequality {
    pub fn new(coeffs: Vec<Rational>, rhs: Rational) -> Self {
        Self { coeffs, rhs }
    }

    pub fn from_ints(coeffs: &[Int], rhs: Int) -> Self {
        Self::new(ints_to_rats(coeffs), Rational::from_integer(rhs))
    }

    pub fn dim(&self) -> usize {
        self.coeffs.len()
    }

    pub fn lhs(&self, x: &[Rational]) -> Rational {
        crate::rational::dot(&self.coeffs, x)
    }

    /// `coeffs · x - rhs`; nonnegative iff `x` satisfies the inequality.
    pub fn slack(&self, x: &[Rational]) -> Rational {
        self.lhs(x) - &self.rhs
    }

    pub fn is_satisfied(&self, x: &[Rational]) -> bool {
        !self.slack(x).is_negative()
    }

    pub fn is_trivial(&self) -> bool {
        self.coeffs.iter().all(Zero::is_zero)
    }

    /// Same inequality on the translated variable `x' = x - t`.
    pub fn translate(&self, t: &[Rational]) -> Self {
        Self::new(self.coeffs.clone(), &self.rhs - self.lhs(t))
    }

    /// Whether both inequalities define the same halfspace (positive scaling).
    pub fn same_halfspace(&self, other: &Self) -> bool {
        if self.dim() != other.dim() {
            return false;
        }
        if self.is_trivial() || other.is_trivial() {
            return self.is_trivial()
                && other.is_trivial()
                && self.rhs.is_positive() == other.rhs.is_positive();
        }
        let Some(p) = self.coeffs.iter().position(|v| !v.is_zero()) else {
            return false;
        };
        if other.coeffs[p].is_zero() {
            return false;
        }
        let scale = &other.coeffs[p] / &self.coeffs[p];
        scale.is_positive()
            && self
                .coeffs
                .iter()
                .zip(&other.coeffs)
                .all(|(a, b)| a * &scale == *b)
            && &self.rhs * &scale == other.rhs
    }
}

impl fmt::Debug for LinearInequality {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

/// Renders as `3 x1 + 1 x2 + 1 x3 >= 6`; a lone unit term prints as `x1 >= 0`.
impl fmt::Display for LinearInequality {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        use crate::rational::format_rational;
        let terms: Vec<(usize, &Rational)> = self
            .coeffs
            .iter()
            .enumerate()
            .filter(|(_, v)| !v.is_zero())
            .collect();
        if terms.is_empty() {
            write!(f, "0")?;
        } else if terms.len() == 1 && terms[0].1.abs().is_one() {
            let sign = if terms[0].1.is_negative() { "-" } else { "" };
            write!(f, "{sign}x{}", terms[0].0 + 1)?;
        } else {
            for (pos, (i, v)) in terms.iter().enumerate() {
                match (pos, v.is_negative()) {
                    (0, _) => write!(f, "{} x{}", format_rational(v), i + 1)?,
                    (_, true) => write!(f, " - {} x{}", format_rational(&-*v), i + 1)?,
                    (_, false) => write!(f, " + {} x{}", format_rational(v), i + 1)?,
                }
            }
        }
        write!(f, " >= {}", format_rational(&self.rhs))
    }
}

/// The `k`-th lex-cut: `Σ_{i≤k} d_i c^i x >= Σ_{i≤k} d_i c^i x̄`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LexCut {
    pub k: usize,
    pub d: Vec<Int>,
    pub inequality: LinearInequality,
}

fn check_k(k: usize, n: usize) -> Result<(), LexError> {
    if (1..=n).contains(&k) {
        Ok(())
    } else {
        Err(LexError::IndexOutOfRange { k, n })
    }
}

fn check_cone(values: &[Rational]) -> Result<(), LexError> {
    match values.iter().position(Signed::is_negative) {
        Some(i) => Err(LexError::OutsideCone { index: i + 1 }),
        None => Ok(()),
    }
}

pub fn lex_cmp(basis: &LatticeBasis, x: &[Rational], y: &[Rational]) -> Result<Ordering, LexError> {
    basis.check_dim(x.len())?;
    basis.check_dim(y.len())?;
    for i in 0..basis.dim() {
        let a = crate::rational::dot_int(basis.row(i), x);
        let b = crate::rational::dot_int(basis.row(i), y);
        match a.cmp(&b) {
            Ordering::Equal => continue,
            ord => return Ok(ord),
        }
    }
    Ok(Ordering::Equal)
}

/// `ℓ(x)`: the largest one-based index with `c^i x > 0`.
pub fn leading_index(basis: &LatticeBasis, x: &[Rational]) -> Result<usize, LexError> {
    basis.check_dim(x.len())?;
    let values = basis.values(x);
    check_cone(&values)?;
    values
        .iter()
        .rposition(Signed::is_positive)
        .map(|i| i + 1)
        .ok_or(LexError::ZeroPoint)
}

/// Lex-rounding on basis coordinates: keeps the integral prefix, rounds up
/// the first fractional value and zeroes the rest.
pub fn round_up_values(values: &[Rational]) -> Result<Vec<Int>, LexError> {
    check_cone(values)?;
    let mut out = Vec::with_capacity(values.len());
    for v in values {
        if v.is_integer() {
            out.push(v.to_integer());
        } else {
            out.push(ceil(v));
            out.resize(values.len(), Int::zero());
            break;
        }
    }
    Ok(out)
}

/// `x↑`, the lex-smallest integer point of `K` that is `⪰ x`.
pub fn round_up_lex(basis: &LatticeBasis, x: &[Rational]) -> Result<Vec<Int>, LexError> {
    basis.check_dim(x.len())?;
    let up = round_up_values(&basis.values(x))?;
    Ok(solve_unimodular(basis, &up))
}

/// Index of the first non-integral value, one-based.
pub fn first_fractional(values: &[Rational]) -> Option<usize> {
    values.iter().position(|v| !v.is_integer()).map(|i| i + 1)
}

fn integral_values(basis: &LatticeBasis, xbar: &[Int]) -> Result<Vec<Rational>, LexError> {
    basis.check_dim(xbar.len())?;
    let values = ints_to_rats(&basis.values_int(xbar));
    check_cone(&values)?;
    Ok(values)
}

/// Multipliers `d^k_1..d^k_k` computed from basis coordinates whose first
/// `k-1` entries are integral; the `k`-th enters through its ceiling.
fn multipliers(values: &[Rational], k: usize) -> Result<Vec<Int>, LexError> {
    check_k(k, values.len())?;
    let prefix: Vec<Int> = values[..k - 1]
        .iter()
        .enumerate()
        .map(|(i, v)| {
            v.is_integer()
                .then(|| v.to_integer())
                .ok_or(LexError::NonIntegerProducts { index: i + 1 })
        })
        .collect::<Result<_, _>>()?;
    let mut d = vec![Int::zero(); k];
    d[k - 1] = Int::one();
    if k >= 2 {
        d[k - 2] = ceil(&values[k - 1]);
        for i in (0..k - 2).rev() {
            d[i] = &d[i + 1] * (&prefix[i + 1] + 1);
        }
    }
    Ok(d)
}

pub fn lexcut_coeffs(basis: &LatticeBasis, xbar: &[Int], k: usize) -> Result<Vec<Int>, LexError> {
    let values = integral_values(basis, xbar)?;
    multipliers(&values, k)
}

/// Builds the cut from basis coordinates `values = C x̄`.
///
/// With integral `values` this is the ordinary `k`-th lex-cut of `x̄`. When
/// `values[k-1]` is fractional it is the cut of the cutting-plane loop, which
/// coincides with the `k`-th lex-cut of `x̄↑`.
pub fn lexcut_from_values(
    basis: &LatticeBasis,
    values: &[Rational],
    k: usize,
) -> Result<LexCut, LexError> {
    basis.check_dim(values.len())?;
    check_cone(values)?;
    let d = multipliers(values, k)?;
    let n = basis.dim();
    let mut coeffs = vec![Int::zero(); n];
    let mut rhs = Int::zero();
    for (i, di) in d.iter().enumerate() {
        for (c, b) in coeffs.iter_mut().zip(basis.row(i)) {
            *c += di * b;
        }
        let vi = if i + 1 == k {
            ceil(&values[i])
        } else {
            values[i].to_integer()
        };
        rhs += di * vi;
    }
    Ok(LexCut {
        k,
        d,
        inequality: LinearInequality::from_ints(&coeffs, rhs),
    })
}

pub fn lexcut(basis: &LatticeBasis, xbar: &[Int], k: usize) -> Result<LexCut, LexError> {
    let values = integral_values(basis, xbar)?;
    lexcut_from_values(basis, &values, k)
}

/// Cutting-plane form for a possibly fractional `x̄`; `k` must not exceed the
/// first index where `c^k x̄` is fractional.
pub fn lexcut_frac(basis: &LatticeBasis, xbar: &[Rational], k: usize) -> Result<LexCut, LexError> {
    basis.check_dim(xbar.len())?;
    lexcut_from_values(basis, &basis.values(xbar), k)
}

/// Vertices `v^1..v^{ℓ(x̄)}` of `Q(x̄)`.
pub fn extreme_points(basis: &LatticeBasis, xbar: &[Int]) -> Result<Vec<Vec<Int>>, LexError> {
    let values = integral_values(basis, xbar)?;
    let lead = values
        .iter()
        .rposition(Signed::is_positive)
        .ok_or(LexError::ZeroPoint)?
        + 1;
    let y: Vec<Int> = values.iter().map(|v| v.to_integer()).collect();
    let mut out = Vec::with_capacity(lead);
    for k in 1..lead {
        let mut target = y.clone();
        target[k - 1] += 1;
        for t in target.iter_mut().skip(k) {
            *t = Int::zero();
        }
        out.push(solve_unimodular(basis, &target));
    }
    out.push(xbar.to_vec());
    Ok(out)
}

/// Cone inequalities `c^i x >= 0`.
pub fn cone_inequalities(basis: &LatticeBasis) -> Vec<LinearInequality> {
    (0..basis.dim())
        .map(|i| LinearInequality::from_ints(basis.row(i), Int::zero()))
        .collect()
}

/// The `n` lex-cuts of `x̄` followed by the `n` cone inequalities.
///
/// For `x̄ = 0` only the cone is returned. With `trim`, lex-cuts that
/// coincide with a cone inequality are dropped, as is `c^1 x >= 0` when the
/// first lex-cut dominates it.
pub fn q_description(
    basis: &LatticeBasis,
    xbar: &[Int],
    trim: bool,
) -> Result<Vec<LinearInequality>, LexError> {
    let values = integral_values(basis, xbar)?;
    if values.iter().all(Zero::is_zero) {
        return Ok(cone_inequalities(basis));
    }
    let n = basis.dim();
    let mut out = Vec::with_capacity(2 * n);
    for k in 1..=n {
        if trim && values[k - 1].is_zero() {
            continue;
        }
        out.push(lexcut_from_values(basis, &values, k)?.inequality);
    }
    for (i, ineq) in cone_inequalities(basis).into_iter().enumerate() {
        if trim && i == 0 && values[0].is_positive() {
            continue;
        }
        out.push(ineq);
    }
    Ok(out)
}

pub fn satisfies_all(ineqs: &[LinearInequality], x: &[Rational]) -> bool {
    ineqs.iter().all(|h| h.is_satisfied(x))
}

pub fn int_point(x: &[Int]) -> Point {
    x.iter().map(from_int).collect()
}
