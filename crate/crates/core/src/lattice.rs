//! Integer linear algebra for lattice bases of `Z^n`.

use std::fmt;

use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::rational::{Int, Rational};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum LatticeError {
    #[error("zero vector has no primitive normalization")]
    ZeroVector,
    #[error("vector entries are not relatively prime (gcd {0})")]
    NotPrimitive(Int),
    #[error("matrix must be square with at least one row")]
    NotSquare,
    #[error("basis not unimodular (determinant {0})")]
    NotUnimodular(Int),
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },
}

/// Divides `v` by the gcd of its entries, keeping signs.
pub fn gcd_normalize(v: &[Int]) -> Result<(Vec<Int>, Int), LatticeError> {
    let g = v.iter().fold(Int::zero(), |acc, x| acc.gcd(x));
    if g.is_zero() {
        return Err(LatticeError::ZeroVector);
    }
    Ok((v.iter().map(|x| x / &g).collect(), g))
}

/// Square integer matrix stored row-major.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct IntMatrix {
    n: usize,
    data: Vec<Int>,
}

impl IntMatrix {
    pub fn from_rows(rows: Vec<Vec<Int>>) -> Result<Self, LatticeError> {
        let n = rows.len();
        if n == 0 || rows.iter().any(|r| r.len() != n) {
            return Err(LatticeError::NotSquare);
        }
        Ok(Self {
            n,
            data: rows.into_iter().flatten().collect(),
        })
    }

    pub fn from_i64(rows: &[&[i64]]) -> Result<Self, LatticeError> {
        Self::from_rows(
            rows.iter()
                .map(|r| r.iter().map(|&x| Int::from(x)).collect())
                .collect(),
        )
    }

    pub fn identity(n: usize) -> Self {
        let mut data = vec![Int::zero(); n * n];
        for i in 0..n {
            data[i * n + i] = Int::one();
        }
        Self { n, data }
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn get(&self, i: usize, j: usize) -> &Int {
        &self.data[i * self.n + j]
    }

    pub fn row(&self, i: usize) -> &[Int] {
        &self.data[i * self.n..(i + 1) * self.n]
    }

    pub fn rows(&self) -> impl Iterator<Item = &[Int]> {
        self.data.chunks(self.n)
    }

    pub fn to_rows(&self) -> Vec<Vec<Int>> {
        self.rows().map(|r| r.to_vec()).collect()
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a != b {
            for j in 0..self.n {
                self.data.swap(a * self.n + j, b * self.n + j);
            }
        }
    }

    /// `row[dst] += q * row[src]`
    fn add_row_multiple(&mut self, dst: usize, src: usize, q: &Int) {
        for j in 0..self.n {
            let v = &self.data[src * self.n + j] * q;
            self.data[dst * self.n + j] += v;
        }
    }

    fn negate_row(&mut self, i: usize) {
        for j in 0..self.n {
            let v = &mut self.data[i * self.n + j];
            *v = -std::mem::take(v);
        }
    }

    pub fn mul_int(&self, x: &[Int]) -> Vec<Int> {
        assert_eq!(x.len(), self.n);
        self.rows()
            .map(|r| r.iter().zip(x).map(|(a, b)| a * b).sum())
            .collect()
    }

    pub fn mul_rat(&self, x: &[Rational]) -> Vec<Rational> {
        assert_eq!(x.len(), self.n);
        self.rows()
            .map(|r| crate::rational::dot_int(r, x))
            .collect()
    }
}

impl fmt::Debug for IntMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_list().entries(self.rows()).finish()
    }
}

/// Fraction-free (Bareiss) elimination; every intermediate division is exact.
pub fn det_integer(m: &IntMatrix) -> Int {
    let n = m.n;
    let mut a: Vec<Vec<Int>> = m.to_rows();
    let mut sign = Int::one();
    let mut prev = Int::one();
    for k in 0..n - 1 {
        if a[k][k].is_zero() {
            match (k + 1..n).find(|&i| !a[i][k].is_zero()) {
                Some(i) => {
                    a.swap(k, i);
                    sign = -sign;
                }
                None => return Int::zero(),
            }
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let v = (&a[i][j] * &a[k][k] - &a[i][k] * &a[k][j]) / &prev;
                a[i][j] = v;
            }
        }
        prev = a[k][k].clone();
    }
    sign * &a[n - 1][n - 1]
}

pub fn is_unimodular(m: &IntMatrix) -> bool {
    det_integer(m).abs().is_one()
}

/// Extends a primitive vector to a unimodular matrix whose first row is `c`.
///
/// Reduces `c` to `e1` with extended-gcd column operations (pivot: smallest
/// nonzero magnitude, leftmost on ties) while applying the inverse operations
/// to the rows of an identity matrix.
pub fn complete_basis(c: &[Int]) -> Result<LatticeBasis, LatticeError> {
    let (_, g) = gcd_normalize(c)?;
    if !g.is_one() {
        return Err(LatticeError::NotPrimitive(g));
    }
    let n = c.len();
    let mut v = c.to_vec();
    let mut inv = IntMatrix::identity(n);
    loop {
        let pivot = (0..n)
            .filter(|&i| !v[i].is_zero())
            .min_by(|&a, &b| v[a].abs().cmp(&v[b].abs()).then(a.cmp(&b)))
            .expect("nonzero vector");
        let mut reduced = false;
        for j in 0..n {
            if j == pivot || v[j].is_zero() {
                continue;
            }
            let q = &v[j] / &v[pivot];
            if q.is_zero() {
                continue;
            }
            let step = &q * &v[pivot];
            v[j] -= step;
            inv.add_row_multiple(pivot, j, &q);
            reduced = true;
        }
        if !reduced {
            if v[pivot].is_negative() {
                v[pivot] = -std::mem::take(&mut v[pivot]);
                inv.negate_row(pivot);
            }
            inv.swap_rows(0, pivot);
            break;
        }
    }
    debug_assert_eq!(inv.row(0), c);
    LatticeBasis::new(inv)
}

/// The rows `c^1..c^n` of a unimodular matrix, with its integer inverse cached.
#[derive(Clone, PartialEq, Eq)]
pub struct LatticeBasis {
    matrix: IntMatrix,
    inverse: IntMatrix,
}

impl LatticeBasis {
    pub fn new(matrix: IntMatrix) -> Result<Self, LatticeError> {
        let det = det_integer(&matrix);
        if !det.abs().is_one() {
            return Err(LatticeError::NotUnimodular(det));
        }
        let inverse = integer_inverse(&matrix);
        Ok(Self { matrix, inverse })
    }

    pub fn standard(n: usize) -> Self {
        Self {
            matrix: IntMatrix::identity(n),
            inverse: IntMatrix::identity(n),
        }
    }

    /// Default basis for an objective: `complete_basis(gcd_normalize(c))`.
    pub fn for_objective(c: &[Int]) -> Result<Self, LatticeError> {
        complete_basis(&gcd_normalize(c)?.0)
    }

    pub fn dim(&self) -> usize {
        self.matrix.n
    }

    pub fn matrix(&self) -> &IntMatrix {
        &self.matrix
    }

    pub fn inverse(&self) -> &IntMatrix {
        &self.inverse
    }

    /// Row `c^{i+1}` (zero-based index).
    pub fn row(&self, i: usize) -> &[Int] {
        self.matrix.row(i)
    }

    pub fn is_standard(&self) -> bool {
        self.matrix == IntMatrix::identity(self.dim())
    }

    /// `Cx`, the coordinates of `x` in the basis functionals.
    pub fn values(&self, x: &[Rational]) -> Vec<Rational> {
        self.matrix.mul_rat(x)
    }

    pub fn values_int(&self, x: &[Int]) -> Vec<Int> {
        self.matrix.mul_int(x)
    }

    pub fn check_dim(&self, len: usize) -> Result<(), LatticeError> {
        if len == self.dim() {
            Ok(())
        } else {
            Err(LatticeError::DimensionMismatch {
                expected: self.dim(),
                got: len,
            })
        }
    }

    /// The point `x` with `Cx = y`.
    pub fn point_from_values(&self, y: &[Rational]) -> Vec<Rational> {
        self.inverse.mul_rat(y)
    }
}

impl fmt::Debug for LatticeBasis {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.matrix.fmt(f)
    }
}

/// Unique integer solution of `Cx = rhs`.
pub fn solve_unimodular(basis: &LatticeBasis, rhs: &[Int]) -> Vec<Int> {
    basis.inverse.mul_int(rhs)
}

fn integer_inverse(m: &IntMatrix) -> IntMatrix {
    let n = m.n;
    let mut a: Vec<Vec<Rational>> = m
        .rows()
        .enumerate()
        .map(|(i, r)| {
            let mut row: Vec<Rational> = r.iter().cloned().map(Rational::from_integer).collect();
            row.extend((0..n).map(|j| {
                if i == j {
                    Rational::one()
                } else {
                    Rational::zero()
                }
            }));
            row
        })
        .collect();
    for col in 0..n {
        let p = (col..n)
            .find(|&i| !a[i][col].is_zero())
            .expect("unimodular matrix is invertible");
        a.swap(col, p);
        let piv = a[col][col].clone();
        for v in a[col].iter_mut() {
            *v /= &piv;
        }
        for i in 0..n {
            if i != col && !a[i][col].is_zero() {
                let f = a[i][col].clone();
                for j in 0..2 * n {
                    let d = &f * &a[col][j];
                    a[i][j] -= d;
                }
            }
        }
    }
    IntMatrix {
        n,
        data: a
            .into_iter()
            .flat_map(|r| r.into_iter().skip(n))
            .map(|v| {
                debug_assert!(v.is_integer());
                v.to_integer()
            })
            .collect(),
    }
}
