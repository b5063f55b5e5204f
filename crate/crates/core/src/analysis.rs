//! Cut comparison and enumeration helpers: CG inequalities as lex-cuts,
//! split-cut validity, `S↑`, `V(S)`, and a brute-force integer optimizer used
//! as an independent reference.

use std::cmp::Ordering;

use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::lattice::{complete_basis, gcd_normalize, solve_unimodular, LatticeBasis};
use crate::lex::{
    extreme_points, int_point, q_description, round_up_lex, satisfies_all, LexCut, LexError,
    LinearInequality,
};
use crate::oracle::{FeasibleSet, LinearQuery, OracleResult, PointCloud};
use crate::rational::{ceil, floor, from_int, ints_to_rats, Int, Rational};
use crate::solver::{BoundRounding, IterationStatus, Outcome, SolveError, SolveOptions, Solver};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum AnalysisError {
    #[error("rounded inequality is already valid for the set")]
    NotProper,
    #[error(
        "g x >= gamma is not valid for the set (minimum {0}); gamma must be the exact minimum"
    )]
    NotApplicable(String),
    #[error("g has a non-integer entry")]
    NonIntegerG,
    #[error("split vector is zero")]
    ZeroPi,
    #[error("norm bound must be at least 1")]
    BadNormBound,
    #[error("enumeration box has {0} cells, above the cap")]
    BoxTooLarge(u128),
    #[error("lex-cut {got} does not match the rounded inequality {want}")]
    Mismatch { got: String, want: String },
    #[error(transparent)]
    Solve(#[from] SolveError),
    #[error(transparent)]
    Lex(#[from] LexError),
}

impl From<crate::oracle::OracleError> for AnalysisError {
    fn from(e: crate::oracle::OracleError) -> Self {
        AnalysisError::Solve(e.into())
    }
}

impl From<crate::lattice::LatticeError> for AnalysisError {
    fn from(e: crate::lattice::LatticeError) -> Self {
        AnalysisError::Solve(e.into())
    }
}

/// `πx <= π0  ∨  πx >= π0 + 1`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct SplitDisjunction {
    pub pi: Vec<Int>,
    pub pi0: Int,
}

impl SplitDisjunction {
    pub fn new(pi: Vec<Int>, pi0: Int) -> Result<Self, AnalysisError> {
        if pi.iter().all(Zero::is_zero) {
            return Err(AnalysisError::ZeroPi);
        }
        Ok(Self { pi, pi0 })
    }

    /// `{πx <= π0}` and `{πx >= π0 + 1}` as `>=` rows.
    pub fn sides(&self) -> [LinearInequality; 2] {
        let pi = ints_to_rats(&self.pi);
        [
            LinearInequality::new(pi.iter().map(|v| -v).collect(), -from_int(&self.pi0)),
            LinearInequality::new(pi, from_int(&(&self.pi0 + 1))),
        ]
    }
}

/// `g x >= ⌈γ⌉` derived from `g x >= γ`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CgInequality {
    pub g: Vec<Int>,
    pub gamma: Rational,
}

impl CgInequality {
    pub fn new(g: Vec<Int>, gamma: Rational) -> Self {
        Self { g, gamma }
    }

    pub fn from_rationals(g: &[Rational], gamma: Rational) -> Result<Self, AnalysisError> {
        let g = g
            .iter()
            .map(|v| v.is_integer().then(|| v.to_integer()))
            .collect::<Option<Vec<Int>>>()
            .ok_or(AnalysisError::NonIntegerG)?;
        Ok(Self::new(g, gamma))
    }

    pub fn rounded_rhs(&self) -> Int {
        ceil(&self.gamma)
    }

    pub fn rounded(&self) -> LinearInequality {
        LinearInequality::from_ints(&self.g, self.rounded_rhs())
    }
}

/// Reproduces a proper CG inequality as the cut of one cutting-plane step
/// under a basis whose first row is `g`.
///
/// `g` is made primitive first (dividing `γ` by the same factor). The lower
/// bounds are rounded down rather than up so that the cone constraint
/// `c^1 x >= ℓ_1` does not already impose the rounded inequality; the lex-min
/// then has a fractional first value and the step emits `g x >= ⌈γ⌉`. The
/// returned cut is in original coordinates.
pub fn cg_to_lexcut(
    set: &FeasibleSet,
    cg: &CgInequality,
    opts: &SolveOptions,
) -> Result<(LatticeBasis, LexCut), AnalysisError> {
    let (g, m) = gcd_normalize(&cg.g)?;
    let gamma = &cg.gamma / from_int(&m);
    let target = LinearInequality::from_ints(&g, ceil(&gamma));
    let mut solver = Solver::new(opts.clone());
    let min = match solver.optimize(set, &LinearQuery::minimize(ints_to_rats(&g)))? {
        OracleResult::Infeasible => return Err(SolveError::EmptyInput.into()),
        OracleResult::Optimal { value, .. } => value,
    };
    if min < gamma {
        return Err(AnalysisError::NotApplicable(
            crate::rational::format_rational(&min),
        ));
    }
    if min >= from_int(&ceil(&gamma)) {
        return Err(AnalysisError::NotProper);
    }
    let basis = complete_basis(&g)?;
    let pre = solver.preprocess(set, &g, Some(&basis), BoundRounding::Floor)?;
    let step = solver.cut_step(&pre)?;
    let cut = match (step.status, step.cut) {
        (IterationStatus::Cut, Some(cut)) => cut,
        _ => {
            return Err(AnalysisError::Mismatch {
                got: "no cut".into(),
                want: target.to_string(),
            })
        }
    };
    let back: Vec<Rational> = pre.translation.iter().map(|t| -from_int(t)).collect();
    let cut = LexCut {
        inequality: cut.inequality.translate(&back),
        ..cut
    };
    if !cut.inequality.same_halfspace(&target) {
        return Err(AnalysisError::Mismatch {
            got: cut.inequality.to_string(),
            want: target.to_string(),
        });
    }
    Ok((basis, cut))
}

/// True iff `cut` holds on both sides of the disjunction (an empty side
/// counts as valid).
pub fn is_valid_split_cut(
    set: &FeasibleSet,
    cut: &LinearInequality,
    d: &SplitDisjunction,
    opts: &SolveOptions,
) -> Result<bool, AnalysisError> {
    let mut solver = Solver::new(opts.clone());
    split_valid_with(&mut solver, set, cut, d)
}

fn split_valid_with(
    solver: &mut Solver,
    set: &FeasibleSet,
    cut: &LinearInequality,
    d: &SplitDisjunction,
) -> Result<bool, AnalysisError> {
    let slack = if set.is_exact() {
        Rational::zero()
    } else {
        solver.options().snap.clone()
    };
    for side in d.sides() {
        let q = LinearQuery::minimize(cut.coeffs.clone()).with_inequality(side);
        if let OracleResult::Optimal { value, .. } = solver.optimize(set, &q)? {
            if value < &cut.rhs - &slack {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

/// All primitive `π` with `‖π‖∞ <= norm_bound` and first nonzero entry
/// positive, paired with every `π0` between `⌊min πx⌋` and `⌈max πx⌉`, that
/// validate `cut`.
pub fn enumerate_splits(
    set: &FeasibleSet,
    cut: &LinearInequality,
    norm_bound: u32,
    opts: &SolveOptions,
) -> Result<Vec<SplitDisjunction>, AnalysisError> {
    if norm_bound == 0 {
        return Err(AnalysisError::BadNormBound);
    }
    let n = set.dim();
    let mut solver = Solver::new(opts.clone());
    let mut out = Vec::new();
    let b = norm_bound as i64;
    for pi in int_box(&vec![-b; n], &vec![b; n]) {
        let Some(lead) = pi.iter().find(|v| !v.is_zero()) else {
            continue;
        };
        if lead.is_negative() || pi.iter().fold(Int::zero(), |g, v| g.gcd(v)) != Int::one() {
            continue;
        }
        let obj = ints_to_rats(&pi);
        let lo = solver.optimize(set, &LinearQuery::minimize(obj.clone()))?;
        let Some(lo) = lo.value().cloned() else {
            return Ok(out);
        };
        let hi = solver.optimize(
            set,
            &LinearQuery::minimize(obj.iter().map(|v| -v).collect()),
        )?;
        let hi = -hi.value().cloned().unwrap_or_default();
        let mut pi0 = floor(&lo);
        let top = ceil(&hi);
        while pi0 <= top {
            let d = SplitDisjunction::new(pi.clone(), pi0.clone())?;
            if split_valid_with(&mut solver, set, cut, &d)? {
                out.push(d);
            }
            pi0 += 1;
        }
    }
    Ok(out)
}

/// `S↑` for a finite set lying in `K`, sorted by the basis order.
pub fn s_up_pointcloud(
    cloud: &PointCloud,
    basis: &LatticeBasis,
) -> Result<Vec<Vec<Int>>, AnalysisError> {
    let mut ups = cloud
        .points()
        .iter()
        .map(|x| round_up_lex(basis, x))
        .collect::<Result<Vec<_>, _>>()?;
    ups.sort_by_key(|x| basis.values_int(x));
    ups.dedup();
    Ok(ups)
}

/// `V(S)`: for each `x̄ ∈ S↑` the vector `C x̄` and, for `k < n`, the
/// vector keeping the first `k-1` values of `C x̄`, adding one to the `k`-th
/// and zeroing the rest. Deduplicated and sorted in the standard order.
pub fn v_set(basis: &LatticeBasis, s_up: &[Vec<Int>]) -> Vec<Vec<Int>> {
    let n = basis.dim();
    let mut out = Vec::new();
    for x in s_up {
        let y = basis.values_int(x);
        for k in 1..n {
            let mut a = y.clone();
            a[k - 1] += 1;
            for v in a.iter_mut().skip(k) {
                *v = Int::zero();
            }
            out.push(a);
        }
        out.push(y);
    }
    out.sort();
    out.dedup();
    out
}

/// Default cap on brute-force enumeration cells.
pub const DEFAULT_CELL_CAP: u128 = 10_000_000;

/// Exhaustive search over the integer points of the bounding box.
///
/// Ties in objective value go to the lex-smaller point under `basis`
/// (default: the completed basis of `c`), matching what the cutting-plane
/// and enumeration methods return.
pub fn brute_force_integer_opt(
    set: &FeasibleSet,
    objective: &[Int],
    basis: Option<&LatticeBasis>,
    cell_cap: u128,
) -> Result<Outcome, AnalysisError> {
    let basis = match basis {
        Some(b) => b.clone(),
        None => LatticeBasis::for_objective(objective)?,
    };
    let Some((lo, hi)) = bounding_box(set)? else {
        return Ok(Outcome::IntegerInfeasible);
    };
    let cells = lo
        .iter()
        .zip(&hi)
        .map(|(l, h)| {
            let w: Int = (h - l + Int::one()).max(Int::zero());
            u128::try_from(w).unwrap_or(u128::MAX)
        })
        .fold(1u128, |a, w| a.saturating_mul(w));
    if cells > cell_cap {
        return Err(AnalysisError::BoxTooLarge(cells));
    }
    let lo64: Vec<i64> = lo
        .iter()
        .map(|v| i64::try_from(v).unwrap_or(i64::MIN))
        .collect();
    let hi64: Vec<i64> = hi
        .iter()
        .map(|v| i64::try_from(v).unwrap_or(i64::MAX))
        .collect();
    let mut best: Option<(Int, Vec<Int>, Vec<Int>)> = None;
    for x in int_box(&lo64, &hi64) {
        if !set.contains(&ints_to_rats(&x)) {
            continue;
        }
        let value: Int = objective.iter().zip(&x).map(|(a, b)| a * b).sum();
        let key = basis.values_int(&x);
        let better = match &best {
            None => true,
            Some((bv, bk, _)) => match value.cmp(bv) {
                Ordering::Less => true,
                Ordering::Equal => key < *bk,
                Ordering::Greater => false,
            },
        };
        if better {
            best = Some((value, key, x));
        }
    }
    Ok(match best {
        Some((value, _, point)) => Outcome::IntegerOptimal { point, value },
        None => Outcome::IntegerInfeasible,
    })
}

/// Integer bounds `⌈min x_j⌉..⌊max x_j⌋`, or `None` for an empty set.
fn bounding_box(set: &FeasibleSet) -> Result<Option<(Vec<Int>, Vec<Int>)>, AnalysisError> {
    let n = set.dim();
    match set {
        FeasibleSet::PointCloud(c) => {
            if c.points().is_empty() {
                return Ok(None);
            }
            let lo = (0..n)
                .map(|j| c.points().iter().map(|p| ceil(&p[j])).min().unwrap())
                .collect();
            let hi = (0..n)
                .map(|j| c.points().iter().map(|p| floor(&p[j])).max().unwrap())
                .collect();
            Ok(Some((lo, hi)))
        }
        FeasibleSet::BallBox(b) => Ok(Some((
            b.lower.iter().map(ceil).collect(),
            b.upper.iter().map(floor).collect(),
        ))),
        FeasibleSet::Polytope(_) => {
            let mut solver = Solver::new(SolveOptions::default());
            let (mut lo, mut hi) = (Vec::with_capacity(n), Vec::with_capacity(n));
            for j in 0..n {
                let mut e = vec![Rational::zero(); n];
                e[j] = Rational::one();
                let Some(l) = solver
                    .optimize(set, &LinearQuery::minimize(e.clone()))?
                    .value()
                    .cloned()
                else {
                    return Ok(None);
                };
                e[j] = -Rational::one();
                let h = solver.optimize(set, &LinearQuery::minimize(e))?;
                let h = -h.value().cloned().unwrap_or_default();
                lo.push(ceil(&l));
                hi.push(floor(&h));
            }
            Ok(Some((lo, hi)))
        }
    }
}

/// Result of comparing `Q(x̄)`'s inequality system against brute force.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct HullReport {
    pub points: usize,
    pub mismatches: usize,
    /// First few mismatching points, as basis values.
    pub examples: Vec<Vec<Int>>,
    /// Indices (1-based) of vertices that are infeasible or have the wrong slack.
    pub bad_vertices: Vec<usize>,
}

impl HullReport {
    pub fn passed(&self) -> bool {
        self.mismatches == 0 && self.bad_vertices.is_empty()
    }
}

/// Checks every integer point with `0 <= c^i x <= m`: it must satisfy the
/// description of `Q(x̄)` exactly when it is lex-greater or equal to `x̄`.
/// Vertex `v^k` (k below the leading index) must sit one unit above cut `k`
/// and on every other cut; `x̄` itself lies on all of them.
///
/// `perturb_rhs` is added to the first inequality's right-hand side; it
/// exists so the harness can be seen to fail.
pub fn hull_check(
    basis: &LatticeBasis,
    xbar: &[Int],
    m: i64,
    perturb_rhs: Option<&Rational>,
    cap: u128,
) -> Result<HullReport, AnalysisError> {
    let n = basis.dim();
    let cells = u128::try_from(m.max(-1) + 1).unwrap_or(0).pow(n as u32);
    if cells > cap {
        return Err(AnalysisError::BoxTooLarge(cells));
    }
    let mut q = q_description(basis, xbar, false)?;
    if let Some(p) = perturb_rhs {
        q[0].rhs += p;
    }
    // Coefficients in basis coordinates: a x = (a C⁻¹) y.
    let inv = basis.inverse();
    let rows: Vec<(Vec<Int>, Int)> = q
        .iter()
        .map(|h| {
            let a: Vec<Int> = (0..n)
                .map(|j| {
                    h.coeffs
                        .iter()
                        .enumerate()
                        .map(|(i, c)| c.to_integer() * inv.get(i, j))
                        .sum()
                })
                .collect();
            (a, ceil(&h.rhs))
        })
        .collect();
    let ybar = basis.values_int(xbar);
    let mut report = HullReport::default();
    for y in int_box(&vec![0; n], &vec![m; n]) {
        report.points += 1;
        let inside = rows
            .iter()
            .all(|(a, r)| a.iter().zip(&y).map(|(u, v)| u * v).sum::<Int>() >= *r);
        if inside != (y >= ybar) {
            report.mismatches += 1;
            if report.examples.len() < 5 {
                report.examples.push(y);
            }
        }
    }
    if ybar.iter().any(|v| !v.is_zero()) {
        let verts = extreme_points(basis, xbar)?;
        let lead = verts.len();
        for (k0, v) in verts.iter().enumerate() {
            let v = int_point(v);
            let ok = satisfies_all(&q, &v)
                && (0..n).all(|j| {
                    let want = if j == k0 && k0 + 1 < lead {
                        Rational::one()
                    } else {
                        Rational::zero()
                    };
                    q[j].slack(&v) == want
                });
            if !ok {
                report.bad_vertices.push(k0 + 1);
            }
        }
    } else if !satisfies_all(&q, &vec![Rational::zero(); n]) {
        report.bad_vertices.push(1);
    }
    Ok(report)
}

/// Every integer vector in `[lo, hi]`, last coordinate varying fastest.
pub fn int_box(lo: &[i64], hi: &[i64]) -> impl Iterator<Item = Vec<Int>> {
    let lo = lo.to_vec();
    let hi = hi.to_vec();
    let empty = lo.iter().zip(&hi).any(|(l, h)| l > h);
    let mut cur = if empty { None } else { Some(lo.clone()) };
    std::iter::from_fn(move || {
        let out = cur.clone()?;
        let mut next = out.clone();
        let mut j = next.len();
        cur = loop {
            if j == 0 {
                break None;
            }
            j -= 1;
            if next[j] < hi[j] {
                next[j] += 1;
                break Some(next);
            }
            next[j] = lo[j];
        };
        Some(out.into_iter().map(Int::from).collect())
    })
}

/// `C⁻¹ α` for each `α`, i.e. the points whose basis values are `α`.
pub fn points_from_values(basis: &LatticeBasis, alphas: &[Vec<Int>]) -> Vec<Vec<Int>> {
    alphas.iter().map(|a| solve_unimodular(basis, a)).collect()
}
