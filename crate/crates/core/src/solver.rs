//! The lex cutting-plane method and lex-enumeration.
//!
//! Both algorithms run on a preprocessed copy of the set: translated so that
//! the lower bound of every basis functional is zero and intersected with the
//! cone `K = {c^i x >= 0}`. Trace entries are translated back, so everything
//! a caller sees is in original coordinates. The lex order is invariant
//! under integer translation, so trace comparisons are unaffected.

use std::cmp::Ordering;

use num_traits::{Signed, Zero};

use crate::lattice::{complete_basis, gcd_normalize, solve_unimodular, LatticeBasis, LatticeError};
use crate::lex::{
    cone_inequalities, first_fractional, lexcut_from_values, round_up_values, LexCut, LexError,
    LinearInequality, Point,
};
use crate::oracle::{FeasibleSet, LinearQuery, OracleConfig, OracleError, OracleResult};
use crate::rational::{ceil, dot_int, floor, from_int, ints_to_rats, rat, Int, Rational};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum SolveError {
    #[error("feasible set is empty")]
    EmptyInput,
    #[error("objective vector is zero")]
    ZeroObjective,
    #[error("first basis row must equal the normalized objective")]
    BasisMismatch,
    #[error("iteration limit {0} reached")]
    IterationLimit(usize),
    #[error("numeric lex-min failed: {0}")]
    Numeric(String),
    #[error(transparent)]
    Lattice(#[from] LatticeError),
    #[error(transparent)]
    Lex(#[from] LexError),
    #[error(transparent)]
    Oracle(#[from] OracleError),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SolveOptions {
    /// Ball violation accepted by the numeric oracle.
    pub eps: Rational,
    /// `δ_int`: values this close to an integer count as integral.
    pub snap: Rational,
    pub refresh_bounds: bool,
    pub strengthen_alpha: bool,
    pub record_trace: bool,
    pub iteration_limit: usize,
    pub max_tangents: usize,
}

impl Default for SolveOptions {
    fn default() -> Self {
        Self {
            eps: rat(1, 1_000_000_000),
            snap: rat(1, 1_000_000),
            refresh_bounds: false,
            strengthen_alpha: false,
            record_trace: true,
            iteration_limit: 1_000_000,
            max_tangents: 10_000,
        }
    }
}

impl SolveOptions {
    fn oracle_config(&self) -> OracleConfig {
        OracleConfig {
            eps: self.eps.clone(),
            max_tangents: self.max_tangents,
        }
    }
}

/// How the lower bounds `ℓ*_i` are rounded before translating.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BoundRounding {
    Ceil,
    Floor,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Preprocessed {
    pub basis: LatticeBasis,
    pub ell_star: Vec<Rational>,
    pub ell: Vec<Int>,
    /// Upper bounds `max c^i x` over the original set.
    pub ell_upper: Vec<Rational>,
    /// Integer `t` with `C t = ℓ`.
    pub translation: Vec<Int>,
    /// `(S - t) ∩ K`.
    pub set: FeasibleSet,
}

impl Preprocessed {
    pub fn dim(&self) -> usize {
        self.basis.dim()
    }

    fn to_original(&self, x: &[Rational]) -> Point {
        x.iter()
            .zip(&self.translation)
            .map(|(v, t)| v + from_int(t))
            .collect()
    }

    fn to_original_int(&self, x: &[Int]) -> Vec<Int> {
        x.iter()
            .zip(&self.translation)
            .map(|(v, t)| v + t)
            .collect()
    }

    fn inequality_to_original(&self, h: &LinearInequality) -> LinearInequality {
        let back: Vec<Rational> = self.translation.iter().map(|t| -from_int(t)).collect();
        h.translate(&back)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum IterationStatus {
    Cut,
    Optimal,
    Infeasible,
}

/// One pass of the cutting-plane loop, in original coordinates.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CutIteration {
    pub xbar: Option<Point>,
    pub xbar_up: Option<Vec<Int>>,
    pub k: Option<usize>,
    pub cut: Option<LexCut>,
    pub status: IterationStatus,
}

/// One execution of the enumeration's `S*` step. `alpha` is in translated
/// coordinates; the points are in original coordinates.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EnumState {
    pub alpha: Vec<Int>,
    pub i_star: usize,
    pub sstar_empty: bool,
    pub xbar: Option<Point>,
    pub xbar_up: Option<Vec<Int>>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Trace {
    Cuts(Vec<CutIteration>),
    Enum(Vec<EnumState>),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Outcome {
    IntegerOptimal { point: Vec<Int>, value: Int },
    IntegerInfeasible,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct SolveStats {
    pub cuts: usize,
    /// Iterations of the main loop (lex-min computations for the cutting
    /// plane method, `S*` steps for enumeration).
    pub iterations: usize,
    pub oracle_calls: usize,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SolveOutcome {
    pub outcome: Outcome,
    pub trace: Trace,
    pub stats: SolveStats,
    pub basis: LatticeBasis,
    pub translation: Vec<Int>,
    pub ell: Vec<Int>,
}

/// Extra constraints on top of the preprocessed set.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Restriction {
    pub equalities: Vec<(Vec<Rational>, Rational)>,
    pub inequalities: Vec<LinearInequality>,
}

impl Restriction {
    fn query(&self, objective: Vec<Rational>) -> LinearQuery {
        let mut q =
            LinearQuery::minimize(objective).with_inequalities(self.inequalities.iter().cloned());
        q.equalities.extend(self.equalities.iter().cloned());
        q
    }
}

/// Runs solver steps against a set while counting oracle calls.
#[derive(Debug, Clone)]
pub struct Solver {
    opts: SolveOptions,
    oracle: OracleConfig,
    calls: usize,
}

impl Solver {
    pub fn new(opts: SolveOptions) -> Self {
        let oracle = opts.oracle_config();
        Self {
            opts,
            oracle,
            calls: 0,
        }
    }

    pub fn options(&self) -> &SolveOptions {
        &self.opts
    }

    pub fn oracle_calls(&self) -> usize {
        self.calls
    }

    pub fn optimize(
        &mut self,
        set: &FeasibleSet,
        q: &LinearQuery,
    ) -> Result<OracleResult, SolveError> {
        self.calls += 1;
        Ok(set.optimize(q, &self.oracle)?)
    }

    fn round_bound(&self, v: &Rational, exact: bool, rounding: BoundRounding) -> Int {
        if !exact {
            if let Some(i) = self.snapped(v) {
                return i;
            }
        }
        match rounding {
            BoundRounding::Ceil => ceil(v),
            BoundRounding::Floor => floor(v),
        }
    }

    /// The nearest integer when `v` is within `δ_int` of it.
    fn snapped(&self, v: &Rational) -> Option<Int> {
        let r = v.round();
        ((v - &r).abs() <= self.opts.snap).then(|| r.to_integer())
    }

    /// `C x`, with values near integers snapped for numeric sets.
    pub fn basis_values(
        &self,
        set: &FeasibleSet,
        basis: &LatticeBasis,
        x: &[Rational],
    ) -> Vec<Rational> {
        let values = basis.values(x);
        if set.is_exact() {
            return values;
        }
        values
            .into_iter()
            .map(|v| match self.snapped(&v) {
                Some(i) => from_int(&i),
                None => v,
            })
            .collect()
    }

    pub fn preprocess(
        &mut self,
        set: &FeasibleSet,
        objective: &[Int],
        basis: Option<&LatticeBasis>,
        rounding: BoundRounding,
    ) -> Result<Preprocessed, SolveError> {
        if objective.iter().all(Zero::is_zero) {
            return Err(SolveError::ZeroObjective);
        }
        let (g, _) = gcd_normalize(objective)?;
        let basis = match basis {
            Some(b) => {
                b.check_dim(objective.len())?;
                if b.row(0) != g.as_slice() {
                    return Err(SolveError::BasisMismatch);
                }
                b.clone()
            }
            None => complete_basis(&g)?,
        };
        if set.dim() != basis.dim() {
            return Err(LatticeError::DimensionMismatch {
                expected: basis.dim(),
                got: set.dim(),
            }
            .into());
        }
        let n = basis.dim();
        let mut ell_star = Vec::with_capacity(n);
        let mut ell_upper = Vec::with_capacity(n);
        for i in 0..n {
            let ci = ints_to_rats(basis.row(i));
            let lo = self.optimize(set, &LinearQuery::minimize(ci.clone()))?;
            let Some(lo) = lo.value().cloned() else {
                return Err(SolveError::EmptyInput);
            };
            let hi = self.optimize(set, &LinearQuery::minimize(ci.iter().map(|v| -v).collect()))?;
            let hi = hi.value().map(|v| -v).ok_or(SolveError::EmptyInput)?;
            ell_star.push(lo);
            ell_upper.push(hi);
        }
        let exact = set.is_exact();
        let ell: Vec<Int> = ell_star
            .iter()
            .map(|v| self.round_bound(v, exact, rounding))
            .collect();
        let translation = solve_unimodular(&basis, &ell);
        let shifted = set
            .translate(&ints_to_rats(&translation))
            .restrict_all(cone_inequalities(&basis));
        Ok(Preprocessed {
            basis,
            ell_star,
            ell,
            ell_upper,
            translation,
            set: shifted,
        })
    }

    /// Lex-min of the preprocessed set under `extra` by `n` nested
    /// minimizations.
    ///
    /// Exact sets fix each attained value with an equality. For numeric sets
    /// the attained values are approximate, so each is fixed with a thin slab
    /// `c^i x <= v_i + τ` instead, widening `τ` if the slab comes back empty.
    pub fn lex_min(
        &mut self,
        pre: &Preprocessed,
        extra: &Restriction,
    ) -> Result<OracleResult, SolveError> {
        lex_min_in(self, &pre.set, &pre.basis, extra)
    }

    /// Whether the integer point `xup` lies in the preprocessed set under
    /// `extra`, decided by one oracle call fixing every basis value.
    pub fn membership_x_up(
        &mut self,
        pre: &Preprocessed,
        xup: &[Int],
        extra: &Restriction,
    ) -> Result<bool, SolveError> {
        let mut r = extra.clone();
        for (i, v) in pre.basis.values_int(xup).iter().enumerate() {
            r.equalities
                .push((ints_to_rats(pre.basis.row(i)), from_int(v)));
        }
        let q = r.query(vec![Rational::zero(); pre.dim()]);
        Ok(self.optimize(&pre.set, &q)?.is_feasible())
    }

    /// One cutting-plane step on the preprocessed set, in translated
    /// coordinates.
    pub fn cut_step(&mut self, pre: &Preprocessed) -> Result<CutIteration, SolveError> {
        let xbar = match self.lex_min(pre, &Restriction::default())? {
            OracleResult::Infeasible => {
                return Ok(CutIteration {
                    xbar: None,
                    xbar_up: None,
                    k: None,
                    cut: None,
                    status: IterationStatus::Infeasible,
                })
            }
            OracleResult::Optimal { point, .. } => point,
        };
        let values = self.basis_values(&pre.set, &pre.basis, &xbar);
        let up = round_up_values(&values)?;
        let xbar_up = solve_unimodular(&pre.basis, &up);
        Ok(match first_fractional(&values) {
            None => CutIteration {
                xbar: Some(xbar),
                xbar_up: Some(xbar_up),
                k: None,
                cut: None,
                status: IterationStatus::Optimal,
            },
            Some(k) => {
                let cut = lexcut_from_values(&pre.basis, &values, k)?;
                CutIteration {
                    xbar: Some(xbar),
                    xbar_up: Some(xbar_up),
                    k: Some(k),
                    cut: Some(cut),
                    status: IterationStatus::Cut,
                }
            }
        })
    }

    /// Re-tightens the lower bounds of the current set, shifting the
    /// translation by any bound that moved above zero.
    fn refresh_bounds(&mut self, pre: &mut Preprocessed) -> Result<(), SolveError> {
        let n = pre.dim();
        let exact = pre.set.is_exact();
        let mut delta = Vec::with_capacity(n);
        for i in 0..n {
            let q = LinearQuery::minimize(ints_to_rats(pre.basis.row(i)));
            match self.optimize(&pre.set, &q)? {
                OracleResult::Infeasible => return Ok(()),
                OracleResult::Optimal { value, .. } => delta.push(
                    self.round_bound(&value, exact, BoundRounding::Ceil)
                        .max(Int::zero()),
                ),
            }
        }
        if delta.iter().all(Zero::is_zero) {
            return Ok(());
        }
        let shift = solve_unimodular(&pre.basis, &delta);
        pre.set = pre
            .set
            .translate(&ints_to_rats(&shift))
            .restrict_all(cone_inequalities(&pre.basis));
        for (t, s) in pre.translation.iter_mut().zip(&shift) {
            *t += s;
        }
        for (l, d) in pre.ell.iter_mut().zip(&delta) {
            *l += d;
        }
        Ok(())
    }

    fn finish(&self, pre: &Preprocessed, objective: &[Int], point: Vec<Int>) -> Outcome {
        let point = pre.to_original_int(&point);
        let value = objective.iter().zip(&point).map(|(a, b)| a * b).sum();
        Outcome::IntegerOptimal { point, value }
    }

    pub fn algorithm1(
        &mut self,
        set: &FeasibleSet,
        objective: &[Int],
        basis: Option<&LatticeBasis>,
    ) -> Result<SolveOutcome, SolveError> {
        let mut pre = self.preprocess(set, objective, basis, BoundRounding::Ceil)?;
        let mut trace = Vec::new();
        let mut stats = SolveStats::default();
        loop {
            if stats.iterations >= self.opts.iteration_limit {
                return Err(SolveError::IterationLimit(self.opts.iteration_limit));
            }
            stats.iterations += 1;
            let step = self.cut_step(&pre)?;
            let recorded = CutIteration {
                xbar: step.xbar.as_ref().map(|x| pre.to_original(x)),
                xbar_up: step.xbar_up.as_ref().map(|x| pre.to_original_int(x)),
                k: step.k,
                cut: step.cut.as_ref().map(|c| LexCut {
                    inequality: pre.inequality_to_original(&c.inequality),
                    ..c.clone()
                }),
                status: step.status,
            };
            if self.opts.record_trace {
                trace.push(recorded);
            }
            let outcome = match step.status {
                IterationStatus::Infeasible => Outcome::IntegerInfeasible,
                IterationStatus::Optimal => {
                    let up = step.xbar_up.expect("optimal step has a point");
                    self.finish(&pre, objective, up)
                }
                IterationStatus::Cut => {
                    stats.cuts += 1;
                    let cut = step.cut.expect("cut step has a cut");
                    pre.set = pre.set.restrict(cut.inequality);
                    if self.opts.refresh_bounds {
                        self.refresh_bounds(&mut pre)?;
                    }
                    continue;
                }
            };
            stats.oracle_calls = self.calls;
            return Ok(SolveOutcome {
                outcome,
                trace: Trace::Cuts(trace),
                stats,
                basis: pre.basis,
                translation: pre.translation,
                ell: pre.ell,
            });
        }
    }

    pub fn algorithm2(
        &mut self,
        set: &FeasibleSet,
        objective: &[Int],
        basis: Option<&LatticeBasis>,
    ) -> Result<SolveOutcome, SolveError> {
        // Only translate S into K here; rounding the bounds up would cut
        // off fractional points the enumeration is meant to visit.
        let pre = self.preprocess(set, objective, basis, BoundRounding::Floor)?;
        let n = pre.dim();
        let rows: Vec<Vec<Rational>> = (0..n).map(|i| ints_to_rats(pre.basis.row(i))).collect();
        let mut alpha = vec![Int::zero(); n];
        let mut i_star = 1usize;
        let mut trace = Vec::new();
        let mut stats = SolveStats::default();
        let outcome = loop {
            if stats.iterations >= self.opts.iteration_limit {
                return Err(SolveError::IterationLimit(self.opts.iteration_limit));
            }
            stats.iterations += 1;
            let mut sstar = Restriction::default();
            for i in 0..n {
                let a = from_int(&alpha[i]);
                if i + 1 < i_star {
                    sstar.equalities.push((rows[i].clone(), a));
                } else {
                    sstar
                        .inequalities
                        .push(LinearInequality::new(rows[i].clone(), a));
                }
            }
            let mut state = EnumState {
                alpha: alpha.clone(),
                i_star,
                sstar_empty: false,
                xbar: None,
                xbar_up: None,
            };
            match self.lex_min(&pre, &sstar)? {
                OracleResult::Infeasible => {
                    state.sstar_empty = true;
                    if self.opts.record_trace {
                        trace.push(state);
                    }
                    if i_star == 1 {
                        break Outcome::IntegerInfeasible;
                    }
                    i_star -= 1;
                    alpha[i_star - 1] += 1;
                    for a in alpha.iter_mut().skip(i_star) {
                        *a = Int::zero();
                    }
                }
                OracleResult::Optimal { point, .. } => {
                    let values = self.basis_values(&pre.set, &pre.basis, &point);
                    let up_values = round_up_values(&values)?;
                    let xup = solve_unimodular(&pre.basis, &up_values);
                    state.xbar = Some(pre.to_original(&point));
                    state.xbar_up = Some(pre.to_original_int(&xup));
                    if self.opts.record_trace {
                        trace.push(state);
                    }
                    if self.membership_x_up(&pre, &xup, &sstar)? {
                        break self.finish(&pre, objective, xup);
                    }
                    i_star = n;
                    alpha = up_values;
                    if self.opts.strengthen_alpha {
                        alpha[n - 1] += 1;
                    }
                }
            }
        };
        stats.oracle_calls = self.calls;
        Ok(SolveOutcome {
            outcome,
            trace: Trace::Enum(trace),
            stats,
            basis: pre.basis,
            translation: pre.translation,
            ell: pre.ell,
        })
    }
}

fn lex_min_in(
    solver: &mut Solver,
    set: &FeasibleSet,
    basis: &LatticeBasis,
    extra: &Restriction,
) -> Result<OracleResult, SolveError> {
    let n = basis.dim();
    let exact = set.is_exact();
    let mut fixed = extra.clone();
    let mut last = OracleResult::Infeasible;
    for i in 0..n {
        let ci = ints_to_rats(basis.row(i));
        let mut tau = &solver.opts.eps * Rational::from_integer(10.into());
        loop {
            let mut attempt = fixed.clone();
            if i > 0 && !exact {
                // Slab on the previous value.
                let (prev, v) = attempt.equalities.pop().expect("previous value recorded");
                attempt.inequalities.push(LinearInequality::new(
                    prev.iter().map(|a| -a).collect(),
                    -(v + &tau),
                ));
            }
            match solver.optimize(set, &attempt.query(ci.clone()))? {
                OracleResult::Infeasible if i == 0 || exact => return Ok(OracleResult::Infeasible),
                OracleResult::Infeasible => {
                    tau *= Rational::from_integer(10.into());
                    if tau > solver.opts.snap {
                        return Err(SolveError::Numeric(format!(
                            "no point within {} of the minimum of c^{} x",
                            crate::rational::format_rational(&solver.opts.snap),
                            i
                        )));
                    }
                }
                OracleResult::Optimal { point, value } => {
                    if !exact && i > 0 {
                        fixed = attempt;
                    }
                    fixed.equalities.push((ci.clone(), value.clone()));
                    last = OracleResult::Optimal { point, value };
                    break;
                }
            }
        }
    }
    // Report the value of the leading functional, not of the last one.
    Ok(match last {
        OracleResult::Optimal { point, .. } => {
            let value = dot_int(basis.row(0), &point);
            OracleResult::Optimal { point, value }
        }
        r => r,
    })
}

/// Compares by the basis values of two points.
pub fn lex_order(basis: &LatticeBasis, x: &[Rational], y: &[Rational]) -> Ordering {
    basis.values(x).cmp(&basis.values(y))
}

pub fn preprocess(
    set: &FeasibleSet,
    objective: &[Int],
    basis: Option<&LatticeBasis>,
) -> Result<Preprocessed, SolveError> {
    Solver::new(SolveOptions::default()).preprocess(set, objective, basis, BoundRounding::Ceil)
}

pub fn lex_min(
    pre: &Preprocessed,
    extra: &Restriction,
    opts: &SolveOptions,
) -> Result<OracleResult, SolveError> {
    Solver::new(opts.clone()).lex_min(pre, extra)
}

pub fn algorithm1_solve(
    set: &FeasibleSet,
    objective: &[Int],
    basis: Option<&LatticeBasis>,
    opts: &SolveOptions,
) -> Result<SolveOutcome, SolveError> {
    Solver::new(opts.clone()).algorithm1(set, objective, basis)
}

pub fn algorithm2_solve(
    set: &FeasibleSet,
    objective: &[Int],
    basis: Option<&LatticeBasis>,
    opts: &SolveOptions,
) -> Result<SolveOutcome, SolveError> {
    Solver::new(opts.clone()).algorithm2(set, objective, basis)
}
