//! Linear-optimization oracles over the supported compact sets.
//!
//! An oracle answers `min c·x` over `S ∩ {equalities} ∩ {inequalities}` or
//! certifies emptiness. Polytopes and point clouds are answered exactly. The
//! ball-in-box set is answered by a Kelley outer-approximation loop whose
//! tangent halfspaces are valid for the ball, so an infeasible outer LP is an
//! exact emptiness certificate while optimal points are only `eps`-feasible.

use num_traits::{One, Signed, Zero};

use crate::lex::{LinearInequality, Point};
use crate::lp::{self, LpError, LpOutcome};
use crate::rational::{dot, dyadic, rat, rat_int, to_f64, Rational};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum OracleError {
    #[error("query is unbounded; the set is not compact")]
    UnboundedQuery,
    #[error("no eps-feasible point after {0} tangent cuts")]
    IterationLimit(usize),
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("invalid set: {0}")]
    InvalidSet(String),
}

impl From<LpError> for OracleError {
    fn from(_: LpError) -> Self {
        OracleError::UnboundedQuery
    }
}

/// `min objective·x` subject to extra linear constraints.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LinearQuery {
    pub objective: Vec<Rational>,
    pub equalities: Vec<(Vec<Rational>, Rational)>,
    pub inequalities: Vec<LinearInequality>,
}

impl LinearQuery {
    pub fn minimize(objective: Vec<Rational>) -> Self {
        Self {
            objective,
            equalities: Vec::new(),
            inequalities: Vec::new(),
        }
    }

    pub fn feasibility(n: usize) -> Self {
        Self::minimize(vec![Rational::zero(); n])
    }

    pub fn with_equality(mut self, coeffs: Vec<Rational>, rhs: Rational) -> Self {
        self.equalities.push((coeffs, rhs));
        self
    }

    pub fn with_inequality(mut self, h: LinearInequality) -> Self {
        self.inequalities.push(h);
        self
    }

    pub fn with_inequalities(mut self, hs: impl IntoIterator<Item = LinearInequality>) -> Self {
        self.inequalities.extend(hs);
        self
    }

    fn check_dim(&self, n: usize) -> Result<(), OracleError> {
        let lens = std::iter::once(self.objective.len())
            .chain(self.equalities.iter().map(|(a, _)| a.len()))
            .chain(self.inequalities.iter().map(LinearInequality::dim));
        for got in lens {
            if got != n {
                return Err(OracleError::DimensionMismatch { expected: n, got });
            }
        }
        Ok(())
    }

    /// All constraints as `>=` rows; each equality becomes two rows.
    fn rows(&self) -> impl Iterator<Item = LinearInequality> + '_ {
        self.inequalities
            .iter()
            .cloned()
            .chain(self.equalities.iter().flat_map(|(a, b)| {
                [
                    LinearInequality::new(a.clone(), b.clone()),
                    LinearInequality::new(a.iter().map(|v| -v).collect(), -b),
                ]
            }))
    }

    fn admits(&self, x: &[Rational]) -> bool {
        self.inequalities.iter().all(|h| h.is_satisfied(x))
            && self.equalities.iter().all(|(a, b)| dot(a, x) == *b)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum OracleResult {
    Infeasible,
    Optimal { point: Point, value: Rational },
}

impl OracleResult {
    pub fn point(&self) -> Option<&Point> {
        match self {
            OracleResult::Optimal { point, .. } => Some(point),
            OracleResult::Infeasible => None,
        }
    }

    pub fn value(&self) -> Option<&Rational> {
        match self {
            OracleResult::Optimal { value, .. } => Some(value),
            OracleResult::Infeasible => None,
        }
    }

    pub fn is_feasible(&self) -> bool {
        matches!(self, OracleResult::Optimal { .. })
    }
}

impl From<LpOutcome> for OracleResult {
    fn from(o: LpOutcome) -> Self {
        match o {
            LpOutcome::Infeasible => OracleResult::Infeasible,
            LpOutcome::Optimal { point, value } => OracleResult::Optimal { point, value },
        }
    }
}

/// Tuning for the numeric ball oracle.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OracleConfig {
    /// Accepted ball violation `‖x - center‖² - radius_sq`.
    pub eps: Rational,
    pub max_tangents: usize,
}

impl Default for OracleConfig {
    fn default() -> Self {
        Self {
            eps: rat(1, 1_000_000_000),
            max_tangents: 10_000,
        }
    }
}

/// `{x : a_r·x >= b_r}`, required to be bounded.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Polytope {
    dim: usize,
    rows: Vec<LinearInequality>,
}

impl Polytope {
    /// Validates that the rows bound every coordinate from both sides.
    pub fn new(dim: usize, rows: Vec<LinearInequality>) -> Result<Self, OracleError> {
        if let Some(r) = rows.iter().find(|r| r.dim() != dim) {
            return Err(OracleError::DimensionMismatch {
                expected: dim,
                got: r.dim(),
            });
        }
        for j in 0..dim {
            for sign in [1, -1] {
                let mut obj = vec![Rational::zero(); dim];
                obj[j] = rat_int(sign);
                if lp::minimize(&obj, &rows).is_err() {
                    return Err(OracleError::InvalidSet(format!(
                        "polytope is unbounded in coordinate x{}",
                        j + 1
                    )));
                }
            }
        }
        Ok(Self { dim, rows })
    }

    /// `{x : Ax >= b}`.
    pub fn from_matrix(a: Vec<Vec<Rational>>, b: Vec<Rational>) -> Result<Self, OracleError> {
        if a.len() != b.len() {
            return Err(OracleError::InvalidSet(format!(
                "A has {} rows but b has {} entries",
                a.len(),
                b.len()
            )));
        }
        let dim = a
            .first()
            .map(Vec::len)
            .ok_or_else(|| OracleError::InvalidSet("polytope has no rows".into()))?;
        let rows = a
            .into_iter()
            .zip(b)
            .map(|(r, v)| LinearInequality::new(r, v))
            .collect();
        Self::new(dim, rows)
    }

    pub fn rows(&self) -> &[LinearInequality] {
        &self.rows
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn contains(&self, x: &[Rational]) -> bool {
        self.rows.iter().all(|r| r.is_satisfied(x))
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PointCloud {
    dim: usize,
    points: Vec<Point>,
}

impl PointCloud {
    pub fn new(dim: usize, points: Vec<Point>) -> Result<Self, OracleError> {
        if let Some(p) = points.iter().find(|p| p.len() != dim) {
            return Err(OracleError::DimensionMismatch {
                expected: dim,
                got: p.len(),
            });
        }
        Ok(Self { dim, points })
    }

    pub fn points(&self) -> &[Point] {
        &self.points
    }

    pub fn dim(&self) -> usize {
        self.dim
    }
}

/// `{x ∈ [lower, upper] : ‖x - center‖² <= radius_sq}` intersected with any
/// accumulated halfspaces.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BallBox {
    pub center: Point,
    pub radius_sq: Rational,
    pub lower: Point,
    pub upper: Point,
    pub halfspaces: Vec<LinearInequality>,
}

impl BallBox {
    pub fn new(
        center: Point,
        radius_sq: Rational,
        lower: Point,
        upper: Point,
    ) -> Result<Self, OracleError> {
        let n = center.len();
        for len in [lower.len(), upper.len()] {
            if len != n {
                return Err(OracleError::DimensionMismatch {
                    expected: n,
                    got: len,
                });
            }
        }
        if !radius_sq.is_positive() {
            return Err(OracleError::InvalidSet("radius_sq must be positive".into()));
        }
        if lower.iter().zip(&upper).any(|(l, u)| l > u) {
            return Err(OracleError::InvalidSet(
                "box lower bound exceeds upper bound".into(),
            ));
        }
        Ok(Self {
            center,
            radius_sq,
            lower,
            upper,
            halfspaces: Vec::new(),
        })
    }

    /// `{x ∈ [0,1]^n : ‖x - 1/2‖² <= n/4 - 3/16}`, which contains no integer
    /// point but whose lex-rounded image is all of `{0,1}^n \ {0}`.
    pub fn hard_instance(n: usize) -> Self {
        Self::new(
            vec![rat(1, 2); n],
            rat(n as i64, 4) - rat(3, 16),
            vec![rat_int(0); n],
            vec![rat_int(1); n],
        )
        .expect("valid instance")
    }

    pub fn dim(&self) -> usize {
        self.center.len()
    }

    pub fn violation(&self, x: &[Rational]) -> Rational {
        let d2: Rational = x
            .iter()
            .zip(&self.center)
            .map(|(a, c)| {
                let d = a - c;
                &d * &d
            })
            .sum();
        d2 - &self.radius_sq
    }

    pub fn contains(&self, x: &[Rational]) -> bool {
        x.iter().zip(&self.lower).all(|(v, l)| v >= l)
            && x.iter().zip(&self.upper).all(|(v, u)| v <= u)
            && self.halfspaces.iter().all(|h| h.is_satisfied(x))
            && !self.violation(x).is_positive()
    }

    fn box_rows(&self) -> Vec<LinearInequality> {
        let n = self.dim();
        let mut rows = Vec::with_capacity(2 * n);
        for j in 0..n {
            let mut e = vec![Rational::zero(); n];
            e[j] = Rational::one();
            rows.push(LinearInequality::new(e.clone(), self.lower[j].clone()));
            e[j] = -Rational::one();
            rows.push(LinearInequality::new(e, -&self.upper[j]));
        }
        rows
    }

    /// Gradient cut of `‖x - c‖² - r²` linearized at `p`:
    /// `2(p - c)·x <= ‖p‖² - ‖c‖² + r²`, valid for the ball at any `p`.
    fn linearization(&self, p: &[Rational]) -> LinearInequality {
        let coeffs: Vec<Rational> = p
            .iter()
            .zip(&self.center)
            .map(|(a, c)| -(a - c) * rat_int(2))
            .collect();
        let rhs = -(dot(p, p) - dot(&self.center, &self.center) + &self.radius_sq);
        LinearInequality::new(coeffs, rhs)
    }

    /// Tangent-plane cut at the (rounded) radial projection of `x` onto the
    /// sphere, falling back to the exact linearization at `x`.
    fn tangent_cut(&self, x: &[Rational]) -> LinearInequality {
        let diff: Vec<f64> = x
            .iter()
            .zip(&self.center)
            .map(|(a, c)| to_f64(&(a - c)))
            .collect();
        let norm = diff.iter().map(|d| d * d).sum::<f64>().sqrt();
        let radius = to_f64(&self.radius_sq).sqrt();
        if norm.is_finite() && norm > 0.0 {
            let p: Vec<Rational> = diff
                .iter()
                .zip(&self.center)
                .map(|(d, c)| dyadic(to_f64(c) + radius * d / norm, 40))
                .collect();
            let cut = self.linearization(&p);
            if !cut.is_satisfied(x) {
                return cut;
            }
        }
        self.linearization(x)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum FeasibleSet {
    Polytope(Polytope),
    PointCloud(PointCloud),
    BallBox(BallBox),
}

impl FeasibleSet {
    pub fn dim(&self) -> usize {
        match self {
            FeasibleSet::Polytope(p) => p.dim(),
            FeasibleSet::PointCloud(c) => c.dim(),
            FeasibleSet::BallBox(b) => b.dim(),
        }
    }

    /// Whether oracle answers are exact (no tolerance involved).
    pub fn is_exact(&self) -> bool {
        !matches!(self, FeasibleSet::BallBox(_))
    }

    pub fn kind(&self) -> &'static str {
        match self {
            FeasibleSet::Polytope(_) => "polytope",
            FeasibleSet::PointCloud(_) => "pointcloud",
            FeasibleSet::BallBox(_) => "ball_box",
        }
    }

    pub fn optimize(
        &self,
        q: &LinearQuery,
        cfg: &OracleConfig,
    ) -> Result<OracleResult, OracleError> {
        match self {
            FeasibleSet::Polytope(p) => polytope_oracle(p, q),
            FeasibleSet::PointCloud(c) => pointcloud_oracle(c, q),
            FeasibleSet::BallBox(b) => ballbox_oracle(b, q, cfg),
        }
    }

    /// Exact membership test.
    pub fn contains(&self, x: &[Rational]) -> bool {
        match self {
            FeasibleSet::Polytope(p) => p.contains(x),
            FeasibleSet::PointCloud(c) => c.points.iter().any(|p| p.as_slice() == x),
            FeasibleSet::BallBox(b) => b.contains(x),
        }
    }

    /// The set `S ∩ H`.
    pub fn restrict(&self, h: LinearInequality) -> Self {
        match self {
            FeasibleSet::Polytope(p) => {
                let mut p = p.clone();
                p.rows.push(h);
                FeasibleSet::Polytope(p)
            }
            FeasibleSet::PointCloud(c) => FeasibleSet::PointCloud(PointCloud {
                dim: c.dim,
                points: c
                    .points
                    .iter()
                    .filter(|x| h.is_satisfied(x))
                    .cloned()
                    .collect(),
            }),
            FeasibleSet::BallBox(b) => {
                let mut b = b.clone();
                b.halfspaces.push(h);
                FeasibleSet::BallBox(b)
            }
        }
    }

    pub fn restrict_all(&self, hs: impl IntoIterator<Item = LinearInequality>) -> Self {
        hs.into_iter().fold(self.clone(), |s, h| s.restrict(h))
    }

    /// The set `S - t`.
    pub fn translate(&self, t: &[Rational]) -> Self {
        let shift = |x: &Point| x.iter().zip(t).map(|(a, b)| a - b).collect::<Point>();
        match self {
            FeasibleSet::Polytope(p) => FeasibleSet::Polytope(Polytope {
                dim: p.dim,
                rows: p.rows.iter().map(|r| r.translate(t)).collect(),
            }),
            FeasibleSet::PointCloud(c) => FeasibleSet::PointCloud(PointCloud {
                dim: c.dim,
                points: c.points.iter().map(shift).collect(),
            }),
            FeasibleSet::BallBox(b) => FeasibleSet::BallBox(BallBox {
                center: shift(&b.center),
                radius_sq: b.radius_sq.clone(),
                lower: shift(&b.lower),
                upper: shift(&b.upper),
                halfspaces: b.halfspaces.iter().map(|r| r.translate(t)).collect(),
            }),
        }
    }
}

pub fn polytope_oracle(p: &Polytope, q: &LinearQuery) -> Result<OracleResult, OracleError> {
    q.check_dim(p.dim)?;
    let rows: Vec<LinearInequality> = p.rows.iter().cloned().chain(q.rows()).collect();
    Ok(lp::minimize(&q.objective, &rows)?.into())
}

/// Exact scan; objective ties go to the lexicographically smallest point.
pub fn pointcloud_oracle(c: &PointCloud, q: &LinearQuery) -> Result<OracleResult, OracleError> {
    q.check_dim(c.dim)?;
    let best = c
        .points
        .iter()
        .filter(|x| q.admits(x))
        .map(|x| (dot(&q.objective, x), x))
        .min_by(|(va, xa), (vb, xb)| va.cmp(vb).then_with(|| xa.cmp(xb)));
    Ok(match best {
        Some((value, x)) => OracleResult::Optimal {
            point: x.clone(),
            value,
        },
        None => OracleResult::Infeasible,
    })
}

/// Kelley outer approximation of the ball, one LP per tangent.
///
/// The LP objective carries a tiny fixed perturbation so that degenerate
/// optimal faces resolve to a single target point and the tangents converge
/// there instead of wandering across the face.
pub fn ballbox_oracle(
    b: &BallBox,
    q: &LinearQuery,
    cfg: &OracleConfig,
) -> Result<OracleResult, OracleError> {
    let n = b.dim();
    q.check_dim(n)?;
    let mut rows: Vec<LinearInequality> = b.box_rows();
    rows.extend(b.halfspaces.iter().cloned());
    rows.extend(q.rows());
    let perturbed: Vec<Rational> = q
        .objective
        .iter()
        .enumerate()
        .map(|(j, v)| {
            v + Rational::new(
                One::one(),
                num_traits::pow(crate::rational::int(2), 40 + 8 * j),
            )
        })
        .collect();
    for _ in 0..=cfg.max_tangents {
        let point = match lp::minimize(&perturbed, &rows)? {
            LpOutcome::Infeasible => return Ok(OracleResult::Infeasible),
            LpOutcome::Optimal { point, .. } => point,
        };
        if b.violation(&point) <= cfg.eps {
            let value = dot(&q.objective, &point);
            return Ok(OracleResult::Optimal { point, value });
        }
        rows.push(b.tangent_cut(&point));
    }
    Err(OracleError::IterationLimit(cfg.max_tangents))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::rat_int;
    use proptest::prelude::*;

    fn pt(v: &[(i64, i64)]) -> Point {
        v.iter().map(|&(p, q)| rat(p, q)).collect()
    }

    fn ipt(v: &[i64]) -> Point {
        v.iter().map(|&x| rat_int(x)).collect()
    }

    fn ineq(c: &[i64], r: Rational) -> LinearInequality {
        LinearInequality::new(ipt(c), r)
    }

    /// Triangle with vertices (0,3/2), (1/4,0), (1,0).
    pub(crate) fn triangle2() -> Polytope {
        Polytope::new(
            2,
            vec![
                ineq(&[0, 1], rat_int(0)),
                ineq(&[-6, -4], rat_int(-6)),
                ineq(&[6, 1], rat(3, 2)),
            ],
        )
        .unwrap()
    }

    fn small_ball() -> BallBox {
        BallBox::hard_instance(2)
    }

    fn close(a: &Rational, b: f64, tol: f64) -> bool {
        (to_f64(a) - b).abs() <= tol
    }

    #[test]
    fn polytope_examples() {
        let t = triangle2();
        let r = polytope_oracle(&t, &LinearQuery::minimize(ipt(&[1, 0]))).unwrap();
        assert_eq!(
            r,
            OracleResult::Optimal {
                point: pt(&[(0, 1), (3, 2)]),
                value: rat_int(0)
            }
        );
        let r = polytope_oracle(
            &t,
            &LinearQuery::minimize(ipt(&[0, 1])).with_equality(ipt(&[1, 0]), rat_int(0)),
        )
        .unwrap();
        assert_eq!(
            r,
            OracleResult::Optimal {
                point: pt(&[(0, 1), (3, 2)]),
                value: rat(3, 2)
            }
        );
        let r = polytope_oracle(
            &t,
            &LinearQuery::minimize(ipt(&[1, 0])).with_inequality(ineq(&[1, 0], rat_int(10))),
        )
        .unwrap();
        assert_eq!(r, OracleResult::Infeasible);
    }

    #[test]
    fn unbounded_polytope_rejected() {
        let half = vec![ineq(&[1, 0], rat_int(0)), ineq(&[0, 1], rat_int(0))];
        assert!(matches!(
            Polytope::new(2, half),
            Err(OracleError::InvalidSet(_))
        ));
    }

    #[test]
    fn pointcloud_examples() {
        let c = PointCloud::new(2, vec![ipt(&[1, 2]), ipt(&[1, 1]), ipt(&[2, 0])]).unwrap();
        assert_eq!(
            pointcloud_oracle(&c, &LinearQuery::minimize(ipt(&[1, 0]))).unwrap(),
            OracleResult::Optimal {
                point: ipt(&[1, 1]),
                value: rat_int(1)
            }
        );
        let single = PointCloud::new(2, vec![ipt(&[1, 2])]).unwrap();
        assert_eq!(
            pointcloud_oracle(
                &single,
                &LinearQuery::minimize(ipt(&[1, 0])).with_inequality(ineq(&[1, 0], rat_int(2)))
            )
            .unwrap(),
            OracleResult::Infeasible
        );
        let two = PointCloud::new(2, vec![pt(&[(1, 2), (0, 1)]), ipt(&[3, 3])]).unwrap();
        assert_eq!(
            pointcloud_oracle(
                &two,
                &LinearQuery::minimize(ipt(&[1, 1])).with_inequality(ineq(&[1, 1], rat_int(2)))
            )
            .unwrap(),
            OracleResult::Optimal {
                point: ipt(&[3, 3]),
                value: rat_int(6)
            }
        );
    }

    #[test]
    fn ballbox_examples() {
        let b = small_ball();
        let cfg = OracleConfig::default();
        let r = ballbox_oracle(&b, &LinearQuery::minimize(ipt(&[1, 0])), &cfg).unwrap();
        assert!(close(r.value().unwrap(), 0.0, 1e-9));
        let r = ballbox_oracle(
            &b,
            &LinearQuery::minimize(ipt(&[0, 1])).with_equality(ipt(&[1, 0]), rat_int(0)),
            &cfg,
        )
        .unwrap();
        assert!(
            close(r.value().unwrap(), 0.25, 1e-8),
            "{:?}",
            r.value().map(to_f64)
        );
        assert!(b.violation(r.point().unwrap()) <= cfg.eps);
        let r = ballbox_oracle(
            &b,
            &LinearQuery::minimize(ipt(&[1, 0]))
                .with_inequality(ineq(&[1, 0], rat_int(1)))
                .with_inequality(ineq(&[1, 1], rat_int(2))),
            &cfg,
        )
        .unwrap();
        assert_eq!(r, OracleResult::Infeasible);
    }

    #[test]
    fn ballbox_after_cut_has_irrational_minimum() {
        let b = small_ball();
        let r = ballbox_oracle(
            &b,
            &LinearQuery::minimize(ipt(&[1, 0])).with_inequality(ineq(&[1, 1], rat_int(1))),
            &OracleConfig::default(),
        )
        .unwrap();
        let expected = 0.5 - 10f64.sqrt() / 8.0;
        assert!(close(r.value().unwrap(), expected, 1e-8));
    }

    #[test]
    fn restrict_examples() {
        let square = Polytope::new(
            2,
            vec![
                ineq(&[1, 0], rat_int(0)),
                ineq(&[0, 1], rat_int(0)),
                ineq(&[-1, 0], rat_int(-3)),
                ineq(&[0, -1], rat_int(-3)),
            ],
        )
        .unwrap();
        let h = ineq(&[1, 0], rat_int(1));
        match FeasibleSet::Polytope(square.clone()).restrict(h.clone()) {
            FeasibleSet::Polytope(p) => {
                assert_eq!(p.rows().len(), 5);
                assert_eq!(p.rows().last(), Some(&h));
            }
            _ => unreachable!(),
        }
        let cloud =
            FeasibleSet::PointCloud(PointCloud::new(2, vec![ipt(&[0, 0]), ipt(&[2, 2])]).unwrap());
        assert_eq!(
            cloud.restrict(h.clone()),
            FeasibleSet::PointCloud(PointCloud::new(2, vec![ipt(&[2, 2])]).unwrap())
        );
        let ball = FeasibleSet::BallBox(small_ball());
        let g = ineq(&[1, 1], rat_int(1));
        match ball.restrict(g.clone()) {
            FeasibleSet::BallBox(b) => {
                assert_eq!(b.halfspaces, vec![g]);
                assert_eq!(b.center, small_ball().center);
            }
            _ => unreachable!(),
        }
    }

    #[test]
    fn translation_shifts_membership() {
        let s = FeasibleSet::Polytope(triangle2());
        let t = ipt(&[0, -1]);
        let moved = s.translate(&t);
        assert!(moved.contains(&pt(&[(1, 1), (1, 1)])));
        assert!(!moved.contains(&pt(&[(1, 1), (0, 1)])));
        let b = FeasibleSet::BallBox(small_ball()).translate(&ipt(&[1, 1]));
        assert!(b.contains(&pt(&[(-1, 1), (-3, 4)])));
    }

    fn polytope_strategy() -> impl Strategy<Value = (Polytope, Vec<Rational>, LinearInequality)> {
        (2usize..=3).prop_flat_map(|n| {
            (
                prop::collection::vec(
                    (prop::collection::vec(-3i64..=3, n), -12i64..=12, 1i64..=4),
                    0..4,
                ),
                prop::collection::vec(-3i64..=3, n),
                (prop::collection::vec(-3i64..=3, n), -6i64..=6),
            )
                .prop_map(move |(extra, obj, (hc, hr))| {
                    let mut rows = vec![];
                    for j in 0..n {
                        let mut e = vec![0; n];
                        e[j] = 1;
                        rows.push(ineq(&e, rat_int(-2)));
                        e[j] = -1;
                        rows.push(ineq(&e, rat_int(-2)));
                    }
                    for (c, p, q) in extra {
                        rows.push(ineq(&c, rat(p, q)));
                    }
                    (
                        Polytope::new(n, rows).unwrap(),
                        ipt(&obj),
                        ineq(&hc, rat_int(hr)),
                    )
                })
        })
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(100))]

        #[test]
        fn restrict_then_query_equals_appended_halfspace((p, obj, h) in polytope_strategy()) {
            let s = FeasibleSet::Polytope(p);
            let cfg = OracleConfig::default();
            let q = LinearQuery::minimize(obj);
            let a = s.restrict(h.clone()).optimize(&q, &cfg).unwrap();
            let b = s.optimize(&q.clone().with_inequality(h), &cfg).unwrap();
            prop_assert_eq!(a, b);
        }

        #[test]
        fn cloud_oracle_never_misses_a_witness(
            pts in prop::collection::vec(prop::collection::vec(-4i64..=4, 2), 0..8),
            h in (prop::collection::vec(-2i64..=2, 2), -3i64..=3),
        ) {
            let cloud = PointCloud::new(2, pts.iter().map(|p| ipt(p)).collect()).unwrap();
            let h = ineq(&h.0, rat_int(h.1));
            let r = pointcloud_oracle(&cloud, &LinearQuery::feasibility(2).with_inequality(h.clone())).unwrap();
            let witness = cloud.points().iter().any(|x| h.is_satisfied(x));
            prop_assert_eq!(r.is_feasible(), witness);
        }
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(24))]

        #[test]
        fn ballbox_matches_closed_form(
            n in 1usize..=4,
            center in prop::collection::vec(-4i64..=4, 4),
            radius in 1i64..=6,
            coord in 0usize..4,
            sign in prop::bool::ANY,
        ) {
            let coord = coord % n;
            let c: Point = center[..n].iter().map(|&v| rat(v, 4)).collect();
            let lower = vec![rat_int(-1); n];
            let upper = vec![rat_int(1); n];
            let r2 = rat(radius * radius, 16);
            // Require the ball to meet the box so the set is nonempty.
            let gap: f64 = c.iter().map(|v| { let d = (to_f64(v).abs() - 1.0).max(0.0); d * d }).sum();
            prop_assume!(gap < to_f64(&r2));
            let b = BallBox::new(c.clone(), r2.clone(), lower, upper).unwrap();
            let mut obj = vec![rat_int(0); n];
            obj[coord] = rat_int(if sign { 1 } else { -1 });
            let r = ballbox_oracle(&b, &LinearQuery::minimize(obj), &OracleConfig::default()).unwrap();
            let others: f64 = c.iter().enumerate().filter(|&(j, _)| j != coord)
                .map(|(_, v)| { let d = (to_f64(v).abs() - 1.0).max(0.0); d * d }).sum();
            let reach = (to_f64(&r2) - others).sqrt();
            let ci = to_f64(&c[coord]);
            let expected = if sign { (ci - reach).max(-1.0) } else { -(ci + reach).min(1.0) };
            prop_assert!((to_f64(r.value().unwrap()) - expected).abs() <= 1e-6,
                "got {} expected {}", to_f64(r.value().unwrap()), expected);
        }
    }
}
