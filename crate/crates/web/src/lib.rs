//! Browser demo: lex-cut traces on clicked 2-D sets, `Q(x̄)` descriptions,
//! and the ball instance. Every export takes and returns JSON strings; the
//! `*_json` functions hold the logic so they can be tested natively.

use lexcut::analysis::{
    brute_force_integer_opt, int_box, s_up_pointcloud, v_set, DEFAULT_CELL_CAP,
};
use lexcut::lattice::{IntMatrix, LatticeBasis};
use lexcut::lex::{
    extreme_points, int_point, lex_cmp, q_description, satisfies_all, LinearInequality,
};
use lexcut::oracle::{BallBox, FeasibleSet, PointCloud, Polytope};
use lexcut::rational::{parse_rational, to_f64, Int, Rational};
use lexcut::solver::{
    algorithm1_solve, algorithm2_solve, Outcome, SolveOptions, SolveOutcome, Trace,
};
use serde::Deserialize;
use serde_json::{json, Value};
use wasm_bindgen::prelude::*;

type Res<T> = Result<T, String>;

fn err(e: impl std::fmt::Display) -> String {
    e.to_string()
}

fn floats(v: &[Rational]) -> Vec<f64> {
    v.iter().map(to_f64).collect()
}

fn int_strings(v: &[Int]) -> Vec<String> {
    v.iter().map(Int::to_string).collect()
}

fn ineq_json(h: &LinearInequality) -> Value {
    json!({ "a": floats(&h.coeffs), "b": to_f64(&h.rhs), "text": h.to_string() })
}

fn basis_from(rows: Option<&Vec<Vec<i64>>>, n: usize) -> Res<Option<LatticeBasis>> {
    let Some(rows) = rows else { return Ok(None) };
    let m = IntMatrix::from_rows(
        rows.iter()
            .map(|r| r.iter().map(|&v| Int::from(v)).collect())
            .collect(),
    )
    .map_err(err)?;
    let b = LatticeBasis::new(m).map_err(err)?;
    if b.dim() != n {
        return Err(format!("basis must be {n} x {n}"));
    }
    Ok(Some(b))
}

fn cross(o: &[Rational], a: &[Rational], b: &[Rational]) -> Rational {
    (&a[0] - &o[0]) * (&b[1] - &o[1]) - (&a[1] - &o[1]) * (&b[0] - &o[0])
}

/// Counter-clockwise hull vertices (monotone chain, exact).
pub fn convex_hull(points: &[Vec<Rational>]) -> Vec<Vec<Rational>> {
    let mut pts = points.to_vec();
    pts.sort();
    pts.dedup();
    if pts.len() < 3 {
        return pts;
    }
    let mut hull: Vec<Vec<Rational>> = Vec::new();
    for pass in 0..2 {
        let start = hull.len();
        let iter: Box<dyn Iterator<Item = &Vec<Rational>>> = if pass == 0 {
            Box::new(pts.iter())
        } else {
            Box::new(pts.iter().rev())
        };
        for p in iter {
            while hull.len() >= start + 2
                && cross(&hull[hull.len() - 2], &hull[hull.len() - 1], p)
                    <= Rational::from(Int::from(0))
            {
                hull.pop();
            }
            hull.push(p.clone());
        }
        hull.pop();
    }
    hull
}

/// `A x >= b` rows of the polygon spanned by `vertices`.
pub fn polygon(vertices: &[Vec<Rational>]) -> Res<(Polytope, Vec<Vec<Rational>>)> {
    let hull = convex_hull(vertices);
    if hull.len() < 3 {
        return Err("a polygon needs three points that are not on one line".into());
    }
    let rows = (0..hull.len())
        .map(|i| {
            let (p, q) = (&hull[i], &hull[(i + 1) % hull.len()]);
            // Interior is to the left of p -> q.
            let a = vec![&p[1] - &q[1], &q[0] - &p[0]];
            let b = &a[0] * &p[0] + &a[1] * &p[1];
            LinearInequality::new(a, b)
        })
        .collect();
    Ok((Polytope::new(2, rows).map_err(err)?, hull))
}

#[derive(Deserialize)]
struct SolveRequest {
    objective: Vec<i64>,
    #[serde(default)]
    basis: Option<Vec<Vec<i64>>>,
    algorithm: String,
    shape: String,
    points: Vec<[String; 2]>,
}

fn outcome_json(o: &Outcome) -> Value {
    match o {
        Outcome::IntegerOptimal { point, value } => {
            json!({ "status": "optimal", "point": int_strings(point), "value": value.to_string() })
        }
        Outcome::IntegerInfeasible => json!({ "status": "infeasible" }),
    }
}

fn steps_json(out: &SolveOutcome) -> Vec<Value> {
    match &out.trace {
        Trace::Cuts(its) => its
            .iter()
            .map(|it| {
                json!({
                    "xbar": it.xbar.as_deref().map(floats),
                    "xbar_up": it.xbar_up.as_deref().map(int_strings),
                    "cut": it.cut.as_ref().map(|c| ineq_json(&c.inequality)),
                })
            })
            .collect(),
        Trace::Enum(states) => states
            .iter()
            .map(|s| {
                json!({
                    "alpha": int_strings(&s.alpha),
                    "i_star": s.i_star,
                    "empty": s.sstar_empty,
                    "xbar": s.xbar.as_deref().map(floats),
                    "xbar_up": s.xbar_up.as_deref().map(int_strings),
                })
            })
            .collect(),
    }
}

/// Solves over clicked points, either as a point cloud or as their convex
/// hull, and returns the trace for drawing.
pub fn solve_2d_json(request: &str) -> Res<String> {
    let req: SolveRequest = serde_json::from_str(request).map_err(err)?;
    if req.objective.len() != 2 {
        return Err("objective must have two entries".into());
    }
    let pts = req
        .points
        .iter()
        .map(|[x, y]| {
            Ok(vec![
                parse_rational(x).map_err(err)?,
                parse_rational(y).map_err(err)?,
            ])
        })
        .collect::<Res<Vec<_>>>()?;
    if pts.is_empty() {
        return Err("no points".into());
    }
    let (set, outline) = match req.shape.as_str() {
        "points" => (
            FeasibleSet::PointCloud(PointCloud::new(2, pts.clone()).map_err(err)?),
            pts,
        ),
        "polygon" => {
            let (p, hull) = polygon(&pts)?;
            (FeasibleSet::Polytope(p), hull)
        }
        s => return Err(format!("unknown shape {s:?}")),
    };
    let obj: Vec<Int> = req.objective.iter().map(|&v| Int::from(v)).collect();
    let basis = basis_from(req.basis.as_ref(), 2)?;
    let opts = SolveOptions::default();
    let out = match req.algorithm.as_str() {
        "cut" => algorithm1_solve(&set, &obj, basis.as_ref(), &opts),
        "enum" => algorithm2_solve(&set, &obj, basis.as_ref(), &opts),
        a => return Err(format!("unknown algorithm {a:?}")),
    }
    .map_err(err)?;
    let check =
        brute_force_integer_opt(&set, &obj, Some(&out.basis), DEFAULT_CELL_CAP).map_err(err)?;
    Ok(json!({
        "outline": outline.iter().map(|p| floats(p)).collect::<Vec<_>>(),
        "basis": out.basis.matrix().to_rows().iter().map(|r| int_strings(r)).collect::<Vec<_>>(),
        "outcome": outcome_json(&out.outcome),
        "brute_force_agrees": check == out.outcome,
        "cuts": out.stats.cuts,
        "iterations": out.stats.iterations,
        "oracle_calls": out.stats.oracle_calls,
        "steps": steps_json(&out),
    })
    .to_string())
}

#[derive(Deserialize)]
struct HullRequest {
    #[serde(default)]
    basis: Option<Vec<Vec<i64>>>,
    xbar: Vec<i64>,
    /// Integer points with coordinates in `[lo, hi]` are classified.
    lo: i64,
    hi: i64,
}

/// Inequalities and vertices of `Q(x̄)`, plus every integer point in the
/// window marked by whether it satisfies them and whether it is lex-greater
/// or equal to `x̄` (the two flags must agree inside the cone).
pub fn q_description_json(request: &str) -> Res<String> {
    let req: HullRequest = serde_json::from_str(request).map_err(err)?;
    let n = req.xbar.len();
    let basis = basis_from(req.basis.as_ref(), n)?.unwrap_or_else(|| LatticeBasis::standard(n));
    let xbar: Vec<Int> = req.xbar.iter().map(|&v| Int::from(v)).collect();
    let q = q_description(&basis, &xbar, false).map_err(err)?;
    let vertices = if xbar.iter().all(|v| *v == Int::from(0)) {
        vec![xbar.clone()]
    } else {
        extreme_points(&basis, &xbar).map_err(err)?
    };
    if req.hi < req.lo || req.hi - req.lo > 40 {
        return Err("window must span at most 40 units".into());
    }
    let xb = int_point(&xbar);
    let cone = lexcut::lex::cone_inequalities(&basis);
    let points = int_box(&vec![req.lo; n], &vec![req.hi; n])
        .map(|x| {
            let p = int_point(&x);
            Ok(json!({
                "x": int_strings(&x),
                "in_cone": satisfies_all(&cone, &p),
                "inside": satisfies_all(&q, &p),
                "lex_ge": lex_cmp(&basis, &p, &xb).map_err(err)? != std::cmp::Ordering::Less,
            }))
        })
        .collect::<Res<Vec<Value>>>()?;
    Ok(json!({
        "inequalities": q.iter().map(ineq_json).collect::<Vec<_>>(),
        "vertices": vertices.iter().map(|v| int_strings(v)).collect::<Vec<_>>(),
        "points": points,
    })
    .to_string())
}

/// Both algorithms on the ball instance of dimension `n` (2 to 4).
pub fn ball_trace_json(n: usize) -> Res<String> {
    if !(2..=4).contains(&n) {
        return Err("n must be 2, 3 or 4".into());
    }
    let set = FeasibleSet::BallBox(BallBox::hard_instance(n));
    let std = LatticeBasis::standard(n);
    let mut obj = vec![Int::from(0); n];
    obj[0] = Int::from(1);
    let opts = SolveOptions::default();
    let a = algorithm1_solve(&set, &obj, Some(&std), &opts).map_err(err)?;
    let b = algorithm2_solve(&set, &obj, Some(&std), &opts).map_err(err)?;
    let ups: Vec<Vec<String>> = match &a.trace {
        Trace::Cuts(its) => its
            .iter()
            .filter(|i| i.cut.is_some())
            .filter_map(|i| i.xbar_up.as_deref().map(int_strings))
            .collect(),
        Trace::Enum(_) => Vec::new(),
    };
    let alphas: Vec<Vec<String>> = match &b.trace {
        Trace::Enum(s) => s.iter().map(|s| int_strings(&s.alpha)).collect(),
        Trace::Cuts(_) => Vec::new(),
    };
    let binary: Vec<Vec<Int>> = int_box(&vec![0; n], &vec![1; n]).skip(1).collect();
    let cloud = PointCloud::new(n, binary.iter().map(|x| int_point(x)).collect()).map_err(err)?;
    let v = v_set(&std, &s_up_pointcloud(&cloud, &std).map_err(err)?);
    Ok(json!({
        "n": n,
        "cuts": a.stats.cuts,
        "xbar_up": ups,
        "enum_steps": b.stats.iterations,
        "alphas": alphas,
        "v_size": v.len(),
        "outcome": outcome_json(&a.outcome),
    })
    .to_string())
}

#[wasm_bindgen]
pub fn solve_2d(request: &str) -> Result<String, JsError> {
    solve_2d_json(request).map_err(|e| JsError::new(&e))
}

#[wasm_bindgen]
pub fn q_description_2d(request: &str) -> Result<String, JsError> {
    q_description_json(request).map_err(|e| JsError::new(&e))
}

#[wasm_bindgen]
pub fn ball_trace(n: usize) -> Result<String, JsError> {
    ball_trace_json(n).map_err(|e| JsError::new(&e))
}

#[cfg(test)]
mod tests {
    use super::*;
    use lexcut::rational::rat;

    fn parse(s: &str) -> Value {
        serde_json::from_str(s).unwrap()
    }

    #[test]
    fn hull_of_triangle_with_interior_point() {
        let pts = vec![
            vec![rat(0, 1), rat(3, 2)],
            vec![rat(1, 4), rat(0, 1)],
            vec![rat(1, 1), rat(0, 1)],
            vec![rat(1, 2), rat(1, 2)],
        ];
        let (p, hull) = polygon(&pts).unwrap();
        assert_eq!(hull.len(), 3);
        assert!(p.contains(&[rat(1, 2), rat(1, 2)]));
        assert!(!p.contains(&[rat(0, 1), rat(0, 1)]));
        assert!(polygon(&pts[1..3]).is_err());
    }

    #[test]
    fn triangle_gives_one_cut() {
        let req = r#"{"objective":[1,0],"basis":[[1,0],[0,1]],"algorithm":"cut","shape":"polygon",
                      "points":[["0","3/2"],["1/4","0"],["1","0"]]}"#;
        let v = parse(&solve_2d_json(req).unwrap());
        assert_eq!(v["cuts"], 1);
        assert_eq!(v["outcome"]["point"], json!(["1", "0"]));
        assert_eq!(v["steps"][0]["cut"]["text"], "2 x1 + 1 x2 >= 2");
        assert_eq!(v["brute_force_agrees"], true);
    }

    #[test]
    fn cloud_enumeration_trace() {
        let req = r#"{"objective":[1,0],"basis":[[1,0],[0,1]],"algorithm":"enum","shape":"points",
                      "points":[["1/2","0"],["1","1"]]}"#;
        let v = parse(&solve_2d_json(req).unwrap());
        assert_eq!(v["iterations"], 2);
        assert_eq!(v["steps"][1]["alpha"], json!(["1", "0"]));
    }

    #[test]
    fn bad_requests_are_errors() {
        assert!(solve_2d_json("{}").is_err());
        let req = r#"{"objective":[1,0],"algorithm":"cut","shape":"points","points":[["x","0"]]}"#;
        assert!(solve_2d_json(req).is_err());
        assert!(ball_trace_json(5).is_err());
    }

    #[test]
    fn q_description_flags_agree_in_cone() {
        let v = parse(&q_description_json(r#"{"xbar":[1,2],"lo":0,"hi":5}"#).unwrap());
        assert_eq!(v["inequalities"].as_array().unwrap().len(), 4);
        for p in v["points"].as_array().unwrap() {
            assert_eq!(p["inside"], p["lex_ge"], "{p}");
        }
        let v = parse(
            &q_description_json(r#"{"basis":[[1,1],[0,1]],"xbar":[1,1],"lo":-3,"hi":4}"#).unwrap(),
        );
        for p in v["points"].as_array().unwrap() {
            if p["in_cone"] == true {
                assert_eq!(p["inside"], p["lex_ge"], "{p}");
            }
        }
    }

    #[test]
    fn ball_counts() {
        let v = parse(&ball_trace_json(3).unwrap());
        assert_eq!(v["cuts"], 7);
        assert_eq!(v["enum_steps"], 11);
        assert_eq!(v["v_size"], 10);
    }
}
