//! Instance files.

use std::path::Path;

use anyhow::{bail, Context, Result};
use lexcut::lattice::{gcd_normalize, IntMatrix, LatticeBasis};
use lexcut::lex::LinearInequality;
use lexcut::oracle::{BallBox, FeasibleSet, PointCloud, Polytope};
use lexcut::rational::Int;
use serde::{Deserialize, Serialize};

use crate::json::{ints, rats, Integer, Rat};

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct InstanceFile {
    pub n: usize,
    pub objective: Vec<Integer>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub basis: Option<Vec<Vec<Integer>>>,
    pub set: SetSpec,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub enum SetSpec {
    /// `A x >= b`.
    #[serde(rename = "polytope")]
    Polytope {
        #[serde(rename = "A")]
        a: Vec<Vec<Rat>>,
        b: Vec<Rat>,
    },
    #[serde(rename = "pointcloud")]
    PointCloud { points: Vec<Vec<Rat>> },
    #[serde(rename = "ball_box")]
    BallBox {
        center: Vec<Rat>,
        radius_sq: Rat,
        lower: Vec<Rat>,
        upper: Vec<Rat>,
    },
}

/// A validated instance.
#[derive(Debug, Clone)]
pub struct Instance {
    pub objective: Vec<Int>,
    pub basis: Option<LatticeBasis>,
    pub set: FeasibleSet,
}

impl Instance {
    /// The basis to run with: the given one, or the completion of the
    /// normalized objective.
    pub fn basis_or_default(&self) -> Result<LatticeBasis> {
        match &self.basis {
            Some(b) => Ok(b.clone()),
            None => Ok(LatticeBasis::for_objective(&self.objective)?),
        }
    }
}

pub fn parse_instance(text: &str) -> Result<Instance> {
    let de = &mut serde_json::Deserializer::from_str(text);
    let file: InstanceFile = serde_path_to_error::deserialize(de).map_err(|e| {
        let path = e.path().to_string();
        let inner = e.into_inner();
        anyhow::anyhow!(
            "schema error at {path} (line {}, column {}): {inner}",
            inner.line(),
            inner.column()
        )
    })?;
    file.validate()
}

pub fn load_instance(path: &Path) -> Result<Instance> {
    let text =
        std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    parse_instance(&text).with_context(|| format!("in {}", path.display()))
}

fn check_len(what: &str, got: usize, n: usize) -> Result<()> {
    if got != n {
        bail!("{what} has length {got}, expected n = {n}");
    }
    Ok(())
}

impl InstanceFile {
    pub fn validate(&self) -> Result<Instance> {
        let n = self.n;
        if n == 0 {
            bail!("n must be positive");
        }
        check_len("objective", self.objective.len(), n)?;
        let objective = ints(&self.objective);
        let (normalized, _) = gcd_normalize(&objective).context("objective")?;
        let basis = match &self.basis {
            None => None,
            Some(rows) => {
                check_len("basis", rows.len(), n)?;
                for (i, r) in rows.iter().enumerate() {
                    check_len(&format!("basis[{i}]"), r.len(), n)?;
                }
                let m = IntMatrix::from_rows(rows.iter().map(|r| ints(r)).collect())?;
                let b = LatticeBasis::new(m)?;
                if b.row(0) != normalized.as_slice() {
                    bail!("basis first row must equal the normalized objective");
                }
                Some(b)
            }
        };
        let set = match &self.set {
            SetSpec::Polytope { a, b } => {
                if a.len() != b.len() {
                    bail!(
                        "set.polytope: A has {} rows but b has {} entries",
                        a.len(),
                        b.len()
                    );
                }
                let mut rows = Vec::with_capacity(a.len());
                for (i, (row, rhs)) in a.iter().zip(b).enumerate() {
                    check_len(&format!("set.polytope.A[{i}]"), row.len(), n)?;
                    rows.push(LinearInequality::new(rats(row), rhs.0.clone()));
                }
                FeasibleSet::Polytope(Polytope::new(n, rows).context("set.polytope")?)
            }
            SetSpec::PointCloud { points } => {
                for (i, p) in points.iter().enumerate() {
                    check_len(&format!("set.pointcloud.points[{i}]"), p.len(), n)?;
                }
                let pts = points.iter().map(|p| rats(p)).collect();
                FeasibleSet::PointCloud(PointCloud::new(n, pts).context("set.pointcloud")?)
            }
            SetSpec::BallBox {
                center,
                radius_sq,
                lower,
                upper,
            } => {
                check_len("set.ball_box.center", center.len(), n)?;
                check_len("set.ball_box.lower", lower.len(), n)?;
                check_len("set.ball_box.upper", upper.len(), n)?;
                FeasibleSet::BallBox(
                    BallBox::new(rats(center), radius_sq.0.clone(), rats(lower), rats(upper))
                        .context("set.ball_box")?,
                )
            }
        };
        Ok(Instance {
            objective,
            basis,
            set,
        })
    }
}
