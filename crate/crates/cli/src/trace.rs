//! Trace files: run metadata plus one record per iteration.
//!
//! Points found by the numeric (ball) oracle are written as decimal strings
//! with `DECIMAL_DIGITS` fractional digits; everything else is exact.

use anyhow::{bail, Context, Result};
use lexcut::lex::{LexCut, LinearInequality};
use lexcut::rational::{format_rational, parse_rational, to_decimal, Rational};
use lexcut::solver::{
    CutIteration, EnumState, IterationStatus, Outcome, SolveOptions, SolveOutcome, Trace,
};
use serde::{Deserialize, Serialize};

use crate::json::{ints, rats, to_ints, to_rats, Integer, Rat};

pub const DECIMAL_DIGITS: usize = 15;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TraceFile {
    pub algorithm: String,
    pub set_kind: String,
    /// True when points come from the numeric oracle and are rounded.
    pub numeric: bool,
    pub eps: Rat,
    pub snap: Rat,
    pub basis: Vec<Vec<Integer>>,
    pub translation: Vec<Integer>,
    pub ell: Vec<Integer>,
    pub outcome: OutcomeRecord,
    pub stats: StatsRecord,
    pub iterations: Iterations,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "status", rename_all = "snake_case", deny_unknown_fields)]
pub enum OutcomeRecord {
    Optimal { point: Vec<Integer>, value: Integer },
    Infeasible,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct StatsRecord {
    pub cuts: usize,
    pub iterations: usize,
    pub oracle_calls: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Iterations {
    Cuts(Vec<CutRecord>),
    Enum(Vec<EnumRecord>),
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CutRecord {
    pub status: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub xbar: Option<Vec<String>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub xbar_up: Option<Vec<Integer>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub k: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub cut: Option<CutSpec>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CutSpec {
    pub k: usize,
    pub d: Vec<Integer>,
    pub coeffs: Vec<Rat>,
    pub rhs: Rat,
    /// Human-readable form; ignored when reading.
    pub text: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct EnumRecord {
    /// In translated coordinates.
    pub alpha: Vec<Integer>,
    pub i_star: usize,
    pub sstar_empty: bool,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub xbar: Option<Vec<String>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub xbar_up: Option<Vec<Integer>>,
}

fn status_name(s: IterationStatus) -> &'static str {
    match s {
        IterationStatus::Cut => "cut",
        IterationStatus::Optimal => "optimal",
        IterationStatus::Infeasible => "infeasible",
    }
}

fn parse_status(s: &str) -> Result<IterationStatus> {
    Ok(match s {
        "cut" => IterationStatus::Cut,
        "optimal" => IterationStatus::Optimal,
        "infeasible" => IterationStatus::Infeasible,
        _ => bail!("unknown iteration status {s:?}"),
    })
}

fn point_strings(x: &[Rational], numeric: bool) -> Vec<String> {
    x.iter()
        .map(|v| {
            if numeric {
                to_decimal(v, DECIMAL_DIGITS)
            } else {
                format_rational(v)
            }
        })
        .collect()
}

fn parse_point(x: &[String]) -> Result<Vec<Rational>> {
    x.iter().map(|s| Ok(parse_rational(s)?)).collect()
}

impl TraceFile {
    pub fn new(
        algorithm: &str,
        set_kind: &str,
        numeric: bool,
        opts: &SolveOptions,
        out: &SolveOutcome,
    ) -> Self {
        let outcome = match &out.outcome {
            Outcome::IntegerOptimal { point, value } => OutcomeRecord::Optimal {
                point: to_ints(point),
                value: Integer(value.clone()),
            },
            Outcome::IntegerInfeasible => OutcomeRecord::Infeasible,
        };
        let pt = |x: &Option<Vec<Rational>>| x.as_ref().map(|x| point_strings(x, numeric));
        let iterations = match &out.trace {
            Trace::Cuts(its) => Iterations::Cuts(
                its.iter()
                    .map(|it| CutRecord {
                        status: status_name(it.status).into(),
                        xbar: pt(&it.xbar),
                        xbar_up: it.xbar_up.as_deref().map(to_ints),
                        k: it.k,
                        cut: it.cut.as_ref().map(|c| CutSpec {
                            k: c.k,
                            d: to_ints(&c.d),
                            coeffs: to_rats(&c.inequality.coeffs),
                            rhs: Rat(c.inequality.rhs.clone()),
                            text: c.inequality.to_string(),
                        }),
                    })
                    .collect(),
            ),
            Trace::Enum(states) => Iterations::Enum(
                states
                    .iter()
                    .map(|s| EnumRecord {
                        alpha: to_ints(&s.alpha),
                        i_star: s.i_star,
                        sstar_empty: s.sstar_empty,
                        xbar: pt(&s.xbar),
                        xbar_up: s.xbar_up.as_deref().map(to_ints),
                    })
                    .collect(),
            ),
        };
        TraceFile {
            algorithm: algorithm.into(),
            set_kind: set_kind.into(),
            numeric,
            eps: Rat(opts.eps.clone()),
            snap: Rat(opts.snap.clone()),
            basis: out
                .basis
                .matrix()
                .to_rows()
                .iter()
                .map(|r| to_ints(r))
                .collect(),
            translation: to_ints(&out.translation),
            ell: to_ints(&out.ell),
            outcome,
            stats: StatsRecord {
                cuts: out.stats.cuts,
                iterations: out.stats.iterations,
                oracle_calls: out.stats.oracle_calls,
            },
            iterations,
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("trace serializes")
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let de = &mut serde_json::Deserializer::from_str(text);
        serde_path_to_error::deserialize(de)
            .map_err(|e| anyhow::anyhow!("trace schema error at {}: {}", e.path(), e.inner()))
    }

    pub fn outcome(&self) -> Outcome {
        match &self.outcome {
            OutcomeRecord::Optimal { point, value } => Outcome::IntegerOptimal {
                point: ints(point),
                value: value.0.clone(),
            },
            OutcomeRecord::Infeasible => Outcome::IntegerInfeasible,
        }
    }

    /// Rebuilds the solver trace. Exact for traces of exact runs.
    pub fn trace(&self) -> Result<Trace> {
        let pt = |x: &Option<Vec<String>>| x.as_deref().map(parse_point).transpose();
        Ok(match &self.iterations {
            Iterations::Cuts(its) => Trace::Cuts(
                its.iter()
                    .enumerate()
                    .map(|(i, r)| {
                        let status =
                            parse_status(&r.status).with_context(|| format!("iteration {i}"))?;
                        Ok(CutIteration {
                            xbar: pt(&r.xbar).with_context(|| format!("iteration {i}"))?,
                            xbar_up: r.xbar_up.as_deref().map(ints),
                            k: r.k,
                            cut: r.cut.as_ref().map(|c| LexCut {
                                k: c.k,
                                d: ints(&c.d),
                                inequality: LinearInequality::new(rats(&c.coeffs), c.rhs.0.clone()),
                            }),
                            status,
                        })
                    })
                    .collect::<Result<_>>()?,
            ),
            Iterations::Enum(states) => Trace::Enum(
                states
                    .iter()
                    .map(|s| {
                        Ok(EnumState {
                            alpha: ints(&s.alpha),
                            i_star: s.i_star,
                            sstar_empty: s.sstar_empty,
                            xbar: pt(&s.xbar)?,
                            xbar_up: s.xbar_up.as_deref().map(ints),
                        })
                    })
                    .collect::<Result<_>>()?,
            ),
        })
    }
}
