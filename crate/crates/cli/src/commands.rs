use std::io::Write;

use anyhow::{bail, Context, Result};
use lexcut::analysis::{
    enumerate_splits, hull_check, is_valid_split_cut, s_up_pointcloud, v_set, SplitDisjunction,
    DEFAULT_CELL_CAP,
};
use lexcut::lattice::{IntMatrix, LatticeBasis};
use lexcut::lex::{lexcut, q_description};
use lexcut::oracle::FeasibleSet;
use lexcut::rational::{ints_to_rats, parse_rational, Int, Tuple};
use lexcut::solver::{
    algorithm1_solve, algorithm2_solve, BoundRounding, Outcome, SolveOptions, SolveOutcome, Solver,
};

use crate::cli::{
    Algorithm, Cli, Command, CompareArgs, CutsArgs, HullArgs, SolveArgs, SplitArgs, Tolerances,
};
use crate::instance::load_instance;
use crate::trace::TraceFile;

pub const EXIT_OPTIMAL: i32 = 0;
pub const EXIT_ERROR: i32 = 1;
pub const EXIT_INFEASIBLE: i32 = 2;

/// Runs a parsed command, writing the report to `out`; returns the exit code.
pub fn run(cli: Cli, out: &mut dyn Write) -> Result<i32> {
    let limit = cli.iter_limit;
    match cli.command {
        Command::Solve(a) => solve(a, limit, out),
        Command::Cuts(a) => cuts(a, out),
        Command::HullCheck(a) => hull(a, out),
        Command::SplitCheck(a) => split(a, limit, out),
        Command::Compare(a) => compare(a, limit, out),
    }
}

fn options(tol: &Tolerances, limit: Option<usize>) -> Result<SolveOptions> {
    let mut o = SolveOptions::default();
    if let Some(e) = &tol.eps {
        o.eps = parse_rational(e).context("--eps")?;
    }
    if let Some(s) = &tol.snap {
        o.snap = parse_rational(s).context("--snap")?;
    }
    if let Some(l) = limit {
        o.iteration_limit = l;
    }
    Ok(o)
}

fn parse_ints(s: &str) -> Result<Vec<Int>> {
    s.split(',')
        .map(|t| {
            t.trim()
                .parse::<Int>()
                .with_context(|| format!("not an integer: {t:?}"))
        })
        .collect()
}

pub fn parse_basis(s: &str, n: usize) -> Result<LatticeBasis> {
    if s.trim() == "identity" {
        return Ok(LatticeBasis::standard(n));
    }
    let rows = s.split(';').map(parse_ints).collect::<Result<Vec<_>>>()?;
    let b = LatticeBasis::new(IntMatrix::from_rows(rows)?)?;
    if b.dim() != n {
        bail!("basis has dimension {}, point has {n} entries", b.dim());
    }
    Ok(b)
}

fn int_tuple(v: &[Int]) -> String {
    Tuple(&ints_to_rats(v)).to_string()
}

fn outcome_text(o: &Outcome) -> String {
    match o {
        Outcome::IntegerOptimal { point, value } => {
            format!("OPTIMAL {} value {value}", int_tuple(point))
        }
        Outcome::IntegerInfeasible => "INFEASIBLE".into(),
    }
}

fn exit_code(o: &Outcome) -> i32 {
    match o {
        Outcome::IntegerOptimal { .. } => EXIT_OPTIMAL,
        Outcome::IntegerInfeasible => EXIT_INFEASIBLE,
    }
}

fn solve(a: SolveArgs, limit: Option<usize>, out: &mut dyn Write) -> Result<i32> {
    let inst = load_instance(&a.instance)?;
    let mut opts = options(&a.tol, limit)?;
    opts.refresh_bounds = a.refresh_bounds;
    opts.strengthen_alpha = a.strengthen_alpha;
    opts.record_trace = !a.no_trace;
    let (res, name) = match a.algorithm {
        Algorithm::Cut => (
            algorithm1_solve(&inst.set, &inst.objective, inst.basis.as_ref(), &opts),
            "cut",
        ),
        Algorithm::Enum => (
            algorithm2_solve(&inst.set, &inst.objective, inst.basis.as_ref(), &opts),
            "enum",
        ),
    };
    let res = res?;
    match a.algorithm {
        Algorithm::Cut => writeln!(
            out,
            "{}; cuts: {}",
            outcome_text(&res.outcome),
            res.stats.cuts
        )?,
        Algorithm::Enum => writeln!(
            out,
            "{}; iterations: {}",
            outcome_text(&res.outcome),
            res.stats.iterations
        )?,
    }
    if let Some(path) = &a.trace {
        let tf = TraceFile::new(name, inst.set.kind(), !inst.set.is_exact(), &opts, &res);
        std::fs::write(path, tf.to_json())
            .with_context(|| format!("writing {}", path.display()))?;
    }
    Ok(exit_code(&res.outcome))
}

fn cuts(a: CutsArgs, out: &mut dyn Write) -> Result<i32> {
    let xbar = parse_ints(&a.xbar).context("--xbar")?;
    let n = xbar.len();
    let basis = match (&a.instance, &a.basis) {
        (Some(p), _) => {
            let b = load_instance(p)?.basis_or_default()?;
            if b.dim() != n {
                bail!("instance has dimension {}, --xbar has {n} entries", b.dim());
            }
            b
        }
        (None, Some(s)) => parse_basis(s, n)?,
        (None, None) => LatticeBasis::standard(n),
    };
    let lines = match a.k {
        Some(k) => vec![lexcut(&basis, &xbar, k)?.inequality],
        None => q_description(&basis, &xbar, false)?,
    };
    for h in lines {
        writeln!(out, "{h}")?;
    }
    Ok(0)
}

fn hull(a: HullArgs, out: &mut dyn Write) -> Result<i32> {
    let xbar = parse_ints(&a.xbar).context("--xbar")?;
    let basis = parse_basis(&a.basis, xbar.len())?;
    let perturb = a.perturb_rhs.as_deref().map(parse_rational).transpose()?;
    let rep = hull_check(
        &basis,
        &xbar,
        a.box_size,
        perturb.as_ref(),
        DEFAULT_CELL_CAP,
    )?;
    if rep.passed() {
        writeln!(
            out,
            "PASS: {} points agree with the description",
            rep.points
        )?;
        return Ok(0);
    }
    write!(
        out,
        "FAIL: {} of {} points disagree",
        rep.mismatches, rep.points
    )?;
    if let Some(y) = rep.examples.first() {
        write!(out, " (first at basis values {})", int_tuple(y))?;
    }
    if !rep.bad_vertices.is_empty() {
        write!(out, "; bad vertices {:?}", rep.bad_vertices)?;
    }
    writeln!(out)?;
    Ok(EXIT_ERROR)
}

fn split(a: SplitArgs, limit: Option<usize>, out: &mut dyn Write) -> Result<i32> {
    let inst = load_instance(&a.instance)?;
    let opts = options(&a.tol, limit)?;
    let cut = crate::ineq::parse_inequality(&a.cut, inst.set.dim()).context("--cut")?;
    if let Some(bound) = a.enumerate {
        let found = enumerate_splits(&inst.set, &cut, bound, &opts)?;
        if found.is_empty() {
            writeln!(out, "no validating split with |pi|_inf <= {bound}")?;
        }
        for d in found {
            writeln!(out, "pi = {} pi0 = {}", int_tuple(&d.pi), d.pi0)?;
        }
        return Ok(0);
    }
    let pi = parse_ints(a.pi.as_deref().unwrap_or_default()).context("--pi")?;
    if pi.len() != inst.set.dim() {
        bail!("--pi has {} entries, expected {}", pi.len(), inst.set.dim());
    }
    let pi0 = Int::from(a.pi0.context("--pi0 is required with --pi")?);
    let d = SplitDisjunction::new(pi, pi0)?;
    let valid = is_valid_split_cut(&inst.set, &cut, &d, &opts)?;
    writeln!(out, "{}", if valid { "VALID" } else { "INVALID" })?;
    Ok(0)
}

fn effort(r: &SolveOutcome) -> String {
    format!(
        "{} oracle calls; {}",
        r.stats.oracle_calls,
        outcome_text(&r.outcome)
    )
}

fn compare(a: CompareArgs, limit: Option<usize>, out: &mut dyn Write) -> Result<i32> {
    let inst = load_instance(&a.instance)?;
    let opts = options(&a.tol, limit)?;
    let b = inst.basis.as_ref();
    let r1 = algorithm1_solve(&inst.set, &inst.objective, b, &opts)?;
    let r2 = algorithm2_solve(&inst.set, &inst.objective, b, &opts)?;
    writeln!(
        out,
        "alg1: {} cuts; {} lex-min iterations; {}",
        r1.stats.cuts,
        r1.stats.iterations,
        effort(&r1)
    )?;
    writeln!(
        out,
        "alg2: {} line-2 executions; {}",
        r2.stats.iterations,
        effort(&r2)
    )?;
    if let FeasibleSet::PointCloud(_) = &inst.set {
        // Each algorithm sees its own translate of the cloud.
        let s_up = |rounding| -> Result<(LatticeBasis, Vec<Vec<Int>>)> {
            let pre =
                Solver::new(opts.clone()).preprocess(&inst.set, &inst.objective, b, rounding)?;
            let FeasibleSet::PointCloud(cloud) = &pre.set else {
                unreachable!()
            };
            Ok((pre.basis.clone(), s_up_pointcloud(cloud, &pre.basis)?))
        };
        let (_, cut_up) = s_up(BoundRounding::Ceil)?;
        let (basis, enum_up) = s_up(BoundRounding::Floor)?;
        let v = v_set(&basis, &enum_up);
        writeln!(out, "|S_up| = {}; |V(S)|+1 = {}", cut_up.len(), v.len() + 1)?;
    }
    if r1.outcome != r2.outcome {
        writeln!(out, "outcomes differ")?;
        return Ok(EXIT_ERROR);
    }
    Ok(exit_code(&r1.outcome))
}
