//! Seeded random instances shared by the integration tests.
#![allow(dead_code)]

use lexcut::lattice::{IntMatrix, LatticeBasis};
use lexcut::lex::LinearInequality;
use lexcut::oracle::{FeasibleSet, LinearQuery, OracleConfig, PointCloud, Polytope};
use lexcut::rational::{int, rat, rat_int, Int, Rational};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn ints(v: &[i64]) -> Vec<Int> {
    v.iter().map(|&x| int(x)).collect()
}

pub fn ineq(c: &[i64], r: Rational) -> LinearInequality {
    LinearInequality::new(c.iter().map(|&x| rat_int(x)).collect(), r)
}

/// Triangle with vertices (0,0), (1,0), (1/2,-1).
pub fn triangle1() -> FeasibleSet {
    FeasibleSet::Polytope(
        Polytope::new(
            2,
            vec![
                ineq(&[0, -1], rat_int(0)),
                ineq(&[2, 1], rat_int(0)),
                ineq(&[-2, 1], rat_int(-2)),
            ],
        )
        .unwrap(),
    )
}

/// Triangle with vertices (0,3/2), (1/4,0), (1,0).
pub fn triangle2() -> FeasibleSet {
    FeasibleSet::Polytope(
        Polytope::new(
            2,
            vec![
                ineq(&[0, 1], rat_int(0)),
                ineq(&[-6, -4], rat_int(-6)),
                ineq(&[6, 1], rat(3, 2)),
            ],
        )
        .unwrap(),
    )
}

pub fn unit_objective(n: usize) -> Vec<Int> {
    let mut c = vec![int(0); n];
    c[0] = int(1);
    c
}

/// Nonzero integer vector with entries in `[-b, b]` and gcd 1.
pub fn primitive_vector(rng: &mut ChaCha8Rng, n: usize, b: i64) -> Vec<Int> {
    loop {
        let v: Vec<i64> = (0..n).map(|_| rng.gen_range(-b..=b)).collect();
        let g = v.iter().fold(0i64, |g, &x| num_integer::gcd(g, x));
        if g == 1 {
            return ints(&v);
        }
    }
}

/// Product of random elementary integer row operations with small entries.
pub fn random_unimodular(rng: &mut ChaCha8Rng, n: usize) -> LatticeBasis {
    loop {
        let mut m: Vec<Vec<i64>> = (0..n)
            .map(|i| (0..n).map(|j| i64::from(i == j)).collect())
            .collect();
        for _ in 0..3 * n {
            let i = rng.gen_range(0..n);
            let j = rng.gen_range(0..n);
            if i == j {
                continue;
            }
            let f = rng.gen_range(-2..=2);
            let row_j = m[j].clone();
            for (a, b) in m[i].iter_mut().zip(&row_j) {
                *a += f * b;
            }
        }
        if rng.gen_bool(0.5) {
            let (a, b) = (rng.gen_range(0..n), rng.gen_range(0..n));
            m.swap(a, b);
        }
        if m.iter().flatten().any(|v| v.abs() > 6) || is_identity(&m) {
            continue;
        }
        let rows: Vec<&[i64]> = m.iter().map(Vec::as_slice).collect();
        return LatticeBasis::new(IntMatrix::from_i64(&rows).unwrap()).unwrap();
    }
}

fn is_identity(m: &[Vec<i64>]) -> bool {
    m.iter()
        .enumerate()
        .all(|(i, r)| r.iter().enumerate().all(|(j, &v)| v == i64::from(i == j)))
}

/// Up to eight points in `[-5,5]^n` with denominators up to 4.
pub fn random_cloud(rng: &mut ChaCha8Rng, n: usize) -> FeasibleSet {
    let count = rng.gen_range(1..=8);
    let points = (0..count)
        .map(|_| {
            (0..n)
                .map(|_| {
                    let den = rng.gen_range(1..=4);
                    rat(rng.gen_range(-5 * den..=5 * den), den)
                })
                .collect()
        })
        .collect();
    FeasibleSet::PointCloud(PointCloud::new(n, points).unwrap())
}

/// Cloud in the nonnegative orthant with no integer point.
pub fn random_fractional_cloud(rng: &mut ChaCha8Rng, n: usize) -> FeasibleSet {
    let count = rng.gen_range(1..=6);
    let points = (0..count)
        .map(|_| {
            let mut p: Vec<Rational> = (0..n)
                .map(|_| {
                    let den = rng.gen_range(1..=4);
                    rat(rng.gen_range(0..=3 * den), den)
                })
                .collect();
            if p.iter().all(|v| v.is_integer()) {
                let j = rng.gen_range(0..n);
                p[j] += rat(1, 2);
            }
            p
        })
        .collect();
    FeasibleSet::PointCloud(PointCloud::new(n, points).unwrap())
}

/// A box of width 1..=4 at a random offset, cut by up to three random
/// rational halfspaces; resampled until nonempty.
pub fn random_polytope(rng: &mut ChaCha8Rng, n: usize) -> FeasibleSet {
    loop {
        let mut rows = Vec::new();
        for j in 0..n {
            let lo = rng.gen_range(-3..=3);
            let w = rng.gen_range(1..=4);
            let mut e = vec![0; n];
            e[j] = 1;
            rows.push(ineq(&e, rat(2 * lo - 1, 2)));
            e[j] = -1;
            rows.push(ineq(&e, rat(-(2 * (lo + w) + 1), 2)));
        }
        for _ in 0..rng.gen_range(0..=3) {
            let c: Vec<i64> = (0..n).map(|_| rng.gen_range(-4..=4)).collect();
            if c.iter().all(|&v| v == 0) {
                continue;
            }
            let den = rng.gen_range(1..=5);
            rows.push(ineq(&c, rat(rng.gen_range(-8 * den..=8 * den), den)));
        }
        let set = FeasibleSet::Polytope(Polytope::new(n, rows).unwrap());
        let ok = set
            .optimize(&LinearQuery::feasibility(n), &OracleConfig::default())
            .unwrap()
            .is_feasible();
        if ok {
            return set;
        }
    }
}
