mod common;

use std::cmp::Ordering;

use common::*;
use lexcut::analysis::{brute_force_integer_opt, s_up_pointcloud, v_set, DEFAULT_CELL_CAP};
use lexcut::lattice::LatticeBasis;
use lexcut::lex::lex_cmp;
use lexcut::oracle::{FeasibleSet, PointCloud};
use lexcut::rational::{ints_to_rats, rat, rat_int, Int, Rational};
use lexcut::solver::{
    algorithm1_solve, algorithm2_solve, BoundRounding, IterationStatus, Outcome, SolveOptions,
    Solver, Trace,
};
use num_traits::One;
use proptest::prelude::*;

/// The cloud each algorithm works on: the cutting-plane method rounds the
/// bounds up and intersects with the cone, the enumeration only translates.
fn translated_cloud(
    set: &FeasibleSet,
    obj: &[Int],
    basis: Option<&LatticeBasis>,
    rounding: BoundRounding,
) -> (PointCloud, LatticeBasis) {
    let pre = Solver::new(SolveOptions::default())
        .preprocess(set, obj, basis, rounding)
        .unwrap();
    match pre.set {
        FeasibleSet::PointCloud(c) => (c, pre.basis),
        _ => unreachable!(),
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn clouds_agree_with_brute_force(seed in any::<u64>(), n in 1usize..=4) {
        let mut r = rng(seed);
        let set = random_cloud(&mut r, n);
        let obj = primitive_vector(&mut r, n, 3);
        let opts = SolveOptions::default();
        let a = algorithm1_solve(&set, &obj, None, &opts).unwrap();
        let b = algorithm2_solve(&set, &obj, None, &opts).unwrap();
        let c = brute_force_integer_opt(&set, &obj, Some(&a.basis), DEFAULT_CELL_CAP).unwrap();
        prop_assert_eq!(&a.outcome, &c);
        prop_assert_eq!(&b.outcome, &c);
    }

    #[test]
    fn polytopes_agree_with_brute_force(seed in any::<u64>(), n in 2usize..=3) {
        let mut r = rng(seed);
        let set = random_polytope(&mut r, n);
        let obj = primitive_vector(&mut r, n, 3);
        let opts = SolveOptions::default();
        let a = algorithm1_solve(&set, &obj, None, &opts).unwrap();
        let b = algorithm2_solve(&set, &obj, None, &opts).unwrap();
        let c = brute_force_integer_opt(&set, &obj, Some(&a.basis), DEFAULT_CELL_CAP).unwrap();
        prop_assert_eq!(&a.outcome, &c);
        prop_assert_eq!(&b.outcome, &c);
    }

    #[test]
    fn cut_count_bounded_by_rounded_image(seed in any::<u64>(), n in 1usize..=4) {
        let mut r = rng(seed);
        let set = random_cloud(&mut r, n);
        let obj = primitive_vector(&mut r, n, 3);
        let out = algorithm1_solve(&set, &obj, None, &SolveOptions::default()).unwrap();
        let (cloud, basis) = translated_cloud(&set, &obj, None, BoundRounding::Ceil);
        let s_up = s_up_pointcloud(&cloud, &basis).unwrap();
        prop_assert!(out.stats.cuts <= s_up.len());
        if let Trace::Cuts(trace) = &out.trace {
            let ups: Vec<_> = trace.iter().filter(|c| c.status == IterationStatus::Cut)
                .map(|c| ints_to_rats(c.xbar_up.as_ref().unwrap())).collect();
            for w in ups.windows(2) {
                prop_assert_eq!(lex_cmp(&out.basis, &w[0], &w[1]).unwrap(), Ordering::Less);
            }
        }
    }

    #[test]
    fn enumeration_steps_to_next_reachable_point(seed in any::<u64>(), n in 1usize..=3) {
        let mut r = rng(seed);
        let set = random_cloud(&mut r, n);
        let obj = primitive_vector(&mut r, n, 3);
        let out = algorithm2_solve(&set, &obj, None, &SolveOptions::default()).unwrap();
        let (cloud, basis) = translated_cloud(&set, &obj, None, BoundRounding::Floor);
        let Trace::Enum(states) = &out.trace else { unreachable!() };
        let t = ints_to_rats(&out.translation);
        let found: Vec<_> = states.iter().filter(|s| !s.sstar_empty).collect();
        for w in found.windows(2) {
            let up = basis.values_int(w[0].xbar_up.as_ref().unwrap());
            let up_t: Vec<Int> = up.iter().zip(basis.values_int(&out.translation)).map(|(a, b)| a - b).collect();
            let next = cloud
                .points()
                .iter()
                .filter(|p| reachable_after(&basis.values(p), &up_t))
                .min_by(|a, b| lex_cmp(&basis, a, b).unwrap())
                .map(|p| p.iter().zip(&t).map(|(a, b)| a + b).collect::<Vec<_>>());
            prop_assert_eq!(next.as_ref(), w[1].xbar.as_ref());
        }
    }

    #[test]
    fn enumeration_alphas_lie_in_v_of_s(seed in any::<u64>(), n in 1usize..=3) {
        let mut r = rng(seed);
        let set = random_fractional_cloud(&mut r, n);
        let obj = unit_objective(n);
        let std = LatticeBasis::standard(n);
        let out = algorithm2_solve(&set, &obj, Some(&std), &SolveOptions::default()).unwrap();
        prop_assert_eq!(&out.outcome, &Outcome::IntegerInfeasible);
        let (cloud, _) = translated_cloud(&set, &obj, Some(&std), BoundRounding::Floor);
        let s_up = s_up_pointcloud(&cloud, &std).unwrap();
        let mut allowed = v_set(&std, &s_up);
        allowed.push(vec![lexcut::rational::int(0); n]);
        let Trace::Enum(states) = &out.trace else { unreachable!() };
        let alphas: Vec<_> = states.iter().map(|s| s.alpha.clone()).collect();
        prop_assert_eq!(&alphas[0], &vec![lexcut::rational::int(0); n]);
        for w in alphas.windows(2) {
            prop_assert!(w[0] < w[1]);
        }
        for a in &alphas {
            prop_assert!(allowed.contains(a), "{:?} not in V(S)", a);
        }
    }
}

/// Points the enumeration can reach after `x̄↑` with basis values `up`:
/// lex-larger, and at the first differing index either at least one unit
/// larger or at the last index.
fn reachable_after(values: &[Rational], up: &[Int]) -> bool {
    let n = up.len();
    for (j, (v, u)) in values.iter().zip(up).enumerate() {
        let u = lexcut::rational::from_int(u);
        if *v == u {
            continue;
        }
        return if j + 1 == n {
            *v > u
        } else {
            *v >= u + Rational::one()
        };
    }
    false
}

fn cloud2(points: &[[Rational; 2]]) -> FeasibleSet {
    FeasibleSet::PointCloud(
        PointCloud::new(2, points.iter().map(|p| p.to_vec()).collect()).unwrap(),
    )
}

#[test]
fn enumeration_skips_fractional_gaps_on_nonconvex_sets() {
    // After x̄↑ = (1,0) the slice x1 = 1 is empty, so α1 jumps to 2 and
    // (3/2,5), the lex-smallest point above x̄↑, is never visited. A convex
    // set through (1/2,0) and (3/2,5) would meet x1 = 1.
    let set = cloud2(&[
        [rat(1, 2), rat_int(0)],
        [rat(3, 2), rat_int(5)],
        [rat(5, 2), rat_int(1)],
    ]);
    let std = LatticeBasis::standard(2);
    let out = algorithm2_solve(&set, &ints(&[1, 0]), Some(&std), &SolveOptions::default()).unwrap();
    let Trace::Enum(states) = &out.trace else {
        unreachable!()
    };
    let seen: Vec<_> = states.iter().filter_map(|s| s.xbar.clone()).collect();
    assert_eq!(
        seen,
        vec![vec![rat(1, 2), rat_int(0)], vec![rat(5, 2), rat_int(1)]]
    );
    assert_eq!(out.outcome, Outcome::IntegerInfeasible);
}

#[test]
fn enumeration_alphas_can_miss_v_of_s_on_nonconvex_sets() {
    // From α = (2,0) the lex-min jumps to x1 = 7/2, so (3,0) ∈ V(S) is
    // never an α.
    let set = cloud2(&[
        [rat(3, 2), rat_int(0)],
        [rat(7, 2), rat_int(3)],
        [rat(3, 4), rat(1, 4)],
        [rat_int(1), rat(1, 2)],
    ]);
    let std = LatticeBasis::standard(2);
    let out = algorithm2_solve(&set, &ints(&[1, 0]), Some(&std), &SolveOptions::default()).unwrap();
    let Trace::Enum(states) = &out.trace else {
        unreachable!()
    };
    let alphas: Vec<_> = states.iter().map(|s| s.alpha.clone()).collect();
    assert_eq!(
        alphas,
        [[0, 0], [1, 0], [1, 1], [2, 0], [4, 0], [5, 0]]
            .map(|a| ints(&a))
            .to_vec()
    );
    let FeasibleSet::PointCloud(cloud) = &set else {
        unreachable!()
    };
    let v = v_set(&std, &s_up_pointcloud(cloud, &std).unwrap());
    assert!(v.contains(&ints(&[3, 0])));
    assert_eq!(out.outcome, Outcome::IntegerInfeasible);
}
