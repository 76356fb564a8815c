use gicee::polytope::{
    lp_solve, pareto_merge, project_frontier, Frontier, LpOutcome, RatePoint, RateSystem,
};
use gicee::validation::{projection_gap, random_rate_system};
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

/// Whether `p` is attained by some feasible point: pins both projections and
/// asks the solver for any feasible point.
fn attainable(system: &RateSystem, r1: &[f64], r2: &[f64], p: RatePoint) -> bool {
    let mut pinned = system.clone();
    pinned.add_equality(r1.to_vec(), p.r1);
    pinned.add_equality(r2.to_vec(), p.r2);
    match lp_solve(&pinned, r1).unwrap() {
        LpOutcome::Optimal { point, .. } => system.min_slack(&point) >= -1e-9,
        _ => false,
    }
}

fn points() -> impl Strategy<Value = Vec<RatePoint>> {
    proptest::collection::vec(
        (0.0..4.0f64, 0.0..4.0f64).prop_map(|(a, b)| RatePoint::new(a, b)),
        1..12,
    )
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn frontier_points_are_feasible(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let (system, r1, r2) = random_rate_system(&mut rng);
        let frontier = project_frontier(&system, &r1, &r2, 32).unwrap();
        prop_assert!(!frontier.is_empty());
        for p in &frontier.points {
            prop_assert!(attainable(&system, &r1, &r2, *p), "{:?}", p);
        }
    }

    /// Uniform angle grids are nested when `M - 1` divides `M' - 1`.
    #[test]
    fn refining_directions_never_shrinks(seed in any::<u64>(), m in 3usize..24, k in 2usize..6) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let (system, r1, r2) = random_rate_system(&mut rng);
        let coarse = project_frontier(&system, &r1, &r2, m).unwrap();
        let refined = k * (m - 1) + 1;
        let fine = pareto_merge(&[project_frontier(&system, &r1, &r2, refined).unwrap()]);
        for p in &coarse.points {
            prop_assert!(fine.contains(*p, 1e-9), "{:?} outside M={} hull", p, refined);
        }
    }

    #[test]
    fn every_sweep_lies_inside_dense_sweep(seed in any::<u64>(), m in 3usize..40) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let (system, r1, r2) = random_rate_system(&mut rng);
        let coarse = project_frontier(&system, &r1, &r2, m).unwrap();
        let dense = pareto_merge(&[project_frontier(&system, &r1, &r2, 2049).unwrap()]);
        for p in &coarse.points {
            prop_assert!(dense.contains(*p, 1e-9), "{:?} outside dense hull", p);
        }
    }

    #[test]
    fn merge_ignores_order_and_duplicates(a in points(), b in points(), rot in 0usize..12) {
        let fa = Frontier::from_points(a.clone());
        let fb = Frontier::from_points(b.clone());
        let base = pareto_merge(&[fa.clone(), fb.clone()]);
        prop_assert_eq!(&pareto_merge(&[fb.clone(), fa.clone()]).points, &base.points);
        prop_assert_eq!(&pareto_merge(&[fa.clone(), fb.clone(), fa.clone()]).points, &base.points);
        let mut all = a;
        all.extend(b);
        let k = rot % all.len();
        all.rotate_left(k);
        prop_assert_eq!(&pareto_merge(&[Frontier::from_points(all)]).points, &base.points);
    }

    #[test]
    fn merged_points_are_monotone(a in points()) {
        let merged = pareto_merge(&[Frontier::from_points(a)]);
        for w in merged.points.windows(2) {
            prop_assert!(w[0].r1 < w[1].r1 && w[0].r2 > w[1].r2, "{:?}", w);
        }
    }
}

#[test]
fn projection_agrees_with_grid_oracle() {
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    for _ in 0..20 {
        let (system, r1, r2) = random_rate_system(&mut rng);
        assert!(system.inequalities().len() + system.equalities().len() <= 95);
        let gap = projection_gap(&system, &r1, &r2, 0.1, 64).unwrap();
        assert!(gap <= 0.1, "gap {gap}");
    }
}
