//! Seeded self-check suites: closed-form mutual information against the
//! covariance oracle, the set-function structure of the mutual information,
//! and LP projection against brute-force grid feasibility.

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::gaussmi::{conditional_mi, mi_covariance_oracle, receiver_view, Receiver, SignalSet};
use crate::model::{ChannelParams, PowerState};
use crate::polytope::{
    grid_feasibility_oracle, pareto_merge, project_frontier, Frontier, ProjectionError, RatePoint,
    RateSystem,
};

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SuiteResult {
    pub name: String,
    pub cases: usize,
    pub max_deviation: f64,
    pub tolerance: f64,
    pub passed: bool,
}

impl SuiteResult {
    fn new(name: &str, cases: usize, max_deviation: f64, tolerance: f64) -> Self {
        SuiteResult {
            name: name.to_string(),
            cases,
            max_deviation,
            tolerance,
            passed: max_deviation <= tolerance,
        }
    }
}

pub fn random_channel(rng: &mut impl Rng) -> ChannelParams {
    ChannelParams {
        c12: rng.gen_range(0.0..3.0),
        c21: rng.gen_range(0.0..3.0),
        c1e: rng.gen_range(0.0..3.0),
        c2e: rng.gen_range(0.0..3.0),
        p1: 10.0,
        p2: 10.0,
    }
}

/// A state with each component zero about a quarter of the time.
pub fn random_state(rng: &mut impl Rng) -> PowerState {
    let mut draw = || {
        if rng.gen_bool(0.25) {
            0.0
        } else {
            rng.gen_range(0.0..10.0)
        }
    };
    PowerState {
        pc1: draw(),
        ps1: draw(),
        po1: draw(),
        pj1: draw(),
        pc2: draw(),
        ps2: draw(),
        po2: draw(),
        pj2: draw(),
    }
}

/// Largest `|closed form - covariance oracle|` over `samples` random
/// (channel, state, receiver, subset) instances.
pub fn mi_oracle_suite(seed: u64, samples: usize, tolerance: f64) -> SuiteResult {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut worst: f64 = 0.0;
    for _ in 0..samples {
        let channel = random_channel(&mut rng);
        let state = random_state(&mut rng);
        let receiver = *Receiver::ALL.choose(&mut rng).unwrap();
        let decodable = receiver.decodable();
        let subset = SignalSet::from_bits(rng.gen::<u8>()).intersection(decodable);
        let closed = conditional_mi(&receiver_view(&channel, &state, receiver), subset)
            .expect("decodable subset");
        let oracle =
            mi_covariance_oracle(&channel, &state, receiver, subset).expect("decodable subset");
        worst = worst.max((closed - oracle).abs());
    }
    SuiteResult::new("mi_closed_form_vs_covariance", samples, worst, tolerance)
}

/// Exhaustive submodularity and monotonicity check of `S -> I(T_S; Y |
/// T_{S^c})` for `samples` random views. The deviation is the largest
/// violation found.
pub fn submodularity_suite(seed: u64, samples: usize, tolerance: f64) -> SuiteResult {
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x5eed_5eed);
    let mut worst: f64 = 0.0;
    let mut cases = 0;
    for _ in 0..samples {
        let channel = random_channel(&mut rng);
        let state = random_state(&mut rng);
        for receiver in Receiver::ALL {
            let view = receiver_view(&channel, &state, receiver);
            let f = |s: SignalSet| conditional_mi(&view, s).expect("decodable subset");
            worst = worst.max(f(SignalSet::EMPTY).abs());
            let subsets: Vec<SignalSet> = receiver.decodable().subsets().collect();
            let values: Vec<f64> = subsets.iter().map(|&s| f(s)).collect();
            let value_of = |s: SignalSet| values[subsets.binary_search(&s).unwrap()];
            for (i, &a) in subsets.iter().enumerate() {
                for &b in &subsets[i..] {
                    cases += 1;
                    let excess = value_of(a.union(b)) + value_of(a.intersection(b))
                        - value_of(a)
                        - value_of(b);
                    worst = worst.max(excess);
                    if a.is_subset_of(b) {
                        worst = worst.max(value_of(a) - value_of(b));
                    }
                }
            }
        }
    }
    SuiteResult::new("mi_submodularity", cases, worst, tolerance)
}

/// A random 10-variable system shaped like a rate system: 0/1 rows, a
/// randomization-only equality, and projections `x0 + x2`, `x5 + x7`.
/// Always feasible; every variable is bounded.
pub fn random_rate_system(rng: &mut impl Rng) -> (RateSystem, Vec<f64>, Vec<f64>) {
    const DIM: usize = 10;
    const RANDOMIZATION: [usize; 6] = [1, 3, 4, 6, 8, 9];
    let mut witness = vec![0.0; DIM];
    for &i in &RANDOMIZATION {
        witness[i] = rng.gen_range(0.0..0.5);
    }
    let mut system = RateSystem::new(DIM);
    let add_row = |system: &mut RateSystem, row: Vec<f64>, rng: &mut dyn rand::RngCore| {
        let used: f64 = row.iter().zip(&witness).map(|(a, b)| a * b).sum();
        let slack = rng.gen_range(0.0..1.0);
        system.add_inequality(row, used + slack);
    };
    for i in 0..DIM {
        let mut row = vec![0.0; DIM];
        row[i] = 1.0;
        add_row(&mut system, row, rng);
    }
    let extra = rng.gen_range(10..=84);
    for _ in 0..extra {
        let mut row = vec![0.0; DIM];
        while row.iter().all(|&a| a == 0.0) {
            for a in row.iter_mut() {
                *a = if rng.gen_bool(0.35) { 1.0 } else { 0.0 };
            }
        }
        add_row(&mut system, row, rng);
    }
    let mut eq = vec![0.0; DIM];
    for &i in &RANDOMIZATION {
        eq[i] = 1.0;
    }
    let total: f64 = RANDOMIZATION.iter().map(|&i| witness[i]).sum();
    system.add_equality(eq, total);

    let mut r1 = vec![0.0; DIM];
    r1[0] = 1.0;
    r1[2] = 1.0;
    let mut r2 = vec![0.0; DIM];
    r2[5] = 1.0;
    r2[7] = 1.0;
    (system, r1, r2)
}

fn linf(a: RatePoint, b: RatePoint) -> f64 {
    (a.r1 - b.r1).abs().max((a.r2 - b.r2).abs())
}

/// Points along the boundary of the region a frontier describes, including
/// the axis closures.
fn boundary_samples(frontier: &Frontier, per_edge: usize) -> Vec<RatePoint> {
    let pts = &frontier.points;
    let Some(first) = pts.first() else {
        return Vec::new();
    };
    let last = pts.last().unwrap();
    let mut chain = vec![RatePoint::new(0.0, first.r2)];
    chain.extend(pts.iter().copied());
    chain.push(RatePoint::new(last.r1, 0.0));
    let mut out = Vec::new();
    for w in chain.windows(2) {
        for k in 0..per_edge {
            let t = k as f64 / per_edge as f64;
            out.push(RatePoint::new(
                w[0].r1 + t * (w[1].r1 - w[0].r1),
                w[0].r2 + t * (w[1].r2 - w[0].r2),
            ));
        }
    }
    out.push(*chain.last().unwrap());
    out
}

/// Hausdorff distance, in the sup norm, between the region described by the
/// projected frontier and the set of grid-feasible points.
pub fn projection_gap(
    system: &RateSystem,
    r1_row: &[f64],
    r2_row: &[f64],
    pitch: f64,
    directions: usize,
) -> Result<f64, ProjectionError> {
    let frontier = pareto_merge(&[project_frontier(system, r1_row, r2_row, directions)?]);
    let grid = grid_feasibility_oracle(system, r1_row, r2_row, pitch)?;
    match (frontier.is_empty(), grid.is_empty()) {
        (true, true) => return Ok(0.0),
        (true, false) | (false, true) => return Ok(f64::INFINITY),
        _ => {}
    }
    let outward = grid
        .iter()
        .map(|&g| frontier.distance_linf(g))
        .fold(0.0, f64::max);
    let inward = boundary_samples(&frontier, 8)
        .into_iter()
        .map(|b| {
            grid.iter()
                .map(|&g| linf(b, g))
                .fold(f64::INFINITY, f64::min)
        })
        .fold(0.0, f64::max);
    Ok(outward.max(inward))
}

pub fn projection_suite(
    seed: u64,
    systems: usize,
    pitch: f64,
    directions: usize,
) -> Result<SuiteResult, ProjectionError> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x9e37_79b9);
    let mut worst: f64 = 0.0;
    for _ in 0..systems {
        let (system, r1, r2) = random_rate_system(&mut rng);
        worst = worst.max(projection_gap(&system, &r1, &r2, pitch, directions)?);
    }
    Ok(SuiteResult::new(
        "projection_vs_grid_oracle",
        systems,
        worst,
        pitch,
    ))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn suites_pass_with_default_settings() {
        assert!(mi_oracle_suite(1, 200, 1e-12).passed);
        assert!(submodularity_suite(1, 5, 1e-12).passed);
        let projection = projection_suite(1, 2, 0.1, 16).unwrap();
        assert!(projection.passed, "{projection:?}");
    }

    #[test]
    fn random_systems_are_feasible_and_sized() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for _ in 0..10 {
            let (system, r1, _) = random_rate_system(&mut rng);
            assert!(system.inequalities().len() + system.equalities().len() <= 95);
            assert!(crate::polytope::lp_solve(&system, &r1)
                .unwrap()
                .is_optimal());
        }
    }

    #[test]
    fn deterministic_for_seed() {
        assert_eq!(mi_oracle_suite(9, 50, 1e-12), mi_oracle_suite(9, 50, 1e-12));
    }
}
