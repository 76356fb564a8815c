//! Projection of a rate polytope onto the `(r1, r2)` plane by a sweep of
//! support directions.

use thiserror::Error;

use super::frontier::{direction_weights, Frontier, FrontierMeta, RatePoint};
use super::lp::{dot, lp_solve, FeasibleBasis, LpError, LpOutcome, RateSystem};

pub const DEFAULT_DIRECTIONS: usize = 64;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ProjectionError {
    #[error("need at least 3 directions, got {0}")]
    TooFewDirections(usize),
    #[error("grid pitch must be positive, got {0}")]
    BadPitch(f64),
    #[error("solver failed in direction ({w1:.6}, {w2:.6}): {source}")]
    Solver {
        w1: f64,
        w2: f64,
        #[source]
        source: LpError,
    },
    #[error("projection is unbounded in direction ({w1:.6}, {w2:.6})")]
    Unbounded { w1: f64, w2: f64 },
}

fn combine(w1: f64, r1_row: &[f64], w2: f64, r2_row: &[f64]) -> Vec<f64> {
    r1_row
        .iter()
        .zip(r2_row)
        .map(|(a, b)| w1 * a + w2 * b)
        .collect()
}

fn optimal_point(
    outcome: LpOutcome,
    r1_row: &[f64],
    r2_row: &[f64],
    (w1, w2): (f64, f64),
) -> Result<Option<RatePoint>, ProjectionError> {
    match outcome {
        LpOutcome::Optimal { point, .. } => Ok(Some(RatePoint::new(
            dot(r1_row, &point),
            dot(r2_row, &point),
        ))),
        LpOutcome::Unbounded => Err(ProjectionError::Unbounded { w1, w2 }),
        LpOutcome::Infeasible => Ok(None),
    }
}

/// Maximizes `first`, then `second` among the `first`-optimal points.
fn lexicographic_corner(
    system: &RateSystem,
    first: &[f64],
    second: &[f64],
    r1_row: &[f64],
    r2_row: &[f64],
    weights: (f64, f64),
) -> Result<Option<RatePoint>, ProjectionError> {
    let solver = |e| ProjectionError::Solver {
        w1: weights.0,
        w2: weights.1,
        source: e,
    };
    let (best, fallback) = match lp_solve(system, first).map_err(solver)? {
        LpOutcome::Optimal { value, point } => (value, point),
        other => return optimal_point(other, r1_row, r2_row, weights),
    };
    let mut pinned = system.clone();
    pinned.add_inequality(first.iter().map(|a| -a).collect(), -best);
    match lp_solve(&pinned, second).map_err(solver)? {
        LpOutcome::Infeasible => Ok(Some(RatePoint::new(
            dot(r1_row, &fallback),
            dot(r2_row, &fallback),
        ))),
        outcome => optimal_point(outcome, r1_row, r2_row, weights),
    }
}

/// Pareto frontier of the projection `x -> (r1_row . x, r2_row . x)`.
///
/// Solves one LP per direction in `[0, pi/2]` plus the two lexicographic
/// corners. An infeasible system yields an empty frontier.
pub fn project_frontier(
    system: &RateSystem,
    r1_row: &[f64],
    r2_row: &[f64],
    directions: usize,
) -> Result<Frontier, ProjectionError> {
    if directions < 3 {
        return Err(ProjectionError::TooFewDirections(directions));
    }
    let meta = FrontierMeta {
        directions,
        evaluated: 1,
        ..Default::default()
    };
    let basis = FeasibleBasis::find(system).map_err(|e| ProjectionError::Solver {
        w1: 0.0,
        w2: 0.0,
        source: e,
    })?;
    let Some(basis) = basis else {
        return Ok(Frontier::default().with_meta(FrontierMeta {
            infeasible: 1,
            ..meta
        }));
    };

    let mut points = Vec::with_capacity(directions + 2);
    for (w1, w2) in direction_weights(directions) {
        let objective = combine(w1, r1_row, w2, r2_row);
        let outcome = basis
            .maximize(&objective)
            .map_err(|e| ProjectionError::Solver { w1, w2, source: e })?;
        points.extend(optimal_point(outcome, r1_row, r2_row, (w1, w2))?);
    }
    points.extend(lexicographic_corner(
        system,
        r1_row,
        r2_row,
        r1_row,
        r2_row,
        (1.0, 0.0),
    )?);
    points.extend(lexicographic_corner(
        system,
        r2_row,
        r1_row,
        r1_row,
        r2_row,
        (0.0, 1.0),
    )?);

    Ok(Frontier::from_points(points).with_meta(meta))
}

/// Grid points `(i * pitch, j * pitch)` whose preimage in the system is
/// nonempty, decided one LP feasibility problem at a time.
pub fn grid_feasibility_oracle(
    system: &RateSystem,
    r1_row: &[f64],
    r2_row: &[f64],
    pitch: f64,
) -> Result<Vec<RatePoint>, ProjectionError> {
    if !(pitch > 0.0 && pitch.is_finite()) {
        return Err(ProjectionError::BadPitch(pitch));
    }
    let extent = |row: &[f64], w: (f64, f64)| -> Result<Option<f64>, ProjectionError> {
        match lp_solve(system, row).map_err(|e| ProjectionError::Solver {
            w1: w.0,
            w2: w.1,
            source: e,
        })? {
            LpOutcome::Optimal { value, .. } => Ok(Some(value)),
            LpOutcome::Infeasible => Ok(None),
            LpOutcome::Unbounded => Err(ProjectionError::Unbounded { w1: w.0, w2: w.1 }),
        }
    };
    let (Some(max1), Some(max2)) = (extent(r1_row, (1.0, 0.0))?, extent(r2_row, (0.0, 1.0))?)
    else {
        return Ok(Vec::new());
    };
    let n1 = (max1 / pitch + 1e-9).floor() as usize;
    let n2 = (max2 / pitch + 1e-9).floor() as usize;
    let mut feasible = Vec::new();
    for i in 0..=n1 {
        for j in 0..=n2 {
            let target = RatePoint::new(i as f64 * pitch, j as f64 * pitch);
            let mut pinned = system.clone();
            pinned.add_equality(r1_row.to_vec(), target.r1);
            pinned.add_equality(r2_row.to_vec(), target.r2);
            let found = FeasibleBasis::find(&pinned).map_err(|e| ProjectionError::Solver {
                w1: target.r1,
                w2: target.r2,
                source: e,
            })?;
            if found.is_some() {
                feasible.push(target);
            }
        }
    }
    Ok(feasible)
}
