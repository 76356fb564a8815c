//! Small dense LPs and projection of rate polytopes onto the `(r1, r2)`
//! plane.

mod frontier;
mod lp;
mod project;

pub use frontier::{
    direction_weights, pareto_filter, pareto_merge, pareto_merge_points, Frontier, FrontierMeta,
    RatePoint,
};
pub use lp::{
    lp_solve, Constraint, FeasibleBasis, LpError, LpOutcome, RateSystem, FEASIBILITY_TOL,
};
pub use project::{grid_feasibility_oracle, project_frontier, ProjectionError, DEFAULT_DIRECTIONS};
