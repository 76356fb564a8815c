//! Rate constraint systems for one allocation and unions over allocation
//! families.
//!
//! Variables (all nonnegative), in order:
//!
//! | index | variable | meaning                                   |
//! |-------|----------|-------------------------------------------|
//! | 0     | `R_C1`   | user 1 common secret rate                 |
//! | 1     | `Rx_C1`  | randomization rate of the C1 codebook     |
//! | 2     | `R_S1`   | user 1 self secret rate                   |
//! | 3     | `Rx_S1`  | randomization rate of the S1 codebook     |
//! | 4     | `Rx_O1`  | rate of the unbinned O1 codebook          |
//! | 5     | `R_C2`   |                                           |
//! | 6     | `Rx_C2`  |                                           |
//! | 7     | `R_S2`   |                                           |
//! | 8     | `Rx_S2`  |                                           |
//! | 9     | `Rx_O2`  |                                           |
//!
//! The O signals carry no secret message, so they have no message-rate
//! column.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::gaussmi::{
    conditional_mi, receiver_view, MiError, Receiver, ReceiverView, SignalIndex, SignalSet,
};
use crate::model::{
    validate_allocation, ChannelParams, ModelError, TimeSharedAllocation, WeightedState,
};
use crate::polytope::{
    pareto_merge, project_frontier, Frontier, FrontierMeta, ProjectionError, RateSystem,
};
use crate::schemes::{allocation_grid, SchemeError, Variant};

pub const RATE_DIM: usize = 10;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum RateVar {
    RC1,
    XC1,
    RS1,
    XS1,
    XO1,
    RC2,
    XC2,
    RS2,
    XS2,
    XO2,
}

impl RateVar {
    pub const ALL: [RateVar; RATE_DIM] = [
        RateVar::RC1,
        RateVar::XC1,
        RateVar::RS1,
        RateVar::XS1,
        RateVar::XO1,
        RateVar::RC2,
        RateVar::XC2,
        RateVar::RS2,
        RateVar::XS2,
        RateVar::XO2,
    ];

    pub fn index(self) -> usize {
        self as usize
    }

    /// Message-rate column of a signal, if it carries a message.
    pub fn message(signal: SignalIndex) -> Option<RateVar> {
        match signal {
            SignalIndex::C1 => Some(RateVar::RC1),
            SignalIndex::S1 => Some(RateVar::RS1),
            SignalIndex::C2 => Some(RateVar::RC2),
            SignalIndex::S2 => Some(RateVar::RS2),
            SignalIndex::O1 | SignalIndex::O2 => None,
        }
    }

    pub fn randomization(signal: SignalIndex) -> RateVar {
        match signal {
            SignalIndex::C1 => RateVar::XC1,
            SignalIndex::S1 => RateVar::XS1,
            SignalIndex::O1 => RateVar::XO1,
            SignalIndex::C2 => RateVar::XC2,
            SignalIndex::S2 => RateVar::XS2,
            SignalIndex::O2 => RateVar::XO2,
        }
    }
}

fn row_of(vars: impl IntoIterator<Item = RateVar>) -> Vec<f64> {
    let mut row = vec![0.0; RATE_DIM];
    for v in vars {
        row[v.index()] = 1.0;
    }
    row
}

/// `R1 = R_C1 + R_S1`.
pub fn r1_row() -> Vec<f64> {
    row_of([RateVar::RC1, RateVar::RS1])
}

/// `R2 = R_C2 + R_S2`.
pub fn r2_row() -> Vec<f64> {
    row_of([RateVar::RC2, RateVar::RS2])
}

#[derive(Debug, Error)]
pub enum RegionError {
    #[error("invalid allocation: {0}")]
    Allocation(#[from] ModelError),
    #[error(transparent)]
    Mi(#[from] MiError),
    #[error(transparent)]
    Scheme(#[from] SchemeError),
    #[error("projection failed: {0}")]
    Projection(#[from] ProjectionError),
    #[error("{failed} of {total} allocations failed; first (#{first_index}): {first}")]
    AllocationFailures {
        failed: usize,
        total: usize,
        first_index: usize,
        first: Box<RegionError>,
    },
    #[error("invalid region spec: {0}")]
    Spec(String),
}

/// Per-state receiver views, computed once and reused for every subset.
struct StateViews {
    weight: f64,
    views: [ReceiverView; 3],
}

fn timeshared(states: &[StateViews], receiver: usize, subset: SignalSet) -> Result<f64, MiError> {
    let mut total = 0.0;
    for s in states {
        total += s.weight * conditional_mi(&s.views[receiver], subset)?;
    }
    Ok(total)
}

/// Constraint system of one allocation:
///
/// - for every nonempty subset of a legitimate receiver's decodable signals,
///   the message plus randomization rates of the subset are bounded by the
///   conditional mutual information at that receiver (15 rows each);
/// - for every nonempty proper subset of all six signals, the randomization
///   rates are bounded by the eavesdropper's conditional mutual information
///   (62 rows);
/// - all six randomization rates sum exactly to the eavesdropper's total
///   mutual information (1 equality).
pub fn build_system(
    channel: &ChannelParams,
    alloc: &TimeSharedAllocation,
) -> Result<RateSystem, RegionError> {
    validate_allocation(channel, alloc)?;
    let states: Vec<StateViews> = alloc
        .states
        .iter()
        .map(|ws: &WeightedState| StateViews {
            weight: ws.weight,
            views: Receiver::ALL.map(|rx| receiver_view(channel, &ws.state, rx)),
        })
        .collect();

    let mut system = RateSystem::new(RATE_DIM);
    for (slot, rx) in [(0, Receiver::Y1), (1, Receiver::Y2)] {
        for subset in rx.decodable().subsets().filter(|s| !s.is_empty()) {
            let vars = subset.iter().flat_map(|sig| {
                RateVar::message(sig)
                    .into_iter()
                    .chain([RateVar::randomization(sig)])
            });
            system.add_inequality(row_of(vars), timeshared(&states, slot, subset)?);
        }
    }
    for subset in SignalSet::FULL
        .subsets()
        .filter(|s| !s.is_empty() && *s != SignalSet::FULL)
    {
        let vars = subset.iter().map(RateVar::randomization);
        system.add_inequality(row_of(vars), timeshared(&states, 2, subset)?);
    }
    let all = SignalSet::FULL.iter().map(RateVar::randomization);
    system.add_equality(row_of(all), timeshared(&states, 2, SignalSet::FULL)?);
    Ok(system)
}

/// Frontier of the region achieved by one allocation. Empty when the
/// allocation admits no secure operating point.
pub fn region_for_allocation(
    channel: &ChannelParams,
    alloc: &TimeSharedAllocation,
    directions: usize,
) -> Result<Frontier, RegionError> {
    let system = build_system(channel, alloc)?;
    Ok(project_frontier(&system, &r1_row(), &r2_row(), directions)?)
}

/// Which allocations a union runs over.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RegionSpec {
    pub channel: ChannelParams,
    pub variant: Variant,
    /// Grid points per swept power dimension.
    pub steps: usize,
    /// Time-sharing states per allocation; 1 uses convex closure only.
    pub states: usize,
    /// Weight resolution when `states > 1`.
    pub weight_steps: usize,
    pub directions: usize,
}

impl RegionSpec {
    pub fn new(channel: ChannelParams, variant: Variant, steps: usize, directions: usize) -> Self {
        RegionSpec {
            channel,
            variant,
            steps,
            states: 1,
            weight_steps: 3,
            directions,
        }
    }

    pub fn validate(&self) -> Result<(), RegionError> {
        self.channel.validate()?;
        if self.variant.is_time_division() {
            return Err(RegionError::Spec(format!(
                "variant `{}` is not an allocation family",
                self.variant
            )));
        }
        if self.steps < 2 {
            return Err(RegionError::Spec(format!(
                "steps must be at least 2, got {}",
                self.steps
            )));
        }
        if self.directions < 3 {
            return Err(RegionError::Spec(format!(
                "directions must be at least 3, got {}",
                self.directions
            )));
        }
        if self.states == 0 || self.states > crate::model::DEFAULT_MAX_STATES {
            return Err(RegionError::Spec(format!(
                "states must be in 1..={}, got {}",
                crate::model::DEFAULT_MAX_STATES,
                self.states
            )));
        }
        if self.states > 1 && self.weight_steps < 2 {
            return Err(RegionError::Spec(format!(
                "weight_steps must be at least 2, got {}",
                self.weight_steps
            )));
        }
        Ok(())
    }

    pub fn describe(&self) -> String {
        let mut s = format!("steps={}", self.steps);
        if self.states > 1 {
            s.push_str(&format!(
                " states={} weight_steps={}",
                self.states, self.weight_steps
            ));
        }
        s
    }

    /// Allocations searched by [`region_union`].
    pub fn allocations(&self) -> Result<Vec<TimeSharedAllocation>, RegionError> {
        self.validate()?;
        let grid = allocation_grid(self.variant, (self.channel.p1, self.channel.p2), self.steps)?;
        if self.states == 1 {
            return Ok(grid.into_iter().map(TimeSharedAllocation::single).collect());
        }
        // every state stays within the budget on its own, so any weighting
        // keeps the average within budget
        let weights = weight_vectors(self.states, self.weight_steps);
        let mut out = Vec::new();
        for combo in combinations(grid.len(), self.states) {
            for w in &weights {
                if w.contains(&0.0) {
                    continue;
                }
                let states = combo
                    .iter()
                    .zip(w)
                    .map(|(&i, &weight)| WeightedState {
                        weight,
                        state: grid[i],
                    })
                    .collect();
                out.push(TimeSharedAllocation::new(states));
            }
        }
        Ok(out)
    }
}

/// Weight vectors of length `n` on the simplex with denominator
/// `steps - 1`.
fn weight_vectors(n: usize, steps: usize) -> Vec<Vec<f64>> {
    let denom = steps - 1;
    let mut out = Vec::new();
    let mut current = vec![0usize; n];
    fn rec(
        pos: usize,
        left: usize,
        denom: usize,
        current: &mut Vec<usize>,
        out: &mut Vec<Vec<f64>>,
    ) {
        if pos + 1 == current.len() {
            current[pos] = left;
            out.push(current.iter().map(|&k| k as f64 / denom as f64).collect());
            return;
        }
        for k in 0..=left {
            current[pos] = k;
            rec(pos + 1, left - k, denom, current, out);
        }
    }
    rec(0, denom, denom, &mut current, &mut out);
    out
}

/// Increasing index tuples of length `k` from `0..n`.
fn combinations(n: usize, k: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut current = Vec::with_capacity(k);
    fn rec(start: usize, n: usize, k: usize, current: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if current.len() == k {
            out.push(current.clone());
            return;
        }
        for i in start..n {
            current.push(i);
            rec(i + 1, n, k, current, out);
            current.pop();
        }
    }
    rec(0, n, k, &mut current, &mut out);
    out
}

/// Convex closure of the union of per-allocation regions over the allocation
/// grid of `spec`. Deterministic regardless of worker count.
pub fn region_union(spec: &RegionSpec) -> Result<Frontier, RegionError> {
    let allocations = spec.allocations()?;
    let results: Vec<Result<Frontier, RegionError>> = allocations
        .par_iter()
        .map(|alloc| region_for_allocation(&spec.channel, alloc, spec.directions))
        .collect();

    let total = results.len();
    let mut frontiers = Vec::with_capacity(total);
    let mut failed = 0;
    let mut first: Option<(usize, RegionError)> = None;
    for (i, r) in results.into_iter().enumerate() {
        match r {
            Ok(f) => frontiers.push(f),
            Err(e) => {
                failed += 1;
                if first.is_none() {
                    first = Some((i, e));
                }
            }
        }
    }
    if let Some((first_index, e)) = first {
        return Err(RegionError::AllocationFailures {
            failed,
            total,
            first_index,
            first: Box::new(e),
        });
    }
    let merged = pareto_merge(&frontiers);
    let meta = FrontierMeta {
        scheme: spec.variant.name().to_string(),
        grid: spec.describe(),
        directions: spec.directions,
        infeasible: merged.meta.infeasible,
        evaluated: total,
    };
    Ok(merged.with_meta(meta))
}
