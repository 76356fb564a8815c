//! Scheme variants: allocation grids for the superposition families, the
//! closed-form cooperative TDMA region, and the single-user baseline.

use std::fmt;
use std::str::FromStr;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::gaussmi::gamma_unchecked;
use crate::model::{
    ChannelParams, PowerState, TimeSharedAllocation, WeightedState, BUDGET_TOLERANCE,
};
use crate::polytope::{pareto_merge_points, Frontier, FrontierMeta, RatePoint};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum SchemeError {
    #[error(
        "unknown variant `{0}` (expected one of full, r3, borcp, ncp, ctdma, ctdma_nscp, tdma)"
    )]
    UnknownVariant(String),
    #[error("grid needs at least 2 steps, got {0}")]
    TooFewSteps(usize),
    #[error("variant `{0}` has no allocation grid")]
    NotAnAllocationVariant(Variant),
    #[error("variant `{0}` is not a time-division variant")]
    NotACtdmaVariant(Variant),
    #[error("parameter `{field}` is invalid ({value})")]
    BadParameter { field: &'static str, value: f64 },
    #[error("user {user} average power {average} exceeds budget {budget}")]
    BudgetExceeded { user: u8, average: f64, budget: f64 },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Variant {
    /// Single-state superposition over all four components per user.
    Full,
    /// Common signals and jamming only.
    R3,
    /// As `R3`, but each transmitter either bins or jams, never both.
    #[serde(rename = "borcp")]
    BOrCp,
    /// As `R3` without jamming.
    Ncp,
    /// Two-slot cooperative TDMA with jamming in both slots.
    Ctdma,
    /// Cooperative TDMA where the active transmitter never jams.
    CtdmaNscp,
    /// Plain TDMA, no jamming at all.
    Tdma,
}

impl Variant {
    pub const ALL: [Variant; 7] = [
        Variant::Full,
        Variant::R3,
        Variant::BOrCp,
        Variant::Ncp,
        Variant::Ctdma,
        Variant::CtdmaNscp,
        Variant::Tdma,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Variant::Full => "full",
            Variant::R3 => "r3",
            Variant::BOrCp => "borcp",
            Variant::Ncp => "ncp",
            Variant::Ctdma => "ctdma",
            Variant::CtdmaNscp => "ctdma_nscp",
            Variant::Tdma => "tdma",
        }
    }

    pub fn is_time_division(self) -> bool {
        matches!(self, Variant::Ctdma | Variant::CtdmaNscp | Variant::Tdma)
    }
}

impl fmt::Display for Variant {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Variant {
    type Err = SchemeError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Variant::ALL
            .into_iter()
            .find(|v| v.name() == s)
            .ok_or_else(|| SchemeError::UnknownVariant(s.to_string()))
    }
}

/// `count` evenly spaced values from 0 to `max` inclusive.
fn linspace(max: f64, count: usize) -> Vec<f64> {
    if count <= 1 {
        return vec![0.0];
    }
    let last = (count - 1) as f64;
    (0..count)
        .map(|i| {
            if i + 1 == count {
                max
            } else {
                max * i as f64 / last
            }
        })
        .collect()
}

/// Per-user `(pc, ps, po, pj)` tuples on the uniform grid, capped by budget.
fn user_grid(variant: Variant, budget: f64, steps: usize) -> Vec<[f64; 4]> {
    let levels = linspace(budget, steps);
    let fits = |total: f64| total <= budget + BUDGET_TOLERANCE;
    let mut out = Vec::new();
    match variant {
        Variant::Full => {
            for &pc in &levels {
                for &ps in &levels {
                    for &po in &levels {
                        for &pj in &levels {
                            if fits(pc + ps + po + pj) {
                                out.push([pc, ps, po, pj]);
                            }
                        }
                    }
                }
            }
        }
        Variant::R3 | Variant::BOrCp | Variant::Ncp => {
            for &pc in &levels {
                for &pj in &levels {
                    let allowed = match variant {
                        Variant::Ncp => pj == 0.0,
                        Variant::BOrCp => pc * pj == 0.0,
                        _ => true,
                    };
                    if allowed && fits(pc + pj) {
                        out.push([pc, 0.0, 0.0, pj]);
                    }
                }
            }
        }
        _ => {}
    }
    out
}

/// Single-state allocations of an allocation variant. Each swept power takes
/// values `{0, d, 2d, ..., budget}` with `d = budget / (steps - 1)`; states
/// whose per-user total exceeds the budget are dropped.
pub fn allocation_grid(
    variant: Variant,
    budgets: (f64, f64),
    steps: usize,
) -> Result<Vec<PowerState>, SchemeError> {
    if variant.is_time_division() {
        return Err(SchemeError::NotAnAllocationVariant(variant));
    }
    if steps < 2 {
        return Err(SchemeError::TooFewSteps(steps));
    }
    let user1 = user_grid(variant, budgets.0, steps);
    let user2 = user_grid(variant, budgets.1, steps);
    let mut states = Vec::with_capacity(user1.len() * user2.len());
    for a in &user1 {
        for b in &user2 {
            states.push(PowerState {
                pc1: a[0],
                ps1: a[1],
                po1: a[2],
                pj1: a[3],
                pc2: b[0],
                ps2: b[1],
                po2: b[2],
                pj2: b[3],
            });
        }
    }
    Ok(states)
}

/// Jamming levels on a two-segment scale: `dense_steps` points over
/// `[0, dense_max]` and `coarse_steps` more from `dense_max` up to the cap.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct JamScale {
    pub dense_max: f64,
    pub dense_steps: usize,
    pub coarse_steps: usize,
}

impl Default for JamScale {
    fn default() -> Self {
        JamScale {
            dense_max: 2.0,
            dense_steps: 21,
            coarse_steps: 9,
        }
    }
}

impl JamScale {
    pub fn levels(&self, cap: f64) -> Vec<f64> {
        if cap.is_nan() || cap <= 0.0 {
            return vec![0.0];
        }
        let dense_top = self.dense_max.min(cap);
        let mut out = linspace(dense_top, self.dense_steps.max(2));
        if cap > self.dense_max && self.coarse_steps >= 2 {
            out.extend(
                linspace(cap - self.dense_max, self.coarse_steps)
                    .into_iter()
                    .skip(1)
                    .map(|v| self.dense_max + v),
            );
            *out.last_mut().unwrap() = cap;
        }
        out.dedup();
        out
    }
}

/// Cooperative TDMA operating point: slot 1 (fraction `alpha`) carries user
/// 1's message, slot 2 carries user 2's; the idle user may jam.
#[derive(Debug, Clone, Copy, Default, PartialEq, Serialize, Deserialize)]
pub struct CtdmaParams {
    pub alpha: f64,
    pub p1b: f64,
    pub p1j1: f64,
    pub p2j1: f64,
    pub p2b: f64,
    pub p2j2: f64,
    pub p1j2: f64,
}

impl CtdmaParams {
    pub fn validate(&self, channel: &ChannelParams) -> Result<(), SchemeError> {
        let fields = [
            ("alpha", self.alpha),
            ("p1b", self.p1b),
            ("p1j1", self.p1j1),
            ("p2j1", self.p2j1),
            ("p2b", self.p2b),
            ("p2j2", self.p2j2),
            ("p1j2", self.p1j2),
        ];
        for (field, value) in fields {
            if !value.is_finite() || value < 0.0 {
                return Err(SchemeError::BadParameter { field, value });
            }
        }
        if self.alpha > 1.0 {
            return Err(SchemeError::BadParameter {
                field: "alpha",
                value: self.alpha,
            });
        }
        let (a, abar) = (self.alpha, 1.0 - self.alpha);
        let average1 = a * (self.p1b + self.p1j1) + abar * self.p1j2;
        let average2 = a * self.p2j1 + abar * (self.p2b + self.p2j2);
        for (user, average, budget) in [(1, average1, channel.p1), (2, average2, channel.p2)] {
            if average > budget + BUDGET_TOLERANCE {
                return Err(SchemeError::BudgetExceeded {
                    user,
                    average,
                    budget,
                });
            }
        }
        Ok(())
    }

    /// The equivalent two-state allocation, with each slot's message carried
    /// on the active user's self signal.
    pub fn to_allocation(&self) -> TimeSharedAllocation {
        TimeSharedAllocation::new(vec![
            WeightedState {
                weight: self.alpha,
                state: PowerState {
                    ps1: self.p1b,
                    pj1: self.p1j1,
                    pj2: self.p2j1,
                    ..Default::default()
                },
            },
            WeightedState {
                weight: 1.0 - self.alpha,
                state: PowerState {
                    ps2: self.p2b,
                    pj2: self.p2j2,
                    pj1: self.p1j2,
                    ..Default::default()
                },
            },
        ])
    }
}

/// Legitimate-minus-eavesdropper rate of one slot, before the clamp.
fn slot_difference(
    power: f64,
    own_jam: f64,
    helper_jam: f64,
    cross: f64,
    eve_own: f64,
    eve_helper: f64,
) -> f64 {
    let legit = power / (1.0 + own_jam + cross * helper_jam);
    let eve = eve_own * power / (1.0 + eve_own * own_jam + eve_helper * helper_jam);
    gamma_unchecked(legit) - gamma_unchecked(eve)
}

fn slot1_rate(channel: &ChannelParams, alpha: f64, p1b: f64, p1j1: f64, p2j1: f64) -> f64 {
    alpha * slot_difference(p1b, p1j1, p2j1, channel.c21, channel.c1e, channel.c2e).max(0.0)
}

fn slot2_rate(channel: &ChannelParams, alpha: f64, p2b: f64, p2j2: f64, p1j2: f64) -> f64 {
    (1.0 - alpha) * slot_difference(p2b, p2j2, p1j2, channel.c12, channel.c2e, channel.c1e).max(0.0)
}

/// Secrecy rate pair of a cooperative TDMA operating point.
pub fn ctdma_rates(
    channel: &ChannelParams,
    params: &CtdmaParams,
) -> Result<(f64, f64), SchemeError> {
    params.validate(channel)?;
    Ok((
        slot1_rate(channel, params.alpha, params.p1b, params.p1j1, params.p2j1),
        slot2_rate(channel, params.alpha, params.p2b, params.p2j2, params.p1j2),
    ))
}

/// Secrecy rate of a lone transmitter against an eavesdropper with gain
/// `eve_gain`.
pub fn single_user_wiretap(power: f64, eve_gain: f64) -> f64 {
    debug_assert!(power >= 0.0 && eve_gain >= 0.0);
    (gamma_unchecked(power) - gamma_unchecked(eve_gain * power)).max(0.0)
}

/// Parameter grid of a time-division variant.
///
/// The time fraction takes `alpha_steps` uniform values in `[0, 1]`. Every
/// permitted jamming power runs over `jam` levels up to what the budget
/// allows in that slot, and the active transmitter's binning power absorbs
/// whatever budget the jamming leaves. Binning power only ever raises the
/// clamped slot rate and touches no other slot, so absorbing the residual
/// loses nothing on the frontier.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CtdmaGrid {
    pub variant: Variant,
    pub alpha_steps: usize,
    pub jam: JamScale,
}

impl CtdmaGrid {
    pub fn new(variant: Variant, alpha_steps: usize, jam: JamScale) -> Result<Self, SchemeError> {
        if !variant.is_time_division() {
            return Err(SchemeError::NotACtdmaVariant(variant));
        }
        if alpha_steps < 2 {
            return Err(SchemeError::TooFewSteps(alpha_steps));
        }
        if jam.dense_steps < 2 {
            return Err(SchemeError::TooFewSteps(jam.dense_steps));
        }
        Ok(CtdmaGrid {
            variant,
            alpha_steps,
            jam,
        })
    }

    fn self_jam(&self) -> bool {
        self.variant == Variant::Ctdma
    }

    fn helper_jam(&self) -> bool {
        self.variant != Variant::Tdma
    }

    fn levels(&self, enabled: bool, cap: f64) -> Vec<f64> {
        if enabled {
            self.jam.levels(cap)
        } else {
            vec![0.0]
        }
    }

    pub fn alphas(&self) -> Vec<f64> {
        linspace(1.0, self.alpha_steps)
    }

    pub fn describe(&self) -> String {
        format!(
            "alpha_steps={} jam_dense_max={} jam_dense_steps={} jam_coarse_steps={}",
            self.alpha_steps, self.jam.dense_max, self.jam.dense_steps, self.jam.coarse_steps
        )
    }

    /// Slot-local choices for one `alpha`: `(helper_jam_levels_in_slot1,
    /// helper_jam_levels_in_slot2)` and the self-jamming levels per slot.
    fn slot_levels(&self, channel: &ChannelParams, alpha: f64) -> SlotLevels {
        let abar = 1.0 - alpha;
        let cap = |budget: f64, share: f64| if share > 0.0 { budget / share } else { 0.0 };
        SlotLevels {
            p2j1: if alpha > 0.0 {
                self.levels(self.helper_jam(), cap(channel.p2, alpha))
            } else {
                vec![0.0]
            },
            p1j1: if alpha > 0.0 {
                self.levels(self.self_jam(), cap(channel.p1, alpha))
            } else {
                vec![0.0]
            },
            p1j2: if abar > 0.0 {
                self.levels(self.helper_jam(), cap(channel.p1, abar))
            } else {
                vec![0.0]
            },
            p2j2: if abar > 0.0 {
                self.levels(self.self_jam(), cap(channel.p2, abar))
            } else {
                vec![0.0]
            },
        }
    }

    /// Every grid point, as full parameter sets. Grows as the fourth power of
    /// the jamming resolution; meant for small grids.
    pub fn params(&self, channel: &ChannelParams) -> Vec<CtdmaParams> {
        let mut out = Vec::new();
        for alpha in self.alphas() {
            let lv = self.slot_levels(channel, alpha);
            for &p2j1 in &lv.p2j1 {
                for &p1j2 in &lv.p1j2 {
                    for &p1j1 in &lv.p1j1 {
                        let Some(p1b) = residual(channel.p1, alpha, p1j2, p1j1) else {
                            continue;
                        };
                        for &p2j2 in &lv.p2j2 {
                            let Some(p2b) = residual(channel.p2, 1.0 - alpha, p2j1, p2j2) else {
                                continue;
                            };
                            out.push(CtdmaParams {
                                alpha,
                                p1b,
                                p1j1,
                                p2j1,
                                p2b,
                                p2j2,
                                p1j2,
                            });
                        }
                    }
                }
            }
        }
        out
    }
}

struct SlotLevels {
    p2j1: Vec<f64>,
    p1j1: Vec<f64>,
    p1j2: Vec<f64>,
    p2j2: Vec<f64>,
}

/// Binning power left for the active user of a slot of length `share` after
/// spending `other_slot_jam` in the other slot (length `1 - share`) and
/// `own_jam` in this one. `None` when the budget is overdrawn.
fn residual(budget: f64, share: f64, other_slot_jam: f64, own_jam: f64) -> Option<f64> {
    let other_share = 1.0 - share;
    let remaining = budget - other_share * other_slot_jam;
    if remaining < -BUDGET_TOLERANCE {
        return None;
    }
    if share <= 0.0 {
        return (own_jam == 0.0).then_some(0.0);
    }
    let binning = remaining.max(0.0) / share - own_jam;
    if binning < -BUDGET_TOLERANCE {
        None
    } else {
        Some(binning.max(0.0))
    }
}

/// A grid candidate together with its rate pair.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CtdmaCandidate {
    pub params: CtdmaParams,
    pub r1: f64,
    pub r2: f64,
}

/// Undominated candidates of the grid.
///
/// Slot 1's rate depends only on `(alpha, p1b, p1j1, p2j1)` and slot 2's only
/// on `(alpha, p2b, p2j2, p1j2)`; the slots interact only through the
/// cross-slot jamming that each budget pays for. For each `alpha` and each
/// pair of cross-slot jamming levels, the self-jamming level of each slot is
/// therefore chosen independently to maximize that slot's rate. The result
/// dominates every other grid point sharing those cross-slot levels.
pub fn ctdma_candidates(channel: &ChannelParams, grid: &CtdmaGrid) -> Vec<CtdmaCandidate> {
    let alphas = grid.alphas();
    let per_alpha: Vec<Vec<CtdmaCandidate>> = alphas
        .par_iter()
        .map(|&alpha| {
            let lv = grid.slot_levels(channel, alpha);
            let mut out = Vec::with_capacity(lv.p2j1.len() * lv.p1j2.len());
            for &p2j1 in &lv.p2j1 {
                for &p1j2 in &lv.p1j2 {
                    let best1 = lv
                        .p1j1
                        .iter()
                        .filter_map(|&p1j1| {
                            let p1b = residual(channel.p1, alpha, p1j2, p1j1)?;
                            Some((slot1_rate(channel, alpha, p1b, p1j1, p2j1), p1b, p1j1))
                        })
                        .fold(None, keep_best);
                    let best2 = lv
                        .p2j2
                        .iter()
                        .filter_map(|&p2j2| {
                            let p2b = residual(channel.p2, 1.0 - alpha, p2j1, p2j2)?;
                            Some((slot2_rate(channel, alpha, p2b, p2j2, p1j2), p2b, p2j2))
                        })
                        .fold(None, keep_best);
                    if let (Some((r1, p1b, p1j1)), Some((r2, p2b, p2j2))) = (best1, best2) {
                        out.push(CtdmaCandidate {
                            params: CtdmaParams {
                                alpha,
                                p1b,
                                p1j1,
                                p2j1,
                                p2b,
                                p2j2,
                                p1j2,
                            },
                            r1,
                            r2,
                        });
                    }
                }
            }
            out
        })
        .collect();
    per_alpha.into_iter().flatten().collect()
}

/// First strictly better wins, so ties resolve toward the lowest jamming.
fn keep_best(acc: Option<(f64, f64, f64)>, item: (f64, f64, f64)) -> Option<(f64, f64, f64)> {
    match acc {
        Some(best) if best.0 >= item.0 => Some(best),
        _ => Some(item),
    }
}

/// Convex-closure frontier of the cooperative TDMA region on `grid`.
pub fn ctdma_region(channel: &ChannelParams, grid: &CtdmaGrid) -> Frontier {
    let candidates = ctdma_candidates(channel, grid);
    let points = candidates
        .iter()
        .map(|c| RatePoint::new(c.r1, c.r2))
        .collect();
    Frontier {
        points: pareto_merge_points(points),
        meta: FrontierMeta {
            scheme: grid.variant.name().to_string(),
            grid: grid.describe(),
            directions: 0,
            infeasible: 0,
            evaluated: candidates.len(),
        },
    }
}

/// Grid of a variant: single-state allocations or time-division parameters.
#[derive(Debug, Clone, PartialEq)]
pub enum Family {
    Allocations(Vec<TimeSharedAllocation>),
    Ctdma(Vec<CtdmaParams>),
}

/// Enumerates the grid of `variant`. For time-division variants `steps` sets
/// the time-fraction resolution and the jamming scale uses `jam`.
pub fn variant_family(
    variant: Variant,
    channel: &ChannelParams,
    steps: usize,
    jam: JamScale,
) -> Result<Family, SchemeError> {
    if variant.is_time_division() {
        let grid = CtdmaGrid::new(variant, steps, jam)?;
        Ok(Family::Ctdma(grid.params(channel)))
    } else {
        let states = allocation_grid(variant, (channel.p1, channel.p2), steps)?;
        Ok(Family::Allocations(
            states
                .into_iter()
                .map(TimeSharedAllocation::single)
                .collect(),
        ))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::Preset;
    use crate::polytope::pareto_merge;

    const WIRETAP_FIG2: f64 = 0.437_234_558_958_070_6;

    fn params(f: impl FnOnce(&mut CtdmaParams)) -> CtdmaParams {
        let mut p = CtdmaParams::default();
        f(&mut p);
        p
    }

    #[test]
    fn closed_form_examples() {
        let fig2 = Preset::Fig2.channel();
        let (r1, r2) = ctdma_rates(
            &fig2,
            &params(|p| {
                p.alpha = 1.0;
                p.p1b = 10.0
            }),
        )
        .unwrap();
        assert!((r1 - 0.437235).abs() < 1e-6 && r2 == 0.0);
        assert!((r1 - 0.5 * (11.0f64 / 6.0).log2()).abs() < 1e-15);

        let fig3 = Preset::Fig3.channel();
        let (r1, _) = ctdma_rates(
            &fig3,
            &params(|p| {
                p.alpha = 1.0;
                p.p1b = 10.0;
                p.p2j1 = 0.88
            }),
        )
        .unwrap();
        let expected = 0.5 * ((11.88 * 2.408) / (1.88 * 7.408f64)).log2();
        assert!((r1 - expected).abs() < 1e-12);
        assert!((r1 - 0.5192).abs() < 5e-3);

        let (r1, _) = ctdma_rates(
            &fig2,
            &params(|p| {
                p.alpha = 0.0;
                p.p1b = 1e6;
                p.p2b = 10.0
            }),
        )
        .unwrap();
        assert_eq!(r1, 0.0);
    }

    #[test]
    fn half_slots_at_nominal_power() {
        let fig2 = Preset::Fig2.channel();
        let (r1, r2) = ctdma_rates(
            &fig2,
            &params(|p| {
                p.alpha = 0.5;
                p.p1b = 10.0;
                p.p2b = 10.0
            }),
        )
        .unwrap();
        assert!((r1 - 0.218618).abs() < 1e-6 && (r2 - 0.218618).abs() < 1e-6);
    }

    #[test]
    fn three_alpha_tdma_region() {
        let fig2 = Preset::Fig2.channel();
        let grid = CtdmaGrid::new(Variant::Tdma, 3, JamScale::default()).unwrap();
        let f = pareto_merge(&[ctdma_region(&fig2, &grid)]);
        for p in [
            RatePoint::new(WIRETAP_FIG2, 0.0),
            RatePoint::new(0.0, WIRETAP_FIG2),
            RatePoint::new(0.218618, 0.218618),
        ] {
            assert!(f.contains(p, 1e-9), "{p:?}");
        }
        // residual binning power lifts the half-slot point above the nominal one
        let half = 0.5 * single_user_wiretap(20.0, fig2.c1e);
        assert!(f.contains(RatePoint::new(half, half), 1e-9));
        assert!(half > 0.2329);
    }

    #[test]
    fn budget_violation_rejected() {
        let fig2 = Preset::Fig2.channel();
        let err = ctdma_rates(
            &fig2,
            &params(|p| {
                p.alpha = 0.5;
                p.p1b = 20.0;
                p.p1j2 = 1.0
            }),
        )
        .unwrap_err();
        assert!(matches!(err, SchemeError::BudgetExceeded { user: 1, .. }));
        assert!(matches!(
            ctdma_rates(&fig2, &params(|p| p.alpha = 1.5)),
            Err(SchemeError::BadParameter { field: "alpha", .. })
        ));
    }

    #[test]
    fn wiretap_baseline() {
        assert!((single_user_wiretap(10.0, 0.5) - WIRETAP_FIG2).abs() < 1e-15);
        assert_eq!(single_user_wiretap(10.0, 1.6), 0.0);
        assert_eq!(single_user_wiretap(0.0, 0.3), 0.0);
        let fig2 = Preset::Fig2.channel();
        let (r1, r2) = ctdma_rates(
            &fig2,
            &params(|p| {
                p.alpha = 1.0;
                p.p1b = 10.0
            }),
        )
        .unwrap();
        assert_eq!((r1, r2), (single_user_wiretap(10.0, fig2.c1e), 0.0));
    }

    #[test]
    fn fig2_jamming_only_hurts() {
        let fig2 = Preset::Fig2.channel();
        let mut last = f64::INFINITY;
        for k in 0..=50 {
            let j = k as f64 * 0.2;
            let (r1, _) = ctdma_rates(
                &fig2,
                &params(|p| {
                    p.alpha = 1.0;
                    p.p1b = 10.0;
                    p.p2j1 = j
                }),
            )
            .unwrap();
            assert!(
                r1 < last || (r1 == 0.0 && last == 0.0),
                "not decreasing at {j}"
            );
            last = r1;
        }
    }

    #[test]
    fn fig3_helper_jamming_helps() {
        let fig3 = Preset::Fig3.channel();
        let at = |j: f64| {
            ctdma_rates(
                &fig3,
                &params(|p| {
                    p.alpha = 1.0;
                    p.p1b = 10.0;
                    p.p2j1 = j
                }),
            )
            .unwrap()
            .0
        };
        assert!(at(0.88) > at(0.0) + 0.05);
    }

    #[test]
    fn variant_names_round_trip() {
        for v in Variant::ALL {
            assert_eq!(v.name().parse::<Variant>(), Ok(v));
            let json = serde_json::to_string(&v).unwrap();
            assert_eq!(json, format!("\"{}\"", v.name()));
        }
        assert!(matches!(
            "r4".parse::<Variant>(),
            Err(SchemeError::UnknownVariant(_))
        ));
    }

    #[test]
    fn ncp_grid_has_nine_states() {
        let states = allocation_grid(Variant::Ncp, (10.0, 10.0), 3).unwrap();
        assert_eq!(states.len(), 9);
        for s in &states {
            assert_eq!((s.pj1, s.pj2, s.ps1, s.po2), (0.0, 0.0, 0.0, 0.0));
            assert!([0.0, 5.0, 10.0].contains(&s.pc1) && [0.0, 5.0, 10.0].contains(&s.pc2));
        }
    }

    #[test]
    fn borcp_membership() {
        let states = allocation_grid(Variant::BOrCp, (10.0, 10.0), 3).unwrap();
        assert!(!states.iter().any(|s| s.pc1 == 5.0 && s.pj1 == 5.0));
        assert!(states.iter().any(|s| s.pc1 == 5.0 && s.pj1 == 0.0));
        assert!(states
            .iter()
            .all(|s| s.pc1 * s.pj1 == 0.0 && s.pc2 * s.pj2 == 0.0));
    }

    #[test]
    fn r3_grid_respects_budget() {
        let states = allocation_grid(Variant::R3, (10.0, 10.0), 11).unwrap();
        assert_eq!(states.len(), 66 * 66);
        assert!(states
            .iter()
            .any(|s| s.pc1 == 10.0 && s.pc2 == 1.0 && s.pj1 == 0.0 && s.pj2 == 0.0));
        assert!(allocation_grid(Variant::R3, (10.0, 10.0), 1).is_err());
        assert!(allocation_grid(Variant::Tdma, (10.0, 10.0), 3).is_err());
    }

    #[test]
    fn jam_scale_levels() {
        let scale = JamScale::default();
        let lv = scale.levels(10.0);
        assert_eq!(lv[0], 0.0);
        assert_eq!(*lv.last().unwrap(), 10.0);
        assert!(lv.windows(2).all(|w| w[0] < w[1]));
        assert!(lv.iter().any(|&v| (v - 0.9).abs() < 1e-12));
        assert_eq!(lv.iter().filter(|&&v| v <= 2.0).count(), 21);
        assert_eq!(scale.levels(1.0).last(), Some(&1.0));
        assert_eq!(scale.levels(0.0), vec![0.0]);
    }

    #[test]
    fn time_division_families_nest() {
        let ch = Preset::Fig3.channel();
        let jam = JamScale {
            dense_max: 2.0,
            dense_steps: 3,
            coarse_steps: 2,
        };
        let get = |v| match variant_family(v, &ch, 3, jam).unwrap() {
            Family::Ctdma(p) => p,
            _ => unreachable!(),
        };
        let (tdma, nscp, full) = (
            get(Variant::Tdma),
            get(Variant::CtdmaNscp),
            get(Variant::Ctdma),
        );
        assert!(tdma.iter().all(|p| nscp.contains(p)));
        assert!(nscp.iter().all(|p| full.contains(p)));
        assert!(tdma.len() < nscp.len() && nscp.len() < full.len());
        for p in &full {
            p.validate(&ch).unwrap();
        }
    }

    #[test]
    fn candidate_reduction_matches_full_enumeration() {
        let jam = JamScale {
            dense_max: 2.0,
            dense_steps: 5,
            coarse_steps: 3,
        };
        for ch in [Preset::Fig2.channel(), Preset::Fig3.channel()] {
            for v in [Variant::Ctdma, Variant::CtdmaNscp, Variant::Tdma] {
                let grid = CtdmaGrid::new(v, 5, jam).unwrap();
                let reduced = ctdma_region(&ch, &grid);
                let singletons: Vec<Frontier> = grid
                    .params(&ch)
                    .iter()
                    .map(|p| {
                        let (r1, r2) = ctdma_rates(&ch, p).unwrap();
                        Frontier::from_points([RatePoint::new(r1, r2)])
                    })
                    .collect();
                let brute = pareto_merge(&singletons);
                assert_eq!(reduced.points, brute.points, "{v}");
            }
        }
    }

    #[test]
    fn zero_budgets_give_origin() {
        let ch = ChannelParams::new(1.0, 1.0, 0.5, 0.5, 0.0, 0.0).unwrap();
        let grid = CtdmaGrid::new(Variant::Ctdma, 5, JamScale::default()).unwrap();
        assert_eq!(
            ctdma_region(&ch, &grid).points,
            vec![RatePoint::new(0.0, 0.0)]
        );
    }

    #[test]
    fn allocation_mapping_preserves_budget() {
        let ch = Preset::Fig3.channel();
        let p = params(|p| {
            p.alpha = 0.25;
            p.p1b = 20.0;
            p.p1j1 = 4.0;
            p.p2j1 = 8.0;
            p.p2b = 9.0;
            p.p1j2 = 5.0;
        });
        p.validate(&ch).unwrap();
        let alloc = p.to_allocation();
        crate::model::validate_allocation(&ch, &alloc).unwrap();
    }
}
