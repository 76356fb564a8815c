//! Channel instances and time-shared power allocations.
//!
//! The channel is kept in standard form: direct gains and all noise
//! variances are normalized to one, so an instance is fully described by the
//! four cross/eavesdropper gains and the two average power budgets.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Absolute slack on averaged power and weight-sum checks.
pub const BUDGET_TOLERANCE: f64 = 1e-12;

/// Default cap on the number of time-sharing states.
pub const DEFAULT_MAX_STATES: usize = 4;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ModelError {
    #[error("field `{field}` is not finite ({value})")]
    NonFinite { field: String, value: f64 },
    #[error("field `{field}` is negative ({value})")]
    Negative { field: String, value: f64 },
    #[error("allocation has no states")]
    EmptyAllocation,
    #[error("allocation has {count} states, limit is {max}")]
    TooManyStates { count: usize, max: usize },
    #[error("state weights sum to {sum}, expected 1")]
    WeightSum { sum: f64 },
    #[error("user {user} average power {average} exceeds budget p{user} = {budget}")]
    BudgetExceeded { user: u8, average: f64, budget: f64 },
    #[error("unknown preset `{0}` (expected fig2 or fig3)")]
    UnknownPreset(String),
}

impl ModelError {
    /// Coarse classification used by callers that only need to tell malformed
    /// numbers apart from constraint violations.
    pub fn is_non_finite(&self) -> bool {
        matches!(self, ModelError::NonFinite { .. })
    }
}

fn check_field(field: &str, value: f64) -> Result<(), ModelError> {
    if !value.is_finite() {
        return Err(ModelError::NonFinite {
            field: field.to_string(),
            value,
        });
    }
    if value < 0.0 {
        return Err(ModelError::Negative {
            field: field.to_string(),
            value,
        });
    }
    Ok(())
}

/// Transmitter index.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum User {
    One,
    Two,
}

impl User {
    pub fn number(self) -> u8 {
        match self {
            User::One => 1,
            User::Two => 2,
        }
    }

    pub fn other(self) -> User {
        match self {
            User::One => User::Two,
            User::Two => User::One,
        }
    }
}

/// A two-user Gaussian interference channel with an external eavesdropper in
/// standard form:
///
/// ```text
/// Y1 = X1 + sqrt(c21) X2 + N1
/// Y2 = sqrt(c12) X1 + X2 + N2
/// Ye = sqrt(c1e) X1 + sqrt(c2e) X2 + Ne
/// ```
///
/// with unit-variance noise everywhere.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ChannelParams {
    pub c12: f64,
    pub c21: f64,
    pub c1e: f64,
    pub c2e: f64,
    pub p1: f64,
    pub p2: f64,
}

impl ChannelParams {
    pub fn new(
        c12: f64,
        c21: f64,
        c1e: f64,
        c2e: f64,
        p1: f64,
        p2: f64,
    ) -> Result<Self, ModelError> {
        let channel = ChannelParams {
            c12,
            c21,
            c1e,
            c2e,
            p1,
            p2,
        };
        channel.validate()?;
        Ok(channel)
    }

    pub fn validate(&self) -> Result<(), ModelError> {
        check_field("c12", self.c12)?;
        check_field("c21", self.c21)?;
        check_field("c1e", self.c1e)?;
        check_field("c2e", self.c2e)?;
        check_field("p1", self.p1)?;
        check_field("p2", self.p2)
    }

    pub fn budget(&self, user: User) -> f64 {
        match user {
            User::One => self.p1,
            User::Two => self.p2,
        }
    }

    /// Gain from `user` to the eavesdropper.
    pub fn eve_gain(&self, user: User) -> f64 {
        match user {
            User::One => self.c1e,
            User::Two => self.c2e,
        }
    }

    /// Gain from `user` into the other user's receiver.
    pub fn cross_gain(&self, user: User) -> f64 {
        match user {
            User::One => self.c12,
            User::Two => self.c21,
        }
    }

    /// Channel with the two users' roles exchanged.
    pub fn swapped(&self) -> ChannelParams {
        ChannelParams {
            c12: self.c21,
            c21: self.c12,
            c1e: self.c2e,
            c2e: self.c1e,
            p1: self.p2,
            p2: self.p1,
        }
    }
}

/// Named channel instances from the two numerical scenarios.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Preset {
    /// Symmetric interference, weak eavesdropper links.
    Fig2,
    /// Asymmetric: user 2 has a strong link to the eavesdropper.
    Fig3,
}

impl Preset {
    pub fn channel(self) -> ChannelParams {
        match self {
            Preset::Fig2 => ChannelParams {
                c12: 1.9,
                c21: 1.9,
                c1e: 0.5,
                c2e: 0.5,
                p1: 10.0,
                p2: 10.0,
            },
            Preset::Fig3 => ChannelParams {
                c12: 1.9,
                c21: 1.0,
                c1e: 0.5,
                c2e: 1.6,
                p1: 10.0,
                p2: 10.0,
            },
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Preset::Fig2 => "fig2",
            Preset::Fig3 => "fig3",
        }
    }
}

impl FromStr for Preset {
    type Err = ModelError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "fig2" => Ok(Preset::Fig2),
            "fig3" => Ok(Preset::Fig3),
            other => Err(ModelError::UnknownPreset(other.to_string())),
        }
    }
}

impl fmt::Display for Preset {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

pub fn preset(name: &str) -> Result<ChannelParams, ModelError> {
    name.parse::<Preset>().map(Preset::channel)
}

/// Per-state transmit powers. For each user: common-message binning power,
/// self-message binning power, "other" (decoded only at the unintended
/// receiver) power, and jamming power.
#[derive(Debug, Clone, Copy, Default, PartialEq, Serialize, Deserialize)]
pub struct PowerState {
    #[serde(default)]
    pub pc1: f64,
    #[serde(default)]
    pub ps1: f64,
    #[serde(default)]
    pub po1: f64,
    #[serde(default)]
    pub pj1: f64,
    #[serde(default)]
    pub pc2: f64,
    #[serde(default)]
    pub ps2: f64,
    #[serde(default)]
    pub po2: f64,
    #[serde(default)]
    pub pj2: f64,
}

impl PowerState {
    pub fn validate(&self) -> Result<(), ModelError> {
        for (name, value) in self.fields() {
            check_field(name, value)?;
        }
        Ok(())
    }

    fn fields(&self) -> [(&'static str, f64); 8] {
        [
            ("pc1", self.pc1),
            ("ps1", self.ps1),
            ("po1", self.po1),
            ("pj1", self.pj1),
            ("pc2", self.pc2),
            ("ps2", self.ps2),
            ("po2", self.po2),
            ("pj2", self.pj2),
        ]
    }

    /// Total codeword (binning plus other) power of `user`.
    pub fn binning(&self, user: User) -> f64 {
        match user {
            User::One => self.pc1 + self.ps1 + self.po1,
            User::Two => self.pc2 + self.ps2 + self.po2,
        }
    }

    pub fn jamming(&self, user: User) -> f64 {
        match user {
            User::One => self.pj1,
            User::Two => self.pj2,
        }
    }

    pub fn total(&self, user: User) -> f64 {
        self.binning(user) + self.jamming(user)
    }

    pub fn swapped(&self) -> PowerState {
        PowerState {
            pc1: self.pc2,
            ps1: self.ps2,
            po1: self.po2,
            pj1: self.pj2,
            pc2: self.pc1,
            ps2: self.ps1,
            po2: self.po1,
            pj2: self.pj1,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct WeightedState {
    pub weight: f64,
    #[serde(flatten)]
    pub state: PowerState,
}

/// A distribution over power states; the support realizes the time-sharing
/// variable.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TimeSharedAllocation {
    pub states: Vec<WeightedState>,
}

impl TimeSharedAllocation {
    pub fn new(states: Vec<WeightedState>) -> Self {
        TimeSharedAllocation { states }
    }

    pub fn single(state: PowerState) -> Self {
        TimeSharedAllocation {
            states: vec![WeightedState { weight: 1.0, state }],
        }
    }

    /// Builds an allocation from unnormalized weights.
    pub fn normalized(states: Vec<(f64, PowerState)>) -> Result<Self, ModelError> {
        for (weight, _) in &states {
            check_field("weight", *weight)?;
        }
        let sum: f64 = states.iter().map(|(w, _)| w).sum();
        if sum <= 0.0 {
            return Err(ModelError::WeightSum { sum });
        }
        Ok(TimeSharedAllocation {
            states: states
                .into_iter()
                .map(|(weight, state)| WeightedState {
                    weight: weight / sum,
                    state,
                })
                .collect(),
        })
    }

    /// Time-averaged total power of `user`.
    pub fn average_power(&self, user: User) -> f64 {
        self.states
            .iter()
            .map(|ws| ws.weight * ws.state.total(user))
            .sum()
    }
}

/// Limits applied by [`validate_allocation_with`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AllocationLimits {
    pub max_states: usize,
    pub tolerance: f64,
}

impl Default for AllocationLimits {
    fn default() -> Self {
        AllocationLimits {
            max_states: DEFAULT_MAX_STATES,
            tolerance: BUDGET_TOLERANCE,
        }
    }
}

pub fn validate_allocation(
    channel: &ChannelParams,
    alloc: &TimeSharedAllocation,
) -> Result<(), ModelError> {
    validate_allocation_with(channel, alloc, &AllocationLimits::default())
}

pub fn validate_allocation_with(
    channel: &ChannelParams,
    alloc: &TimeSharedAllocation,
    limits: &AllocationLimits,
) -> Result<(), ModelError> {
    channel.validate()?;
    if alloc.states.is_empty() {
        return Err(ModelError::EmptyAllocation);
    }
    if alloc.states.len() > limits.max_states {
        return Err(ModelError::TooManyStates {
            count: alloc.states.len(),
            max: limits.max_states,
        });
    }
    for ws in &alloc.states {
        check_field("weight", ws.weight)?;
        ws.state.validate()?;
    }
    let sum: f64 = alloc.states.iter().map(|ws| ws.weight).sum();
    if (sum - 1.0).abs() > limits.tolerance {
        return Err(ModelError::WeightSum { sum });
    }
    for user in [User::One, User::Two] {
        let average = alloc.average_power(user);
        let budget = channel.budget(user);
        if average > budget + limits.tolerance {
            return Err(ModelError::BudgetExceeded {
                user: user.number(),
                average,
                budget,
            });
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn fig2() -> ChannelParams {
        Preset::Fig2.channel()
    }

    #[test]
    fn presets_match_scenarios() {
        let f2 = preset("fig2").unwrap();
        assert_eq!(
            (f2.c12, f2.c21, f2.c1e, f2.c2e, f2.p1, f2.p2),
            (1.9, 1.9, 0.5, 0.5, 10.0, 10.0)
        );
        let f3 = preset("fig3").unwrap();
        assert_eq!(
            (f3.c12, f3.c21, f3.c1e, f3.c2e, f3.p1, f3.p2),
            (1.9, 1.0, 0.5, 1.6, 10.0, 10.0)
        );
        assert_eq!(
            preset("fig4"),
            Err(ModelError::UnknownPreset("fig4".into()))
        );
    }

    #[test]
    fn full_power_single_state_is_valid() {
        let alloc = TimeSharedAllocation::single(PowerState {
            pc1: 10.0,
            ..Default::default()
        });
        assert_eq!(validate_allocation(&fig2(), &alloc), Ok(()));
    }

    #[test]
    fn negative_power_rejected() {
        let alloc = TimeSharedAllocation::single(PowerState {
            pj1: -1.0,
            ..Default::default()
        });
        let err = validate_allocation(&fig2(), &alloc).unwrap_err();
        assert!(
            matches!(err, ModelError::Negative { ref field, value } if field == "pj1" && value == -1.0)
        );
    }

    #[test]
    fn averaged_budget_violation_reported() {
        let state = PowerState {
            pc1: 30.0,
            ..Default::default()
        };
        let alloc = TimeSharedAllocation::new(vec![
            WeightedState { weight: 0.5, state },
            WeightedState { weight: 0.5, state },
        ]);
        let err = validate_allocation(&fig2(), &alloc).unwrap_err();
        assert_eq!(
            err,
            ModelError::BudgetExceeded {
                user: 1,
                average: 30.0,
                budget: 10.0
            }
        );
        assert!(err.to_string().contains("p1"));
    }

    #[test]
    fn non_finite_is_distinct_from_budget() {
        let alloc = TimeSharedAllocation::single(PowerState {
            pc2: f64::NAN,
            ..Default::default()
        });
        let err = validate_allocation(&fig2(), &alloc).unwrap_err();
        assert!(err.is_non_finite());
        let bad_channel = ChannelParams {
            p1: f64::INFINITY,
            ..fig2()
        };
        assert!(bad_channel.validate().unwrap_err().is_non_finite());
    }

    #[test]
    fn weights_must_sum_to_one() {
        let alloc = TimeSharedAllocation::new(vec![WeightedState {
            weight: 0.9,
            state: PowerState::default(),
        }]);
        assert!(matches!(
            validate_allocation(&fig2(), &alloc),
            Err(ModelError::WeightSum { .. })
        ));
        let ok = TimeSharedAllocation::normalized(vec![
            (2.0, PowerState::default()),
            (6.0, PowerState::default()),
        ])
        .unwrap();
        assert_eq!(ok.states[1].weight, 0.75);
        assert_eq!(validate_allocation(&fig2(), &ok), Ok(()));
    }

    #[test]
    fn state_limit_is_configurable() {
        let alloc =
            TimeSharedAllocation::normalized(vec![(1.0, PowerState::default()); 5]).unwrap();
        assert!(matches!(
            validate_allocation(&fig2(), &alloc),
            Err(ModelError::TooManyStates { count: 5, max: 4 })
        ));
        let limits = AllocationLimits {
            max_states: 8,
            ..Default::default()
        };
        assert_eq!(validate_allocation_with(&fig2(), &alloc, &limits), Ok(()));
    }

    #[test]
    fn boundary_allocation_survives_rounding() {
        // 0.1 * 100 accumulates rounding above 10 in floating point
        let states = vec![
            (
                0.1,
                PowerState {
                    pc1: 10.0,
                    ..Default::default()
                }
            );
            10
        ];
        let alloc = TimeSharedAllocation::normalized(states).unwrap();
        let limits = AllocationLimits {
            max_states: 10,
            ..Default::default()
        };
        assert_eq!(validate_allocation_with(&fig2(), &alloc, &limits), Ok(()));
    }

    #[test]
    fn json_layout() {
        let text = r#"{"states":[{"weight":1.0,"pc1":10,"pc2":1}]}"#;
        let alloc: TimeSharedAllocation = serde_json::from_str(text).unwrap();
        assert_eq!(alloc.states[0].state.pc1, 10.0);
        assert_eq!(alloc.states[0].state.pj2, 0.0);
        let out = serde_json::to_value(&alloc).unwrap();
        let keys: Vec<_> = out["states"][0]
            .as_object()
            .unwrap()
            .keys()
            .cloned()
            .collect();
        for key in [
            "weight", "pc1", "ps1", "po1", "pj1", "pc2", "ps2", "po2", "pj2",
        ] {
            assert!(keys.iter().any(|k| k == key), "missing {key}");
        }
        let ch: ChannelParams =
            serde_json::from_str(r#"{"c12":1.9,"c21":1,"c1e":0.5,"c2e":1.6,"p1":10,"p2":10}"#)
                .unwrap();
        assert_eq!(ch, Preset::Fig3.channel());
    }
}
