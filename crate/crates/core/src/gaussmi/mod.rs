//! Conditional mutual information for Gaussian superposition inputs.
//!
//! Each transmitter sends `X_k = C_k + S_k + O_k + J_k` with independent
//! zero-mean Gaussian components. At a given receiver, the components it is
//! expected to decode contribute an "effective" power; everything else,
//! including unit noise, is lumped into a floor. With independent Gaussian
//! signals, conditioning on the decodable complement removes its power, so
//!
//! ```text
//! I(T_S; Y | T_{S^c}) = gamma( sum_{i in S} effective_i / floor )
//! ```
//!
//! where the complement is taken within the receiver's decodable set.

mod oracle;

pub use oracle::mi_covariance_oracle;

use std::fmt;

use thiserror::Error;

use crate::model::{ChannelParams, PowerState, TimeSharedAllocation, User};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum MiError {
    #[error("gamma argument {0} is outside [0, inf)")]
    Domain(f64),
    #[error("signal {signal} is not decoded at receiver {receiver}")]
    NotDecodable {
        signal: SignalIndex,
        receiver: Receiver,
    },
}

/// `gamma(x) = 1/2 log2(1 + x)`, in bits per channel use.
pub fn gamma(x: f64) -> Result<f64, MiError> {
    if !x.is_finite() || x < 0.0 {
        return Err(MiError::Domain(x));
    }
    Ok(gamma_unchecked(x))
}

#[inline]
pub(crate) fn gamma_unchecked(x: f64) -> f64 {
    0.5 * (1.0 + x).log2()
}

/// The six codeword components, in the order T1..T6.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum SignalIndex {
    C1,
    S1,
    O1,
    C2,
    S2,
    O2,
}

impl SignalIndex {
    pub const ALL: [SignalIndex; 6] = [
        SignalIndex::C1,
        SignalIndex::S1,
        SignalIndex::O1,
        SignalIndex::C2,
        SignalIndex::S2,
        SignalIndex::O2,
    ];

    /// Zero-based position (T1 is 0).
    pub fn position(self) -> usize {
        self as usize
    }

    pub fn from_position(position: usize) -> Option<SignalIndex> {
        SignalIndex::ALL.get(position).copied()
    }

    pub fn user(self) -> User {
        match self {
            SignalIndex::C1 | SignalIndex::S1 | SignalIndex::O1 => User::One,
            SignalIndex::C2 | SignalIndex::S2 | SignalIndex::O2 => User::Two,
        }
    }

    /// Transmit power of this component in `state`.
    pub fn power(self, state: &PowerState) -> f64 {
        match self {
            SignalIndex::C1 => state.pc1,
            SignalIndex::S1 => state.ps1,
            SignalIndex::O1 => state.po1,
            SignalIndex::C2 => state.pc2,
            SignalIndex::S2 => state.ps2,
            SignalIndex::O2 => state.po2,
        }
    }
}

impl fmt::Display for SignalIndex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let name = match self {
            SignalIndex::C1 => "C1",
            SignalIndex::S1 => "S1",
            SignalIndex::O1 => "O1",
            SignalIndex::C2 => "C2",
            SignalIndex::S2 => "S2",
            SignalIndex::O2 => "O2",
        };
        f.write_str(name)
    }
}

/// A subset of the six signals, as a bitmask over positions.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default, PartialOrd, Ord)]
pub struct SignalSet(u8);

impl SignalSet {
    pub const EMPTY: SignalSet = SignalSet(0);
    pub const FULL: SignalSet = SignalSet(0b11_1111);

    pub fn from_bits(bits: u8) -> SignalSet {
        SignalSet(bits & Self::FULL.0)
    }

    pub fn bits(self) -> u8 {
        self.0
    }

    pub fn of(signals: &[SignalIndex]) -> SignalSet {
        signals.iter().fold(SignalSet::EMPTY, |acc, &s| acc.with(s))
    }

    pub fn with(self, signal: SignalIndex) -> SignalSet {
        SignalSet(self.0 | (1 << signal.position()))
    }

    pub fn contains(self, signal: SignalIndex) -> bool {
        self.0 & (1 << signal.position()) != 0
    }

    pub fn is_empty(self) -> bool {
        self.0 == 0
    }

    pub fn len(self) -> usize {
        self.0.count_ones() as usize
    }

    pub fn is_subset_of(self, other: SignalSet) -> bool {
        self.0 & !other.0 == 0
    }

    pub fn union(self, other: SignalSet) -> SignalSet {
        SignalSet(self.0 | other.0)
    }

    pub fn intersection(self, other: SignalSet) -> SignalSet {
        SignalSet(self.0 & other.0)
    }

    pub fn difference(self, other: SignalSet) -> SignalSet {
        SignalSet(self.0 & !other.0)
    }

    pub fn iter(self) -> impl Iterator<Item = SignalIndex> {
        SignalIndex::ALL
            .into_iter()
            .filter(move |&s| self.contains(s))
    }

    /// All subsets of `self`, including the empty set and `self`, in
    /// increasing bitmask order.
    pub fn subsets(self) -> impl Iterator<Item = SignalSet> {
        let mask = self.0;
        (0..=mask).filter(move |b| b & !mask == 0).map(SignalSet)
    }
}

impl fmt::Display for SignalSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("{")?;
        for (i, s) in self.iter().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            write!(f, "{s}")?;
        }
        f.write_str("}")
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Receiver {
    Y1,
    Y2,
    Ye,
}

impl Receiver {
    pub const ALL: [Receiver; 3] = [Receiver::Y1, Receiver::Y2, Receiver::Ye];

    /// Signals the receiver decodes: its own common and self signals, the
    /// other user's common signal, and the other user's "other" signal.
    pub fn decodable(self) -> SignalSet {
        use SignalIndex::*;
        match self {
            Receiver::Y1 => SignalSet::of(&[C1, S1, C2, O2]),
            Receiver::Y2 => SignalSet::of(&[C1, O1, C2, S2]),
            Receiver::Ye => SignalSet::FULL,
        }
    }

    /// Power gain from `user` to this receiver.
    pub fn gain(self, channel: &ChannelParams, user: User) -> f64 {
        match (self, user) {
            (Receiver::Y1, User::One) | (Receiver::Y2, User::Two) => 1.0,
            (Receiver::Y1, User::Two) => channel.c21,
            (Receiver::Y2, User::One) => channel.c12,
            (Receiver::Ye, User::One) => channel.c1e,
            (Receiver::Ye, User::Two) => channel.c2e,
        }
    }
}

impl fmt::Display for Receiver {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Receiver::Y1 => "y1",
            Receiver::Y2 => "y2",
            Receiver::Ye => "ye",
        })
    }
}

/// Received powers of the decodable signals at one receiver plus the
/// interference-plus-noise floor formed by everything else.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ReceiverView {
    pub receiver: Receiver,
    pub effective: [Option<f64>; 6],
    pub floor: f64,
}

impl ReceiverView {
    pub fn effective_power(&self, signal: SignalIndex) -> Option<f64> {
        self.effective[signal.position()]
    }

    fn subset_power(&self, subset: SignalSet) -> Result<f64, MiError> {
        let mut total = 0.0;
        for signal in subset.iter() {
            match self.effective[signal.position()] {
                Some(p) => total += p,
                None => {
                    return Err(MiError::NotDecodable {
                        signal,
                        receiver: self.receiver,
                    })
                }
            }
        }
        Ok(total)
    }
}

pub fn receiver_view(
    channel: &ChannelParams,
    state: &PowerState,
    receiver: Receiver,
) -> ReceiverView {
    let decodable = receiver.decodable();
    let mut effective = [None; 6];
    let mut floor = 1.0;
    for signal in SignalIndex::ALL {
        let received = receiver.gain(channel, signal.user()) * signal.power(state);
        if decodable.contains(signal) {
            effective[signal.position()] = Some(received);
        } else {
            floor += received;
        }
    }
    for user in [User::One, User::Two] {
        floor += receiver.gain(channel, user) * state.jamming(user);
    }
    ReceiverView {
        receiver,
        effective,
        floor,
    }
}

/// `I(T_S; Y | T_{S^c})` for a single power state.
pub fn conditional_mi(view: &ReceiverView, subset: SignalSet) -> Result<f64, MiError> {
    let power = view.subset_power(subset)?;
    Ok(gamma_unchecked(power / view.floor))
}

/// `I(T_S; Y | T_{S^c}, Q)`: the state-weighted average of per-state values.
pub fn conditional_mi_timeshared(
    channel: &ChannelParams,
    alloc: &TimeSharedAllocation,
    receiver: Receiver,
    subset: SignalSet,
) -> Result<f64, MiError> {
    let mut total = 0.0;
    for ws in &alloc.states {
        let view = receiver_view(channel, &ws.state, receiver);
        total += ws.weight * conditional_mi(&view, subset)?;
    }
    Ok(total)
}
