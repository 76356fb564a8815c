//! Achievable secrecy rate regions for the two-user Gaussian interference
//! channel with an external eavesdropper, under cooperative binning and
//! channel prefixing (jamming), plus the closed-form cooperative TDMA region.
//!
//! Layout:
//!
//! - [`model`]: channel instances, power states, time-shared allocations
//! - [`gaussmi`]: conditional mutual information for Gaussian superposition
//! - [`polytope`]: dense simplex, frontier projection and merging
//! - [`region`]: constraint systems and unions over allocation grids
//! - [`schemes`]: variant grids, cooperative TDMA, wiretap baseline
//! - [`validation`]: seeded oracle suites
//! - [`cli`]: the `gicee` command line

pub mod cli;
pub mod gaussmi;
pub mod model;
pub mod polytope;
pub mod region;
pub mod schemes;
pub mod validation;

pub use gaussmi::{gamma, Receiver, SignalIndex, SignalSet};
pub use model::{ChannelParams, PowerState, Preset, TimeSharedAllocation};
pub use polytope::{Frontier, RatePoint};
