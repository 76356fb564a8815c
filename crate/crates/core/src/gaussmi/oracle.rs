//! Covariance-determinant evaluation of the same conditional mutual
//! information, built straight from the observation model rather than from a
//! receiver view. Used only to cross-check the closed form.

use nalgebra::DMatrix;

use super::{MiError, Receiver, SignalIndex, SignalSet};
use crate::model::{ChannelParams, PowerState, User};

/// One independent Gaussian source entering the observation.
struct Source {
    /// Amplitude gain into the observation.
    amplitude: f64,
    variance: f64,
    signal: Option<SignalIndex>,
}

fn sources(channel: &ChannelParams, state: &PowerState, receiver: Receiver) -> Vec<Source> {
    let amplitude = |user: User| receiver.gain(channel, user).sqrt();
    let mut out = Vec::with_capacity(9);
    for signal in SignalIndex::ALL {
        out.push(Source {
            amplitude: amplitude(signal.user()),
            variance: signal.power(state),
            signal: Some(signal),
        });
    }
    out.push(Source {
        amplitude: amplitude(User::One),
        variance: state.pj1,
        signal: None,
    });
    out.push(Source {
        amplitude: amplitude(User::Two),
        variance: state.pj2,
        signal: None,
    });
    // receiver noise
    out.push(Source {
        amplitude: 1.0,
        variance: 1.0,
        signal: None,
    });
    out
}

/// `Var(Y | T_given)` via `det(Cov[Y, T_given]) / det(Cov[T_given])`.
fn conditional_variance(sources: &[Source], given: SignalSet) -> f64 {
    // conditioning on a zero-variance signal is vacuous and would make the
    // covariance singular
    let conditioned: Vec<&Source> = sources
        .iter()
        .filter(|s| s.variance > 0.0 && s.signal.is_some_and(|sig| given.contains(sig)))
        .collect();
    let n = conditioned.len();
    let var_y: f64 = sources
        .iter()
        .map(|s| s.amplitude * s.amplitude * s.variance)
        .sum();

    let mut joint = DMatrix::<f64>::zeros(n + 1, n + 1);
    joint[(0, 0)] = var_y;
    for (i, s) in conditioned.iter().enumerate() {
        let cross = s.amplitude * s.variance;
        joint[(0, i + 1)] = cross;
        joint[(i + 1, 0)] = cross;
        joint[(i + 1, i + 1)] = s.variance;
    }
    let marginal = joint.view((1, 1), (n, n)).into_owned();
    joint.determinant() / marginal.determinant()
}

pub fn mi_covariance_oracle(
    channel: &ChannelParams,
    state: &PowerState,
    receiver: Receiver,
    subset: SignalSet,
) -> Result<f64, MiError> {
    let decodable = receiver.decodable();
    if let Some(signal) = subset.difference(decodable).iter().next() {
        return Err(MiError::NotDecodable { signal, receiver });
    }
    let sources = sources(channel, state, receiver);
    let complement = decodable.difference(subset);
    let before = conditional_variance(&sources, complement);
    let after = conditional_variance(&sources, decodable);
    Ok(0.5 * (before / after).log2())
}
