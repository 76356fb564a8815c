//! Run configuration: an optional JSON file overlaid by command-line flags.

use std::fs;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::model::{ChannelParams, Preset};
use crate::polytope::DEFAULT_DIRECTIONS;
use crate::schemes::{JamScale, Variant};

use super::CliError;

/// Contents of a `--config` file. Every field is optional.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    pub preset: Option<Preset>,
    pub channel: Option<ChannelParams>,
    pub variant: Option<String>,
    pub steps: Option<usize>,
    pub directions: Option<usize>,
    pub states: Option<usize>,
    pub weight_steps: Option<usize>,
    pub out: Option<PathBuf>,
    pub alloc: Option<PathBuf>,
    pub seed: Option<u64>,
    pub samples: Option<usize>,
    pub tolerance: Option<f64>,
    pub systems: Option<usize>,
    pub pitch: Option<f64>,
    pub jam: Option<JamScale>,
}

impl RunConfig {
    pub fn load(path: &Path) -> Result<Self, CliError> {
        let text = fs::read_to_string(path)
            .map_err(|e| CliError::Config(format!("{}: {e}", path.display())))?;
        serde_json::from_str(&text)
            .map_err(|e| CliError::Config(format!("{}: {e}", path.display())))
    }
}

/// Channel flags as given on the command line.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct ChannelFlags {
    pub preset: Option<String>,
    pub c12: Option<f64>,
    pub c21: Option<f64>,
    pub c1e: Option<f64>,
    pub c2e: Option<f64>,
    pub p1: Option<f64>,
    pub p2: Option<f64>,
}

impl ChannelFlags {
    fn has_inline(&self) -> bool {
        [self.c12, self.c21, self.c1e, self.c2e, self.p1, self.p2]
            .iter()
            .any(Option::is_some)
    }
}

/// A resolved channel and the preset it came from, if any.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ResolvedChannel {
    pub channel: ChannelParams,
    pub preset: Option<Preset>,
}

/// Picks exactly one channel source. Flags replace the file's source; inline
/// flags may patch an inline channel from the file.
pub fn resolve_channel(
    file: &RunConfig,
    flags: &ChannelFlags,
) -> Result<ResolvedChannel, CliError> {
    if file.preset.is_some() && file.channel.is_some() {
        return Err(CliError::Config(
            "config sets both `preset` and `channel`; give exactly one".into(),
        ));
    }
    if flags.preset.is_some() && flags.has_inline() {
        return Err(CliError::Config(
            "--preset cannot be combined with inline channel flags".into(),
        ));
    }
    let resolved = if let Some(name) = &flags.preset {
        let preset: Preset = name.parse().map_err(|e| CliError::Config(format!("{e}")))?;
        ResolvedChannel {
            channel: preset.channel(),
            preset: Some(preset),
        }
    } else if flags.has_inline() {
        let base = file.channel;
        let pick = |flag: Option<f64>, from_file: Option<f64>, name: &str| {
            flag.or(from_file)
                .ok_or_else(|| CliError::Config(format!("inline channel is missing --{name}")))
        };
        ResolvedChannel {
            channel: ChannelParams {
                c12: pick(flags.c12, base.map(|c| c.c12), "c12")?,
                c21: pick(flags.c21, base.map(|c| c.c21), "c21")?,
                c1e: pick(flags.c1e, base.map(|c| c.c1e), "c1e")?,
                c2e: pick(flags.c2e, base.map(|c| c.c2e), "c2e")?,
                p1: pick(flags.p1, base.map(|c| c.p1), "p1")?,
                p2: pick(flags.p2, base.map(|c| c.p2), "p2")?,
            },
            preset: None,
        }
    } else if let Some(preset) = file.preset {
        ResolvedChannel {
            channel: preset.channel(),
            preset: Some(preset),
        }
    } else if let Some(channel) = file.channel {
        ResolvedChannel {
            channel,
            preset: None,
        }
    } else {
        return Err(CliError::Config(
            "no channel given; use --preset or all of --c12 --c21 --c1e --c2e --p1 --p2".into(),
        ));
    };
    resolved
        .channel
        .validate()
        .map_err(|e| CliError::Config(format!("invalid channel: {e}")))?;
    Ok(resolved)
}

pub fn resolve_variant(
    flag: Option<&str>,
    file: Option<&str>,
    default: Variant,
) -> Result<Variant, CliError> {
    match flag.or(file) {
        Some(name) => name.parse().map_err(|e| CliError::Config(format!("{e}"))),
        None => Ok(default),
    }
}

pub fn check_steps(steps: usize) -> Result<usize, CliError> {
    if steps < 2 {
        return Err(CliError::Config(format!(
            "steps must be at least 2, got {steps}"
        )));
    }
    Ok(steps)
}

pub fn check_directions(directions: usize) -> Result<usize, CliError> {
    if directions < 3 {
        return Err(CliError::Config(format!(
            "directions (M) must be at least 3, got {directions}"
        )));
    }
    Ok(directions)
}

pub fn directions(flag: Option<usize>, file: &RunConfig) -> Result<usize, CliError> {
    check_directions(flag.or(file.directions).unwrap_or(DEFAULT_DIRECTIONS))
}
