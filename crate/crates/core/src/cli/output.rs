//! CSV frontier files and their JSON sidecars.

use std::fs;
use std::path::{Path, PathBuf};

use serde::Serialize;

use crate::model::{ChannelParams, Preset};
use crate::polytope::Frontier;

use super::CliError;

pub const CSV_HEADER: &str = "r1_bits,r2_bits";

/// `v` rounded to 9 significant digits, without trailing zeros.
pub fn format_sig9(v: f64) -> String {
    if v == 0.0 || !v.is_finite() {
        return if v.is_finite() {
            "0".into()
        } else {
            v.to_string()
        };
    }
    let magnitude = v.abs().log10().floor() as i32;
    let decimals = (8 - magnitude).max(0) as usize;
    let mut s = format!("{v:.decimals$}");
    if s.contains('.') {
        s = s.trim_end_matches('0').trim_end_matches('.').to_string();
    }
    if s == "-0" {
        s = "0".into();
    }
    s
}

/// CSV text of a frontier, sorted by `r1`. Rows that would collide after
/// rounding are dropped so both columns stay strictly monotone.
pub fn frontier_csv(frontier: &Frontier) -> String {
    let mut points = frontier.points.clone();
    points.sort_by(|a, b| a.r1.total_cmp(&b.r1));
    let mut rows: Vec<(String, String)> = Vec::with_capacity(points.len());
    for p in points {
        let row = (format_sig9(p.r1), format_sig9(p.r2));
        if let Some(last) = rows.last() {
            if last.0 == row.0 {
                continue;
            }
            if last.1 == row.1 {
                rows.pop();
            }
        }
        rows.push(row);
    }
    let mut out = String::from(CSV_HEADER);
    out.push('\n');
    for (a, b) in rows {
        out.push_str(&a);
        out.push(',');
        out.push_str(&b);
        out.push('\n');
    }
    out
}

#[derive(Debug, Clone, Serialize)]
pub struct Sidecar {
    pub tool: &'static str,
    pub tool_version: &'static str,
    pub command: &'static str,
    pub preset: Option<Preset>,
    pub channel: ChannelParams,
    pub variant: String,
    pub grid: String,
    #[serde(rename = "M")]
    pub directions: usize,
    pub infeasible_allocations: usize,
    pub evaluated_allocations: usize,
    pub points: usize,
}

impl Sidecar {
    pub fn new(
        command: &'static str,
        preset: Option<Preset>,
        channel: ChannelParams,
        frontier: &Frontier,
    ) -> Self {
        Sidecar {
            tool: env!("CARGO_PKG_NAME"),
            tool_version: env!("CARGO_PKG_VERSION"),
            command,
            preset,
            channel,
            variant: frontier.meta.scheme.clone(),
            grid: frontier.meta.grid.clone(),
            directions: frontier.meta.directions,
            infeasible_allocations: frontier.meta.infeasible,
            evaluated_allocations: frontier.meta.evaluated,
            points: frontier.points.len(),
        }
    }
}

pub fn sidecar_path(csv: &Path) -> PathBuf {
    csv.with_extension("json")
}

/// Writes `csv` and the sidecar next to it, or prints the CSV when no path
/// is given.
pub fn emit(out: Option<&Path>, csv: &str, sidecar: &Sidecar) -> Result<(), CliError> {
    let Some(path) = out else {
        print!("{csv}");
        return Ok(());
    };
    let io = |p: &Path, e: std::io::Error| {
        CliError::Config(format!("cannot write {}: {e}", p.display()))
    };
    fs::write(path, csv).map_err(|e| io(path, e))?;
    let side = sidecar_path(path);
    let json = serde_json::to_string_pretty(sidecar).expect("sidecar serializes");
    fs::write(&side, json + "\n").map_err(|e| io(&side, e))
}
