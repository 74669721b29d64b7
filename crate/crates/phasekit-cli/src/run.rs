//! Executes a validated [`RunConfig`] and renders the artifact.
//!
//! CSV numbers are written with 17 significant digits so every emitted value
//! parses back to the identical `f64`; JSON uses the shortest round-trip
//! representation. Both renderings are pure functions of the config, so
//! repeated runs are byte-identical.

use std::path::Path;

use serde_json::json;
use thiserror::Error;

use phasekit::interference::{self, PatternMeta, TwoSlitGeometry};
use phasekit::model::{FringePattern, ModelParams, QuantizationProblem};
use phasekit::quantization::{circular_orbit_radius, hydrogen_circular_levels, quantize_level};

use crate::config::{OutputFormat, Payload, RunConfig, UnitScales};

#[derive(Debug, Error)]
pub enum RunError {
    #[error("{0}")]
    Engine(String),
    #[error("failed to read {path}: {message}")]
    ReadInput { path: String, message: String },
    #[error("failed to write {path}: {message}")]
    WriteOutput { path: String, message: String },
    #[error("malformed pattern csv: {0}")]
    MalformedCsv(String),
}

fn engine(err: impl std::fmt::Display) -> RunError {
    RunError::Engine(err.to_string())
}

/// 17 significant digits: enough to reproduce any `f64` exactly on re-parse.
fn fmt_f64(v: f64) -> String {
    format!("{v:.16e}")
}

/// Runs the configured command and returns the rendered artifact.
pub fn execute(config: &RunConfig) -> Result<String, RunError> {
    match &config.payload {
        Payload::TwoSlit { geometry, momentum } => {
            let patt = interference::pattern(geometry, &config.params, *momentum).map_err(engine)?;
            Ok(render_pattern(config, &patt))
        }
        Payload::Ab { geometry, momentum } => {
            let patt =
                interference::ab_pattern(geometry, &config.params, *momentum).map_err(engine)?;
            Ok(render_pattern(config, &patt))
        }
        Payload::Quantize {
            potential,
            rule,
            levels,
        } => {
            let mut rows = Vec::with_capacity(levels.len());
            for &n in levels {
                let problem = QuantizationProblem {
                    potential: potential.clone(),
                    rule: *rule,
                    level: n,
                };
                let level = quantize_level(&problem, &config.params).map_err(engine)?;
                rows.push((level.n, level.energy, level.action));
            }
            Ok(render_levels(config, "action", &rows, |v, u| v * u.action))
        }
        Payload::Hydrogen { n_max } => {
            let levels = hydrogen_circular_levels(&config.params, *n_max).map_err(engine)?;
            let rows: Vec<(u32, f64, f64)> = levels
                .iter()
                .map(|l| (l.n, l.energy, circular_orbit_radius(&config.params, l.n)))
                .collect();
            Ok(render_levels(config, "radius", &rows, |v, u| v * u.length))
        }
        Payload::FitKappa {
            geometry,
            momentum,
            pattern_csv,
        } => {
            let patt = match pattern_csv {
                Some(path) => load_pattern(path, geometry, &config.params, *momentum)?,
                None => {
                    interference::pattern(geometry, &config.params, *momentum).map_err(engine)?
                }
            };
            let fit = interference::fit_kappa(&patt, *momentum, geometry).map_err(engine)?;
            Ok(render_fit(config, fit))
        }
    }
}

/// Writes the artifact to `out`, or to standard output when `out` is empty.
pub fn emit(artifact: &str, out: Option<&Path>) -> Result<(), RunError> {
    match out {
        Some(path) => std::fs::write(path, artifact).map_err(|e| RunError::WriteOutput {
            path: path.display().to_string(),
            message: e.to_string(),
        }),
        None => {
            print!("{artifact}");
            Ok(())
        }
    }
}

fn render_pattern(config: &RunConfig, patt: &FringePattern) -> String {
    let scale = config.units.length;
    match config.output {
        OutputFormat::Csv => {
            let mut out = String::from("screen_coord,intensity\n");
            for (&x, &w) in patt.screen_coords().iter().zip(patt.intensities()) {
                out.push_str(&fmt_f64(x * scale));
                out.push(',');
                out.push_str(&fmt_f64(w));
                out.push('\n');
            }
            out
        }
        OutputFormat::Json => {
            let results: Vec<serde_json::Value> = patt
                .screen_coords()
                .iter()
                .zip(patt.intensities())
                .map(|(&x, &w)| json!({"screen_coord": x * scale, "intensity": w}))
                .collect();
            render_json(config, json!(results))
        }
    }
}

fn render_levels(
    config: &RunConfig,
    third_column: &str,
    rows: &[(u32, f64, f64)],
    scale_third: fn(f64, &UnitScales) -> f64,
) -> String {
    let units = &config.units;
    match config.output {
        OutputFormat::Csv => {
            let mut out = format!("n,energy,{third_column}\n");
            for &(n, energy, third) in rows {
                out.push_str(&format!(
                    "{n},{},{}\n",
                    fmt_f64(energy * units.energy),
                    fmt_f64(scale_third(third, units))
                ));
            }
            out
        }
        OutputFormat::Json => {
            let results: Vec<serde_json::Value> = rows
                .iter()
                .map(|&(n, energy, third)| {
                    json!({
                        "n": n,
                        "energy": energy * units.energy,
                        third_column: scale_third(third, units),
                    })
                })
                .collect();
            render_json(config, json!(results))
        }
    }
}

fn render_fit(config: &RunConfig, fit: interference::KappaFit) -> String {
    let kappa_hat = fit.kappa_hat * config.units.action;
    let spacing = fit.fringe_spacing * config.units.length;
    match config.output {
        OutputFormat::Csv => {
            format!(
                "kappa_hat,fringe_spacing,peaks_used\n{},{},{}\n",
                fmt_f64(kappa_hat),
                fmt_f64(spacing),
                fit.peaks_used
            )
        }
        OutputFormat::Json => render_json(
            config,
            json!({
                "kappa_hat": kappa_hat,
                "fringe_spacing": spacing,
                "peaks_used": fit.peaks_used,
            }),
        ),
    }
}

fn render_json(config: &RunConfig, results: serde_json::Value) -> String {
    let doc = json!({"config": config.echo, "results": results});
    let mut text = serde_json::to_string_pretty(&doc).expect("finite numbers serialize");
    text.push('\n');
    text
}

/// Reads a `screen_coord,intensity` CSV back into a pattern, attaching the
/// declared geometry as metadata.
fn load_pattern(
    path: &Path,
    geometry: &TwoSlitGeometry,
    params: &ModelParams,
    momentum: f64,
) -> Result<FringePattern, RunError> {
    let text = std::fs::read_to_string(path).map_err(|e| RunError::ReadInput {
        path: path.display().to_string(),
        message: e.to_string(),
    })?;
    let mut lines = text.lines();
    match lines.next() {
        Some("screen_coord,intensity") => {}
        Some(other) => {
            return Err(RunError::MalformedCsv(format!(
                "expected header `screen_coord,intensity`, got `{other}`"
            )))
        }
        None => return Err(RunError::MalformedCsv("empty file".to_string())),
    }
    let mut coords = Vec::new();
    let mut intensities = Vec::new();
    for (idx, line) in lines.enumerate() {
        if line.is_empty() {
            continue;
        }
        let (x, w) = line
            .split_once(',')
            .ok_or_else(|| RunError::MalformedCsv(format!("row {}: missing comma", idx + 1)))?;
        let parse = |s: &str| {
            s.trim()
                .parse::<f64>()
                .map_err(|e| RunError::MalformedCsv(format!("row {}: {e}", idx + 1)))
        };
        coords.push(parse(x)?);
        intensities.push(parse(w)?);
    }
    let meta = PatternMeta {
        geometry: *geometry,
        params: *params,
        momentum,
        flux: 0.0,
    };
    FringePattern::new(coords, intensities, meta).map_err(engine)
}
