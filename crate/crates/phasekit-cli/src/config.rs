//! JSON experiment configuration: schema, defaults, and validation into a
//! fully typed [`RunConfig`].
//!
//! Defaults: `kappa = mass = charge = coulomb_constant = 1`,
//! `n_samples = 512`, `output = csv`, `rule = half-integer`. Unknown keys
//! are rejected.

use std::path::PathBuf;

use serde::Deserialize;
use thiserror::Error;

use phasekit::interference::{ABGeometry, TwoSlitGeometry};
use phasekit::model::{
    ModelError, ModelParams, Potential1D, QuantizationRule, Solenoid, SpacePoint,
};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum ConfigError {
    #[error("config parse error at line {line}, column {column}: {message}")]
    Parse {
        line: usize,
        column: usize,
        message: String,
    },
    #[error("invalid config: field `{field}`: {constraint}")]
    Invalid { field: String, constraint: String },
}

fn invalid(field: &str, constraint: impl Into<String>) -> ConfigError {
    ConfigError::Invalid {
        field: field.to_string(),
        constraint: constraint.into(),
    }
}

/// Maps a model-construction error onto the config field that caused it.
fn model_err(fallback_field: &str, err: ModelError) -> ConfigError {
    match &err {
        ModelError::NonPositive { name, .. } | ModelError::NonFinite { name } => {
            invalid(name, err.to_string())
        }
        _ => invalid(fallback_field, err.to_string()),
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CommandKind {
    TwoSlit,
    Ab,
    Quantize,
    Hydrogen,
    FitKappa,
}

impl CommandKind {
    pub fn name(&self) -> &'static str {
        match self {
            CommandKind::TwoSlit => "two-slit",
            CommandKind::Ab => "ab",
            CommandKind::Quantize => "quantize",
            CommandKind::Hydrogen => "hydrogen",
            CommandKind::FitKappa => "fit-kappa",
        }
    }

    fn from_name(name: &str) -> Option<Self> {
        match name {
            "two-slit" => Some(CommandKind::TwoSlit),
            "ab" => Some(CommandKind::Ab),
            "quantize" => Some(CommandKind::Quantize),
            "hydrogen" => Some(CommandKind::Hydrogen),
            "fit-kappa" => Some(CommandKind::FitKappa),
            _ => None,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum OutputFormat {
    Csv,
    Json,
}

/// Multiplicative conversion factors applied to emitted quantities, so that
/// the dimensionless internal units can be mapped to any external system.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct UnitScales {
    pub length: f64,
    pub energy: f64,
    pub action: f64,
}

impl Default for UnitScales {
    fn default() -> Self {
        UnitScales {
            length: 1.0,
            energy: 1.0,
            action: 1.0,
        }
    }
}

#[derive(Debug, Clone)]
pub enum Payload {
    TwoSlit {
        geometry: TwoSlitGeometry,
        momentum: f64,
    },
    Ab {
        geometry: ABGeometry,
        momentum: f64,
    },
    Quantize {
        potential: Potential1D,
        rule: QuantizationRule,
        levels: Vec<u32>,
    },
    Hydrogen {
        n_max: u32,
    },
    FitKappa {
        geometry: TwoSlitGeometry,
        momentum: f64,
        pattern_csv: Option<PathBuf>,
    },
}

/// A validated run: command, constants, typed payload, and output routing.
#[derive(Debug, Clone)]
pub struct RunConfig {
    pub command: CommandKind,
    pub params: ModelParams,
    pub payload: Payload,
    pub output: OutputFormat,
    pub output_path: Option<PathBuf>,
    pub units: UnitScales,
    /// The parsed config document, echoed into JSON output.
    pub echo: serde_json::Value,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawConfig {
    command: Option<String>,
    kappa: Option<f64>,
    mass: Option<f64>,
    charge: Option<f64>,
    coulomb_constant: Option<f64>,
    momentum: Option<f64>,
    geometry: Option<RawGeometry>,
    solenoid: Option<RawSolenoid>,
    potential: Option<RawPotential>,
    rule: Option<String>,
    n: Option<i64>,
    n_max: Option<i64>,
    pattern_csv: Option<String>,
    units: Option<RawUnits>,
    output: Option<String>,
    output_path: Option<String>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawGeometry {
    source: [f64; 2],
    slit_a: [f64; 2],
    slit_b: [f64; 2],
    screen_x: f64,
    screen_span: [f64; 2],
    n_samples: Option<i64>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawSolenoid {
    center: [f64; 2],
    flux: f64,
    core_radius: f64,
}

#[derive(Debug, Deserialize)]
#[serde(rename_all = "snake_case", deny_unknown_fields)]
enum RawPotential {
    Harmonic { omega: f64 },
    LinearWell { slope: f64 },
    CoulombCircular {},
    Tabulated { samples: Vec<[f64; 2]> },
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawUnits {
    length: Option<f64>,
    energy: Option<f64>,
    action: Option<f64>,
}

fn build_geometry(raw: &RawGeometry) -> Result<TwoSlitGeometry, ConfigError> {
    let n_samples = match raw.n_samples {
        None => 512,
        Some(n) if n >= 8 => n as usize,
        Some(n) => {
            return Err(invalid(
                "geometry.n_samples",
                format!("must be at least 8, got {n}"),
            ))
        }
    };
    TwoSlitGeometry::new(
        SpacePoint::new(raw.source[0], raw.source[1]),
        SpacePoint::new(raw.slit_a[0], raw.slit_a[1]),
        SpacePoint::new(raw.slit_b[0], raw.slit_b[1]),
        raw.screen_x,
        (raw.screen_span[0], raw.screen_span[1]),
        n_samples,
    )
    .map_err(|e| invalid("geometry", e.to_string()))
}

fn build_potential(raw: &RawPotential) -> Result<Potential1D, ConfigError> {
    match raw {
        RawPotential::Harmonic { omega } => {
            Potential1D::harmonic(*omega).map_err(|e| model_err("potential.harmonic", e))
        }
        RawPotential::LinearWell { slope } => {
            Potential1D::linear_well(*slope).map_err(|e| model_err("potential.linear_well", e))
        }
        RawPotential::CoulombCircular {} => Ok(Potential1D::coulomb_circular()),
        RawPotential::Tabulated { samples } => {
            let pairs: Vec<(f64, f64)> = samples.iter().map(|s| (s[0], s[1])).collect();
            Potential1D::tabulated(&pairs).map_err(|e| invalid("potential.tabulated", e.to_string()))
        }
    }
}

fn require_momentum(raw: &RawConfig) -> Result<f64, ConfigError> {
    let p = raw
        .momentum
        .ok_or_else(|| invalid("momentum", "required for this command"))?;
    if !p.is_finite() || p <= 0.0 {
        return Err(invalid("momentum", format!("must be positive, got {p}")));
    }
    Ok(p)
}

fn reject_field<T>(value: &Option<T>, field: &str, command: &str) -> Result<(), ConfigError> {
    if value.is_some() {
        return Err(invalid(
            field,
            format!("not used by the {command} command"),
        ));
    }
    Ok(())
}

fn positive_scale(field: &str, value: Option<f64>) -> Result<f64, ConfigError> {
    match value {
        None => Ok(1.0),
        Some(v) if v.is_finite() && v > 0.0 => Ok(v),
        Some(v) => Err(invalid(field, format!("must be positive, got {v}"))),
    }
}

fn nonnegative_level(field: &str, value: i64) -> Result<u32, ConfigError> {
    u32::try_from(value)
        .map_err(|_| invalid(field, format!("must be a non-negative integer, got {value}")))
}

/// Parses and validates a JSON config document.
pub fn parse_config(text: &str) -> Result<RunConfig, ConfigError> {
    let raw: RawConfig = serde_json::from_str(text).map_err(|e| ConfigError::Parse {
        line: e.line(),
        column: e.column(),
        message: e.to_string(),
    })?;
    let echo: serde_json::Value =
        serde_json::from_str(text).expect("validated by the typed parse above");

    let command_name = raw
        .command
        .as_deref()
        .ok_or_else(|| invalid("command", "required"))?;
    let command = CommandKind::from_name(command_name).ok_or_else(|| {
        invalid(
            "command",
            format!(
                "unknown command `{command_name}`; expected one of \
                 two-slit, ab, quantize, hydrogen, fit-kappa"
            ),
        )
    })?;

    let params = ModelParams::new(
        raw.kappa.unwrap_or(1.0),
        raw.mass.unwrap_or(1.0),
        raw.charge.unwrap_or(1.0),
        raw.coulomb_constant.unwrap_or(1.0),
    )
    .map_err(|e| model_err("params", e))?;

    let units = match &raw.units {
        None => UnitScales::default(),
        Some(u) => UnitScales {
            length: positive_scale("units.length", u.length)?,
            energy: positive_scale("units.energy", u.energy)?,
            action: positive_scale("units.action", u.action)?,
        },
    };

    let output = match raw.output.as_deref() {
        None | Some("csv") => OutputFormat::Csv,
        Some("json") => OutputFormat::Json,
        Some(other) => {
            return Err(invalid(
                "output",
                format!("expected `csv` or `json`, got `{other}`"),
            ))
        }
    };

    let name = command.name();
    let payload = match command {
        CommandKind::TwoSlit | CommandKind::Ab | CommandKind::FitKappa => {
            reject_field(&raw.potential, "potential", name)?;
            reject_field(&raw.rule, "rule", name)?;
            reject_field(&raw.n, "n", name)?;
            reject_field(&raw.n_max, "n_max", name)?;
            let geometry_raw = raw
                .geometry
                .as_ref()
                .ok_or_else(|| invalid("geometry", "required for this command"))?;
            let geometry = build_geometry(geometry_raw)?;
            let momentum = require_momentum(&raw)?;
            match command {
                CommandKind::TwoSlit => {
                    reject_field(&raw.solenoid, "solenoid", name)?;
                    reject_field(&raw.pattern_csv, "pattern_csv", name)?;
                    Payload::TwoSlit { geometry, momentum }
                }
                CommandKind::FitKappa => {
                    reject_field(&raw.solenoid, "solenoid", name)?;
                    Payload::FitKappa {
                        geometry,
                        momentum,
                        pattern_csv: raw.pattern_csv.as_ref().map(PathBuf::from),
                    }
                }
                CommandKind::Ab => {
                    reject_field(&raw.pattern_csv, "pattern_csv", name)?;
                    let s = raw
                        .solenoid
                        .as_ref()
                        .ok_or_else(|| invalid("solenoid", "required for the ab command"))?;
                    let solenoid = Solenoid::new(
                        SpacePoint::new(s.center[0], s.center[1]),
                        s.flux,
                        s.core_radius,
                    )
                    .map_err(|e| invalid("solenoid", e.to_string()))?;
                    let geometry = ABGeometry::new(geometry, solenoid)
                        .map_err(|e| invalid("solenoid", e.to_string()))?;
                    Payload::Ab { geometry, momentum }
                }
                _ => unreachable!(),
            }
        }
        CommandKind::Quantize => {
            reject_field(&raw.geometry, "geometry", name)?;
            reject_field(&raw.momentum, "momentum", name)?;
            reject_field(&raw.solenoid, "solenoid", name)?;
            reject_field(&raw.pattern_csv, "pattern_csv", name)?;
            let potential_raw = raw
                .potential
                .as_ref()
                .ok_or_else(|| invalid("potential", "required for the quantize command"))?;
            let potential = build_potential(potential_raw)?;
            let rule = match raw.rule.as_deref() {
                None | Some("half-integer") => QuantizationRule::HalfInteger,
                Some("integer") => QuantizationRule::Integer,
                Some(other) => {
                    return Err(invalid(
                        "rule",
                        format!("expected `integer` or `half-integer`, got `{other}`"),
                    ))
                }
            };
            let levels = match (raw.n, raw.n_max) {
                (Some(_), Some(_)) => {
                    return Err(invalid("n", "give either `n` or `n_max`, not both"))
                }
                (None, None) => return Err(invalid("n", "give one of `n` or `n_max`")),
                (Some(n), None) => vec![nonnegative_level("n", n)?],
                (None, Some(n_max)) => {
                    let n_max = nonnegative_level("n_max", n_max)?;
                    let first = match rule {
                        QuantizationRule::Integer => 1,
                        QuantizationRule::HalfInteger => 0,
                    };
                    if n_max < first {
                        return Err(invalid(
                            "n_max",
                            format!("must be at least {first} for this rule"),
                        ));
                    }
                    (first..=n_max).collect()
                }
            };
            Payload::Quantize {
                potential,
                rule,
                levels,
            }
        }
        CommandKind::Hydrogen => {
            reject_field(&raw.geometry, "geometry", name)?;
            reject_field(&raw.momentum, "momentum", name)?;
            reject_field(&raw.solenoid, "solenoid", name)?;
            reject_field(&raw.pattern_csv, "pattern_csv", name)?;
            reject_field(&raw.potential, "potential", name)?;
            reject_field(&raw.rule, "rule", name)?;
            reject_field(&raw.n, "n", name)?;
            let n_max = raw
                .n_max
                .ok_or_else(|| invalid("n_max", "required for the hydrogen command"))?;
            let n_max = nonnegative_level("n_max", n_max)?;
            if n_max < 1 {
                return Err(invalid("n_max", "must be at least 1"));
            }
            Payload::Hydrogen { n_max }
        }
    };

    Ok(RunConfig {
        command,
        params,
        payload,
        output,
        output_path: raw.output_path.as_ref().map(PathBuf::from),
        units,
        echo,
    })
}
