//! JSON run configuration.
//!
//! All physical inputs are in natural units. Unknown keys are rejected.

use std::path::Path;

use serde::{Deserialize, Serialize};

use super::units::{Dimension, UnitSystem};
use super::CliError;
use crate::cycle::{CycleSpec, Protocol};
use crate::dynamics::ThermalizationMode;
use crate::qubit_model::{BathLabel, BathSpec, QubitParams, RateModel};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct QubitConfig {
    pub e0: f64,
    pub delta: f64,
    pub q: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BathConfig {
    pub beta: f64,
    pub rate: RateModel,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Spacing {
    #[default]
    Linear,
    Log,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Axis {
    pub parameter: String,
    pub min: f64,
    pub max: f64,
    pub points: usize,
    #[serde(default)]
    pub spacing: Spacing,
}

/// Grid of level splittings for the `rates` table.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Grid {
    pub min: f64,
    pub max: f64,
    pub points: usize,
    #[serde(default)]
    pub spacing: Spacing,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "snake_case")]
pub enum OutputFormat {
    #[default]
    Csv,
    Json,
}

#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OutputConfig {
    pub format: Option<OutputFormat>,
    pub path: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    pub qubit_low: QubitConfig,
    pub qubit_high: QubitConfig,
    pub cold: BathConfig,
    pub hot: BathConfig,
    pub dt: f64,
    pub protocol: Protocol,
    #[serde(default)]
    pub thermalization: ThermalizationMode,
    #[serde(default)]
    pub sweep: Vec<Axis>,
    #[serde(default)]
    pub rate_grid: Option<Grid>,
    #[serde(default)]
    pub si: Option<UnitSystem>,
    #[serde(default)]
    pub output: OutputConfig,
}

/// Parameters that sweep axes may vary.
pub const SWEEP_PARAMETERS: &[&str] = &[
    "dt",
    "frequency",
    "delta_over_qm",
    "q_high",
    "delta",
    "e0_low",
    "e0_high",
    "beta_cold",
    "beta_hot",
    "gamma_down_cold",
    "gamma_down_hot",
    "kappa_cold",
    "kappa_hot",
    "quality_cold",
    "quality_hot",
    "omega_res_cold",
    "omega_res_hot",
];

pub fn parameter_dimension(name: &str) -> Dimension {
    match name {
        "dt" => Dimension::Time,
        "frequency" | "gamma_down_cold" | "gamma_down_hot" | "omega_res_cold" | "omega_res_hot" => {
            Dimension::Rate
        }
        "e0_low" | "e0_high" => Dimension::Energy,
        "beta_cold" | "beta_hot" => Dimension::InverseEnergy,
        _ => Dimension::Dimensionless,
    }
}

impl RunConfig {
    pub fn from_json(text: &str, source: &str) -> Result<Self, CliError> {
        let config: Self = serde_json::from_str(text).map_err(|e| CliError::Parse {
            source_name: source.to_string(),
            line: e.line(),
            column: e.column(),
            message: e.to_string(),
        })?;
        config.validate()?;
        Ok(config)
    }

    pub fn load(path: &Path) -> Result<Self, CliError> {
        let text = std::fs::read_to_string(path).map_err(|e| CliError::Io {
            path: path.display().to_string(),
            message: e.to_string(),
        })?;
        Self::from_json(&text, &path.display().to_string())
    }

    fn validate(&self) -> Result<(), CliError> {
        if self.sweep.len() > 2 {
            return Err(CliError::invalid(
                "sweep",
                "at most 2 sweep axes are supported",
            ));
        }
        for (k, axis) in self.sweep.iter().enumerate() {
            let field = format!("sweep[{k}]");
            if !SWEEP_PARAMETERS.contains(&axis.parameter.as_str()) {
                return Err(CliError::invalid(
                    &format!("{field}.parameter"),
                    &format!(
                        "unknown parameter {:?}; expected one of {}",
                        axis.parameter,
                        SWEEP_PARAMETERS.join(", ")
                    ),
                ));
            }
            check_grid(&field, axis.min, axis.max, axis.points, axis.spacing)?;
        }
        if let Some(grid) = &self.rate_grid {
            check_grid("rate_grid", grid.min, grid.max, grid.points, grid.spacing)?;
            if grid.min <= 0.0 {
                return Err(CliError::invalid(
                    "rate_grid.min",
                    "level splittings must be > 0",
                ));
            }
        }
        if let Some(si) = &self.si {
            if UnitSystem::new(si.reference_kelvin).is_none() {
                return Err(CliError::invalid("si.reference_kelvin", "must be > 0"));
            }
        }
        self.build_spec()?;
        Ok(())
    }

    pub fn qubit(field: &str, q: &QubitConfig) -> Result<QubitParams, CliError> {
        QubitParams::new(q.e0, q.delta, q.q).map_err(|e| CliError::invalid(field, &e.to_string()))
    }

    pub fn bath(field: &str, label: BathLabel, b: &BathConfig) -> Result<BathSpec, CliError> {
        BathSpec::new(label, b.beta, b.rate).map_err(|e| CliError::invalid(field, &e.to_string()))
    }

    pub fn build_spec(&self) -> Result<CycleSpec, CliError> {
        CycleSpec::new(
            Self::qubit("qubit_low", &self.qubit_low)?,
            Self::qubit("qubit_high", &self.qubit_high)?,
            Self::bath("cold", BathLabel::Cold, &self.cold)?,
            Self::bath("hot", BathLabel::Hot, &self.hot)?,
            self.dt,
            self.protocol,
            self.thermalization,
        )
        .map_err(CliError::Cycle)
    }

    /// Copy of this configuration with one sweep parameter overridden.
    pub fn with_parameter(&self, name: &str, value: f64) -> Result<Self, CliError> {
        let mut c = self.clone();
        let rate_field = |b: &mut BathConfig, which: &str| -> Result<(), CliError> {
            match (&mut b.rate, which) {
                (RateModel::Direct { gamma_down }, "gamma_down") => *gamma_down = value,
                (RateModel::Resonator { kappa, .. }, "kappa") => *kappa = value,
                (RateModel::Resonator { quality, .. }, "quality") => *quality = value,
                (RateModel::Resonator { omega_res, .. }, "omega_res") => *omega_res = value,
                _ => {
                    return Err(CliError::invalid(
                        name,
                        "parameter does not apply to this bath's rate model",
                    ))
                }
            }
            Ok(())
        };
        match name {
            "dt" => c.dt = value,
            "frequency" => c.dt = 1.0 / (2.0 * value),
            "delta_over_qm" => {
                let h = &mut c.qubit_high;
                let de = 2.0 * h.e0 * h.q.hypot(h.delta);
                h.q = h.delta / value;
                h.e0 = de / (2.0 * h.q.hypot(h.delta));
            }
            "q_high" => c.qubit_high.q = value,
            "delta" => {
                c.qubit_low.delta = value;
                c.qubit_high.delta = value;
            }
            "e0_low" => c.qubit_low.e0 = value,
            "e0_high" => c.qubit_high.e0 = value,
            "beta_cold" => c.cold.beta = value,
            "beta_hot" => c.hot.beta = value,
            "gamma_down_cold" => rate_field(&mut c.cold, "gamma_down")?,
            "gamma_down_hot" => rate_field(&mut c.hot, "gamma_down")?,
            "kappa_cold" => rate_field(&mut c.cold, "kappa")?,
            "kappa_hot" => rate_field(&mut c.hot, "kappa")?,
            "quality_cold" => rate_field(&mut c.cold, "quality")?,
            "quality_hot" => rate_field(&mut c.hot, "quality")?,
            "omega_res_cold" => rate_field(&mut c.cold, "omega_res")?,
            "omega_res_hot" => rate_field(&mut c.hot, "omega_res")?,
            other => {
                return Err(CliError::invalid(
                    "sweep",
                    &format!("unknown parameter {other:?}"),
                ))
            }
        }
        Ok(c)
    }
}

fn check_grid(
    field: &str,
    min: f64,
    max: f64,
    points: usize,
    spacing: Spacing,
) -> Result<(), CliError> {
    if points == 0 {
        return Err(CliError::invalid(
            &format!("{field}.points"),
            "must be >= 1",
        ));
    }
    if !(min.is_finite() && max.is_finite()) {
        return Err(CliError::invalid(field, "bounds must be finite"));
    }
    if spacing == Spacing::Log && (min <= 0.0 || max <= 0.0) {
        return Err(CliError::invalid(
            field,
            "log spacing needs positive bounds",
        ));
    }
    Ok(())
}

/// Grid points from `min` to `max` inclusive.
pub fn grid_points(min: f64, max: f64, points: usize, spacing: Spacing) -> Vec<f64> {
    if points == 1 {
        return vec![min];
    }
    let n = (points - 1) as f64;
    (0..points)
        .map(|k| {
            if k == 0 {
                return min;
            }
            if k == points - 1 {
                return max;
            }
            let t = k as f64 / n;
            match spacing {
                Spacing::Linear => min + (max - min) * t,
                Spacing::Log => (min.ln() + (max.ln() - min.ln()) * t).exp(),
            }
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    pub(crate) const BASE: &str = r#"{
        "qubit_low": {"e0": 0.5, "delta": 1.0, "q": 0.0},
        "qubit_high": {"e0": 1.0, "delta": 1.0, "q": 0.0},
        "cold": {"beta": 1.0, "rate": {"direct": {"gamma_down": 1.0}}},
        "hot": {"beta": 1.0, "rate": {"direct": {"gamma_down": 1.0}}},
        "dt": 1e-4,
        "protocol": "classical"
    }"#;

    #[test]
    fn parses_minimal_config() {
        let c = RunConfig::from_json(BASE, "base").unwrap();
        assert_eq!(c.thermalization, ThermalizationMode::Exact);
        assert!(c.sweep.is_empty());
        let spec = c.build_spec().unwrap();
        assert_eq!(spec.de_hot(), 2.0);
    }

    #[test]
    fn unknown_keys_are_errors() {
        let text = BASE.replace("\"dt\"", "\"dtt\": 1, \"dt\"");
        match RunConfig::from_json(&text, "typo") {
            Err(CliError::Parse { line, message, .. }) => {
                assert!(line >= 1);
                assert!(message.contains("dtt"), "{message}");
            }
            other => panic!("expected parse error, got {other:?}"),
        }
        let text = BASE.replacen("\"gamma_down\": 1.0", "\"gamma_down\": 1.0, \"kapa\": 2", 1);
        assert!(matches!(
            RunConfig::from_json(&text, "typo"),
            Err(CliError::Parse { .. })
        ));
    }

    #[test]
    fn rejects_bad_axes() {
        let axis = |p: &str| {
            format!(r#", "sweep": [{{"parameter": "{p}", "min": 1, "max": 2, "points": 3}}]}}"#)
        };
        let with = |p: &str| BASE.trim_end().trim_end_matches('}').to_string() + &axis(p);
        assert!(RunConfig::from_json(&with("dt"), "ok").is_ok());
        assert!(matches!(
            RunConfig::from_json(&with("temperature"), "bad"),
            Err(CliError::Invalid { .. })
        ));
        let three = BASE.trim_end().trim_end_matches('}').to_string()
            + r#", "sweep": [
                {"parameter": "dt", "min": 1, "max": 2, "points": 2},
                {"parameter": "beta_hot", "min": 1, "max": 2, "points": 2},
                {"parameter": "beta_cold", "min": 1, "max": 2, "points": 2}]}"#;
        assert!(matches!(
            RunConfig::from_json(&three, "bad"),
            Err(CliError::Invalid { .. })
        ));
    }

    #[test]
    fn rejects_invalid_physics() {
        let text = BASE.replace(
            "\"beta\": 1.0, \"rate\": {\"direct\": {\"gamma_down\": 1.0}}},\n        \"hot\"",
            "\"beta\": -1.0, \"rate\": {\"direct\": {\"gamma_down\": 1.0}}},\n        \"hot\"",
        );
        match RunConfig::from_json(&text, "neg") {
            Err(CliError::Invalid { field, .. }) => assert_eq!(field, "cold"),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn parameter_overrides() {
        let c = RunConfig::from_json(BASE, "base").unwrap();
        assert_eq!(c.with_parameter("frequency", 50.0).unwrap().dt, 0.01);
        let c2 = c.with_parameter("delta_over_qm", 1e-3).unwrap();
        assert_eq!(c2.qubit_high.q, 1e3);
        let de = |q: &QubitConfig| 2.0 * q.e0 * q.q.hypot(q.delta);
        assert!((de(&c2.qubit_high) - de(&c.qubit_high)).abs() < 1e-15);
        assert!(c.with_parameter("kappa_cold", 0.1).is_err());
    }

    #[test]
    fn grids() {
        assert_eq!(
            grid_points(1.0, 3.0, 3, Spacing::Linear),
            vec![1.0, 2.0, 3.0]
        );
        let g = grid_points(1e-3, 1e-1, 3, Spacing::Log);
        assert!((g[1] - 1e-2).abs() < 1e-16);
        assert_eq!(g[0], 1e-3);
        assert_eq!(g[2], 1e-1);
        assert_eq!(grid_points(5.0, 9.0, 1, Spacing::Log), vec![5.0]);
    }
}
