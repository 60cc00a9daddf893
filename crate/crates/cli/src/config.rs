//! Run configuration: reference defaults, an optional flat JSON file, then
//! command-line overrides.

use std::fmt;
use std::path::Path;

use serde_json::{Map, Value};
use xepecs_core::{EmissionGeometry, ModelParams};

pub const CONFIG_ENV: &str = "XEPECS_CONFIG";

/// Error that maps to exit code 2. Always names the offending field.
#[derive(Debug, Clone, PartialEq)]
pub struct ConfigError {
    pub field: String,
    pub message: String,
}

impl ConfigError {
    pub fn new(field: impl Into<String>, message: impl Into<String>) -> Self {
        ConfigError { field: field.into(), message: message.into() }
    }
}

impl fmt::Display for ConfigError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}: {}", self.field, self.message)
    }
}

impl std::error::Error for ConfigError {}

#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Epsilon {
    Auto,
    Value(f64),
}

impl Epsilon {
    pub fn parse(field: &str, s: &str) -> Result<Epsilon, ConfigError> {
        if s.trim().eq_ignore_ascii_case("auto") {
            return Ok(Epsilon::Auto);
        }
        let v = parse_number(field, s)?;
        Ok(Epsilon::Value(v))
    }
}

/// Either a single angle or an inclusive `START:END:STEP` range, in degrees.
#[derive(Clone, Debug, PartialEq)]
pub enum AngleSpec {
    Single(f64),
    Range { start: f64, end: f64, step: f64 },
}

impl AngleSpec {
    pub fn parse(field: &str, s: &str) -> Result<AngleSpec, ConfigError> {
        if s.contains(':') {
            let (start, end, step) = parse_range(field, s)?;
            Ok(AngleSpec::Range { start, end, step })
        } else {
            Ok(AngleSpec::Single(parse_number(field, s)?))
        }
    }

    pub fn values(&self) -> Vec<f64> {
        match *self {
            AngleSpec::Single(v) => vec![v],
            AngleSpec::Range { start, end, step } => inclusive_range(start, end, step),
        }
    }
}

/// Parses `START:END:STEP` with `START <= END` and `STEP > 0`.
pub fn parse_range(field: &str, s: &str) -> Result<(f64, f64, f64), ConfigError> {
    let parts: Vec<&str> = s.split(':').collect();
    if parts.len() != 3 {
        return Err(ConfigError::new(field, format!("expected START:END:STEP, got {s:?}")));
    }
    let start = parse_number(field, parts[0])?;
    let end = parse_number(field, parts[1])?;
    let step = parse_number(field, parts[2])?;
    if step <= 0.0 {
        return Err(ConfigError::new(field, format!("step must be positive, got {step}")));
    }
    if end < start {
        return Err(ConfigError::new(field, format!("range must be ascending, got {start} to {end}")));
    }
    Ok((start, end, step))
}

/// `start + k·step` for every `k` that stays within `end` (up to rounding).
/// Values are computed by multiplication so long ranges do not drift.
pub fn inclusive_range(start: f64, end: f64, step: f64) -> Vec<f64> {
    let n = ((end - start) / step + 1e-9).floor() as usize + 1;
    (0..n).map(|k| start + k as f64 * step).collect()
}

fn parse_number(field: &str, s: &str) -> Result<f64, ConfigError> {
    match s.trim().parse::<f64>() {
        Ok(v) if v.is_finite() => Ok(v),
        _ => Err(ConfigError::new(field, format!("expected a finite number, got {s:?}"))),
    }
}

/// Everything a command needs besides its own grid options.
#[derive(Clone, Debug, PartialEq)]
pub struct RunConfig {
    pub params: ModelParams,
    pub theta_deg: f64,
    pub phi_deg: f64,
    pub beta1_deg: f64,
    pub beta2_deg: f64,
    pub epsilon: Epsilon,
}

impl Default for RunConfig {
    fn default() -> Self {
        RunConfig {
            params: ModelParams::default(),
            theta_deg: 90.0,
            phi_deg: 0.0,
            beta1_deg: 90.0,
            beta2_deg: 180.0,
            epsilon: Epsilon::Auto,
        }
    }
}

impl RunConfig {
    pub fn from_file(path: &Path) -> Result<RunConfig, ConfigError> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| ConfigError::new("config", format!("cannot read {}: {e}", path.display())))?;
        RunConfig::from_json(&text)
    }

    pub fn from_json(text: &str) -> Result<RunConfig, ConfigError> {
        let value: Value =
            serde_json::from_str(text).map_err(|e| ConfigError::new("config", format!("invalid JSON: {e}")))?;
        let Value::Object(map) = value else {
            return Err(ConfigError::new("config", "expected a JSON object"));
        };
        let mut cfg = RunConfig::default();
        cfg.apply(&map)?;
        Ok(cfg)
    }

    fn apply(&mut self, map: &Map<String, Value>) -> Result<(), ConfigError> {
        for (key, value) in map {
            if key == "epsilon" {
                self.epsilon = match value {
                    Value::String(s) => Epsilon::parse(key, s)?,
                    Value::Number(_) => Epsilon::Value(number(key, value)?),
                    _ => return Err(ConfigError::new(key, "expected a number or \"auto\"")),
                };
                continue;
            }
            let slot = match key.as_str() {
                "G" => &mut self.params.g,
                "zeta" => &mut self.params.zeta,
                "eps_s" => &mut self.params.eps_s,
                "eps_p" => &mut self.params.eps_p,
                "Omega" => &mut self.params.omega,
                "Gamma_1s" => &mut self.params.gamma_1s,
                "gamma" => &mut self.params.gamma,
                "theta_deg" => &mut self.theta_deg,
                "phi_deg" => &mut self.phi_deg,
                "beta1_deg" => &mut self.beta1_deg,
                "beta2_deg" => &mut self.beta2_deg,
                _ => return Err(ConfigError::new(key.clone(), "unknown configuration key")),
            };
            *slot = number(key, value)?;
        }
        Ok(())
    }

    /// Checks parameters and the emission geometry at `theta_deg`.
    pub fn validate(&self) -> Result<(), ConfigError> {
        if let Err(e) = self.params.validate() {
            let msg = e.to_string();
            let field = ["Gamma_1s", "gamma", "G", "zeta", "eps_s", "eps_p", "Omega"]
                .into_iter()
                .find(|f| msg.contains(&format!(": {f} ")))
                .unwrap_or("params");
            return Err(ConfigError::new(field, msg));
        }
        self.geometry_at(self.theta_deg).map(|_| ())
    }

    /// Emission geometry with this configuration's `φ`, `β1`, `β2` at angle `theta_deg`.
    pub fn geometry_at(&self, theta_deg: f64) -> Result<EmissionGeometry, ConfigError> {
        if !(0.0..=180.0).contains(&theta_deg) {
            return Err(ConfigError::new("theta_deg", format!("{theta_deg} outside [0, 180]")));
        }
        EmissionGeometry::from_degrees(theta_deg, self.phi_deg, self.beta1_deg, self.beta2_deg)
            .map_err(|e| ConfigError::new("beta1_deg/beta2_deg", e.to_string()))
    }
}

fn number(key: &str, value: &Value) -> Result<f64, ConfigError> {
    value
        .as_f64()
        .filter(|v| v.is_finite())
        .ok_or_else(|| ConfigError::new(key, format!("expected a finite number, got {value}")))
}
