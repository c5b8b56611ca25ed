//! Scenario parameters: defaults, key/value assignment (config files and
//! flags share the same keys), validation, and the JSON sidecar format.

use serde::{Deserialize, Serialize};
use std::fmt;
use std::path::Path;

#[derive(Debug)]
pub enum ConfigError {
    UnknownKey(String),
    BadValue { key: String, message: String },
    Io(String),
}

impl fmt::Display for ConfigError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::UnknownKey(k) => write!(f, "unknown key '{k}'"),
            Self::BadValue { key, message } => write!(f, "bad value for '{key}': {message}"),
            Self::Io(m) => write!(f, "config i/o: {m}"),
        }
    }
}

impl std::error::Error for ConfigError {}

pub type ConfigResult<T> = Result<T, ConfigError>;

fn parse_f64(key: &str, value: &str) -> ConfigResult<f64> {
    value
        .trim()
        .parse::<f64>()
        .map_err(|e| ConfigError::BadValue {
            key: key.into(),
            message: e.to_string(),
        })
}

fn parse_usize(key: &str, value: &str) -> ConfigResult<usize> {
    value
        .trim()
        .parse::<usize>()
        .map_err(|e| ConfigError::BadValue {
            key: key.into(),
            message: e.to_string(),
        })
}

fn require_nonneg(key: &str, v: f64) -> ConfigResult<()> {
    if !v.is_finite() || v < 0.0 {
        return Err(ConfigError::BadValue {
            key: key.into(),
            message: format!("negative noise strength or non-finite value {v}"),
        });
    }
    Ok(())
}

fn require_pos(key: &str, v: f64) -> ConfigResult<()> {
    if !v.is_finite() || v <= 0.0 {
        return Err(ConfigError::BadValue {
            key: key.into(),
            message: format!("{v} must be positive"),
        });
    }
    Ok(())
}

fn require_steps(key: &str, v: usize) -> ConfigResult<()> {
    if v < 2 {
        return Err(ConfigError::BadValue {
            key: key.into(),
            message: "needs at least 2 grid points".into(),
        });
    }
    Ok(())
}

/// Every scenario's parameter block implements key-based assignment so that
/// config files and command-line flags go through one merge path.
pub trait ParamBlock: Sized + Default {
    fn set(&mut self, key: &str, value: &str) -> ConfigResult<()>;
    fn validate(&self) -> ConfigResult<()>;
}

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
#[serde(rename_all = "kebab-case", deny_unknown_fields)]
pub struct TeleportFidelityParams {
    /// Total dephasing rate Γ₀.
    pub gamma0: f64,
    /// Total bit-flip rate Γ₁.
    pub gamma1: f64,
    pub t_max: f64,
    pub steps: usize,
}

impl Default for TeleportFidelityParams {
    fn default() -> Self {
        Self {
            gamma0: 0.1,
            gamma1: 0.1,
            t_max: 10.0,
            steps: 101,
        }
    }
}

impl ParamBlock for TeleportFidelityParams {
    fn set(&mut self, key: &str, value: &str) -> ConfigResult<()> {
        match key {
            "gamma0" => self.gamma0 = parse_f64(key, value)?,
            "gamma1" => self.gamma1 = parse_f64(key, value)?,
            "t-max" => self.t_max = parse_f64(key, value)?,
            "steps" => self.steps = parse_usize(key, value)?,
            _ => return Err(ConfigError::UnknownKey(key.into())),
        }
        Ok(())
    }

    fn validate(&self) -> ConfigResult<()> {
        require_nonneg("gamma0", self.gamma0)?;
        require_nonneg("gamma1", self.gamma1)?;
        require_pos("t-max", self.t_max)?;
        require_steps("steps", self.steps)
    }
}

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
#[serde(rename_all = "kebab-case", deny_unknown_fields)]
pub struct BellTraceParams {
    pub eps_a: f64,
    pub eps_b: f64,
    pub j_a: f64,
    pub j_b: f64,
    /// "independent" or "collective".
    pub bath: String,
    pub gamma0a: f64,
    pub gamma0b: f64,
    pub gamma1a: f64,
    pub gamma1b: f64,
    /// Collective-bath strengths (used when bath = collective).
    pub gamma0: f64,
    pub gamma1: f64,
    pub t_max: f64,
    pub steps: usize,
}

impl Default for BellTraceParams {
    fn default() -> Self {
        Self {
            eps_a: 1.0,
            eps_b: 1.0,
            j_a: 0.5,
            j_b: 0.5,
            bath: "independent".into(),
            gamma0a: 0.1,
            gamma0b: 0.1,
            gamma1a: 0.1,
            gamma1b: 0.1,
            gamma0: 0.1,
            gamma1: 0.1,
            t_max: 10.0,
            steps: 101,
        }
    }
}

impl ParamBlock for BellTraceParams {
    fn set(&mut self, key: &str, value: &str) -> ConfigResult<()> {
        match key {
            "eps-a" => self.eps_a = parse_f64(key, value)?,
            "eps-b" => self.eps_b = parse_f64(key, value)?,
            "j-a" => self.j_a = parse_f64(key, value)?,
            "j-b" => self.j_b = parse_f64(key, value)?,
            "bath" => self.bath = value.trim().to_string(),
            "gamma0a" => self.gamma0a = parse_f64(key, value)?,
            "gamma0b" => self.gamma0b = parse_f64(key, value)?,
            "gamma1a" => self.gamma1a = parse_f64(key, value)?,
            "gamma1b" => self.gamma1b = parse_f64(key, value)?,
            "gamma0" => self.gamma0 = parse_f64(key, value)?,
            "gamma1" => self.gamma1 = parse_f64(key, value)?,
            "t-max" => self.t_max = parse_f64(key, value)?,
            "steps" => self.steps = parse_usize(key, value)?,
            _ => return Err(ConfigError::UnknownKey(key.into())),
        }
        Ok(())
    }

    fn validate(&self) -> ConfigResult<()> {
        for (k, v) in [
            ("gamma0a", self.gamma0a),
            ("gamma0b", self.gamma0b),
            ("gamma1a", self.gamma1a),
            ("gamma1b", self.gamma1b),
            ("gamma0", self.gamma0),
            ("gamma1", self.gamma1),
        ] {
            require_nonneg(k, v)?;
        }
        if self.bath != "independent" && self.bath != "collective" {
            return Err(ConfigError::BadValue {
                key: "bath".into(),
                message: format!("'{}' is not 'independent' or 'collective'", self.bath),
            });
        }
        require_pos("t-max", self.t_max)?;
        require_steps("steps", self.steps)
    }
}

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
#[serde(rename_all = "kebab-case", deny_unknown_fields)]
pub struct CollectiveBathParams {
    pub gamma0: f64,
    pub gamma1: f64,
    /// Initial Bell state, 1..=4.
    pub bell_state: usize,
    pub t_max: f64,
    pub steps: usize,
}

impl Default for CollectiveBathParams {
    fn default() -> Self {
        Self {
            gamma0: 0.1,
            gamma1: 0.1,
            bell_state: 1,
            t_max: 10.0,
            steps: 101,
        }
    }
}

impl ParamBlock for CollectiveBathParams {
    fn set(&mut self, key: &str, value: &str) -> ConfigResult<()> {
        match key {
            "gamma0" => self.gamma0 = parse_f64(key, value)?,
            "gamma1" => self.gamma1 = parse_f64(key, value)?,
            "bell-state" => self.bell_state = parse_usize(key, value)?,
            "t-max" => self.t_max = parse_f64(key, value)?,
            "steps" => self.steps = parse_usize(key, value)?,
            _ => return Err(ConfigError::UnknownKey(key.into())),
        }
        Ok(())
    }

    fn validate(&self) -> ConfigResult<()> {
        require_nonneg("gamma0", self.gamma0)?;
        require_nonneg("gamma1", self.gamma1)?;
        if !(1..=4).contains(&self.bell_state) {
            return Err(ConfigError::BadValue {
                key: "bell-state".into(),
                message: format!("{} is not a Bell label in 1..=4", self.bell_state),
            });
        }
        require_pos("t-max", self.t_max)?;
        require_steps("steps", self.steps)
    }
}

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
#[serde(rename_all = "kebab-case", deny_unknown_fields)]
pub struct CnotTimeResolvedParams {
    pub gamma0: f64,
    pub gamma1: f64,
    pub gamma2: f64,
    pub eps0: f64,
    pub j0: f64,
    pub g0: f64,
    /// Input basis state: 00, 01, 10, or 11.
    pub input: String,
    pub samples_per_segment: usize,
}

impl Default for CnotTimeResolvedParams {
    fn default() -> Self {
        Self {
            gamma0: 0.0,
            gamma1: 0.0,
            gamma2: 0.0,
            eps0: 1.0,
            j0: 1.0,
            g0: 1.0,
            input: "11".into(),
            samples_per_segment: 40,
        }
    }
}

impl CnotTimeResolvedParams {
    pub fn input_index(&self) -> ConfigResult<usize> {
        match self.input.as_str() {
            "00" => Ok(0),
            "01" => Ok(1),
            "10" => Ok(2),
            "11" => Ok(3),
            other => Err(ConfigError::BadValue {
                key: "input".into(),
                message: format!("'{other}' is not a two-qubit basis label"),
            }),
        }
    }
}

impl ParamBlock for CnotTimeResolvedParams {
    fn set(&mut self, key: &str, value: &str) -> ConfigResult<()> {
        match key {
            "gamma0" => self.gamma0 = parse_f64(key, value)?,
            "gamma1" => self.gamma1 = parse_f64(key, value)?,
            "gamma2" => self.gamma2 = parse_f64(key, value)?,
            "eps0" => self.eps0 = parse_f64(key, value)?,
            "j0" => self.j0 = parse_f64(key, value)?,
            "g0" => self.g0 = parse_f64(key, value)?,
            "input" => self.input = value.trim().to_string(),
            "samples-per-segment" => self.samples_per_segment = parse_usize(key, value)?,
            _ => return Err(ConfigError::UnknownKey(key.into())),
        }
        Ok(())
    }

    fn validate(&self) -> ConfigResult<()> {
        require_nonneg("gamma0", self.gamma0)?;
        require_nonneg("gamma1", self.gamma1)?;
        require_nonneg("gamma2", self.gamma2)?;
        require_pos("eps0", self.eps0)?;
        require_pos("j0", self.j0)?;
        require_pos("g0", self.g0)?;
        self.input_index()?;
        if self.samples_per_segment == 0 {
            return Err(ConfigError::BadValue {
                key: "samples-per-segment".into(),
                message: "must be at least 1".into(),
            });
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
#[serde(rename_all = "kebab-case", deny_unknown_fields)]
pub struct CnotNoiseSweepParams {
    /// gamma0 | gamma1 | gamma2 | all
    pub axis: String,
    pub gamma_min: f64,
    pub gamma_max: f64,
    pub points: usize,
    pub eps0: f64,
    pub j0: f64,
    pub g0: f64,
}

impl Default for CnotNoiseSweepParams {
    fn default() -> Self {
        Self {
            axis: "gamma0".into(),
            gamma_min: 1e-4,
            gamma_max: 10.0,
            points: 25,
            eps0: 1.0,
            j0: 1.0,
            g0: 1.0,
        }
    }
}

impl ParamBlock for CnotNoiseSweepParams {
    fn set(&mut self, key: &str, value: &str) -> ConfigResult<()> {
        match key {
            "axis" => self.axis = value.trim().to_string(),
            "gamma-min" => self.gamma_min = parse_f64(key, value)?,
            "gamma-max" => self.gamma_max = parse_f64(key, value)?,
            "points" => self.points = parse_usize(key, value)?,
            "eps0" => self.eps0 = parse_f64(key, value)?,
            "j0" => self.j0 = parse_f64(key, value)?,
            "g0" => self.g0 = parse_f64(key, value)?,
            _ => return Err(ConfigError::UnknownKey(key.into())),
        }
        Ok(())
    }

    fn validate(&self) -> ConfigResult<()> {
        if !["gamma0", "gamma1", "gamma2", "all"].contains(&self.axis.as_str()) {
            return Err(ConfigError::BadValue {
                key: "axis".into(),
                message: format!("'{}' is not a noise axis", self.axis),
            });
        }
        require_pos("gamma-min", self.gamma_min)?;
        require_pos("gamma-max", self.gamma_max)?;
        if self.gamma_max <= self.gamma_min {
            return Err(ConfigError::BadValue {
                key: "gamma-max".into(),
                message: "must exceed gamma-min".into(),
            });
        }
        require_steps("points", self.points)?;
        require_pos("eps0", self.eps0)?;
        require_pos("j0", self.j0)?;
        require_pos("g0", self.g0)
    }
}

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
#[serde(rename_all = "kebab-case", deny_unknown_fields)]
pub struct CnotAdditivityParams {
    /// g0g1 | g1g2 | g0g2 | all
    pub combo: String,
    pub gamma_min: f64,
    pub gamma_max: f64,
    pub points: usize,
    pub eps0: f64,
    pub j0: f64,
    pub g0: f64,
}

impl Default for CnotAdditivityParams {
    fn default() -> Self {
        Self {
            combo: "all".into(),
            gamma_min: 1e-5,
            gamma_max: 1e-2,
            points: 13,
            eps0: 1.0,
            j0: 1.0,
            g0: 1.0,
        }
    }
}

impl ParamBlock for CnotAdditivityParams {
    fn set(&mut self, key: &str, value: &str) -> ConfigResult<()> {
        match key {
            "combo" => self.combo = value.trim().to_string(),
            "gamma-min" => self.gamma_min = parse_f64(key, value)?,
            "gamma-max" => self.gamma_max = parse_f64(key, value)?,
            "points" => self.points = parse_usize(key, value)?,
            "eps0" => self.eps0 = parse_f64(key, value)?,
            "j0" => self.j0 = parse_f64(key, value)?,
            "g0" => self.g0 = parse_f64(key, value)?,
            _ => return Err(ConfigError::UnknownKey(key.into())),
        }
        Ok(())
    }

    fn validate(&self) -> ConfigResult<()> {
        if !["g0g1", "g1g2", "g0g2", "all"].contains(&self.combo.as_str()) {
            return Err(ConfigError::BadValue {
                key: "combo".into(),
                message: format!("'{}' is not a noise combination", self.combo),
            });
        }
        require_pos("gamma-min", self.gamma_min)?;
        require_pos("gamma-max", self.gamma_max)?;
        if self.gamma_max <= self.gamma_min {
            return Err(ConfigError::BadValue {
                key: "gamma-max".into(),
                message: "must exceed gamma-min".into(),
            });
        }
        require_steps("points", self.points)?;
        require_pos("eps0", self.eps0)?;
        require_pos("j0", self.j0)?;
        require_pos("g0", self.g0)
    }
}

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
#[serde(rename_all = "kebab-case", deny_unknown_fields)]
pub struct CnotG0SweepParams {
    /// constant | linear | quadratic
    pub g0_model: String,
    pub g0_min: f64,
    pub g0_max: f64,
    pub points: usize,
    pub gamma0: f64,
    pub gamma1: f64,
    /// Base coefficient c in γ₂ = c, c·(1+g₀), or c·(1+g₀²).
    pub gamma2_coeff: f64,
    pub eps0: f64,
    pub j0: f64,
}

impl Default for CnotG0SweepParams {
    fn default() -> Self {
        Self {
            g0_model: "constant".into(),
            g0_min: 0.01,
            g0_max: 16.0,
            points: 25,
            gamma0: 0.001,
            gamma1: 0.001,
            gamma2_coeff: 0.001,
            eps0: 1.0,
            j0: 1.0,
        }
    }
}

impl ParamBlock for CnotG0SweepParams {
    fn set(&mut self, key: &str, value: &str) -> ConfigResult<()> {
        match key {
            "g0-model" => self.g0_model = value.trim().to_string(),
            "g0-min" => self.g0_min = parse_f64(key, value)?,
            "g0-max" => self.g0_max = parse_f64(key, value)?,
            "points" => self.points = parse_usize(key, value)?,
            "gamma0" => self.gamma0 = parse_f64(key, value)?,
            "gamma1" => self.gamma1 = parse_f64(key, value)?,
            "gamma2-coeff" => self.gamma2_coeff = parse_f64(key, value)?,
            "eps0" => self.eps0 = parse_f64(key, value)?,
            "j0" => self.j0 = parse_f64(key, value)?,
            _ => return Err(ConfigError::UnknownKey(key.into())),
        }
        Ok(())
    }

    fn validate(&self) -> ConfigResult<()> {
        if !["constant", "linear", "quadratic"].contains(&self.g0_model.as_str()) {
            return Err(ConfigError::BadValue {
                key: "g0-model".into(),
                message: format!("'{}' is not a gamma2 model", self.g0_model),
            });
        }
        require_pos("g0-min", self.g0_min)?;
        require_pos("g0-max", self.g0_max)?;
        if self.g0_max <= self.g0_min {
            return Err(ConfigError::BadValue {
                key: "g0-max".into(),
                message: "must exceed g0-min".into(),
            });
        }
        require_steps("points", self.points)?;
        require_nonneg("gamma0", self.gamma0)?;
        require_nonneg("gamma1", self.gamma1)?;
        require_nonneg("gamma2-coeff", self.gamma2_coeff)?;
        require_pos("eps0", self.eps0)?;
        require_pos("j0", self.j0)
    }
}

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
#[serde(rename_all = "kebab-case", deny_unknown_fields)]
pub struct McValidateParams {
    /// epr | flipflop
    pub benchmark: String,
    /// Total rates Γ₀, Γ₁ of the pair benchmark.
    pub gamma0: f64,
    pub gamma1: f64,
    /// Flip-flop strength of the gate-segment benchmark.
    pub gamma2: f64,
    pub trajectories: usize,
    pub dt: f64,
    pub t_max: f64,
    /// Emit every `stride`-th sample time.
    pub stride: usize,
}

impl Default for McValidateParams {
    fn default() -> Self {
        Self {
            benchmark: "epr".into(),
            gamma0: 0.1,
            gamma1: 0.1,
            gamma2: 0.05,
            trajectories: 10_000,
            dt: 0.01,
            t_max: 5.0,
            stride: 25,
        }
    }
}

impl ParamBlock for McValidateParams {
    fn set(&mut self, key: &str, value: &str) -> ConfigResult<()> {
        match key {
            "benchmark" => self.benchmark = value.trim().to_string(),
            "gamma0" => self.gamma0 = parse_f64(key, value)?,
            "gamma1" => self.gamma1 = parse_f64(key, value)?,
            "gamma2" => self.gamma2 = parse_f64(key, value)?,
            "trajectories" => self.trajectories = parse_usize(key, value)?,
            "dt" => self.dt = parse_f64(key, value)?,
            "t-max" => self.t_max = parse_f64(key, value)?,
            "stride" => self.stride = parse_usize(key, value)?,
            _ => return Err(ConfigError::UnknownKey(key.into())),
        }
        Ok(())
    }

    fn validate(&self) -> ConfigResult<()> {
        if !["epr", "flipflop"].contains(&self.benchmark.as_str()) {
            return Err(ConfigError::BadValue {
                key: "benchmark".into(),
                message: format!("'{}' is not a benchmark", self.benchmark),
            });
        }
        require_nonneg("gamma0", self.gamma0)?;
        require_nonneg("gamma1", self.gamma1)?;
        require_nonneg("gamma2", self.gamma2)?;
        if self.trajectories < 100 {
            return Err(ConfigError::BadValue {
                key: "trajectories".into(),
                message: "needs at least 100".into(),
            });
        }
        require_pos("dt", self.dt)?;
        require_pos("t-max", self.t_max)?;
        if self.stride == 0 {
            return Err(ConfigError::BadValue {
                key: "stride".into(),
                message: "must be at least 1".into(),
            });
        }
        Ok(())
    }
}

/// Typed per-scenario parameters.
#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
#[serde(tag = "scenario", content = "params", rename_all = "kebab-case")]
pub enum ScenarioParams {
    TeleportFidelity(TeleportFidelityParams),
    BellTrace(BellTraceParams),
    CollectiveBath(CollectiveBathParams),
    CnotTimeResolved(CnotTimeResolvedParams),
    CnotNoiseSweep(CnotNoiseSweepParams),
    CnotAdditivity(CnotAdditivityParams),
    CnotG0Sweep(CnotG0SweepParams),
    McValidate(McValidateParams),
}

impl ScenarioParams {
    pub fn name(&self) -> &'static str {
        match self {
            Self::TeleportFidelity(_) => "teleport-fidelity",
            Self::BellTrace(_) => "bell-trace",
            Self::CollectiveBath(_) => "collective-bath",
            Self::CnotTimeResolved(_) => "cnot-time-resolved",
            Self::CnotNoiseSweep(_) => "cnot-noise-sweep",
            Self::CnotAdditivity(_) => "cnot-additivity",
            Self::CnotG0Sweep(_) => "cnot-g0-sweep",
            Self::McValidate(_) => "mc-validate",
        }
    }

    pub fn set(&mut self, key: &str, value: &str) -> ConfigResult<()> {
        match self {
            Self::TeleportFidelity(p) => p.set(key, value),
            Self::BellTrace(p) => p.set(key, value),
            Self::CollectiveBath(p) => p.set(key, value),
            Self::CnotTimeResolved(p) => p.set(key, value),
            Self::CnotNoiseSweep(p) => p.set(key, value),
            Self::CnotAdditivity(p) => p.set(key, value),
            Self::CnotG0Sweep(p) => p.set(key, value),
            Self::McValidate(p) => p.set(key, value),
        }
    }

    pub fn validate(&self) -> ConfigResult<()> {
        match self {
            Self::TeleportFidelity(p) => p.validate(),
            Self::BellTrace(p) => p.validate(),
            Self::CollectiveBath(p) => p.validate(),
            Self::CnotTimeResolved(p) => p.validate(),
            Self::CnotNoiseSweep(p) => p.validate(),
            Self::CnotAdditivity(p) => p.validate(),
            Self::CnotG0Sweep(p) => p.validate(),
            Self::McValidate(p) => p.validate(),
        }
    }
}

/// The JSON sidecar written next to every CSV; re-running from it
/// reproduces the CSV byte-for-byte.
#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
pub struct Sidecar {
    pub artifact: String,
    pub version: String,
    pub seed: u64,
    #[serde(flatten)]
    pub params: ScenarioParams,
}

/// Fully resolved run configuration.
#[derive(Debug, Clone)]
pub struct RunConfig {
    pub params: ScenarioParams,
    pub seed: u64,
    pub out: std::path::PathBuf,
}

/// Apply a config file onto the defaults: either a flat `key = value` file
/// or a JSON sidecar (detected by a leading '{').
pub fn apply_config_file(params: &mut ScenarioParams, seed: &mut u64, path: &Path) -> ConfigResult<()> {
    let text =
        std::fs::read_to_string(path).map_err(|e| ConfigError::Io(format!("{}: {e}", path.display())))?;
    if text.trim_start().starts_with('{') {
        let sidecar: Sidecar =
            serde_json::from_str(&text).map_err(|e| ConfigError::Io(format!("sidecar parse: {e}")))?;
        if sidecar.params.name() != params.name() {
            return Err(ConfigError::BadValue {
                key: "scenario".into(),
                message: format!(
                    "config file is for '{}' but the '{}' scenario was requested",
                    sidecar.params.name(),
                    params.name()
                ),
            });
        }
        *params = sidecar.params;
        *seed = sidecar.seed;
        return Ok(());
    }
    for (lineno, raw) in text.lines().enumerate() {
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let (key, value) = line.split_once('=').ok_or_else(|| ConfigError::Io(format!(
            "{}:{}: expected 'key = value'",
            path.display(),
            lineno + 1
        )))?;
        let key = key.trim();
        let value = value.trim();
        if key == "seed" {
            *seed = value.parse::<u64>().map_err(|e| ConfigError::BadValue {
                key: "seed".into(),
                message: e.to_string(),
            })?;
        } else {
            params.set(key, value)?;
        }
    }
    Ok(())
}
