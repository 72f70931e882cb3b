//! Flat `key = value` run configuration.
//!
//! ```text
//! # two qubits on resonance
//! n_qubits = 2
//! epsilon  = 0.0
//! periods  = 150
//! ```

use std::collections::BTreeMap;
use std::path::Path;

use thiserror::Error;

use crate::lindblad::DEFAULT_STEPS_PER_PERIOD;
use crate::metrics::LifetimeParams;
use crate::model::{DriveMode, ModelConfig, ModelError, Representation};
use crate::semiclassical::{alpha_from_eta, eta_from_alpha, SemiclassicalParams};

use super::SweepAxis;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum ConfigError {
    #[error("cannot read {path}: {reason}")]
    Io { path: String, reason: String },
    #[error("line {line}: expected `key = value`, found `{text}`")]
    Syntax { line: usize, text: String },
    #[error("line {line}: unknown key `{key}`")]
    UnknownKey { line: usize, key: String },
    #[error("line {line}: key `{key}` given twice")]
    DuplicateKey { line: usize, key: String },
    #[error("missing required key `{key}`")]
    MissingKey { key: &'static str },
    #[error("line {line}: bad value for `{key}`: {reason}")]
    BadValue { line: usize, key: String, reason: String },
    #[error("invalid `{key}`{}: {reason}", line.map(|l| format!(" (line {l})")).unwrap_or_default())]
    Invalid { key: String, line: Option<usize>, reason: String },
}

pub const KNOWN_KEYS: &[&str] = &[
    "n_qubits",
    "field_levels",
    "lambda0",
    "kappa",
    "epsilon",
    "eta",
    "alpha",
    "omega_t",
    "representation",
    "drive",
    "periods",
    "dt",
    "lifetime_ti",
    "lifetime_delta",
    "threshold_fraction",
    "sweep_axis",
    "sweep_values",
    "exclusion",
    "use_corrected_p",
    "convergence_check",
];

/// Key/value pairs with the line each came from.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct RawConfig {
    entries: BTreeMap<String, (usize, String)>,
}

impl RawConfig {
    pub fn parse(text: &str) -> Result<Self, ConfigError> {
        let mut entries = BTreeMap::new();
        for (idx, raw) in text.lines().enumerate() {
            let line = idx + 1;
            let content = raw.split('#').next().unwrap_or("").trim();
            if content.is_empty() {
                continue;
            }
            let (key, value) = content
                .split_once('=')
                .ok_or_else(|| ConfigError::Syntax { line, text: content.to_string() })?;
            let (key, value) = (key.trim(), value.trim());
            if key.is_empty() {
                return Err(ConfigError::Syntax { line, text: content.to_string() });
            }
            if !KNOWN_KEYS.contains(&key) {
                return Err(ConfigError::UnknownKey { line, key: key.to_string() });
            }
            if entries.insert(key.to_string(), (line, value.to_string())).is_some() {
                return Err(ConfigError::DuplicateKey { line, key: key.to_string() });
            }
        }
        Ok(Self { entries })
    }

    pub fn read(path: &Path) -> Result<Self, ConfigError> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| ConfigError::Io { path: path.display().to_string(), reason: e.to_string() })?;
        Self::parse(&text)
    }

    pub fn line_of(&self, key: &str) -> Option<usize> {
        self.entries.get(key).map(|(l, _)| *l)
    }

    fn get<T: std::str::FromStr>(&self, key: &str) -> Result<Option<T>, ConfigError>
    where
        T::Err: std::fmt::Display,
    {
        match self.entries.get(key) {
            None => Ok(None),
            Some((line, v)) => v
                .parse::<T>()
                .map(Some)
                .map_err(|e| ConfigError::BadValue { line: *line, key: key.to_string(), reason: e.to_string() }),
        }
    }

    fn real(&self, key: &str) -> Result<Option<f64>, ConfigError> {
        let v = self.get::<f64>(key)?;
        if let Some(x) = v {
            if !x.is_finite() {
                let line = self.line_of(key).unwrap_or(0);
                return Err(ConfigError::BadValue { line, key: key.into(), reason: "not finite".into() });
            }
        }
        Ok(v)
    }

    fn reals(&self, key: &str) -> Result<Option<Vec<f64>>, ConfigError> {
        let Some((line, v)) = self.entries.get(key) else { return Ok(None) };
        v.split(',')
            .map(|s| {
                let s = s.trim();
                s.parse::<f64>().ok().filter(|x| x.is_finite()).ok_or_else(|| ConfigError::BadValue {
                    line: *line,
                    key: key.into(),
                    reason: format!("`{s}` is not a finite number"),
                })
            })
            .collect::<Result<Vec<_>, _>>()
            .map(Some)
    }
}

/// A resolved configuration shared by all run kinds.
#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub n_qubits: Option<usize>,
    pub field_levels: usize,
    pub lambda0: f64,
    pub kappa: f64,
    pub epsilon: f64,
    pub eta: Option<f64>,
    pub alpha: Option<f64>,
    pub omega_t: f64,
    pub representation: Representation,
    pub drive: DriveMode,
    pub periods: u64,
    /// Step size; `T/500` when absent.
    pub dt: Option<f64>,
    /// Lifetime window start, in periods.
    pub lifetime_ti: u64,
    /// Lifetime window length, in periods.
    pub lifetime_delta: u64,
    pub threshold_fraction: f64,
    pub sweep_axis: Option<SweepAxis>,
    pub sweep_values: Option<Vec<f64>>,
    pub exclusion: Option<f64>,
    pub use_corrected_p: bool,
    pub convergence_check: bool,
    lines: BTreeMap<String, usize>,
}

impl Default for RunConfig {
    fn default() -> Self {
        Self {
            n_qubits: None,
            field_levels: 16,
            lambda0: 1.0,
            kappa: 0.05,
            epsilon: 0.0,
            eta: None,
            alpha: None,
            omega_t: 1.0,
            representation: Representation::SymmetricSector,
            drive: DriveMode::Switched,
            periods: 150,
            dt: None,
            lifetime_ti: 20,
            lifetime_delta: 80,
            threshold_fraction: 0.1,
            sweep_axis: None,
            sweep_values: None,
            exclusion: None,
            use_corrected_p: true,
            convergence_check: false,
            lines: BTreeMap::new(),
        }
    }
}

fn parse_bool(raw: &RawConfig, key: &str) -> Result<Option<bool>, ConfigError> {
    raw.get::<bool>(key)
}

impl RunConfig {
    pub fn from_raw(raw: &RawConfig) -> Result<Self, ConfigError> {
        let d = Self::default();
        let cfg = Self {
            n_qubits: raw.get("n_qubits")?,
            field_levels: raw.get("field_levels")?.unwrap_or(d.field_levels),
            lambda0: raw.real("lambda0")?.unwrap_or(d.lambda0),
            kappa: raw.real("kappa")?.unwrap_or(d.kappa),
            epsilon: raw.real("epsilon")?.unwrap_or(d.epsilon),
            eta: raw.real("eta")?,
            alpha: raw.real("alpha")?,
            omega_t: raw.real("omega_t")?.unwrap_or(d.omega_t),
            representation: raw.get("representation")?.unwrap_or(d.representation),
            drive: raw.get("drive")?.unwrap_or(d.drive),
            periods: raw.get("periods")?.unwrap_or(d.periods),
            dt: raw.real("dt")?,
            lifetime_ti: raw.get("lifetime_ti")?.unwrap_or(d.lifetime_ti),
            lifetime_delta: raw.get("lifetime_delta")?.unwrap_or(d.lifetime_delta),
            threshold_fraction: raw.real("threshold_fraction")?.unwrap_or(d.threshold_fraction),
            sweep_axis: raw.get("sweep_axis")?,
            sweep_values: raw.reals("sweep_values")?,
            exclusion: raw.real("exclusion")?,
            use_corrected_p: parse_bool(raw, "use_corrected_p")?.unwrap_or(d.use_corrected_p),
            convergence_check: parse_bool(raw, "convergence_check")?.unwrap_or(d.convergence_check),
            lines: raw.entries.iter().map(|(k, (l, _))| (k.clone(), *l)).collect(),
        };
        cfg.check()?;
        Ok(cfg)
    }

    pub fn parse(text: &str) -> Result<Self, ConfigError> {
        Self::from_raw(&RawConfig::parse(text)?)
    }

    pub fn read(path: &Path) -> Result<Self, ConfigError> {
        Self::from_raw(&RawConfig::read(path)?)
    }

    fn invalid(&self, key: &str, reason: impl Into<String>) -> ConfigError {
        ConfigError::Invalid { key: key.to_string(), line: self.lines.get(key).copied(), reason: reason.into() }
    }

    fn check(&self) -> Result<(), ConfigError> {
        if self.periods == 0 {
            return Err(self.invalid("periods", "must be at least 1"));
        }
        if self.lifetime_delta == 0 {
            return Err(self.invalid("lifetime_delta", "must be at least 1"));
        }
        if !(self.threshold_fraction > 0.0 && self.threshold_fraction < 1.0) {
            return Err(self.invalid("threshold_fraction", "must lie in (0, 1)"));
        }
        if let Some(dt) = self.dt {
            if !(dt > 0.0) {
                return Err(self.invalid("dt", "must be positive"));
            }
        }
        if let (Some(eta), Some(alpha), Some(n)) = (self.eta, self.alpha, self.n_qubits) {
            if n > 0 && (eta_from_alpha(alpha, n) - eta).abs() > 1e-12 * eta.abs().max(1e-300) {
                return Err(self.invalid("alpha", "conflicts with eta = -12 alpha / N"));
            }
        }
        if let Some(v) = &self.sweep_values {
            if v.is_empty() {
                return Err(self.invalid("sweep_values", "empty"));
            }
        }
        if let Some(x) = self.exclusion {
            if x < 0.0 {
                return Err(self.invalid("exclusion", "must be >= 0"));
            }
        }
        Ok(())
    }

    pub fn period(&self) -> f64 {
        2.0 * std::f64::consts::PI / self.omega_t
    }

    pub fn resolved_dt(&self) -> f64 {
        self.dt.unwrap_or(self.period() / DEFAULT_STEPS_PER_PERIOD as f64)
    }

    pub fn lifetime_params(&self) -> LifetimeParams {
        LifetimeParams::from_periods(self.lifetime_ti, self.lifetime_delta, self.period())
    }

    fn map_model_error(&self, e: ModelError) -> ConfigError {
        match e {
            ModelError::InvalidParameter { name, reason } => self.invalid(name, reason),
            other => self.invalid("model", other.to_string()),
        }
    }

    fn resolved_eta(&self, n: usize) -> Result<f64, ConfigError> {
        match (self.eta, self.alpha) {
            (Some(eta), _) => Ok(eta),
            (None, Some(alpha)) if n > 0 => Ok(eta_from_alpha(alpha, n)),
            (None, Some(alpha)) if alpha != 0.0 => Err(self.invalid("alpha", "needs n_qubits >= 1 to map onto eta")),
            _ => Ok(0.0),
        }
    }

    /// The quantum model; `n_qubits` is required.
    pub fn model_config(&self) -> Result<ModelConfig, ConfigError> {
        let n = self.n_qubits.ok_or(ConfigError::MissingKey { key: "n_qubits" })?;
        let cfg = ModelConfig::new(n)
            .with_field_levels(self.field_levels)
            .with_lambda0(self.lambda0)
            .with_kappa(self.kappa)
            .with_epsilon(self.epsilon)
            .with_eta(self.resolved_eta(n)?)
            .with_omega_t(self.omega_t)
            .with_representation(self.representation)
            .with_drive(self.drive);
        cfg.validate().map_err(|e| self.map_model_error(e))?;
        Ok(cfg)
    }

    /// Mean-field parameters. `alpha` is taken directly, or from `eta` when
    /// `n_qubits` is given, and defaults to 0.
    pub fn semiclassical_params(&self) -> Result<SemiclassicalParams, ConfigError> {
        let alpha = match (self.alpha, self.eta, self.n_qubits) {
            (Some(a), _, _) => a,
            (None, Some(eta), Some(n)) if n > 0 => alpha_from_eta(eta, n),
            (None, Some(eta), _) if eta != 0.0 => return Err(self.invalid("eta", "needs n_qubits >= 1 to map onto alpha")),
            _ => 0.0,
        };
        let p = SemiclassicalParams {
            omega: 0.0,
            omega0: 0.0,
            lambda0: self.lambda0,
            kappa: self.kappa,
            alpha,
            omega_t: self.omega_t,
            drive: self.drive,
        }
        .with_detuning(self.epsilon, self.omega_t);
        p.validate().map_err(|e| match e {
            crate::semiclassical::SemiclassicalError::InvalidParameter { name, reason } => self.invalid(name, reason),
            other => self.invalid("model", other.to_string()),
        })?;
        Ok(p)
    }

    /// Grid for the sweep axis: `sweep_values`, or 11 uniform points over the
    /// default range of the axis.
    pub fn sweep_grid(&self) -> Result<(SweepAxis, Vec<f64>), ConfigError> {
        let axis = self.sweep_axis.ok_or(ConfigError::MissingKey { key: "sweep_axis" })?;
        let values = match &self.sweep_values {
            Some(v) => v.clone(),
            None => {
                let n = self.n_qubits.unwrap_or(1).max(1) as f64;
                let end = match axis {
                    SweepAxis::Epsilon => 0.1,
                    SweepAxis::Eta => -0.01,
                    SweepAxis::Alpha => 0.01 * n / 12.0,
                };
                (0..=10).map(|k| end * k as f64 / 10.0).collect()
            }
        };
        for &v in &values {
            let ok = match axis {
                SweepAxis::Epsilon => v.abs() < 1.0,
                SweepAxis::Eta => v <= 0.0,
                SweepAxis::Alpha => v >= 0.0,
            };
            if !ok {
                return Err(self.invalid("sweep_values", format!("{v} is outside the range of axis {axis}")));
            }
        }
        Ok((axis, values))
    }

    /// Near-resonance half-width dropped from the headline correlation:
    /// `exclusion`, or 0.01 on the detuning axis and 0 otherwise.
    pub fn resolved_exclusion(&self, axis: SweepAxis) -> f64 {
        self.exclusion.unwrap_or(match axis {
            SweepAxis::Epsilon => 0.01,
            _ => 0.0,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_comments_and_defaults() {
        let cfg = RunConfig::parse("# header\nn_qubits = 2   # two\n\nepsilon=0.04\nrepresentation = full\n").unwrap();
        assert_eq!(cfg.n_qubits, Some(2));
        assert_eq!(cfg.epsilon, 0.04);
        assert_eq!(cfg.representation, Representation::FullTensor);
        assert_eq!(cfg.field_levels, 16);
        let m = cfg.model_config().unwrap();
        assert!((m.omega() - 0.96).abs() < 1e-15);
    }

    #[test]
    fn missing_n_qubits_is_named() {
        let cfg = RunConfig::parse("epsilon = 0.0\n").unwrap();
        let err = cfg.model_config().unwrap_err();
        assert_eq!(err, ConfigError::MissingKey { key: "n_qubits" });
        assert!(err.to_string().contains("n_qubits"));
    }

    #[test]
    fn diagnostics_carry_lines() {
        assert_eq!(RawConfig::parse("n_qubits = 2\nbogus = 1\n"), Err(ConfigError::UnknownKey { line: 2, key: "bogus".into() }));
        assert!(matches!(RawConfig::parse("n_qubits 2"), Err(ConfigError::Syntax { line: 1, .. })));
        assert!(matches!(RawConfig::parse("kappa=1\nkappa=2"), Err(ConfigError::DuplicateKey { line: 2, .. })));
        let e = RunConfig::parse("\n\nkappa = abc").unwrap_err();
        assert!(matches!(e, ConfigError::BadValue { line: 3, ref key, .. } if key == "kappa"));
        let e = RunConfig::parse("n_qubits = 2\neta = 0.5\n").unwrap().model_config().unwrap_err();
        assert!(matches!(e, ConfigError::Invalid { line: Some(2), ref key, .. } if key == "eta"));
    }

    #[test]
    fn alpha_and_eta_are_linked() {
        let cfg = RunConfig::parse("n_qubits = 4\nalpha = 0.001\n").unwrap();
        assert!((cfg.model_config().unwrap().eta + 0.003).abs() < 1e-15);
        let cfg = RunConfig::parse("n_qubits = 4\neta = -0.003\n").unwrap();
        assert!((cfg.semiclassical_params().unwrap().alpha - 0.001).abs() < 1e-15);
        assert!(RunConfig::parse("n_qubits = 4\neta = -0.003\nalpha = 0.5\n").is_err());
    }

    #[test]
    fn default_grids() {
        let cfg = RunConfig::parse("n_qubits = 2\nsweep_axis = epsilon\n").unwrap();
        let (axis, grid) = cfg.sweep_grid().unwrap();
        assert_eq!(axis, SweepAxis::Epsilon);
        assert_eq!(grid.len(), 11);
        assert!((grid[10] - 0.1).abs() < 1e-15);
        assert_eq!(cfg.resolved_exclusion(axis), 0.01);
        let cfg = RunConfig::parse("n_qubits = 2\nsweep_axis = eta\nsweep_values = 0, -0.001, 0.002\n").unwrap();
        assert!(cfg.sweep_grid().is_err());
    }
}
