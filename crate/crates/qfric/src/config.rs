//! Flat `key = value` run configuration.
//!
//! Values come from an optional file and from `--set key=value`
//! overrides (later sources win). Every key is validated before any
//! computation starts; unknown keys are rejected.

use std::collections::BTreeMap;
use std::fmt;
use std::path::PathBuf;

use qfric_core::materials::{DielectricModel, ParticleModel};
use qfric_core::quadrature::{BaseRule, QuadratureSpec};
use qfric_core::quantities::UnitSystem;
use qfric_core::response::MotionState;
use qfric_core::spectrum::{
    default_omega_bounds, linear_grid, log_grid, SpectrumConfig, DEFAULT_GRID_POINTS,
};
use qfric_core::thermal::{DopplerZeroHandling, ThermalState};

/// Every accepted key, in echo order.
pub const KEYS: &[&str] = &[
    "radius_nm",
    "material",
    "sigma0",
    "lorentz_omega_p",
    "lorentz_omega_0",
    "lorentz_damping",
    "T_particle",
    "T_env",
    "z_nm",
    "V0_over_c",
    "omega_min",
    "omega_max",
    "omega_points",
    "grid",
    "rel_tol",
    "abs_tol",
    "base_rule",
    "units",
    "doppler_zero",
    "mode",
    "output",
    "format",
];

pub const DEFAULT_V0_OVER_C: f64 = 1e-3;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("config error: `{key}`: {message}")]
pub struct ConfigError {
    pub key: String,
    pub message: String,
}

impl ConfigError {
    fn new(key: &str, message: impl Into<String>) -> Self {
        Self {
            key: key.to_string(),
            message: message.into(),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Mode {
    Spectrum,
    TotalPower,
    Validate,
}

impl Mode {
    pub fn name(self) -> &'static str {
        match self {
            Mode::Spectrum => "spectrum",
            Mode::TotalPower => "total-power",
            Mode::Validate => "validate",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Format {
    Csv,
    JsonLines,
}

impl Format {
    pub fn name(self) -> &'static str {
        match self {
            Format::Csv => "csv",
            Format::JsonLines => "json-lines",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GridKind {
    Log,
    Linear,
}

/// Raw key/value pairs before validation.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct RawConfig {
    entries: BTreeMap<String, String>,
}

impl RawConfig {
    /// Parse file text: one `key = value` per line, `#` starts a comment.
    pub fn parse(text: &str) -> Result<Self, ConfigError> {
        let mut raw = Self::default();
        for (n, line) in text.lines().enumerate() {
            let line = line.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (key, value) = line.split_once('=').ok_or_else(|| {
                ConfigError::new(line, format!("line {}: expected `key = value`", n + 1))
            })?;
            let key = key.trim();
            if raw.entries.contains_key(key) {
                return Err(ConfigError::new(
                    key,
                    format!("line {}: duplicate key", n + 1),
                ));
            }
            raw.insert(key, value.trim())?;
        }
        Ok(raw)
    }

    /// Apply a `key=value` override.
    pub fn set(&mut self, assignment: &str) -> Result<(), ConfigError> {
        let (key, value) = assignment
            .split_once('=')
            .ok_or_else(|| ConfigError::new(assignment, "expected `key=value`"))?;
        self.insert(key.trim(), value.trim())
    }

    pub fn insert(&mut self, key: &str, value: &str) -> Result<(), ConfigError> {
        if !KEYS.contains(&key) {
            return Err(ConfigError::new(key, "unknown key"));
        }
        self.entries.insert(key.to_string(), value.to_string());
        Ok(())
    }

    fn get(&self, key: &str) -> Option<&str> {
        self.entries.get(key).map(String::as_str)
    }

    fn number(&self, key: &str) -> Result<Option<f64>, ConfigError> {
        self.get(key)
            .map(|v| {
                v.parse::<f64>()
                    .ok()
                    .filter(|x| x.is_finite())
                    .ok_or_else(|| ConfigError::new(key, format!("`{v}` is not a finite number")))
            })
            .transpose()
    }

    fn required(&self, key: &str, expected: &str) -> Result<f64, ConfigError> {
        self.number(key)?
            .ok_or_else(|| ConfigError::new(key, format!("missing required key ({expected})")))
    }

    fn choice<T: Copy>(
        &self,
        key: &str,
        default: T,
        options: &[(&str, T)],
    ) -> Result<T, ConfigError> {
        match self.get(key) {
            None => Ok(default),
            Some(v) => options
                .iter()
                .find(|(name, _)| *name == v)
                .map(|(_, t)| *t)
                .ok_or_else(|| {
                    let names: Vec<&str> = options.iter().map(|(n, _)| *n).collect();
                    ConfigError::new(key, format!("`{v}` is not one of {}", names.join("|")))
                }),
        }
    }
}

/// A validated run.
#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub spectrum: SpectrumConfig,
    pub mode: Mode,
    pub format: Format,
    /// `None` writes to standard output.
    pub output: Option<PathBuf>,
    /// Resolved value of every key, defaults included, for the output echo.
    pub echo: Vec<(String, String)>,
}

fn positive(key: &str, v: f64, expected: &str) -> Result<f64, ConfigError> {
    if v > 0.0 {
        Ok(v)
    } else {
        Err(ConfigError::new(
            key,
            format!("{v} out of range ({expected})"),
        ))
    }
}

fn core_err(key: &str) -> impl Fn(qfric_core::Error) -> ConfigError + '_ {
    move |e| ConfigError::new(key, e.to_string())
}

impl RunConfig {
    pub fn from_raw(raw: &RawConfig) -> Result<Self, ConfigError> {
        let mut echo: BTreeMap<&str, String> = BTreeMap::new();

        let radius_nm = positive("radius_nm", raw.required("radius_nm", "> 0 nm")?, "> 0 nm")?;
        echo.insert("radius_nm", format!("{radius_nm:e}"));

        let material = raw.choice(
            "material",
            "drude",
            &[("drude", "drude"), ("lorentzian", "lorentzian")],
        )?;
        echo.insert("material", material.to_string());
        let dielectric = if material == "drude" {
            for k in ["lorentz_omega_p", "lorentz_omega_0", "lorentz_damping"] {
                if raw.get(k).is_some() {
                    return Err(ConfigError::new(k, "only valid with material = lorentzian"));
                }
            }
            let sigma0 = raw.required("sigma0", "> 0 S/m")?;
            echo.insert("sigma0", format!("{sigma0:e}"));
            DielectricModel::drude_dc(sigma0).map_err(core_err("sigma0"))?
        } else {
            if raw.get("sigma0").is_some() {
                return Err(ConfigError::new(
                    "sigma0",
                    "only valid with material = drude",
                ));
            }
            let mut p = [0.0; 3];
            for (slot, k) in
                p.iter_mut()
                    .zip(["lorentz_omega_p", "lorentz_omega_0", "lorentz_damping"])
            {
                *slot = positive(k, raw.required(k, "> 0 rad/s")?, "> 0 rad/s")?;
                echo.insert(k, format!("{slot:e}"));
            }
            DielectricModel::lorentzian(p[0], p[1], p[2]).map_err(core_err("material"))?
        };
        let particle =
            ParticleModel::new(radius_nm * 1e-9, dielectric).map_err(core_err("radius_nm"))?;

        let t = raw.required("T_particle", ">= 0 K")?;
        let t0 = raw.required("T_env", ">= 0 K")?;
        ThermalState::new(t, 0.0).map_err(core_err("T_particle"))?;
        let thermal = ThermalState::new(t, t0).map_err(core_err("T_env"))?;
        echo.insert("T_particle", format!("{t:e}"));
        echo.insert("T_env", format!("{t0:e}"));

        let z_nm = positive("z_nm", raw.required("z_nm", "> 0 nm")?, "> 0 nm")?;
        echo.insert("z_nm", format!("{z_nm:e}"));

        let beta = raw.number("V0_over_c")?.unwrap_or(DEFAULT_V0_OVER_C);
        let motion = MotionState::from_beta(beta).map_err(core_err("V0_over_c"))?;
        echo.insert("V0_over_c", format!("{beta:e}"));

        let points = match raw.get("omega_points") {
            None => DEFAULT_GRID_POINTS,
            Some(v) => v.parse::<usize>().ok().filter(|n| *n >= 2).ok_or_else(|| {
                ConfigError::new("omega_points", format!("`{v}` is not an integer >= 2"))
            })?,
        };
        echo.insert("omega_points", points.to_string());
        let grid_kind = raw.choice(
            "grid",
            GridKind::Log,
            &[("log", GridKind::Log), ("linear", GridKind::Linear)],
        )?;
        echo.insert(
            "grid",
            if grid_kind == GridKind::Log {
                "log"
            } else {
                "linear"
            }
            .to_string(),
        );
        let (lo, hi) = match (raw.number("omega_min")?, raw.number("omega_max")?) {
            (Some(lo), Some(hi)) => (lo, hi),
            (lo, hi) => {
                let (dlo, dhi) = default_omega_bounds(&thermal).map_err(core_err("omega_min"))?;
                (lo.unwrap_or(dlo), hi.unwrap_or(dhi))
            }
        };
        positive("omega_min", lo, "> 0 rad/s")?;
        if hi <= lo {
            return Err(ConfigError::new(
                "omega_max",
                format!("{hi} out of range (> omega_min = {lo})"),
            ));
        }
        echo.insert("omega_min", format!("{lo:e}"));
        echo.insert("omega_max", format!("{hi:e}"));
        let omega_grid = match grid_kind {
            GridKind::Log => log_grid(lo, hi, points),
            GridKind::Linear => linear_grid(lo, hi, points),
        }
        .map_err(core_err("omega_points"))?;

        let defaults = QuadratureSpec::default();
        let rel_tol = raw.number("rel_tol")?.unwrap_or(defaults.rel_tol);
        let abs_tol = raw.number("abs_tol")?.unwrap_or(defaults.abs_tol);
        let base_rule = match raw.get("base_rule") {
            None => defaults.base_rule,
            Some(v) => BaseRule::from_name(v).ok_or_else(|| {
                ConfigError::new("base_rule", format!("`{v}` is not one of gk15|cc33"))
            })?,
        };
        let quad = QuadratureSpec {
            rel_tol,
            abs_tol,
            base_rule,
            ..defaults
        };
        quad.validate().map_err(core_err("rel_tol"))?;
        echo.insert("rel_tol", format!("{rel_tol:e}"));
        echo.insert("abs_tol", format!("{abs_tol:e}"));
        echo.insert("base_rule", base_rule.name().to_string());

        let units = match raw.get("units") {
            None => UnitSystem::default(),
            Some(v) => UnitSystem::from_name(v).ok_or_else(|| {
                ConfigError::new(
                    "units",
                    format!("`{v}` is not one of gaussian-prefactor|scale-free"),
                )
            })?,
        };
        echo.insert("units", units.name().to_string());
        let doppler_handling = raw.choice(
            "doppler_zero",
            DopplerZeroHandling::Combined,
            &[
                ("combined", DopplerZeroHandling::Combined),
                ("direct", DopplerZeroHandling::Direct),
            ],
        )?;
        echo.insert(
            "doppler_zero",
            if doppler_handling == DopplerZeroHandling::Combined {
                "combined"
            } else {
                "direct"
            }
            .to_string(),
        );

        let mode = raw.choice(
            "mode",
            Mode::Spectrum,
            &[
                ("spectrum", Mode::Spectrum),
                ("total-power", Mode::TotalPower),
                ("validate", Mode::Validate),
            ],
        )?;
        echo.insert("mode", mode.name().to_string());
        let format = raw.choice(
            "format",
            Format::Csv,
            &[("csv", Format::Csv), ("json-lines", Format::JsonLines)],
        )?;
        echo.insert("format", format.name().to_string());
        let output = match raw.get("output") {
            None | Some("-") | Some("") => None,
            Some(p) => Some(PathBuf::from(p)),
        };
        echo.insert(
            "output",
            output
                .as_ref()
                .map_or("-".to_string(), |p| p.display().to_string()),
        );

        let mut spectrum = SpectrumConfig::new(particle, motion, thermal, z_nm * 1e-9, omega_grid)
            .map_err(core_err("omega_points"))?;
        spectrum.quad = quad;
        spectrum.units = units;
        spectrum.doppler_handling = doppler_handling;

        let echo = KEYS
            .iter()
            .filter_map(|k| echo.get(k).map(|v| (k.to_string(), v.clone())))
            .collect();
        Ok(Self {
            spectrum,
            mode,
            format,
            output,
            echo,
        })
    }
}

impl fmt::Display for RunConfig {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (k, v) in &self.echo {
            writeln!(f, "{k} = {v}")?;
        }
        Ok(())
    }
}
