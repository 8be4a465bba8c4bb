//! Scenario configuration: flags, key-value files and presets.

use std::fmt;
use std::path::{Path, PathBuf};

use clap::{Args, ValueEnum};
use coherent_ladder::oracle::IntegratorSettings;
use coherent_ladder::{KravchukParameters, MultilevelSystem, PolynomialFamily};

use crate::CliError;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
#[value(rename_all = "snake_case")]
pub enum Scenario {
    Kravchuk,
    HarmonicResonant,
    HarmonicDetuned,
    TwoLevel,
    CustomFamily,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
#[value(rename_all = "snake_case")]
pub enum Method {
    ClosedForm,
    Spectral,
    Oracle,
    CompareAll,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Preset {
    Fig2a,
    Fig2b,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum FamilyChoice {
    Hermite,
    Charlier,
    Kravchuk,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ConfigError {
    pub field: String,
    pub reason: String,
}

impl ConfigError {
    pub fn new(field: impl Into<String>, reason: impl Into<String>) -> Self {
        Self { field: field.into(), reason: reason.into() }
    }
}

impl fmt::Display for ConfigError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "invalid `{}`: {}", self.field, self.reason)
    }
}

impl std::error::Error for ConfigError {}

/// Every setting as optional, shared by the flag parser and the config file.
#[derive(Debug, Clone, Default, Args)]
pub struct ScenarioArgs {
    /// Key-value config file (`key = value` per line, `#` comments); flags override it.
    #[arg(long)]
    pub config: Option<PathBuf>,
    /// Figure presets: fig2a is N=20, eps=0; fig2b is N=20, eps=0.5 (both t in [0, 30]).
    #[arg(long, value_enum)]
    pub preset: Option<Preset>,
    #[arg(long, value_enum)]
    pub scenario: Option<Scenario>,
    /// Number of excited levels of a Kravchuk ladder.
    #[arg(long = "N")]
    pub n: Option<usize>,
    /// Uniform detuning in units of the first Rabi frequency.
    #[arg(long, allow_hyphen_values = true)]
    pub epsilon: Option<f64>,
    #[arg(long, allow_hyphen_values = true)]
    pub t_max: Option<f64>,
    /// Number of grid intervals; the grid has t_steps + 1 points.
    #[arg(long)]
    pub t_steps: Option<usize>,
    #[arg(long, value_enum)]
    pub method: Option<Method>,
    #[arg(long)]
    pub output_dir: Option<PathBuf>,
    #[arg(long, allow_hyphen_values = true)]
    pub rel_tol: Option<f64>,
    #[arg(long, allow_hyphen_values = true)]
    pub abs_tol: Option<f64>,
    /// Levels kept for infinite ladders (default: Poisson tail bound).
    #[arg(long)]
    pub levels: Option<usize>,
    /// Generating family for `custom_family`.
    #[arg(long, value_enum)]
    pub family: Option<FamilyChoice>,
    /// Charlier parameter.
    #[arg(long, allow_hyphen_values = true)]
    pub mu: Option<f64>,
    /// Kravchuk weight parameter.
    #[arg(long, allow_hyphen_values = true)]
    pub p: Option<f64>,
}

fn parse_value<T: std::str::FromStr>(key: &str, value: &str) -> Result<T, ConfigError> {
    value
        .parse()
        .map_err(|_| ConfigError::new(key, format!("cannot parse `{value}`")))
}

fn parse_enum<T: ValueEnum>(key: &str, value: &str) -> Result<T, ConfigError> {
    T::from_str(value, false).map_err(|_| ConfigError::new(key, format!("unknown value `{value}`")))
}

impl ScenarioArgs {
    /// Parse `key = value` text. Keys are flag names without dashes; `-` and `_` are interchangeable.
    pub fn from_config_text(text: &str) -> Result<Self, ConfigError> {
        let mut out = Self::default();
        for (i, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (key, value) = line
                .split_once('=')
                .ok_or_else(|| ConfigError::new(format!("config line {}", i + 1), "expected `key = value`"))?;
            let key = key.trim().replace('-', "_");
            let value = value.trim();
            match key.as_str() {
                "preset" => out.preset = Some(parse_enum(&key, value)?),
                "scenario" => out.scenario = Some(parse_enum(&key, value)?),
                "N" | "n" => out.n = Some(parse_value("N", value)?),
                "epsilon" => out.epsilon = Some(parse_value(&key, value)?),
                "t_max" => out.t_max = Some(parse_value(&key, value)?),
                "t_steps" => out.t_steps = Some(parse_value(&key, value)?),
                "method" => out.method = Some(parse_enum(&key, value)?),
                "output_dir" => out.output_dir = Some(PathBuf::from(value)),
                "rel_tol" => out.rel_tol = Some(parse_value(&key, value)?),
                "abs_tol" => out.abs_tol = Some(parse_value(&key, value)?),
                "levels" => out.levels = Some(parse_value(&key, value)?),
                "family" => out.family = Some(parse_enum(&key, value)?),
                "mu" => out.mu = Some(parse_value(&key, value)?),
                "p" => out.p = Some(parse_value(&key, value)?),
                _ => return Err(ConfigError::new(key, "unknown config key")),
            }
        }
        Ok(out)
    }

    /// Fields set here win over `base`.
    pub fn or(self, base: Self) -> Self {
        Self {
            config: self.config.or(base.config),
            preset: self.preset.or(base.preset),
            scenario: self.scenario.or(base.scenario),
            n: self.n.or(base.n),
            epsilon: self.epsilon.or(base.epsilon),
            t_max: self.t_max.or(base.t_max),
            t_steps: self.t_steps.or(base.t_steps),
            method: self.method.or(base.method),
            output_dir: self.output_dir.or(base.output_dir),
            rel_tol: self.rel_tol.or(base.rel_tol),
            abs_tol: self.abs_tol.or(base.abs_tol),
            levels: self.levels.or(base.levels),
            family: self.family.or(base.family),
            mu: self.mu.or(base.mu),
            p: self.p.or(base.p),
        }
    }

    /// Merge with the config file (if any), then validate.
    pub fn resolve(self) -> Result<ScenarioConfig, CliError> {
        let merged = match &self.config {
            Some(path) => {
                let text = std::fs::read_to_string(path).map_err(|source| CliError::Io {
                    path: path.clone(),
                    source,
                })?;
                self.or(Self::from_config_text(&text)?)
            }
            None => self,
        };
        Ok(ScenarioConfig::from_args(merged)?)
    }
}

/// Generating family of a `custom_family` run.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum CustomFamily {
    Hermite,
    Charlier { mu: f64 },
    Kravchuk { p: f64, n: usize },
}

/// One validated simulation run.
#[derive(Debug, Clone, PartialEq)]
pub struct ScenarioConfig {
    pub scenario: Scenario,
    pub n: Option<usize>,
    pub epsilon: f64,
    pub family: Option<CustomFamily>,
    pub t_max: f64,
    pub t_steps: usize,
    pub method: Method,
    pub output_dir: PathBuf,
    pub rel_tol: f64,
    pub abs_tol: f64,
    pub levels: Option<usize>,
}

pub const DEFAULT_T_STEPS: usize = 600;

fn reject<T>(value: Option<T>, field: &str, scenario: Scenario) -> Result<(), ConfigError> {
    match value {
        Some(_) => Err(ConfigError::new(
            field,
            format!("not used by scenario {}", scenario.to_possible_value().unwrap().get_name()),
        )),
        None => Ok(()),
    }
}

fn wrap(field: &'static str) -> impl Fn(coherent_ladder::Error) -> ConfigError {
    move |e| ConfigError::new(field, e.to_string())
}

impl ScenarioConfig {
    pub fn from_args(args: ScenarioArgs) -> Result<Self, ConfigError> {
        let mut args = args;
        if let Some(preset) = args.preset {
            let eps = match preset {
                Preset::Fig2a => 0.0,
                Preset::Fig2b => 0.5,
            };
            args = args.or(ScenarioArgs {
                scenario: Some(Scenario::Kravchuk),
                n: Some(20),
                epsilon: Some(eps),
                t_max: Some(30.0),
                ..Default::default()
            });
            if args.scenario != Some(Scenario::Kravchuk) {
                return Err(ConfigError::new("preset", "presets describe the kravchuk scenario"));
            }
        }
        let scenario = args.scenario.ok_or_else(|| ConfigError::new("scenario", "missing"))?;

        let t_max = args.t_max.ok_or_else(|| ConfigError::new("t_max", "missing"))?;
        if !(t_max.is_finite() && t_max > 0.0) {
            return Err(ConfigError::new("t_max", format!("must be positive and finite, got {t_max}")));
        }
        let t_steps = args.t_steps.unwrap_or(DEFAULT_T_STEPS);
        if t_steps < 2 {
            return Err(ConfigError::new("t_steps", format!("must be at least 2, got {t_steps}")));
        }
        let defaults = IntegratorSettings::default();
        let rel_tol = args.rel_tol.unwrap_or(defaults.rel_tol);
        let abs_tol = args.abs_tol.unwrap_or(defaults.abs_tol);
        for (name, v) in [("rel_tol", rel_tol), ("abs_tol", abs_tol)] {
            if !(v.is_finite() && v > 0.0) {
                return Err(ConfigError::new(name, format!("must be positive, got {v}")));
            }
        }
        if args.levels == Some(0) || args.levels == Some(1) {
            return Err(ConfigError::new("levels", "must be at least 2"));
        }
        if let Some(eps) = args.epsilon {
            if !eps.is_finite() {
                return Err(ConfigError::new("epsilon", "must be finite"));
            }
        }

        let mut family = None;
        let epsilon = match scenario {
            Scenario::Kravchuk => {
                let n = args.n.ok_or_else(|| ConfigError::new("N", "required by scenario kravchuk"))?;
                if n == 0 {
                    return Err(ConfigError::new("N", "must be at least 1"));
                }
                args.epsilon.unwrap_or(0.0)
            }
            Scenario::HarmonicResonant => {
                reject(args.n, "N", scenario)?;
                match args.epsilon {
                    Some(e) if e != 0.0 => {
                        return Err(ConfigError::new("epsilon", "harmonic_resonant requires epsilon = 0"))
                    }
                    _ => 0.0,
                }
            }
            Scenario::HarmonicDetuned => {
                reject(args.n, "N", scenario)?;
                match args.epsilon {
                    Some(e) if e != 0.0 => e,
                    Some(_) => return Err(ConfigError::new("epsilon", "must be nonzero for harmonic_detuned")),
                    None => return Err(ConfigError::new("epsilon", "required by scenario harmonic_detuned")),
                }
            }
            Scenario::TwoLevel => {
                reject(args.n, "N", scenario)?;
                args.epsilon.unwrap_or(0.0)
            }
            Scenario::CustomFamily => {
                reject(args.epsilon, "epsilon", scenario)?;
                let choice = args
                    .family
                    .ok_or_else(|| ConfigError::new("family", "required by scenario custom_family"))?;
                let custom = match choice {
                    FamilyChoice::Hermite => CustomFamily::Hermite,
                    FamilyChoice::Charlier => {
                        let mu = args.mu.ok_or_else(|| ConfigError::new("mu", "required by family charlier"))?;
                        PolynomialFamily::charlier(mu).map_err(|e| ConfigError::new("mu", e.to_string()))?;
                        CustomFamily::Charlier { mu }
                    }
                    FamilyChoice::Kravchuk => {
                        let n = args.n.ok_or_else(|| ConfigError::new("N", "required by family kravchuk"))?;
                        let p = args.p.ok_or_else(|| ConfigError::new("p", "required by family kravchuk"))?;
                        PolynomialFamily::kravchuk(p, n).map_err(|e| ConfigError::new("p", e.to_string()))?;
                        CustomFamily::Kravchuk { p, n }
                    }
                };
                family = Some(custom);
                0.0
            }
        };
        if scenario != Scenario::CustomFamily {
            reject(args.family, "family", scenario)?;
            reject(args.mu, "mu", scenario)?;
            reject(args.p, "p", scenario)?;
        }
        Ok(Self {
            scenario,
            n: args.n,
            epsilon,
            family,
            t_max,
            t_steps,
            method: args.method.unwrap_or(Method::ClosedForm),
            output_dir: args.output_dir.unwrap_or_else(|| PathBuf::from("out")),
            rel_tol,
            abs_tol,
            levels: args.levels,
        })
    }

    pub fn system(&self) -> Result<MultilevelSystem, ConfigError> {
        match self.scenario {
            Scenario::Kravchuk => {
                let n = self.n.expect("validated");
                let params = KravchukParameters::from_detuning(n, self.epsilon).map_err(wrap("N"))?;
                Ok(MultilevelSystem::kravchuk(&params))
            }
            Scenario::HarmonicResonant | Scenario::HarmonicDetuned => {
                MultilevelSystem::harmonic(self.epsilon).map_err(wrap("epsilon"))
            }
            Scenario::TwoLevel => MultilevelSystem::two_level(self.epsilon).map_err(wrap("epsilon")),
            Scenario::CustomFamily => {
                let family = match self.family.expect("validated") {
                    CustomFamily::Hermite => PolynomialFamily::hermite(),
                    CustomFamily::Charlier { mu } => PolynomialFamily::charlier(mu).map_err(wrap("mu"))?,
                    CustomFamily::Kravchuk { p, n } => PolynomialFamily::kravchuk(p, n).map_err(wrap("p"))?,
                };
                Ok(MultilevelSystem::from_family(family))
            }
        }
    }

    pub fn settings(&self) -> IntegratorSettings {
        IntegratorSettings {
            rel_tol: self.rel_tol,
            abs_tol: self.abs_tol,
            truncation_levels: self.levels,
            ..Default::default()
        }
    }

    pub fn with_output_dir(&self, dir: &Path) -> Self {
        Self { output_dir: dir.to_path_buf(), ..self.clone() }
    }
}
