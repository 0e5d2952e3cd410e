//! Run configuration: a flat `key = value` file overlaid by command-line flags.
//!
//! Blank lines and lines starting with `#` are ignored. Unknown or repeated
//! keys are errors. [`RunConfig::emit`] writes every set key in a fixed order,
//! and parsing that text gives back the same configuration.

use std::f64::consts::PI;
use std::fmt;
use std::path::PathBuf;
use std::str::FromStr;

use clap::ValueEnum;
use lzwalk::pathsum::MAX_PATH_STEPS;
use lzwalk::walk::MAX_STEPS;
use lzwalk::ModelParams;

use crate::error::CliError;
use crate::output::{format_f64, Value};

/// Largest series order accepted.
pub const MAX_ORDER: usize = 1 << 14;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Mode {
    Evolve,
    Series,
    Edge,
    Sweep,
    Verify,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, ValueEnum)]
pub enum Format {
    #[default]
    Csv,
    Json,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Spacing {
    #[default]
    Linear,
    Log,
}

/// How the field strength is specified.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Drive {
    Field(f64),
    Probability(f64),
}

macro_rules! text_enum {
    ($ty:ident { $($variant:ident => $name:literal),+ $(,)? }) => {
        impl $ty {
            pub fn as_str(self) -> &'static str {
                match self { $($ty::$variant => $name),+ }
            }
        }

        impl FromStr for $ty {
            type Err = String;
            fn from_str(s: &str) -> Result<Self, String> {
                match s {
                    $($name => Ok($ty::$variant),)+
                    _ => Err(format!("expected one of: {}", [$($name),+].join(", "))),
                }
            }
        }

        impl fmt::Display for $ty {
            fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
                f.write_str(self.as_str())
            }
        }
    };
}

text_enum!(Mode { Evolve => "evolve", Series => "series", Edge => "edge", Sweep => "sweep", Verify => "verify" });
text_enum!(Format { Csv => "csv", Json => "json" });
text_enum!(Spacing { Linear => "linear", Log => "log" });

#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub mode: Mode,
    pub drive: Option<Drive>,
    pub fbar: f64,
    pub beta: f64,
    pub gamma: f64,
    pub gamma_tilde: f64,
    pub length: f64,
    pub j0: f64,
    pub e0: f64,
    /// Walk steps for `evolve` and the unitarity check of `verify`.
    pub steps: usize,
    /// Highest power of `z` kept by `series` and by the series checks of `verify`.
    pub order: usize,
    /// Largest site reported by `series` and checked by `verify`.
    pub sites: usize,
    /// Explicit `evolve` snapshot times; `None` selects the default quarters.
    pub snapshots: Option<Vec<usize>>,
    pub fmin: f64,
    pub fmax: f64,
    pub points: usize,
    pub spacing: Spacing,
    /// Longest path enumerated by `verify`.
    pub tau_max: usize,
    /// Norm drift accepted by the unitarity check of `verify`.
    pub unitarity_tol: f64,
    pub out: Option<PathBuf>,
    pub format: Format,
}

/// Every setting, unset by default. Files and flags each produce one; flags
/// take precedence when the two are merged.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct Settings {
    pub mode: Option<Mode>,
    pub field: Option<f64>,
    pub p: Option<f64>,
    pub fbar: Option<f64>,
    pub beta: Option<f64>,
    pub gamma: Option<f64>,
    pub gamma_tilde: Option<f64>,
    pub length: Option<f64>,
    pub j0: Option<f64>,
    pub e0: Option<f64>,
    pub steps: Option<usize>,
    pub order: Option<usize>,
    pub sites: Option<usize>,
    pub snapshots: Option<Vec<usize>>,
    pub fmin: Option<f64>,
    pub fmax: Option<f64>,
    pub points: Option<usize>,
    pub spacing: Option<Spacing>,
    pub tau_max: Option<usize>,
    pub unitarity_tol: Option<f64>,
    pub out: Option<PathBuf>,
    pub format: Option<Format>,
}

fn parse_value<T: FromStr>(key: &str, raw: &str, line: usize) -> Result<T, CliError>
where
    T::Err: fmt::Display,
{
    raw.parse()
        .map_err(|e| CliError::Usage(format!("line {line}: invalid value {raw:?} for {key}: {e}")))
}

fn parse_list(key: &str, raw: &str, line: usize) -> Result<Vec<usize>, CliError> {
    raw.split(',').map(|t| parse_value(key, t.trim(), line)).collect()
}

fn set_once<T>(slot: &mut Option<T>, value: T, key: &str, line: usize) -> Result<(), CliError> {
    if slot.is_some() {
        return Err(CliError::Usage(format!("line {line}: key {key} given twice")));
    }
    *slot = Some(value);
    Ok(())
}

impl Settings {
    pub fn from_text(text: &str) -> Result<Self, CliError> {
        let mut s = Settings::default();
        for (idx, raw_line) in text.lines().enumerate() {
            let line = idx + 1;
            let trimmed = raw_line.trim();
            if trimmed.is_empty() || trimmed.starts_with('#') {
                continue;
            }
            let (key, raw) = trimmed
                .split_once('=')
                .ok_or_else(|| CliError::Usage(format!("line {line}: expected key = value, got {trimmed:?}")))?;
            let (key, raw) = (key.trim(), raw.trim());
            macro_rules! put {
                ($field:ident) => {
                    set_once(&mut s.$field, parse_value(key, raw, line)?, key, line)?
                };
            }
            match key {
                "mode" => put!(mode),
                "field" => put!(field),
                "p" => put!(p),
                "fbar" => put!(fbar),
                "beta" => put!(beta),
                "gamma" => put!(gamma),
                "gamma_tilde" => put!(gamma_tilde),
                "length" => put!(length),
                "j0" => put!(j0),
                "e0" => put!(e0),
                "steps" => put!(steps),
                "order" => put!(order),
                "sites" => put!(sites),
                "snapshots" => set_once(&mut s.snapshots, parse_list(key, raw, line)?, key, line)?,
                "fmin" => put!(fmin),
                "fmax" => put!(fmax),
                "points" => put!(points),
                "spacing" => put!(spacing),
                "tau_max" => put!(tau_max),
                "unitarity_tol" => put!(unitarity_tol),
                "out" => set_once(&mut s.out, PathBuf::from(raw), key, line)?,
                "format" => put!(format),
                _ => return Err(CliError::Usage(format!("line {line}: unknown key {key:?}"))),
            }
        }
        Ok(s)
    }

    /// `self` with unset entries filled from `base`. A drive given here
    /// (`field` or `p`) replaces the drive of `base` as a whole.
    pub fn over(self, base: Settings) -> Settings {
        let own_drive = self.field.is_some() || self.p.is_some();
        Settings {
            mode: self.mode.or(base.mode),
            field: if own_drive { self.field } else { base.field },
            p: if own_drive { self.p } else { base.p },
            fbar: self.fbar.or(base.fbar),
            beta: self.beta.or(base.beta),
            gamma: self.gamma.or(base.gamma),
            gamma_tilde: self.gamma_tilde.or(base.gamma_tilde),
            length: self.length.or(base.length),
            j0: self.j0.or(base.j0),
            e0: self.e0.or(base.e0),
            steps: self.steps.or(base.steps),
            order: self.order.or(base.order),
            sites: self.sites.or(base.sites),
            snapshots: self.snapshots.or(base.snapshots),
            fmin: self.fmin.or(base.fmin),
            fmax: self.fmax.or(base.fmax),
            points: self.points.or(base.points),
            spacing: self.spacing.or(base.spacing),
            tau_max: self.tau_max.or(base.tau_max),
            unitarity_tol: self.unitarity_tol.or(base.unitarity_tol),
            out: self.out.or(base.out),
            format: self.format.or(base.format),
        }
    }

    /// Applies defaults and validates.
    pub fn finish(self) -> Result<RunConfig, CliError> {
        let mode = self.mode.ok_or_else(|| CliError::Usage("mode is not set".into()))?;
        let drive = match (self.field, self.p) {
            (Some(_), Some(_)) => return Err(CliError::Usage("give either field or p, not both".into())),
            (Some(f), None) => Some(Drive::Field(f)),
            (None, Some(p)) => Some(Drive::Probability(p)),
            (None, None) => None,
        };
        let cfg = RunConfig {
            mode,
            drive,
            fbar: self.fbar.unwrap_or(1.0),
            beta: self.beta.unwrap_or(0.0),
            gamma: self.gamma.unwrap_or(PI / 4.0),
            gamma_tilde: self.gamma_tilde.unwrap_or(0.0),
            length: self.length.unwrap_or(1.0),
            j0: self.j0.unwrap_or(1.0),
            e0: self.e0.unwrap_or(1.0),
            steps: self.steps.unwrap_or(200),
            order: self.order.unwrap_or(40),
            sites: self.sites.unwrap_or(8),
            snapshots: self.snapshots,
            fmin: self.fmin.unwrap_or(0.5),
            fmax: self.fmax.unwrap_or(6.0),
            points: self.points.unwrap_or(56),
            spacing: self.spacing.unwrap_or_default(),
            tau_max: self.tau_max.unwrap_or(12),
            unitarity_tol: self.unitarity_tol.unwrap_or(1e-11),
            out: self.out,
            format: self.format.unwrap_or_default(),
        };
        cfg.validate()?;
        Ok(cfg)
    }
}

fn usage(msg: String) -> Result<(), CliError> {
    Err(CliError::Usage(msg))
}

impl RunConfig {
    pub fn parse_str(text: &str) -> Result<Self, CliError> {
        Settings::from_text(text)?.finish()
    }

    fn validate(&self) -> Result<(), CliError> {
        if matches!(self.mode, Mode::Evolve | Mode::Series | Mode::Edge) && self.drive.is_none() {
            return usage(format!("mode {} needs exactly one of field or p", self.mode));
        }
        // builds and checks the physical parameters
        if self.drive.is_some() {
            self.model()?;
        } else {
            ModelParams::new(1.0, self.fbar, self.beta, self.gamma, self.gamma_tilde)?
                .with_units(self.length, self.j0, self.e0)?;
        }
        if self.steps > MAX_STEPS {
            return usage(format!("steps = {} exceeds the cap of {MAX_STEPS}", self.steps));
        }
        if let Some(snaps) = &self.snapshots {
            if snaps.is_empty() {
                return usage("snapshots must not be empty".into());
            }
            if let Some(t) = snaps.iter().find(|&&t| t > self.steps) {
                return usage(format!("snapshot {t} lies beyond steps = {}", self.steps));
            }
        }
        if self.order == 0 || self.order > MAX_ORDER {
            return usage(format!("order must lie in [1, {MAX_ORDER}], got {}", self.order));
        }
        if self.sites > self.order {
            return usage(format!("sites = {} exceeds order = {}", self.sites, self.order));
        }
        if self.points < 2 {
            return usage(format!("sweep needs at least 2 points, got {}", self.points));
        }
        if !(self.fmin > 0.0 && self.fmin < self.fmax && self.fmax.is_finite()) {
            return usage(format!("need 0 < fmin < fmax < inf, got fmin = {}, fmax = {}", self.fmin, self.fmax));
        }
        if self.tau_max > MAX_PATH_STEPS {
            return usage(format!("tau_max = {} exceeds the path cap of {MAX_PATH_STEPS}", self.tau_max));
        }
        if !(self.unitarity_tol >= 0.0 && self.unitarity_tol.is_finite()) {
            return usage(format!("unitarity_tol must be finite and >= 0, got {}", self.unitarity_tol));
        }
        Ok(())
    }

    /// Physical parameters for a run with a drive.
    pub fn model(&self) -> Result<ModelParams, CliError> {
        self.model_at(match self.drive {
            Some(Drive::Field(f)) => f,
            Some(Drive::Probability(p)) => lzwalk::coin::field_for_probability(p, self.fbar)?,
            None => return Err(CliError::Usage("no field or p given".into())),
        })
    }

    /// Physical parameters at field `f`, other settings unchanged.
    pub fn model_at(&self, field: f64) -> Result<ModelParams, CliError> {
        Ok(ModelParams::new(field, self.fbar, self.beta, self.gamma, self.gamma_tilde)?
            .with_units(self.length, self.j0, self.e0)?)
    }

    /// Settings as ordered `(key, value)` pairs; unset options are `Null`.
    pub fn entries(&self) -> Vec<(&'static str, Value)> {
        let (field, p) = match self.drive {
            Some(Drive::Field(f)) => (Value::Float(f), Value::Null),
            Some(Drive::Probability(p)) => (Value::Null, Value::Float(p)),
            None => (Value::Null, Value::Null),
        };
        vec![
            ("mode", self.mode.as_str().into()),
            ("field", field),
            ("p", p),
            ("fbar", self.fbar.into()),
            ("beta", self.beta.into()),
            ("gamma", self.gamma.into()),
            ("gamma_tilde", self.gamma_tilde.into()),
            ("length", self.length.into()),
            ("j0", self.j0.into()),
            ("e0", self.e0.into()),
            ("steps", self.steps.into()),
            ("order", self.order.into()),
            ("sites", self.sites.into()),
            (
                "snapshots",
                self.snapshots.as_ref().map_or(Value::Null, |s| {
                    Value::Text(s.iter().map(|t| t.to_string()).collect::<Vec<_>>().join(","))
                }),
            ),
            ("fmin", self.fmin.into()),
            ("fmax", self.fmax.into()),
            ("points", self.points.into()),
            ("spacing", self.spacing.as_str().into()),
            ("tau_max", self.tau_max.into()),
            ("unitarity_tol", self.unitarity_tol.into()),
            ("out", self.out.as_ref().map_or(Value::Null, |p| Value::Text(p.display().to_string()))),
            ("format", self.format.as_str().into()),
        ]
    }

    /// Config-file text for this configuration.
    pub fn emit(&self) -> String {
        let mut out = String::new();
        for (key, value) in self.entries() {
            let text = match value {
                Value::Null => continue,
                Value::Float(x) => format_f64(x),
                Value::Int(i) => i.to_string(),
                Value::Bool(b) => b.to_string(),
                Value::Text(s) => s,
            };
            out.push_str(&format!("{key} = {text}\n"));
        }
        out
    }
}
