// Copyright 2026 The EBS Simulator Authors
// SPDX-License-Identifier: Apache-2.0

//! Flat `key = value` run configuration with dotted keys.
//!
//! ```text
//! # working point
//! mode = fidelity-sweep
//! cavity.g = 2.4
//! cavity.gamma = 0.1
//! sweep.axis = kappa_s
//! sweep.start = 0
//! sweep.stop = 2
//! sweep.points = 201
//! ```
//!
//! Blank lines and `#` comments are ignored. Unknown or repeated keys are
//! errors.

use std::fmt;
use std::fmt::Write as _;
use std::path::PathBuf;

use num_complex::Complex64;

use crate::protocols::{Probe, ProtocolKind};
use crate::scattering::CavityParams;

#[derive(Debug, Clone, PartialEq)]
pub struct ConfigError(pub String);

impl fmt::Display for ConfigError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl std::error::Error for ConfigError {}

fn err<T>(msg: impl Into<String>) -> Result<T, ConfigError> {
    Err(ConfigError(msg.into()))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Mode {
    Spectra,
    FidelitySweep,
    Protocol,
}

impl Mode {
    pub fn name(self) -> &'static str {
        match self {
            Mode::Spectra => "spectra",
            Mode::FidelitySweep => "fidelity-sweep",
            Mode::Protocol => "protocol",
        }
    }

    fn parse(s: &str) -> Option<Self> {
        [Mode::Spectra, Mode::FidelitySweep, Mode::Protocol]
            .into_iter()
            .find(|m| m.name() == s)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SweepAxis {
    Detuning,
    G,
    KappaS,
}

impl SweepAxis {
    pub fn name(self) -> &'static str {
        match self {
            SweepAxis::Detuning => "detuning",
            SweepAxis::G => "g",
            SweepAxis::KappaS => "kappa_s",
        }
    }

    fn parse(s: &str) -> Option<Self> {
        [SweepAxis::Detuning, SweepAxis::G, SweepAxis::KappaS]
            .into_iter()
            .find(|a| a.name() == s)
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Sweep {
    pub axis: SweepAxis,
    pub start: f64,
    pub stop: f64,
    pub points: usize,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ProtocolConfig {
    pub name: ProtocolKind,
    pub alpha: Complex64,
    pub beta: Complex64,
    pub probe: Probe,
    /// Use the lossless splitter instead of the cavity channel.
    pub ideal: bool,
}

#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub mode: Mode,
    pub cavity: CavityParams,
    /// Probe detuning for protocol runs and for g / κ_s sweeps.
    pub detuning: f64,
    /// Hole-mixing amplitude ε.
    pub mixing: f64,
    /// τ/T₂; a positive value switches protocol runs to the density-matrix
    /// engine with spin dephasing after each scattering event.
    pub tau_over_t2: f64,
    pub sweep: Sweep,
    pub protocol: ProtocolConfig,
    pub output: Option<PathBuf>,
    /// Seed for sampled trajectories (ChaCha8). Sampling runs iff set.
    pub seed: Option<u64>,
    pub samples: Option<usize>,
}

pub const DEFAULT_SAMPLES: usize = 100;

/// Command-line flags that take precedence over config keys.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct Overrides {
    pub output: Option<PathBuf>,
    pub seed: Option<u64>,
    pub ideal: bool,
}

impl Overrides {
    pub fn apply(&self, cfg: &mut RunConfig) {
        if self.output.is_some() {
            cfg.output.clone_from(&self.output);
        }
        if self.seed.is_some() {
            cfg.seed = self.seed;
        }
        if self.ideal {
            cfg.protocol.ideal = true;
        }
    }
}

impl RunConfig {
    pub fn new(mode: Mode) -> Self {
        Self {
            mode,
            cavity: CavityParams::default(),
            detuning: 0.0,
            mixing: 0.0,
            tau_over_t2: 0.0,
            sweep: Sweep {
                axis: SweepAxis::Detuning,
                start: -5.0,
                stop: 5.0,
                points: 1001,
            },
            protocol: ProtocolConfig {
                name: ProtocolKind::TwoPhotonBell,
                alpha: Complex64::new(1.0, 0.0),
                beta: Complex64::new(0.0, 0.0),
                probe: Probe::H,
                ideal: false,
            },
            output: None,
            seed: None,
            samples: None,
        }
    }

    /// Parse a config for the run `mode`. A `mode` key in the text must
    /// agree with it.
    pub fn parse(text: &str, mode: Mode) -> Result<Self, ConfigError> {
        Self::parse_with(text, mode, &Overrides::default())
    }

    /// Parse, apply command-line overrides, then validate.
    pub fn parse_with(text: &str, mode: Mode, overrides: &Overrides) -> Result<Self, ConfigError> {
        let mut cfg = Self::new(mode);
        let mut seen: Vec<String> = Vec::new();
        for (lineno, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let Some((key, value)) = line.split_once('=') else {
                return err(format!("line {}: expected `key = value`", lineno + 1));
            };
            let (key, value) = (key.trim(), value.trim());
            if seen.iter().any(|k| k == key) {
                return err(format!("line {}: duplicate key `{key}`", lineno + 1));
            }
            seen.push(key.to_string());
            cfg.set(key, value)
                .map_err(|e| ConfigError(format!("line {}: {}", lineno + 1, e.0)))?;
        }
        if cfg.mode != mode {
            return err(format!(
                "config mode `{}` does not match the `{}` command",
                cfg.mode.name(),
                mode.name()
            ));
        }
        overrides.apply(&mut cfg);
        cfg.validate()?;
        Ok(cfg)
    }

    fn set(&mut self, key: &str, value: &str) -> Result<(), ConfigError> {
        match key {
            "mode" => {
                self.mode = Mode::parse(value).ok_or_else(|| ConfigError(format!("`mode`: unknown mode `{value}`")))?
            }
            "cavity.g" => self.cavity.g = float(key, value)?,
            "cavity.kappa" => self.cavity.kappa = float(key, value)?,
            "cavity.kappa_s" => self.cavity.kappa_s = float(key, value)?,
            "cavity.gamma" => self.cavity.gamma = float(key, value)?,
            "cavity.omega_c" => self.cavity.omega_c = float(key, value)?,
            "cavity.omega_x" => self.cavity.omega_x = float(key, value)?,
            "channel.detuning" => self.detuning = float(key, value)?,
            "channel.mixing" => self.mixing = float(key, value)?,
            "channel.tau_over_t2" => self.tau_over_t2 = float(key, value)?,
            "sweep.axis" => {
                self.sweep.axis =
                    SweepAxis::parse(value).ok_or_else(|| ConfigError(format!("`{key}`: unknown axis `{value}`")))?
            }
            "sweep.start" => self.sweep.start = float(key, value)?,
            "sweep.stop" => self.sweep.stop = float(key, value)?,
            "sweep.points" => self.sweep.points = integer(key, value)?,
            "protocol.name" => {
                self.protocol.name = ProtocolKind::from_name(value)
                    .ok_or_else(|| ConfigError(format!("`{key}`: unknown protocol `{value}`")))?
            }
            "protocol.alpha.re" => self.protocol.alpha.re = float(key, value)?,
            "protocol.alpha.im" => self.protocol.alpha.im = float(key, value)?,
            "protocol.beta.re" => self.protocol.beta.re = float(key, value)?,
            "protocol.beta.im" => self.protocol.beta.im = float(key, value)?,
            "protocol.probe" => {
                self.protocol.probe = match value {
                    "H" => Probe::H,
                    "V" => Probe::V,
                    _ => return err(format!("`{key}`: probe must be H or V, got `{value}`")),
                }
            }
            "protocol.ideal" => {
                self.protocol.ideal = value
                    .parse()
                    .map_err(|_| ConfigError(format!("`{key}`: expected true or false, got `{value}`")))?
            }
            "output.path" => self.output = Some(PathBuf::from(value)),
            "run.seed" => self.seed = Some(integer(key, value)?),
            "run.samples" => self.samples = Some(integer(key, value)?),
            _ => return err(format!("unknown key `{key}`")),
        }
        Ok(())
    }

    pub fn validate(&self) -> Result<(), ConfigError> {
        self.cavity
            .validate()
            .map_err(|e| ConfigError(format!("cavity: {e}")))?;
        for (key, v) in [
            ("channel.detuning", self.detuning),
            ("channel.tau_over_t2", self.tau_over_t2),
            ("sweep.start", self.sweep.start),
            ("sweep.stop", self.sweep.stop),
        ] {
            if !v.is_finite() {
                return err(format!("`{key}` must be finite"));
            }
        }
        if !(0.0..=1.0).contains(&self.mixing) {
            return err(format!("`channel.mixing` must lie in [0, 1], got {}", self.mixing));
        }
        if self.tau_over_t2 < 0.0 {
            return err("`channel.tau_over_t2` must be >= 0");
        }
        if self.sweep.points < 2 {
            return err("`sweep.points` must be at least 2");
        }
        if self.sweep.stop <= self.sweep.start {
            return err("`sweep.stop` must exceed `sweep.start`");
        }
        if self.mode == Mode::Spectra && self.sweep.axis != SweepAxis::Detuning {
            return err("`sweep.axis` must be `detuning` for spectra");
        }
        if self.sweep.axis != SweepAxis::Detuning && self.sweep.start < 0.0 {
            return err(format!(
                "`sweep.start` must be >= 0 for axis `{}`",
                self.sweep.axis.name()
            ));
        }
        if self.seed.is_some() && self.mode != Mode::Protocol {
            return err("`run.seed` only applies to protocol runs");
        }
        match self.samples {
            Some(_) if self.seed.is_none() => return err("`run.samples` needs `run.seed`"),
            Some(0) => return err("`run.samples` must be positive"),
            _ => {}
        }
        Ok(())
    }

    /// Render every key; `parse(to_config_string(c), c.mode) == c`.
    pub fn to_config_string(&self) -> String {
        let mut out = String::new();
        let mut kv = |k: &str, v: String| {
            let _ = writeln!(out, "{k} = {v}");
        };
        let f = |x: f64| format!("{x:?}");
        kv("mode", self.mode.name().into());
        kv("cavity.g", f(self.cavity.g));
        kv("cavity.kappa", f(self.cavity.kappa));
        kv("cavity.kappa_s", f(self.cavity.kappa_s));
        kv("cavity.gamma", f(self.cavity.gamma));
        kv("cavity.omega_c", f(self.cavity.omega_c));
        kv("cavity.omega_x", f(self.cavity.omega_x));
        kv("channel.detuning", f(self.detuning));
        kv("channel.mixing", f(self.mixing));
        kv("channel.tau_over_t2", f(self.tau_over_t2));
        kv("sweep.axis", self.sweep.axis.name().into());
        kv("sweep.start", f(self.sweep.start));
        kv("sweep.stop", f(self.sweep.stop));
        kv("sweep.points", self.sweep.points.to_string());
        kv("protocol.name", self.protocol.name.name().into());
        kv("protocol.alpha.re", f(self.protocol.alpha.re));
        kv("protocol.alpha.im", f(self.protocol.alpha.im));
        kv("protocol.beta.re", f(self.protocol.beta.re));
        kv("protocol.beta.im", f(self.protocol.beta.im));
        kv(
            "protocol.probe",
            match self.protocol.probe {
                Probe::H => "H".into(),
                Probe::V => "V".into(),
            },
        );
        kv("protocol.ideal", self.protocol.ideal.to_string());
        if let Some(p) = &self.output {
            kv("output.path", p.display().to_string());
        }
        if let Some(s) = self.seed {
            kv("run.seed", s.to_string());
        }
        if let Some(n) = self.samples {
            kv("run.samples", n.to_string());
        }
        out
    }
}

fn float(key: &str, value: &str) -> Result<f64, ConfigError> {
    value
        .parse()
        .map_err(|_| ConfigError(format!("`{key}`: expected a number, got `{value}`")))
}

fn integer<T: std::str::FromStr>(key: &str, value: &str) -> Result<T, ConfigError> {
    value
        .parse()
        .map_err(|_| ConfigError(format!("`{key}`: expected a non-negative integer, got `{value}`")))
}
