// Copyright 2026 The EBS Simulator Authors
// SPDX-License-Identifier: Apache-2.0

//! Run drivers behind the `ebs` binary.
//!
//! Each driver renders its result to a string; [`execute`] writes it to the
//! configured path or to stdout.

pub mod config;

use std::fmt::Write as _;
use std::io::Write as _;
use std::path::Path;

use rand::distr::weighted::WeightedIndex;
use rand::distr::Distribution;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::channel::{amplitude_fidelities, ChannelMode, DephasingParams, EbsChannel, FidelityReport};
use crate::format::sci;
use crate::protocols::{self, density, ProtocolKind, ProtocolResult, SpinCavity};
use crate::scattering::{linspace, sweep_spectra, SpectrumTable};

pub use config::{ConfigError, Mode, Overrides, RunConfig, Sweep, SweepAxis, DEFAULT_SAMPLES};

pub const FIDELITY_HEADER: [&str; 3] = ["axis", "F_t", "F_r"];

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("config error: {0}")]
    Config(String),
    #[error("I/O error: {0}")]
    Io(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Config(_) => 2,
            CliError::Io(_) => 3,
        }
    }
}

impl From<ConfigError> for CliError {
    fn from(e: ConfigError) -> Self {
        CliError::Config(e.0)
    }
}

impl From<crate::Error> for CliError {
    fn from(e: crate::Error) -> Self {
        CliError::Config(e.to_string())
    }
}

/// Read a config file (defaults when `path` is `None`), apply the overrides
/// and validate.
pub fn load_config(path: Option<&Path>, mode: Mode, overrides: &Overrides) -> Result<RunConfig, CliError> {
    let text = match path {
        Some(p) => std::fs::read_to_string(p).map_err(|e| CliError::Io(format!("{}: {e}", p.display())))?,
        None => String::new(),
    };
    Ok(RunConfig::parse_with(&text, mode, overrides)?)
}

fn csv<const N: usize>(header: [&str; N], rows: impl Iterator<Item = [f64; N]>) -> String {
    let mut out = header.join(",");
    out.push('\n');
    for row in rows {
        let cells: Vec<String> = row.iter().map(|&x| sci(x)).collect();
        out.push_str(&cells.join(","));
        out.push('\n');
    }
    out
}

pub fn spectra_table(cfg: &RunConfig) -> Result<SpectrumTable, CliError> {
    let grid = linspace(cfg.sweep.start, cfg.sweep.stop, cfg.sweep.points);
    Ok(sweep_spectra(&cfg.cavity, &grid)?)
}

/// Spectra CSV: `detuning,abs_t,abs_r,abs_t0,abs_r0,arg_t,arg_r,arg_t0,arg_r0`.
pub fn run_spectra(cfg: &RunConfig) -> Result<String, CliError> {
    let table = spectra_table(cfg)?;
    Ok(csv(
        SpectrumTable::HEADER,
        table.rows.iter().map(|r| {
            [
                r.detuning, r.abs_t, r.abs_r, r.abs_t0, r.abs_r0, r.arg_t, r.arg_r, r.arg_t0, r.arg_r0,
            ]
        }),
    ))
}

/// F^t and F^r along the sweep axis, including hole mixing when configured.
pub fn fidelity_sweep(cfg: &RunConfig) -> Result<Vec<(f64, FidelityReport)>, CliError> {
    let grid = linspace(cfg.sweep.start, cfg.sweep.stop, cfg.sweep.points);
    let rows = grid
        .par_iter()
        .map(|&x| {
            let (params, detuning) = match cfg.sweep.axis {
                SweepAxis::Detuning => (cfg.cavity, x),
                SweepAxis::G => (cfg.cavity.with_g(x), cfg.detuning),
                SweepAxis::KappaS => (cfg.cavity.with_kappa_s(x), cfg.detuning),
            };
            let report = if cfg.mixing == 0.0 {
                amplitude_fidelities(&params, detuning)
            } else {
                EbsChannel::build(&params, detuning, cfg.mixing, ChannelMode::Full).and_then(|ch| ch.fidelities())
            };
            report
                .map(|r| (x, r))
                .map_err(|e| CliError::Config(format!("{} = {x}: {e}", cfg.sweep.axis.name())))
        })
        .collect::<Result<Vec<_>, CliError>>()?;
    Ok(rows)
}

/// Fidelity CSV: `axis,F_t,F_r`.
pub fn run_fidelity_sweep(cfg: &RunConfig) -> Result<String, CliError> {
    let rows = fidelity_sweep(cfg)?;
    Ok(csv(FIDELITY_HEADER, rows.iter().map(|(x, f)| [*x, f.f_t, f.f_r])))
}

pub fn protocol_channel(cfg: &RunConfig) -> Result<EbsChannel, CliError> {
    if cfg.protocol.ideal {
        Ok(EbsChannel::perfect())
    } else {
        Ok(EbsChannel::build(
            &cfg.cavity,
            cfg.detuning,
            cfg.mixing,
            ChannelMode::Full,
        )?)
    }
}

pub fn protocol_result(cfg: &RunConfig) -> Result<ProtocolResult, CliError> {
    let ch = protocol_channel(cfg)?;
    let p = &cfg.protocol;
    let spin = [p.alpha, p.beta];
    let dephasing = if cfg.tau_over_t2 > 0.0 {
        Some(DephasingParams::from_ratio(cfg.tau_over_t2)?)
    } else {
        None
    };
    let one = SpinCavity::new(ch.clone(), "spin");
    let (a, b) = (
        SpinCavity::new(ch.clone(), "spinA"),
        SpinCavity::new(ch.clone(), "spinB"),
    );
    let res = match dephasing.as_ref() {
        None => match p.name {
            ProtocolKind::PhotonToSpin => protocols::photon_to_spin_transfer(p.alpha, p.beta, &ch),
            ProtocolKind::SpinToPhoton => protocols::spin_to_photon_transfer(p.alpha, p.beta, &ch),
            ProtocolKind::QndReadout => protocols::qnd_spin_readout(spin, &ch, p.probe),
            ProtocolKind::TwoPhotonBell => protocols::two_photon_bell(&one, &one),
            ProtocolKind::RemoteEntanglement => protocols::remote_spin_entanglement(&a, &b),
        },
        d => match p.name {
            ProtocolKind::PhotonToSpin => density::photon_to_spin_transfer(p.alpha, p.beta, &ch, d),
            ProtocolKind::SpinToPhoton => density::spin_to_photon_transfer(p.alpha, p.beta, &ch, d),
            ProtocolKind::QndReadout => density::qnd_spin_readout(spin, &ch, p.probe, d),
            ProtocolKind::TwoPhotonBell => density::two_photon_bell(&one, &one, d),
            ProtocolKind::RemoteEntanglement => density::remote_spin_entanglement(&a, &b, d),
        },
    }?;
    Ok(res)
}

/// Draw `samples` branch labels from the branch distribution.
pub fn sample_trajectories(res: &ProtocolResult, seed: u64, samples: usize) -> Result<Vec<String>, CliError> {
    let weights: Vec<f64> = res.branches.iter().map(|b| b.probability.max(0.0)).collect();
    let dist = WeightedIndex::new(&weights).map_err(|e| CliError::Config(format!("cannot sample branches: {e}")))?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    Ok((0..samples)
        .map(|_| res.branches[dist.sample(&mut rng)].label())
        .collect())
}

/// Protocol report, plus a `[trajectory]` section when a seed is set.
pub fn run_protocol(cfg: &RunConfig) -> Result<String, CliError> {
    let res = protocol_result(cfg)?;
    let mut out = String::new();
    let channel = if cfg.protocol.ideal { "perfect" } else { "cavity" };
    let _ = writeln!(out, "channel = {channel}");
    if !cfg.protocol.ideal {
        let c = &cfg.cavity;
        let _ = writeln!(
            out,
            "cavity = g {} kappa {} kappa_s {} gamma {} omega_c {} omega_x {}",
            sci(c.g),
            sci(c.kappa),
            sci(c.kappa_s),
            sci(c.gamma),
            sci(c.omega_c),
            sci(c.omega_x)
        );
        let _ = writeln!(out, "detuning = {}", sci(cfg.detuning));
        let _ = writeln!(out, "mixing = {}", sci(cfg.mixing));
    }
    let _ = writeln!(out, "tau_over_t2 = {}", sci(cfg.tau_over_t2));
    out.push_str(&res.report());
    if let Some(seed) = cfg.seed {
        let samples = cfg.samples.unwrap_or(DEFAULT_SAMPLES);
        let shots = sample_trajectories(&res, seed, samples)?;
        let _ = writeln!(out, "\n[trajectory]");
        let _ = writeln!(out, "generator = ChaCha8");
        let _ = writeln!(out, "seed = {seed}");
        let _ = writeln!(out, "samples = {samples}");
        for (i, s) in shots.iter().enumerate() {
            let _ = writeln!(out, "shot {i} = {s}");
        }
    }
    Ok(out)
}

pub fn render(cfg: &RunConfig) -> Result<String, CliError> {
    match cfg.mode {
        Mode::Spectra => run_spectra(cfg),
        Mode::FidelitySweep => run_fidelity_sweep(cfg),
        Mode::Protocol => run_protocol(cfg),
    }
}

/// Render and write to `cfg.output`, or stdout when unset.
pub fn execute(cfg: &RunConfig) -> Result<(), CliError> {
    let text = render(cfg)?;
    match &cfg.output {
        Some(path) => std::fs::write(path, text).map_err(|e| CliError::Io(format!("{}: {e}", path.display()))),
        None => std::io::stdout()
            .lock()
            .write_all(text.as_bytes())
            .map_err(|e| CliError::Io(e.to_string())),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn spectra_csv_shape() {
        let mut cfg = RunConfig::new(Mode::Spectra);
        cfg.sweep.points = 11;
        let text = run_spectra(&cfg).unwrap();
        let lines: Vec<&str> = text.lines().collect();
        assert_eq!(lines[0], "detuning,abs_t,abs_r,abs_t0,abs_r0,arg_t,arg_r,arg_t0,arg_r0");
        assert_eq!(lines.len(), 12);
        assert!(
            lines[6].starts_with("0.00000000e0,8.60585198e-3,9.91394148e-1"),
            "{}",
            lines[6]
        );
    }

    #[test]
    fn fidelity_sweep_orders_rows() {
        let mut cfg = RunConfig::new(Mode::FidelitySweep);
        cfg.sweep = Sweep {
            axis: SweepAxis::KappaS,
            start: 0.0,
            stop: 1.0,
            points: 3,
        };
        let rows = fidelity_sweep(&cfg).unwrap();
        assert_eq!(rows.iter().map(|r| r.0).collect::<Vec<_>>(), vec![0.0, 0.5, 1.0]);
        assert!((rows[0].1.f_t - 0.9999629717125974).abs() < 1e-12);
        assert!((rows[2].1.f_r - 0.9478608743121286).abs() < 1e-12);
        assert!(run_fidelity_sweep(&cfg).unwrap().starts_with("axis,F_t,F_r\n"));
    }

    #[test]
    fn trajectories_are_seeded() {
        let mut cfg = RunConfig::new(Mode::Protocol);
        cfg.seed = Some(7);
        cfg.samples = Some(50);
        let a = run_protocol(&cfg).unwrap();
        assert_eq!(a, run_protocol(&cfg).unwrap());
        assert_eq!(a.matches("shot ").count(), 50);
        cfg.seed = Some(8);
        assert_ne!(a, run_protocol(&cfg).unwrap());
    }

    #[test]
    fn dephasing_selects_density_engine() {
        let mut cfg = RunConfig::new(Mode::Protocol);
        cfg.protocol.ideal = true;
        assert!(run_protocol(&cfg).unwrap().contains("engine = state-vector"));
        cfg.tau_over_t2 = 0.1;
        assert!(run_protocol(&cfg).unwrap().contains("engine = density-matrix"));
    }

    #[test]
    fn exit_codes() {
        assert_eq!(CliError::Config(String::new()).exit_code(), 2);
        assert_eq!(CliError::Io(String::new()).exit_code(), 3);
        let err = load_config(
            Some(Path::new("/nonexistent/ebs.cfg")),
            Mode::Spectra,
            &Overrides::default(),
        )
        .unwrap_err();
        assert_eq!(err.exit_code(), 3);
    }
}
