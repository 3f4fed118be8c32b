// Copyright 2026 The EBS Simulator Authors
// SPDX-License-Identifier: Apache-2.0

//! Steady-state input-output amplitudes of a double-sided cavity with a
//! trion-coupled spin.
//!
//! In the weak-excitation limit (⟨σ_z⟩ ≈ −1) the coupled cavity has
//!
//! ```text
//! t(ω) = −κ [i(ω_X − ω) + γ/2] / ([i(ω_X − ω) + γ/2][i(ω_c − ω) + κ + κ_s/2] + g²)
//! r(ω) = 1 + t(ω)
//! ```
//!
//! and the cold cavity is the `g = 0` limit with ω₀ = ω_c. The frame is
//! e^{−iωt}, so t₀(ω₀) = −1 for a lossless resonant cavity.

use num_complex::Complex64;

use crate::error::{Error, Result};

/// Rates and frequency offsets of the spin-cavity system, in units of κ.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CavityParams {
    /// Trion-cavity coupling strength g.
    pub g: f64,
    /// Field decay rate into the two input/output ports.
    pub kappa: f64,
    /// Field decay rate into leaky side modes (enters as κ_s/2).
    pub kappa_s: f64,
    /// Trion dipole decay rate (enters as γ/2).
    pub gamma: f64,
    /// Cavity mode offset from the reference frequency ω₀.
    pub omega_c: f64,
    /// Trion transition offset from ω₀.
    pub omega_x: f64,
}

impl Default for CavityParams {
    /// The strong-coupling working point g = 2.4κ, γ = 0.1κ, κ_s = 0, resonant.
    fn default() -> Self {
        Self {
            g: 2.4,
            kappa: 1.0,
            kappa_s: 0.0,
            gamma: 0.1,
            omega_c: 0.0,
            omega_x: 0.0,
        }
    }
}

impl CavityParams {
    /// Resonant configuration (ω_c = ω_X = ω₀) with κ = 1.
    pub fn resonant(g: f64, gamma: f64, kappa_s: f64) -> Self {
        Self {
            g,
            gamma,
            kappa_s,
            ..Self::default()
        }
    }

    pub fn with_g(self, g: f64) -> Self {
        Self { g, ..self }
    }

    pub fn with_kappa_s(self, kappa_s: f64) -> Self {
        Self { kappa_s, ..self }
    }

    /// Divide every rate and offset by κ, so that κ becomes 1.
    pub fn normalized(&self) -> Result<Self> {
        self.validate()?;
        let k = self.kappa;
        Ok(Self {
            g: self.g / k,
            kappa: 1.0,
            kappa_s: self.kappa_s / k,
            gamma: self.gamma / k,
            omega_c: self.omega_c / k,
            omega_x: self.omega_x / k,
        })
    }

    pub fn validate(&self) -> Result<()> {
        let fields = [
            ("g", self.g),
            ("kappa", self.kappa),
            ("kappa_s", self.kappa_s),
            ("gamma", self.gamma),
            ("omega_c", self.omega_c),
            ("omega_x", self.omega_x),
        ];
        for (name, value) in fields {
            if !value.is_finite() {
                return Err(Error::InvalidParameter {
                    name,
                    reason: format!("must be finite, got {value}"),
                });
            }
        }
        let nonneg = [("g", self.g), ("kappa_s", self.kappa_s), ("gamma", self.gamma)];
        for (name, value) in nonneg {
            if value < 0.0 {
                return Err(Error::InvalidParameter {
                    name,
                    reason: format!("must be >= 0, got {value}"),
                });
            }
        }
        if self.kappa <= 0.0 {
            return Err(Error::InvalidParameter {
                name: "kappa",
                reason: format!("must be > 0, got {}", self.kappa),
            });
        }
        Ok(())
    }
}

/// The four scattering amplitudes at one probe detuning.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ScatterAmplitudes {
    /// Coupled-cavity transmission.
    pub t: Complex64,
    /// Coupled-cavity reflection.
    pub r: Complex64,
    /// Cold-cavity transmission.
    pub t0: Complex64,
    /// Cold-cavity reflection.
    pub r0: Complex64,
    /// Probe detuning ω − ω₀.
    pub detuning: f64,
}

impl ScatterAmplitudes {
    pub fn evaluate(params: &CavityParams, detuning: f64) -> Result<Self> {
        let (t, r) = coupled_amplitudes(params, detuning)?;
        let (t0, r0) = cold_amplitudes(params, detuning)?;
        Ok(Self { t, r, t0, r0, detuning })
    }
}

fn check_detuning(detuning: f64) -> Result<()> {
    if detuning.is_finite() {
        Ok(())
    } else {
        Err(Error::InvalidParameter {
            name: "detuning",
            reason: format!("must be finite, got {detuning}"),
        })
    }
}

/// Transmission and reflection `(t, r)` of the coupled cavity.
///
/// With `g == 0` this takes the cold-cavity path, so the result is bitwise
/// identical to [`cold_amplitudes`].
pub fn coupled_amplitudes(params: &CavityParams, detuning: f64) -> Result<(Complex64, Complex64)> {
    params.validate()?;
    check_detuning(detuning)?;
    if params.g == 0.0 {
        return cold_amplitudes(params, detuning);
    }
    let dipole = Complex64::new(params.gamma / 2.0, params.omega_x - detuning);
    let cavity = Complex64::new(params.kappa + params.kappa_s / 2.0, params.omega_c - detuning);
    let t = -params.kappa * dipole / (dipole * cavity + params.g * params.g);
    Ok((t, 1.0 + t))
}

/// Transmission and reflection `(t0, r0)` of the uncoupled cavity.
pub fn cold_amplitudes(params: &CavityParams, detuning: f64) -> Result<(Complex64, Complex64)> {
    params.validate()?;
    check_detuning(detuning)?;
    let cavity = Complex64::new(params.kappa + params.kappa_s / 2.0, params.omega_c - detuning);
    let t0 = -params.kappa / cavity;
    Ok((t0, 1.0 + t0))
}

/// Saturation photon number n₀ = γ² / 2g².
pub fn critical_photon_number(params: &CavityParams) -> Result<f64> {
    params.validate()?;
    if params.g == 0.0 {
        return Err(Error::Domain("critical photon number needs g > 0"));
    }
    Ok(params.gamma * params.gamma / (2.0 * params.g * params.g))
}

/// `points` evenly spaced values from `start` to `stop` inclusive.
pub fn linspace(start: f64, stop: f64, points: usize) -> Vec<f64> {
    match points {
        0 => Vec::new(),
        1 => vec![start],
        n => {
            let span = stop - start;
            let last = (n - 1) as f64;
            (0..n).map(|i| start + span * i as f64 / last).collect()
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SpectrumRow {
    pub detuning: f64,
    pub abs_t: f64,
    pub abs_r: f64,
    pub abs_t0: f64,
    pub abs_r0: f64,
    pub arg_t: f64,
    pub arg_r: f64,
    pub arg_t0: f64,
    pub arg_r0: f64,
}

impl From<ScatterAmplitudes> for SpectrumRow {
    fn from(a: ScatterAmplitudes) -> Self {
        Self {
            detuning: a.detuning,
            abs_t: a.t.norm(),
            abs_r: a.r.norm(),
            abs_t0: a.t0.norm(),
            abs_r0: a.r0.norm(),
            arg_t: a.t.arg(),
            arg_r: a.r.arg(),
            arg_t0: a.t0.arg(),
            arg_r0: a.r0.arg(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct SpectrumTable {
    pub rows: Vec<SpectrumRow>,
}

impl SpectrumTable {
    pub const HEADER: [&'static str; 9] = [
        "detuning", "abs_t", "abs_r", "abs_t0", "abs_r0", "arg_t", "arg_r", "arg_t0", "arg_r0",
    ];

    pub fn len(&self) -> usize {
        self.rows.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rows.is_empty()
    }

    /// Detunings of strict interior local maxima of |t|.
    pub fn transmission_peaks(&self) -> Vec<f64> {
        self.rows
            .windows(3)
            .filter(|w| w[1].abs_t > w[0].abs_t && w[1].abs_t > w[2].abs_t)
            .map(|w| w[1].detuning)
            .collect()
    }

    /// Detunings of strict interior local minima of |t|.
    pub fn transmission_dips(&self) -> Vec<f64> {
        self.rows
            .windows(3)
            .filter(|w| w[1].abs_t < w[0].abs_t && w[1].abs_t < w[2].abs_t)
            .map(|w| w[1].detuning)
            .collect()
    }
}

/// Evaluate all four amplitudes on a strictly increasing detuning grid.
pub fn sweep_spectra(params: &CavityParams, grid: &[f64]) -> Result<SpectrumTable> {
    if grid.is_empty() {
        return Err(Error::EmptyInput("detuning grid"));
    }
    if grid
        .windows(2)
        .any(|w| w[1].partial_cmp(&w[0]) != Some(std::cmp::Ordering::Greater))
    {
        return Err(Error::InvalidParameter {
            name: "grid",
            reason: "detunings must be strictly increasing".into(),
        });
    }
    let rows = grid
        .iter()
        .map(|&d| ScatterAmplitudes::evaluate(params, d).map(SpectrumRow::from))
        .collect::<Result<Vec<_>>>()?;
    Ok(SpectrumTable { rows })
}
