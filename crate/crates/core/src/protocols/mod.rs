// Copyright 2026 The EBS Simulator Authors
// SPDX-License-Identifier: Apache-2.0

//! End-to-end procedures built on the splitter.
//!
//! Each protocol enumerates every branch deterministically: the port taken
//! at each scattering event, then the outcome of the final detection. Branch
//! probabilities plus the aggregated loss branch sum to one.
//!
//! Sign convention: detection of |H⟩ (photon) or |↑⟩ after a spin Hadamard
//! heralds the `+` target, |V⟩ or |↓⟩ the `−` target. In the state-transfer
//! protocols a reflected branch is brought back to the transmitted form by a
//! Pauli X on the carrier of the output state (spin for photon-to-spin,
//! photon for spin-to-photon).
//!
//! The functions in this module run on state vectors; [`density`] runs the
//! same circuits as density-matrix channel compositions and adds optional
//! spin dephasing.

mod circuit;
pub mod density;

use std::fmt;
use std::fmt::Write as _;

use num_complex::Complex64;

use crate::channel::{EbsChannel, Port};
use crate::error::{Error, Result};
use crate::format::sci;
use crate::quantum::{basis_ket, gates, plus_ket, BellState, DensityMatrix, Ket, PureState, Register};

use circuit::{is_normalized, Circuit, Engine, RawBranch, Step};

pub const SIGN_CONVENTION: &str =
    "H=(R+L)/sqrt2, V=(R-L)/sqrt2; H or spin-up heralds the + target, V or spin-down the - target; reflected transfer branches corrected by X";

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ProtocolKind {
    PhotonToSpin,
    SpinToPhoton,
    QndReadout,
    TwoPhotonBell,
    RemoteEntanglement,
}

impl ProtocolKind {
    pub const ALL: [ProtocolKind; 5] = [
        ProtocolKind::PhotonToSpin,
        ProtocolKind::SpinToPhoton,
        ProtocolKind::QndReadout,
        ProtocolKind::TwoPhotonBell,
        ProtocolKind::RemoteEntanglement,
    ];

    pub fn name(self) -> &'static str {
        match self {
            ProtocolKind::PhotonToSpin => "photon_to_spin",
            ProtocolKind::SpinToPhoton => "spin_to_photon",
            ProtocolKind::QndReadout => "qnd_readout",
            ProtocolKind::TwoPhotonBell => "two_photon_bell",
            ProtocolKind::RemoteEntanglement => "remote_entanglement",
        }
    }

    pub fn from_name(name: &str) -> Option<Self> {
        Self::ALL.into_iter().find(|k| k.name() == name)
    }
}

impl fmt::Display for ProtocolKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// Linear polarization of the QND probe photon.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Probe {
    H,
    V,
}

impl Probe {
    pub fn ket(self) -> Ket {
        let h = std::f64::consts::FRAC_1_SQRT_2;
        match self {
            Probe::H => [Complex64::new(h, 0.0), Complex64::new(h, 0.0)],
            Probe::V => [Complex64::new(h, 0.0), Complex64::new(-h, 0.0)],
        }
    }
}

/// Spin value inferred by the QND readout.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SpinValue {
    Up,
    Down,
}

impl SpinValue {
    pub fn ket(self) -> Ket {
        match self {
            SpinValue::Up => basis_ket(0),
            SpinValue::Down => basis_ket(1),
        }
    }

    pub fn label(self) -> &'static str {
        match self {
            SpinValue::Up => "up",
            SpinValue::Down => "down",
        }
    }
}

/// A splitter channel attached to a named spin register.
#[derive(Debug, Clone, PartialEq)]
pub struct SpinCavity {
    pub channel: EbsChannel,
    pub spin: String,
}

impl SpinCavity {
    pub fn new(channel: EbsChannel, spin: impl Into<String>) -> Self {
        Self {
            channel,
            spin: spin.into(),
        }
    }
}

/// Normalized state of the registers left after detection.
#[derive(Debug, Clone, PartialEq)]
pub enum BranchState {
    Pure(PureState),
    Mixed(DensityMatrix),
}

impl BranchState {
    pub fn to_density(&self) -> DensityMatrix {
        match self {
            BranchState::Pure(s) => s.to_density(),
            BranchState::Mixed(rho) => rho.clone(),
        }
    }

    pub fn fidelity(&self, target: &PureState) -> Result<f64> {
        match self {
            BranchState::Pure(s) => s.fidelity(target),
            BranchState::Mixed(rho) => rho.fidelity(target),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Target {
    pub label: String,
    pub state: PureState,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Branch {
    /// Port taken at each scattering event; empty for the loss branch.
    pub ports: Vec<Port>,
    /// Detector outcome label; `None` for the loss branch.
    pub outcome: Option<&'static str>,
    pub probability: f64,
    pub state: Option<BranchState>,
    pub target: Option<Target>,
    pub fidelity: Option<f64>,
    pub inferred: Option<SpinValue>,
}

impl Branch {
    pub fn is_loss(&self) -> bool {
        self.outcome.is_none()
    }

    pub fn port_label(&self) -> String {
        self.ports.iter().map(|p| p.symbol()).collect()
    }

    /// `"TR:up"` style label, or `"lost"`.
    pub fn label(&self) -> String {
        match self.outcome {
            Some(o) => format!("{}:{o}", self.port_label()),
            None => "lost".to_string(),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ProtocolResult {
    pub kind: ProtocolKind,
    /// `"state-vector"` or `"density-matrix"`.
    pub engine: &'static str,
    /// Detected branches in enumeration order, then the loss branch.
    pub branches: Vec<Branch>,
    /// Probability that the photon(s) left through the ports.
    pub detection_probability: f64,
    /// Transfer protocols: weight of the ideal operator parts,
    /// (|t₀|²+|r|²)/2 for an unmixed channel. Other protocols: the
    /// detection probability.
    pub success_probability: f64,
    /// QND readout only: probability the inferred value is wrong, given
    /// detection.
    pub readout_error: Option<f64>,
}

impl ProtocolResult {
    pub fn total_probability(&self) -> f64 {
        self.branches.iter().map(|b| b.probability).sum()
    }

    pub fn loss_probability(&self) -> f64 {
        self.branches
            .iter()
            .filter(|b| b.is_loss())
            .map(|b| b.probability)
            .sum()
    }

    pub fn detected(&self) -> impl Iterator<Item = &Branch> {
        self.branches.iter().filter(|b| !b.is_loss())
    }

    /// Distinct port sequences in enumeration order.
    pub fn port_sequences(&self) -> Vec<Vec<Port>> {
        let mut seqs: Vec<Vec<Port>> = Vec::new();
        for b in self.detected() {
            if !seqs.contains(&b.ports) {
                seqs.push(b.ports.clone());
            }
        }
        seqs
    }

    pub fn port_probability(&self, ports: &[Port]) -> f64 {
        self.detected()
            .filter(|b| b.ports == ports)
            .map(|b| b.probability)
            .sum()
    }

    /// Probability-weighted mean fidelity over the detector outcomes of one
    /// port sequence.
    pub fn port_fidelity(&self, ports: &[Port]) -> Option<f64> {
        let (mut w, mut f) = (0.0, 0.0);
        for b in self.detected().filter(|b| b.ports == ports) {
            if let Some(fid) = b.fidelity {
                w += b.probability;
                f += b.probability * fid;
            }
        }
        (w > 0.0).then(|| f / w)
    }

    pub fn branch(&self, ports: &[Port], outcome: &str) -> Option<&Branch> {
        self.detected().find(|b| b.ports == ports && b.outcome == Some(outcome))
    }

    /// Line-oriented `key = value` report, one block per branch.
    pub fn report(&self) -> String {
        let mut out = String::new();
        let p = |x: f64| sci(x.clamp(0.0, 1.0));
        let _ = writeln!(out, "protocol = {}", self.kind);
        let _ = writeln!(out, "engine = {}", self.engine);
        let _ = writeln!(out, "sign_convention = {SIGN_CONVENTION}");
        let _ = writeln!(out, "detection_probability = {}", p(self.detection_probability));
        let _ = writeln!(out, "success_probability = {}", p(self.success_probability));
        let _ = writeln!(out, "loss_probability = {}", p(self.loss_probability()));
        if let Some(e) = self.readout_error {
            let _ = writeln!(out, "readout_error = {}", p(e));
        }
        for ports in self.port_sequences() {
            let label: String = ports.iter().map(|p| p.symbol()).collect();
            let _ = writeln!(out);
            let _ = writeln!(out, "[ports {label}]");
            let _ = writeln!(out, "probability = {}", p(self.port_probability(&ports)));
            if let Some(f) = self.port_fidelity(&ports) {
                let _ = writeln!(out, "mean_fidelity = {}", p(f));
            }
        }
        for (i, b) in self.branches.iter().enumerate() {
            let _ = writeln!(out);
            let _ = writeln!(out, "[branch {i}]");
            let _ = writeln!(out, "label = {}", b.label());
            if !b.is_loss() {
                let _ = writeln!(out, "ports = {}", b.port_label());
                let _ = writeln!(out, "outcome = {}", b.outcome.unwrap_or(""));
            }
            let _ = writeln!(out, "probability = {}", p(b.probability));
            if let Some(t) = &b.target {
                let _ = writeln!(out, "target = {}", t.label);
            }
            if let Some(f) = b.fidelity {
                let _ = writeln!(out, "fidelity = {}", p(f));
            }
            if let Some(v) = b.inferred {
                let _ = writeln!(out, "inferred = {}", v.label());
            }
        }
        out
    }
}

impl fmt::Display for ProtocolResult {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.report())
    }
}

// -- circuits ---------------------------------------------------------------

const PHOTON: &str = "photon";
const SPIN: &str = "spin";
const PHOTON_1: &str = "photon1";
const PHOTON_2: &str = "photon2";

struct Annotation {
    target: Option<Target>,
    inferred: Option<SpinValue>,
}

fn signed_ket(alpha: Complex64, beta: Complex64, outcome: usize) -> Ket {
    [alpha, if outcome == 0 { beta } else { -beta }]
}

fn transfer_target(register: Register, alpha: Complex64, beta: Complex64, outcome: usize) -> Result<Annotation> {
    let sign = if outcome == 0 { '+' } else { '-' };
    let label = format!("alpha|0> {sign} beta|1>");
    Ok(Annotation {
        target: Some(Target {
            label,
            state: PureState::qubit(register, signed_ket(alpha, beta, outcome))?,
        }),
        inferred: None,
    })
}

fn bell_target(first: Register, second: Register, ports: &[Port], outcome: usize) -> Result<Annotation> {
    let bell = BellState::from_parity(ports[0] == ports[1], outcome == 0);
    Ok(Annotation {
        target: Some(Target {
            label: bell.label().to_string(),
            state: bell.state(first, second)?,
        }),
        inferred: None,
    })
}

fn qnd_inference(ports: &[Port], outcome: usize) -> SpinValue {
    // (T, R) → ↑, (T, L) → ↓, (R, L) → ↑, (R, R) → ↓
    match (ports[0], outcome) {
        (Port::Transmitted, 0) | (Port::Reflected, 1) => SpinValue::Up,
        _ => SpinValue::Down,
    }
}

fn assemble<E: Engine>(
    kind: ProtocolKind,
    circuit: &Circuit,
    raw: Vec<RawBranch<E>>,
    success: Option<f64>,
    annotate: impl Fn(&[Port], usize) -> Result<Annotation>,
) -> Result<ProtocolResult> {
    let mut branches = Vec::with_capacity(raw.len() + 1);
    let mut detected = 0.0;
    let mut error_weight = 0.0;
    for RawBranch { ports, outcome, state } in raw {
        let probability = state.weight();
        detected += probability;
        let ann = annotate(&ports, outcome)?;
        let (fidelity, state) = if probability > 0.0 {
            let fid = ann.target.as_ref().map(|t| state.fidelity(&t.state)).transpose()?;
            (fid, Some(state.into_branch_state()?))
        } else {
            (None, None)
        };
        if ann.inferred.is_some() {
            error_weight += probability * (1.0 - fidelity.unwrap_or(1.0));
        }
        branches.push(Branch {
            ports,
            outcome: Some(circuit.outcome_labels[outcome]),
            probability,
            state,
            target: ann.target,
            fidelity,
            inferred: ann.inferred,
        });
    }
    branches.push(Branch {
        ports: Vec::new(),
        outcome: None,
        probability: (1.0 - detected).max(0.0),
        state: None,
        target: None,
        fidelity: None,
        inferred: None,
    });
    let readout_error =
        (kind == ProtocolKind::QndReadout).then(|| if detected > 0.0 { error_weight / detected } else { 0.0 });
    Ok(ProtocolResult {
        kind,
        engine: E::NAME,
        branches,
        detection_probability: detected,
        success_probability: success.unwrap_or(detected),
        readout_error,
    })
}

pub(crate) fn run_photon_to_spin<E: Engine>(
    alpha: Complex64,
    beta: Complex64,
    channel: &EbsChannel,
    lambda: Option<f64>,
) -> Result<ProtocolResult> {
    is_normalized(&[alpha, beta])?;
    let circuit = Circuit {
        initial: vec![
            (Register::photon(PHOTON), [alpha, beta]),
            (Register::spin(SPIN), plus_ket()),
        ],
        steps: vec![Step {
            channel: channel.clone(),
            photon: PHOTON.into(),
            spin: SPIN.into(),
            on_reflect: Some((SPIN.into(), gates::PAULI_X)),
        }],
        // PBS: R → H, L → V, then detect.
        readout_gate: Some((PHOTON.into(), gates::HADAMARD)),
        readout: PHOTON.into(),
        outcome_labels: ["H", "V"],
    };
    let raw = circuit.execute::<E>(lambda)?;
    let success = circuit.ideal_weight::<E>()?;
    assemble(ProtocolKind::PhotonToSpin, &circuit, raw, Some(success), |_, o| {
        transfer_target(Register::spin(SPIN), alpha, beta, o)
    })
}

pub(crate) fn run_spin_to_photon<E: Engine>(
    alpha: Complex64,
    beta: Complex64,
    channel: &EbsChannel,
    lambda: Option<f64>,
) -> Result<ProtocolResult> {
    is_normalized(&[alpha, beta])?;
    let circuit = Circuit {
        initial: vec![
            (Register::photon(PHOTON), plus_ket()),
            (Register::spin(SPIN), [alpha, beta]),
        ],
        steps: vec![Step {
            channel: channel.clone(),
            photon: PHOTON.into(),
            spin: SPIN.into(),
            on_reflect: Some((PHOTON.into(), gates::PAULI_X)),
        }],
        readout_gate: Some((SPIN.into(), gates::HADAMARD)),
        readout: SPIN.into(),
        outcome_labels: ["up", "down"],
    };
    let raw = circuit.execute::<E>(lambda)?;
    let success = circuit.ideal_weight::<E>()?;
    assemble(ProtocolKind::SpinToPhoton, &circuit, raw, Some(success), |_, o| {
        transfer_target(Register::photon(PHOTON), alpha, beta, o)
    })
}

pub(crate) fn run_qnd<E: Engine>(
    spin: Ket,
    channel: &EbsChannel,
    probe: Probe,
    lambda: Option<f64>,
) -> Result<ProtocolResult> {
    is_normalized(&spin)?;
    let circuit = Circuit {
        initial: vec![(Register::photon(PHOTON), probe.ket()), (Register::spin(SPIN), spin)],
        steps: vec![Step {
            channel: channel.clone(),
            photon: PHOTON.into(),
            spin: SPIN.into(),
            on_reflect: None,
        }],
        readout_gate: None,
        readout: PHOTON.into(),
        outcome_labels: ["R", "L"],
    };
    let raw = circuit.execute::<E>(lambda)?;
    assemble(ProtocolKind::QndReadout, &circuit, raw, None, |ports, o| {
        let value = qnd_inference(ports, o);
        Ok(Annotation {
            target: Some(Target {
                label: value.label().to_string(),
                state: PureState::qubit(Register::spin(SPIN), value.ket())?,
            }),
            inferred: Some(value),
        })
    })
}

pub(crate) fn run_two_photon_bell<E: Engine>(
    first: &SpinCavity,
    second: &SpinCavity,
    lambda: Option<f64>,
) -> Result<ProtocolResult> {
    if first.spin != second.spin {
        return Err(Error::SpinRegisterMismatch(first.spin.clone(), second.spin.clone()));
    }
    let spin = first.spin.as_str();
    let circuit = Circuit {
        initial: vec![
            (Register::photon(PHOTON_1), plus_ket()),
            (Register::photon(PHOTON_2), plus_ket()),
            (Register::spin(spin), plus_ket()),
        ],
        steps: vec![
            Step {
                channel: first.channel.clone(),
                photon: PHOTON_1.into(),
                spin: spin.into(),
                on_reflect: None,
            },
            Step {
                channel: second.channel.clone(),
                photon: PHOTON_2.into(),
                spin: spin.into(),
                on_reflect: None,
            },
        ],
        readout_gate: Some((spin.into(), gates::HADAMARD)),
        readout: spin.into(),
        outcome_labels: ["up", "down"],
    };
    let raw = circuit.execute::<E>(lambda)?;
    assemble(ProtocolKind::TwoPhotonBell, &circuit, raw, None, |ports, o| {
        bell_target(Register::photon(PHOTON_1), Register::photon(PHOTON_2), ports, o)
    })
}

pub(crate) fn run_remote<E: Engine>(
    a: &SpinCavity,
    b: &SpinCavity,
    spins: (Ket, Ket),
    lambda: Option<f64>,
) -> Result<ProtocolResult> {
    if a.spin == b.spin {
        return Err(Error::SharedSpinRegister(a.spin.clone()));
    }
    is_normalized(&spins.0)?;
    is_normalized(&spins.1)?;
    let circuit = Circuit {
        initial: vec![
            (Register::photon(PHOTON), plus_ket()),
            (Register::spin(a.spin.as_str()), spins.0),
            (Register::spin(b.spin.as_str()), spins.1),
        ],
        steps: vec![
            Step {
                channel: a.channel.clone(),
                photon: PHOTON.into(),
                spin: a.spin.clone(),
                on_reflect: None,
            },
            Step {
                channel: b.channel.clone(),
                photon: PHOTON.into(),
                spin: b.spin.clone(),
                on_reflect: None,
            },
        ],
        readout_gate: Some((PHOTON.into(), gates::HADAMARD)),
        readout: PHOTON.into(),
        outcome_labels: ["H", "V"],
    };
    let raw = circuit.execute::<E>(lambda)?;
    assemble(ProtocolKind::RemoteEntanglement, &circuit, raw, None, |ports, o| {
        bell_target(
            Register::spin(a.spin.as_str()),
            Register::spin(b.spin.as_str()),
            ports,
            o,
        )
    })
}

// -- public state-vector entry points --------------------------------------

/// Transfer α|R⟩ + β|L⟩ onto a spin prepared in (|↑⟩+|↓⟩)/√2.
///
/// Each detected branch carries the conditioned spin state and its fidelity
/// to α|↑⟩ ± β|↓⟩.
pub fn photon_to_spin_transfer(alpha: Complex64, beta: Complex64, channel: &EbsChannel) -> Result<ProtocolResult> {
    run_photon_to_spin::<PureState>(alpha, beta, channel, None)
}

/// Transfer α|↑⟩ + β|↓⟩ onto a photon prepared in (|R⟩+|L⟩)/√2, heralded by
/// a spin Hadamard and QND spin detection.
pub fn spin_to_photon_transfer(alpha: Complex64, beta: Complex64, channel: &EbsChannel) -> Result<ProtocolResult> {
    run_spin_to_photon::<PureState>(alpha, beta, channel, None)
}

/// Single-shot QND readout of `spin` with a linearly polarized probe.
pub fn qnd_spin_readout(spin: Ket, channel: &EbsChannel, probe: Probe) -> Result<ProtocolResult> {
    run_qnd::<PureState>(spin, channel, probe, None)
}

/// Entangle two photons by scattering both off the same spin and measuring
/// the spin out. Both cavities must name the same spin register.
pub fn two_photon_bell(first: &SpinCavity, second: &SpinCavity) -> Result<ProtocolResult> {
    run_two_photon_bell::<PureState>(first, second, None)
}

/// Entangle two remote spins with one photon scattered off cavity `a` and
/// then cavity `b`, followed by an H/V photon measurement.
pub fn remote_spin_entanglement(a: &SpinCavity, b: &SpinCavity) -> Result<ProtocolResult> {
    run_remote::<PureState>(a, b, (plus_ket(), plus_ket()), None)
}

/// [`remote_spin_entanglement`] with explicit initial spin states.
pub fn remote_spin_entanglement_from(
    a: &SpinCavity,
    b: &SpinCavity,
    spin_a: Ket,
    spin_b: Ket,
) -> Result<ProtocolResult> {
    run_remote::<PureState>(a, b, (spin_a, spin_b), None)
}

#[cfg(test)]
mod tests;
