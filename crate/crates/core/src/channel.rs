// Copyright 2026 The EBS Simulator Authors
// SPDX-License-Identifier: Apache-2.0

//! Spin-conditional transmission and reflection operators.
//!
//! An L photon couples to the trion only when the spin is ↑ and an R photon
//! only when it is ↓. The combinations R↑ and L↓ therefore see the cold
//! cavity (t₀, r₀) and R↓, L↑ see the coupled cavity (t, r):
//!
//! ```text
//! t̂(ω) = t₀ (|R↑⟩⟨R↑| + |L↓⟩⟨L↓|) + t (|R↓⟩⟨R↓| + |L↑⟩⟨L↑|)
//! r̂(ω) = r₀ (|R↑⟩⟨R↑| + |L↓⟩⟨L↓|) + r (|R↓⟩⟨R↓| + |L↑⟩⟨L↑|)
//! ```
//!
//! Operators are stored as diagonals over (R↑, R↓, L↑, L↓). Their action is
//! sub-unitary; whatever is neither transmitted nor reflected leaves through
//! an explicit loss port.

use std::fmt;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::quantum::{DensityMatrix, PairOp, PureState, RegisterKind};
use crate::scattering::{coupled_amplitudes, CavityParams, ScatterAmplitudes};

const ZERO: Complex64 = Complex64::new(0.0, 0.0);
const ONE: Complex64 = Complex64::new(1.0, 0.0);

/// Basis labels for the fixed (photon, spin) ordering.
pub const PAIR_BASIS: [&str; 4] = ["R,up", "R,down", "L,up", "L,down"];

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Port {
    Transmitted,
    Reflected,
}

impl Port {
    pub const BOTH: [Port; 2] = [Port::Transmitted, Port::Reflected];

    pub fn symbol(self) -> &'static str {
        match self {
            Port::Transmitted => "T",
            Port::Reflected => "R",
        }
    }
}

impl fmt::Display for Port {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.symbol())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ChannelMode {
    /// Both cold and coupled contributions in each port.
    Full,
    /// Transmission keeps only the cold contribution and reflection only the
    /// coupled one.
    Ideal,
}

/// The scattering map of one spin-cavity at one probe frequency.
#[derive(Debug, Clone, PartialEq)]
pub struct EbsChannel {
    params: Option<CavityParams>,
    amps: ScatterAmplitudes,
    mixing: f64,
    mode: ChannelMode,
    transmission: [Complex64; 4],
    reflection: [Complex64; 4],
}

impl EbsChannel {
    /// Build the channel at `detuning` with hole-mixing amplitude `mixing`.
    pub fn build(params: &CavityParams, detuning: f64, mixing: f64, mode: ChannelMode) -> Result<Self> {
        check_mixing(mixing)?;
        let amps = ScatterAmplitudes::evaluate(params, detuning)?;
        // Mixing partitions the coupling: nominally blocked combinations see
        // ε·g, allowed ones g·√(1−ε²).
        let blocked = params.with_g(mixing * params.g);
        let allowed = params.with_g(params.g * (1.0 - mixing * mixing).sqrt());
        let (t_u, r_u) = coupled_amplitudes(&blocked, detuning)?;
        let (t_c, r_c) = coupled_amplitudes(&allowed, detuning)?;
        let (transmission, reflection) = match mode {
            ChannelMode::Full => ([t_u, t_c, t_c, t_u], [r_u, r_c, r_c, r_u]),
            ChannelMode::Ideal => ([t_u, ZERO, ZERO, t_u], [ZERO, r_c, r_c, ZERO]),
        };
        Ok(Self {
            params: Some(*params),
            amps,
            mixing,
            mode,
            transmission,
            reflection,
        })
    }

    /// The lossless splitter: t̂ = |R↑⟩⟨R↑| + |L↓⟩⟨L↓|, r̂ = |R↓⟩⟨R↓| + |L↑⟩⟨L↑|.
    pub fn perfect() -> Self {
        Self {
            params: None,
            amps: ScatterAmplitudes {
                t: ZERO,
                r: ONE,
                t0: ONE,
                r0: ZERO,
                detuning: 0.0,
            },
            mixing: 0.0,
            mode: ChannelMode::Ideal,
            transmission: [ONE, ZERO, ZERO, ONE],
            reflection: [ZERO, ONE, ONE, ZERO],
        }
    }

    /// Rebuild with a different hole-mixing amplitude.
    pub fn with_hole_mixing(&self, mixing: f64) -> Result<Self> {
        check_mixing(mixing)?;
        if mixing == self.mixing {
            return Ok(self.clone());
        }
        let params = self.params.ok_or(Error::NoCavityParams)?;
        Self::build(&params, self.amps.detuning, mixing, self.mode)
    }

    pub fn params(&self) -> Option<&CavityParams> {
        self.params.as_ref()
    }

    /// Unmixed amplitudes at this channel's detuning.
    pub fn amplitudes(&self) -> &ScatterAmplitudes {
        &self.amps
    }

    pub fn mixing(&self) -> f64 {
        self.mixing
    }

    pub fn mode(&self) -> ChannelMode {
        self.mode
    }

    pub fn is_perfect(&self) -> bool {
        self.params.is_none()
    }

    /// Operator diagonal over (R↑, R↓, L↑, L↓).
    pub fn diagonal(&self, port: Port) -> [Complex64; 4] {
        match port {
            Port::Transmitted => self.transmission,
            Port::Reflected => self.reflection,
        }
    }

    /// The part of the port operator that produces the target entangled
    /// state: the cold entries of t̂ and the coupled entries of r̂.
    pub fn ideal_diagonal(&self, port: Port) -> [Complex64; 4] {
        let d = self.diagonal(port);
        match port {
            Port::Transmitted => [d[0], ZERO, ZERO, d[3]],
            Port::Reflected => [ZERO, d[1], d[2], ZERO],
        }
    }

    pub fn operator(&self, port: Port) -> PairOp {
        diagonal_op(&self.diagonal(port))
    }

    /// Every matrix element of a port operator as `(in, out, re, im)`.
    pub fn export_rows(&self, port: Port) -> Vec<OperatorEntry> {
        let op = self.operator(port);
        let mut rows = Vec::with_capacity(16);
        for (input, in_label) in PAIR_BASIS.iter().enumerate() {
            for (output, out_label) in PAIR_BASIS.iter().enumerate() {
                rows.push(OperatorEntry {
                    input: in_label,
                    output: out_label,
                    value: op[output][input],
                });
            }
        }
        rows
    }

    /// Effective amplitude fidelities (F^t, F^r) including hole mixing.
    pub fn fidelities(&self) -> Result<FidelityReport> {
        let t = self.transmission;
        let r = self.reflection;
        Ok(FidelityReport {
            detuning: self.amps.detuning,
            f_t: amplitude_ratio(t[0], t[1])?,
            f_r: amplitude_ratio(r[1], r[0])?,
        })
    }

    /// Unnormalized branch `port̂ |ψ⟩` on the (photon, spin) pair.
    pub fn apply_port(&self, state: &PureState, photon: &str, spin: &str, port: Port) -> Result<PureState> {
        check_kinds(state.register(photon)?.kind, state.register(spin)?.kind, photon, spin)?;
        state.apply_pair(photon, spin, &self.operator(port))
    }

    /// Unnormalized branch with only the ideal part of the port operator.
    pub fn apply_ideal_part(&self, state: &PureState, photon: &str, spin: &str, port: Port) -> Result<PureState> {
        check_kinds(state.register(photon)?.kind, state.register(spin)?.kind, photon, spin)?;
        state.apply_pair(photon, spin, &diagonal_op(&self.ideal_diagonal(port)))
    }

    /// `K ρ K†` for one port.
    pub fn apply_port_density(
        &self,
        rho: &DensityMatrix,
        photon: &str,
        spin: &str,
        port: Port,
    ) -> Result<DensityMatrix> {
        let kind = |name: &str| {
            rho.registers()
                .iter()
                .find(|r| r.name == name)
                .map(|r| r.kind)
                .ok_or_else(|| Error::UnknownRegister(name.to_string()))
        };
        check_kinds(kind(photon)?, kind(spin)?, photon, spin)?;
        rho.apply_pair(photon, spin, &self.operator(port))
    }

    pub fn apply_ideal_part_density(
        &self,
        rho: &DensityMatrix,
        photon: &str,
        spin: &str,
        port: Port,
    ) -> Result<DensityMatrix> {
        rho.apply_pair(photon, spin, &diagonal_op(&self.ideal_diagonal(port)))
    }

    /// Split a state into transmitted, reflected and lost parts.
    pub fn scatter(&self, state: &PureState, photon: &str, spin: &str) -> Result<Vec<PortOutcome<PureState>>> {
        let mut outcomes = Vec::with_capacity(3);
        let mut captured = 0.0;
        for port in Port::BOTH {
            let branch = self.apply_port(state, photon, spin, port)?;
            let p = branch.norm_sqr();
            captured += p;
            outcomes.push(PortOutcome {
                port: Some(port),
                probability: p,
                state: (p > 0.0).then(|| branch.normalized()).transpose()?,
            });
        }
        outcomes.push(PortOutcome {
            port: None,
            probability: (state.norm_sqr() - captured).max(0.0),
            state: None,
        });
        Ok(outcomes)
    }

    /// Density-matrix counterpart of [`scatter`](Self::scatter).
    pub fn scatter_density(
        &self,
        rho: &DensityMatrix,
        photon: &str,
        spin: &str,
    ) -> Result<Vec<PortOutcome<DensityMatrix>>> {
        let mut outcomes = Vec::with_capacity(3);
        let mut captured = 0.0;
        for port in Port::BOTH {
            let branch = self.apply_port_density(rho, photon, spin, port)?;
            let p = branch.trace();
            captured += p;
            outcomes.push(PortOutcome {
                port: Some(port),
                probability: p,
                state: (p > 0.0).then(|| branch.normalized()).transpose()?,
            });
        }
        outcomes.push(PortOutcome {
            port: None,
            probability: (rho.trace() - captured).max(0.0),
            state: None,
        });
        Ok(outcomes)
    }
}

/// Build a channel; free-function form of [`EbsChannel::build`].
pub fn build_channel(params: &CavityParams, detuning: f64, mixing: f64, mode: ChannelMode) -> Result<EbsChannel> {
    EbsChannel::build(params, detuning, mixing, mode)
}

/// Rebuild `channel` with hole-mixing amplitude `mixing`.
pub fn apply_hole_mixing(channel: &EbsChannel, mixing: f64) -> Result<EbsChannel> {
    channel.with_hole_mixing(mixing)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OperatorEntry {
    pub input: &'static str,
    pub output: &'static str,
    pub value: Complex64,
}

/// One exit port of a scattering event. `port == None` is the loss port,
/// which carries probability but no state.
#[derive(Debug, Clone, PartialEq)]
pub struct PortOutcome<S> {
    pub port: Option<Port>,
    pub probability: f64,
    pub state: Option<S>,
}

impl<S> PortOutcome<S> {
    pub fn is_loss(&self) -> bool {
        self.port.is_none()
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FidelityReport {
    pub detuning: f64,
    pub f_t: f64,
    pub f_r: f64,
}

/// F^t = |t₀|/√(|t₀|²+|t|²), F^r = |r|/√(|r₀|²+|r|²).
pub fn amplitude_fidelities(params: &CavityParams, detuning: f64) -> Result<FidelityReport> {
    let a = ScatterAmplitudes::evaluate(params, detuning)?;
    Ok(FidelityReport {
        detuning,
        f_t: amplitude_ratio(a.t0, a.t)?,
        f_r: amplitude_ratio(a.r, a.r0)?,
    })
}

fn amplitude_ratio(wanted: Complex64, unwanted: Complex64) -> Result<f64> {
    let denom = (wanted.norm_sqr() + unwanted.norm_sqr()).sqrt();
    if denom == 0.0 {
        return Err(Error::UndefinedFidelity);
    }
    Ok((wanted.norm() / denom).min(1.0))
}

/// Cavity photon lifetime τ and exciton coherence time T₂, same unit.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DephasingParams {
    pub tau: f64,
    pub t2: f64,
}

impl DephasingParams {
    /// `t2` may be `f64::INFINITY` (no dephasing).
    pub fn new(tau: f64, t2: f64) -> Result<Self> {
        if !(tau.is_finite() && tau >= 0.0) {
            return Err(Error::InvalidParameter {
                name: "tau",
                reason: format!("must be finite and >= 0, got {tau}"),
            });
        }
        if t2.is_nan() || t2 <= 0.0 {
            return Err(Error::InvalidParameter {
                name: "t2",
                reason: format!("must be > 0, got {t2}"),
            });
        }
        Ok(Self { tau, t2 })
    }

    /// Dephasing expressed through the ratio τ/T₂ alone.
    pub fn from_ratio(tau_over_t2: f64) -> Result<Self> {
        Self::new(tau_over_t2, 1.0)
    }

    /// Coherence factor λ = exp(−τ/T₂).
    pub fn coherence_factor(&self) -> f64 {
        (-self.tau / self.t2).exp()
    }
}

/// Phase damping on `register`: coherences between its two values are
/// multiplied by exp(−τ/T₂). Trace preserving.
pub fn apply_dephasing(rho: &DensityMatrix, register: &str, dephasing: &DephasingParams) -> Result<DensityMatrix> {
    rho.dephase(register, dephasing.coherence_factor())
}

fn diagonal_op(d: &[Complex64; 4]) -> PairOp {
    let mut op = [[ZERO; 4]; 4];
    for (i, &v) in d.iter().enumerate() {
        op[i][i] = v;
    }
    op
}

fn check_mixing(mixing: f64) -> Result<()> {
    if (0.0..=1.0).contains(&mixing) {
        Ok(())
    } else {
        Err(Error::MixingOutOfRange(mixing))
    }
}

fn check_kinds(photon_kind: RegisterKind, spin_kind: RegisterKind, photon: &str, spin: &str) -> Result<()> {
    if photon_kind != RegisterKind::Photon {
        return Err(Error::RegisterKind {
            name: photon.to_string(),
            expected: RegisterKind::Photon.name(),
        });
    }
    if spin_kind != RegisterKind::Spin {
        return Err(Error::RegisterKind {
            name: spin.to_string(),
            expected: RegisterKind::Spin.name(),
        });
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use std::f64::consts::FRAC_1_SQRT_2;

    use super::*;
    use crate::quantum::{basis_ket, plus_ket, BellState, Register};

    fn product(photon: [Complex64; 2], spin: [Complex64; 2]) -> PureState {
        PureState::product(&[(Register::photon("p"), photon), (Register::spin("s"), spin)]).unwrap()
    }

    fn working_point() -> EbsChannel {
        EbsChannel::build(&CavityParams::default(), 0.0, 0.0, ChannelMode::Full).unwrap()
    }

    #[test]
    fn full_mode_diagonal_at_working_point() {
        let ch = working_point();
        let t = Complex64::new(-0.008605851979345956, 0.0);
        let expect = [Complex64::new(-1.0, 0.0), t, t, Complex64::new(-1.0, 0.0)];
        for (a, b) in ch.diagonal(Port::Transmitted).iter().zip(expect) {
            assert!((a - b).norm() < 1e-15);
        }
        let r = ch.diagonal(Port::Reflected);
        assert_eq!(r[0], ZERO);
        assert!((r[1] - (1.0 + t)).norm() < 1e-15);
    }

    #[test]
    fn ideal_mode_keeps_only_the_wanted_entries() {
        let ch = EbsChannel::build(&CavityParams::default(), 0.0, 0.0, ChannelMode::Ideal).unwrap();
        let a = ch.amplitudes();
        assert_eq!(ch.diagonal(Port::Transmitted), [a.t0, ZERO, ZERO, a.t0]);
        assert_eq!(ch.diagonal(Port::Reflected), [ZERO, a.r, a.r, ZERO]);
    }

    #[test]
    fn perfect_channel_is_the_projector_pair() {
        let ch = EbsChannel::perfect();
        assert_eq!(ch.diagonal(Port::Transmitted), [ONE, ZERO, ZERO, ONE]);
        assert_eq!(ch.diagonal(Port::Reflected), [ZERO, ONE, ONE, ZERO]);
    }

    #[test]
    fn cold_cavity_channel_has_no_spin_dependence() {
        let ch = EbsChannel::build(&CavityParams::resonant(0.0, 0.1, 0.0), 0.3, 0.0, ChannelMode::Full).unwrap();
        let d = ch.diagonal(Port::Transmitted);
        assert!(d.iter().all(|&x| x == d[0]));
        let d = ch.diagonal(Port::Reflected);
        assert!(d.iter().all(|&x| x == d[0]));
    }

    #[test]
    fn mixing_is_range_checked() {
        let p = CavityParams::default();
        assert_eq!(
            EbsChannel::build(&p, 0.0, 1.5, ChannelMode::Full),
            Err(Error::MixingOutOfRange(1.5))
        );
        assert!(working_point().with_hole_mixing(-0.1).is_err());
        assert_eq!(EbsChannel::perfect().with_hole_mixing(0.1), Err(Error::NoCavityParams));
    }

    #[test]
    fn zero_mixing_leaves_channel_unchanged() {
        let ch = working_point();
        assert_eq!(ch.with_hole_mixing(0.0).unwrap(), ch);
        let mixed = ch.with_hole_mixing(0.3).unwrap();
        assert_eq!(mixed.with_hole_mixing(0.0).unwrap(), ch);
    }

    #[test]
    fn symmetric_mixing_erases_spin_selectivity() {
        let ch = working_point().with_hole_mixing(FRAC_1_SQRT_2).unwrap();
        for port in Port::BOTH {
            let d = ch.diagonal(port);
            assert!(d.iter().all(|x| (x - d[0]).norm() < 1e-12));
        }
        // Scattered branches stay product states.
        let input = product(plus_ket(), plus_ket());
        for out in ch.scatter(&input, "p", "s").unwrap() {
            if let Some(state) = out.state {
                let spin = state.to_density().partial_trace(&["p"]).unwrap();
                let purity = (spin.matrix() * spin.matrix()).trace().re;
                assert!((purity - 1.0).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn mixing_regression_anchor() {
        // Blocked combinations see ε·g = 0.24, allowed ones g·√0.99.
        let ch = working_point().with_hole_mixing(0.1).unwrap();
        let f = ch.fidelities().unwrap();
        assert!((f.f_t - 0.9998251029658433).abs() < 1e-12);
        assert!((f.f_r - 0.8799018060498929).abs() < 1e-12);
        let base = working_point().fidelities().unwrap();
        assert!(f.f_t < base.f_t);
    }

    #[test]
    fn ideal_split_of_product_state() {
        let out = EbsChannel::perfect()
            .scatter(&product(plus_ket(), plus_ket()), "p", "s")
            .unwrap();
        let phi = BellState::PhiPlus
            .state(Register::photon("p"), Register::spin("s"))
            .unwrap();
        let psi = BellState::PsiPlus
            .state(Register::photon("p"), Register::spin("s"))
            .unwrap();
        assert_eq!(out[0].port, Some(Port::Transmitted));
        assert!((out[0].probability - 0.5).abs() < 1e-12);
        assert!((out[0].state.as_ref().unwrap().fidelity(&phi).unwrap() - 1.0).abs() < 1e-12);
        assert!((out[1].probability - 0.5).abs() < 1e-12);
        assert!((out[1].state.as_ref().unwrap().fidelity(&psi).unwrap() - 1.0).abs() < 1e-12);
        assert!(out[2].is_loss());
        assert!(out[2].probability.abs() < 1e-12);
    }

    #[test]
    fn eigenbranch_passes_unchanged() {
        let input = product(basis_ket(0), basis_ket(0));
        let out = EbsChannel::perfect().scatter(&input, "p", "s").unwrap();
        assert_eq!(out[0].probability, 1.0);
        assert_eq!(out[0].state.as_ref().unwrap(), &input);
        assert_eq!(out[1].probability, 0.0);
        assert!(out[1].state.is_none());
    }

    #[test]
    fn lossy_port_probabilities() {
        // |L↑⟩ sees the coupled cavity.
        let out = working_point()
            .scatter(&product(basis_ket(1), basis_ket(0)), "p", "s")
            .unwrap();
        assert!((out[0].probability - 7.406068829041271e-05).abs() < 1e-15);
        assert!((out[1].probability - 0.9828623567295985).abs() < 1e-13);
        assert!((out[2].probability - 0.017063582582111048).abs() < 1e-13);
    }

    #[test]
    fn kind_mismatch_is_rejected() {
        let input = product(plus_ket(), plus_ket());
        assert!(matches!(
            working_point().scatter(&input, "s", "p"),
            Err(Error::RegisterKind { .. })
        ));
    }

    #[test]
    fn amplitude_fidelity_values() {
        let f = amplitude_fidelities(&CavityParams::default(), 0.0).unwrap();
        assert!((f.f_t - 0.9999629717125974).abs() < 1e-12);
        assert_eq!(f.f_r, 1.0);
        let leaky = amplitude_fidelities(&CavityParams::resonant(2.4, 0.1, 1.0), 0.0).unwrap();
        assert!((leaky.f_t - 0.9999174043830432).abs() < 1e-12);
        assert!((leaky.f_r - 0.9478608743121286).abs() < 1e-12);
        for g in [0.1, 0.5, 1.0, 3.0, 10.0] {
            let f = amplitude_fidelities(&CavityParams::resonant(g, 0.1, 0.0), 0.0).unwrap();
            assert_eq!(f.f_r, 1.0);
        }
    }

    #[test]
    fn undefined_fidelity() {
        assert_eq!(amplitude_ratio(ZERO, ZERO), Err(Error::UndefinedFidelity));
    }

    #[test]
    fn export_rows_cover_the_matrix() {
        let rows = working_point().export_rows(Port::Transmitted);
        assert_eq!(rows.len(), 16);
        let diag: Vec<_> = rows.iter().filter(|e| e.input == e.output).collect();
        assert_eq!(diag.len(), 4);
        assert_eq!(diag[0].input, "R,up");
        assert_eq!(diag[0].value, Complex64::new(-1.0, 0.0));
        assert!(rows.iter().filter(|e| e.input != e.output).all(|e| e.value == ZERO));
    }

    #[test]
    fn dephasing_params() {
        assert!(DephasingParams::new(-1.0, 1.0).is_err());
        assert!(DephasingParams::new(1.0, 0.0).is_err());
        let inf = DephasingParams::new(3.0, f64::INFINITY).unwrap();
        assert_eq!(inf.coherence_factor(), 1.0);
        let half = DephasingParams::from_ratio(std::f64::consts::LN_2).unwrap();
        assert!((half.coherence_factor() - 0.5).abs() < 1e-15);
    }

    #[test]
    fn dephasing_identity_and_halving() {
        let rho = BellState::PhiPlus
            .state(Register::photon("a"), Register::photon("b"))
            .unwrap()
            .to_density();
        let same = apply_dephasing(&rho, "a", &DephasingParams::new(1.0, f64::INFINITY).unwrap()).unwrap();
        assert!((same.matrix() - rho.matrix()).norm() < 1e-15);
        let half = apply_dephasing(&rho, "a", &DephasingParams::from_ratio(std::f64::consts::LN_2).unwrap()).unwrap();
        assert!((half.matrix()[(0, 3)].re - 0.25).abs() < 1e-15);
        let f = apply_dephasing(&rho, "b", &DephasingParams::from_ratio(0.1).unwrap())
            .unwrap()
            .fidelity(
                &BellState::PhiPlus
                    .state(Register::photon("a"), Register::photon("b"))
                    .unwrap(),
            )
            .unwrap();
        assert!((f - 0.9524187090179798).abs() < 1e-12);
    }
}
