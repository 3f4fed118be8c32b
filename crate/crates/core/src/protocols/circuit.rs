// Copyright 2026 The EBS Simulator Authors
// SPDX-License-Identifier: Apache-2.0

//! Protocol circuits and the branch-enumerating executor.
//!
//! A circuit is a product-state preparation, a sequence of scattering events
//! (each split into transmitted and reflected branches), one readout gate and
//! a computational-basis readout of one register. The executor is generic
//! over the state representation, so the same circuit runs on state vectors
//! and on density matrices.

use num_complex::Complex64;

use crate::channel::{EbsChannel, Port};
use crate::error::{Error, Result};
use crate::quantum::{basis_ket, DensityMatrix, Gate, Ket, PureState, Register};

use super::BranchState;

pub(crate) struct Step {
    pub channel: EbsChannel,
    pub photon: String,
    pub spin: String,
    /// Correction applied to reflected branches only.
    pub on_reflect: Option<(String, Gate)>,
}

pub(crate) struct Circuit {
    pub initial: Vec<(Register, Ket)>,
    pub steps: Vec<Step>,
    pub readout_gate: Option<(String, Gate)>,
    pub readout: String,
    pub outcome_labels: [&'static str; 2],
}

pub(crate) struct RawBranch<S> {
    pub ports: Vec<Port>,
    pub outcome: usize,
    pub state: S,
}

/// State operations the executor needs.
pub(crate) trait Engine: Sized + Clone {
    const NAME: &'static str;

    fn prepare(parts: &[(Register, Ket)]) -> Result<Self>;
    fn port(&self, channel: &EbsChannel, photon: &str, spin: &str, port: Port) -> Result<Self>;
    fn ideal_port(&self, channel: &EbsChannel, photon: &str, spin: &str, port: Port) -> Result<Self>;
    fn gate(&self, register: &str, gate: &Gate) -> Result<Self>;
    fn condition(&self, register: &str, ket: &Ket) -> Result<Self>;
    fn dephase(&self, register: &str, lambda: f64) -> Result<Self>;
    fn weight(&self) -> f64;
    fn fidelity(&self, target: &PureState) -> Result<f64>;
    fn into_branch_state(self) -> Result<BranchState>;
}

impl Engine for PureState {
    const NAME: &'static str = "state-vector";

    fn prepare(parts: &[(Register, Ket)]) -> Result<Self> {
        PureState::product(parts)
    }

    fn port(&self, channel: &EbsChannel, photon: &str, spin: &str, port: Port) -> Result<Self> {
        channel.apply_port(self, photon, spin, port)
    }

    fn ideal_port(&self, channel: &EbsChannel, photon: &str, spin: &str, port: Port) -> Result<Self> {
        channel.apply_ideal_part(self, photon, spin, port)
    }

    fn gate(&self, register: &str, gate: &Gate) -> Result<Self> {
        self.apply_gate(register, gate)
    }

    fn condition(&self, register: &str, ket: &Ket) -> Result<Self> {
        PureState::condition(self, register, ket)
    }

    fn dephase(&self, _register: &str, lambda: f64) -> Result<Self> {
        if lambda == 1.0 {
            Ok(self.clone())
        } else {
            Err(Error::InvalidParameter {
                name: "dephasing",
                reason: "a pure state cannot carry dephasing; use the density-matrix engine".into(),
            })
        }
    }

    fn weight(&self) -> f64 {
        self.norm_sqr()
    }

    fn fidelity(&self, target: &PureState) -> Result<f64> {
        PureState::fidelity(self, target)
    }

    fn into_branch_state(self) -> Result<BranchState> {
        Ok(BranchState::Pure(self.normalized()?))
    }
}

impl Engine for DensityMatrix {
    const NAME: &'static str = "density-matrix";

    fn prepare(parts: &[(Register, Ket)]) -> Result<Self> {
        // Built as a Kronecker product of single-register projectors.
        let mut parts = parts.iter();
        let (reg, ket) = parts
            .next()
            .ok_or(Error::EmptyInput("product state needs at least one register"))?;
        let mut rho = PureState::qubit(reg.clone(), *ket)?.to_density();
        for (reg, ket) in parts {
            let next = PureState::qubit(reg.clone(), *ket)?.to_density();
            let mut registers = rho.registers().to_vec();
            registers.extend(next.registers().iter().cloned());
            rho = DensityMatrix::new(registers, rho.matrix().kronecker(next.matrix()))?;
        }
        Ok(rho)
    }

    fn port(&self, channel: &EbsChannel, photon: &str, spin: &str, port: Port) -> Result<Self> {
        channel.apply_port_density(self, photon, spin, port)
    }

    fn ideal_port(&self, channel: &EbsChannel, photon: &str, spin: &str, port: Port) -> Result<Self> {
        channel.apply_ideal_part_density(self, photon, spin, port)
    }

    fn gate(&self, register: &str, gate: &Gate) -> Result<Self> {
        self.apply_gate(register, gate)
    }

    fn condition(&self, register: &str, ket: &Ket) -> Result<Self> {
        DensityMatrix::condition(self, register, ket)
    }

    fn dephase(&self, register: &str, lambda: f64) -> Result<Self> {
        DensityMatrix::dephase(self, register, lambda)
    }

    fn weight(&self) -> f64 {
        self.trace()
    }

    fn fidelity(&self, target: &PureState) -> Result<f64> {
        DensityMatrix::fidelity(self, target)
    }

    fn into_branch_state(self) -> Result<BranchState> {
        Ok(BranchState::Mixed(self.normalized()?))
    }
}

impl Circuit {
    /// Enumerate every (port sequence, readout outcome) branch. `lambda`
    /// dephases the scattering spin after each event.
    pub fn execute<E: Engine>(&self, lambda: Option<f64>) -> Result<Vec<RawBranch<E>>> {
        let mut branches = vec![(Vec::new(), E::prepare(&self.initial)?)];
        for step in &self.steps {
            let mut next = Vec::with_capacity(branches.len() * 2);
            for (ports, state) in &branches {
                for port in Port::BOTH {
                    let mut s = state.port(&step.channel, &step.photon, &step.spin, port)?;
                    if let Some(l) = lambda {
                        s = s.dephase(&step.spin, l)?;
                    }
                    if port == Port::Reflected {
                        if let Some((reg, gate)) = &step.on_reflect {
                            s = s.gate(reg, gate)?;
                        }
                    }
                    let mut p = ports.clone();
                    p.push(port);
                    next.push((p, s));
                }
            }
            branches = next;
        }
        let mut out = Vec::with_capacity(branches.len() * 2);
        for (ports, state) in branches {
            let state = match &self.readout_gate {
                Some((reg, gate)) => state.gate(reg, gate)?,
                None => state,
            };
            for outcome in 0..2 {
                out.push(RawBranch {
                    ports: ports.clone(),
                    outcome,
                    state: state.condition(&self.readout, &basis_ket(outcome))?,
                });
            }
        }
        Ok(out)
    }

    /// Probability carried by the ideal parts of the first scattering event.
    pub fn ideal_weight<E: Engine>(&self) -> Result<f64> {
        let step = self
            .steps
            .first()
            .ok_or(Error::EmptyInput("circuit has no scattering"))?;
        let initial = E::prepare(&self.initial)?;
        Port::BOTH.iter().try_fold(0.0, |acc, &port| {
            Ok(acc
                + initial
                    .ideal_port(&step.channel, &step.photon, &step.spin, port)?
                    .weight())
        })
    }
}

pub(crate) fn is_normalized(ket: &Ket) -> Result<()> {
    let n2: f64 = ket.iter().map(Complex64::norm_sqr).sum();
    if (n2 - 1.0).abs() > 1e-10 {
        Err(Error::Unnormalized(n2))
    } else {
        Ok(())
    }
}
