// Copyright 2026 The EBS Simulator Authors
// SPDX-License-Identifier: Apache-2.0

//! Entanglement beam splitter built from a charged quantum-dot spin in a
//! double-sided optical microcavity.
//!
//! The crate is layered bottom-up:
//!
//! * [`scattering`] evaluates the steady-state transmission and reflection
//!   amplitudes of the coupled ("hot") and uncoupled ("cold") cavity.
//! * [`quantum`] is a small dense state engine over labeled photon-polarization
//!   and spin registers, with both state-vector and density-matrix paths.
//! * [`channel`] turns amplitudes into spin-conditional transmission and
//!   reflection operators and applies them as a port-resolved map with loss.
//! * [`protocols`] runs the end-to-end procedures (state transfer, QND
//!   readout, two-photon Bell creation, remote spin entanglement).
//! * [`cli`] drives sweeps and protocol runs from flat config files.
//!
//! All rates and detunings are in units of the cavity decay rate κ.

pub mod channel;
pub mod cli;
pub mod error;
mod format;
pub mod protocols;
pub mod quantum;
pub mod scattering;

pub use num_complex::Complex64;

pub use channel::{
    amplitude_fidelities, apply_dephasing, ChannelMode, DephasingParams, EbsChannel, FidelityReport, Port, PortOutcome,
};
pub use error::{Error, Result};
pub use protocols::{ProtocolKind, ProtocolResult};
pub use quantum::{Basis, BellState, DensityMatrix, PureState, Register, RegisterKind};
pub use scattering::{CavityParams, ScatterAmplitudes, SpectrumTable};
