// Copyright 2026 The EBS Simulator Authors
// SPDX-License-Identifier: Apache-2.0

//! The protocols as density-matrix channel compositions.
//!
//! Every port operator, gate and detector projection is lifted to the full
//! register space and applied as `K ρ K†`. With `dephasing` set, the spin
//! that took part in a scattering event is phase-damped by exp(−τ/T₂)
//! right after it.

use num_complex::Complex64;

use super::{
    run_photon_to_spin, run_qnd, run_remote, run_spin_to_photon, run_two_photon_bell, Probe, ProtocolResult, SpinCavity,
};
use crate::channel::{DephasingParams, EbsChannel};
use crate::error::Result;
use crate::quantum::{plus_ket, DensityMatrix, Ket};

fn lambda(dephasing: Option<&DephasingParams>) -> Option<f64> {
    dephasing.map(DephasingParams::coherence_factor)
}

pub fn photon_to_spin_transfer(
    alpha: Complex64,
    beta: Complex64,
    channel: &EbsChannel,
    dephasing: Option<&DephasingParams>,
) -> Result<ProtocolResult> {
    run_photon_to_spin::<DensityMatrix>(alpha, beta, channel, lambda(dephasing))
}

pub fn spin_to_photon_transfer(
    alpha: Complex64,
    beta: Complex64,
    channel: &EbsChannel,
    dephasing: Option<&DephasingParams>,
) -> Result<ProtocolResult> {
    run_spin_to_photon::<DensityMatrix>(alpha, beta, channel, lambda(dephasing))
}

pub fn qnd_spin_readout(
    spin: Ket,
    channel: &EbsChannel,
    probe: Probe,
    dephasing: Option<&DephasingParams>,
) -> Result<ProtocolResult> {
    run_qnd::<DensityMatrix>(spin, channel, probe, lambda(dephasing))
}

pub fn two_photon_bell(
    first: &SpinCavity,
    second: &SpinCavity,
    dephasing: Option<&DephasingParams>,
) -> Result<ProtocolResult> {
    run_two_photon_bell::<DensityMatrix>(first, second, lambda(dephasing))
}

pub fn remote_spin_entanglement(
    a: &SpinCavity,
    b: &SpinCavity,
    dephasing: Option<&DephasingParams>,
) -> Result<ProtocolResult> {
    run_remote::<DensityMatrix>(a, b, (plus_ket(), plus_ket()), lambda(dephasing))
}

pub fn remote_spin_entanglement_from(
    a: &SpinCavity,
    b: &SpinCavity,
    spin_a: Ket,
    spin_b: Ket,
    dephasing: Option<&DephasingParams>,
) -> Result<ProtocolResult> {
    run_remote::<DensityMatrix>(a, b, (spin_a, spin_b), lambda(dephasing))
}
