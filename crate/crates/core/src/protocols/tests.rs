// Copyright 2026 The EBS Simulator Authors
// SPDX-License-Identifier: Apache-2.0

use std::f64::consts::FRAC_1_SQRT_2;

use num_complex::Complex64;

use super::*;
use crate::channel::ChannelMode;
use crate::scattering::CavityParams;

use Port::{Reflected as R, Transmitted as T};

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

fn working_point() -> EbsChannel {
    EbsChannel::build(&CavityParams::default(), 0.0, 0.0, ChannelMode::Full).unwrap()
}

fn assert_complete(res: &ProtocolResult) {
    assert!(
        (res.total_probability() - 1.0).abs() < 1e-12,
        "{}",
        res.total_probability()
    );
    assert!(res.loss_probability() >= 0.0);
}

fn pure(b: &Branch) -> &PureState {
    match b.state.as_ref().unwrap() {
        BranchState::Pure(s) => s,
        BranchState::Mixed(_) => panic!("expected a pure branch"),
    }
}

#[test]
fn photon_to_spin_basis_state_ideal() {
    let res = photon_to_spin_transfer(c(1.0, 0.0), c(0.0, 0.0), &EbsChannel::perfect()).unwrap();
    assert_complete(&res);
    for b in res.detected().filter(|b| b.probability > 0.0) {
        assert!((b.fidelity.unwrap() - 1.0).abs() < 1e-12);
        let up = PureState::qubit(Register::spin("spin"), basis_ket(0)).unwrap();
        assert!((pure(b).fidelity(&up).unwrap() - 1.0).abs() < 1e-12);
    }
    assert!((res.success_probability - 1.0).abs() < 1e-12);
}

#[test]
fn photon_to_spin_arbitrary_state_ideal() {
    let (alpha, beta) = (c(0.6, 0.0), c(0.0, 0.8));
    let res = photon_to_spin_transfer(alpha, beta, &EbsChannel::perfect()).unwrap();
    assert_complete(&res);
    assert!(res.loss_probability().abs() < 1e-12);
    assert!((res.success_probability - 1.0).abs() < 1e-12);
    for b in res.detected() {
        assert!((b.probability - 0.25).abs() < 1e-12);
        assert!((b.fidelity.unwrap() - 1.0).abs() < 1e-12);
    }
    // H heralds +, V heralds −.
    let v = res.branch(&[T], "V").unwrap();
    let minus = PureState::qubit(Register::spin("spin"), [alpha, -beta]).unwrap();
    assert!((pure(v).fidelity(&minus).unwrap() - 1.0).abs() < 1e-12);
}

#[test]
fn photon_to_spin_full_channel_fidelity() {
    let res = photon_to_spin_transfer(c(1.0, 0.0), c(0.0, 0.0), &working_point()).unwrap();
    assert_complete(&res);
    let b = res.branch(&[T], "H").unwrap();
    // |t0|² / (|t0|² + |t|²)
    assert!((b.fidelity.unwrap() - 0.9999259447962888).abs() < 1e-12);
    let f = crate::channel::amplitude_fidelities(&CavityParams::default(), 0.0).unwrap();
    assert!((b.fidelity.unwrap() - f.f_t * f.f_t).abs() < 1e-12);
}

#[test]
fn unnormalized_inputs_are_rejected() {
    let ch = EbsChannel::perfect();
    assert!(matches!(
        photon_to_spin_transfer(c(1.0, 0.0), c(1.0, 0.0), &ch),
        Err(Error::Unnormalized(_))
    ));
    assert!(spin_to_photon_transfer(c(0.5, 0.0), c(0.0, 0.0), &ch).is_err());
    assert!(qnd_spin_readout([c(0.0, 0.0); 2], &ch, Probe::H).is_err());
}

#[test]
fn spin_to_photon_ideal_and_full() {
    let res = spin_to_photon_transfer(c(1.0, 0.0), c(0.0, 0.0), &EbsChannel::perfect()).unwrap();
    assert_complete(&res);
    assert!((res.success_probability - 1.0).abs() < 1e-12);
    let r = PureState::qubit(Register::photon("photon"), basis_ket(0)).unwrap();
    for b in res.detected().filter(|b| b.probability > 0.0) {
        assert!((pure(b).fidelity(&r).unwrap() - 1.0).abs() < 1e-12);
    }

    let res = spin_to_photon_transfer(c(FRAC_1_SQRT_2, 0.0), c(FRAC_1_SQRT_2, 0.0), &working_point()).unwrap();
    assert_complete(&res);
    assert!((res.success_probability - 0.9914311783647993).abs() < 1e-12);
}

#[test]
fn qnd_eigenstate_ideal() {
    let res = qnd_spin_readout(basis_ket(0), &EbsChannel::perfect(), Probe::H).unwrap();
    assert_complete(&res);
    assert_eq!(res.readout_error, Some(0.0));
    for b in res.detected().filter(|b| b.probability > 0.0) {
        assert_eq!(b.inferred, Some(SpinValue::Up));
        let up = PureState::qubit(Register::spin("spin"), basis_ket(0)).unwrap();
        assert!((pure(b).fidelity(&up).unwrap() - 1.0).abs() < 1e-12);
    }
}

#[test]
fn qnd_error_at_working_point() {
    for probe in [Probe::H, Probe::V] {
        let res = qnd_spin_readout(basis_ket(0), &working_point(), probe).unwrap();
        assert_complete(&res);
        // |t|² / (|t0|² + |t|² + |r|²)
        assert!((res.readout_error.unwrap() - 3.7348998001081626e-05).abs() < 1e-12);
    }
}

#[test]
fn qnd_superposition_branch() {
    let res = qnd_spin_readout(plus_ket(), &EbsChannel::perfect(), Probe::H).unwrap();
    let b = res.branch(&[T], "R").unwrap();
    assert!((b.probability - 0.25).abs() < 1e-12);
    assert_eq!(b.inferred, Some(SpinValue::Up));
    assert!((b.fidelity.unwrap() - 1.0).abs() < 1e-12);
    assert_eq!(res.readout_error, Some(0.0));
}

#[test]
fn two_photon_bell_ideal() {
    let ch = SpinCavity::new(EbsChannel::perfect(), "spin");
    let res = two_photon_bell(&ch, &ch).unwrap();
    assert_complete(&res);
    assert_eq!(
        res.port_sequences(),
        vec![vec![T, T], vec![T, R], vec![R, T], vec![R, R]]
    );
    for ports in res.port_sequences() {
        assert!((res.port_probability(&ports) - 0.25).abs() < 1e-12);
    }
    for b in res.detected() {
        assert!((b.fidelity.unwrap() - 1.0).abs() < 1e-12, "{}", b.label());
    }
    assert_eq!(
        res.branch(&[T, T], "up").unwrap().target.as_ref().unwrap().label,
        "Phi+"
    );
    assert_eq!(
        res.branch(&[T, T], "down").unwrap().target.as_ref().unwrap().label,
        "Phi-"
    );
    assert_eq!(
        res.branch(&[T, R], "up").unwrap().target.as_ref().unwrap().label,
        "Psi+"
    );
    assert_eq!(
        res.branch(&[R, T], "down").unwrap().target.as_ref().unwrap().label,
        "Psi-"
    );
}

#[test]
fn two_photon_bell_full_channel_anchor() {
    let ch = SpinCavity::new(working_point(), "spin");
    let res = two_photon_bell(&ch, &ch).unwrap();
    assert_complete(&res);
    // Independent branch calculation: the Phi+ herald picks up the
    // (RL + LR) admixture 2·t0·t, the Phi- herald is exact.
    let up = res.branch(&[T, T], "up").unwrap();
    let down = res.branch(&[T, T], "down").unwrap();
    assert!((up.fidelity.unwrap() - 0.9997038888296448).abs() < 1e-12);
    assert!((down.fidelity.unwrap() - 1.0).abs() < 1e-12);
    assert!((res.port_probability(&[T, T]) - 0.2500370317153915).abs() < 1e-12);
    assert!((res.port_fidelity(&[T, T]).unwrap() - 0.9998519005609241).abs() < 1e-12);
}

#[test]
fn two_photon_bell_register_checks() {
    let a = SpinCavity::new(EbsChannel::perfect(), "s1");
    let b = SpinCavity::new(EbsChannel::perfect(), "s2");
    assert_eq!(
        two_photon_bell(&a, &b),
        Err(Error::SpinRegisterMismatch("s1".into(), "s2".into()))
    );
    assert_eq!(
        remote_spin_entanglement(&a, &a),
        Err(Error::SharedSpinRegister("s1".into()))
    );
}

#[test]
fn remote_entanglement_ideal() {
    let a = SpinCavity::new(EbsChannel::perfect(), "a");
    let b = SpinCavity::new(EbsChannel::perfect(), "b");
    let res = remote_spin_entanglement(&a, &b).unwrap();
    assert_complete(&res);
    for ports in res.port_sequences() {
        assert!((res.port_probability(&ports) - 0.25).abs() < 1e-12);
    }
    for b in res.detected() {
        assert!((b.fidelity.unwrap() - 1.0).abs() < 1e-12, "{}", b.label());
    }
    let tt = res.branch(&[T, T], "H").unwrap();
    assert_eq!(tt.target.as_ref().unwrap().label, "Phi+");
}

#[test]
fn remote_entanglement_spin_eigenstates() {
    let a = SpinCavity::new(EbsChannel::perfect(), "a");
    let b = SpinCavity::new(EbsChannel::perfect(), "b");
    let res = remote_spin_entanglement_from(&a, &b, basis_ket(0), basis_ket(0)).unwrap();
    assert_complete(&res);
    // R transmits through both, L reflects off both.
    assert!((res.port_probability(&[T, T]) - 0.5).abs() < 1e-12);
    assert!((res.port_probability(&[R, R]) - 0.5).abs() < 1e-12);
    assert_eq!(res.port_probability(&[T, R]), 0.0);
    let upup = PureState::product(&[(Register::spin("a"), basis_ket(0)), (Register::spin("b"), basis_ket(0))]).unwrap();
    for br in res.detected().filter(|b| b.probability > 0.0) {
        assert!((pure(br).fidelity(&upup).unwrap() - 1.0).abs() < 1e-12);
        assert!((br.fidelity.unwrap() - 0.5).abs() < 1e-12);
    }
}

#[test]
fn density_engine_matches_on_working_point() {
    let ch = SpinCavity::new(working_point(), "spin");
    let a = two_photon_bell(&ch, &ch).unwrap();
    let b = density::two_photon_bell(&ch, &ch, None).unwrap();
    assert_eq!(b.engine, "density-matrix");
    for (x, y) in a.branches.iter().zip(&b.branches) {
        assert_eq!(x.label(), y.label());
        assert!((x.probability - y.probability).abs() < 1e-12);
        if let (Some(fx), Some(fy)) = (x.fidelity, y.fidelity) {
            assert!((fx - fy).abs() < 1e-12);
        }
    }
}

#[test]
fn pure_engine_refuses_dephasing() {
    assert!(run_photon_to_spin::<PureState>(c(1.0, 0.0), c(0.0, 0.0), &EbsChannel::perfect(), Some(0.5)).is_err());
}

#[test]
fn dephasing_lowers_transfer_fidelity() {
    let d = crate::channel::DephasingParams::from_ratio(0.2).unwrap();
    let h = c(FRAC_1_SQRT_2, 0.0);
    let res = density::photon_to_spin_transfer(h, h, &EbsChannel::perfect(), Some(&d)).unwrap();
    assert_complete(&res);
    let lambda = (-0.2f64).exp();
    for b in res.detected() {
        assert!((b.fidelity.unwrap() - (1.0 + lambda) / 2.0).abs() < 1e-12);
    }
}

#[test]
fn report_lists_every_branch() {
    let ch = SpinCavity::new(EbsChannel::perfect(), "spin");
    let text = two_photon_bell(&ch, &ch).unwrap().report();
    assert!(text.contains("protocol = two_photon_bell"));
    assert_eq!(text.matches("[ports ").count(), 4);
    assert_eq!(text.matches("[branch ").count(), 9);
    assert!(text.contains("target = Psi-"));
    assert!(text.contains("label = lost"));
}
