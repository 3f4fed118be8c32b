// Copyright 2026 The EBS Simulator Authors
// SPDX-License-Identifier: Apache-2.0

use std::path::Path;
use std::process::{Command, Output};

use ebs::cli::{Mode, RunConfig};

fn ebs(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_ebs")).args(args).output().unwrap()
}

fn write(dir: &Path, name: &str, text: &str) -> String {
    let p = dir.join(name);
    std::fs::write(&p, text).unwrap();
    p.to_string_lossy().into_owned()
}

#[test]
fn spectra_to_stdout() {
    let out = ebs(&["spectra"]);
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    let mut lines = text.lines();
    assert_eq!(
        lines.next(),
        Some("detuning,abs_t,abs_r,abs_t0,abs_r0,arg_t,arg_r,arg_t0,arg_r0")
    );
    assert_eq!(lines.count(), 1001);
}

#[test]
fn fidelity_sweep_writes_configured_file() {
    let dir = tempfile::tempdir().unwrap();
    let target = dir.path().join("fid.csv");
    let cfg = write(
        dir.path(),
        "fid.cfg",
        &format!(
            "mode = fidelity-sweep\nsweep.axis = kappa_s\nsweep.start = 0\nsweep.stop = 2\nsweep.points = 5\noutput.path = {}\n",
            target.display()
        ),
    );
    let out = ebs(&["fidelity", "--config", &cfg]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let text = std::fs::read_to_string(&target).unwrap();
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines[0], "axis,F_t,F_r");
    assert_eq!(lines.len(), 6);
    assert!(
        lines[3].starts_with("1.00000000e0,9.99917404e-1,9.47860874e-1"),
        "{}",
        lines[3]
    );
}

#[test]
fn protocol_flags_override_config() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write(
        dir.path(),
        "p.cfg",
        "protocol.name = photon_to_spin\nprotocol.alpha.re = 0.6\nprotocol.beta.im = 0.8\n",
    );
    let out = ebs(&["protocol", "--config", &cfg, "--ideal", "--seed", "11"]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.contains("channel = perfect"));
    assert!(text.contains("protocol = photon_to_spin"));
    assert!(text.contains("[trajectory]"));
    assert_eq!(text.matches("shot ").count(), 100);
    assert!(!text.contains("shot 0 = lost"));
}

#[test]
fn config_errors_exit_with_2() {
    let dir = tempfile::tempdir().unwrap();
    for (body, needle) in [
        ("cavity.q = 1\n", "cavity.q"),
        ("sweep.points = 1\n", "sweep.points"),
        ("mode = protocol\n", "does not match"),
    ] {
        let cfg = write(dir.path(), "bad.cfg", body);
        let out = ebs(&["spectra", "--config", &cfg]);
        assert_eq!(out.status.code(), Some(2), "{body}");
        assert!(String::from_utf8_lossy(&out.stderr).contains(needle), "{body}");
    }
    assert_eq!(ebs(&["spectra", "--seed", "1"]).status.code(), Some(2));
    let cfg = write(
        dir.path(),
        "g.cfg",
        "mode = fidelity-sweep\nsweep.axis = g\nsweep.start = 0\nsweep.stop = 1\nsweep.points = 3\n",
    );
    let out = ebs(&["fidelity", "--config", &cfg]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("g = 0: fidelity undefined"));
}

#[test]
fn io_errors_exit_with_3() {
    let dir = tempfile::tempdir().unwrap();
    let missing = dir.path().join("missing.cfg");
    assert_eq!(
        ebs(&["spectra", "--config", missing.to_str().unwrap()]).status.code(),
        Some(3)
    );
    let unwritable = dir.path().join("no/such/dir/out.csv");
    assert_eq!(
        ebs(&["spectra", "--out", unwritable.to_str().unwrap()]).status.code(),
        Some(3)
    );
}

#[test]
fn serialized_config_reproduces_the_run() {
    let dir = tempfile::tempdir().unwrap();
    let mut cfg = RunConfig::new(Mode::Protocol);
    cfg.cavity.kappa_s = 0.3;
    cfg.mixing = 0.05;
    cfg.tau_over_t2 = 0.02;
    cfg.seed = Some(5);
    cfg.samples = Some(20);
    let path = write(dir.path(), "run.cfg", &cfg.to_config_string());
    let a = ebs(&["protocol", "--config", &path]);
    assert!(a.status.success(), "{}", String::from_utf8_lossy(&a.stderr));
    assert_eq!(
        String::from_utf8(a.stdout).unwrap(),
        ebs::cli::run_protocol(&cfg).unwrap()
    );
}
