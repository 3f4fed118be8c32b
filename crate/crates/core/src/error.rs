// Copyright 2026 The EBS Simulator Authors
// SPDX-License-Identifier: Apache-2.0

use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("invalid parameter `{name}`: {reason}")]
    InvalidParameter { name: &'static str, reason: String },

    #[error("empty input: {0}")]
    EmptyInput(&'static str),

    #[error("domain error: {0}")]
    Domain(&'static str),

    #[error("register `{0}` appears more than once")]
    DuplicateRegister(String),

    #[error("unknown register `{0}`")]
    UnknownRegister(String),

    #[error("register `{name}` is not a {expected} register")]
    RegisterKind { name: String, expected: &'static str },

    #[error("register sets do not match: {0}")]
    RegisterMismatch(String),

    #[error("too many registers: {0} (at most {max})", max = crate::quantum::MAX_REGISTERS)]
    TooManyRegisters(usize),

    #[error("expected {expected} amplitudes, got {got}")]
    AmplitudeLength { expected: usize, got: usize },

    #[error("gate must be {expected}, got {rows}x{cols}")]
    GateShape {
        expected: &'static str,
        rows: usize,
        cols: usize,
    },

    #[error("measurement basis is not orthonormal")]
    NonOrthonormalBasis,

    #[error("state has zero norm; conditioning is undefined")]
    ZeroNorm,

    #[error("squared norm {0} exceeds 1")]
    NormTooLarge(f64),

    #[error("input amplitudes are not normalized (|alpha|^2 + |beta|^2 = {0})")]
    Unnormalized(f64),

    #[error("invalid density matrix: {0}")]
    InvalidDensity(String),

    #[error("hole-mixing amplitude {0} outside [0, 1]")]
    MixingOutOfRange(f64),

    #[error("fidelity undefined: both amplitudes in the ratio vanish")]
    UndefinedFidelity,

    #[error("channel has no cavity parameters to re-evaluate")]
    NoCavityParams,

    #[error("both cavities must address the same spin register (got `{0}` and `{1}`)")]
    SpinRegisterMismatch(String, String),

    #[error("cavities must address distinct spin registers (both use `{0}`)")]
    SharedSpinRegister(String),
}
