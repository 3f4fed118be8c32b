// Copyright 2026 The EBS Simulator Authors
// SPDX-License-Identifier: Apache-2.0

//! Dense multi-qubit engine over labeled two-level registers.
//!
//! Every register is a qubit: a photon polarization with basis {|R⟩, |L⟩}
//! or an electron spin with basis {|↑⟩, |↓⟩}. Index 0 is R / ↑ and index 1
//! is L / ↓. Amplitudes are stored with the first register as the most
//! significant bit, so a (photon, spin) pair is ordered (R↑, R↓, L↑, L↓).
//!
//! States may be sub-normalized: a conditional branch keeps its probability
//! in its squared norm.
//!
//! Linear polarizations are fixed as |H⟩ = (|R⟩+|L⟩)/√2 and
//! |V⟩ = (|R⟩−|L⟩)/√2; the spin analogues are |±⟩ = (|↑⟩±|↓⟩)/√2.

mod density;
mod state;

use std::f64::consts::FRAC_1_SQRT_2;
use std::fmt;

use num_complex::Complex64;

use crate::error::{Error, Result};

pub use density::{trace_distance, DensityMatrix};
pub use state::{MeasurementRecord, PureState};

/// Dense vectors are used throughout; the protocols need at most four.
pub const MAX_REGISTERS: usize = 8;

/// A single-register linear map in the register's computational basis.
pub type Gate = [[Complex64; 2]; 2];

/// A two-register linear map on the ordered pair (first, second).
pub type PairOp = [[Complex64; 4]; 4];

/// A single-register ket `(amplitude of |0⟩, amplitude of |1⟩)`.
pub type Ket = [Complex64; 2];

const fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

pub mod gates {
    //! Built-in single-register gates.

    use super::{c, Gate, FRAC_1_SQRT_2};

    pub const IDENTITY: Gate = [[c(1.0, 0.0), c(0.0, 0.0)], [c(0.0, 0.0), c(1.0, 0.0)]];

    /// |0⟩ → (|0⟩+|1⟩)/√2, |1⟩ → (|0⟩−|1⟩)/√2. On a photon this is the
    /// circular-to-linear change of basis (R → H, L → V).
    pub const HADAMARD: Gate = [
        [c(FRAC_1_SQRT_2, 0.0), c(FRAC_1_SQRT_2, 0.0)],
        [c(FRAC_1_SQRT_2, 0.0), c(-FRAC_1_SQRT_2, 0.0)],
    ];

    /// Bit flip. On a photon: a half-wave plate swapping R and L.
    pub const PAULI_X: Gate = [[c(0.0, 0.0), c(1.0, 0.0)], [c(1.0, 0.0), c(0.0, 0.0)]];

    pub const PAULI_Z: Gate = [[c(1.0, 0.0), c(0.0, 0.0)], [c(0.0, 0.0), c(-1.0, 0.0)]];

    /// Quarter-wave plate with horizontal fast axis, written in the circular
    /// basis. Maps each circular polarization onto a linear one.
    pub const QUARTER_WAVE: Gate = [
        [c(FRAC_1_SQRT_2, 0.0), c(0.0, -FRAC_1_SQRT_2)],
        [c(0.0, -FRAC_1_SQRT_2), c(FRAC_1_SQRT_2, 0.0)],
    ];
}

/// Build a [`Gate`] from row slices, checking the shape.
pub fn gate_from_rows(rows: &[Vec<Complex64>]) -> Result<Gate> {
    let cols = rows.first().map_or(0, Vec::len);
    if rows.len() != 2 || rows.iter().any(|r| r.len() != 2) {
        return Err(Error::GateShape {
            expected: "2x2",
            rows: rows.len(),
            cols,
        });
    }
    Ok([[rows[0][0], rows[0][1]], [rows[1][0], rows[1][1]]])
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum RegisterKind {
    Photon,
    Spin,
}

impl RegisterKind {
    pub fn name(self) -> &'static str {
        match self {
            RegisterKind::Photon => "photon-polarization",
            RegisterKind::Spin => "spin",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Register {
    pub name: String,
    pub kind: RegisterKind,
}

impl Register {
    pub fn photon(name: impl Into<String>) -> Self {
        Self {
            name: name.into(),
            kind: RegisterKind::Photon,
        }
    }

    pub fn spin(name: impl Into<String>) -> Self {
        Self {
            name: name.into(),
            kind: RegisterKind::Spin,
        }
    }
}

impl fmt::Display for Register {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.name)
    }
}

/// Orthonormal measurement basis for one register.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Basis {
    /// {R, L} for photons, {↑, ↓} for spins.
    Computational,
    /// {H, V} for photons, {+, −} for spins.
    Linear,
    /// Two kets given in the computational basis.
    Custom([Ket; 2]),
}

impl Basis {
    pub fn kets(&self) -> Result<[Ket; 2]> {
        let h = FRAC_1_SQRT_2;
        match self {
            Basis::Computational => Ok([[c(1.0, 0.0), c(0.0, 0.0)], [c(0.0, 0.0), c(1.0, 0.0)]]),
            Basis::Linear => Ok([[c(h, 0.0), c(h, 0.0)], [c(h, 0.0), c(-h, 0.0)]]),
            Basis::Custom(kets) => {
                let dot = |a: &Ket, b: &Ket| a[0].conj() * b[0] + a[1].conj() * b[1];
                let ok = (dot(&kets[0], &kets[0]).re - 1.0).abs() < 1e-12
                    && (dot(&kets[1], &kets[1]).re - 1.0).abs() < 1e-12
                    && dot(&kets[0], &kets[1]).norm() < 1e-12;
                if ok {
                    Ok(*kets)
                } else {
                    Err(Error::NonOrthonormalBasis)
                }
            }
        }
    }

    pub fn outcome_label(&self, kind: RegisterKind, outcome: usize) -> &'static str {
        match (self, kind) {
            (Basis::Computational, RegisterKind::Photon) => ["R", "L"][outcome],
            (Basis::Computational, RegisterKind::Spin) => ["up", "down"][outcome],
            (Basis::Linear, RegisterKind::Photon) => ["H", "V"][outcome],
            (Basis::Linear, RegisterKind::Spin) => ["plus", "minus"][outcome],
            (Basis::Custom(_), _) => ["0", "1"][outcome],
        }
    }
}

/// Computational basis ket |0⟩ or |1⟩.
pub fn basis_ket(bit: usize) -> Ket {
    if bit == 0 {
        [c(1.0, 0.0), c(0.0, 0.0)]
    } else {
        [c(0.0, 0.0), c(1.0, 0.0)]
    }
}

/// (|0⟩ + |1⟩)/√2.
pub fn plus_ket() -> Ket {
    [c(FRAC_1_SQRT_2, 0.0), c(FRAC_1_SQRT_2, 0.0)]
}

/// The four Bell states over an ordered register pair.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum BellState {
    /// (|00⟩ + |11⟩)/√2
    PhiPlus,
    /// (|00⟩ − |11⟩)/√2
    PhiMinus,
    /// (|01⟩ + |10⟩)/√2
    PsiPlus,
    /// (|01⟩ − |10⟩)/√2
    PsiMinus,
}

impl BellState {
    pub fn from_parity(even: bool, plus: bool) -> Self {
        match (even, plus) {
            (true, true) => BellState::PhiPlus,
            (true, false) => BellState::PhiMinus,
            (false, true) => BellState::PsiPlus,
            (false, false) => BellState::PsiMinus,
        }
    }

    pub fn label(self) -> &'static str {
        match self {
            BellState::PhiPlus => "Phi+",
            BellState::PhiMinus => "Phi-",
            BellState::PsiPlus => "Psi+",
            BellState::PsiMinus => "Psi-",
        }
    }

    pub fn state(self, first: Register, second: Register) -> Result<PureState> {
        let h = FRAC_1_SQRT_2;
        let z = c(0.0, 0.0);
        let amps = match self {
            BellState::PhiPlus => vec![c(h, 0.0), z, z, c(h, 0.0)],
            BellState::PhiMinus => vec![c(h, 0.0), z, z, c(-h, 0.0)],
            BellState::PsiPlus => vec![z, c(h, 0.0), c(h, 0.0), z],
            BellState::PsiMinus => vec![z, c(h, 0.0), c(-h, 0.0), z],
        };
        PureState::new(vec![first, second], amps)
    }
}

impl fmt::Display for BellState {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.label())
    }
}

/// Conditioned fidelity ⟨target|ρ|target⟩ / tr ρ.
pub fn state_fidelity(rho: &DensityMatrix, target: &PureState) -> Result<f64> {
    rho.fidelity(target)
}

pub(crate) fn check_registers(registers: &[Register]) -> Result<()> {
    if registers.len() > MAX_REGISTERS {
        return Err(Error::TooManyRegisters(registers.len()));
    }
    for (i, r) in registers.iter().enumerate() {
        if registers[..i].iter().any(|o| o.name == r.name) {
            return Err(Error::DuplicateRegister(r.name.clone()));
        }
    }
    Ok(())
}

pub(crate) fn position(registers: &[Register], name: &str) -> Result<usize> {
    registers
        .iter()
        .position(|r| r.name == name)
        .ok_or_else(|| Error::UnknownRegister(name.to_string()))
}

/// Bit shift of register `pos` in an `n`-register index.
pub(crate) fn shift(n: usize, pos: usize) -> usize {
    n - 1 - pos
}
