// Copyright 2026 The EBS Simulator Authors
// SPDX-License-Identifier: Apache-2.0

use num_complex::Complex64;

use super::{check_registers, position, shift, Basis, DensityMatrix, Gate, Ket, PairOp, Register};
use crate::error::{Error, Result};

const NORM_SLACK: f64 = 1e-12;

/// Possibly sub-normalized pure state over an ordered register list.
#[derive(Debug, Clone, PartialEq)]
pub struct PureState {
    registers: Vec<Register>,
    amps: Vec<Complex64>,
}

/// One enumerated outcome of a projective measurement.
#[derive(Debug, Clone, PartialEq)]
pub struct MeasurementRecord {
    pub register: String,
    pub basis: Basis,
    pub outcome: usize,
    pub label: &'static str,
    pub probability: f64,
    /// Normalized collapsed state, still holding the measured register.
    /// `None` when the outcome has zero probability.
    pub post_state: Option<PureState>,
    /// Normalized state of the other registers.
    pub remainder: Option<PureState>,
}

impl PureState {
    /// Validating constructor: unique labels, length 2^n, squared norm ≤ 1.
    pub fn new(registers: Vec<Register>, amps: Vec<Complex64>) -> Result<Self> {
        check_registers(&registers)?;
        let expected = 1usize << registers.len();
        if amps.len() != expected {
            return Err(Error::AmplitudeLength {
                expected,
                got: amps.len(),
            });
        }
        let state = Self { registers, amps };
        let n2 = state.norm_sqr();
        if !n2.is_finite() || n2 > 1.0 + NORM_SLACK {
            return Err(Error::NormTooLarge(n2));
        }
        Ok(state)
    }

    /// Single-register state `a0|0⟩ + a1|1⟩`.
    pub fn qubit(register: Register, ket: Ket) -> Result<Self> {
        Self::new(vec![register], ket.to_vec())
    }

    /// Product state of the given single-register kets.
    pub fn product(parts: &[(Register, Ket)]) -> Result<Self> {
        let mut parts = parts.iter();
        let Some((reg, ket)) = parts.next() else {
            return Err(Error::EmptyInput("product state needs at least one register"));
        };
        let mut state = Self::qubit(reg.clone(), *ket)?;
        for (reg, ket) in parts {
            state = state.tensor(&Self::qubit(reg.clone(), *ket)?)?;
        }
        Ok(state)
    }

    pub fn registers(&self) -> &[Register] {
        &self.registers
    }

    pub fn register(&self, name: &str) -> Result<&Register> {
        Ok(&self.registers[position(&self.registers, name)?])
    }

    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amps
    }

    pub fn norm_sqr(&self) -> f64 {
        self.amps.iter().map(Complex64::norm_sqr).sum()
    }

    pub fn normalized(&self) -> Result<Self> {
        let n2 = self.norm_sqr();
        if n2 <= 0.0 {
            return Err(Error::ZeroNorm);
        }
        Ok(self.scaled(Complex64::new(1.0 / n2.sqrt(), 0.0)))
    }

    pub fn scaled(&self, factor: Complex64) -> Self {
        Self {
            registers: self.registers.clone(),
            amps: self.amps.iter().map(|a| a * factor).collect(),
        }
    }

    /// Kronecker product; registers of `other` are appended.
    pub fn tensor(&self, other: &PureState) -> Result<Self> {
        let mut registers = self.registers.clone();
        registers.extend(other.registers.iter().cloned());
        check_registers(&registers)?;
        let amps = self
            .amps
            .iter()
            .flat_map(|a| other.amps.iter().map(move |b| a * b))
            .collect();
        Ok(Self { registers, amps })
    }

    /// ⟨self|other⟩ over identical register lists.
    pub fn inner(&self, other: &PureState) -> Result<Complex64> {
        self.same_registers(other)?;
        Ok(self.amps.iter().zip(&other.amps).map(|(a, b)| a.conj() * b).sum())
    }

    /// |⟨target|ψ⟩|² / (⟨ψ|ψ⟩⟨target|target⟩).
    pub fn fidelity(&self, target: &PureState) -> Result<f64> {
        let overlap = target.inner(self)?;
        let denom = self.norm_sqr() * target.norm_sqr();
        if denom <= 0.0 {
            return Err(Error::ZeroNorm);
        }
        Ok((overlap.norm_sqr() / denom).clamp(0.0, 1.0))
    }

    /// Apply a 2×2 map to one register.
    pub fn apply_gate(&self, name: &str, gate: &Gate) -> Result<Self> {
        let n = self.registers.len();
        let bit = 1 << shift(n, position(&self.registers, name)?);
        let mut amps = self.amps.clone();
        for i in (0..amps.len()).filter(|i| i & bit == 0) {
            let (a0, a1) = (self.amps[i], self.amps[i | bit]);
            amps[i] = gate[0][0] * a0 + gate[0][1] * a1;
            amps[i | bit] = gate[1][0] * a0 + gate[1][1] * a1;
        }
        Ok(Self {
            registers: self.registers.clone(),
            amps,
        })
    }

    /// Apply a 4×4 map to the ordered register pair `(first, second)`.
    pub fn apply_pair(&self, first: &str, second: &str, op: &PairOp) -> Result<Self> {
        let n = self.registers.len();
        let pa = position(&self.registers, first)?;
        let pb = position(&self.registers, second)?;
        if pa == pb {
            return Err(Error::DuplicateRegister(first.to_string()));
        }
        let (ba, bb) = (1 << shift(n, pa), 1 << shift(n, pb));
        let mut amps = self.amps.clone();
        for base in (0..amps.len()).filter(|i| i & (ba | bb) == 0) {
            let idx = [base, base | bb, base | ba, base | ba | bb];
            let old = idx.map(|i| self.amps[i]);
            for (row, &i) in idx.iter().enumerate() {
                amps[i] = (0..4).map(|col| op[row][col] * old[col]).sum();
            }
        }
        Ok(Self {
            registers: self.registers.clone(),
            amps,
        })
    }

    /// Project register `name` onto `⟨bra|` and drop it: the (unnormalized)
    /// state of the remaining registers.
    pub fn condition(&self, name: &str, ket: &Ket) -> Result<Self> {
        let n = self.registers.len();
        let pos = position(&self.registers, name)?;
        let s = shift(n, pos);
        let low = (1usize << s) - 1;
        let mut registers = self.registers.clone();
        registers.remove(pos);
        let amps = (0..1usize << (n - 1))
            .map(|j| {
                let i0 = ((j & !low) << 1) | (j & low);
                ket[0].conj() * self.amps[i0] + ket[1].conj() * self.amps[i0 | (1 << s)]
            })
            .collect();
        Ok(Self { registers, amps })
    }

    /// Collapse register `name` onto `ket` while keeping it.
    pub fn project(&self, name: &str, ket: &Ket) -> Result<Self> {
        let projector = [
            [ket[0] * ket[0].conj(), ket[0] * ket[1].conj()],
            [ket[1] * ket[0].conj(), ket[1] * ket[1].conj()],
        ];
        self.apply_gate(name, &projector)
    }

    /// Enumerate both outcomes; probabilities are absolute squared norms of
    /// the projected branches and sum to this state's squared norm.
    pub fn measure(&self, name: &str, basis: Basis) -> Result<Vec<MeasurementRecord>> {
        self.measure_inner(name, basis, false)
    }

    /// As [`measure`](Self::measure) but with probabilities relative to the
    /// squared norm, so they sum to one.
    pub fn measure_conditioned(&self, name: &str, basis: Basis) -> Result<Vec<MeasurementRecord>> {
        self.measure_inner(name, basis, true)
    }

    fn measure_inner(&self, name: &str, basis: Basis, relative: bool) -> Result<Vec<MeasurementRecord>> {
        let total = self.norm_sqr();
        if total <= 0.0 {
            return Err(Error::ZeroNorm);
        }
        let kind = self.register(name)?.kind;
        let kets = basis.kets()?;
        let scale = if relative { total } else { 1.0 };
        kets.iter()
            .enumerate()
            .map(|(outcome, ket)| {
                let collapsed = self.project(name, ket)?;
                let p = collapsed.norm_sqr();
                let (post_state, remainder) = if p > 0.0 {
                    (
                        Some(collapsed.normalized()?),
                        Some(self.condition(name, ket)?.normalized()?),
                    )
                } else {
                    (None, None)
                };
                Ok(MeasurementRecord {
                    register: name.to_string(),
                    basis,
                    outcome,
                    label: basis.outcome_label(kind, outcome),
                    probability: p / scale,
                    post_state,
                    remainder,
                })
            })
            .collect()
    }

    /// |ψ⟩⟨ψ| without renormalization.
    pub fn to_density(&self) -> DensityMatrix {
        DensityMatrix::from_pure(self)
    }

    fn same_registers(&self, other: &PureState) -> Result<()> {
        if self.registers == other.registers {
            Ok(())
        } else {
            Err(Error::RegisterMismatch(format!(
                "{:?} vs {:?}",
                names(&self.registers),
                names(&other.registers)
            )))
        }
    }
}

pub(crate) fn names(registers: &[Register]) -> Vec<&str> {
    registers.iter().map(|r| r.name.as_str()).collect()
}
