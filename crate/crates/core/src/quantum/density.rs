// Copyright 2026 The EBS Simulator Authors
// SPDX-License-Identifier: Apache-2.0

//! Density matrices. Register-local maps are lifted to the full space with
//! Kronecker products and applied as `K ρ K†`, independently of the
//! index-walking state-vector code.

use nalgebra::DMatrix;
use num_complex::Complex64;

use super::state::names;
use super::{check_registers, position, shift, Basis, Gate, Ket, PairOp, PureState, Register};
use crate::error::{Error, Result};

type CMatrix = DMatrix<Complex64>;

#[derive(Debug, Clone, PartialEq)]
pub struct DensityMatrix {
    registers: Vec<Register>,
    matrix: CMatrix,
}

impl DensityMatrix {
    /// Validating constructor: Hermitian, positive semidefinite, trace ≤ 1.
    pub fn new(registers: Vec<Register>, matrix: CMatrix) -> Result<Self> {
        check_registers(&registers)?;
        let dim = 1usize << registers.len();
        if matrix.nrows() != dim || matrix.ncols() != dim {
            return Err(Error::InvalidDensity(format!(
                "expected {dim}x{dim}, got {}x{}",
                matrix.nrows(),
                matrix.ncols()
            )));
        }
        let rho = Self { registers, matrix };
        if !rho.is_hermitian(1e-12) {
            return Err(Error::InvalidDensity("not Hermitian".into()));
        }
        let tr = rho.trace();
        if !(-1e-12..=1.0 + 1e-12).contains(&tr) {
            return Err(Error::InvalidDensity(format!("trace {tr} outside [0, 1]")));
        }
        let min = rho.min_eigenvalue();
        if min < -1e-10 {
            return Err(Error::InvalidDensity(format!("negative eigenvalue {min}")));
        }
        Ok(rho)
    }

    pub fn from_pure(state: &PureState) -> Self {
        let v = nalgebra::DVector::from_column_slice(state.amplitudes());
        Self {
            registers: state.registers().to_vec(),
            matrix: &v * v.adjoint(),
        }
    }

    /// I / 2^n.
    pub fn maximally_mixed(registers: Vec<Register>) -> Result<Self> {
        check_registers(&registers)?;
        let dim = 1usize << registers.len();
        let matrix = CMatrix::identity(dim, dim) * Complex64::new(1.0 / dim as f64, 0.0);
        Ok(Self { registers, matrix })
    }

    pub fn registers(&self) -> &[Register] {
        &self.registers
    }

    pub fn matrix(&self) -> &CMatrix {
        &self.matrix
    }

    pub fn trace(&self) -> f64 {
        self.matrix.trace().re
    }

    pub fn is_hermitian(&self, tol: f64) -> bool {
        (&self.matrix - self.matrix.adjoint()).iter().all(|z| z.norm() <= tol)
    }

    pub fn eigenvalues(&self) -> Vec<f64> {
        let herm = (&self.matrix + self.matrix.adjoint()) * Complex64::new(0.5, 0.0);
        herm.symmetric_eigenvalues().iter().copied().collect()
    }

    pub fn min_eigenvalue(&self) -> f64 {
        self.eigenvalues().into_iter().fold(f64::INFINITY, f64::min)
    }

    pub fn normalized(&self) -> Result<Self> {
        let tr = self.trace();
        if tr <= 0.0 {
            return Err(Error::ZeroNorm);
        }
        Ok(self.scaled(1.0 / tr))
    }

    pub fn scaled(&self, factor: f64) -> Self {
        Self {
            registers: self.registers.clone(),
            matrix: &self.matrix * Complex64::new(factor, 0.0),
        }
    }

    /// Sum of two matrices over the same registers.
    pub fn add(&self, other: &DensityMatrix) -> Result<Self> {
        self.same_registers(other)?;
        Ok(Self {
            registers: self.registers.clone(),
            matrix: &self.matrix + &other.matrix,
        })
    }

    /// ⟨target|ρ|target⟩ / (tr ρ · ⟨target|target⟩). Register lists must match.
    pub fn fidelity(&self, target: &PureState) -> Result<f64> {
        if self.registers != target.registers() {
            return Err(Error::RegisterMismatch(format!(
                "{:?} vs {:?}",
                names(&self.registers),
                names(target.registers())
            )));
        }
        let v = nalgebra::DVector::from_column_slice(target.amplitudes());
        let num = (v.adjoint() * &self.matrix * &v)[(0, 0)].re;
        let denom = self.trace() * target.norm_sqr();
        if denom <= 0.0 {
            return Err(Error::ZeroNorm);
        }
        Ok((num / denom).clamp(0.0, 1.0))
    }

    /// `U ρ U†` with `U` acting on one register.
    pub fn apply_gate(&self, name: &str, gate: &Gate) -> Result<Self> {
        let pos = position(&self.registers, name)?;
        let u = self.embed(&[(pos, gate_matrix(gate))]);
        Ok(self.conjugated(&u))
    }

    /// `K ρ K†` with `K` acting on the ordered pair `(first, second)`.
    pub fn apply_pair(&self, first: &str, second: &str, op: &PairOp) -> Result<Self> {
        let pa = position(&self.registers, first)?;
        let pb = position(&self.registers, second)?;
        if pa == pb {
            return Err(Error::DuplicateRegister(first.to_string()));
        }
        let n = self.registers.len();
        let dim = 1usize << n;
        let mut k = CMatrix::zeros(dim, dim);
        for (row, op_row) in op.iter().enumerate() {
            for (col, &coeff) in op_row.iter().enumerate() {
                if coeff == Complex64::new(0.0, 0.0) {
                    continue;
                }
                let lift = self.embed(&[(pa, unit(row >> 1, col >> 1)), (pb, unit(row & 1, col & 1))]);
                k += lift * coeff;
            }
        }
        Ok(self.conjugated(&k))
    }

    /// Apply ⟨ket| on register `name` from both sides and drop that register.
    pub fn condition(&self, name: &str, ket: &Ket) -> Result<Self> {
        let pos = position(&self.registers, name)?;
        let mut factors = Vec::with_capacity(self.registers.len());
        for i in 0..self.registers.len() {
            factors.push(if i == pos {
                CMatrix::from_row_slice(1, 2, &[ket[0].conj(), ket[1].conj()])
            } else {
                CMatrix::identity(2, 2)
            });
        }
        let b = kron_all(&factors);
        let mut registers = self.registers.clone();
        registers.remove(pos);
        Ok(Self {
            registers,
            matrix: &b * &self.matrix * b.adjoint(),
        })
    }

    /// Enumerate both outcome probabilities (absolute) for a basis.
    pub fn outcome_probabilities(&self, name: &str, basis: Basis) -> Result<[f64; 2]> {
        let kets = basis.kets()?;
        Ok([
            self.condition(name, &kets[0])?.trace(),
            self.condition(name, &kets[1])?.trace(),
        ])
    }

    /// Trace out the named registers; the remaining order is preserved.
    pub fn partial_trace(&self, traced: &[&str]) -> Result<Self> {
        let n = self.registers.len();
        let mut out_pos = Vec::new();
        let mut in_pos = Vec::new();
        for name in traced {
            let p = position(&self.registers, name)?;
            if in_pos.contains(&p) {
                return Err(Error::DuplicateRegister(name.to_string()));
            }
            in_pos.push(p);
        }
        for p in 0..n {
            if !in_pos.contains(&p) {
                out_pos.push(p);
            }
        }
        let keep_dim = 1usize << out_pos.len();
        let trace_dim = 1usize << in_pos.len();
        let full_index = |kept: usize, tr: usize| -> usize {
            let mut idx = 0;
            for (k, &p) in out_pos.iter().enumerate() {
                let bit = (kept >> (out_pos.len() - 1 - k)) & 1;
                idx |= bit << shift(n, p);
            }
            for (k, &p) in in_pos.iter().enumerate() {
                let bit = (tr >> (in_pos.len() - 1 - k)) & 1;
                idx |= bit << shift(n, p);
            }
            idx
        };
        let mut m = CMatrix::zeros(keep_dim, keep_dim);
        for i in 0..keep_dim {
            for j in 0..keep_dim {
                m[(i, j)] = (0..trace_dim)
                    .map(|t| self.matrix[(full_index(i, t), full_index(j, t))])
                    .sum();
            }
        }
        Ok(Self {
            registers: out_pos.iter().map(|&p| self.registers[p].clone()).collect(),
            matrix: m,
        })
    }

    /// Multiply every coherence between the two values of register `name`
    /// by `lambda`.
    pub fn dephase(&self, name: &str, lambda: f64) -> Result<Self> {
        let n = self.registers.len();
        let bit = 1 << shift(n, position(&self.registers, name)?);
        let mut matrix = self.matrix.clone();
        let dim = matrix.nrows();
        for i in 0..dim {
            for j in (0..dim).filter(|j| (i ^ j) & bit != 0) {
                matrix[(i, j)] *= lambda;
            }
        }
        Ok(Self {
            registers: self.registers.clone(),
            matrix,
        })
    }

    fn conjugated(&self, k: &CMatrix) -> Self {
        Self {
            registers: self.registers.clone(),
            matrix: k * &self.matrix * k.adjoint(),
        }
    }

    fn embed(&self, ops: &[(usize, CMatrix)]) -> CMatrix {
        let factors: Vec<CMatrix> = (0..self.registers.len())
            .map(|p| {
                ops.iter()
                    .find(|(q, _)| *q == p)
                    .map_or_else(|| CMatrix::identity(2, 2), |(_, m)| m.clone())
            })
            .collect();
        kron_all(&factors)
    }

    fn same_registers(&self, other: &DensityMatrix) -> Result<()> {
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

/// ½ ‖ρ/tr ρ − σ/tr σ‖₁ over identical registers.
pub fn trace_distance(rho: &DensityMatrix, sigma: &DensityMatrix) -> Result<f64> {
    rho.same_registers(sigma)?;
    let a = rho.normalized()?;
    let b = sigma.normalized()?;
    let diff = DensityMatrix {
        registers: a.registers.clone(),
        matrix: &a.matrix - &b.matrix,
    };
    Ok(0.5 * diff.eigenvalues().iter().map(|e| e.abs()).sum::<f64>())
}

fn gate_matrix(g: &Gate) -> CMatrix {
    CMatrix::from_row_slice(2, 2, &[g[0][0], g[0][1], g[1][0], g[1][1]])
}

/// |row⟩⟨col|
fn unit(row: usize, col: usize) -> CMatrix {
    let mut m = CMatrix::zeros(2, 2);
    m[(row, col)] = Complex64::new(1.0, 0.0);
    m
}

fn kron_all(factors: &[CMatrix]) -> CMatrix {
    factors
        .iter()
        .skip(1)
        .fold(factors[0].clone(), |acc, f| acc.kronecker(f))
}
