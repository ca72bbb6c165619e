// Copyright 2026 msprep Contributors
// SPDX-License-Identifier: Apache-2.0

//! Application constructors: cat states over a GHZ backbone, and the
//! two-spin Heisenberg evolution restricted to its `{|01⟩, |10⟩}` block.

use std::f64::consts::{FRAC_PI_2, PI};

use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::circuit::Circuit;
use crate::states::{StateSystem, StateVector};
use crate::synth::{synthesize, SynthConfig};
use crate::{Error, Result};

/// A block of `k` qubits carrying `phi1` in one branch of the cat state and
/// `phi2` in the other.
#[derive(Clone, Debug, PartialEq)]
pub struct BlockSpec {
    pub phi1: StateVector,
    pub phi2: StateVector,
}

impl BlockSpec {
    /// The two local states must live on the same qubits and be orthogonal.
    pub fn new(phi1: StateVector, phi2: StateVector) -> Result<Self> {
        if phi1.num_qubits() != phi2.num_qubits() {
            return Err(Error::DimensionMismatch { expected: phi1.dim(), found: phi2.dim() });
        }
        let overlap = phi1.inner(&phi2).norm();
        if overlap > 1e-8 {
            return Err(Error::InvalidArgument(format!("block states overlap by {overlap:.3e}")));
        }
        Ok(Self { phi1, phi2 })
    }

    pub fn num_qubits(&self) -> usize {
        self.phi1.num_qubits()
    }

    /// `{|0…0⟩ → phi1, |10…0⟩ → phi2}` on the block's qubits.
    pub fn system(&self) -> Result<StateSystem> {
        let k = self.num_qubits();
        StateSystem::new(vec![
            (StateVector::basis(k, 0)?, self.phi1.clone()),
            (StateVector::basis(k, 1 << (k - 1))?, self.phi2.clone()),
        ])
    }
}

/// Circuit together with the parameter values it should run at.
#[derive(Clone, Debug)]
pub struct BoundCircuit {
    pub circuit: Circuit,
    pub params: Vec<f64>,
}

/// Parameters of a U3 acting as a Hadamard.
pub const HADAMARD_U3: [f64; 3] = [FRAC_PI_2, 0.0, PI];

/// `(|0…0⟩ + |1…1⟩)/√2` from `|0…0⟩`: a Hadamard-equivalent U3 on qubit 0
/// followed by the CNOT chain `0→1, 1→2, …`.
pub fn ghz_ladder(num_qubits: usize) -> Result<BoundCircuit> {
    if num_qubits == 0 {
        return Err(Error::InvalidArgument("GHZ ladder needs at least one qubit".into()));
    }
    let mut circuit = Circuit::new(num_qubits);
    circuit.u3(0)?;
    for q in 1..num_qubits {
        circuit.cnot(q - 1, q)?;
    }
    Ok(BoundCircuit { circuit, params: HADAMARD_U3.to_vec() })
}

#[derive(Clone, Debug)]
pub struct CatCircuit {
    pub bound: BoundCircuit,
    /// CNOTs used by each block's synthesized circuit.
    pub block_cnots: Vec<usize>,
}

/// Prepare `(⊗_b phi1_b + ⊗_b phi2_b)/√2` from `|0…0⟩`.
///
/// A GHZ ladder runs over the first qubit of every block; each block then
/// gets a synthesized circuit for `{|0…0⟩ → phi1, |10…0⟩ → phi2}`. A
/// converged block circuit maps both inputs with one shared phase, so the
/// two branches of the result keep relative phase `+1`.
pub fn cat_state_circuit(blocks: &[BlockSpec], cfg: &SynthConfig) -> Result<CatCircuit> {
    if blocks.is_empty() {
        return Err(Error::InvalidArgument("cat state needs at least one block".into()));
    }
    let offsets: Vec<usize> = blocks
        .iter()
        .scan(0, |acc, b| {
            let o = *acc;
            *acc += b.num_qubits();
            Some(o)
        })
        .collect();
    let n: usize = blocks.iter().map(BlockSpec::num_qubits).sum();
    let mut circuit = match &cfg.coupling {
        Some(g) if g.num_qubits() != n => {
            return Err(Error::InvalidArgument(format!("coupling has {} qubits, blocks have {n}", g.num_qubits())))
        }
        Some(g) => Circuit::with_coupling(g.clone()),
        None => Circuit::new(n),
    };
    circuit.u3(offsets[0])?;
    let mut params = HADAMARD_U3.to_vec();
    for w in offsets.windows(2) {
        circuit.cnot(w[0], w[1])?;
    }

    let mut block_cnots = Vec::with_capacity(blocks.len());
    for (b, (block, &offset)) in blocks.iter().zip(&offsets).enumerate() {
        let qubits: Vec<usize> = (offset..offset + block.num_qubits()).collect();
        let block_cfg = SynthConfig { coupling: cfg.coupling.as_ref().map(|g| g.induced(&qubits)), ..cfg.clone() };
        let r = synthesize(&block.system()?, &block_cfg)?;
        if !r.converged {
            return Err(Error::SynthesisFailed(format!("block {b} stopped at cost {:.3e}", r.final_cost)));
        }
        circuit.append_mapped(&r.circuit, &qubits)?;
        params.extend_from_slice(&r.params);
        block_cnots.push(r.cnot_count);
    }
    Ok(CatCircuit { bound: BoundCircuit { circuit, params }, block_cnots })
}

/// The ideal cat state for `blocks`.
pub fn cat_target(blocks: &[BlockSpec]) -> Result<StateVector> {
    let (first, rest) = blocks
        .split_first()
        .ok_or_else(|| Error::InvalidArgument("cat state needs at least one block".into()))?;
    let (b1, b2) = rest.iter().fold((first.phi1.clone(), first.phi2.clone()), |(a, b), blk| {
        (a.tensor(&blk.phi1), b.tensor(&blk.phi2))
    });
    let sum = (b1.amps() + b2.amps()).unscale(std::f64::consts::SQRT_2);
    StateVector::from_dvector(sum)
}

/// Two-spin Heisenberg Hamiltonian `XX + YY + ZZ` in the computational basis.
pub fn heisenberg_hamiltonian() -> DMatrix<Complex64> {
    let r = |x: f64| Complex64::new(x, 0.0);
    #[rustfmt::skip]
    let h = DMatrix::from_row_slice(4, 4, &[
        r(1.0), r(0.0),  r(0.0),  r(0.0),
        r(0.0), r(-1.0), r(2.0),  r(0.0),
        r(0.0), r(2.0),  r(-1.0), r(0.0),
        r(0.0), r(0.0),  r(0.0),  r(1.0),
    ]);
    h
}

/// `e^{−iHt}` restricted to `{|01⟩, |10⟩}`, in closed form:
///
/// ```text
/// |01⟩ ↦ e^{it} cos(2t)|01⟩ − i e^{it} sin(2t)|10⟩
/// |10⟩ ↦ e^{it} cos(2t)|10⟩ − i e^{it} sin(2t)|01⟩
/// ```
pub fn heisenberg_block_system(t: f64) -> Result<StateSystem> {
    let phase = Complex64::from_polar(1.0, t);
    let diag = phase * (2.0 * t).cos();
    let off = phase * Complex64::new(0.0, -(2.0 * t).sin());
    let zero = Complex64::new(0.0, 0.0);
    StateSystem::new(vec![
        (StateVector::basis(2, 1)?, StateVector::new(vec![zero, diag, off, zero])?),
        (StateVector::basis(2, 2)?, StateVector::new(vec![zero, off, diag, zero])?),
    ])
}
