// Copyright 2026 msprep Contributors
// SPDX-License-Identifier: Apache-2.0

//! Statevector kernels and unitary materialization.

use nalgebra::DMatrix;
use num_complex::Complex64;

use super::gates::{derivative, matrix, GateKind, Mat2};
use super::{Circuit, PlacedGate};
use crate::linalg::Unitary;
use crate::states::StateVector;
use crate::{Error, Result};

#[inline]
fn stride(num_qubits: usize, q: usize) -> usize {
    1 << (num_qubits - 1 - q)
}

/// Apply a 2×2 matrix to qubit `q` of one amplitude vector.
pub(crate) fn apply_1q(amps: &mut [Complex64], num_qubits: usize, q: usize, g: &Mat2) {
    let s = stride(num_qubits, q);
    for base in (0..amps.len()).step_by(2 * s) {
        for i in base..base + s {
            let a = amps[i];
            let b = amps[i + s];
            amps[i] = g[0][0] * a + g[0][1] * b;
            amps[i + s] = g[1][0] * a + g[1][1] * b;
        }
    }
}

/// Apply the conjugate transpose of `g` to qubit `q`.
pub(crate) fn apply_1q_adjoint(amps: &mut [Complex64], num_qubits: usize, q: usize, g: &Mat2) {
    let h = [[g[0][0].conj(), g[1][0].conj()], [g[0][1].conj(), g[1][1].conj()]];
    apply_1q(amps, num_qubits, q, &h);
}

pub(crate) fn apply_cnot(amps: &mut [Complex64], num_qubits: usize, control: usize, target: usize) {
    let cmask = stride(num_qubits, control);
    let tmask = stride(num_qubits, target);
    for i in 0..amps.len() {
        if i & cmask != 0 && i & tmask == 0 {
            amps.swap(i, i | tmask);
        }
    }
}

/// `E[r][c] = Σ conj(b[i_r]) · a[i_c]` over the amplitude pairs `(i_0, i_1)`
/// that differ only in qubit `q`. Contracting `E` with a gate matrix `D`
/// gives `⟨b| D_q |a⟩`.
pub(crate) fn env_1q(b: &[Complex64], a: &[Complex64], num_qubits: usize, q: usize) -> Mat2 {
    let s = stride(num_qubits, q);
    let zero = Complex64::new(0.0, 0.0);
    let mut e = [[zero; 2]; 2];
    for base in (0..a.len()).step_by(2 * s) {
        for i in base..base + s {
            let (a0, a1) = (a[i], a[i + s]);
            let (b0, b1) = (b[i].conj(), b[i + s].conj());
            e[0][0] += b0 * a0;
            e[0][1] += b0 * a1;
            e[1][0] += b1 * a0;
            e[1][1] += b1 * a1;
        }
    }
    e
}

fn apply_gate(amps: &mut [Complex64], num_qubits: usize, gate: &PlacedGate, params: &[f64]) {
    match gate.kind {
        GateKind::Cnot => apply_cnot(amps, num_qubits, gate.qubits[0], gate.qubits[1]),
        kind => apply_1q(amps, num_qubits, gate.qubits[0], &matrix(kind, gate.params(params))),
    }
}

/// Run the circuit on every column of `block` in place.
pub fn apply_columns(c: &Circuit, params: &[f64], block: &mut DMatrix<Complex64>) -> Result<()> {
    c.check_params(params)?;
    let dim = 1usize << c.num_qubits();
    if block.nrows() != dim {
        return Err(Error::DimensionMismatch { expected: dim, found: block.nrows() });
    }
    let n = c.num_qubits();
    let mats: Vec<Option<Mat2>> = c
        .gates()
        .iter()
        .map(|g| (g.kind != GateKind::Cnot).then(|| matrix(g.kind, g.params(params))))
        .collect();
    for col in block.as_mut_slice().chunks_exact_mut(dim) {
        for (g, m) in c.gates().iter().zip(&mats) {
            match m {
                Some(m) => apply_1q(col, n, g.qubits[0], m),
                None => apply_cnot(col, n, g.qubits[0], g.qubits[1]),
            }
        }
    }
    Ok(())
}

/// Unitary implemented by the circuit; gate 0 acts first.
pub fn unitary_of(c: &Circuit, params: &[f64]) -> Result<Unitary> {
    let dim = 1usize << c.num_qubits();
    let mut u = DMatrix::identity(dim, dim);
    apply_columns(c, params, &mut u)?;
    Ok(u)
}

/// Simulate the circuit on one state without forming its unitary.
pub fn apply(c: &Circuit, params: &[f64], s: &StateVector) -> Result<StateVector> {
    c.check_params(params)?;
    if s.num_qubits() != c.num_qubits() {
        return Err(Error::DimensionMismatch { expected: 1 << c.num_qubits(), found: s.dim() });
    }
    let mut amps = s.amps().clone();
    for g in c.gates() {
        apply_gate(amps.as_mut_slice(), c.num_qubits(), g, params);
    }
    Ok(StateVector::from_unitary_image(c.num_qubits(), amps))
}

/// `∂U/∂θ_k` for every parameter, in parameter order.
pub fn unitary_jacobian(c: &Circuit, params: &[f64]) -> Result<Vec<Unitary>> {
    c.check_params(params)?;
    let n = c.num_qubits();
    let dim = 1usize << n;
    let mut out = Vec::with_capacity(c.num_params());
    for (j, gate) in c.gates().iter().enumerate() {
        for k in 0..gate.kind.num_params() {
            let d = derivative(gate.kind, gate.params(params), k);
            let mut u = DMatrix::identity(dim, dim);
            for col in u.as_mut_slice().chunks_exact_mut(dim) {
                for (i, g) in c.gates().iter().enumerate() {
                    if i == j {
                        apply_1q(col, n, g.qubits[0], &d);
                    } else {
                        apply_gate(col, n, g, params);
                    }
                }
            }
            out.push(u);
        }
    }
    Ok(out)
}
