// Copyright 2026 msprep Contributors
// SPDX-License-Identifier: Apache-2.0

#![allow(dead_code)]

use std::f64::consts::FRAC_1_SQRT_2 as S;

use msprep_core::haar::haar_unitary;
use msprep_core::{Circuit, GateKind, StateSystem, StateVector, Unitary};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub fn basis(n: usize, i: usize) -> StateVector {
    StateVector::basis(n, i).unwrap()
}

pub fn real(amps: &[f64]) -> StateVector {
    StateVector::from_real(amps).unwrap()
}

/// `|00⟩ → |00⟩`, `|11⟩ → (|01⟩ − |10⟩)/√2`.
pub fn singlet_system() -> StateSystem {
    StateSystem::new(vec![(basis(2, 0), basis(2, 0)), (basis(2, 3), real(&[0.0, S, -S, 0.0]))]).unwrap()
}

/// The singlet system with its second pair replaced by the normalized sum of both.
pub fn combined_system() -> StateSystem {
    StateSystem::new(vec![(basis(2, 0), basis(2, 0)), (real(&[S, 0.0, 0.0, S]), real(&[S, 0.5, -0.5, 0.0]))]).unwrap()
}

pub fn mismatched_system() -> StateSystem {
    StateSystem::new(vec![
        (basis(2, 0), real(&[S, S, 0.0, 0.0])),
        (real(&[S, 0.0, 0.0, S]), real(&[0.0, S, S, 0.0])),
    ])
    .unwrap()
}

/// A known two-CNOT solution of the singlet system, with its angles.
pub fn two_cnot_circuit() -> (Circuit, Vec<f64>) {
    use std::f64::consts::PI;
    let mut c = Circuit::new(2);
    c.ry(1).unwrap().cnot(0, 1).unwrap().ry(0).unwrap().ry(1).unwrap();
    c.cnot(0, 1).unwrap().ry(0).unwrap().ry(1).unwrap();
    (c, vec![7.0 * PI / 4.0, 3.0 * PI / 2.0, 7.0 * PI / 4.0, 3.0 * PI / 2.0, PI / 2.0])
}

pub fn random_state(n: usize, seed: u64) -> StateVector {
    StateVector::from_dvector(haar_unitary(1 << n, seed).column(0).into_owned()).unwrap()
}

/// `m` random (generally non-orthogonal) inputs and their images under a
/// random unitary, which is returned too.
pub fn random_solvable(n: usize, m: usize, seed: u64) -> (StateSystem, Unitary) {
    let u = haar_unitary(1 << n, seed ^ 0xA5A5);
    let pairs = (0..m)
        .map(|i| {
            let v = random_state(n, seed.wrapping_mul(31).wrapping_add(i as u64));
            let w = StateVector::from_dvector(&u * v.amps()).unwrap();
            (v, w)
        })
        .collect();
    (StateSystem::new(pairs).unwrap(), u)
}

/// Random template over every gate kind, with random parameters.
pub fn random_template(n: usize, len: usize, seed: u64) -> (Circuit, Vec<f64>) {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut c = Circuit::new(n);
    for _ in 0..len {
        let q = rng.random_range(0..n);
        let kind = match rng.random_range(0..if n > 1 { 5 } else { 4 }) {
            0 => GateKind::Rx,
            1 => GateKind::Ry,
            2 => GateKind::Rz,
            3 => GateKind::U3,
            _ => GateKind::Cnot,
        };
        if kind == GateKind::Cnot {
            let t = (q + rng.random_range(1..n)) % n;
            c.cnot(q, t).unwrap();
        } else {
            c.push(kind, &[q]).unwrap();
        }
    }
    let params = (0..c.num_params()).map(|_| rng.random_range(-7.0..7.0)).collect();
    (c, params)
}
