// Copyright 2026 msprep Contributors
// SPDX-License-Identifier: Apache-2.0

mod common;

use common::*;
use msprep_core::circuit::unitary_of;
use msprep_core::cost::{alt_cost, circuit_cost, msp_cost, msp_cost_and_grad, state_prep_cost};
use msprep_core::expm::expm;
use msprep_core::haar::haar_unitary;
use msprep_core::states::{complete_unitary, restrict_unitary};
use msprep_core::{Complex64, CostContext, Error, StateSystem, StateVector, Unitary};
use nalgebra::DMatrix;

fn random_pairs(n: usize, m: usize, seed: u64) -> StateSystem {
    let pairs = (0..m as u64)
        .map(|i| (random_state(n, seed * 97 + 2 * i), random_state(n, seed * 97 + 2 * i + 1)))
        .collect();
    StateSystem::new(pairs).unwrap()
}

#[test]
fn cost_lies_in_unit_interval() {
    for seed in 0..10_000u64 {
        let n = 1 + (seed % 3) as usize;
        let m = 1 + (seed / 3) as usize % (1 << n);
        let sys = random_pairs(n, m, seed);
        let c = msp_cost(&CostContext::new(&sys), &haar_unitary(1 << n, seed)).unwrap();
        assert!((0.0..=1.0 + 1e-15).contains(&c), "seed {seed}: {c}");
    }
}

#[test]
fn cost_ignores_global_phase() {
    for seed in 0..200u64 {
        let sys = random_pairs(2, 3, seed);
        let ctx = CostContext::new(&sys);
        let u = haar_unitary(4, seed + 1);
        let phase = Complex64::from_polar(1.0, seed as f64 * 0.37);
        let a = msp_cost(&ctx, &u).unwrap();
        let b = msp_cost(&ctx, &(&u * phase)).unwrap();
        assert!((a - b).abs() < 1e-12);
    }
}

#[test]
fn single_pair_from_zero_is_state_prep() {
    for seed in 0..200u64 {
        let n = 1 + (seed % 3) as usize;
        let target = random_state(n, seed);
        let sys = StateSystem::new(vec![(basis(n, 0), target.clone())]).unwrap();
        let u = haar_unitary(1 << n, seed + 5);
        let a = msp_cost(&CostContext::new(&sys), &u).unwrap();
        assert!((a - state_prep_cost(&target, &u).unwrap()).abs() < 1e-12);
    }
}

#[test]
fn full_basis_is_unitary_synthesis() {
    for seed in 0..200u64 {
        let n = 1 + (seed % 3) as usize;
        let dim = 1 << n;
        let target = haar_unitary(dim, seed);
        let sys = restrict_unitary(&target, &(0..dim).collect::<Vec<_>>()).unwrap();
        let u = haar_unitary(dim, seed + 11);
        let hs = (target.adjoint() * &u).trace().norm() / dim as f64;
        let a = msp_cost(&CostContext::new(&sys), &u).unwrap();
        assert!((a - (1.0 - hs)).abs() < 1e-12);
    }
}

#[test]
fn gradient_matches_central_differences() {
    let h = 1e-5;
    let mut checked = 0;
    for seed in 0..100u64 {
        let n = 1 + (seed % 3) as usize;
        let m = 1 + (seed as usize) % (1 << n);
        let (sys, _) = random_solvable(n, m, seed);
        let ctx = CostContext::new(&sys);
        let (c, p) = random_template(n, 10, seed + 500);
        let cg = msp_cost_and_grad(&ctx, &c, &p).unwrap();
        if cg.degenerate {
            continue;
        }
        let fd: Vec<f64> = (0..p.len())
            .map(|k| {
                let mut plus = p.clone();
                let mut minus = p.clone();
                plus[k] += h;
                minus[k] -= h;
                (circuit_cost(&ctx, &c, &plus).unwrap() - circuit_cost(&ctx, &c, &minus).unwrap()) / (2.0 * h)
            })
            .collect();
        let diff: f64 = cg.grad.iter().zip(&fd).map(|(a, b)| (a - b).powi(2)).sum::<f64>().sqrt();
        let scale: f64 = fd.iter().map(|x| x * x).sum::<f64>().sqrt().max(1e-3);
        assert!(diff / scale < 1e-5, "seed {seed}: relative error {}", diff / scale);
        checked += 1;
    }
    assert!(checked >= 95);
}

#[test]
fn small_cost_bounds_state_errors() {
    for seed in 0..100u64 {
        let (sys, u) = random_solvable(2, 3, seed);
        // Nudge the exact solution by a small random evolution.
        let g = haar_unitary(4, seed + 3);
        let herm = (&g + g.adjoint()).scale(0.5);
        let kick = expm(&(herm * Complex64::new(0.0, 1e-3)));
        let v = &kick * &u;
        let m = sys.len() as f64;
        let ctx = CostContext::new(&sys);
        let delta = msp_cost(&ctx, &v).unwrap();
        let trace: Complex64 = (sys.w_matrix().adjoint() * &v * sys.v_matrix()).trace();
        let phase = trace / trace.norm();
        let bound = (2.0 * m * delta).sqrt();
        for (vi, wi) in sys.pairs() {
            assert!((&v * vi.amps() - wi.amps() * phase).norm() <= bound + 1e-12);
        }
    }
}

fn near_parallel(eps: f64, out_scale: f64) -> StateSystem {
    let a = (1.0 - eps * eps).sqrt();
    let b = (1.0 - out_scale * out_scale * eps * eps).sqrt();
    let e = out_scale * eps;
    StateSystem::new(vec![(real(&[a, eps]), real(&[b, e])), (real(&[a, -eps]), real(&[b, -e]))]).unwrap()
}

#[test]
fn approximate_mapping_costs_half_eps_squared() {
    let eps: f64 = 0.01;
    let sys = near_parallel(eps, 2.0);
    let c = msp_cost(&CostContext::new(&sys), &DMatrix::identity(2, 2)).unwrap();
    let closed = 1.0 - (((1.0 - eps * eps) * (1.0 - 4.0 * eps * eps)).sqrt() + 2.0 * eps * eps);
    assert!((c - closed).abs() < 1e-15);
    assert!((c - eps * eps / 2.0).abs() <= 10.0 * eps.powi(4), "{c}");
    assert!(matches!(alt_cost(&sys, &DMatrix::identity(2, 2)), Err(Error::Unsolvable(_))));
}

#[test]
fn alt_cost_on_exact_solutions() {
    let sys = near_parallel(0.1, 1.0);
    let u: Unitary = complete_unitary(&sys).unwrap();
    assert!(alt_cost(&sys, &u).unwrap().abs() < 1e-8);
    let (c, p) = two_cnot_circuit();
    assert!(alt_cost(&singlet_system(), &unitary_of(&c, &p).unwrap()).unwrap().abs() < 1e-12);
}

#[test]
fn orthogonal_inputs_make_both_costs_agree() {
    for seed in 0..50u64 {
        let target = haar_unitary(4, seed);
        let sys = restrict_unitary(&target, &[0, 3]).unwrap();
        let u = haar_unitary(4, seed + 100);
        let a = msp_cost(&CostContext::new(&sys), &u).unwrap();
        assert!((a - alt_cost(&sys, &u).unwrap()).abs() < 1e-12);
    }
}

#[test]
fn zero_cost_exactly_at_solutions() {
    let (c, p) = two_cnot_circuit();
    let ctx = CostContext::new(&singlet_system());
    assert!(circuit_cost(&ctx, &c, &p).unwrap().abs() < 1e-12);
    // Same circuit and parameters also solve the combined system.
    assert!(circuit_cost(&CostContext::new(&combined_system()), &c, &p).unwrap().abs() < 1e-12);
    let s: StateVector = basis(2, 0);
    assert!(state_prep_cost(&s, &DMatrix::identity(4, 4)).unwrap().abs() < 1e-15);
}
