// Copyright 2026 msprep Contributors
// SPDX-License-Identifier: Apache-2.0

//! Fitting template parameters to a state system.

use std::f64::consts::TAU;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::circuit::Circuit;
use crate::cost::{circuit_cost, msp_cost_and_grad, CostContext};
use crate::optimize::{minimize, MinimizeOptions};
use crate::states::{require_solvable, StateSystem};
use crate::{Error, Result};

/// A local run keeps optimizing past the success threshold down to
/// `success_threshold * POLISH_FACTOR`, which costs a handful of
/// superlinear BFGS steps and buys roughly 30x smaller state errors.
const POLISH_FACTOR: f64 = 1e-3;

#[derive(Clone, Debug, PartialEq)]
pub struct InstantiateConfig {
    /// A fit counts as converged once the cost is at or below this value.
    pub success_threshold: f64,
    pub max_iters: usize,
    pub num_starts: usize,
    pub seed: u64,
    pub gradient_tolerance: f64,
}

impl Default for InstantiateConfig {
    fn default() -> Self {
        Self { success_threshold: 1e-8, max_iters: 1000, num_starts: 8, seed: 0, gradient_tolerance: 1e-10 }
    }
}

impl InstantiateConfig {
    pub fn validate(&self) -> Result<()> {
        let ok = self.success_threshold > 0.0
            && self.success_threshold < 1.0
            && self.max_iters > 0
            && self.num_starts > 0
            && self.gradient_tolerance > 0.0;
        if ok {
            Ok(())
        } else {
            Err(Error::InvalidArgument(format!("invalid instantiate config {self:?}")))
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct InstantiateResult {
    pub params: Vec<f64>,
    pub final_cost: f64,
    pub converged: bool,
    pub starts_used: usize,
    pub iterations_total: usize,
}

/// Initial angles for restart `start`, uniform in `[0, 2π)`. Each start
/// draws from its own ChaCha stream so restarts do not depend on each other.
pub fn initial_angles(seed: u64, start: usize, len: usize) -> Vec<f64> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(start as u64);
    (0..len).map(|_| rng.random::<f64>() * TAU).collect()
}

/// Fit `c` to `sys` by multistart quasi-Newton minimization of the trace
/// cost. Unsolvable systems are refused before any optimization.
pub fn instantiate(c: &Circuit, sys: &StateSystem, cfg: &InstantiateConfig) -> Result<InstantiateResult> {
    require_solvable(sys)?;
    if c.num_qubits() != sys.num_qubits() {
        return Err(Error::DimensionMismatch { expected: sys.num_qubits(), found: c.num_qubits() });
    }
    instantiate_in_context(c, &CostContext::new(sys), cfg, None)
}

/// Instantiation against a prepared cost context, with no solvability
/// check. When `warm_start` is given it replaces the first random start.
///
/// Starts run in order and stop at the first converged one; otherwise the
/// lowest final cost wins, ties going to the earlier start.
pub fn instantiate_in_context(
    c: &Circuit,
    ctx: &CostContext,
    cfg: &InstantiateConfig,
    warm_start: Option<&[f64]>,
) -> Result<InstantiateResult> {
    cfg.validate()?;
    if let Some(w) = warm_start {
        c.check_params(w)?;
    }
    if c.num_params() == 0 {
        let final_cost = circuit_cost(ctx, c, &[])?;
        return Ok(InstantiateResult {
            params: Vec::new(),
            final_cost,
            converged: final_cost <= cfg.success_threshold,
            starts_used: 1,
            iterations_total: 0,
        });
    }

    let opts = MinimizeOptions {
        max_iters: cfg.max_iters,
        gradient_tolerance: cfg.gradient_tolerance,
        target_cost: cfg.success_threshold * POLISH_FACTOR,
    };
    let mut best: Option<(f64, Vec<f64>)> = None;
    let mut iterations_total = 0;
    let mut starts_used = 0;
    let mut failure = None;
    for start in 0..cfg.num_starts {
        let x0 = match (start, warm_start) {
            (0, Some(w)) => w.to_vec(),
            _ => initial_angles(cfg.seed, start, c.num_params()),
        };
        let objective = |x: &[f64]| match msp_cost_and_grad(ctx, c, x) {
            Ok(cg) => (cg.cost, cg.grad),
            Err(e) => {
                failure.get_or_insert(e);
                (f64::NAN, vec![0.0; x.len()])
            }
        };
        let out = minimize(objective, &x0, &opts);
        if let Some(e) = failure.take() {
            return Err(e);
        }
        starts_used += 1;
        iterations_total += out.iterations;
        if best.as_ref().is_none_or(|(c, _)| out.cost < *c) {
            best = Some((out.cost, out.x));
        }
        if best.as_ref().is_some_and(|(c, _)| *c <= cfg.success_threshold) {
            break;
        }
    }
    let (final_cost, params) = best.expect("at least one start runs");
    Ok(InstantiateResult {
        params,
        final_cost,
        converged: final_cost <= cfg.success_threshold,
        starts_used,
        iterations_total,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::states::StateVector;

    #[test]
    fn angles_are_reproducible_and_in_range() {
        let a = initial_angles(7, 3, 20);
        assert_eq!(a, initial_angles(7, 3, 20));
        assert_ne!(a, initial_angles(7, 4, 20));
        assert!(a.iter().all(|&x| (0.0..TAU).contains(&x)));
    }

    #[test]
    fn empty_template_on_identity_system() {
        let sys = StateSystem::new(vec![(StateVector::basis(2, 1).unwrap(), StateVector::basis(2, 1).unwrap())]).unwrap();
        let r = instantiate(&Circuit::new(2), &sys, &InstantiateConfig::default()).unwrap();
        assert!(r.converged);
        assert_eq!(r.final_cost, 0.0);
        assert_eq!(r.iterations_total, 0);
    }

    #[test]
    fn single_qubit_state_prep() {
        let target = StateVector::from_real(&[0.6, -0.8]).unwrap();
        let sys = StateSystem::new(vec![(StateVector::basis(1, 0).unwrap(), target)]).unwrap();
        let mut c = Circuit::new(1);
        c.u3(0).unwrap();
        let r = instantiate(&c, &sys, &InstantiateConfig::default()).unwrap();
        assert!(r.converged, "{r:?}");
        assert_eq!(r.starts_used, 1);
    }

    #[test]
    fn refuses_unsolvable() {
        let s = std::f64::consts::FRAC_1_SQRT_2;
        let sys = StateSystem::new(vec![
            (StateVector::basis(1, 0).unwrap(), StateVector::basis(1, 0).unwrap()),
            (StateVector::basis(1, 1).unwrap(), StateVector::from_real(&[s, s]).unwrap()),
        ])
        .unwrap();
        let mut c = Circuit::new(1);
        c.u3(0).unwrap();
        assert!(matches!(instantiate(&c, &sys, &InstantiateConfig::default()), Err(Error::Unsolvable(_))));
    }

    #[test]
    fn rejects_bad_config_and_sizes() {
        let sys = StateSystem::new(vec![(StateVector::basis(1, 0).unwrap(), StateVector::basis(1, 0).unwrap())]).unwrap();
        let cfg = InstantiateConfig { num_starts: 0, ..Default::default() };
        assert!(instantiate(&Circuit::new(1), &sys, &cfg).is_err());
        assert!(instantiate(&Circuit::new(2), &sys, &InstantiateConfig::default()).is_err());
    }
}
