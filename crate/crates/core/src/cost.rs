// Copyright 2026 msprep Contributors
// SPDX-License-Identifier: Apache-2.0

//! The multi-state preparation cost
//!
//! ```text
//! Δ(U) = 1 − |Tr[U V W†]| / m = 1 − |Σ_i ⟨w_i|U|v_i⟩| / m
//! ```
//!
//! and its gradient with respect to circuit parameters. `Δ` lies in
//! `[0, 1]` and vanishes exactly when `U|v_i⟩ = e^{iφ}|w_i⟩` for all `i` with
//! one shared phase `φ`. It reduces to `1 − |⟨ψ|U|0⟩|` for state preparation
//! and to `1 − |Tr[U W†]| / 2^n` for unitary synthesis.

use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::circuit::{apply_1q_adjoint, apply_cnot, apply_columns, derivative, env_1q, matrix, Circuit, GateKind};
use crate::linalg::Unitary;
use crate::states::{orthonormalize, StateSystem, StateVector, DEFAULT_RANK_CUTOFF};
use crate::{Error, Result};

/// Below this trace magnitude the cost is treated as non-differentiable.
pub const DEGENERATE_TRACE: f64 = 1e-12;

/// `V`, `W` and the precomputed `M = V W†` for one state system.
#[derive(Clone, Debug)]
pub struct CostContext {
    v: DMatrix<Complex64>,
    w: DMatrix<Complex64>,
    m_mat: DMatrix<Complex64>,
}

impl CostContext {
    pub fn new(sys: &StateSystem) -> Self {
        Self::from_matrices(sys.v_matrix(), sys.w_matrix()).expect("state systems have matching V and W")
    }

    /// Context from raw `2^n × m` matrices. Columns need not be normalized,
    /// which allows reweighted inputs.
    pub fn from_matrices(v: DMatrix<Complex64>, w: DMatrix<Complex64>) -> Result<Self> {
        if v.shape() != w.shape() {
            return Err(Error::DimensionMismatch { expected: v.ncols(), found: w.ncols() });
        }
        if v.ncols() == 0 {
            return Err(Error::InvalidArgument("cost context needs at least one column".into()));
        }
        let m_mat = &v * w.adjoint();
        Ok(Self { v, w, m_mat })
    }

    /// Number of pairs `m`.
    pub fn m(&self) -> usize {
        self.v.ncols()
    }

    pub fn dim(&self) -> usize {
        self.v.nrows()
    }

    pub fn v(&self) -> &DMatrix<Complex64> {
        &self.v
    }

    pub fn w(&self) -> &DMatrix<Complex64> {
        &self.w
    }

    /// `M = V W†`.
    pub fn m_matrix(&self) -> &DMatrix<Complex64> {
        &self.m_mat
    }

    fn check_circuit(&self, c: &Circuit) -> Result<()> {
        let dim = 1usize << c.num_qubits();
        if dim != self.dim() {
            return Err(Error::DimensionMismatch { expected: self.dim(), found: dim });
        }
        Ok(())
    }
}

/// `1 − |Tr[U M]| / m`.
pub fn msp_cost(ctx: &CostContext, u: &Unitary) -> Result<f64> {
    if u.shape() != (ctx.dim(), ctx.dim()) {
        return Err(Error::DimensionMismatch { expected: ctx.dim(), found: u.nrows() });
    }
    let trace: Complex64 = u.component_mul(&ctx.m_mat.transpose()).sum();
    Ok(1.0 - trace.norm() / ctx.m() as f64)
}

#[derive(Clone, Debug, PartialEq)]
pub struct CostGrad {
    pub cost: f64,
    pub grad: Vec<f64>,
    /// Set when `|Tr[U M]|` is too small for the gradient to be defined; the
    /// gradient is then reported as zero.
    pub degenerate: bool,
}

fn trace_wu_v(w: &DMatrix<Complex64>, uv: &DMatrix<Complex64>) -> Complex64 {
    w.iter().zip(uv.iter()).map(|(x, y)| x.conj() * y).sum()
}

/// Cost of the circuit at `params`, by pushing the `m` input columns through
/// the circuit rather than materializing its unitary.
pub fn circuit_cost(ctx: &CostContext, c: &Circuit, params: &[f64]) -> Result<f64> {
    ctx.check_circuit(c)?;
    let mut a = ctx.v.clone();
    apply_columns(c, params, &mut a)?;
    Ok(1.0 - trace_wu_v(&ctx.w, &a).norm() / ctx.m() as f64)
}

/// Cost and its gradient.
///
/// With `T = Tr[W† U V]`, component `k` of the gradient is
/// `−Re(conj(T) ∂T/∂θ_k) / (m |T|)`. `∂T/∂θ_k` is accumulated in a single
/// backward sweep: the forward images `U V` are peeled gate by gate while
/// `W` is pulled back through the same gates, so each parameterized gate
/// contributes a 2×2 contraction.
pub fn msp_cost_and_grad(ctx: &CostContext, c: &Circuit, params: &[f64]) -> Result<CostGrad> {
    ctx.check_circuit(c)?;
    let m = ctx.m() as f64;
    let n = c.num_qubits();
    let dim = ctx.dim();
    let mut a = ctx.v.clone();
    apply_columns(c, params, &mut a)?;
    let t = trace_wu_v(&ctx.w, &a);
    let cost = 1.0 - t.norm() / m;
    let mut grad = vec![0.0; c.num_params()];
    if c.num_params() == 0 {
        return Ok(CostGrad { cost, grad, degenerate: false });
    }
    if t.norm() < DEGENERATE_TRACE {
        return Ok(CostGrad { cost, grad, degenerate: true });
    }
    let scale = -t.conj() / (m * t.norm());
    let mut b = ctx.w.clone();
    for gate in c.gates().iter().rev() {
        match gate.kind {
            GateKind::Cnot => {
                let (ctl, tgt) = (gate.qubits[0], gate.qubits[1]);
                for col in a.as_mut_slice().chunks_exact_mut(dim) {
                    apply_cnot(col, n, ctl, tgt);
                }
                for col in b.as_mut_slice().chunks_exact_mut(dim) {
                    apply_cnot(col, n, ctl, tgt);
                }
            }
            kind => {
                let q = gate.qubits[0];
                let p = gate.params(params);
                let g = matrix(kind, p);
                for col in a.as_mut_slice().chunks_exact_mut(dim) {
                    apply_1q_adjoint(col, n, q, &g);
                }
                let zero = Complex64::new(0.0, 0.0);
                let mut env = [[zero; 2]; 2];
                for (bc, ac) in b.as_slice().chunks_exact(dim).zip(a.as_slice().chunks_exact(dim)) {
                    let e = env_1q(bc, ac, n, q);
                    for r in 0..2 {
                        for s in 0..2 {
                            env[r][s] += e[r][s];
                        }
                    }
                }
                for k in 0..kind.num_params() {
                    let d = derivative(kind, p, k);
                    let dt = d[0][0] * env[0][0] + d[0][1] * env[0][1] + d[1][0] * env[1][0] + d[1][1] * env[1][1];
                    grad[gate.param_offset + k] = (scale * dt).re;
                }
                for col in b.as_mut_slice().chunks_exact_mut(dim) {
                    apply_1q_adjoint(col, n, q, &g);
                }
            }
        }
    }
    Ok(CostGrad { cost, grad, degenerate: false })
}

/// State-preparation cost `1 − |⟨target|U|0…0⟩|`.
pub fn state_prep_cost(target: &StateVector, u: &Unitary) -> Result<f64> {
    if u.shape() != (target.dim(), target.dim()) {
        return Err(Error::DimensionMismatch { expected: target.dim(), found: u.nrows() });
    }
    Ok(1.0 - target.amps().dotc(&u.column(0)).norm())
}

/// Cost with every direction of the input span weighted equally:
/// `1 − |Tr[(W S D^{-1/2})† U (V S D^{-1/2})]| / m`.
///
/// Provided for comparison only. Refuses unsolvable systems, where no
/// single `S, D` serves both sides, and rank-deficient ones, where
/// `D^{-1/2}` does not exist.
pub fn alt_cost(sys: &StateSystem, u: &Unitary) -> Result<f64> {
    if u.shape() != (sys.dim(), sys.dim()) {
        return Err(Error::DimensionMismatch { expected: sys.dim(), found: u.nrows() });
    }
    let ortho = orthonormalize(sys, DEFAULT_RANK_CUTOFF)?;
    if ortho.rank() < sys.len() {
        return Err(Error::RankDeficient { rank: ortho.rank(), m: sys.len() });
    }
    let uv = u * &ortho.v_tilde;
    let trace = trace_wu_v(&ortho.w_tilde, &uv);
    Ok(1.0 - trace.norm() / sys.len() as f64)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::circuit::unitary_of;
    use crate::states::complete_unitary;
    use std::f64::consts::FRAC_1_SQRT_2 as S;

    fn singlet_system() -> StateSystem {
        StateSystem::new(vec![
            (StateVector::basis(2, 0).unwrap(), StateVector::basis(2, 0).unwrap()),
            (StateVector::basis(2, 3).unwrap(), StateVector::from_real(&[0.0, S, -S, 0.0]).unwrap()),
        ])
        .unwrap()
    }

    #[test]
    fn identity_on_singlet_system_costs_half() {
        let ctx = CostContext::new(&singlet_system());
        let c = msp_cost(&ctx, &DMatrix::identity(4, 4)).unwrap();
        assert!((c - 0.5).abs() < 1e-15);
    }

    #[test]
    fn exact_completion_costs_zero() {
        let sys = singlet_system();
        let u = complete_unitary(&sys).unwrap();
        assert!(msp_cost(&CostContext::new(&sys), &u).unwrap().abs() < 1e-12);
    }

    #[test]
    fn circuit_cost_matches_matrix_cost() {
        let sys = singlet_system();
        let ctx = CostContext::new(&sys);
        let mut c = Circuit::new(2);
        c.u3(0).unwrap().u3(1).unwrap().cnot(0, 1).unwrap().ry(0).unwrap();
        let p = [0.3, 1.0, -0.2, 2.0, 0.5, 0.1, 1.7];
        let direct = msp_cost(&ctx, &unitary_of(&c, &p).unwrap()).unwrap();
        assert!((circuit_cost(&ctx, &c, &p).unwrap() - direct).abs() < 1e-14);
        assert!((msp_cost_and_grad(&ctx, &c, &p).unwrap().cost - direct).abs() < 1e-14);
    }

    #[test]
    fn parameter_free_circuit_has_empty_gradient() {
        let ctx = CostContext::new(&singlet_system());
        let mut c = Circuit::new(2);
        c.cnot(0, 1).unwrap();
        let cg = msp_cost_and_grad(&ctx, &c, &[]).unwrap();
        assert!(cg.grad.is_empty());
        assert!((cg.cost - msp_cost(&ctx, &unitary_of(&c, &[]).unwrap()).unwrap()).abs() < 1e-15);
    }

    #[test]
    fn degenerate_trace_reports_zero_gradient() {
        // |0⟩ → |1⟩ with the identity: T = 0.
        let sys = StateSystem::new(vec![(StateVector::basis(1, 0).unwrap(), StateVector::basis(1, 1).unwrap())]).unwrap();
        let mut c = Circuit::new(1);
        c.rz(0).unwrap();
        let cg = msp_cost_and_grad(&CostContext::new(&sys), &c, &[0.4]).unwrap();
        assert!(cg.degenerate);
        assert_eq!(cg.grad, vec![0.0]);
        assert!((cg.cost - 1.0).abs() < 1e-15);
    }

    #[test]
    fn state_prep_endpoints() {
        let id = DMatrix::identity(4, 4);
        assert!(state_prep_cost(&StateVector::basis(2, 0).unwrap(), &id).unwrap().abs() < 1e-15);
        assert!((state_prep_cost(&StateVector::basis(2, 2).unwrap(), &id).unwrap() - 1.0).abs() < 1e-15);
    }

    #[test]
    fn dimension_checks() {
        let ctx = CostContext::new(&singlet_system());
        assert!(msp_cost(&ctx, &DMatrix::identity(2, 2)).is_err());
        assert!(circuit_cost(&ctx, &Circuit::new(3), &[]).is_err());
        assert!(alt_cost(&singlet_system(), &DMatrix::identity(8, 8)).is_err());
    }

    #[test]
    fn alt_cost_refuses_rank_deficiency() {
        let v = StateVector::from_real(&[0.6, 0.8]).unwrap();
        let sys = StateSystem::new(vec![(v.clone(), v.clone()), (v.clone(), v)]).unwrap();
        assert!(matches!(alt_cost(&sys, &DMatrix::identity(2, 2)), Err(Error::RankDeficient { rank: 1, m: 2 })));
    }
}
