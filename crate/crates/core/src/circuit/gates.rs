// Copyright 2026 msprep Contributors
// SPDX-License-Identifier: Apache-2.0

//! Gate matrices and their parameter derivatives.
//!
//! Rotations use `R_P(θ) = exp(−iθP/2)`. `U3(θ, φ, λ)` is the usual
//! `RZ(φ)·RY(θ)·RZ(λ)` up to a global phase:
//!
//! ```text
//! [ cos(θ/2)            −e^{iλ} sin(θ/2)      ]
//! [ e^{iφ} sin(θ/2)      e^{i(φ+λ)} cos(θ/2)  ]
//! ```

use num_complex::Complex64;

/// Row-major 2×2 complex matrix.
pub type Mat2 = [[Complex64; 2]; 2];

const I: Complex64 = Complex64::new(0.0, 1.0);

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum GateKind {
    Rx,
    Ry,
    Rz,
    U3,
    Cnot,
}

impl GateKind {
    pub fn num_params(self) -> usize {
        match self {
            GateKind::Rx | GateKind::Ry | GateKind::Rz => 1,
            GateKind::U3 => 3,
            GateKind::Cnot => 0,
        }
    }

    pub fn num_qubits(self) -> usize {
        match self {
            GateKind::Cnot => 2,
            _ => 1,
        }
    }

    /// OpenQASM 2.0 mnemonic.
    pub fn qasm_name(self) -> &'static str {
        match self {
            GateKind::Rx => "rx",
            GateKind::Ry => "ry",
            GateKind::Rz => "rz",
            GateKind::U3 => "u3",
            GateKind::Cnot => "cx",
        }
    }

    /// Display name used in gate-count summaries.
    pub fn display_name(self) -> &'static str {
        match self {
            GateKind::Rx => "RXGate",
            GateKind::Ry => "RYGate",
            GateKind::Rz => "RZGate",
            GateKind::U3 => "U3Gate",
            GateKind::Cnot => "CNOTGate",
        }
    }

    pub fn from_qasm_name(name: &str) -> Option<Self> {
        Some(match name {
            "rx" => GateKind::Rx,
            "ry" => GateKind::Ry,
            "rz" => GateKind::Rz,
            "u3" => GateKind::U3,
            "cx" | "CX" => GateKind::Cnot,
            _ => return None,
        })
    }
}

/// Matrix of a single-qubit gate. Panics for CNOT.
pub fn matrix(kind: GateKind, p: &[f64]) -> Mat2 {
    match kind {
        GateKind::Rx => {
            let (s, co) = (p[0] / 2.0).sin_cos();
            [[c(co, 0.0), c(0.0, -s)], [c(0.0, -s), c(co, 0.0)]]
        }
        GateKind::Ry => {
            let (s, co) = (p[0] / 2.0).sin_cos();
            [[c(co, 0.0), c(-s, 0.0)], [c(s, 0.0), c(co, 0.0)]]
        }
        GateKind::Rz => {
            let (s, co) = (p[0] / 2.0).sin_cos();
            [[c(co, -s), c(0.0, 0.0)], [c(0.0, 0.0), c(co, s)]]
        }
        GateKind::U3 => {
            let (s, co) = (p[0] / 2.0).sin_cos();
            let ephi = Complex64::from_polar(1.0, p[1]);
            let elam = Complex64::from_polar(1.0, p[2]);
            [[c(co, 0.0), -elam * s], [ephi * s, ephi * elam * co]]
        }
        GateKind::Cnot => panic!("CNOT has no 2x2 matrix"),
    }
}

/// Derivative of [`matrix`] with respect to parameter `k`.
pub fn derivative(kind: GateKind, p: &[f64], k: usize) -> Mat2 {
    let z = c(0.0, 0.0);
    match (kind, k) {
        (GateKind::Rx, 0) => {
            let (s, co) = (p[0] / 2.0).sin_cos();
            [[c(-s / 2.0, 0.0), c(0.0, -co / 2.0)], [c(0.0, -co / 2.0), c(-s / 2.0, 0.0)]]
        }
        (GateKind::Ry, 0) => {
            let (s, co) = (p[0] / 2.0).sin_cos();
            [[c(-s / 2.0, 0.0), c(-co / 2.0, 0.0)], [c(co / 2.0, 0.0), c(-s / 2.0, 0.0)]]
        }
        (GateKind::Rz, 0) => {
            let (s, co) = (p[0] / 2.0).sin_cos();
            [[c(-s / 2.0, -co / 2.0), z], [z, c(-s / 2.0, co / 2.0)]]
        }
        (GateKind::U3, _) => {
            let (s, co) = (p[0] / 2.0).sin_cos();
            let ephi = Complex64::from_polar(1.0, p[1]);
            let elam = Complex64::from_polar(1.0, p[2]);
            match k {
                0 => [[c(-s / 2.0, 0.0), -elam * (co / 2.0)], [ephi * (co / 2.0), ephi * elam * (-s / 2.0)]],
                1 => [[z, z], [I * ephi * s, I * ephi * elam * co]],
                2 => [[z, -I * elam * s], [z, I * ephi * elam * co]],
                _ => panic!("U3 has three parameters"),
            }
        }
        _ => panic!("{kind:?} has no parameter {k}"),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn close(a: &Mat2, b: &Mat2, tol: f64) -> bool {
        (0..2).all(|r| (0..2).all(|k| (a[r][k] - b[r][k]).norm() < tol))
    }

    #[test]
    fn derivatives_match_finite_differences() {
        let h = 1e-6;
        for (kind, p) in [
            (GateKind::Rx, vec![0.7]),
            (GateKind::Ry, vec![-1.3]),
            (GateKind::Rz, vec![2.9]),
            (GateKind::U3, vec![0.4, -1.1, 2.2]),
        ] {
            for k in 0..kind.num_params() {
                let mut plus = p.clone();
                let mut minus = p.clone();
                plus[k] += h;
                minus[k] -= h;
                let (mp, mm) = (matrix(kind, &plus), matrix(kind, &minus));
                let fd = [
                    [(mp[0][0] - mm[0][0]) / (2.0 * h), (mp[0][1] - mm[0][1]) / (2.0 * h)],
                    [(mp[1][0] - mm[1][0]) / (2.0 * h), (mp[1][1] - mm[1][1]) / (2.0 * h)],
                ];
                assert!(close(&fd, &derivative(kind, &p, k), 1e-8), "{kind:?} param {k}");
            }
        }
    }

    #[test]
    fn u3_hadamard_point() {
        let h = matrix(GateKind::U3, &[std::f64::consts::FRAC_PI_2, 0.0, std::f64::consts::PI]);
        let s = std::f64::consts::FRAC_1_SQRT_2;
        assert!(close(&h, &[[c(s, 0.0), c(s, 0.0)], [c(s, 0.0), c(-s, 0.0)]], 1e-15));
    }

    #[test]
    fn u3_at_zero_is_identity() {
        let one = c(1.0, 0.0);
        let z = c(0.0, 0.0);
        assert!(close(&matrix(GateKind::U3, &[0.0; 3]), &[[one, z], [z, one]], 0.0 + 1e-300));
    }

    #[test]
    fn qasm_names_round_trip() {
        for kind in [GateKind::Rx, GateKind::Ry, GateKind::Rz, GateKind::U3, GateKind::Cnot] {
            assert_eq!(GateKind::from_qasm_name(kind.qasm_name()), Some(kind));
        }
        assert_eq!(GateKind::from_qasm_name("h"), None);
    }
}
