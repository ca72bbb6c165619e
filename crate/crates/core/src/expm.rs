// Copyright 2026 msprep Contributors
// SPDX-License-Identifier: Apache-2.0

//! Dense complex matrix exponential by scaling and squaring.

use nalgebra::DMatrix;
use num_complex::Complex64;

/// Taylor terms used after scaling; with `‖A/2^s‖₁ ≤ 1/2` the truncation
/// error is below `0.5^19 / 19!`, far under double precision.
const TAYLOR_TERMS: usize = 18;

fn one_norm(a: &DMatrix<Complex64>) -> f64 {
    a.column_iter()
        .map(|c| c.iter().map(|z| z.norm()).sum::<f64>())
        .fold(0.0, f64::max)
}

/// `exp(a)` for a square complex matrix.
pub fn expm(a: &DMatrix<Complex64>) -> DMatrix<Complex64> {
    assert!(a.is_square(), "expm needs a square matrix");
    let n = a.nrows();
    let norm = one_norm(a);
    let squarings = if norm > 0.5 { (norm / 0.5).log2().ceil() as i32 } else { 0 };
    let scaled = a.unscale(2f64.powi(squarings));

    let mut result = DMatrix::<Complex64>::identity(n, n);
    let mut term = DMatrix::<Complex64>::identity(n, n);
    for k in 1..=TAYLOR_TERMS {
        term = (&term * &scaled).unscale(k as f64);
        result += &term;
    }
    for _ in 0..squarings {
        result = &result * &result;
    }
    result
}

/// `exp(−i H t)` for Hermitian `H`.
pub fn evolution(h: &DMatrix<Complex64>, t: f64) -> DMatrix<Complex64> {
    expm(&h.scale(t).map(|z| z * Complex64::new(0.0, -1.0)))
}
