// Copyright 2026 msprep Contributors
// SPDX-License-Identifier: Apache-2.0

//! Haar-random unitaries.

use nalgebra::DMatrix;
use num_complex::Complex64;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};

use crate::linalg::Unitary;

/// Haar-distributed `dim × dim` unitary, deterministic in `seed`.
///
/// QR of a complex Ginibre matrix, with each column of `Q` rescaled by the
/// phase of the matching diagonal entry of `R` so the result is Haar rather
/// than biased by the QR sign convention.
pub fn haar_unitary(dim: usize, seed: u64) -> Unitary {
    assert!(dim >= 1, "haar_unitary needs dim >= 1");
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let g = DMatrix::from_fn(dim, dim, |_, _| {
        let re: f64 = StandardNormal.sample(&mut rng);
        let im: f64 = StandardNormal.sample(&mut rng);
        Complex64::new(re, im)
    });
    let qr = g.qr();
    let mut q = qr.q();
    let r = qr.r();
    for (j, mut col) in q.column_iter_mut().enumerate() {
        let d = r[(j, j)];
        let norm = d.norm();
        let phase = if norm > 0.0 { d / norm } else { Complex64::new(1.0, 0.0) };
        col *= phase;
    }
    q
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::unitarity_error;

    #[test]
    fn unitary_and_deterministic() {
        for dim in [1, 2, 4, 8, 16] {
            let u = haar_unitary(dim, 17);
            assert!(unitarity_error(&u) < 1e-10);
            assert_eq!(u, haar_unitary(dim, 17));
        }
        assert_ne!(haar_unitary(4, 1), haar_unitary(4, 2));
    }

    #[test]
    fn scalar_case_has_unit_modulus() {
        let u = haar_unitary(1, 5);
        assert!((u[(0, 0)].norm() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn column_statistics() {
        // For Haar U(4), |U_00|^2 ~ Beta(1, 3) with mean 1/4.
        let mean: f64 = (0..1000).map(|s| haar_unitary(4, s).get((0, 0)).unwrap().norm_sqr()).sum::<f64>() / 1000.0;
        assert!((mean - 0.25).abs() < 0.02, "mean {mean}");
    }

    #[test]
    fn phases_are_not_biased() {
        // Without the R-phase fix, the diagonal of Q has a sign bias. Check
        // the mean of U_00 itself is near zero.
        let mean: Complex64 = (0..2000).map(|s| haar_unitary(2, s)[(0, 0)]).sum::<Complex64>() / 2000.0;
        assert!(mean.norm() < 0.05, "mean {mean}");
    }
}
