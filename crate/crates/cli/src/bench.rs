// Copyright 2026 msprep Contributors
// SPDX-License-Identifier: Apache-2.0

//! Haar-random benchmark: for each shot draw a unitary `U` on `n` qubits and
//! synthesize the map `|i⟩ → U|i⟩` for the first `m` basis states, for every
//! `m` in `1..=2^n`.

use std::io::Write;

use msprep_core::haar::haar_unitary;
use msprep_core::states::restrict_unitary;
use msprep_core::synth::synthesize;
use msprep_core::{InstantiateConfig, SynthConfig};
use rayon::prelude::*;
use serde::Serialize;

use crate::CliError;

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct BenchRow {
    pub n: usize,
    pub m: usize,
    pub seed: u64,
    pub cnot_count: usize,
    pub final_cost: f64,
    pub elapsed_seconds: f64,
    /// `false` when the search ran out of budget for this cell.
    pub converged: bool,
}

/// Shot `s` uses seed `base_seed + s` both for its unitary and for the
/// search, so any single row can be regenerated in isolation.
pub fn run_bench(n: usize, shots: usize, base_seed: u64, base: &SynthConfig) -> Result<Vec<BenchRow>, CliError> {
    if !(2..=4).contains(&n) {
        return Err(CliError::Input(format!("--n: must be 2, 3 or 4, got {n}")));
    }
    let dim = 1usize << n;
    let mut rows = (0..shots as u64)
        .into_par_iter()
        .map(|s| {
            let seed = base_seed.wrapping_add(s);
            let u = haar_unitary(dim, seed);
            let cfg = SynthConfig { instantiate: InstantiateConfig { seed, ..base.instantiate.clone() }, ..base.clone() };
            (1..=dim)
                .map(|m| {
                    let sys = restrict_unitary(&u, &(0..m).collect::<Vec<_>>())?;
                    let r = synthesize(&sys, &cfg)?;
                    Ok(BenchRow {
                        n,
                        m,
                        seed,
                        cnot_count: r.cnot_count,
                        final_cost: r.final_cost,
                        elapsed_seconds: r.elapsed_seconds,
                        converged: r.converged,
                    })
                })
                .collect::<Result<Vec<_>, msprep_core::Error>>()
        })
        .collect::<Result<Vec<_>, _>>()?
        .concat();
    rows.sort_by_key(|r| (r.seed, r.m));
    Ok(rows)
}

pub fn write_csv<W: Write>(rows: &[BenchRow], out: W) -> Result<(), CliError> {
    let mut w = csv::Writer::from_writer(out);
    for r in rows {
        w.serialize(r).map_err(|e| CliError::Io(e.to_string()))?;
    }
    w.flush().map_err(|e| CliError::Io(e.to_string()))
}

/// Mean of `f` over the rows of each `m`, indexed by `m - 1`.
pub fn mean_by_m(rows: &[BenchRow], f: impl Fn(&BenchRow) -> f64) -> Vec<f64> {
    let max_m = rows.iter().map(|r| r.m).max().unwrap_or(0);
    (1..=max_m)
        .map(|m| {
            let vals: Vec<f64> = rows.iter().filter(|r| r.m == m).map(&f).collect();
            vals.iter().sum::<f64>() / vals.len().max(1) as f64
        })
        .collect()
}
