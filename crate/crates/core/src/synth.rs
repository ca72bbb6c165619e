// Copyright 2026 msprep Contributors
// SPDX-License-Identifier: Apache-2.0

//! Bottom-up template search minimizing CNOT count.
//!
//! The root template is one U3 per qubit. Expanding a template appends, for
//! each coupling edge `(a, b)`, a CNOT on `(a, b)` followed by a U3 on each
//! of `a` and `b`. Every new template is instantiated immediately; the
//! search stops at the first batch of siblings containing a success.
//! Unfinished templates wait in a frontier ordered by
//! `(cost, cnot count, insertion order)`.

use std::cmp::Ordering;
use std::collections::BinaryHeap;
use std::time::Instant;

use num_complex::Complex64;
use rayon::prelude::*;

use crate::circuit::{apply, Circuit, ConnectivityGraph};
use crate::cost::CostContext;
use crate::instantiate::{instantiate_in_context, InstantiateConfig};
use crate::states::{complete_unitary, require_solvable, restrict_unitary, StateSystem};
use crate::{Error, Result};

#[derive(Clone, Debug)]
pub struct SynthConfig {
    pub instantiate: InstantiateConfig,
    /// Templates with this many CNOTs are not expanded further. `None`
    /// means `3 · 4^n`.
    pub max_two_qubit_gates: Option<usize>,
    /// Allowed CNOT placements; `None` means all-to-all.
    pub coupling: Option<ConnectivityGraph>,
    /// Frontier capacity; the worst templates are dropped beyond it.
    /// `0` keeps everything.
    pub frontier_width: usize,
    pub timeout_seconds: Option<f64>,
}

impl Default for SynthConfig {
    fn default() -> Self {
        Self {
            instantiate: InstantiateConfig::default(),
            max_two_qubit_gates: None,
            coupling: None,
            frontier_width: 32,
            timeout_seconds: None,
        }
    }
}

impl SynthConfig {
    pub fn max_cnots(&self, num_qubits: usize) -> usize {
        self.max_two_qubit_gates
            .unwrap_or_else(|| 3usize.saturating_mul(4usize.saturating_pow(num_qubits as u32)))
    }

    pub fn coupling_for(&self, num_qubits: usize) -> Result<ConnectivityGraph> {
        match &self.coupling {
            Some(g) if g.num_qubits() != num_qubits => Err(Error::InvalidArgument(format!(
                "coupling graph has {} qubits, system has {num_qubits}",
                g.num_qubits()
            ))),
            Some(g) => Ok(g.clone()),
            None => Ok(ConnectivityGraph::complete(num_qubits)),
        }
    }
}

#[derive(Clone, Debug)]
pub struct SynthesisResult {
    pub circuit: Circuit,
    pub params: Vec<f64>,
    pub final_cost: f64,
    pub cnot_count: usize,
    pub elapsed_seconds: f64,
    /// Templates instantiated during the search.
    pub nodes_explored: usize,
    /// `false` when the search ran out of budget; the result is then the
    /// lowest-cost template seen.
    pub converged: bool,
}

#[derive(Clone, Debug)]
struct Node {
    circuit: Circuit,
    params: Vec<f64>,
    cost: f64,
    cnots: usize,
    seq: usize,
}

impl Node {
    fn key_cmp(&self, other: &Self) -> Ordering {
        self.cost
            .total_cmp(&other.cost)
            .then(self.cnots.cmp(&other.cnots))
            .then(self.seq.cmp(&other.seq))
    }
}

/// Min-heap adapter over [`Node::key_cmp`].
struct Frontier(Node);

impl PartialEq for Frontier {
    fn eq(&self, other: &Self) -> bool {
        self.cmp(other) == Ordering::Equal
    }
}
impl Eq for Frontier {}
impl PartialOrd for Frontier {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}
impl Ord for Frontier {
    fn cmp(&self, other: &Self) -> Ordering {
        other.0.key_cmp(&self.0)
    }
}

fn node_seed(base: u64, seq: usize) -> u64 {
    base ^ (seq as u64).wrapping_mul(0x9E37_79B9_7F4A_7C15)
}

fn finish(node: Node, start: Instant, explored: usize, converged: bool) -> SynthesisResult {
    SynthesisResult {
        cnot_count: node.cnots,
        circuit: node.circuit,
        params: node.params,
        final_cost: node.cost,
        elapsed_seconds: start.elapsed().as_secs_f64(),
        nodes_explored: explored,
        converged,
    }
}

/// Search for the circuit with the fewest CNOTs mapping every input of
/// `sys` to its output.
pub fn synthesize(sys: &StateSystem, cfg: &SynthConfig) -> Result<SynthesisResult> {
    let start = Instant::now();
    require_solvable(sys)?;
    cfg.instantiate.validate()?;
    let n = sys.num_qubits();
    let coupling = cfg.coupling_for(n)?;
    let max_cnots = cfg.max_cnots(n);
    let threshold = cfg.instantiate.success_threshold;
    let ctx = CostContext::new(sys);

    let instantiate_node = |circuit: Circuit, warm: Option<Vec<f64>>, seq: usize| -> Result<Node> {
        let icfg = InstantiateConfig { seed: node_seed(cfg.instantiate.seed, seq), ..cfg.instantiate.clone() };
        let r = instantiate_in_context(&circuit, &ctx, &icfg, warm.as_deref())?;
        let cnots = circuit.cnot_count();
        Ok(Node { circuit, params: r.params, cost: r.final_cost, cnots, seq })
    };

    let mut root = Circuit::with_coupling(coupling.clone());
    for q in 0..n {
        root.u3(q)?;
    }
    let root = instantiate_node(root, None, 0)?;
    let mut explored = 1;
    if root.cost <= threshold {
        return Ok(finish(root, start, explored, true));
    }
    let mut best = root.clone();
    let mut frontier = BinaryHeap::new();
    frontier.push(Frontier(root));
    let edges: Vec<(usize, usize)> = coupling.edges().collect();

    while let Some(Frontier(parent)) = frontier.pop() {
        if cfg.timeout_seconds.is_some_and(|t| start.elapsed().as_secs_f64() >= t) {
            break;
        }
        if parent.cnots >= max_cnots || edges.is_empty() {
            continue;
        }
        let children = edges
            .iter()
            .enumerate()
            .map(|(i, &(a, b))| {
                let mut c = parent.circuit.clone();
                c.cnot(a, b)?.u3(a)?.u3(b)?;
                let mut warm = parent.params.clone();
                warm.resize(c.num_params(), 0.0);
                Ok((c, warm, explored + i))
            })
            .collect::<Result<Vec<_>>>()?;
        explored += children.len();
        let children = children
            .into_par_iter()
            .map(|(c, warm, seq)| instantiate_node(c, Some(warm), seq))
            .collect::<Result<Vec<_>>>()?;

        if let Some(win) = children.iter().filter(|c| c.cost <= threshold).min_by(|a, b| a.key_cmp(b)) {
            return Ok(finish(win.clone(), start, explored, true));
        }
        for child in children {
            if child.key_cmp(&best) == Ordering::Less {
                best = child.clone();
            }
            frontier.push(Frontier(child));
        }
        if cfg.frontier_width > 0 && frontier.len() > cfg.frontier_width {
            let mut kept = frontier.into_sorted_vec();
            // Sorted ascending by `Frontier` order, i.e. worst node first.
            kept.drain(..kept.len() - cfg.frontier_width);
            frontier = kept.into_iter().collect();
        }
    }
    Ok(finish(best, start, explored, false))
}

/// Baseline: fix one completion of `sys` to a full unitary, then search for
/// a circuit implementing that unitary.
pub fn synthesize_via_completion(sys: &StateSystem, cfg: &SynthConfig) -> Result<SynthesisResult> {
    let u = complete_unitary(sys)?;
    let all: Vec<usize> = (0..sys.dim()).collect();
    synthesize(&restrict_unitary(&u, &all)?, cfg)
}

/// Distance of each simulated output from its target, after removing one
/// global phase fixed by the first pair.
pub fn pair_distances(sys: &StateSystem, circuit: &Circuit, params: &[f64]) -> Result<Vec<f64>> {
    let sims = sys
        .inputs()
        .map(|v| apply(circuit, params, v))
        .collect::<Result<Vec<_>>>()?;
    let first = sys.pairs()[0].1.inner(&sims[0]);
    let phase = if first.norm() > 0.0 { first / first.norm() } else { Complex64::new(1.0, 0.0) };
    Ok(sims
        .iter()
        .zip(sys.outputs())
        .map(|(s, w)| (s.amps() - w.amps() * phase).norm())
        .collect())
}
