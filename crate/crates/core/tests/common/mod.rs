#![allow(dead_code)]

use std::collections::{BTreeMap, BTreeSet};

use mml_core::ann::{Activation, Edge, FeedForwardDag, NodeSpec};
use mml_core::grai::{GrnGraph, MinedStructure, Sign};
use rand::Rng;
use rand_chacha::ChaCha8Rng;

/// Random DAG over nodes `n0..n{n-1}` with forward edges drawn with
/// probability `p`. Isolated nodes are dropped; sources become inputs and
/// sinks become outputs. Returns `None` when no edge was drawn.
pub fn random_dag(rng: &mut ChaCha8Rng, max_nodes: usize, p: f64) -> Option<FeedForwardDag> {
    let n = rng.gen_range(2..=max_nodes);
    let mut edges = Vec::new();
    for s in 0..n {
        for t in s + 1..n {
            if rng.gen_bool(p) {
                edges.push(Edge::new(format!("n{s}"), format!("n{t}"), rng.gen_range(-2.0..2.0)));
            }
        }
    }
    if edges.is_empty() {
        return None;
    }
    let used: BTreeSet<usize> =
        edges.iter().flat_map(|e| [&e.source, &e.target]).map(|id| id[1..].parse().unwrap()).collect();
    let has_in: BTreeSet<&str> = edges.iter().map(|e| e.target.as_str()).collect();
    let has_out: BTreeSet<&str> = edges.iter().map(|e| e.source.as_str()).collect();
    let mut nodes = Vec::new();
    let (mut inputs, mut outputs) = (Vec::new(), Vec::new());
    for i in used {
        let id = format!("n{i}");
        let activation = match rng.gen_range(0..4) {
            0 => Activation::Identity,
            1 => Activation::LogSigmoid,
            2 => Activation::Hill { n: rng.gen_range(1.0..4.0), k: rng.gen_range(0.2..2.0) },
            _ => Activation::Threshold { theta: rng.gen_range(-1.0..1.0) },
        };
        if !has_in.contains(id.as_str()) {
            inputs.push(id.clone());
        } else if !has_out.contains(id.as_str()) {
            outputs.push(id.clone());
        }
        nodes.push(NodeSpec::real(id, activation).with_bias(rng.gen_range(-0.5..0.5)));
    }
    Some(FeedForwardDag::new(nodes, edges, inputs, outputs).expect("generated DAG is well formed"))
}

pub fn random_inputs(rng: &mut ChaCha8Rng, dag: &FeedForwardDag) -> BTreeMap<String, f64> {
    dag.inputs().iter().map(|id| (id.clone(), rng.gen_range(-3.0..3.0))).collect()
}

/// Random DAG as a GRN with `n <= max_nodes` nodes, all present even when
/// isolated.
pub fn random_grn(rng: &mut ChaCha8Rng, max_nodes: usize, p: f64) -> GrnGraph {
    let n = rng.gen_range(1..=max_nodes);
    let mut g = GrnGraph::new();
    for i in 0..n {
        g.add_node(format!("g{i:02}"));
    }
    for s in 0..n {
        for t in s + 1..n {
            if rng.gen_bool(p) {
                let sign = if rng.gen_bool(0.5) { Sign::Activation } else { Sign::Repression };
                g.add_edge(&format!("g{s:02}"), &format!("g{t:02}"), sign, rng.gen_range(0.05..=1.0)).unwrap();
            }
        }
    }
    g
}

/// Every disjoint (inputs, outputs) pair of the requested sizes whose
/// bipartite edges all exist, found by bitmask enumeration.
pub fn brute_force_structures(g: &GrnGraph, i: usize, j: usize) -> BTreeSet<MinedStructure> {
    let ids: Vec<&String> = g.nodes().iter().collect();
    let n = ids.len();
    let members =
        |mask: u32| -> Vec<String> { (0..n).filter(|b| mask >> b & 1 == 1).map(|b| ids[b].clone()).collect() };
    let mut found = BTreeSet::new();
    for im in 0u32..1 << n {
        if im.count_ones() as usize != i {
            continue;
        }
        for om in 0u32..1 << n {
            if om.count_ones() as usize != j || im & om != 0 {
                continue;
            }
            let (ins, outs) = (members(im), members(om));
            if ins.iter().all(|s| outs.iter().all(|t| g.has_edge(s, t))) {
                found.insert(MinedStructure { inputs: ins, outputs: outs });
            }
        }
    }
    found
}
