//! Shared helpers for the pipeline benchmarks.

use pathocl_core::model::{parse_model, UmlModel};
use pathocl_core::pathgen::UmlGraph;

pub fn airport_model() -> UmlModel {
    let dir = concat!(env!("CARGO_MANIFEST_DIR"), "/../../fixtures/");
    parse_model(&std::fs::read_to_string(format!("{dir}airport.model.json")).unwrap()).unwrap()
}

pub fn royal_loyal_model() -> UmlModel {
    let dir = concat!(env!("CARGO_MANIFEST_DIR"), "/../../fixtures/");
    parse_model(&std::fs::read_to_string(format!("{dir}royal_loyal.model.json")).unwrap()).unwrap()
}

/// Complete digraph on `n` labeled nodes.
pub fn complete_digraph(n: usize) -> UmlGraph {
    let names: Vec<String> = (0..n).map(|i| format!("N{i:02}")).collect();
    let refs: Vec<&str> = names.iter().map(String::as_str).collect();
    let mut edges = Vec::new();
    for a in &refs {
        for b in &refs {
            if a != b {
                edges.push((*a, *b));
            }
        }
    }
    UmlGraph::from_pairs(refs.iter().copied(), edges)
}
