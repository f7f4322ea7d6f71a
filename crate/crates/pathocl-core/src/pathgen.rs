//! Directed UML graph construction and exhaustive simple-path enumeration.
//!
//! Every class is a node; every navigable association end contributes a
//! directed edge toward its class. Enumeration covers all simple paths
//! between every ordered node pair plus every singleton class, in a
//! deterministic order (length ascending, then lexicographic on the class
//! name sequence).

use std::collections::{BTreeMap, BTreeSet, HashSet};

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::model::{Multiplicity, UmlModel};

#[derive(Debug, Error)]
pub enum PathGenError {
    #[error("graph has no nodes")]
    EmptyGraph,
    #[error("simple path count exceeds the configured cap of {cap}; raise the cap or lower the maximum path length")]
    PathBudgetExceeded { cap: usize },
}

/// Directed edge annotated with the target end's role and multiplicity.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GraphEdge {
    pub to: String,
    pub role: String,
    pub multiplicity: Multiplicity,
}

/// Directed graph over class names.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct UmlGraph {
    nodes: Vec<String>,
    adjacency: BTreeMap<String, Vec<GraphEdge>>,
}

impl UmlGraph {
    /// Node names in sorted order.
    pub fn nodes(&self) -> &[String] {
        &self.nodes
    }

    pub fn node_count(&self) -> usize {
        self.nodes.len()
    }

    /// Outgoing edges of a node, sorted by (target, role). Parallel edges
    /// to the same target (distinct associations) are kept separate.
    pub fn edges_from(&self, node: &str) -> &[GraphEdge] {
        self.adjacency.get(node).map(Vec::as_slice).unwrap_or(&[])
    }

    pub fn has_edge(&self, from: &str, to: &str) -> bool {
        self.edges_from(from).iter().any(|e| e.to == to)
    }

    pub fn edge_count(&self) -> usize {
        self.adjacency.values().map(Vec::len).sum()
    }

    /// Build a graph directly from node names and (from, to) pairs; roles
    /// are synthesized. Intended for tests and benchmarks.
    pub fn from_pairs<'a>(
        nodes: impl IntoIterator<Item = &'a str>,
        edges: impl IntoIterator<Item = (&'a str, &'a str)>,
    ) -> UmlGraph {
        let mut graph = UmlGraph::default();
        let mut names: Vec<String> = nodes.into_iter().map(str::to_string).collect();
        names.sort();
        names.dedup();
        for n in &names {
            graph.adjacency.entry(n.clone()).or_default();
        }
        graph.nodes = names;
        for (from, to) in edges {
            graph.adjacency.entry(from.to_string()).or_default().push(GraphEdge {
                to: to.to_string(),
                role: to.to_lowercase(),
                multiplicity: Multiplicity::MANY,
            });
        }
        for edges in graph.adjacency.values_mut() {
            edges.sort_by(|a, b| (&a.to, &a.role).cmp(&(&b.to, &b.role)));
            edges.dedup();
        }
        graph
    }
}

/// Ordered, non-repeating sequence of class names over the UML graph.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct SimplePath(Vec<String>);

impl SimplePath {
    pub fn new(classes: Vec<String>) -> SimplePath {
        debug_assert!(!classes.is_empty(), "a simple path has at least one node");
        SimplePath(classes)
    }

    pub fn classes(&self) -> &[String] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// Adjacent (from, to) hops; empty for singletons.
    pub fn hops(&self) -> impl Iterator<Item = (&str, &str)> {
        self.0.windows(2).map(|w| (w[0].as_str(), w[1].as_str()))
    }

    pub fn contains(&self, class: &str) -> bool {
        self.0.iter().any(|c| c == class)
    }
}

impl std::fmt::Display for SimplePath {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "[{}]", self.0.join(", "))
    }
}

/// One node per class; for every association an edge in each direction
/// whose far end is navigable.
pub fn build_graph(model: &UmlModel) -> UmlGraph {
    let mut graph = UmlGraph::default();
    let mut names: Vec<String> = model.classes.iter().map(|c| c.name.clone()).collect();
    names.sort();
    for n in &names {
        graph.adjacency.entry(n.clone()).or_default();
    }
    graph.nodes = names;
    for assoc in &model.associations {
        for (i, end) in assoc.ends.iter().enumerate() {
            let from = &assoc.ends[1 - i];
            if end.navigable {
                graph
                    .adjacency
                    .entry(from.class_name.clone())
                    .or_default()
                    .push(GraphEdge {
                        to: end.class_name.clone(),
                        role: end.role.clone(),
                        multiplicity: end.multiplicity,
                    });
            }
        }
    }
    for edges in graph.adjacency.values_mut() {
        edges.sort_by(|a, b| (&a.to, &a.role).cmp(&(&b.to, &b.role)));
    }
    graph
}

/// Cap on the number of generated paths; enumeration fails loudly beyond it.
pub const DEFAULT_PATH_CAP: usize = 100_000;

/// Default maximum path length (in nodes): unbounded for small graphs,
/// five for larger ones where exhaustive coverage blows up.
pub fn default_max_len(node_count: usize) -> Option<usize> {
    if node_count <= 8 {
        None
    } else {
        Some(5)
    }
}

/// Enumerate every simple path of length 2..=max_len between every ordered
/// node pair, plus every singleton path, with the default path cap.
pub fn enumerate_simple_paths(
    graph: &UmlGraph,
    max_len: Option<usize>,
) -> Result<Vec<SimplePath>, PathGenError> {
    enumerate_simple_paths_capped(graph, max_len, DEFAULT_PATH_CAP)
}

/// Enumeration with an explicit path-count cap.
pub fn enumerate_simple_paths_capped(
    graph: &UmlGraph,
    max_len: Option<usize>,
    cap: usize,
) -> Result<Vec<SimplePath>, PathGenError> {
    if graph.node_count() == 0 {
        return Err(PathGenError::EmptyGraph);
    }
    let limit = max_len.unwrap_or(graph.node_count());
    let mut out: Vec<SimplePath> = graph
        .nodes()
        .iter()
        .map(|n| SimplePath::new(vec![n.clone()]))
        .collect();
    if out.len() > cap {
        return Err(PathGenError::PathBudgetExceeded { cap });
    }
    let mut current: Vec<String> = Vec::new();
    let mut visited: HashSet<String> = HashSet::new();
    for start in graph.nodes() {
        current.push(start.clone());
        visited.insert(start.clone());
        extend(graph, limit, cap, &mut current, &mut visited, &mut out)?;
        visited.clear();
        current.clear();
    }
    out.sort_by(|a, b| (a.len(), a.classes()).cmp(&(b.len(), b.classes())));
    out.dedup();
    Ok(out)
}

fn extend(
    graph: &UmlGraph,
    limit: usize,
    cap: usize,
    current: &mut Vec<String>,
    visited: &mut HashSet<String>,
    out: &mut Vec<SimplePath>,
) -> Result<(), PathGenError> {
    if current.len() >= limit {
        return Ok(());
    }
    let last = current.last().expect("path is never empty").clone();
    let mut prev: Option<&str> = None;
    for edge in graph.edges_from(&last) {
        // parallel edges reach the same successor; visit it once
        if prev == Some(edge.to.as_str()) {
            continue;
        }
        prev = Some(edge.to.as_str());
        if visited.contains(&edge.to) {
            continue;
        }
        current.push(edge.to.clone());
        visited.insert(edge.to.clone());
        out.push(SimplePath::new(current.clone()));
        if out.len() > cap {
            return Err(PathGenError::PathBudgetExceeded { cap });
        }
        extend(graph, limit, cap, current, visited, out)?;
        visited.remove(&edge.to);
        current.pop();
    }
    Ok(())
}

/// Check that a path is well-formed over a graph: non-empty, no repeated
/// node, every adjacent pair an edge.
pub fn path_is_valid(graph: &UmlGraph, path: &SimplePath) -> bool {
    if path.is_empty() {
        return false;
    }
    let unique: BTreeSet<_> = path.classes().iter().collect();
    if unique.len() != path.len() {
        return false;
    }
    if !path.classes().iter().all(|c| graph.adjacency.contains_key(c)) {
        return false;
    }
    path.hops().all(|(a, b)| graph.has_edge(a, b))
}
