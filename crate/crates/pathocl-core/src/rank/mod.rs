//! Path property-set extraction and similarity-based ranking.
//!
//! Set P for a path is the union of its class names, attribute and
//! operation names, and, for each hop, the role on the entered class's
//! end only, everything normalized through the nlp lemmatizer. Paths are
//! scored against set E by Jaccard overlap or mean pairwise cosine of term
//! embeddings, then ranked descending with a deterministic tie-break.

mod embed;

pub use embed::{EmbedError, Embedder, RemoteEmbedder, TrigramHashEmbedder};

use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::model::UmlModel;
use crate::nlp::{normalize_term, UmlElementSet};
use crate::pathgen::SimplePath;

#[derive(Debug, Error)]
pub enum RankError {
    #[error("path references unknown class '{0}'")]
    UnknownClass(String),
    #[error("cannot rank an empty path set")]
    EmptyPaths,
    #[error("k must be at least 1")]
    InvalidK,
    #[error(transparent)]
    Embedding(#[from] EmbedError),
}

/// Set P: normalized property names of the classes along a path.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PathPropertySet {
    pub path: SimplePath,
    pub properties: BTreeSet<String>,
}

/// Similarity metric label carried on ranked output.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum MetricKind {
    Jaccard,
    Cosine,
}

impl std::fmt::Display for MetricKind {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            MetricKind::Jaccard => write!(f, "jaccard"),
            MetricKind::Cosine => write!(f, "cosine"),
        }
    }
}

/// Scoring strategy: Jaccard needs nothing, cosine needs an embedder.
pub enum Metric<'a> {
    Jaccard,
    Cosine(&'a dyn Embedder),
}

impl Metric<'_> {
    pub fn kind(&self) -> MetricKind {
        match self {
            Metric::Jaccard => MetricKind::Jaccard,
            Metric::Cosine(_) => MetricKind::Cosine,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RankedPath {
    pub rank: usize,
    pub score: f64,
    pub metric: MetricKind,
    pub path: SimplePath,
}

/// Compute set P for a path over a model.
///
/// Singletons contribute only their own class properties; roles belong to
/// hops, and only the entered end's role is taken (for [Airline, Flight]
/// the role "flights", never "operator").
pub fn property_set(model: &UmlModel, path: &SimplePath) -> Result<PathPropertySet, RankError> {
    let mut properties = BTreeSet::new();
    for name in path.classes() {
        let class = model
            .class_of(name)
            .ok_or_else(|| RankError::UnknownClass(name.clone()))?;
        properties.insert(normalize_term(&class.name));
        for attr in &class.attributes {
            properties.insert(normalize_term(&attr.name));
        }
        for op in &class.operations {
            properties.insert(normalize_term(&op.name));
        }
    }
    for (from, to) in path.hops() {
        let navs = model
            .navigations_of(from)
            .map_err(|_| RankError::UnknownClass(from.to_string()))?;
        for nav in navs.iter().filter(|n| n.target == to) {
            properties.insert(normalize_term(&nav.role));
        }
    }
    properties.retain(|p| !p.is_empty());
    Ok(PathPropertySet {
        path: path.clone(),
        properties,
    })
}

/// Jaccard index over two plain string sets; 0 when the union is empty.
pub fn jaccard_sets(a: &BTreeSet<String>, b: &BTreeSet<String>) -> f64 {
    let union = a.union(b).count();
    if union == 0 {
        return 0.0;
    }
    let intersection = a.intersection(b).count();
    intersection as f64 / union as f64
}

/// Jaccard similarity between set E and set P.
pub fn jaccard(elements: &UmlElementSet, properties: &PathPropertySet) -> f64 {
    jaccard_sets(&elements.elements, &properties.properties)
}

fn cosine(a: &[f64], b: &[f64]) -> f64 {
    let dot: f64 = a.iter().zip(b).map(|(x, y)| x * y).sum();
    let na: f64 = a.iter().map(|v| v * v).sum::<f64>().sqrt();
    let nb: f64 = b.iter().map(|v| v * v).sum::<f64>().sqrt();
    if na == 0.0 || nb == 0.0 {
        0.0
    } else {
        dot / (na * nb)
    }
}

/// Mean pairwise cosine between the embeddings of every (element,
/// property) pair. An empty set on either side scores 0 with a warning.
pub fn cosine_score(
    elements: &UmlElementSet,
    properties: &PathPropertySet,
    embedder: &dyn Embedder,
) -> Result<f64, RankError> {
    if elements.is_empty() || properties.properties.is_empty() {
        log::warn!(
            "cosine score of path {} is 0: empty term set",
            properties.path
        );
        return Ok(0.0);
    }
    let element_vectors: Vec<Vec<f64>> = elements
        .elements
        .iter()
        .map(|e| embedder.embed(e))
        .collect::<Result<_, _>>()?;
    let mut sum = 0.0;
    let mut pairs = 0usize;
    for p in &properties.properties {
        let pv = embedder.embed(p)?;
        for ev in &element_vectors {
            sum += cosine(ev, &pv);
            pairs += 1;
        }
    }
    Ok(sum / pairs as f64)
}

/// Score all paths against set E and return the top k, rank 1 first.
/// Ties break deterministically: shorter path first, then lexicographic
/// on the class name sequence.
pub fn rank_paths(
    model: &UmlModel,
    paths: &[SimplePath],
    elements: &UmlElementSet,
    metric: &Metric<'_>,
    k: usize,
) -> Result<Vec<RankedPath>, RankError> {
    if k == 0 {
        return Err(RankError::InvalidK);
    }
    if paths.is_empty() {
        return Err(RankError::EmptyPaths);
    }
    let mut scored = Vec::with_capacity(paths.len());
    for path in paths {
        let props = property_set(model, path)?;
        let score = match metric {
            Metric::Jaccard => jaccard(elements, &props),
            Metric::Cosine(embedder) => cosine_score(elements, &props, *embedder)?,
        };
        scored.push((score, path.clone()));
    }
    scored.sort_by(|(sa, pa), (sb, pb)| {
        sb.total_cmp(sa)
            .then_with(|| (pa.len(), pa.classes()).cmp(&(pb.len(), pb.classes())))
    });
    Ok(scored
        .into_iter()
        .take(k)
        .enumerate()
        .map(|(i, (score, path))| RankedPath {
            rank: i + 1,
            score,
            metric: metric.kind(),
            path,
        })
        .collect())
}
