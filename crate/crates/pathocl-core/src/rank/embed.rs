//! Term embedding providers for cosine ranking.
//!
//! The bundled provider hashes character trigrams into a fixed-dimension
//! bag, which is deterministic, dependency-free and catches surface
//! variation ("maxnrpassenger" shares trigrams with "passenger"). A remote
//! OpenAI-style embeddings endpoint can be selected instead; its responses
//! are cached on disk per provider so repeated runs stay cheap.

use std::collections::HashMap;
use std::io::Write;
use std::path::PathBuf;
use std::sync::Mutex;

use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Error)]
pub enum EmbedError {
    #[error("embedding request failed: {0}")]
    Http(String),
    #[error("embedding endpoint returned no vector for '{term}'")]
    EmptyResponse { term: String },
    #[error("embedding cache I/O failed at {path}: {source}")]
    Cache {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
}

/// Deterministic term-to-vector mapping with unit L2 norm.
pub trait Embedder: Send + Sync {
    fn dimension(&self) -> usize;
    fn embed(&self, term: &str) -> Result<Vec<f64>, EmbedError>;
}

const FNV_OFFSET: u64 = 0xcbf2_9ce4_8422_2325;
const FNV_PRIME: u64 = 0x0000_0100_0000_01b3;

fn fnv1a(bytes: &[u8]) -> u64 {
    let mut hash = FNV_OFFSET;
    for b in bytes {
        hash ^= u64::from(*b);
        hash = hash.wrapping_mul(FNV_PRIME);
    }
    hash
}

/// Hashed character-trigram bag, L2-normalized. All components are
/// non-negative, so pairwise cosine lands in [0, 1].
#[derive(Debug, Clone, Copy)]
pub struct TrigramHashEmbedder {
    dim: usize,
}

impl TrigramHashEmbedder {
    pub fn new(dim: usize) -> TrigramHashEmbedder {
        assert!(dim > 0, "embedding dimension must be positive");
        TrigramHashEmbedder { dim }
    }
}

impl Default for TrigramHashEmbedder {
    fn default() -> Self {
        TrigramHashEmbedder::new(256)
    }
}

impl Embedder for TrigramHashEmbedder {
    fn dimension(&self) -> usize {
        self.dim
    }

    fn embed(&self, term: &str) -> Result<Vec<f64>, EmbedError> {
        let mut vector = vec![0.0f64; self.dim];
        let padded: Vec<char> = std::iter::once('#')
            .chain(term.to_lowercase().chars())
            .chain(std::iter::once('#'))
            .collect();
        for window in padded.windows(3) {
            let trigram: String = window.iter().collect();
            let slot = (fnv1a(trigram.as_bytes()) % self.dim as u64) as usize;
            vector[slot] += 1.0;
        }
        let norm = vector.iter().map(|v| v * v).sum::<f64>().sqrt();
        if norm > 0.0 {
            for v in &mut vector {
                *v /= norm;
            }
        }
        Ok(vector)
    }
}

#[derive(Serialize)]
struct EmbeddingRequest<'a> {
    model: &'a str,
    input: [&'a str; 1],
}

#[derive(Deserialize)]
struct EmbeddingResponse {
    data: Vec<EmbeddingData>,
}

#[derive(Deserialize)]
struct EmbeddingData {
    embedding: Vec<f64>,
}

#[derive(Serialize, Deserialize)]
struct CacheLine {
    term: String,
    vector: Vec<f64>,
}

/// HTTP embedding provider with an append-only JSON-lines disk cache.
/// The cache file is provider-specific; entries are keyed by term.
pub struct RemoteEmbedder {
    endpoint: String,
    api_key: Option<String>,
    model: String,
    dim: usize,
    cache_path: PathBuf,
    cache: Mutex<HashMap<String, Vec<f64>>>,
    client: reqwest::blocking::Client,
}

impl RemoteEmbedder {
    pub fn new(
        endpoint: impl Into<String>,
        api_key: Option<String>,
        model: impl Into<String>,
        dim: usize,
        cache_path: impl Into<PathBuf>,
    ) -> Result<RemoteEmbedder, EmbedError> {
        let cache_path = cache_path.into();
        let mut cache = HashMap::new();
        match std::fs::read_to_string(&cache_path) {
            Ok(text) => {
                for line in text.lines().filter(|l| !l.trim().is_empty()) {
                    if let Ok(entry) = serde_json::from_str::<CacheLine>(line) {
                        cache.insert(entry.term, entry.vector);
                    }
                }
            }
            Err(e) if e.kind() == std::io::ErrorKind::NotFound => {}
            Err(source) => {
                return Err(EmbedError::Cache {
                    path: cache_path,
                    source,
                })
            }
        }
        Ok(RemoteEmbedder {
            endpoint: endpoint.into(),
            api_key,
            model: model.into(),
            dim,
            cache_path,
            cache: Mutex::new(cache),
            client: reqwest::blocking::Client::new(),
        })
    }

    fn fetch(&self, term: &str) -> Result<Vec<f64>, EmbedError> {
        let mut request = self.client.post(&self.endpoint).json(&EmbeddingRequest {
            model: &self.model,
            input: [term],
        });
        if let Some(key) = &self.api_key {
            request = request.bearer_auth(key);
        }
        let response = request.send().map_err(|e| EmbedError::Http(e.to_string()))?;
        if !response.status().is_success() {
            return Err(EmbedError::Http(format!(
                "status {} from {}",
                response.status(),
                self.endpoint
            )));
        }
        let body: EmbeddingResponse = response
            .json()
            .map_err(|e| EmbedError::Http(e.to_string()))?;
        let mut vector = body
            .data
            .into_iter()
            .next()
            .map(|d| d.embedding)
            .ok_or_else(|| EmbedError::EmptyResponse {
                term: term.to_string(),
            })?;
        let norm = vector.iter().map(|v| v * v).sum::<f64>().sqrt();
        if norm > 0.0 {
            for v in &mut vector {
                *v /= norm;
            }
        }
        Ok(vector)
    }

    fn persist(&self, term: &str, vector: &[f64]) -> Result<(), EmbedError> {
        let line = serde_json::to_string(&CacheLine {
            term: term.to_string(),
            vector: vector.to_vec(),
        })
        .expect("cache line serialization cannot fail");
        let mut file = std::fs::OpenOptions::new()
            .create(true)
            .append(true)
            .open(&self.cache_path)
            .map_err(|source| EmbedError::Cache {
                path: self.cache_path.clone(),
                source,
            })?;
        writeln!(file, "{line}").map_err(|source| EmbedError::Cache {
            path: self.cache_path.clone(),
            source,
        })
    }
}

impl Embedder for RemoteEmbedder {
    fn dimension(&self) -> usize {
        self.dim
    }

    fn embed(&self, term: &str) -> Result<Vec<f64>, EmbedError> {
        if let Some(hit) = self.cache.lock().expect("cache lock").get(term) {
            return Ok(hit.clone());
        }
        let vector = self.fetch(term)?;
        self.persist(term, &vector)?;
        self.cache
            .lock()
            .expect("cache lock")
            .insert(term.to_string(), vector.clone());
        Ok(vector)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn trigram_embedding_is_unit_norm_and_deterministic() {
        let embedder = TrigramHashEmbedder::default();
        for term in ["flight", "maxnrpassenger", "x", "CustomerCard"] {
            let a = embedder.embed(term).unwrap();
            let b = embedder.embed(term).unwrap();
            assert_eq!(a, b);
            let norm: f64 = a.iter().map(|v| v * v).sum::<f64>().sqrt();
            assert!((norm - 1.0).abs() < 1e-9, "norm {norm} for {term}");
        }
    }

    #[test]
    fn related_terms_score_higher_than_unrelated() {
        let embedder = TrigramHashEmbedder::default();
        let dot = |a: &str, b: &str| -> f64 {
            let va = embedder.embed(a).unwrap();
            let vb = embedder.embed(b).unwrap();
            va.iter().zip(&vb).map(|(x, y)| x * y).sum()
        };
        assert!(dot("maxnrpassenger", "passenger") > dot("maxnrpassenger", "airport"));
    }

    #[test]
    fn cache_round_trips_through_disk() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("cache.jsonl");
        std::fs::write(
            &path,
            format!(
                "{}\n",
                serde_json::to_string(&CacheLine {
                    term: "flight".into(),
                    vector: vec![1.0, 0.0],
                })
                .unwrap()
            ),
        )
        .unwrap();
        // Endpoint is never contacted for cached terms.
        let remote = RemoteEmbedder::new("http://127.0.0.1:1/v1/embeddings", None, "m", 2, &path)
            .unwrap();
        assert_eq!(remote.embed("flight").unwrap(), vec![1.0, 0.0]);
    }
}
