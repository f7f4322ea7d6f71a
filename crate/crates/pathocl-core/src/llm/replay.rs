//! Deterministic replay backend: a content-addressed store of canned
//! completions keyed by prompt hash.

use std::collections::HashMap;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::llm::{
    bundle_key, input_cost_usd, strip_fences, BackendKind, Completion, GenerationConfig,
    Generator, LlmError,
};
use crate::prompt::PromptBundle;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ReplayEntry {
    pub text: String,
    pub input_tokens: u64,
    pub output_tokens: u64,
}

/// Fixture file format: a JSON object mapping prompt hash to entry.
#[derive(Debug, Clone, Default)]
pub struct ReplayBackend {
    entries: HashMap<String, ReplayEntry>,
}

impl ReplayBackend {
    pub fn from_entries(entries: HashMap<String, ReplayEntry>) -> ReplayBackend {
        ReplayBackend { entries }
    }

    pub fn load(path: impl AsRef<Path>) -> Result<ReplayBackend, LlmError> {
        let path = path.as_ref();
        let text = std::fs::read_to_string(path).map_err(|source| LlmError::FixtureIo {
            path: path.to_path_buf(),
            source,
        })?;
        let entries: HashMap<String, ReplayEntry> =
            serde_json::from_str(&text).map_err(|source| LlmError::FixtureFormat {
                path: path.to_path_buf(),
                source,
            })?;
        Ok(ReplayBackend { entries })
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn contains(&self, key: &str) -> bool {
        self.entries.contains_key(key)
    }
}

impl Generator for ReplayBackend {
    fn generate(
        &self,
        bundle: &PromptBundle,
        cfg: &GenerationConfig,
    ) -> Result<Completion, LlmError> {
        let key = bundle_key(bundle);
        let entry = self
            .entries
            .get(&key)
            .ok_or(LlmError::ReplayMiss { key })?;
        Ok(Completion {
            text: strip_fences(&entry.text),
            input_tokens: entry.input_tokens,
            output_tokens: entry.output_tokens,
            cost_usd: input_cost_usd(entry.input_tokens, cfg),
            backend: BackendKind::Replay,
        })
    }
}
