//! Chat-completion backends and cost accounting.
//!
//! Generation happens through the [`Generator`] trait with two
//! implementations: a live OpenAI-compatible HTTP client and a replay
//! store mapping prompt hashes to canned completions. Replay is the test
//! and development default; even a zero-temperature remote model is not
//! guaranteed to reproduce its own output.

mod live;
mod replay;

pub use live::{LiveBackend, LiveConfig, RateLimiter, API_KEY_ENV, ENDPOINT_ENV};
pub use replay::{ReplayBackend, ReplayEntry};

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};
use thiserror::Error;

use crate::prompt::{PromptBundle, Technique};

#[derive(Debug, Error)]
pub enum LlmError {
    #[error("no replay entry for prompt hash {key}; regenerate the fixture or switch backends")]
    ReplayMiss { key: String },
    #[error("failed to read replay fixture {path}: {source}")]
    FixtureIo {
        path: std::path::PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error("invalid replay fixture {path}: {source}")]
    FixtureFormat {
        path: std::path::PathBuf,
        #[source]
        source: serde_json::Error,
    },
    #[error("request failed after {attempts} attempts: {message}")]
    Exhausted { attempts: u32, message: String },
    #[error("backend configuration error: {0}")]
    Config(String),
    #[error("endpoint returned malformed response: {0}")]
    Protocol(String),
}

/// Generation parameters and the input-token price used for costing.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GenerationConfig {
    pub model_name: String,
    pub temperature: f64,
    pub max_output_tokens: u32,
    pub price_per_1k_input_tokens: f64,
}

impl Default for GenerationConfig {
    fn default() -> Self {
        GenerationConfig {
            model_name: "gpt-4".to_string(),
            temperature: 0.0,
            max_output_tokens: 256,
            price_per_1k_input_tokens: 0.003,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum BackendKind {
    Live,
    Replay,
}

/// One generated candidate with usage and input-only cost.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Completion {
    pub text: String,
    pub input_tokens: u64,
    pub output_tokens: u64,
    pub cost_usd: f64,
    pub backend: BackendKind,
}

/// Input-only pricing: prompts are what scale with context size.
pub fn input_cost_usd(input_tokens: u64, cfg: &GenerationConfig) -> f64 {
    input_tokens as f64 / 1000.0 * cfg.price_per_1k_input_tokens
}

/// Content address of a prompt: SHA-256 over system text, a NUL separator
/// and user text. Any template change changes every key.
pub fn bundle_key(bundle: &PromptBundle) -> String {
    let mut hasher = Sha256::new();
    hasher.update(bundle.system_text.as_bytes());
    hasher.update([0u8]);
    hasher.update(bundle.user_text.as_bytes());
    let digest = hasher.finalize();
    digest.iter().map(|b| format!("{b:02x}")).collect()
}

/// Trim whitespace and remove one surrounding triple-backtick fence
/// (with or without a language tag).
pub fn strip_fences(text: &str) -> String {
    let trimmed = text.trim();
    if let Some(rest) = trimmed.strip_prefix("```") {
        if let Some(inner) = rest.strip_suffix("```") {
            // drop the language tag line if present
            let inner = match inner.split_once('\n') {
                Some((first, body)) if !first.trim().contains(char::is_whitespace) => body,
                _ => inner,
            };
            return inner.trim().to_string();
        }
    }
    trimmed.to_string()
}

pub trait Generator: Send + Sync {
    fn generate(&self, bundle: &PromptBundle, cfg: &GenerationConfig)
        -> Result<Completion, LlmError>;
}

/// One line of the run log: a completion tagged with its originating
/// specification, rank and technique.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunRecord {
    pub spec_id: String,
    pub rank: u32,
    pub technique: Technique,
    #[serde(flatten)]
    pub completion: Completion,
}

/// A unit of generation work.
#[derive(Debug, Clone)]
pub struct GenerationJob {
    pub spec_id: String,
    pub rank: u32,
    pub technique: Technique,
    pub bundle: PromptBundle,
}

/// Run jobs through a backend with up to `in_flight` concurrent requests,
/// preserving input order. The first failure (by job index) is returned.
pub fn generate_many(
    jobs: &[GenerationJob],
    cfg: &GenerationConfig,
    backend: &dyn Generator,
    in_flight: usize,
) -> Result<Vec<RunRecord>, LlmError> {
    use std::sync::atomic::{AtomicUsize, Ordering};
    use std::sync::Mutex;

    let n = jobs.len();
    let workers = in_flight.max(1).min(n.max(1));
    let next = AtomicUsize::new(0);
    let slots: Mutex<Vec<Option<Result<Completion, LlmError>>>> =
        Mutex::new((0..n).map(|_| None).collect());

    std::thread::scope(|scope| {
        for _ in 0..workers {
            scope.spawn(|| loop {
                let i = next.fetch_add(1, Ordering::SeqCst);
                if i >= n {
                    break;
                }
                let result = backend.generate(&jobs[i].bundle, cfg);
                slots.lock().expect("result lock")[i] = Some(result);
            });
        }
    });

    let mut records = Vec::with_capacity(n);
    for (job, slot) in jobs.iter().zip(slots.into_inner().expect("result lock")) {
        let completion = slot.expect("every job ran")?;
        records.push(RunRecord {
            spec_id: job.spec_id.clone(),
            rank: job.rank,
            technique: job.technique,
            completion,
        });
    }
    Ok(records)
}

/// Aggregate cost view over a run log.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct CostSummary {
    pub completion_count: usize,
    pub total_cost_usd: f64,
    pub mean_prompt_tokens: f64,
    /// Cumulative cost of all completions with rank <= k, per k in the log.
    pub cumulative_cost_by_rank: BTreeMap<u32, f64>,
}

/// Totals, mean prompt size and the cumulative per-top-k cost trade-off.
pub fn cost_report(records: &[RunRecord]) -> CostSummary {
    if records.is_empty() {
        return CostSummary::default();
    }
    let total: f64 = records.iter().map(|r| r.completion.cost_usd).sum();
    let token_sum: u64 = records.iter().map(|r| r.completion.input_tokens).sum();
    let ranks: std::collections::BTreeSet<u32> = records.iter().map(|r| r.rank).collect();
    let cumulative = ranks
        .into_iter()
        .map(|k| {
            let cost = records
                .iter()
                .filter(|r| r.rank <= k)
                .map(|r| r.completion.cost_usd)
                .sum();
            (k, cost)
        })
        .collect();
    CostSummary {
        completion_count: records.len(),
        total_cost_usd: total,
        mean_prompt_tokens: token_sum as f64 / records.len() as f64,
        cumulative_cost_by_rank: cumulative,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn bundle(system: &str, user: &str) -> PromptBundle {
        PromptBundle {
            system_text: system.to_string(),
            user_text: user.to_string(),
            path: None,
            context_json: "[]".to_string(),
            approx_tokens: 0,
        }
    }

    fn record(rank: u32, input_tokens: u64, cost: f64) -> RunRecord {
        RunRecord {
            spec_id: "s".into(),
            rank,
            technique: Technique::Pathocl,
            completion: Completion {
                text: "x".into(),
                input_tokens,
                output_tokens: 1,
                cost_usd: cost,
                backend: BackendKind::Replay,
            },
        }
    }

    #[test]
    fn key_separates_system_and_user_content() {
        let a = bundle("sys", "user");
        let b = bundle("sysu", "ser");
        assert_ne!(bundle_key(&a), bundle_key(&b));
        assert_eq!(bundle_key(&a), bundle_key(&a));
        assert_eq!(bundle_key(&a).len(), 64);
    }

    #[test]
    fn fence_stripping_unwraps_markdown() {
        let fenced = "```ocl\ncontext C inv: true\n```";
        assert_eq!(strip_fences(fenced), "context C inv: true");
        let bare = "```\ncontext C inv: true\n```";
        assert_eq!(strip_fences(bare), "context C inv: true");
        assert_eq!(strip_fences("  context C inv: true \n"), "context C inv: true");
    }

    #[test]
    fn cost_is_input_tokens_times_price() {
        let cfg = GenerationConfig::default();
        let cost = input_cost_usd(2000, &cfg);
        assert!((cost - 0.006).abs() < 1e-12);
    }

    #[test]
    fn empty_cost_report_is_all_zero() {
        let summary = cost_report(&[]);
        assert_eq!(summary.total_cost_usd, 0.0);
        assert_eq!(summary.mean_prompt_tokens, 0.0);
        assert!(summary.cumulative_cost_by_rank.is_empty());
    }

    #[test]
    fn two_thousand_token_run_costs_six_thousandths() {
        let records = [record(1, 1000, 0.003), record(1, 1000, 0.003)];
        let summary = cost_report(&records);
        assert!((summary.total_cost_usd - 0.006).abs() < 1e-12);
        assert_eq!(summary.mean_prompt_tokens, 1000.0);
    }

    #[test]
    fn cost_report_total_is_additive() {
        let records: Vec<RunRecord> = (1..=10)
            .map(|r| record(r, r as u64 * 100, r as f64 * 0.0003))
            .collect();
        let summary = cost_report(&records);
        let direct: f64 = records.iter().map(|r| r.completion.cost_usd).sum();
        assert!((summary.total_cost_usd - direct).abs() < 1e-12);
        let top3 = summary.cumulative_cost_by_rank[&3];
        assert!((top3 - (0.0003 + 0.0006 + 0.0009)).abs() < 1e-12);
    }

    #[test]
    fn generate_many_preserves_order_under_concurrency() {
        use std::collections::HashMap;
        let mut entries = HashMap::new();
        let jobs: Vec<GenerationJob> = (0..16)
            .map(|i| {
                let b = bundle("sys", &format!("user {i}"));
                entries.insert(
                    bundle_key(&b),
                    ReplayEntry {
                        text: format!("completion {i}"),
                        input_tokens: 10 + i,
                        output_tokens: 1,
                    },
                );
                GenerationJob {
                    spec_id: format!("s{i}"),
                    rank: 1,
                    technique: Technique::Pathocl,
                    bundle: b,
                }
            })
            .collect();
        let backend = ReplayBackend::from_entries(entries);
        let records =
            generate_many(&jobs, &GenerationConfig::default(), &backend, 4).unwrap();
        for (i, r) in records.iter().enumerate() {
            assert_eq!(r.spec_id, format!("s{i}"));
            assert_eq!(r.completion.text, format!("completion {i}"));
        }
    }
}
