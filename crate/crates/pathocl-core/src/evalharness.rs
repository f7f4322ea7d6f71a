//! Run-level evaluation: Validity@K and Correctness@K, McNemar's paired
//! significance test, syntax-error breakdowns and prompt-size scalability.
//!
//! A specification succeeds at k when any of its top-k candidates is valid
//! (or judged correct). The raw per-constraint ratios are exposed as well,
//! since the underlying scores are ratios over constraints.

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::llm::CostSummary;
use crate::oclcheck::{CheckVerdict, ErrorCategory};
use crate::prompt::Technique;

#[derive(Debug, Error)]
pub enum EvalError {
    #[error("k must be at least 1")]
    InvalidK,
    #[error("specification '{0}' has no rank outcomes")]
    EmptyOutcomes(String),
    #[error("no records to evaluate")]
    NoRecords,
    #[error("no paired outcomes")]
    NoOutcomes,
    #[error(
        "verdict marks spec '{spec_id}' rank {rank} correct, but that constraint is invalid"
    )]
    CorrectOnInvalid { spec_id: String, rank: usize },
    #[error("verdict references unknown spec '{spec_id}' rank {rank}")]
    VerdictTargetMissing { spec_id: String, rank: usize },
    #[error("spec '{spec_id}' rank {rank} is unjudged and strict mode is enabled")]
    UnjudgedStrict { spec_id: String, rank: usize },
    #[error("failed to read {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error("invalid verdict record on line {line}: {message}")]
    VerdictFormat { line: usize, message: String },
}

/// Human judgment of one candidate constraint.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Correctness {
    Correct,
    Incorrect,
    Unjudged,
}

/// How unjudged candidates are treated by correctness scoring.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum UnjudgedPolicy {
    /// Count as incorrect, with a warning (the conservative default).
    CountIncorrect,
    /// Abort the computation.
    Strict,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RankOutcome {
    pub verdict: CheckVerdict,
    pub correctness: Correctness,
}

/// Everything known about one specification after a run: its per-rank
/// validity verdicts and correctness judgments, rank 1 first.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SpecRecord {
    pub id: String,
    pub model_name: String,
    pub text: String,
    pub outcomes: Vec<RankOutcome>,
}

impl SpecRecord {
    fn any_valid_up_to(&self, k: usize) -> bool {
        self.outcomes.iter().take(k).any(|o| o.verdict.valid)
    }
}

fn check_records(records: &[SpecRecord], k: usize) -> Result<(), EvalError> {
    if k == 0 {
        return Err(EvalError::InvalidK);
    }
    if records.is_empty() {
        return Err(EvalError::NoRecords);
    }
    for record in records {
        if record.outcomes.is_empty() {
            return Err(EvalError::EmptyOutcomes(record.id.clone()));
        }
    }
    Ok(())
}

/// Percentage of specifications with at least one valid candidate among
/// ranks 1..=k.
pub fn score_validity_at_k(records: &[SpecRecord], k: usize) -> Result<f64, EvalError> {
    check_records(records, k)?;
    let hits = records.iter().filter(|r| r.any_valid_up_to(k)).count();
    Ok(hits as f64 / records.len() as f64 * 100.0)
}

fn is_correct(
    outcome: &RankOutcome,
    spec_id: &str,
    rank: usize,
    policy: UnjudgedPolicy,
) -> Result<bool, EvalError> {
    match outcome.correctness {
        Correctness::Correct => Ok(true),
        Correctness::Incorrect => Ok(false),
        Correctness::Unjudged => match policy {
            UnjudgedPolicy::Strict => Err(EvalError::UnjudgedStrict {
                spec_id: spec_id.to_string(),
                rank,
            }),
            UnjudgedPolicy::CountIncorrect => {
                log::warn!("spec '{spec_id}' rank {rank} is unjudged; counting as incorrect");
                Ok(false)
            }
        },
    }
}

/// Percentage of specifications with at least one correct candidate among
/// ranks 1..=k.
pub fn score_correctness_at_k(
    records: &[SpecRecord],
    k: usize,
    policy: UnjudgedPolicy,
) -> Result<f64, EvalError> {
    check_records(records, k)?;
    let mut hits = 0usize;
    for record in records {
        for (i, outcome) in record.outcomes.iter().take(k).enumerate() {
            if is_correct(outcome, &record.id, i + 1, policy)? {
                hits += 1;
                break;
            }
        }
    }
    Ok(hits as f64 / records.len() as f64 * 100.0)
}

/// Raw ratio mode: valid constraints over all constraints in ranks 1..=k.
pub fn score_validity_per_constraint(
    records: &[SpecRecord],
    k: usize,
) -> Result<f64, EvalError> {
    check_records(records, k)?;
    let mut valid = 0usize;
    let mut total = 0usize;
    for record in records {
        for outcome in record.outcomes.iter().take(k) {
            total += 1;
            if outcome.verdict.valid {
                valid += 1;
            }
        }
    }
    if total == 0 {
        return Ok(0.0);
    }
    Ok(valid as f64 / total as f64 * 100.0)
}

/// Raw ratio mode: correct constraints over all constraints in ranks 1..=k.
pub fn score_correctness_per_constraint(
    records: &[SpecRecord],
    k: usize,
    policy: UnjudgedPolicy,
) -> Result<f64, EvalError> {
    check_records(records, k)?;
    let mut correct = 0usize;
    let mut total = 0usize;
    for record in records {
        for (i, outcome) in record.outcomes.iter().take(k).enumerate() {
            total += 1;
            if is_correct(outcome, &record.id, i + 1, policy)? {
                correct += 1;
            }
        }
    }
    if total == 0 {
        return Ok(0.0);
    }
    Ok(correct as f64 / total as f64 * 100.0)
}

/// Per-specification success flags of two techniques on one metric.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PairedOutcome {
    pub spec_id: String,
    pub technique_a: bool,
    pub technique_b: bool,
}

/// Join two record sets by spec id into paired validity outcomes at k.
pub fn paired_validity(
    records_a: &[SpecRecord],
    records_b: &[SpecRecord],
    k: usize,
) -> Vec<PairedOutcome> {
    let by_id: BTreeMap<&str, &SpecRecord> =
        records_b.iter().map(|r| (r.id.as_str(), r)).collect();
    records_a
        .iter()
        .filter_map(|a| {
            by_id.get(a.id.as_str()).map(|b| PairedOutcome {
                spec_id: a.id.clone(),
                technique_a: a.any_valid_up_to(k),
                technique_b: b.any_valid_up_to(k),
            })
        })
        .collect()
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct McnemarResult {
    pub chi_squared: f64,
    pub p_value: f64,
    /// Rows: technique A success/failure; columns: technique B.
    pub table: [[u64; 2]; 2],
}

/// One-tail survival of the chi-squared distribution with one degree of
/// freedom: p = erfc(sqrt(x/2)).
pub fn chi_squared_one_dof_p_value(chi_squared: f64) -> f64 {
    if chi_squared <= 0.0 {
        return 1.0;
    }
    statrs::function::erf::erfc((chi_squared / 2.0).sqrt())
}

/// McNemar's test over a 2x2 contingency table of paired successes.
/// B and C are the off-diagonal (disagreement) cells; B + C = 0 yields
/// chi-squared 0 and p = 1.
pub fn mcnemar(outcomes: &[PairedOutcome]) -> Result<McnemarResult, EvalError> {
    if outcomes.is_empty() {
        return Err(EvalError::NoOutcomes);
    }
    let mut table = [[0u64; 2]; 2];
    for outcome in outcomes {
        let row = usize::from(!outcome.technique_a);
        let col = usize::from(!outcome.technique_b);
        table[row][col] += 1;
    }
    let b = table[0][1] as f64;
    let c = table[1][0] as f64;
    let chi_squared = if b + c == 0.0 {
        0.0
    } else {
        (b - c).powi(2) / (b + c)
    };
    Ok(McnemarResult {
        chi_squared,
        p_value: chi_squared_one_dof_p_value(chi_squared),
        table,
    })
}

/// Percentage of each error category among invalid constraints, over all
/// ranks. Empty when nothing is invalid.
pub fn error_breakdown(records: &[SpecRecord]) -> BTreeMap<ErrorCategory, f64> {
    let mut counts: BTreeMap<ErrorCategory, usize> = BTreeMap::new();
    let mut invalid = 0usize;
    for record in records {
        for outcome in &record.outcomes {
            if let Some(category) = outcome.verdict.category() {
                *counts.entry(category).or_insert(0) += 1;
                invalid += 1;
            }
        }
    }
    counts
        .into_iter()
        .map(|(category, n)| (category, n as f64 / invalid as f64 * 100.0))
        .collect()
}

/// Model size buckets for the scalability report.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SizeCategory {
    Small,
    Medium,
    Large,
}

impl std::fmt::Display for SizeCategory {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            SizeCategory::Small => write!(f, "small"),
            SizeCategory::Medium => write!(f, "medium"),
            SizeCategory::Large => write!(f, "large"),
        }
    }
}

/// Small: at most 5 classes; medium: 6 to 9; large: 10 or more.
pub fn size_category(class_count: usize) -> SizeCategory {
    match class_count {
        0..=5 => SizeCategory::Small,
        6..=9 => SizeCategory::Medium,
        _ => SizeCategory::Large,
    }
}

/// A prompt tagged for the scalability report.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TaggedPrompt {
    pub model_name: String,
    pub technique: Technique,
    pub approx_tokens: u64,
}

/// Mean prompt tokens per (size category, technique). `models` maps model
/// name to class count; prompts for unknown models are skipped.
pub fn size_scaling(
    models: &[(String, usize)],
    prompts: &[TaggedPrompt],
) -> BTreeMap<SizeCategory, BTreeMap<Technique, f64>> {
    let categories: BTreeMap<&str, SizeCategory> = models
        .iter()
        .map(|(name, count)| (name.as_str(), size_category(*count)))
        .collect();
    let mut sums: BTreeMap<(SizeCategory, Technique), (u64, u64)> = BTreeMap::new();
    for prompt in prompts {
        let Some(category) = categories.get(prompt.model_name.as_str()) else {
            continue;
        };
        let entry = sums.entry((*category, prompt.technique)).or_insert((0, 0));
        entry.0 += prompt.approx_tokens;
        entry.1 += 1;
    }
    let mut out: BTreeMap<SizeCategory, BTreeMap<Technique, f64>> = BTreeMap::new();
    for ((category, technique), (sum, count)) in sums {
        out.entry(category)
            .or_default()
            .insert(technique, sum as f64 / count as f64);
    }
    out
}

/// One record of the correctness verdict file (JSON-lines).
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct VerdictRecord {
    pub spec_id: String,
    pub rank: usize,
    pub verdict: String,
}

pub fn load_verdicts(path: impl AsRef<Path>) -> Result<Vec<VerdictRecord>, EvalError> {
    let path = path.as_ref();
    let text = std::fs::read_to_string(path).map_err(|source| EvalError::Io {
        path: path.to_path_buf(),
        source,
    })?;
    let mut records = Vec::new();
    for (i, line) in text.lines().enumerate() {
        if line.trim().is_empty() {
            continue;
        }
        let record: VerdictRecord =
            serde_json::from_str(line).map_err(|e| EvalError::VerdictFormat {
                line: i + 1,
                message: e.to_string(),
            })?;
        if record.verdict != "correct" && record.verdict != "incorrect" {
            return Err(EvalError::VerdictFormat {
                line: i + 1,
                message: format!("verdict must be 'correct' or 'incorrect', found '{}'", record.verdict),
            });
        }
        records.push(record);
    }
    Ok(records)
}

/// Merge human judgments into spec records. Marking an invalid constraint
/// correct is rejected: correctness presupposes validity.
pub fn apply_verdicts(
    records: &mut [SpecRecord],
    verdicts: &[VerdictRecord],
) -> Result<(), EvalError> {
    for verdict in verdicts {
        let Some(record) = records.iter_mut().find(|r| r.id == verdict.spec_id) else {
            return Err(EvalError::VerdictTargetMissing {
                spec_id: verdict.spec_id.clone(),
                rank: verdict.rank,
            });
        };
        let Some(outcome) = verdict
            .rank
            .checked_sub(1)
            .and_then(|i| record.outcomes.get_mut(i))
        else {
            return Err(EvalError::VerdictTargetMissing {
                spec_id: verdict.spec_id.clone(),
                rank: verdict.rank,
            });
        };
        let judged = if verdict.verdict == "correct" {
            Correctness::Correct
        } else {
            Correctness::Incorrect
        };
        if judged == Correctness::Correct && !outcome.verdict.valid {
            return Err(EvalError::CorrectOnInvalid {
                spec_id: verdict.spec_id.clone(),
                rank: verdict.rank,
            });
        }
        outcome.correctness = judged;
    }
    Ok(())
}

/// Full evaluation report: one JSON document plus a rendered text table.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EvalReport {
    pub technique: Technique,
    pub spec_count: usize,
    pub validity_at_k: BTreeMap<usize, f64>,
    pub correctness_at_k: BTreeMap<usize, f64>,
    pub error_breakdown: BTreeMap<ErrorCategory, f64>,
    pub cost: CostSummary,
    pub size_scaling: BTreeMap<SizeCategory, BTreeMap<Technique, f64>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub mcnemar_validity: Option<McnemarResult>,
}

impl EvalReport {
    pub fn render_text(&self) -> String {
        let mut out = String::new();
        out.push_str(&format!(
            "technique: {}    specifications: {}\n",
            self.technique, self.spec_count
        ));
        out.push_str("k      validity%  correctness%\n");
        for (k, validity) in &self.validity_at_k {
            let correctness = self.correctness_at_k.get(k).copied().unwrap_or(0.0);
            out.push_str(&format!("{k:<6} {validity:>9.1}  {correctness:>12.1}\n"));
        }
        if !self.error_breakdown.is_empty() {
            out.push_str("error categories (% of invalid):\n");
            for (category, pct) in &self.error_breakdown {
                out.push_str(&format!("  {:<24} {pct:>6.1}\n", category.label()));
            }
        }
        out.push_str(&format!(
            "cost: {:.6} USD over {} completions, mean prompt tokens {:.1}\n",
            self.cost.total_cost_usd, self.cost.completion_count, self.cost.mean_prompt_tokens
        ));
        if !self.size_scaling.is_empty() {
            out.push_str("mean prompt tokens by model size:\n");
            for (category, per_technique) in &self.size_scaling {
                for (technique, mean) in per_technique {
                    out.push_str(&format!("  {category:<7} {technique:<17} {mean:>10.1}\n"));
                }
            }
        }
        if let Some(mcnemar) = &self.mcnemar_validity {
            out.push_str(&format!(
                "mcnemar validity: chi2 {:.4}, p {:.4}, table [[{}, {}], [{}, {}]]\n",
                mcnemar.chi_squared,
                mcnemar.p_value,
                mcnemar.table[0][0],
                mcnemar.table[0][1],
                mcnemar.table[1][0],
                mcnemar.table[1][1],
            ));
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn verdict(valid: bool) -> CheckVerdict {
        if valid {
            CheckVerdict::ok()
        } else {
            CheckVerdict::fail(
                ErrorCategory::UndefinedOperation,
                "x",
                crate::oclcheck::Span::default(),
            )
        }
    }

    fn outcome(valid: bool, correctness: Correctness) -> RankOutcome {
        RankOutcome {
            verdict: verdict(valid),
            correctness,
        }
    }

    fn record(id: &str, outcomes: Vec<RankOutcome>) -> SpecRecord {
        SpecRecord {
            id: id.to_string(),
            model_name: "m".to_string(),
            text: "t".to_string(),
            outcomes,
        }
    }

    /// Ten specs built so exactly 5, 6 and 7 succeed at k = 3, 5 and 10.
    fn synthetic_records() -> Vec<SpecRecord> {
        let mut records = Vec::new();
        for i in 0..10 {
            // first valid rank per spec: specs 0..5 at rank 1, spec 5 at
            // rank 4, spec 6 at rank 6, the rest never
            let first_valid = match i {
                0..=4 => Some(1),
                5 => Some(4),
                6 => Some(6),
                _ => None,
            };
            let outcomes = (1..=10)
                .map(|rank| {
                    let valid = first_valid == Some(rank);
                    let correctness = if valid {
                        Correctness::Correct
                    } else {
                        Correctness::Incorrect
                    };
                    outcome(valid, correctness)
                })
                .collect();
            records.push(record(&format!("s{i}"), outcomes));
        }
        records
    }

    #[test]
    fn validity_all_and_none() {
        let all = vec![
            record("a", vec![outcome(true, Correctness::Correct)]),
            record("b", vec![outcome(true, Correctness::Correct)]),
        ];
        assert_eq!(score_validity_at_k(&all, 1).unwrap(), 100.0);
        let none = vec![record("a", vec![outcome(false, Correctness::Incorrect)])];
        assert_eq!(score_validity_at_k(&none, 1).unwrap(), 0.0);
    }

    #[test]
    fn synthetic_fixture_scores_50_60_70() {
        let records = synthetic_records();
        assert_eq!(score_validity_at_k(&records, 3).unwrap(), 50.0);
        assert_eq!(score_validity_at_k(&records, 5).unwrap(), 60.0);
        assert_eq!(score_validity_at_k(&records, 10).unwrap(), 70.0);
    }

    #[test]
    fn correctness_all_judged_correct() {
        let records = vec![record("a", vec![outcome(true, Correctness::Correct)])];
        assert_eq!(
            score_correctness_at_k(&records, 1, UnjudgedPolicy::CountIncorrect).unwrap(),
            100.0
        );
    }

    #[test]
    fn unjudged_counts_incorrect_or_aborts() {
        let records = vec![record("a", vec![outcome(true, Correctness::Unjudged)])];
        assert_eq!(
            score_correctness_at_k(&records, 1, UnjudgedPolicy::CountIncorrect).unwrap(),
            0.0
        );
        assert!(matches!(
            score_correctness_at_k(&records, 1, UnjudgedPolicy::Strict),
            Err(EvalError::UnjudgedStrict { .. })
        ));
    }

    #[test]
    fn correct_verdict_on_invalid_constraint_is_rejected() {
        let mut records = vec![record("a", vec![outcome(false, Correctness::Unjudged)])];
        let verdicts = vec![VerdictRecord {
            spec_id: "a".into(),
            rank: 1,
            verdict: "correct".into(),
        }];
        assert!(matches!(
            apply_verdicts(&mut records, &verdicts),
            Err(EvalError::CorrectOnInvalid { .. })
        ));
    }

    #[test]
    fn per_constraint_mode_counts_ratios() {
        let records = vec![
            record(
                "a",
                vec![
                    outcome(true, Correctness::Correct),
                    outcome(false, Correctness::Incorrect),
                ],
            ),
            record(
                "b",
                vec![
                    outcome(false, Correctness::Incorrect),
                    outcome(false, Correctness::Incorrect),
                ],
            ),
        ];
        assert_eq!(score_validity_per_constraint(&records, 2).unwrap(), 25.0);
        assert_eq!(
            score_correctness_per_constraint(&records, 2, UnjudgedPolicy::CountIncorrect)
                .unwrap(),
            25.0
        );
    }

    #[test]
    fn mcnemar_paper_values() {
        // chi2 = 13.71 -> p = 0.0002; chi2 = 1.00 -> p = .317
        let p1 = chi_squared_one_dof_p_value(13.71);
        assert!((p1 - 0.000213).abs() < 1e-4, "p1 {p1}");
        let p2 = chi_squared_one_dof_p_value(1.0);
        assert!((p2 - 0.3173).abs() < 1e-3, "p2 {p2}");
    }

    #[test]
    fn mcnemar_symmetric_disagreement_gives_p_one() {
        let outcomes = vec![
            PairedOutcome {
                spec_id: "a".into(),
                technique_a: true,
                technique_b: false,
            },
            PairedOutcome {
                spec_id: "b".into(),
                technique_a: false,
                technique_b: true,
            },
        ];
        let result = mcnemar(&outcomes).unwrap();
        assert_eq!(result.chi_squared, 0.0);
        assert_eq!(result.p_value, 1.0);
        // no disagreement at all also yields p = 1
        let agree = vec![PairedOutcome {
            spec_id: "a".into(),
            technique_a: true,
            technique_b: true,
        }];
        assert_eq!(mcnemar(&agree).unwrap().p_value, 1.0);
    }

    #[test]
    fn mcnemar_is_invariant_to_swapping_techniques() {
        let outcomes: Vec<PairedOutcome> = (0..30)
            .map(|i| PairedOutcome {
                spec_id: format!("s{i}"),
                technique_a: i % 3 != 0,
                technique_b: i % 4 != 0,
            })
            .collect();
        let forward = mcnemar(&outcomes).unwrap();
        let swapped: Vec<PairedOutcome> = outcomes
            .iter()
            .map(|o| PairedOutcome {
                spec_id: o.spec_id.clone(),
                technique_a: o.technique_b,
                technique_b: o.technique_a,
            })
            .collect();
        let backward = mcnemar(&swapped).unwrap();
        assert_eq!(forward.chi_squared, backward.chi_squared);
        assert_eq!(forward.p_value, backward.p_value);
        assert_eq!(forward.table[0][1], backward.table[1][0]);
    }

    /// Numerically integrated chi-squared(1) upper tail, used as the
    /// independent oracle for the erfc-based p-value.
    fn chi2_tail_by_quadrature(x: f64) -> f64 {
        // pdf(t) = t^(-1/2) e^(-t/2) / (sqrt(2) * Gamma(1/2))
        let pdf = |t: f64| (-t / 2.0).exp() / (t.sqrt() * (2.0 * std::f64::consts::PI).sqrt());
        let upper = x + 300.0; // the remaining tail is below 1e-60
        let n = 2_000_000usize;
        let h = (upper - x) / n as f64;
        let mut sum = (pdf(x) + pdf(upper)) / 2.0;
        for i in 1..n {
            sum += pdf(x + i as f64 * h);
        }
        sum * h
    }

    #[test]
    fn p_value_matches_quadrature_oracle() {
        for chi in [0.5, 1.0, 2.0, 4.0] {
            let p = chi_squared_one_dof_p_value(chi);
            let oracle = chi2_tail_by_quadrature(chi);
            assert!(
                (p - oracle).abs() < 1e-6,
                "chi2 {chi}: erfc {p} vs quadrature {oracle}"
            );
        }
    }

    #[test]
    fn breakdown_all_one_category() {
        let records = vec![record(
            "a",
            vec![
                outcome(false, Correctness::Incorrect),
                outcome(false, Correctness::Incorrect),
            ],
        )];
        let breakdown = error_breakdown(&records);
        assert_eq!(breakdown.len(), 1);
        assert_eq!(breakdown[&ErrorCategory::UndefinedOperation], 100.0);
    }

    #[test]
    fn breakdown_empty_when_everything_valid() {
        let records = vec![record("a", vec![outcome(true, Correctness::Correct)])];
        assert!(error_breakdown(&records).is_empty());
    }

    #[test]
    fn breakdown_mixed_hand_count() {
        // 8 undefined, 1 parsing, 1 iterexp -> 80/10/10/0
        let mut outcomes = Vec::new();
        for _ in 0..8 {
            outcomes.push(outcome(false, Correctness::Incorrect));
        }
        outcomes.push(RankOutcome {
            verdict: CheckVerdict::fail(
                ErrorCategory::ParsingError,
                "x",
                crate::oclcheck::Span::default(),
            ),
            correctness: Correctness::Incorrect,
        });
        outcomes.push(RankOutcome {
            verdict: CheckVerdict::fail(
                ErrorCategory::IterExpInvalidSource,
                "x",
                crate::oclcheck::Span::default(),
            ),
            correctness: Correctness::Incorrect,
        });
        let records = vec![record("a", outcomes)];
        let breakdown = error_breakdown(&records);
        assert_eq!(breakdown[&ErrorCategory::UndefinedOperation], 80.0);
        assert_eq!(breakdown[&ErrorCategory::ParsingError], 10.0);
        assert_eq!(breakdown[&ErrorCategory::IterExpInvalidSource], 10.0);
        assert_eq!(breakdown.get(&ErrorCategory::SignatureMismatch), None);
        let total: f64 = breakdown.values().sum();
        assert!((total - 100.0).abs() < 0.1);
    }

    #[test]
    fn size_categories_follow_class_counts() {
        assert_eq!(size_category(2), SizeCategory::Small);
        assert_eq!(size_category(5), SizeCategory::Small);
        assert_eq!(size_category(6), SizeCategory::Medium);
        assert_eq!(size_category(9), SizeCategory::Medium);
        assert_eq!(size_category(10), SizeCategory::Large);
        assert_eq!(size_category(14), SizeCategory::Large);
    }

    #[test]
    fn size_scaling_single_small_model() {
        let models = vec![("airport".to_string(), 4)];
        let prompts = vec![
            TaggedPrompt {
                model_name: "airport".into(),
                technique: Technique::Pathocl,
                approx_tokens: 100,
            },
            TaggedPrompt {
                model_name: "airport".into(),
                technique: Technique::Pathocl,
                approx_tokens: 200,
            },
        ];
        let scaling = size_scaling(&models, &prompts);
        assert_eq!(scaling.len(), 1);
        assert_eq!(scaling[&SizeCategory::Small][&Technique::Pathocl], 150.0);
    }

    proptest! {
        /// Validity and correctness are non-decreasing in k and
        /// correctness never exceeds validity.
        #[test]
        fn metrics_are_monotone_and_ordered(
            seed in proptest::collection::vec((any::<bool>(), any::<bool>()), 1..8)
        ) {
            // spec i has outcomes with (valid, correct&valid) flags
            let records: Vec<SpecRecord> = seed
                .iter()
                .enumerate()
                .map(|(i, _)| {
                    let outcomes = seed
                        .iter()
                        .map(|(valid, correct)| {
                            let correctness = if *valid && *correct {
                                Correctness::Correct
                            } else {
                                Correctness::Incorrect
                            };
                            outcome(*valid, correctness)
                        })
                        .collect();
                    record(&format!("s{i}"), outcomes)
                })
                .collect();
            let mut previous_validity = 0.0f64;
            let mut previous_correctness = 0.0f64;
            for k in 1..=seed.len() {
                let validity = score_validity_at_k(&records, k).unwrap();
                let correctness =
                    score_correctness_at_k(&records, k, UnjudgedPolicy::CountIncorrect).unwrap();
                prop_assert!(validity + 1e-9 >= previous_validity);
                prop_assert!(correctness + 1e-9 >= previous_correctness);
                prop_assert!(correctness <= validity + 1e-9);
                previous_validity = validity;
                previous_correctness = correctness;
            }
        }
    }
}
