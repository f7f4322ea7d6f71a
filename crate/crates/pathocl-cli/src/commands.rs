//! Subcommand implementations. Stage outputs use the pipeline's JSON-lines
//! formats; everything here is deterministic for a fixed input set when the
//! replay backend and bundled embedder are selected.

use std::io::Write;
use std::path::{Path, PathBuf};

use serde::Serialize;

use pathocl_core::evalharness::{
    apply_verdicts, error_breakdown, load_verdicts, mcnemar, paired_validity,
    score_correctness_at_k, score_validity_at_k, size_scaling, Correctness, EvalReport,
    RankOutcome, SpecRecord, TaggedPrompt, UnjudgedPolicy,
};
use pathocl_core::llm::{
    cost_report, generate_many, GenerationConfig, GenerationJob, Generator, LiveBackend,
    ReplayBackend, RunRecord,
};
use pathocl_core::model::UmlModel;
use pathocl_core::nlp::{extract_uml_elements, load_specs, preprocess, SpecInput, UmlElementSet};
use pathocl_core::oclcheck::{validate, CheckVerdict};
use pathocl_core::pathgen::{
    build_graph, default_max_len, enumerate_simple_paths_capped, SimplePath, DEFAULT_PATH_CAP,
};
use pathocl_core::prompt::{
    craft_full_model_prompt, craft_prompt, PromptBundle, Technique,
};
use pathocl_core::rank::{rank_paths, Embedder, Metric, RankedPath, RemoteEmbedder, TrigramHashEmbedder};

use crate::config::CliError;

pub fn load_model_file(path: &Path) -> Result<UmlModel, CliError> {
    pathocl_core::model::load_model(path).map_err(CliError::data)
}

fn load_specs_file(path: &Path) -> Result<Vec<SpecInput>, CliError> {
    let specs = load_specs(path).map_err(CliError::data)?;
    if specs.is_empty() {
        return Err(CliError::Data(format!(
            "specification file {} holds no records",
            path.display()
        )));
    }
    Ok(specs)
}

fn elements_for(text: &str) -> Result<UmlElementSet, CliError> {
    let tokens = preprocess(text).map_err(CliError::data)?;
    let elements = extract_uml_elements(&tokens);
    if elements.is_empty() {
        log::warn!("specification yields an empty UML element set; every path will score 0");
    }
    Ok(elements)
}

fn pipeline_paths(
    model: &UmlModel,
    max_len: Option<usize>,
    cap: Option<usize>,
) -> Result<Vec<SimplePath>, CliError> {
    let graph = build_graph(model);
    let limit = max_len.or_else(|| default_max_len(graph.node_count()));
    enumerate_simple_paths_capped(&graph, limit, cap.unwrap_or(DEFAULT_PATH_CAP))
        .map_err(CliError::data)
}

pub enum EmbedderChoice {
    Bundled,
    Remote {
        endpoint: String,
        model: String,
        cache: PathBuf,
    },
}

fn make_embedder(choice: &EmbedderChoice) -> Result<Box<dyn Embedder>, CliError> {
    match choice {
        EmbedderChoice::Bundled => Ok(Box::new(TrigramHashEmbedder::default())),
        EmbedderChoice::Remote {
            endpoint,
            model,
            cache,
        } => {
            let api_key = std::env::var("PATHOCL_EMBED_API_KEY").ok();
            let remote = RemoteEmbedder::new(endpoint.clone(), api_key, model.clone(), 384, cache)
                .map_err(CliError::backend)?;
            Ok(Box::new(remote))
        }
    }
}

pub struct MetricChoice {
    pub cosine: bool,
    pub embedder: EmbedderChoice,
}

fn rank_spec(
    model: &UmlModel,
    paths: &[SimplePath],
    text: &str,
    metric: &MetricChoice,
    k: usize,
) -> Result<Vec<RankedPath>, CliError> {
    let elements = elements_for(text)?;
    if metric.cosine {
        let embedder = make_embedder(&metric.embedder)?;
        rank_paths(model, paths, &elements, &Metric::Cosine(embedder.as_ref()), k)
            .map_err(CliError::data)
    } else {
        rank_paths(model, paths, &elements, &Metric::Jaccard, k).map_err(CliError::data)
    }
}

fn write_lines(out: Option<&Path>, lines: &[String]) -> Result<(), CliError> {
    let body = if lines.is_empty() {
        String::new()
    } else {
        format!("{}\n", lines.join("\n"))
    };
    match out {
        Some(path) => std::fs::write(path, body)
            .map_err(|e| CliError::Data(format!("cannot write {}: {e}", path.display()))),
        None => {
            print!("{body}");
            std::io::stdout().flush().ok();
            Ok(())
        }
    }
}

// ---------------------------------------------------------------------
// ingest
// ---------------------------------------------------------------------

pub fn ingest(model_path: &Path, emit: bool) -> Result<(), CliError> {
    let model = load_model_file(model_path)?;
    eprintln!(
        "model '{}': {} classes, {} associations",
        model.name,
        model.classes.len(),
        model.associations.len()
    );
    if emit {
        println!("{}", model.to_json());
    }
    Ok(())
}

// ---------------------------------------------------------------------
// extract
// ---------------------------------------------------------------------

#[derive(Serialize)]
struct ElementsRecord {
    id: String,
    elements: Vec<String>,
}

pub fn extract(
    text: Option<&str>,
    id: &str,
    specs: Option<&Path>,
    out: Option<&Path>,
) -> Result<(), CliError> {
    let inputs = gather_specs(text, id, specs)?;
    let mut lines = Vec::new();
    for spec in &inputs {
        let elements = elements_for(&spec.text)?;
        let record = ElementsRecord {
            id: spec.id.clone(),
            elements: elements.elements.iter().cloned().collect(),
        };
        lines.push(serde_json::to_string(&record).expect("record serializes"));
    }
    write_lines(out, &lines)
}

fn gather_specs(
    text: Option<&str>,
    id: &str,
    specs: Option<&Path>,
) -> Result<Vec<SpecInput>, CliError> {
    match (text, specs) {
        (Some(t), None) => Ok(vec![SpecInput {
            id: id.to_string(),
            text: t.to_string(),
            context_hint: None,
        }]),
        (None, Some(path)) => load_specs_file(path),
        _ => Err(CliError::Usage(
            "provide exactly one of --text or --specs".to_string(),
        )),
    }
}

// ---------------------------------------------------------------------
// paths
// ---------------------------------------------------------------------

#[derive(Serialize)]
struct PathRecord<'a> {
    path: &'a SimplePath,
}

pub fn paths(
    model_path: &Path,
    max_len: Option<usize>,
    cap: Option<usize>,
    out: Option<&Path>,
) -> Result<(), CliError> {
    let model = load_model_file(model_path)?;
    let all = pipeline_paths(&model, max_len, cap)?;
    let lines: Vec<String> = all
        .iter()
        .map(|p| serde_json::to_string(&PathRecord { path: p }).expect("path serializes"))
        .collect();
    write_lines(out, &lines)
}

// ---------------------------------------------------------------------
// rank
// ---------------------------------------------------------------------

pub struct RankArgs<'a> {
    pub model_path: &'a Path,
    pub text: Option<&'a str>,
    pub id: &'a str,
    pub specs: Option<&'a Path>,
    pub metric: MetricChoice,
    pub k: usize,
    pub max_len: Option<usize>,
    pub cap: Option<usize>,
    pub out_dir: Option<&'a Path>,
}

pub fn rank(args: RankArgs<'_>) -> Result<(), CliError> {
    let model = load_model_file(args.model_path)?;
    let inputs = gather_specs(args.text, args.id, args.specs)?;
    let all_paths = pipeline_paths(&model, args.max_len, args.cap)?;
    if inputs.len() > 1 && args.out_dir.is_none() {
        return Err(CliError::Usage(
            "ranking multiple specifications requires --out-dir".to_string(),
        ));
    }
    for spec in &inputs {
        let ranked = rank_spec(&model, &all_paths, &spec.text, &args.metric, args.k)?;
        let lines: Vec<String> = ranked
            .iter()
            .map(|r| serde_json::to_string(r).expect("ranked path serializes"))
            .collect();
        match args.out_dir {
            Some(dir) => {
                std::fs::create_dir_all(dir)
                    .map_err(|e| CliError::Data(format!("cannot create {}: {e}", dir.display())))?;
                let file = dir.join(format!("{}.ranks.jsonl", spec.id));
                write_lines(Some(&file), &lines)?;
            }
            None => write_lines(None, &lines)?,
        }
    }
    Ok(())
}

// ---------------------------------------------------------------------
// prompt
// ---------------------------------------------------------------------

#[derive(Serialize)]
struct PromptRecord<'a> {
    spec_id: &'a str,
    rank: u32,
    system: &'a str,
    user: &'a str,
    approx_tokens: u64,
}

/// Craft the prompt bundles for one spec under a technique.
fn bundles_for_spec(
    model: &UmlModel,
    all_paths: &[SimplePath],
    spec: &SpecInput,
    technique: Technique,
    metric: &MetricChoice,
    k: usize,
) -> Result<Vec<(u32, PromptBundle)>, CliError> {
    match technique {
        Technique::Pathocl => {
            let ranked = rank_spec(model, all_paths, &spec.text, metric, k)?;
            ranked
                .iter()
                .map(|r| {
                    craft_prompt(model, &r.path, &spec.text)
                        .map(|b| (r.rank as u32, b))
                        .map_err(CliError::data)
                })
                .collect()
        }
        Technique::UmlAugmentation => {
            let bundle = craft_full_model_prompt(model, &spec.text).map_err(CliError::data)?;
            Ok(vec![(1, bundle)])
        }
    }
}

pub struct PromptArgs<'a> {
    pub model_path: &'a Path,
    pub text: Option<&'a str>,
    pub id: &'a str,
    pub specs: Option<&'a Path>,
    pub metric: MetricChoice,
    pub k: usize,
    pub technique: Technique,
    pub max_len: Option<usize>,
    pub cap: Option<usize>,
    pub out: Option<&'a Path>,
}

pub fn prompt(args: PromptArgs<'_>) -> Result<(), CliError> {
    let model = load_model_file(args.model_path)?;
    let inputs = gather_specs(args.text, args.id, args.specs)?;
    let all_paths = pipeline_paths(&model, args.max_len, args.cap)?;
    let mut lines = Vec::new();
    for spec in &inputs {
        for (rank, bundle) in
            bundles_for_spec(&model, &all_paths, spec, args.technique, &args.metric, args.k)?
        {
            let record = PromptRecord {
                spec_id: &spec.id,
                rank,
                system: &bundle.system_text,
                user: &bundle.user_text,
                approx_tokens: bundle.approx_tokens,
            };
            lines.push(serde_json::to_string(&record).expect("prompt record serializes"));
        }
    }
    write_lines(args.out, &lines)
}

// ---------------------------------------------------------------------
// generate
// ---------------------------------------------------------------------

pub enum BackendChoice {
    Replay(PathBuf),
    Live,
}

pub struct GenerateArgs<'a> {
    pub model_path: &'a Path,
    pub text: Option<&'a str>,
    pub id: &'a str,
    pub specs: Option<&'a Path>,
    pub metric: MetricChoice,
    pub k: usize,
    pub technique: Technique,
    pub backend: BackendChoice,
    pub generation: GenerationConfig,
    pub in_flight: usize,
    pub max_len: Option<usize>,
    pub cap: Option<usize>,
    pub out: Option<&'a Path>,
}

pub fn generate(args: GenerateArgs<'_>) -> Result<(), CliError> {
    let model = load_model_file(args.model_path)?;
    let inputs = gather_specs(args.text, args.id, args.specs)?;
    let all_paths = pipeline_paths(&model, args.max_len, args.cap)?;
    let mut jobs = Vec::new();
    for spec in &inputs {
        for (rank, bundle) in
            bundles_for_spec(&model, &all_paths, spec, args.technique, &args.metric, args.k)?
        {
            jobs.push(GenerationJob {
                spec_id: spec.id.clone(),
                rank,
                technique: args.technique,
                bundle,
            });
        }
    }
    let backend: Box<dyn Generator> = match &args.backend {
        BackendChoice::Replay(path) => Box::new(ReplayBackend::load(path).map_err(CliError::backend)?),
        BackendChoice::Live => Box::new(LiveBackend::from_env().map_err(CliError::backend)?),
    };
    let records = generate_many(&jobs, &args.generation, backend.as_ref(), args.in_flight)
        .map_err(CliError::backend)?;
    let lines: Vec<String> = records
        .iter()
        .map(|r| serde_json::to_string(r).expect("run record serializes"))
        .collect();
    write_lines(args.out, &lines)
}

// ---------------------------------------------------------------------
// validate
// ---------------------------------------------------------------------

#[derive(Serialize)]
struct VerdictOut {
    valid: bool,
    category: Option<String>,
    message: String,
    span: [usize; 2],
}

impl From<&CheckVerdict> for VerdictOut {
    fn from(verdict: &CheckVerdict) -> VerdictOut {
        match &verdict.error {
            None => VerdictOut {
                valid: true,
                category: None,
                message: String::new(),
                span: [0, 0],
            },
            Some(error) => VerdictOut {
                valid: false,
                category: Some(error.category.label().to_string()),
                message: error.message.clone(),
                span: [error.span.start, error.span.end],
            },
        }
    }
}

pub fn validate_cmd(
    model_path: &Path,
    constraint: Option<&str>,
    constraint_file: Option<&Path>,
) -> Result<(), CliError> {
    let model = load_model_file(model_path)?;
    let text = match (constraint, constraint_file) {
        (Some(t), None) => t.to_string(),
        (None, Some(path)) => std::fs::read_to_string(path)
            .map_err(|e| CliError::Data(format!("cannot read {}: {e}", path.display())))?
            .trim()
            .to_string(),
        _ => {
            return Err(CliError::Usage(
                "provide exactly one of --constraint or --constraint-file".to_string(),
            ))
        }
    };
    let verdict = validate(&text, &model);
    println!(
        "{}",
        serde_json::to_string(&VerdictOut::from(&verdict)).expect("verdict serializes")
    );
    Ok(())
}

// ---------------------------------------------------------------------
// evaluate
// ---------------------------------------------------------------------

pub fn load_run_log(path: &Path) -> Result<Vec<RunRecord>, CliError> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| CliError::Data(format!("cannot read run log {}: {e}", path.display())))?;
    let mut records = Vec::new();
    for (i, line) in text.lines().enumerate() {
        if line.trim().is_empty() {
            continue;
        }
        let record: RunRecord = serde_json::from_str(line).map_err(|e| {
            CliError::Data(format!(
                "invalid run record on line {} of {}: {e}",
                i + 1,
                path.display()
            ))
        })?;
        records.push(record);
    }
    if records.is_empty() {
        return Err(CliError::Data(format!(
            "run log {} holds no records",
            path.display()
        )));
    }
    Ok(records)
}

/// Group a run log into per-spec records, validating every completion
/// against the model. Specs without completions are dropped with a warning.
fn build_spec_records(
    model: &UmlModel,
    specs: &[SpecInput],
    run: &[RunRecord],
) -> Vec<SpecRecord> {
    let mut out = Vec::new();
    for spec in specs {
        let mut mine: Vec<&RunRecord> = run.iter().filter(|r| r.spec_id == spec.id).collect();
        mine.sort_by_key(|r| r.rank);
        if mine.is_empty() {
            log::warn!("spec '{}' has no completions in the run log; skipping", spec.id);
            continue;
        }
        let outcomes = mine
            .iter()
            .map(|r| RankOutcome {
                verdict: validate(&r.completion.text, model),
                correctness: Correctness::Unjudged,
            })
            .collect();
        out.push(SpecRecord {
            id: spec.id.clone(),
            model_name: model.name.clone(),
            text: spec.text.clone(),
            outcomes,
        });
    }
    out
}

pub struct EvaluateArgs<'a> {
    pub model_path: &'a Path,
    pub specs: &'a Path,
    pub run_log: &'a Path,
    pub verdicts: Option<&'a Path>,
    pub ks: Vec<usize>,
    pub compare: Option<&'a Path>,
    pub strict: bool,
    pub out: Option<&'a Path>,
}

pub fn evaluate(args: EvaluateArgs<'_>) -> Result<(), CliError> {
    let model = load_model_file(args.model_path)?;
    let specs = load_specs_file(args.specs)?;
    let run = load_run_log(args.run_log)?;
    let mut records = build_spec_records(&model, &specs, &run);
    if records.is_empty() {
        return Err(CliError::Data(
            "run log and specification file share no spec ids".to_string(),
        ));
    }
    if let Some(verdict_path) = args.verdicts {
        let verdicts = load_verdicts(verdict_path).map_err(CliError::data)?;
        apply_verdicts(&mut records, &verdicts).map_err(CliError::data)?;
    }
    let policy = if args.strict {
        UnjudgedPolicy::Strict
    } else {
        UnjudgedPolicy::CountIncorrect
    };
    let mut ks = args.ks.clone();
    ks.sort_unstable();
    ks.dedup();
    if ks.is_empty() || ks[0] == 0 {
        return Err(CliError::Usage("--ks must list positive integers".to_string()));
    }
    let mut validity_at_k = std::collections::BTreeMap::new();
    let mut correctness_at_k = std::collections::BTreeMap::new();
    for &k in &ks {
        validity_at_k.insert(k, score_validity_at_k(&records, k).map_err(CliError::data)?);
        correctness_at_k.insert(
            k,
            score_correctness_at_k(&records, k, policy).map_err(CliError::data)?,
        );
    }
    let technique = run.first().map(|r| r.technique).unwrap_or(Technique::Pathocl);
    let models = vec![(model.name.clone(), model.classes.len())];
    let mut prompts: Vec<TaggedPrompt> = run
        .iter()
        .map(|r| TaggedPrompt {
            model_name: model.name.clone(),
            technique: r.technique,
            approx_tokens: r.completion.input_tokens,
        })
        .collect();
    let mcnemar_validity = match args.compare {
        Some(compare_path) => {
            let other_run = load_run_log(compare_path)?;
            let other_records = build_spec_records(&model, &specs, &other_run);
            prompts.extend(other_run.iter().map(|r| TaggedPrompt {
                model_name: model.name.clone(),
                technique: r.technique,
                approx_tokens: r.completion.input_tokens,
            }));
            let k_max = *ks.last().expect("ks is non-empty");
            let paired = paired_validity(&records, &other_records, k_max);
            Some(mcnemar(&paired).map_err(CliError::data)?)
        }
        None => None,
    };
    let report = EvalReport {
        technique,
        spec_count: records.len(),
        validity_at_k,
        correctness_at_k,
        error_breakdown: error_breakdown(&records),
        cost: cost_report(&run),
        size_scaling: size_scaling(&models, &prompts),
        mcnemar_validity,
    };
    let json = serde_json::to_string_pretty(&report).expect("report serializes");
    if let Some(path) = args.out {
        std::fs::write(path, format!("{json}\n"))
            .map_err(|e| CliError::Data(format!("cannot write {}: {e}", path.display())))?;
    }
    print!("{}", report.render_text());
    std::io::stdout().flush().ok();
    Ok(())
}

// ---------------------------------------------------------------------
// cost
// ---------------------------------------------------------------------

pub fn cost(run_log: &Path) -> Result<(), CliError> {
    let run = load_run_log(run_log)?;
    let summary = cost_report(&run);
    println!(
        "{}",
        serde_json::to_string_pretty(&summary).expect("summary serializes")
    );
    Ok(())
}
