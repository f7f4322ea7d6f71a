//! `pathocl`: generate and validate OCL constraints from UML class models
//! by ranking simple paths against the English specification.

mod commands;
mod config;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use commands::{BackendChoice, EmbedderChoice, MetricChoice};
use config::{resolve, require, CliError, FileConfig};
use pathocl_core::prompt::{Technique, TEMPLATE_VERSION};

fn version_string() -> &'static str {
    let version = format!(
        "{} (prompt templates {})",
        env!("CARGO_PKG_VERSION"),
        TEMPLATE_VERSION
    );
    Box::leak(version.into_boxed_str())
}

#[derive(Parser)]
#[command(name = "pathocl", about = "Path-based OCL constraint generation pipeline", version = version_string())]
struct Cli {
    /// TOML config file supplying defaults for any omitted flag.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum MetricArg {
    Jaccard,
    Cosine,
}

#[derive(Clone, Copy, ValueEnum)]
enum TechniqueArg {
    Pathocl,
    #[value(name = "uml-augmentation")]
    UmlAugmentation,
}

impl From<TechniqueArg> for Technique {
    fn from(value: TechniqueArg) -> Technique {
        match value {
            TechniqueArg::Pathocl => Technique::Pathocl,
            TechniqueArg::UmlAugmentation => Technique::UmlAugmentation,
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum BackendArg {
    Replay,
    Live,
}

#[derive(Clone, Copy, ValueEnum)]
enum EmbedderArg {
    Bundled,
    Remote,
}

#[derive(Args)]
struct SpecSource {
    /// Inline specification text.
    #[arg(long, conflicts_with = "specs")]
    text: Option<String>,
    /// Identifier for inline text.
    #[arg(long, default_value = "inline", conflicts_with = "specs")]
    id: String,
    /// JSON-lines specification file: {"id", "text", "context_hint"}.
    #[arg(long)]
    specs: Option<PathBuf>,
}

#[derive(Args)]
struct RankingOpts {
    /// Similarity metric for path ranking.
    #[arg(long, value_enum)]
    metric: Option<MetricArg>,
    /// Number of top-ranked paths to keep.
    #[arg(long)]
    k: Option<usize>,
    /// Embedding provider for the cosine metric.
    #[arg(long, value_enum)]
    embedder: Option<EmbedderArg>,
    /// Maximum path length in classes (default: unbounded up to 8 classes,
    /// otherwise 5).
    #[arg(long)]
    max_len: Option<usize>,
    /// Abort when enumeration exceeds this many paths.
    #[arg(long)]
    cap: Option<usize>,
}

#[derive(Subcommand)]
enum Command {
    /// Load and validate a UML model file.
    Ingest {
        #[arg(long)]
        model: Option<PathBuf>,
        /// Print the canonical JSON form to stdout.
        #[arg(long)]
        emit: bool,
    },
    /// Extract the UML element set from specification text.
    Extract {
        #[command(flatten)]
        source: SpecSource,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Enumerate the simple paths of the model's UML graph.
    Paths {
        #[arg(long)]
        model: Option<PathBuf>,
        #[arg(long)]
        max_len: Option<usize>,
        #[arg(long)]
        cap: Option<usize>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Rank simple paths against a specification.
    Rank {
        #[arg(long)]
        model: Option<PathBuf>,
        #[command(flatten)]
        source: SpecSource,
        #[command(flatten)]
        ranking: RankingOpts,
        /// Write per-spec rank files here (required for multi-spec input).
        #[arg(long)]
        out_dir: Option<PathBuf>,
    },
    /// Craft prompts for the top-ranked paths.
    Prompt {
        #[arg(long)]
        model: Option<PathBuf>,
        #[command(flatten)]
        source: SpecSource,
        #[command(flatten)]
        ranking: RankingOpts,
        #[arg(long, value_enum)]
        technique: Option<TechniqueArg>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Run the full pipeline: rank, craft prompts and generate candidates.
    Generate {
        #[arg(long)]
        model: Option<PathBuf>,
        #[command(flatten)]
        source: SpecSource,
        #[command(flatten)]
        ranking: RankingOpts,
        #[arg(long, value_enum)]
        technique: Option<TechniqueArg>,
        #[arg(long, value_enum)]
        backend: Option<BackendArg>,
        /// Replay fixture path (replay backend).
        #[arg(long)]
        replay_fixture: Option<PathBuf>,
        /// Maximum concurrent requests.
        #[arg(long)]
        in_flight: Option<usize>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Validate one OCL constraint against a model.
    Validate {
        #[arg(long)]
        model: Option<PathBuf>,
        /// Constraint text.
        #[arg(long, conflicts_with = "constraint_file")]
        constraint: Option<String>,
        /// File holding the constraint text.
        #[arg(long)]
        constraint_file: Option<PathBuf>,
    },
    /// Score a run log: validity/correctness at k, error breakdown, cost.
    Evaluate {
        #[arg(long)]
        model: Option<PathBuf>,
        #[arg(long)]
        specs: Option<PathBuf>,
        /// Run log produced by `generate`.
        #[arg(long)]
        run_log: PathBuf,
        /// Correctness verdict file (JSON-lines).
        #[arg(long)]
        verdicts: Option<PathBuf>,
        /// Comma-separated k values.
        #[arg(long, value_delimiter = ',', default_values_t = vec![1usize, 3, 5, 10])]
        ks: Vec<usize>,
        /// Second run log; adds a McNemar validity comparison.
        #[arg(long)]
        compare: Option<PathBuf>,
        /// Abort on unjudged constraints instead of counting them incorrect.
        #[arg(long)]
        strict: bool,
        /// Write the JSON report here.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Summarize inference costs from a run log.
    Cost {
        #[arg(long)]
        run_log: PathBuf,
    },
}

fn metric_choice(
    metric: Option<MetricArg>,
    embedder: Option<EmbedderArg>,
    file: &FileConfig,
) -> Result<MetricChoice, CliError> {
    let metric = match (metric, file.metric.as_deref()) {
        (Some(m), _) => m,
        (None, Some("jaccard")) => MetricArg::Jaccard,
        (None, Some("cosine")) => MetricArg::Cosine,
        (None, Some(other)) => {
            return Err(CliError::Usage(format!(
                "config metric must be 'jaccard' or 'cosine', found '{other}'"
            )))
        }
        (None, None) => MetricArg::Jaccard,
    };
    let embedder = match (embedder, file.embedder.as_deref()) {
        (Some(e), _) => e,
        (None, Some("bundled")) => EmbedderArg::Bundled,
        (None, Some("remote")) => EmbedderArg::Remote,
        (None, Some(other)) => {
            return Err(CliError::Usage(format!(
                "config embedder must be 'bundled' or 'remote', found '{other}'"
            )))
        }
        (None, None) => EmbedderArg::Bundled,
    };
    let embedder = match embedder {
        EmbedderArg::Bundled => EmbedderChoice::Bundled,
        EmbedderArg::Remote => {
            let endpoint = file
                .embed_endpoint
                .clone()
                .or_else(|| std::env::var("PATHOCL_EMBED_ENDPOINT").ok())
                .ok_or_else(|| {
                    CliError::Usage(
                        "remote embedder requires embed_endpoint in the config or PATHOCL_EMBED_ENDPOINT".to_string(),
                    )
                })?;
            EmbedderChoice::Remote {
                endpoint,
                model: file
                    .embed_model
                    .clone()
                    .unwrap_or_else(|| "all-MiniLM-L6-v2".to_string()),
                cache: file
                    .embed_cache
                    .clone()
                    .unwrap_or_else(|| PathBuf::from("embed-cache.jsonl")),
            }
        }
    };
    Ok(MetricChoice {
        cosine: matches!(metric, MetricArg::Cosine),
        embedder,
    })
}

fn technique_choice(
    flag: Option<TechniqueArg>,
    file: &FileConfig,
) -> Result<Technique, CliError> {
    match (flag, file.technique.as_deref()) {
        (Some(t), _) => Ok(t.into()),
        (None, Some(text)) => text.parse::<Technique>().map_err(CliError::Usage),
        (None, None) => Ok(Technique::Pathocl),
    }
}

fn backend_choice(
    flag: Option<BackendArg>,
    replay_fixture: Option<PathBuf>,
    file: &FileConfig,
) -> Result<BackendChoice, CliError> {
    let backend = match (flag, file.backend.as_deref()) {
        (Some(b), _) => b,
        (None, Some("replay")) => BackendArg::Replay,
        (None, Some("live")) => BackendArg::Live,
        (None, Some(other)) => {
            return Err(CliError::Usage(format!(
                "config backend must be 'replay' or 'live', found '{other}'"
            )))
        }
        (None, None) => BackendArg::Replay,
    };
    match backend {
        BackendArg::Replay => {
            let fixture = require(
                replay_fixture,
                file.replay_fixture.clone(),
                "a replay fixture (--replay-fixture)",
            )?;
            Ok(BackendChoice::Replay(fixture))
        }
        BackendArg::Live => {
            if std::env::var(pathocl_core::llm::ENDPOINT_ENV).is_err() {
                return Err(CliError::Usage(format!(
                    "live backend requires the {} environment variable",
                    pathocl_core::llm::ENDPOINT_ENV
                )));
            }
            Ok(BackendChoice::Live)
        }
    }
}

fn run(cli: Cli) -> Result<(), CliError> {
    let file = FileConfig::load(cli.config.as_ref())?;
    match cli.command {
        Command::Ingest { model, emit } => {
            let model = require(model, file.model_file.clone(), "a model file (--model)")?;
            commands::ingest(&model, emit)
        }
        Command::Extract { source, out } => commands::extract(
            source.text.as_deref(),
            &source.id,
            source.specs.or(file.specs_file).as_deref(),
            out.as_deref(),
        ),
        Command::Paths {
            model,
            max_len,
            cap,
            out,
        } => {
            let model = require(model, file.model_file.clone(), "a model file (--model)")?;
            commands::paths(
                &model,
                max_len.or(file.max_path_len),
                cap.or(file.path_cap),
                out.as_deref(),
            )
        }
        Command::Rank {
            model,
            source,
            ranking,
            out_dir,
        } => {
            let model = require(model, file.model_file.clone(), "a model file (--model)")?;
            let metric = metric_choice(ranking.metric, ranking.embedder, &file)?;
            let k = resolve(ranking.k, file.k, 10);
            commands::rank(commands::RankArgs {
                model_path: &model,
                text: source.text.as_deref(),
                id: &source.id,
                specs: source.specs.or(file.specs_file.clone()).as_deref(),
                metric,
                k,
                max_len: ranking.max_len.or(file.max_path_len),
                cap: ranking.cap.or(file.path_cap),
                out_dir: out_dir.or(file.output_dir).as_deref(),
            })
        }
        Command::Prompt {
            model,
            source,
            ranking,
            technique,
            out,
        } => {
            let model = require(model, file.model_file.clone(), "a model file (--model)")?;
            let metric = metric_choice(ranking.metric, ranking.embedder, &file)?;
            let technique = technique_choice(technique, &file)?;
            let k = resolve(ranking.k, file.k, 10);
            commands::prompt(commands::PromptArgs {
                model_path: &model,
                text: source.text.as_deref(),
                id: &source.id,
                specs: source.specs.or(file.specs_file.clone()).as_deref(),
                metric,
                k,
                technique,
                max_len: ranking.max_len.or(file.max_path_len),
                cap: ranking.cap.or(file.path_cap),
                out: out.as_deref(),
            })
        }
        Command::Generate {
            model,
            source,
            ranking,
            technique,
            backend,
            replay_fixture,
            in_flight,
            out,
        } => {
            let model = require(model, file.model_file.clone(), "a model file (--model)")?;
            let metric = metric_choice(ranking.metric, ranking.embedder, &file)?;
            let technique = technique_choice(technique, &file)?;
            let backend = backend_choice(backend, replay_fixture, &file)?;
            let k = resolve(ranking.k, file.k, 10);
            commands::generate(commands::GenerateArgs {
                model_path: &model,
                text: source.text.as_deref(),
                id: &source.id,
                specs: source.specs.or(file.specs_file.clone()).as_deref(),
                metric,
                k,
                technique,
                backend,
                generation: file.generation_config(),
                in_flight: resolve(in_flight, file.in_flight, 4),
                max_len: ranking.max_len.or(file.max_path_len),
                cap: ranking.cap.or(file.path_cap),
                out: out.as_deref(),
            })
        }
        Command::Validate {
            model,
            constraint,
            constraint_file,
        } => {
            let model = require(model, file.model_file.clone(), "a model file (--model)")?;
            commands::validate_cmd(&model, constraint.as_deref(), constraint_file.as_deref())
        }
        Command::Evaluate {
            model,
            specs,
            run_log,
            verdicts,
            ks,
            compare,
            strict,
            out,
        } => {
            let model = require(model, file.model_file.clone(), "a model file (--model)")?;
            let specs = require(specs, file.specs_file.clone(), "a specs file (--specs)")?;
            commands::evaluate(commands::EvaluateArgs {
                model_path: &model,
                specs: &specs,
                run_log: &run_log,
                verdicts: verdicts.as_deref(),
                ks,
                compare: compare.as_deref(),
                strict,
                out: out.as_deref(),
            })
        }
        Command::Cost { run_log } => commands::cost(&run_log),
    }
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            // help/version are not usage errors
            if e.use_stderr() {
                eprint!("{e}");
                return ExitCode::from(1);
            }
            print!("{e}");
            return ExitCode::SUCCESS;
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
