//! Core library for the PathOCL pipeline: loading UML class models,
//! preprocessing English specifications, enumerating and ranking simple
//! paths, crafting reduced-context prompts, generating OCL constraints
//! through a chat-completion backend, and validating the results against
//! the model.

pub mod evalharness;
pub mod llm;
pub mod model;
pub mod nlp;
pub mod oclcheck;
pub mod pathgen;
pub mod prompt;
pub mod rank;

pub use model::{load_model, Multiplicity, UmlClass, UmlModel};
pub use nlp::{extract_uml_elements, preprocess, UmlElementSet};
pub use oclcheck::{validate, CheckVerdict, ErrorCategory};
pub use pathgen::{build_graph, enumerate_simple_paths, SimplePath, UmlGraph};
pub use prompt::{craft_prompt, PromptBundle, Technique};
pub use rank::{jaccard, rank_paths, MetricKind, RankedPath};
