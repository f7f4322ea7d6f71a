//! Prompt crafting: a fixed system instruction plus a user message holding
//! the specification and a canonical JSON rendering of the selected UML
//! class subset.
//!
//! The path-based mode includes only the classes on the simple path and
//! omits any association with an end outside that set, so the context never
//! mentions a class the prompt does not define. The whole-model mode is the
//! comparison baseline.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::model::{UmlClass, UmlModel};
use crate::pathgen::SimplePath;

/// Bump when either template changes: replay fixtures are keyed by prompt
/// content and go stale across template revisions.
pub const TEMPLATE_VERSION: &str = "v1";

pub const SYSTEM_PROMPT: &str = "You are an expert in UML modeling and the Object Constraint Language (OCL). Given an English specification and a set of UML classes, write exactly one OCL constraint. Output only the OCL constraint.";

#[derive(Debug, Error)]
pub enum PromptError {
    #[error("path references unknown class '{0}'")]
    UnknownClass(String),
    #[error("specification text is empty")]
    EmptySpec,
}

/// Prompting technique: path-based context reduction or the whole-model
/// baseline.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Technique {
    Pathocl,
    UmlAugmentation,
}

impl std::fmt::Display for Technique {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Technique::Pathocl => write!(f, "pathocl"),
            Technique::UmlAugmentation => write!(f, "uml-augmentation"),
        }
    }
}

impl std::str::FromStr for Technique {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "pathocl" => Ok(Technique::Pathocl),
            "uml-augmentation" => Ok(Technique::UmlAugmentation),
            other => Err(format!("unknown technique '{other}'")),
        }
    }
}

#[derive(Debug, Serialize, Deserialize)]
struct ContextAttribute {
    name: String,
    #[serde(rename = "type")]
    type_name: String,
}

#[derive(Debug, Serialize, Deserialize)]
struct ContextParam {
    name: String,
    #[serde(rename = "type")]
    type_name: String,
}

#[derive(Debug, Serialize, Deserialize)]
struct ContextOperation {
    name: String,
    params: Vec<ContextParam>,
    returns: Option<String>,
}

#[derive(Debug, Serialize, Deserialize)]
struct ContextRole {
    role: String,
    target: String,
    multiplicity: String,
}

#[derive(Debug, Serialize, Deserialize)]
struct ContextClass {
    name: String,
    attributes: Vec<ContextAttribute>,
    operations: Vec<ContextOperation>,
    roles: Vec<ContextRole>,
}

/// A ready-to-send prompt pair with its serialized class context and a
/// provider-neutral token estimate.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PromptBundle {
    pub system_text: String,
    pub user_text: String,
    /// `None` for the whole-model baseline.
    pub path: Option<SimplePath>,
    pub context_json: String,
    pub approx_tokens: u64,
}

/// Desk-scale token estimate: ceil(character count / 4) over both messages.
/// Replaced by the provider's reported usage when a live call is made.
pub fn approx_tokens(system_text: &str, user_text: &str) -> u64 {
    let chars = system_text.chars().count() + user_text.chars().count();
    chars.div_ceil(4) as u64
}

fn context_class(
    model: &UmlModel,
    class: &UmlClass,
    visible: Option<&[String]>,
) -> Result<ContextClass, PromptError> {
    let navs = model
        .navigations_of(&class.name)
        .map_err(|_| PromptError::UnknownClass(class.name.clone()))?;
    let roles = navs
        .into_iter()
        .filter(|n| visible.is_none_or(|set| set.contains(&n.target)))
        .map(|n| ContextRole {
            role: n.role,
            target: n.target,
            multiplicity: n.multiplicity.to_string(),
        })
        .collect();
    Ok(ContextClass {
        name: class.name.clone(),
        attributes: class
            .attributes
            .iter()
            .map(|a| ContextAttribute {
                name: a.name.clone(),
                type_name: a.type_name.clone(),
            })
            .collect(),
        operations: class
            .operations
            .iter()
            .map(|o| ContextOperation {
                name: o.name.clone(),
                params: o
                    .params
                    .iter()
                    .map(|p| ContextParam {
                        name: p.name.clone(),
                        type_name: p.type_name.clone(),
                    })
                    .collect(),
                returns: o.returns.clone(),
            })
            .collect(),
        roles,
    })
}

fn render_user_text(spec_text: &str, context_json: &str) -> String {
    format!("Specification:\n{spec_text}\n\nUML classes (JSON):\n{context_json}")
}

fn bundle(
    spec_text: &str,
    classes: Vec<ContextClass>,
    path: Option<SimplePath>,
) -> PromptBundle {
    let context_json =
        serde_json::to_string(&classes).expect("context serialization cannot fail");
    let user_text = render_user_text(spec_text, &context_json);
    let approx = approx_tokens(SYSTEM_PROMPT, &user_text);
    PromptBundle {
        system_text: SYSTEM_PROMPT.to_string(),
        user_text,
        path,
        context_json,
        approx_tokens: approx,
    }
}

/// Craft the path-based prompt: context restricted to the path's classes,
/// with associations whose far end lies outside the path omitted.
pub fn craft_prompt(
    model: &UmlModel,
    path: &SimplePath,
    spec_text: &str,
) -> Result<PromptBundle, PromptError> {
    if spec_text.trim().is_empty() {
        return Err(PromptError::EmptySpec);
    }
    let visible: Vec<String> = path.classes().to_vec();
    let mut classes = Vec::with_capacity(path.len());
    for name in path.classes() {
        let class = model
            .class_of(name)
            .ok_or_else(|| PromptError::UnknownClass(name.clone()))?;
        classes.push(context_class(model, class, Some(&visible))?);
    }
    Ok(bundle(spec_text, classes, Some(path.clone())))
}

/// Craft the whole-model baseline prompt (every class, every association).
pub fn craft_full_model_prompt(
    model: &UmlModel,
    spec_text: &str,
) -> Result<PromptBundle, PromptError> {
    if spec_text.trim().is_empty() {
        return Err(PromptError::EmptySpec);
    }
    let classes = model
        .classes
        .iter()
        .map(|c| context_class(model, c, None))
        .collect::<Result<Vec<_>, _>>()?;
    Ok(bundle(spec_text, classes, None))
}

/// Class names present in a bundle's context, in context order.
pub fn context_class_names(bundle: &PromptBundle) -> Vec<String> {
    let classes: Vec<ContextClass> =
        serde_json::from_str(&bundle.context_json).expect("context is valid JSON");
    classes.into_iter().map(|c| c.name).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::parse_model;

    const AIRPORT_SPEC: &str =
        "The maximum number of passengers on any flight may not exceed 1000.";

    fn airport() -> UmlModel {
        let dir = concat!(env!("CARGO_MANIFEST_DIR"), "/../../fixtures/");
        parse_model(&std::fs::read_to_string(format!("{dir}airport.model.json")).unwrap()).unwrap()
    }

    fn royal_loyal() -> UmlModel {
        let dir = concat!(env!("CARGO_MANIFEST_DIR"), "/../../fixtures/");
        parse_model(&std::fs::read_to_string(format!("{dir}royal_loyal.model.json")).unwrap())
            .unwrap()
    }

    fn path(classes: &[&str]) -> SimplePath {
        SimplePath::new(classes.iter().map(|c| c.to_string()).collect())
    }

    #[test]
    fn context_contains_exactly_the_path_classes() {
        let bundle = craft_prompt(&airport(), &path(&["Flight", "Person"]), AIRPORT_SPEC).unwrap();
        assert_eq!(context_class_names(&bundle), ["Flight", "Person"]);
        assert!(bundle.user_text.contains(AIRPORT_SPEC));
        assert!(bundle.user_text.contains(&bundle.context_json));
    }

    #[test]
    fn associations_leaving_the_path_are_omitted() {
        let bundle = craft_prompt(&airport(), &path(&["Flight", "Person"]), AIRPORT_SPEC).unwrap();
        // Flight->Airport roles must not leak into the context.
        assert!(!bundle.context_json.contains("origin"));
        assert!(!bundle.context_json.contains("destination"));
        assert!(bundle.context_json.contains("passengers"));
    }

    #[test]
    fn singleton_path_has_one_class_and_no_roles() {
        let bundle = craft_prompt(&airport(), &path(&["Airport"]), AIRPORT_SPEC).unwrap();
        assert_eq!(context_class_names(&bundle), ["Airport"]);
        assert!(bundle.context_json.contains("\"roles\":[]"));
    }

    #[test]
    fn crafting_is_deterministic() {
        let model = airport();
        let p = path(&["Airline", "Flight"]);
        let a = craft_prompt(&model, &p, AIRPORT_SPEC).unwrap();
        let b = craft_prompt(&model, &p, AIRPORT_SPEC).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn empty_spec_is_rejected() {
        assert!(matches!(
            craft_prompt(&airport(), &path(&["Airport"]), "  "),
            Err(PromptError::EmptySpec)
        ));
    }

    #[test]
    fn unknown_class_is_rejected() {
        assert!(matches!(
            craft_prompt(&airport(), &path(&["Ghost"]), AIRPORT_SPEC),
            Err(PromptError::UnknownClass(_))
        ));
    }

    #[test]
    fn path_context_never_exceeds_whole_model_context() {
        let model = royal_loyal();
        let full = craft_full_model_prompt(&model, "Some specification.").unwrap();
        for subset in [
            path(&["Customer"]),
            path(&["Customer", "CustomerCard"]),
            path(&["LoyaltyProgram", "ServiceLevel", "Service"]),
        ] {
            let reduced = craft_prompt(&model, &subset, "Some specification.").unwrap();
            assert!(
                reduced.context_json.len() <= full.context_json.len(),
                "subset context larger than whole-model context for {subset}"
            );
        }
    }

    #[test]
    fn full_model_prompt_lists_every_class() {
        let model = royal_loyal();
        let bundle = craft_full_model_prompt(&model, "spec").unwrap();
        let names = context_class_names(&bundle);
        assert_eq!(names.len(), model.classes.len());
        assert!(bundle.path.is_none());
    }

    #[test]
    fn token_estimate_is_ceiling_of_quarter_chars() {
        assert_eq!(approx_tokens("ab", "cd"), 1);
        assert_eq!(approx_tokens("abcd", "e"), 2);
        assert_eq!(approx_tokens("", ""), 0);
        let bundle = craft_prompt(&airport(), &path(&["Airport"]), "spec text").unwrap();
        let chars = bundle.system_text.chars().count() + bundle.user_text.chars().count();
        assert_eq!(bundle.approx_tokens, (chars as u64).div_ceil(4));
    }
}
