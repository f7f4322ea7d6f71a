//! UML class model types and the JSON model-file loader.
//!
//! A model file is a single JSON document with top-level keys
//! `name`/`classes`/`associations`. Loading validates every structural
//! invariant (unique class names, resolvable association ends, multiplicity
//! bounds) so downstream stages can assume a well-formed model.

use std::collections::HashSet;
use std::fmt;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Error)]
pub enum ModelError {
    #[error("failed to read {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error("invalid model JSON: {0}")]
    Schema(#[from] serde_json::Error),
    #[error("{location}: {message}")]
    Invariant { location: String, message: String },
    #[error("unknown class '{0}'")]
    UnknownClass(String),
}

impl ModelError {
    fn invariant(location: impl Into<String>, message: impl Into<String>) -> Self {
        ModelError::Invariant {
            location: location.into(),
            message: message.into(),
        }
    }
}

/// Association-end multiplicity, written in model files with the UML
/// surface syntax: `"1"`, `"0..1"`, `"*"`, `"1..*"`, `"m..n"`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "String", into = "String")]
pub struct Multiplicity {
    pub lower: u32,
    /// `None` means unbounded (`*`).
    pub upper: Option<u32>,
}

impl Multiplicity {
    pub const ONE: Multiplicity = Multiplicity {
        lower: 1,
        upper: Some(1),
    };

    pub const MANY: Multiplicity = Multiplicity {
        lower: 0,
        upper: None,
    };

    /// Navigation over an end with upper bound > 1 is collection-valued.
    pub fn is_collection(&self) -> bool {
        self.upper.is_none_or(|u| u > 1)
    }
}

impl fmt::Display for Multiplicity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match (self.lower, self.upper) {
            (0, None) => write!(f, "*"),
            (l, None) => write!(f, "{l}..*"),
            (l, Some(u)) if l == u => write!(f, "{l}"),
            (l, Some(u)) => write!(f, "{l}..{u}"),
        }
    }
}

impl FromStr for Multiplicity {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let s = s.trim();
        let parse_bound = |b: &str| -> Result<u32, String> {
            b.parse::<u32>()
                .map_err(|_| format!("invalid multiplicity bound '{b}'"))
        };
        let (lower, upper) = match s {
            "" => return Err("empty multiplicity".into()),
            "*" => (0, None),
            _ => match s.split_once("..") {
                Some((lo, "*")) => (parse_bound(lo)?, None),
                Some((lo, hi)) => (parse_bound(lo)?, Some(parse_bound(hi)?)),
                None => {
                    let n = parse_bound(s)?;
                    (n, Some(n))
                }
            },
        };
        if let Some(u) = upper {
            if u == 0 {
                return Err(format!("upper bound must be positive in '{s}'"));
            }
            if lower > u {
                return Err(format!("lower bound exceeds upper bound in '{s}'"));
            }
        }
        Ok(Multiplicity { lower, upper })
    }
}

impl TryFrom<String> for Multiplicity {
    type Error = String;

    fn try_from(s: String) -> Result<Self, Self::Error> {
        s.parse()
    }
}

impl From<Multiplicity> for String {
    fn from(m: Multiplicity) -> String {
        m.to_string()
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct UmlAttribute {
    pub name: String,
    #[serde(rename = "type")]
    pub type_name: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct UmlParam {
    pub name: String,
    #[serde(rename = "type")]
    pub type_name: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct UmlOperation {
    pub name: String,
    #[serde(default)]
    pub params: Vec<UmlParam>,
    #[serde(default)]
    pub returns: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct UmlClass {
    pub name: String,
    #[serde(default)]
    pub attributes: Vec<UmlAttribute>,
    #[serde(default)]
    pub operations: Vec<UmlOperation>,
}

impl UmlClass {
    pub fn attribute(&self, name: &str) -> Option<&UmlAttribute> {
        self.attributes.iter().find(|a| a.name == name)
    }

    pub fn operation(&self, name: &str) -> Option<&UmlOperation> {
        self.operations.iter().find(|o| o.name == name)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct UmlAssociationEnd {
    #[serde(rename = "class")]
    pub class_name: String,
    /// Role used to navigate to this end from the opposite end's class.
    pub role: String,
    pub multiplicity: Multiplicity,
    #[serde(default = "default_true")]
    pub navigable: bool,
}

fn default_true() -> bool {
    true
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct UmlAssociation {
    #[serde(default)]
    pub name: Option<String>,
    /// Exactly two ends; validated at load.
    pub ends: Vec<UmlAssociationEnd>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct UmlModel {
    pub name: String,
    pub classes: Vec<UmlClass>,
    #[serde(default)]
    pub associations: Vec<UmlAssociation>,
}

/// One navigable step away from a class: the opposite end's role, target
/// class, and multiplicity.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Navigation {
    pub role: String,
    pub target: String,
    pub multiplicity: Multiplicity,
}

impl UmlModel {
    /// Exact-name, case-sensitive class lookup.
    pub fn class_of(&self, name: &str) -> Option<&UmlClass> {
        self.classes.iter().find(|c| c.name == name)
    }

    /// All navigations available from `class_name`: for each association
    /// touching the class, the opposite end's role/target/multiplicity when
    /// that end is navigable. A self-association yields one entry per end.
    pub fn navigations_of(&self, class_name: &str) -> Result<Vec<Navigation>, ModelError> {
        if self.class_of(class_name).is_none() {
            return Err(ModelError::UnknownClass(class_name.to_string()));
        }
        let mut out = Vec::new();
        for assoc in &self.associations {
            for (i, end) in assoc.ends.iter().enumerate() {
                let other = &assoc.ends[1 - i];
                if end.class_name == class_name && other.navigable {
                    out.push(Navigation {
                        role: other.role.clone(),
                        target: other.class_name.clone(),
                        multiplicity: other.multiplicity,
                    });
                }
            }
        }
        Ok(out)
    }

    /// Look up a navigation from `class_name` by role name.
    pub fn navigation(&self, class_name: &str, role: &str) -> Option<Navigation> {
        self.navigations_of(class_name)
            .ok()?
            .into_iter()
            .find(|n| n.role == role)
    }

    /// Check every structural invariant, reporting the first violation with
    /// a location string.
    pub fn validate(&self) -> Result<(), ModelError> {
        if self.classes.is_empty() {
            return Err(ModelError::invariant("model", "model has no classes"));
        }
        let mut class_names = HashSet::new();
        for (ci, class) in self.classes.iter().enumerate() {
            let loc = format!("classes[{ci}] '{}'", class.name);
            if class.name.is_empty() {
                return Err(ModelError::invariant(loc, "class name is empty"));
            }
            if !class_names.insert(class.name.as_str()) {
                return Err(ModelError::invariant(loc, "duplicate class name"));
            }
            let mut attr_names = HashSet::new();
            for attr in &class.attributes {
                if !attr_names.insert(attr.name.as_str()) {
                    return Err(ModelError::invariant(
                        format!("{loc}.attributes '{}'", attr.name),
                        "duplicate attribute name",
                    ));
                }
            }
            let mut op_sigs = HashSet::new();
            for op in &class.operations {
                if !op_sigs.insert((op.name.as_str(), op.params.len())) {
                    return Err(ModelError::invariant(
                        format!("{loc}.operations '{}'", op.name),
                        "duplicate operation name and arity",
                    ));
                }
                let mut param_names = HashSet::new();
                for p in &op.params {
                    if !param_names.insert(p.name.as_str()) {
                        return Err(ModelError::invariant(
                            format!("{loc}.operations '{}' param '{}'", op.name, p.name),
                            "duplicate parameter name",
                        ));
                    }
                }
            }
        }
        // (source class, role) pairs must be unique so property resolution
        // in the OCL checker is unambiguous.
        let mut nav_names: HashSet<(String, String)> = HashSet::new();
        for (ai, assoc) in self.associations.iter().enumerate() {
            let loc = format!("associations[{ai}]");
            if assoc.ends.len() != 2 {
                return Err(ModelError::invariant(
                    loc,
                    format!("association must have exactly two ends, found {}", assoc.ends.len()),
                ));
            }
            for (i, end) in assoc.ends.iter().enumerate() {
                let end_loc = format!("{loc}.ends[{i}]");
                let opposite = &assoc.ends[1 - i];
                if !class_names.contains(end.class_name.as_str()) {
                    return Err(ModelError::invariant(
                        end_loc,
                        format!("end references unknown class '{}'", end.class_name),
                    ));
                }
                if end.role.is_empty() {
                    return Err(ModelError::invariant(end_loc, "role is empty"));
                }
                if !class_names.contains(opposite.class_name.as_str()) {
                    continue; // reported on the other end
                }
                let source = self
                    .class_of(&opposite.class_name)
                    .expect("class existence checked above");
                if source.attribute(&end.role).is_some() {
                    return Err(ModelError::invariant(
                        end_loc,
                        format!(
                            "role '{}' collides with an attribute of class '{}'",
                            end.role, opposite.class_name
                        ),
                    ));
                }
                if end.navigable
                    && !nav_names.insert((opposite.class_name.clone(), end.role.clone()))
                {
                    return Err(ModelError::invariant(
                        end_loc,
                        format!(
                            "role '{}' is already navigable from class '{}'",
                            end.role, opposite.class_name
                        ),
                    ));
                }
            }
        }
        Ok(())
    }

    /// Canonical JSON form of the model (field order fixed by the types).
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("model serialization cannot fail")
    }
}

/// Parse and validate a model from JSON text.
pub fn parse_model(json: &str) -> Result<UmlModel, ModelError> {
    let model: UmlModel = serde_json::from_str(json)?;
    model.validate()?;
    Ok(model)
}

/// Load and validate a model file.
pub fn load_model(path: impl AsRef<Path>) -> Result<UmlModel, ModelError> {
    let path = path.as_ref();
    let text = std::fs::read_to_string(path).map_err(|source| ModelError::Io {
        path: path.to_path_buf(),
        source,
    })?;
    parse_model(&text)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn fixture(name: &str) -> String {
        let dir = concat!(env!("CARGO_MANIFEST_DIR"), "/../../fixtures/");
        std::fs::read_to_string(format!("{dir}{name}")).expect("fixture readable")
    }

    #[test]
    fn airport_model_loads_with_four_classes() {
        let model = parse_model(&fixture("airport.model.json")).unwrap();
        assert_eq!(model.classes.len(), 4);
        let names: Vec<_> = model.classes.iter().map(|c| c.name.as_str()).collect();
        assert_eq!(names, ["Airport", "Flight", "Airline", "Person"]);
    }

    #[test]
    fn minimal_one_class_model_is_valid() {
        let model = parse_model(r#"{"name":"tiny","classes":[{"name":"A"}],"associations":[]}"#)
            .unwrap();
        assert_eq!(model.classes.len(), 1);
        assert!(model.associations.is_empty());
    }

    #[test]
    fn dangling_association_end_is_rejected() {
        let err = parse_model(
            r#"{"name":"bad","classes":[{"name":"A"}],"associations":[
                {"name":null,"ends":[
                    {"class":"A","role":"a","multiplicity":"1"},
                    {"class":"Plane","role":"planes","multiplicity":"*"}]}]}"#,
        )
        .unwrap_err();
        let msg = err.to_string();
        assert!(msg.contains("Plane"), "message should name the class: {msg}");
    }

    #[test]
    fn duplicate_class_name_is_rejected() {
        let err = parse_model(r#"{"name":"m","classes":[{"name":"A"},{"name":"A"}]}"#)
            .unwrap_err();
        assert!(err.to_string().contains("duplicate class name"));
    }

    #[test]
    fn role_attribute_collision_is_rejected() {
        let err = parse_model(
            r#"{"name":"m","classes":[
                {"name":"A","attributes":[{"name":"b","type":"Integer"}]},
                {"name":"B"}],
              "associations":[{"ends":[
                {"class":"A","role":"a","multiplicity":"1"},
                {"class":"B","role":"b","multiplicity":"1"}]}]}"#,
        )
        .unwrap_err();
        assert!(err.to_string().contains("collides"));
    }

    #[test]
    fn class_lookup_is_case_sensitive() {
        let model = parse_model(&fixture("airport.model.json")).unwrap();
        assert!(model.class_of("Flight").is_some());
        assert!(model.class_of("flight").is_none());
        assert!(model.class_of("").is_none());
    }

    #[test]
    fn airline_navigations_include_flights_role() {
        let model = parse_model(&fixture("airport.model.json")).unwrap();
        let navs = model.navigations_of("Airline").unwrap();
        let flights = navs.iter().find(|n| n.role == "flights").expect("flights role");
        assert_eq!(flights.target, "Flight");
        assert_eq!(flights.multiplicity, Multiplicity::MANY);
    }

    #[test]
    fn class_without_associations_has_no_navigations() {
        let model = parse_model(
            r#"{"name":"m","classes":[{"name":"A"},{"name":"B"}],"associations":[]}"#,
        )
        .unwrap();
        assert!(model.navigations_of("A").unwrap().is_empty());
        assert!(matches!(
            model.navigations_of("C"),
            Err(ModelError::UnknownClass(_))
        ));
    }

    #[test]
    fn self_association_yields_two_navigations() {
        // Hand enumeration: each end of the self-association contributes the
        // opposite end's role.
        let model = parse_model(
            r#"{"name":"m","classes":[{"name":"Node"}],"associations":[
                {"name":"tree","ends":[
                    {"class":"Node","role":"parent","multiplicity":"0..1"},
                    {"class":"Node","role":"children","multiplicity":"*"}]}]}"#,
        )
        .unwrap();
        let navs = model.navigations_of("Node").unwrap();
        let mut roles: Vec<_> = navs.iter().map(|n| n.role.as_str()).collect();
        roles.sort();
        assert_eq!(roles, ["children", "parent"]);
    }

    #[test]
    fn non_navigable_end_is_excluded() {
        let model = parse_model(
            r#"{"name":"m","classes":[{"name":"A"},{"name":"B"}],"associations":[
                {"ends":[
                    {"class":"A","role":"a","multiplicity":"1","navigable":false},
                    {"class":"B","role":"b","multiplicity":"*"}]}]}"#,
        )
        .unwrap();
        assert_eq!(model.navigations_of("A").unwrap().len(), 1); // to B
        assert!(model.navigations_of("B").unwrap().is_empty()); // A end not navigable
    }

    #[test]
    fn multiplicity_surface_syntax_round_trips() {
        for (text, lower, upper) in [
            ("1", 1, Some(1)),
            ("0..1", 0, Some(1)),
            ("*", 0, None),
            ("1..*", 1, None),
            ("2..5", 2, Some(5)),
        ] {
            let m: Multiplicity = text.parse().unwrap();
            assert_eq!((m.lower, m.upper), (lower, upper));
            assert_eq!(m.to_string(), text);
        }
        assert!("5..2".parse::<Multiplicity>().is_err());
        assert!("x".parse::<Multiplicity>().is_err());
        assert!("1..0".parse::<Multiplicity>().is_err());
    }

    #[test]
    fn model_json_round_trips_to_equal_model() {
        for file in ["airport.model.json", "royal_loyal.model.json"] {
            let model = parse_model(&fixture(file)).unwrap();
            let reloaded = parse_model(&model.to_json()).unwrap();
            assert_eq!(model, reloaded, "{file} round trip");
        }
    }

    #[test]
    fn navigations_only_report_declared_roles() {
        let model = parse_model(&fixture("royal_loyal.model.json")).unwrap();
        let declared: HashSet<String> = model
            .associations
            .iter()
            .flat_map(|a| a.ends.iter().map(|e| e.role.clone()))
            .collect();
        for class in &model.classes {
            for nav in model.navigations_of(&class.name).unwrap() {
                assert!(declared.contains(&nav.role));
            }
        }
    }
}
