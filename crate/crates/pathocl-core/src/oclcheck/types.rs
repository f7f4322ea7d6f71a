//! OCL type model used by the semantic checker.

use crate::model::{Multiplicity, UmlModel};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CollectionKind {
    Set,
    Bag,
    Sequence,
}

impl std::fmt::Display for CollectionKind {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            CollectionKind::Set => write!(f, "Set"),
            CollectionKind::Bag => write!(f, "Bag"),
            CollectionKind::Sequence => write!(f, "Sequence"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum OclType {
    Class(String),
    Integer,
    Real,
    Boolean,
    String,
    Collection(CollectionKind, Box<OclType>),
    /// A type name the model does not define; treated leniently.
    Unknown,
}

impl OclType {
    pub fn set_of(element: OclType) -> OclType {
        OclType::Collection(CollectionKind::Set, Box::new(element))
    }

    pub fn is_numeric(&self) -> bool {
        matches!(self, OclType::Integer | OclType::Real | OclType::Unknown)
    }

    pub fn is_boolean(&self) -> bool {
        matches!(self, OclType::Boolean | OclType::Unknown)
    }

    pub fn is_unknown(&self) -> bool {
        matches!(self, OclType::Unknown)
    }

    pub fn as_collection(&self) -> Option<(CollectionKind, &OclType)> {
        match self {
            OclType::Collection(kind, element) => Some((*kind, element)),
            _ => None,
        }
    }

    /// Name-level compatibility used for operation arguments: exact type
    /// match, Integer widening to Real, or either side unknown.
    pub fn accepts(&self, actual: &OclType) -> bool {
        if self.is_unknown() || actual.is_unknown() {
            return true;
        }
        if self == actual {
            return true;
        }
        matches!((self, actual), (OclType::Real, OclType::Integer))
    }
}

impl std::fmt::Display for OclType {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            OclType::Class(name) => write!(f, "{name}"),
            OclType::Integer => write!(f, "Integer"),
            OclType::Real => write!(f, "Real"),
            OclType::Boolean => write!(f, "Boolean"),
            OclType::String => write!(f, "String"),
            OclType::Collection(kind, element) => write!(f, "{kind}({element})"),
            OclType::Unknown => write!(f, "OclAny"),
        }
    }
}

/// Map a declared type name to an OCL type: primitives by name, model
/// classes to class types, anything else to Unknown.
pub fn type_from_name(model: &UmlModel, name: &str) -> OclType {
    match name.trim() {
        "Integer" => OclType::Integer,
        "Real" => OclType::Real,
        "Boolean" => OclType::Boolean,
        "String" => OclType::String,
        trimmed => {
            if model.class_of(trimmed).is_some() {
                OclType::Class(trimmed.to_string())
            } else {
                OclType::Unknown
            }
        }
    }
}

/// Navigation result type: a bare class for upper bound 1, a Set for
/// anything larger.
pub fn navigation_type(target: &str, multiplicity: Multiplicity) -> OclType {
    if multiplicity.is_collection() {
        OclType::set_of(OclType::Class(target.to_string()))
    } else {
        OclType::Class(target.to_string())
    }
}
