//! OCL subset parser and semantic checker.
//!
//! This is the artifact's validity oracle: a generated constraint is valid
//! when it parses under the subset grammar and type-checks against the UML
//! model. Invalid constraints carry exactly one of four error categories:
//! parsing error, undefined operation, iterator/arrow on a non-collection
//! source, or signature mismatch.
//!
//! Subset boundaries (deliberate): no let-in, no tuples, no message
//! expressions, no OCL evaluation over object instances. Collections
//! produced by navigation are Sets; Bag and Sequence arise only through
//! explicit conversions. Iterators require an explicit variable.

mod ast;
mod checker;
mod lexer;
mod parser;
mod printer;
mod types;

pub use ast::{
    BinaryOp, ConstraintKind, Expr, ExprKind, OclConstraint, OpSignature, UnaryOp, ARROW_OPS,
    ITERATOR_NAMES,
};
pub use checker::{check, CheckError, CheckVerdict, ErrorCategory};
pub use lexer::{ParseError, Span};
pub use parser::parse;
pub use printer::print;
pub use types::{navigation_type, type_from_name, CollectionKind, OclType};

use crate::model::UmlModel;

/// Parse then check: the full validity oracle. Never panics; every failure
/// becomes a categorized verdict.
pub fn validate(text: &str, model: &UmlModel) -> CheckVerdict {
    match parse(text) {
        Ok(constraint) => check(&constraint, model),
        Err(e) => CheckVerdict::fail(ErrorCategory::ParsingError, e.message, e.span),
    }
}
