//! Semantic checker: resolves names against the UML model, types the
//! constraint body and maps every failure onto the four-category error
//! taxonomy (parsing error, undefined operation, iterator on a
//! non-collection source, signature mismatch).

use serde::{Deserialize, Serialize};

use crate::model::{UmlClass, UmlModel};
use crate::oclcheck::ast::{
    BinaryOp, ConstraintKind, Expr, ExprKind, OclConstraint, UnaryOp,
};
use crate::oclcheck::lexer::Span;
use crate::oclcheck::types::{navigation_type, type_from_name, CollectionKind, OclType};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ErrorCategory {
    ParsingError,
    UndefinedOperation,
    IterExpInvalidSource,
    SignatureMismatch,
}

impl ErrorCategory {
    pub fn label(&self) -> &'static str {
        match self {
            ErrorCategory::ParsingError => "parsing_error",
            ErrorCategory::UndefinedOperation => "undefined_operation",
            ErrorCategory::IterExpInvalidSource => "iterexp_invalid_source",
            ErrorCategory::SignatureMismatch => "signature_mismatch",
        }
    }
}

impl std::fmt::Display for ErrorCategory {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}", self.label())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CheckError {
    pub category: ErrorCategory,
    pub message: String,
    pub span: Span,
}

/// Outcome of validating one constraint: valid, or exactly one categorized
/// error (first failure wins).
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CheckVerdict {
    pub valid: bool,
    pub error: Option<CheckError>,
}

impl CheckVerdict {
    pub fn ok() -> CheckVerdict {
        CheckVerdict {
            valid: true,
            error: None,
        }
    }

    pub fn fail(category: ErrorCategory, message: impl Into<String>, span: Span) -> CheckVerdict {
        CheckVerdict {
            valid: false,
            error: Some(CheckError {
                category,
                message: message.into(),
                span,
            }),
        }
    }

    pub fn category(&self) -> Option<ErrorCategory> {
        self.error.as_ref().map(|e| e.category)
    }
}

struct Scope {
    vars: Vec<(String, OclType)>,
    /// Element type whose properties are visible without qualification
    /// (the context class at the base, iterator elements inside bodies).
    implicit: Option<OclType>,
}

struct Checker<'a> {
    model: &'a UmlModel,
    scopes: Vec<Scope>,
    result_type: Option<OclType>,
}

type CheckResult = Result<OclType, CheckError>;

fn err(category: ErrorCategory, message: impl Into<String>, span: Span) -> CheckError {
    CheckError {
        category,
        message: message.into(),
        span,
    }
}

/// Type-check a parsed constraint against a model.
pub fn check(constraint: &OclConstraint, model: &UmlModel) -> CheckVerdict {
    let Some(context) = model.class_of(&constraint.context_class) else {
        return CheckVerdict::fail(
            ErrorCategory::UndefinedOperation,
            format!(
                "context class '{}' is not defined in model '{}'",
                constraint.context_class, model.name
            ),
            Span::default(),
        );
    };
    let mut checker = Checker {
        model,
        scopes: vec![Scope {
            vars: Vec::new(),
            implicit: Some(OclType::Class(context.name.clone())),
        }],
        result_type: None,
    };
    if let Some(signature) = &constraint.context_operation {
        if let Err(e) = checker.bind_operation_context(context, signature, constraint.kind) {
            return CheckVerdict {
                valid: false,
                error: Some(e),
            };
        }
    }
    match checker.infer(&constraint.body) {
        Ok(body_type) => {
            if !body_type.is_boolean() {
                return CheckVerdict::fail(
                    ErrorCategory::SignatureMismatch,
                    format!(
                        "constraint body must be Boolean, found {body_type}"
                    ),
                    constraint.body.span,
                );
            }
            CheckVerdict::ok()
        }
        Err(e) => CheckVerdict {
            valid: false,
            error: Some(e),
        },
    }
}

impl<'a> Checker<'a> {
    fn bind_operation_context(
        &mut self,
        context: &UmlClass,
        signature: &crate::oclcheck::ast::OpSignature,
        kind: ConstraintKind,
    ) -> Result<(), CheckError> {
        let Some(declared) = context.operation(&signature.name) else {
            return Err(err(
                ErrorCategory::UndefinedOperation,
                format!(
                    "operation '{}' is not defined on class '{}'",
                    signature.name, context.name
                ),
                Span::default(),
            ));
        };
        if declared.params.len() != signature.params.len() {
            return Err(err(
                ErrorCategory::SignatureMismatch,
                format!(
                    "operation '{}' on class '{}' takes {} parameter(s), the context declares {}",
                    signature.name,
                    context.name,
                    declared.params.len(),
                    signature.params.len()
                ),
                Span::default(),
            ));
        }
        for (given, declared_param) in signature.params.iter().zip(&declared.params) {
            if given.1.trim() != declared_param.type_name.trim() {
                return Err(err(
                    ErrorCategory::SignatureMismatch,
                    format!(
                        "parameter '{}' of '{}' has type '{}' in the model, not '{}'",
                        declared_param.name, signature.name, declared_param.type_name, given.1
                    ),
                    Span::default(),
                ));
            }
        }
        if let (Some(given_ret), Some(declared_ret)) =
            (&signature.return_type, &declared.returns)
        {
            if given_ret.trim() != declared_ret.trim() {
                return Err(err(
                    ErrorCategory::SignatureMismatch,
                    format!(
                        "operation '{}' returns '{}' in the model, not '{}'",
                        signature.name, declared_ret, given_ret
                    ),
                    Span::default(),
                ));
            }
        }
        let vars = signature
            .params
            .iter()
            .map(|(name, type_name)| (name.clone(), type_from_name(self.model, type_name)))
            .collect();
        self.scopes.push(Scope {
            vars,
            implicit: None,
        });
        if kind == ConstraintKind::Post {
            self.result_type = declared
                .returns
                .as_deref()
                .map(|r| type_from_name(self.model, r));
        }
        Ok(())
    }

    fn lookup_var(&self, name: &str) -> Option<OclType> {
        for scope in self.scopes.iter().rev() {
            if let Some((_, t)) = scope.vars.iter().rev().find(|(n, _)| n == name) {
                return Some(t.clone());
            }
        }
        None
    }

    /// Property resolution on a class: attributes first, then navigable
    /// roles.
    fn resolve_property(&self, class_name: &str, property: &str) -> Option<OclType> {
        let class = self.model.class_of(class_name)?;
        if let Some(attr) = class.attribute(property) {
            return Some(type_from_name(self.model, &attr.type_name));
        }
        let nav = self.model.navigation(class_name, property)?;
        Some(navigation_type(&nav.target, nav.multiplicity))
    }

    /// Unqualified name resolution: lexical variables innermost-first, then
    /// implicit sources (iterator elements, then self).
    fn resolve_name(&self, name: &str) -> Option<OclType> {
        if let Some(t) = self.lookup_var(name) {
            return Some(t);
        }
        for scope in self.scopes.iter().rev() {
            if let Some(OclType::Class(class_name)) = &scope.implicit {
                if let Some(t) = self.resolve_property(class_name, name) {
                    return Some(t);
                }
            }
        }
        None
    }

    fn infer(&mut self, expr: &Expr) -> CheckResult {
        match &expr.kind {
            ExprKind::SelfRef => Ok(self
                .scopes
                .first()
                .and_then(|s| s.implicit.clone())
                .expect("base scope carries the context class")),
            ExprKind::ResultRef => Ok(self.result_type.clone().ok_or_else(|| {
                err(
                    ErrorCategory::UndefinedOperation,
                    "'result' used but the context operation declares no return type",
                    expr.span,
                )
            })?),
            ExprKind::Var(name) => self.resolve_name(name).ok_or_else(|| {
                err(
                    ErrorCategory::UndefinedOperation,
                    format!("'{name}' is not a variable or a property in scope"),
                    expr.span,
                )
            }),
            ExprKind::IntLit(_) => Ok(OclType::Integer),
            ExprKind::RealLit(_) => Ok(OclType::Real),
            ExprKind::BoolLit(_) => Ok(OclType::Boolean),
            ExprKind::StringLit(_) => Ok(OclType::String),
            ExprKind::Property { source, name } => {
                let source_type = self.infer(source)?;
                self.property_type(&source_type, name, expr.span)
            }
            ExprKind::OperationCall { source, name, args } => {
                let source_type = self.infer(source)?;
                self.operation_type(&source_type, name, args, expr.span)
            }
            ExprKind::ArrowCall { source, name, args } => {
                let source_type = self.infer(source)?;
                self.arrow_type(&source_type, name, args, expr.span)
            }
            ExprKind::Iterator {
                source,
                name,
                var,
                body,
            } => {
                let source_type = self.infer(source)?;
                self.iterator_type(&source_type, name, var, body, expr.span)
            }
            ExprKind::AllInstances { type_name } => {
                if self.model.class_of(type_name).is_none() {
                    return Err(err(
                        ErrorCategory::UndefinedOperation,
                        format!("allInstances applied to unknown type '{type_name}'"),
                        expr.span,
                    ));
                }
                Ok(OclType::set_of(OclType::Class(type_name.clone())))
            }
            ExprKind::If {
                cond,
                then_branch,
                else_branch,
            } => {
                let cond_type = self.infer(cond)?;
                if !cond_type.is_boolean() {
                    return Err(err(
                        ErrorCategory::SignatureMismatch,
                        format!("if-condition must be Boolean, found {cond_type}"),
                        cond.span,
                    ));
                }
                let then_type = self.infer(then_branch)?;
                let else_type = self.infer(else_branch)?;
                if then_type == else_type {
                    Ok(then_type)
                } else if then_type.is_numeric() && else_type.is_numeric() {
                    Ok(OclType::Real)
                } else {
                    Ok(OclType::Unknown)
                }
            }
            ExprKind::Binary { op, lhs, rhs } => {
                let lhs_type = self.infer(lhs)?;
                let rhs_type = self.infer(rhs)?;
                self.binary_type(*op, &lhs_type, &rhs_type, expr.span)
            }
            ExprKind::Unary { op, operand } => {
                let operand_type = self.infer(operand)?;
                match op {
                    UnaryOp::Not => {
                        if operand_type.is_boolean() {
                            Ok(OclType::Boolean)
                        } else {
                            Err(err(
                                ErrorCategory::SignatureMismatch,
                                format!("'not' requires a Boolean operand, found {operand_type}"),
                                expr.span,
                            ))
                        }
                    }
                    UnaryOp::Neg => {
                        if operand_type.is_numeric() {
                            Ok(operand_type)
                        } else {
                            Err(err(
                                ErrorCategory::SignatureMismatch,
                                format!("unary '-' requires a numeric operand, found {operand_type}"),
                                expr.span,
                            ))
                        }
                    }
                }
            }
            ExprKind::AtPre(inner) => self.infer(inner),
        }
    }

    fn property_type(&mut self, source: &OclType, name: &str, span: Span) -> CheckResult {
        match source {
            OclType::Class(class_name) => {
                self.resolve_property(class_name, name).ok_or_else(|| {
                    err(
                        ErrorCategory::UndefinedOperation,
                        format!(
                            "'{name}' is not an attribute or navigable role of class '{class_name}'"
                        ),
                        span,
                    )
                })
            }
            OclType::Collection(..) => Err(err(
                ErrorCategory::UndefinedOperation,
                format!(
                    "property '{name}' is not defined on {source}; navigate collections with '->collect(x | x.{name})'"
                ),
                span,
            )),
            OclType::Unknown => Ok(OclType::Unknown),
            primitive => Err(err(
                ErrorCategory::UndefinedOperation,
                format!("'{name}' is not a property of {primitive}"),
                span,
            )),
        }
    }

    fn operation_type(
        &mut self,
        source: &OclType,
        name: &str,
        args: &[Expr],
        span: Span,
    ) -> CheckResult {
        let class_name = match source {
            OclType::Class(c) => c.clone(),
            OclType::Unknown => {
                for arg in args {
                    self.infer(arg)?;
                }
                return Ok(OclType::Unknown);
            }
            OclType::Collection(..) => {
                return Err(err(
                    ErrorCategory::UndefinedOperation,
                    format!("operation '{name}' is not defined on {source}; collection operations use '->'"),
                    span,
                ))
            }
            primitive => {
                return Err(err(
                    ErrorCategory::UndefinedOperation,
                    format!("operation '{name}' is not defined on {primitive}"),
                    span,
                ))
            }
        };
        let class = self
            .model
            .class_of(&class_name)
            .expect("class types always name model classes");
        let Some(operation) = class.operation(name) else {
            return Err(err(
                ErrorCategory::UndefinedOperation,
                format!("operation '{name}' is not defined on class '{class_name}'"),
                span,
            ));
        };
        let declared: Vec<OclType> = operation
            .params
            .iter()
            .map(|p| type_from_name(self.model, &p.type_name))
            .collect();
        let returns = operation
            .returns
            .as_deref()
            .map(|r| type_from_name(self.model, r))
            .unwrap_or(OclType::Unknown);
        if args.len() != declared.len() {
            return Err(err(
                ErrorCategory::SignatureMismatch,
                format!(
                    "operation '{name}' on class '{class_name}' takes {} argument(s), found {}",
                    declared.len(),
                    args.len()
                ),
                span,
            ));
        }
        for (arg, expected) in args.iter().zip(&declared) {
            let actual = self.infer(arg)?;
            if !expected.accepts(&actual) {
                return Err(err(
                    ErrorCategory::SignatureMismatch,
                    format!(
                        "argument of '{name}' on class '{class_name}' must be {expected}, found {actual}"
                    ),
                    arg.span,
                ));
            }
        }
        Ok(returns)
    }

    fn arrow_type(
        &mut self,
        source: &OclType,
        name: &str,
        args: &[Expr],
        span: Span,
    ) -> CheckResult {
        if source.is_unknown() {
            for arg in args {
                self.infer(arg)?;
            }
            return Ok(OclType::Unknown);
        }
        let Some((kind, element)) = source.as_collection() else {
            return Err(err(
                ErrorCategory::IterExpInvalidSource,
                format!("'->{name}' applied to a single value of type {source}, not a collection"),
                span,
            ));
        };
        let element = element.clone();
        let arity = |expected: usize| -> Result<(), CheckError> {
            if args.len() != expected {
                Err(err(
                    ErrorCategory::SignatureMismatch,
                    format!(
                        "'->{name}' takes {expected} argument(s), found {}",
                        args.len()
                    ),
                    span,
                ))
            } else {
                Ok(())
            }
        };
        match name {
            "size" => {
                arity(0)?;
                Ok(OclType::Integer)
            }
            "isEmpty" | "notEmpty" => {
                arity(0)?;
                Ok(OclType::Boolean)
            }
            "sum" => {
                arity(0)?;
                if element.is_numeric() {
                    Ok(element)
                } else {
                    Err(err(
                        ErrorCategory::SignatureMismatch,
                        format!("'->sum' requires numeric elements, found {element}"),
                        span,
                    ))
                }
            }
            "includes" | "excludes" => {
                arity(1)?;
                let actual = self.infer(&args[0])?;
                if element.accepts(&actual) || actual.accepts(&element) {
                    Ok(OclType::Boolean)
                } else {
                    Err(err(
                        ErrorCategory::SignatureMismatch,
                        format!("'->{name}' argument must be {element}, found {actual}"),
                        args[0].span,
                    ))
                }
            }
            "includesAll" | "excludesAll" => {
                arity(1)?;
                let actual = self.infer(&args[0])?;
                match actual.as_collection() {
                    Some((_, other)) if element.accepts(other) || other.accepts(&element) => {
                        Ok(OclType::Boolean)
                    }
                    Some((_, other)) => Err(err(
                        ErrorCategory::SignatureMismatch,
                        format!("'->{name}' argument must collect {element}, found {other}"),
                        args[0].span,
                    )),
                    None if actual.is_unknown() => Ok(OclType::Boolean),
                    None => Err(err(
                        ErrorCategory::SignatureMismatch,
                        format!("'->{name}' requires a collection argument, found {actual}"),
                        args[0].span,
                    )),
                }
            }
            "asSet" => {
                arity(0)?;
                Ok(OclType::Collection(CollectionKind::Set, Box::new(element)))
            }
            "asSequence" => {
                arity(0)?;
                Ok(OclType::Collection(
                    CollectionKind::Sequence,
                    Box::new(element),
                ))
            }
            "asBag" => {
                arity(0)?;
                Ok(OclType::Collection(CollectionKind::Bag, Box::new(element)))
            }
            "first" | "last" => {
                arity(0)?;
                if kind == CollectionKind::Sequence {
                    Ok(element)
                } else {
                    Err(err(
                        ErrorCategory::UndefinedOperation,
                        format!("'->{name}' is only defined on Sequence, not {kind}"),
                        span,
                    ))
                }
            }
            other => Err(err(
                ErrorCategory::UndefinedOperation,
                format!("'->{other}' is not a collection operation of the subset"),
                span,
            )),
        }
    }

    fn iterator_type(
        &mut self,
        source: &OclType,
        name: &str,
        var: &str,
        body: &Expr,
        span: Span,
    ) -> CheckResult {
        if source.is_unknown() {
            return Ok(OclType::Unknown);
        }
        let Some((kind, element)) = source.as_collection() else {
            return Err(err(
                ErrorCategory::IterExpInvalidSource,
                format!("'->{name}' applied to a single value of type {source}, not a collection"),
                span,
            ));
        };
        let element = element.clone();
        self.scopes.push(Scope {
            vars: vec![(var.to_string(), element.clone())],
            implicit: Some(element.clone()),
        });
        let body_type = self.infer(body);
        self.scopes.pop();
        let body_type = body_type?;
        let requires_boolean = matches!(
            name,
            "select" | "reject" | "forAll" | "exists" | "one" | "any"
        );
        if requires_boolean && !body_type.is_boolean() {
            return Err(err(
                ErrorCategory::SignatureMismatch,
                format!("'->{name}' body must be Boolean, found {body_type}"),
                body.span,
            ));
        }
        match name {
            "select" | "reject" => Ok(OclType::Collection(kind, Box::new(element))),
            "forAll" | "exists" | "one" | "isUnique" => Ok(OclType::Boolean),
            "any" => Ok(element),
            "collect" => {
                // collect flattens nested collections into a bag
                let element = match body_type {
                    OclType::Collection(_, inner) => *inner,
                    other => other,
                };
                Ok(OclType::Collection(CollectionKind::Bag, Box::new(element)))
            }
            other => Err(err(
                ErrorCategory::UndefinedOperation,
                format!("'->{other}' is not an iterator of the subset"),
                span,
            )),
        }
    }

    fn binary_type(
        &mut self,
        op: BinaryOp,
        lhs: &OclType,
        rhs: &OclType,
        span: Span,
    ) -> CheckResult {
        match op {
            BinaryOp::Implies | BinaryOp::Or | BinaryOp::Xor | BinaryOp::And => {
                if lhs.is_boolean() && rhs.is_boolean() {
                    Ok(OclType::Boolean)
                } else {
                    Err(err(
                        ErrorCategory::SignatureMismatch,
                        format!("'{}' requires Boolean operands, found {lhs} and {rhs}", op.symbol()),
                        span,
                    ))
                }
            }
            BinaryOp::Eq | BinaryOp::NotEq => Ok(OclType::Boolean),
            BinaryOp::Lt | BinaryOp::Gt | BinaryOp::Le | BinaryOp::Ge => {
                let comparable = (lhs.is_numeric() && rhs.is_numeric())
                    || (*lhs == OclType::String && *rhs == OclType::String);
                if comparable {
                    Ok(OclType::Boolean)
                } else {
                    Err(err(
                        ErrorCategory::SignatureMismatch,
                        format!(
                            "'{}' requires numeric or String operands, found {lhs} and {rhs}",
                            op.symbol()
                        ),
                        span,
                    ))
                }
            }
            BinaryOp::Add | BinaryOp::Sub | BinaryOp::Mul => {
                if lhs.is_numeric() && rhs.is_numeric() {
                    if *lhs == OclType::Integer && *rhs == OclType::Integer {
                        Ok(OclType::Integer)
                    } else {
                        Ok(OclType::Real)
                    }
                } else {
                    Err(err(
                        ErrorCategory::SignatureMismatch,
                        format!(
                            "'{}' requires numeric operands, found {lhs} and {rhs}",
                            op.symbol()
                        ),
                        span,
                    ))
                }
            }
            BinaryOp::Div => {
                if lhs.is_numeric() && rhs.is_numeric() {
                    Ok(OclType::Real)
                } else {
                    Err(err(
                        ErrorCategory::SignatureMismatch,
                        format!(
                            "'/' requires numeric operands, found {lhs} and {rhs}"
                        ),
                        span,
                    ))
                }
            }
        }
    }
}
