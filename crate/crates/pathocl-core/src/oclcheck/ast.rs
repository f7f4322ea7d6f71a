//! Abstract syntax for the OCL subset.

use crate::oclcheck::lexer::Span;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ConstraintKind {
    Inv,
    Pre,
    Post,
}

impl std::fmt::Display for ConstraintKind {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            ConstraintKind::Inv => write!(f, "inv"),
            ConstraintKind::Pre => write!(f, "pre"),
            ConstraintKind::Post => write!(f, "post"),
        }
    }
}

/// Operation signature given in a pre/post context declaration.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OpSignature {
    pub name: String,
    pub params: Vec<(String, String)>,
    pub return_type: Option<String>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct OclConstraint {
    pub context_class: String,
    pub kind: ConstraintKind,
    /// Present iff kind is pre/post; the parser enforces both directions.
    pub context_operation: Option<OpSignature>,
    pub name: Option<String>,
    pub body: Expr,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BinaryOp {
    Implies,
    Or,
    Xor,
    And,
    Eq,
    NotEq,
    Lt,
    Gt,
    Le,
    Ge,
    Add,
    Sub,
    Mul,
    Div,
}

impl BinaryOp {
    pub fn symbol(&self) -> &'static str {
        match self {
            BinaryOp::Implies => "implies",
            BinaryOp::Or => "or",
            BinaryOp::Xor => "xor",
            BinaryOp::And => "and",
            BinaryOp::Eq => "=",
            BinaryOp::NotEq => "<>",
            BinaryOp::Lt => "<",
            BinaryOp::Gt => ">",
            BinaryOp::Le => "<=",
            BinaryOp::Ge => ">=",
            BinaryOp::Add => "+",
            BinaryOp::Sub => "-",
            BinaryOp::Mul => "*",
            BinaryOp::Div => "/",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum UnaryOp {
    Not,
    Neg,
}

/// Expression node; equality ignores spans so printed-and-reparsed trees
/// compare structurally.
#[derive(Debug, Clone)]
pub struct Expr {
    pub kind: ExprKind,
    pub span: Span,
}

impl Expr {
    pub fn new(kind: ExprKind, span: Span) -> Expr {
        Expr { kind, span }
    }
}

impl PartialEq for Expr {
    fn eq(&self, other: &Self) -> bool {
        self.kind == other.kind
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum ExprKind {
    SelfRef,
    ResultRef,
    Var(String),
    IntLit(i64),
    /// Original lexeme; only the type matters for checking.
    RealLit(String),
    BoolLit(bool),
    StringLit(String),
    /// `source.name`: attribute access or role navigation.
    Property { source: Box<Expr>, name: String },
    /// `source.name(args)`: class operation call.
    OperationCall {
        source: Box<Expr>,
        name: String,
        args: Vec<Expr>,
    },
    /// `source->name(args)`: built-in collection operation.
    ArrowCall {
        source: Box<Expr>,
        name: String,
        args: Vec<Expr>,
    },
    /// `source->name(var | body)`: iterator expression.
    Iterator {
        source: Box<Expr>,
        name: String,
        var: String,
        body: Box<Expr>,
    },
    /// `Type.allInstances()`
    AllInstances { type_name: String },
    If {
        cond: Box<Expr>,
        then_branch: Box<Expr>,
        else_branch: Box<Expr>,
    },
    Binary {
        op: BinaryOp,
        lhs: Box<Expr>,
        rhs: Box<Expr>,
    },
    Unary { op: UnaryOp, operand: Box<Expr> },
    /// `expr@pre`, postconditions only.
    AtPre(Box<Expr>),
}

/// Iterator names of the subset.
pub const ITERATOR_NAMES: &[&str] = &[
    "select", "reject", "collect", "forAll", "exists", "one", "any", "isUnique",
];

/// Built-in arrow operations of the subset.
pub const ARROW_OPS: &[&str] = &[
    "size",
    "isEmpty",
    "notEmpty",
    "sum",
    "includes",
    "excludes",
    "includesAll",
    "excludesAll",
    "asSet",
    "asSequence",
    "asBag",
    "first",
    "last",
];
