//! Recursive-descent parser for the OCL subset.
//!
//! Grammar:
//!
//! ```text
//! constraint := "context" Ident [ "::" Ident "(" params ")" [":" Ident] ]
//!               ("inv" | "pre" | "post") [Ident] ":" expr
//! ```
//!
//! Expression precedence, loosest to tightest: implies; or/xor; and; not;
//! comparison (= <> < > <= >=); additive; multiplicative; unary minus;
//! postfix (`.` `->` `@pre`).

use crate::oclcheck::ast::{
    BinaryOp, ConstraintKind, Expr, ExprKind, OclConstraint, OpSignature, UnaryOp, ITERATOR_NAMES,
};
use crate::oclcheck::lexer::{lex, ParseError, Span, Token, TokenKind};

pub fn parse(text: &str) -> Result<OclConstraint, ParseError> {
    let tokens = lex(text)?;
    let mut parser = Parser {
        tokens,
        pos: 0,
        kind: ConstraintKind::Inv,
    };
    parser.constraint()
}

struct Parser {
    tokens: Vec<Token>,
    pos: usize,
    /// Constraint kind currently being parsed; gates `result` and `@pre`.
    kind: ConstraintKind,
}

impl Parser {
    fn peek(&self) -> &Token {
        &self.tokens[self.pos.min(self.tokens.len() - 1)]
    }

    fn peek2(&self) -> &Token {
        &self.tokens[(self.pos + 1).min(self.tokens.len() - 1)]
    }

    fn advance(&mut self) -> Token {
        let token = self.tokens[self.pos.min(self.tokens.len() - 1)].clone();
        if self.pos < self.tokens.len() - 1 {
            self.pos += 1;
        }
        token
    }

    fn eat(&mut self, kind: &TokenKind) -> bool {
        if &self.peek().kind == kind {
            self.advance();
            true
        } else {
            false
        }
    }

    fn expect(&mut self, kind: TokenKind, what: &str) -> Result<Token, ParseError> {
        if self.peek().kind == kind {
            Ok(self.advance())
        } else {
            Err(self.unexpected(what))
        }
    }

    fn expect_ident(&mut self, what: &str) -> Result<(String, Span), ParseError> {
        match self.peek().kind.clone() {
            TokenKind::Ident(name) => {
                let span = self.peek().span;
                self.advance();
                Ok((name, span))
            }
            _ => Err(self.unexpected(what)),
        }
    }

    fn unexpected(&self, what: &str) -> ParseError {
        let token = self.peek();
        ParseError::new(
            format!("expected {what}, found {}", token.kind.describe()),
            token.span,
        )
    }

    fn constraint(&mut self) -> Result<OclConstraint, ParseError> {
        self.expect(TokenKind::KwContext, "'context'")?;
        let (context_class, _) = self.expect_ident("a context class name")?;
        let context_operation = if self.eat(&TokenKind::ColonColon) {
            Some(self.op_signature()?)
        } else {
            None
        };
        let kind_token = self.advance();
        let kind = match kind_token.kind {
            TokenKind::KwInv => ConstraintKind::Inv,
            TokenKind::KwPre => ConstraintKind::Pre,
            TokenKind::KwPost => ConstraintKind::Post,
            other => {
                return Err(ParseError::new(
                    format!(
                        "expected 'inv', 'pre' or 'post', found {}",
                        other.describe()
                    ),
                    kind_token.span,
                ))
            }
        };
        match (kind, &context_operation) {
            (ConstraintKind::Inv, Some(_)) => {
                return Err(ParseError::new(
                    "'inv' cannot follow an operation signature; use 'pre' or 'post'",
                    kind_token.span,
                ))
            }
            (ConstraintKind::Pre | ConstraintKind::Post, None) => {
                return Err(ParseError::new(
                    format!("'{kind}' requires an operation signature in the context"),
                    kind_token.span,
                ))
            }
            _ => {}
        }
        self.kind = kind;
        let name = match self.peek().kind.clone() {
            TokenKind::Ident(n) => {
                self.advance();
                Some(n)
            }
            _ => None,
        };
        self.expect(TokenKind::Colon, "':' before the constraint body")?;
        let body = self.expr()?;
        self.expect(TokenKind::Eof, "end of constraint")?;
        Ok(OclConstraint {
            context_class,
            kind,
            context_operation,
            name,
            body,
        })
    }

    fn op_signature(&mut self) -> Result<OpSignature, ParseError> {
        let (name, _) = self.expect_ident("an operation name")?;
        self.expect(TokenKind::LParen, "'(' after the operation name")?;
        let mut params = Vec::new();
        if !self.eat(&TokenKind::RParen) {
            loop {
                let (param, _) = self.expect_ident("a parameter name")?;
                self.expect(TokenKind::Colon, "':' after the parameter name")?;
                let (type_name, _) = self.expect_ident("a parameter type")?;
                params.push((param, type_name));
                if self.eat(&TokenKind::RParen) {
                    break;
                }
                self.expect(TokenKind::Comma, "',' or ')' in the parameter list")?;
            }
        }
        let return_type = if self.eat(&TokenKind::Colon) {
            Some(self.expect_ident("a return type")?.0)
        } else {
            None
        };
        Ok(OpSignature {
            name,
            params,
            return_type,
        })
    }

    fn expr(&mut self) -> Result<Expr, ParseError> {
        self.implies_expr()
    }

    fn implies_expr(&mut self) -> Result<Expr, ParseError> {
        let mut lhs = self.or_expr()?;
        while self.eat(&TokenKind::KwImplies) {
            let rhs = self.or_expr()?;
            let span = lhs.span.merge(rhs.span);
            lhs = Expr::new(
                ExprKind::Binary {
                    op: BinaryOp::Implies,
                    lhs: Box::new(lhs),
                    rhs: Box::new(rhs),
                },
                span,
            );
        }
        Ok(lhs)
    }

    fn or_expr(&mut self) -> Result<Expr, ParseError> {
        let mut lhs = self.and_expr()?;
        loop {
            let op = match self.peek().kind {
                TokenKind::KwOr => BinaryOp::Or,
                TokenKind::KwXor => BinaryOp::Xor,
                _ => break,
            };
            self.advance();
            let rhs = self.and_expr()?;
            let span = lhs.span.merge(rhs.span);
            lhs = Expr::new(
                ExprKind::Binary {
                    op,
                    lhs: Box::new(lhs),
                    rhs: Box::new(rhs),
                },
                span,
            );
        }
        Ok(lhs)
    }

    fn and_expr(&mut self) -> Result<Expr, ParseError> {
        let mut lhs = self.not_expr()?;
        while self.eat(&TokenKind::KwAnd) {
            let rhs = self.not_expr()?;
            let span = lhs.span.merge(rhs.span);
            lhs = Expr::new(
                ExprKind::Binary {
                    op: BinaryOp::And,
                    lhs: Box::new(lhs),
                    rhs: Box::new(rhs),
                },
                span,
            );
        }
        Ok(lhs)
    }

    fn not_expr(&mut self) -> Result<Expr, ParseError> {
        if self.peek().kind == TokenKind::KwNot {
            let start = self.advance().span;
            let operand = self.not_expr()?;
            let span = start.merge(operand.span);
            return Ok(Expr::new(
                ExprKind::Unary {
                    op: UnaryOp::Not,
                    operand: Box::new(operand),
                },
                span,
            ));
        }
        self.comparison_expr()
    }

    fn comparison_expr(&mut self) -> Result<Expr, ParseError> {
        let mut lhs = self.additive_expr()?;
        loop {
            let op = match self.peek().kind {
                TokenKind::Eq => BinaryOp::Eq,
                TokenKind::NotEq => BinaryOp::NotEq,
                TokenKind::Lt => BinaryOp::Lt,
                TokenKind::Gt => BinaryOp::Gt,
                TokenKind::Le => BinaryOp::Le,
                TokenKind::Ge => BinaryOp::Ge,
                _ => break,
            };
            self.advance();
            let rhs = self.additive_expr()?;
            let span = lhs.span.merge(rhs.span);
            lhs = Expr::new(
                ExprKind::Binary {
                    op,
                    lhs: Box::new(lhs),
                    rhs: Box::new(rhs),
                },
                span,
            );
        }
        Ok(lhs)
    }

    fn additive_expr(&mut self) -> Result<Expr, ParseError> {
        let mut lhs = self.multiplicative_expr()?;
        loop {
            let op = match self.peek().kind {
                TokenKind::Plus => BinaryOp::Add,
                TokenKind::Minus => BinaryOp::Sub,
                _ => break,
            };
            self.advance();
            let rhs = self.multiplicative_expr()?;
            let span = lhs.span.merge(rhs.span);
            lhs = Expr::new(
                ExprKind::Binary {
                    op,
                    lhs: Box::new(lhs),
                    rhs: Box::new(rhs),
                },
                span,
            );
        }
        Ok(lhs)
    }

    fn multiplicative_expr(&mut self) -> Result<Expr, ParseError> {
        let mut lhs = self.unary_expr()?;
        loop {
            let op = match self.peek().kind {
                TokenKind::Star => BinaryOp::Mul,
                TokenKind::Slash => BinaryOp::Div,
                _ => break,
            };
            self.advance();
            let rhs = self.unary_expr()?;
            let span = lhs.span.merge(rhs.span);
            lhs = Expr::new(
                ExprKind::Binary {
                    op,
                    lhs: Box::new(lhs),
                    rhs: Box::new(rhs),
                },
                span,
            );
        }
        Ok(lhs)
    }

    fn unary_expr(&mut self) -> Result<Expr, ParseError> {
        if self.peek().kind == TokenKind::Minus {
            let start = self.advance().span;
            let operand = self.unary_expr()?;
            let span = start.merge(operand.span);
            return Ok(Expr::new(
                ExprKind::Unary {
                    op: UnaryOp::Neg,
                    operand: Box::new(operand),
                },
                span,
            ));
        }
        self.postfix_expr()
    }

    fn postfix_expr(&mut self) -> Result<Expr, ParseError> {
        let mut expr = self.primary_expr()?;
        loop {
            match self.peek().kind {
                TokenKind::Dot => {
                    self.advance();
                    let (name, name_span) = self.expect_ident("a property or operation name")?;
                    if self.peek().kind == TokenKind::LParen {
                        let args = self.call_args()?;
                        let span = expr.span.merge(self.previous_span());
                        // ClassName.allInstances() is a type operation
                        if name == "allInstances" && args.is_empty() {
                            if let ExprKind::Var(type_name) = &expr.kind {
                                expr = Expr::new(
                                    ExprKind::AllInstances {
                                        type_name: type_name.clone(),
                                    },
                                    span,
                                );
                                continue;
                            }
                        }
                        expr = Expr::new(
                            ExprKind::OperationCall {
                                source: Box::new(expr),
                                name,
                                args,
                            },
                            span,
                        );
                    } else {
                        let span = expr.span.merge(name_span);
                        expr = Expr::new(
                            ExprKind::Property {
                                source: Box::new(expr),
                                name,
                            },
                            span,
                        );
                    }
                }
                TokenKind::Arrow => {
                    self.advance();
                    let (name, name_span) = self.expect_ident("a collection operation name")?;
                    if ITERATOR_NAMES.contains(&name.as_str()) {
                        self.expect(TokenKind::LParen, "'(' after the iterator name")?;
                        // the subset requires an explicit iterator variable
                        let var = match (self.peek().kind.clone(), &self.peek2().kind) {
                            (TokenKind::Ident(v), TokenKind::Pipe) => {
                                self.advance();
                                self.advance();
                                v
                            }
                            _ => {
                                return Err(ParseError::new(
                                    format!(
                                        "iterator '{name}' requires a variable, e.g. ->{name}(x | ...)"
                                    ),
                                    name_span,
                                ))
                            }
                        };
                        let body = self.expr()?;
                        self.expect(TokenKind::RParen, "')' closing the iterator")?;
                        let span = expr.span.merge(self.previous_span());
                        expr = Expr::new(
                            ExprKind::Iterator {
                                source: Box::new(expr),
                                name,
                                var,
                                body: Box::new(body),
                            },
                            span,
                        );
                    } else {
                        if self.peek().kind != TokenKind::LParen {
                            return Err(ParseError::new(
                                format!("collection operation '{name}' requires parentheses"),
                                name_span,
                            ));
                        }
                        let args = self.call_args()?;
                        let span = expr.span.merge(self.previous_span());
                        expr = Expr::new(
                            ExprKind::ArrowCall {
                                source: Box::new(expr),
                                name,
                                args,
                            },
                            span,
                        );
                    }
                }
                TokenKind::At => {
                    let at_span = self.advance().span;
                    self.expect(TokenKind::KwPre, "'pre' after '@'")?;
                    if self.kind != ConstraintKind::Post {
                        return Err(ParseError::new(
                            "'@pre' is only allowed in postconditions",
                            at_span.merge(self.previous_span()),
                        ));
                    }
                    let span = expr.span.merge(self.previous_span());
                    expr = Expr::new(ExprKind::AtPre(Box::new(expr)), span);
                }
                _ => break,
            }
        }
        Ok(expr)
    }

    fn call_args(&mut self) -> Result<Vec<Expr>, ParseError> {
        self.expect(TokenKind::LParen, "'('")?;
        let mut args = Vec::new();
        if self.eat(&TokenKind::RParen) {
            return Ok(args);
        }
        loop {
            args.push(self.expr()?);
            if self.eat(&TokenKind::RParen) {
                return Ok(args);
            }
            self.expect(TokenKind::Comma, "',' or ')' in the argument list")?;
        }
    }

    fn previous_span(&self) -> Span {
        self.tokens[self.pos.saturating_sub(1)].span
    }

    fn primary_expr(&mut self) -> Result<Expr, ParseError> {
        let token = self.peek().clone();
        match token.kind {
            TokenKind::KwSelf => {
                self.advance();
                Ok(Expr::new(ExprKind::SelfRef, token.span))
            }
            TokenKind::KwResult => {
                self.advance();
                if self.kind != ConstraintKind::Post {
                    return Err(ParseError::new(
                        "'result' is only allowed in postconditions",
                        token.span,
                    ));
                }
                Ok(Expr::new(ExprKind::ResultRef, token.span))
            }
            TokenKind::KwTrue => {
                self.advance();
                Ok(Expr::new(ExprKind::BoolLit(true), token.span))
            }
            TokenKind::KwFalse => {
                self.advance();
                Ok(Expr::new(ExprKind::BoolLit(false), token.span))
            }
            TokenKind::Int(value) => {
                self.advance();
                Ok(Expr::new(ExprKind::IntLit(value), token.span))
            }
            TokenKind::Real(lexeme) => {
                self.advance();
                Ok(Expr::new(ExprKind::RealLit(lexeme), token.span))
            }
            TokenKind::Str(value) => {
                self.advance();
                Ok(Expr::new(ExprKind::StringLit(value), token.span))
            }
            TokenKind::Ident(name) => {
                self.advance();
                Ok(Expr::new(ExprKind::Var(name), token.span))
            }
            TokenKind::KwIf => {
                self.advance();
                let cond = self.expr()?;
                self.expect(TokenKind::KwThen, "'then'")?;
                let then_branch = self.expr()?;
                self.expect(TokenKind::KwElse, "'else'")?;
                let else_branch = self.expr()?;
                let end = self.expect(TokenKind::KwEndif, "'endif'")?;
                Ok(Expr::new(
                    ExprKind::If {
                        cond: Box::new(cond),
                        then_branch: Box::new(then_branch),
                        else_branch: Box::new(else_branch),
                    },
                    token.span.merge(end.span),
                ))
            }
            TokenKind::LParen => {
                self.advance();
                let inner = self.expr()?;
                self.expect(TokenKind::RParen, "')'")?;
                Ok(inner)
            }
            _ => Err(self.unexpected("an expression")),
        }
    }
}
