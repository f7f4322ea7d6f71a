//! Tokenizer for the OCL subset.

use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Byte range into the constraint source text.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
pub struct Span {
    pub start: usize,
    pub end: usize,
}

impl Span {
    pub fn new(start: usize, end: usize) -> Span {
        Span { start, end }
    }

    pub fn merge(self, other: Span) -> Span {
        Span {
            start: self.start.min(other.start),
            end: self.end.max(other.end),
        }
    }
}

#[derive(Debug, Error)]
#[error("{message}")]
pub struct ParseError {
    pub message: String,
    pub span: Span,
}

impl ParseError {
    pub fn new(message: impl Into<String>, span: Span) -> ParseError {
        ParseError {
            message: message.into(),
            span,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum TokenKind {
    Ident(String),
    Int(i64),
    /// Lexeme preserved so printing round-trips exactly.
    Real(String),
    Str(String),
    KwContext,
    KwInv,
    KwPre,
    KwPost,
    KwSelf,
    KwResult,
    KwIf,
    KwThen,
    KwElse,
    KwEndif,
    KwImplies,
    KwOr,
    KwXor,
    KwAnd,
    KwNot,
    KwTrue,
    KwFalse,
    ColonColon,
    Colon,
    Comma,
    Dot,
    Arrow,
    At,
    Pipe,
    LParen,
    RParen,
    Eq,
    NotEq,
    Lt,
    Gt,
    Le,
    Ge,
    Plus,
    Minus,
    Star,
    Slash,
    Eof,
}

impl TokenKind {
    pub fn describe(&self) -> String {
        match self {
            TokenKind::Ident(name) => format!("identifier '{name}'"),
            TokenKind::Int(v) => format!("integer {v}"),
            TokenKind::Real(v) => format!("real {v}"),
            TokenKind::Str(_) => "string literal".to_string(),
            TokenKind::Eof => "end of input".to_string(),
            other => format!("'{}'", other.lexeme()),
        }
    }

    fn lexeme(&self) -> &'static str {
        match self {
            TokenKind::KwContext => "context",
            TokenKind::KwInv => "inv",
            TokenKind::KwPre => "pre",
            TokenKind::KwPost => "post",
            TokenKind::KwSelf => "self",
            TokenKind::KwResult => "result",
            TokenKind::KwIf => "if",
            TokenKind::KwThen => "then",
            TokenKind::KwElse => "else",
            TokenKind::KwEndif => "endif",
            TokenKind::KwImplies => "implies",
            TokenKind::KwOr => "or",
            TokenKind::KwXor => "xor",
            TokenKind::KwAnd => "and",
            TokenKind::KwNot => "not",
            TokenKind::KwTrue => "true",
            TokenKind::KwFalse => "false",
            TokenKind::ColonColon => "::",
            TokenKind::Colon => ":",
            TokenKind::Comma => ",",
            TokenKind::Dot => ".",
            TokenKind::Arrow => "->",
            TokenKind::At => "@",
            TokenKind::Pipe => "|",
            TokenKind::LParen => "(",
            TokenKind::RParen => ")",
            TokenKind::Eq => "=",
            TokenKind::NotEq => "<>",
            TokenKind::Lt => "<",
            TokenKind::Gt => ">",
            TokenKind::Le => "<=",
            TokenKind::Ge => ">=",
            TokenKind::Plus => "+",
            TokenKind::Minus => "-",
            TokenKind::Star => "*",
            TokenKind::Slash => "/",
            _ => unreachable!("lexeme only called on fixed tokens"),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Token {
    pub kind: TokenKind,
    pub span: Span,
}

fn keyword(word: &str) -> Option<TokenKind> {
    Some(match word {
        "context" => TokenKind::KwContext,
        "inv" => TokenKind::KwInv,
        "pre" => TokenKind::KwPre,
        "post" => TokenKind::KwPost,
        "self" => TokenKind::KwSelf,
        "result" => TokenKind::KwResult,
        "if" => TokenKind::KwIf,
        "then" => TokenKind::KwThen,
        "else" => TokenKind::KwElse,
        "endif" => TokenKind::KwEndif,
        "implies" => TokenKind::KwImplies,
        "or" => TokenKind::KwOr,
        "xor" => TokenKind::KwXor,
        "and" => TokenKind::KwAnd,
        "not" => TokenKind::KwNot,
        "true" => TokenKind::KwTrue,
        "false" => TokenKind::KwFalse,
        _ => return None,
    })
}

pub fn lex(input: &str) -> Result<Vec<Token>, ParseError> {
    let bytes = input.as_bytes();
    let mut tokens = Vec::new();
    let mut i = 0usize;
    while i < bytes.len() {
        let c = bytes[i] as char;
        if c.is_ascii_whitespace() {
            i += 1;
            continue;
        }
        // line comments
        if c == '-' && bytes.get(i + 1) == Some(&b'-') {
            while i < bytes.len() && bytes[i] != b'\n' {
                i += 1;
            }
            continue;
        }
        let start = i;
        if c.is_ascii_alphabetic() || c == '_' {
            while i < bytes.len() && ((bytes[i] as char).is_ascii_alphanumeric() || bytes[i] == b'_')
            {
                i += 1;
            }
            let word = &input[start..i];
            let kind = keyword(word).unwrap_or_else(|| TokenKind::Ident(word.to_string()));
            tokens.push(Token {
                kind,
                span: Span::new(start, i),
            });
            continue;
        }
        if c.is_ascii_digit() {
            while i < bytes.len() && (bytes[i] as char).is_ascii_digit() {
                i += 1;
            }
            // a real literal needs a digit right after the dot ("1..2" and
            // "1.x" leave the dot alone)
            let is_real = bytes.get(i) == Some(&b'.')
                && bytes.get(i + 1).is_some_and(|b| (*b as char).is_ascii_digit());
            if is_real {
                i += 1;
                while i < bytes.len() && (bytes[i] as char).is_ascii_digit() {
                    i += 1;
                }
                tokens.push(Token {
                    kind: TokenKind::Real(input[start..i].to_string()),
                    span: Span::new(start, i),
                });
            } else {
                let value: i64 = input[start..i].parse().map_err(|_| {
                    ParseError::new(
                        format!("integer literal '{}' out of range", &input[start..i]),
                        Span::new(start, i),
                    )
                })?;
                tokens.push(Token {
                    kind: TokenKind::Int(value),
                    span: Span::new(start, i),
                });
            }
            continue;
        }
        if c == '\'' {
            i += 1;
            let content_start = i;
            while i < bytes.len() && bytes[i] != b'\'' {
                i += 1;
            }
            if i >= bytes.len() {
                return Err(ParseError::new(
                    "unterminated string literal",
                    Span::new(start, bytes.len()),
                ));
            }
            tokens.push(Token {
                kind: TokenKind::Str(input[content_start..i].to_string()),
                span: Span::new(start, i + 1),
            });
            i += 1;
            continue;
        }
        let two = |a: u8| bytes.get(i + 1) == Some(&a);
        let (kind, len) = match c {
            ':' if two(b':') => (TokenKind::ColonColon, 2),
            ':' => (TokenKind::Colon, 1),
            ',' => (TokenKind::Comma, 1),
            '.' => (TokenKind::Dot, 1),
            '-' if two(b'>') => (TokenKind::Arrow, 2),
            '-' => (TokenKind::Minus, 1),
            '@' => (TokenKind::At, 1),
            '|' => (TokenKind::Pipe, 1),
            '(' => (TokenKind::LParen, 1),
            ')' => (TokenKind::RParen, 1),
            '=' => (TokenKind::Eq, 1),
            '<' if two(b'>') => (TokenKind::NotEq, 2),
            '<' if two(b'=') => (TokenKind::Le, 2),
            '<' => (TokenKind::Lt, 1),
            '>' if two(b'=') => (TokenKind::Ge, 2),
            '>' => (TokenKind::Gt, 1),
            '+' => (TokenKind::Plus, 1),
            '*' => (TokenKind::Star, 1),
            '/' => (TokenKind::Slash, 1),
            other => {
                return Err(ParseError::new(
                    format!("unexpected character '{other}'"),
                    Span::new(start, start + 1),
                ))
            }
        };
        i += len;
        tokens.push(Token {
            kind,
            span: Span::new(start, i),
        });
    }
    tokens.push(Token {
        kind: TokenKind::Eof,
        span: Span::new(input.len(), input.len()),
    });
    Ok(tokens)
}
