//! Canonical pretty-printer: parse(print(ast)) reproduces the tree.

use crate::oclcheck::ast::{BinaryOp, Expr, ExprKind, OclConstraint, UnaryOp};

/// Binding tightness used to decide parenthesization.
fn level(expr: &Expr) -> u8 {
    match &expr.kind {
        ExprKind::Binary { op, .. } => match op {
            BinaryOp::Implies => 1,
            BinaryOp::Or | BinaryOp::Xor => 2,
            BinaryOp::And => 3,
            BinaryOp::Eq
            | BinaryOp::NotEq
            | BinaryOp::Lt
            | BinaryOp::Gt
            | BinaryOp::Le
            | BinaryOp::Ge => 5,
            BinaryOp::Add | BinaryOp::Sub => 6,
            BinaryOp::Mul | BinaryOp::Div => 7,
        },
        ExprKind::Unary { op: UnaryOp::Not, .. } => 4,
        ExprKind::Unary { op: UnaryOp::Neg, .. } => 8,
        ExprKind::Property { .. }
        | ExprKind::OperationCall { .. }
        | ExprKind::ArrowCall { .. }
        | ExprKind::Iterator { .. }
        | ExprKind::AllInstances { .. }
        | ExprKind::AtPre(_) => 9,
        _ => 10,
    }
}

fn binary_level(op: BinaryOp) -> u8 {
    match op {
        BinaryOp::Implies => 1,
        BinaryOp::Or | BinaryOp::Xor => 2,
        BinaryOp::And => 3,
        BinaryOp::Eq
        | BinaryOp::NotEq
        | BinaryOp::Lt
        | BinaryOp::Gt
        | BinaryOp::Le
        | BinaryOp::Ge => 5,
        BinaryOp::Add | BinaryOp::Sub => 6,
        BinaryOp::Mul | BinaryOp::Div => 7,
    }
}

fn write_child(out: &mut String, child: &Expr, min_level: u8) {
    if level(child) < min_level {
        out.push('(');
        write_expr(out, child);
        out.push(')');
    } else {
        write_expr(out, child);
    }
}

fn write_args(out: &mut String, args: &[Expr]) {
    out.push('(');
    for (i, arg) in args.iter().enumerate() {
        if i > 0 {
            out.push_str(", ");
        }
        write_expr(out, arg);
    }
    out.push(')');
}

fn write_expr(out: &mut String, expr: &Expr) {
    match &expr.kind {
        ExprKind::SelfRef => out.push_str("self"),
        ExprKind::ResultRef => out.push_str("result"),
        ExprKind::Var(name) => out.push_str(name),
        ExprKind::IntLit(v) => out.push_str(&v.to_string()),
        ExprKind::RealLit(lexeme) => out.push_str(lexeme),
        ExprKind::BoolLit(v) => out.push_str(if *v { "true" } else { "false" }),
        ExprKind::StringLit(s) => {
            out.push('\'');
            out.push_str(s);
            out.push('\'');
        }
        ExprKind::Property { source, name } => {
            write_child(out, source, 9);
            out.push('.');
            out.push_str(name);
        }
        ExprKind::OperationCall { source, name, args } => {
            write_child(out, source, 9);
            out.push('.');
            out.push_str(name);
            write_args(out, args);
        }
        ExprKind::ArrowCall { source, name, args } => {
            write_child(out, source, 9);
            out.push_str("->");
            out.push_str(name);
            write_args(out, args);
        }
        ExprKind::Iterator {
            source,
            name,
            var,
            body,
        } => {
            write_child(out, source, 9);
            out.push_str("->");
            out.push_str(name);
            out.push('(');
            out.push_str(var);
            out.push_str(" | ");
            write_expr(out, body);
            out.push(')');
        }
        ExprKind::AllInstances { type_name } => {
            out.push_str(type_name);
            out.push_str(".allInstances()");
        }
        ExprKind::If {
            cond,
            then_branch,
            else_branch,
        } => {
            out.push_str("if ");
            write_expr(out, cond);
            out.push_str(" then ");
            write_expr(out, then_branch);
            out.push_str(" else ");
            write_expr(out, else_branch);
            out.push_str(" endif");
        }
        ExprKind::Binary { op, lhs, rhs } => {
            let lvl = binary_level(*op);
            // left-associative chains: the right child needs strictly
            // tighter binding to print without parentheses
            write_child(out, lhs, lvl);
            out.push(' ');
            out.push_str(op.symbol());
            out.push(' ');
            write_child(out, rhs, lvl + 1);
        }
        ExprKind::Unary { op, operand } => match op {
            UnaryOp::Not => {
                out.push_str("not ");
                write_child(out, operand, 4);
            }
            UnaryOp::Neg => {
                out.push('-');
                write_child(out, operand, 8);
            }
        },
        ExprKind::AtPre(inner) => {
            write_child(out, inner, 9);
            out.push_str("@pre");
        }
    }
}

/// Render a constraint in canonical form.
pub fn print(constraint: &OclConstraint) -> String {
    let mut out = String::from("context ");
    out.push_str(&constraint.context_class);
    if let Some(sig) = &constraint.context_operation {
        out.push_str("::");
        out.push_str(&sig.name);
        out.push('(');
        for (i, (param, type_name)) in sig.params.iter().enumerate() {
            if i > 0 {
                out.push_str(", ");
            }
            out.push_str(param);
            out.push_str(" : ");
            out.push_str(type_name);
        }
        out.push(')');
        if let Some(ret) = &sig.return_type {
            out.push_str(" : ");
            out.push_str(ret);
        }
    }
    out.push(' ');
    out.push_str(&constraint.kind.to_string());
    if let Some(name) = &constraint.name {
        out.push(' ');
        out.push_str(name);
    }
    out.push_str(": ");
    write_expr(&mut out, &constraint.body);
    out
}
