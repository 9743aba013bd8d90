//! Rewrites identifiers that name union constructors into constructor
//! nodes. The parser cannot tell `nil` the constructor from `nil` the
//! variable; constructor names take precedence once domains are known.

use std::sync::Arc;

use super::domains::DomainTable;
use crate::model::*;

pub fn resolve_expr(table: &DomainTable, e: &mut Expr) {
    match &mut e.kind {
        ExprKind::Var(name) if table.constructor(name).is_some() => {
            e.kind = ExprKind::Ctor {
                name: std::mem::take(name),
                args: Vec::new(),
            };
        }
        ExprKind::Apply(func, arg) => {
            resolve_expr(table, arg);
            match &func.kind {
                ExprKind::Var(name) if table.constructor(name).is_some() => {
                    let name = name.clone();
                    let arg = std::mem::replace(
                        arg.as_mut(),
                        Expr::new(ExprKind::Bool(false), e.span.clone()),
                    );
                    e.kind = ExprKind::Ctor {
                        name,
                        args: vec![arg],
                    };
                }
                _ => resolve_expr(table, func),
            }
        }
        ExprKind::Lambda { body, .. } => resolve_expr(table, Arc::make_mut(body)),
        ExprKind::Pair(a, b) | ExprKind::BinOp(_, a, b) => {
            resolve_expr(table, a);
            resolve_expr(table, b);
        }
        ExprKind::Update { func, key, value } => {
            resolve_expr(table, func);
            resolve_expr(table, key);
            resolve_expr(table, value);
        }
        ExprKind::Ctor { args, .. } => args.iter_mut().for_each(|a| resolve_expr(table, a)),
        ExprKind::Syntax { parts, .. } => {
            for part in parts {
                if let SyntaxPart::Sub(s) = part {
                    resolve_expr(table, s);
                }
            }
        }
        _ => {}
    }
}

pub fn resolve_pattern(table: &DomainTable, p: &mut Pattern) {
    match &mut p.kind {
        PatternKind::Var(name) if table.constructor(name).is_some() => {
            p.kind = PatternKind::Ctor {
                name: std::mem::take(name),
                args: Vec::new(),
            };
        }
        PatternKind::Pair(a, b) => {
            resolve_pattern(table, a);
            resolve_pattern(table, b);
        }
        PatternKind::Ctor { args, .. } => args.iter_mut().for_each(|a| resolve_pattern(table, a)),
        PatternKind::Syntax { parts, .. } => {
            for part in parts {
                if let SyntaxPart::Sub(s) = part {
                    resolve_pattern(table, s);
                }
            }
        }
        _ => {}
    }
}

pub fn resolve_specification(table: &DomainTable, spec: &mut Specification) {
    for l in &mut spec.lets {
        resolve_expr(table, &mut l.value);
    }
    for s in &mut spec.systems {
        for r in &mut s.rules {
            if let Some(a) = &mut r.antecedent {
                resolve_pattern(table, a);
            }
            resolve_pattern(table, &mut r.initial);
            resolve_expr(table, &mut r.result);
            for p in &mut r.premises {
                match p {
                    Premise::Transition {
                        antecedent,
                        initial,
                        result,
                        ..
                    } => {
                        if let Some(a) = antecedent {
                            resolve_expr(table, a);
                        }
                        resolve_expr(table, initial);
                        resolve_pattern(table, result);
                    }
                    Premise::SideCondition { cond, .. } => resolve_expr(table, cond),
                    Premise::Local { pattern, value, .. } => {
                        resolve_pattern(table, pattern);
                        resolve_expr(table, value);
                    }
                }
            }
        }
    }
    for e in &mut spec.evaluations {
        if let Some(a) = &mut e.antecedent {
            resolve_expr(table, a);
        }
        resolve_expr(table, &mut e.initial);
    }
}
