//! Plain-text printer for the metalanguage. Output re-parses to the same
//! tree (up to spans).

use std::fmt::{self, Write};
use std::sync::Arc;

use crate::model::*;
use crate::span::SourceSpan;

const PREC_LAMBDA: u8 = 0;
const PREC_POSTFIX: u8 = 4;

pub(crate) fn escape_string(s: &str) -> String {
    let mut out = String::with_capacity(s.len() + 2);
    out.push('"');
    for c in s.chars() {
        match c {
            '"' => out.push_str("\\\""),
            '\\' => out.push_str("\\\\"),
            '\n' => out.push_str("\\n"),
            '\t' => out.push_str("\\t"),
            c => out.push(c),
        }
    }
    out.push('"');
    out
}

fn write_expr(f: &mut impl Write, e: &Expr, prec: u8) -> fmt::Result {
    match &e.kind {
        ExprKind::Int(n) => {
            if prec >= PREC_POSTFIX && n.sign() == num_bigint::Sign::Minus {
                write!(f, "({n})")
            } else {
                write!(f, "{n}")
            }
        }
        ExprKind::Str(s) => f.write_str(&escape_string(s)),
        ExprKind::Bool(b) => write!(f, "{b}"),
        ExprKind::Symbol(s) => write!(f, "`{s}`"),
        ExprKind::Var(v) => f.write_str(v),
        ExprKind::Lambda {
            param,
            param_type,
            body,
        } => {
            if prec > PREC_LAMBDA {
                f.write_str("(")?;
            }
            write!(f, "\\{param} : {param_type} . ")?;
            write_expr(f, body, PREC_LAMBDA)?;
            if prec > PREC_LAMBDA {
                f.write_str(")")?;
            }
            Ok(())
        }
        ExprKind::Apply(func, arg) => {
            let wrap = prec > PREC_POSTFIX;
            if wrap {
                f.write_str("(")?;
            }
            write_expr(f, func, PREC_POSTFIX)?;
            write_args(f, arg)?;
            if wrap {
                f.write_str(")")?;
            }
            Ok(())
        }
        ExprKind::Bottom(t) => write!(f, "-|{t}|"),
        ExprKind::Update { func, key, value } => {
            write_expr(f, func, PREC_POSTFIX)?;
            f.write_str("[")?;
            write_expr(f, key, PREC_LAMBDA)?;
            f.write_str(" -> ")?;
            write_expr(f, value, PREC_LAMBDA)?;
            f.write_str("]")
        }
        ExprKind::Pair(a, b) => {
            f.write_str("(")?;
            write_expr(f, a, PREC_LAMBDA)?;
            f.write_str(", ")?;
            write_expr(f, b, PREC_LAMBDA)?;
            f.write_str(")")
        }
        ExprKind::BinOp(op, a, b) => {
            let p = op.precedence();
            let wrap = prec > p;
            if wrap {
                f.write_str("(")?;
            }
            // Comparisons do not chain; arithmetic associates to the left.
            let left_prec = if p == 1 { p + 1 } else { p };
            write_expr(f, a, left_prec)?;
            write!(f, " {} ", op.symbol())?;
            write_expr(f, b, p + 1)?;
            if wrap {
                f.write_str(")")?;
            }
            Ok(())
        }
        ExprKind::Ctor { name, args } => {
            let wrap = prec > PREC_POSTFIX && !args.is_empty();
            if wrap {
                f.write_str("(")?;
            }
            f.write_str(name)?;
            for a in args {
                write_args(f, a)?;
            }
            if wrap {
                f.write_str(")")?;
            }
            Ok(())
        }
        ExprKind::Syntax { parts, .. } => {
            f.write_str("{")?;
            for (i, part) in parts.iter().enumerate() {
                if i > 0 {
                    f.write_str(" ")?;
                }
                match part {
                    SyntaxPart::Terminal(t) => write!(f, "'{t}'")?,
                    // One above postfix: calls inside braces need parens.
                    SyntaxPart::Sub(e) => write_expr(f, e, PREC_POSTFIX + 1)?,
                }
            }
            f.write_str("}")
        }
    }
}

/// `(a, b)` for a pair argument, `(a)` otherwise.
fn write_args(f: &mut impl Write, arg: &Expr) -> fmt::Result {
    f.write_str("(")?;
    match &arg.kind {
        ExprKind::Pair(a, b) => {
            write_expr(f, a, PREC_LAMBDA)?;
            f.write_str(", ")?;
            write_expr(f, b, PREC_LAMBDA)?;
        }
        _ => write_expr(f, arg, PREC_LAMBDA)?,
    }
    f.write_str(")")
}

fn write_pattern(f: &mut impl Write, p: &Pattern, in_braces: bool) -> fmt::Result {
    match &p.kind {
        PatternKind::Var(v) => f.write_str(v),
        PatternKind::Wildcard => f.write_str("_"),
        PatternKind::Int(n) => write!(f, "{n}"),
        PatternKind::Str(s) => f.write_str(&escape_string(s)),
        PatternKind::Bool(b) => write!(f, "{b}"),
        PatternKind::Symbol(s) => write!(f, "`{s}`"),
        PatternKind::Pair(a, b) => {
            f.write_str("(")?;
            write_pattern(f, a, false)?;
            f.write_str(", ")?;
            write_pattern(f, b, false)?;
            f.write_str(")")
        }
        PatternKind::Ctor { name, args } => {
            if args.is_empty() {
                return f.write_str(name);
            }
            if in_braces {
                f.write_str("(")?;
            }
            f.write_str(name)?;
            for a in args {
                f.write_str("(")?;
                match &a.kind {
                    PatternKind::Pair(x, y) => {
                        write_pattern(f, x, false)?;
                        f.write_str(", ")?;
                        write_pattern(f, y, false)?;
                    }
                    _ => write_pattern(f, a, false)?,
                }
                f.write_str(")")?;
            }
            if in_braces {
                f.write_str(")")?;
            }
            Ok(())
        }
        PatternKind::Syntax { parts, .. } => {
            f.write_str("{")?;
            for (i, part) in parts.iter().enumerate() {
                if i > 0 {
                    f.write_str(" ")?;
                }
                match part {
                    SyntaxPart::Terminal(t) => write!(f, "'{t}'")?,
                    SyntaxPart::Sub(p) => write_pattern(f, p, true)?,
                }
            }
            f.write_str("}")
        }
    }
}

impl fmt::Display for Expr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write_expr(f, self, PREC_LAMBDA)
    }
}

impl fmt::Display for Pattern {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write_pattern(f, self, false)
    }
}

impl fmt::Display for Premise {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Premise::Transition {
                target,
                explicit_target,
                antecedent,
                initial,
                result,
                ..
            } => {
                if let Some(a) = antecedent {
                    write!(f, "{a} |- ")?;
                }
                if *explicit_target {
                    write!(f, "{initial} ={target}=> {result}")
                } else {
                    write!(f, "{initial} ==> {result}")
                }
            }
            Premise::SideCondition { cond, .. } => write!(f, "if {cond}"),
            Premise::Local { pattern, value, .. } => write!(f, "let {pattern} = {value}"),
        }
    }
}

fn write_production(out: &mut String, prod: &Production) {
    for (i, item) in prod.items.iter().enumerate() {
        if i > 0 {
            out.push(' ');
        }
        match item {
            ProductionItem::Terminal(t) => {
                let _ = write!(out, "'{t}'");
            }
            ProductionItem::Hole(t @ (TypeExpr::Basic(_) | TypeExpr::Named(_))) => {
                let _ = write!(out, "{t}");
            }
            ProductionItem::Hole(t) => {
                let _ = write!(out, "({t})");
            }
        }
    }
}

pub fn print_domain(d: &DomainDef) -> String {
    match &d.body {
        DomainBody::Alias(t) => format!("domain {} = {t};", d.name),
        DomainBody::Union(ctors) => {
            let body: Vec<String> = ctors
                .iter()
                .map(|c| match &c.payload {
                    Some(t) => format!("{} : {t}", c.name),
                    None => c.name.clone(),
                })
                .collect();
            format!("domain {} = {{ {} }};", d.name, body.join(" + "))
        }
    }
}

pub fn print_syntax(s: &SyntaxDef) -> String {
    let mut out = format!("syntax {} = ", s.name);
    let indent = " ".repeat(out.len() - 2);
    for (i, prod) in s.productions.iter().enumerate() {
        if i > 0 {
            out.push('\n');
            out.push_str(&indent);
            out.push_str("| ");
        }
        write_production(&mut out, prod);
    }
    out.push(';');
    out
}

pub fn print_rule(r: &Rule) -> String {
    let mut out = format!("[[ {} ]]: ", r.label);
    if let Some(a) = &r.antecedent {
        let _ = write!(out, "{a} |- ");
    }
    let _ = write!(out, "{} ==> {}", r.initial, r.result);
    for (i, p) in r.premises.iter().enumerate() {
        out.push_str(if i == 0 { " \\\\\n    " } else { ",\n    " });
        let _ = write!(out, "{p}");
    }
    out.push(';');
    out
}

pub fn print_system(s: &TransitionSystem) -> String {
    let mut out = format!("system {} : ", s.name);
    if let Some(a) = &s.antecedent_type {
        let _ = write!(out, "{a} |- ");
    }
    let _ = writeln!(out, "{} ==> {} =", s.initial_type, s.final_type);
    for r in &s.rules {
        out.push_str("  ");
        out.push_str(&print_rule(r).replace('\n', "\n  "));
        out.push('\n');
    }
    out.push_str("end");
    out
}

pub fn print_evaluation(e: &Evaluation) -> String {
    match &e.antecedent {
        Some(a) => format!("evaluate {a} |- {} in {}", e.initial, e.system),
        None => format!("evaluate {} in {}", e.initial, e.system),
    }
}

pub fn print_specification(spec: &Specification) -> String {
    let mut blocks: Vec<String> = Vec::new();
    blocks.extend(spec.domains.iter().map(print_domain));
    blocks.extend(spec.syntaxes.iter().map(print_syntax));
    blocks.extend(spec.lets.iter().map(|l| format!("let {} = {};", l.name, l.value)));
    blocks.extend(spec.systems.iter().map(print_system));
    blocks.extend(spec.evaluations.iter().map(print_evaluation));
    let mut out = blocks.join("\n\n");
    if !out.is_empty() {
        out.push('\n');
    }
    out
}

/// Replaces every span in the specification by the synthetic span, so that
/// trees can be compared structurally.
pub fn erase_spans(spec: &mut Specification) {
    for d in &mut spec.domains {
        d.span = SourceSpan::synthetic();
        if let DomainBody::Union(ctors) = &mut d.body {
            for c in ctors {
                c.span = SourceSpan::synthetic();
            }
        }
    }
    for s in &mut spec.syntaxes {
        s.span = SourceSpan::synthetic();
        for p in &mut s.productions {
            p.span = SourceSpan::synthetic();
        }
    }
    for l in &mut spec.lets {
        l.span = SourceSpan::synthetic();
        erase_expr(&mut l.value);
    }
    for s in &mut spec.systems {
        s.span = SourceSpan::synthetic();
        for r in &mut s.rules {
            r.span = SourceSpan::synthetic();
            if let Some(a) = &mut r.antecedent {
                erase_pattern(a);
            }
            erase_pattern(&mut r.initial);
            erase_expr(&mut r.result);
            for p in &mut r.premises {
                match p {
                    Premise::Transition {
                        antecedent,
                        initial,
                        result,
                        span,
                        ..
                    } => {
                        *span = SourceSpan::synthetic();
                        if let Some(a) = antecedent {
                            erase_expr(a);
                        }
                        erase_expr(initial);
                        erase_pattern(result);
                    }
                    Premise::SideCondition { cond, span } => {
                        *span = SourceSpan::synthetic();
                        erase_expr(cond);
                    }
                    Premise::Local {
                        pattern,
                        value,
                        span,
                    } => {
                        *span = SourceSpan::synthetic();
                        erase_pattern(pattern);
                        erase_expr(value);
                    }
                }
            }
        }
    }
    for e in &mut spec.evaluations {
        e.span = SourceSpan::synthetic();
        if let Some(a) = &mut e.antecedent {
            erase_expr(a);
        }
        erase_expr(&mut e.initial);
    }
}

pub fn erase_expr(e: &mut Expr) {
    e.span = SourceSpan::synthetic();
    match &mut e.kind {
        ExprKind::Lambda { body, .. } => erase_expr(Arc::make_mut(body)),
        ExprKind::Apply(a, b) | ExprKind::Pair(a, b) | ExprKind::BinOp(_, a, b) => {
            erase_expr(a);
            erase_expr(b);
        }
        ExprKind::Update { func, key, value } => {
            erase_expr(func);
            erase_expr(key);
            erase_expr(value);
        }
        ExprKind::Ctor { args, .. } => args.iter_mut().for_each(erase_expr),
        ExprKind::Syntax { parts, .. } => {
            for part in parts {
                if let SyntaxPart::Sub(s) = part {
                    erase_expr(s);
                }
            }
        }
        _ => {}
    }
}

pub fn erase_pattern(p: &mut Pattern) {
    p.span = SourceSpan::synthetic();
    match &mut p.kind {
        PatternKind::Pair(a, b) => {
            erase_pattern(a);
            erase_pattern(b);
        }
        PatternKind::Ctor { args, .. } => args.iter_mut().for_each(erase_pattern),
        PatternKind::Syntax { parts, .. } => {
            for part in parts {
                if let SyntaxPart::Sub(s) = part {
                    erase_pattern(s);
                }
            }
        }
        _ => {}
    }
}
