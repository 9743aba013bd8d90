//! LaTeX rendering of grammars and transition rules.

use std::fmt::Write;

use crate::analysis::TypedSpecification;
use crate::model::*;

const PREAMBLE: &str = "\\documentclass{article}\n\
\\usepackage{amsmath}\n\
\\usepackage{amssymb}\n\
\\begin{document}\n";
const TRAILER: &str = "\\end{document}\n";

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct TexOptions {
    /// Emit only the body, without preamble and trailer.
    pub fragment: bool,
}

/// Renders every syntax definition as a BNF display and every rule as an
/// inference rule. Output is a deterministic function of the input.
pub fn emit_latex(tspec: &TypedSpecification, opts: TexOptions) -> String {
    let mut out = String::new();
    if !opts.fragment {
        out.push_str(PREAMBLE);
    }
    for s in &tspec.spec.syntaxes {
        out.push_str(&grammar_block(s));
    }
    for sys in &tspec.spec.systems {
        let _ = writeln!(out, "\n\\subsection*{{System ${}$}}", ident(&sys.name));
        for r in &sys.rules {
            out.push_str(&rule_block(sys, r));
        }
    }
    if !opts.fragment {
        out.push_str(TRAILER);
    }
    out
}

pub fn grammar_block(s: &SyntaxDef) -> String {
    let mut out = String::from("\n\\[\n\\begin{array}{lcl}\n");
    for (i, p) in s.productions.iter().enumerate() {
        let lhs = if i == 0 { ident(&s.name) } else { String::new() };
        let op = if i == 0 { "::=" } else { "\\mid" };
        let items: Vec<String> = p
            .items
            .iter()
            .map(|it| match it {
                ProductionItem::Terminal(t) => terminal(t),
                ProductionItem::Hole(t) => tex_type(t),
            })
            .collect();
        let end = if i + 1 < s.productions.len() { " \\\\" } else { "" };
        let _ = writeln!(out, "{lhs} & {op} & {}{end}", items.join(" \\; "));
    }
    out.push_str("\\end{array}\n\\]\n");
    out
}

pub fn rule_block(sys: &TransitionSystem, r: &Rule) -> String {
    let conclusion = transition(
        r.antecedent.as_ref().map(tex_pattern),
        tex_pattern(&r.initial),
        None,
        tex_expr(&r.result, 0),
    );
    let label = format!("[\\textsc{{{}}}]", escape_text(&r.label));
    let body = if r.premises.is_empty() {
        conclusion
    } else {
        let premises: Vec<String> = r.premises.iter().map(|p| premise(sys, p)).collect();
        format!("\\dfrac{{{}}}{{{conclusion}}}", premises.join(" \\quad "))
    };
    format!("\\begin{{equation*}}\n{label}:\\quad {body}\n\\end{{equation*}}\n")
}

fn transition(antecedent: Option<String>, initial: String, system: Option<&str>, result: String) -> String {
    let arrow = match system {
        Some(s) => format!("\\Downarrow_{{{}}}", ident(s)),
        None => "\\Downarrow".to_string(),
    };
    match antecedent {
        Some(a) => format!("{a} \\vdash {initial} {arrow} {result}"),
        None => format!("{initial} {arrow} {result}"),
    }
}

fn premise(sys: &TransitionSystem, p: &Premise) -> String {
    match p {
        Premise::Transition {
            target,
            antecedent,
            initial,
            result,
            ..
        } => transition(
            antecedent.as_ref().map(|a| tex_expr(a, 0)),
            tex_expr(initial, 0),
            (target != &sys.name).then_some(target.as_str()),
            tex_pattern(result),
        ),
        Premise::SideCondition { cond, .. } => format!("\\text{{if }} {}", tex_expr(cond, 0)),
        Premise::Local { pattern, value, .. } => {
            format!("\\text{{let }} {} = {}", tex_pattern(pattern), tex_expr(value, 0))
        }
    }
}

pub fn tex_type(t: &TypeExpr) -> String {
    tex_type_prec(t, 0)
}

fn tex_type_prec(t: &TypeExpr, prec: u8) -> String {
    let (s, own) = match t {
        TypeExpr::Basic(BasicKind::Int) => ("\\mathbb{Z}".to_string(), 3),
        TypeExpr::Basic(BasicKind::Bool) => ("\\mathbb{B}".to_string(), 3),
        TypeExpr::Basic(BasicKind::String) => ("\\Sigma^*".to_string(), 3),
        TypeExpr::Basic(BasicKind::Symbol) => ("\\mathcal{X}^*".to_string(), 3),
        TypeExpr::Named(n) => (ident(n), 3),
        TypeExpr::Product(a, b) => (
            format!("{} \\times {}", tex_type_prec(a, 2), tex_type_prec(b, 1)),
            1,
        ),
        TypeExpr::Arrow(a, b) => (
            format!("{} \\to {}", tex_type_prec(a, 1), tex_type_prec(b, 0)),
            0,
        ),
    };
    if own < prec {
        format!("({s})")
    } else {
        s
    }
}

/// Metavariable names: trailing digits become a subscript, primes are kept,
/// multi-letter stems are set in math italic.
pub fn ident(name: &str) -> String {
    let primes = name.len() - name.trim_end_matches('\'').len();
    let base = &name[..name.len() - primes];
    let stem = base.trim_end_matches(|c: char| c.is_ascii_digit());
    let digits = &base[stem.len()..];
    let stem = if stem.is_empty() { base } else { stem };
    let digits = if stem.len() == base.len() { "" } else { digits };
    let mut out = if stem.chars().count() == 1 {
        escape_text(stem)
    } else {
        format!("\\mathit{{{}}}", escape_text(stem))
    };
    if !digits.is_empty() {
        let _ = write!(out, "_{{{digits}}}");
    }
    out.push_str(&name[name.len() - primes..]);
    out
}

fn escape_text(s: &str) -> String {
    let mut out = String::new();
    for c in s.chars() {
        match c {
            '\\' => out.push_str("\\backslash "),
            '{' | '}' | '#' | '$' | '%' | '&' | '_' => {
                out.push('\\');
                out.push(c);
            }
            '^' => out.push_str("\\hat{}"),
            '~' => out.push_str("\\sim "),
            c => out.push(c),
        }
    }
    out
}

fn terminal(t: &str) -> String {
    if t.chars().all(char::is_alphanumeric) && !t.is_empty() {
        format!("\\mathbf{{{t}}}")
    } else {
        escape_text(t)
    }
}

fn symbol(s: &str) -> String {
    format!("\\text{{`{}'}}", escape_text(s))
}

fn syntax<T>(parts: &[SyntaxPart<T>], sub: impl Fn(&T) -> String) -> String {
    parts
        .iter()
        .map(|p| match p {
            SyntaxPart::Terminal(t) => terminal(t),
            SyntaxPart::Sub(x) => sub(x),
        })
        .collect::<Vec<_>>()
        .join(" \\; ")
}

pub fn tex_pattern(p: &Pattern) -> String {
    match &p.kind {
        PatternKind::Var(v) => ident(v),
        PatternKind::Wildcard => "\\_".to_string(),
        PatternKind::Int(n) => n.to_string(),
        PatternKind::Str(s) => format!("\\text{{\"{}\"}}", escape_text(s)),
        PatternKind::Bool(b) => format!("\\mathsf{{{b}}}"),
        PatternKind::Symbol(s) => symbol(s),
        PatternKind::Pair(a, b) => format!("({}, {})", tex_pattern(a), tex_pattern(b)),
        PatternKind::Ctor { name, args } => ctor(name, args.iter().map(tex_pattern)),
        PatternKind::Syntax { parts, .. } => syntax(parts, |s| match &s.kind {
            PatternKind::Syntax { parts, .. } if parts.len() > 1 => format!("({})", tex_pattern(s)),
            _ => tex_pattern(s),
        }),
    }
}

fn ctor(name: &str, args: impl Iterator<Item = String>) -> String {
    let args: Vec<String> = args.collect();
    let head = format!("\\mathsf{{{}}}", escape_text(name));
    if args.is_empty() {
        head
    } else {
        format!("{head}({})", args.join(", "))
    }
}

const PREC_POSTFIX: u8 = 4;

pub fn tex_expr(e: &Expr, prec: u8) -> String {
    let (s, own) = match &e.kind {
        ExprKind::Int(n) => (n.to_string(), PREC_POSTFIX + 1),
        ExprKind::Str(s) => (format!("\\text{{\"{}\"}}", escape_text(s)), PREC_POSTFIX + 1),
        ExprKind::Bool(b) => (format!("\\mathsf{{{b}}}"), PREC_POSTFIX + 1),
        ExprKind::Symbol(s) => (symbol(s), PREC_POSTFIX + 1),
        ExprKind::Var(v) => (ident(v), PREC_POSTFIX + 1),
        ExprKind::Lambda { param, body, .. } => (
            format!("\\lambda {}.\\, {}", ident(param), tex_expr(body, 0)),
            0,
        ),
        ExprKind::Apply(f, a) => (
            format!("{}({})", tex_expr(f, PREC_POSTFIX), tex_expr(a, 0)),
            PREC_POSTFIX,
        ),
        ExprKind::Bottom(_) => ("\\bot".to_string(), PREC_POSTFIX + 1),
        ExprKind::Update { func, key, value } => (
            format!(
                "{}[{} \\mapsto {}]",
                tex_expr(func, PREC_POSTFIX),
                tex_expr(key, 0),
                tex_expr(value, 0)
            ),
            PREC_POSTFIX,
        ),
        ExprKind::Pair(a, b) => (
            format!("({}, {})", tex_expr(a, 0), tex_expr(b, 0)),
            PREC_POSTFIX + 1,
        ),
        ExprKind::BinOp(op, a, b) => {
            let p = op.precedence();
            let sym = match op {
                BinOp::Add => "+",
                BinOp::Sub => "-",
                BinOp::Mul => "\\times",
                BinOp::Eq => "=",
                BinOp::Ne => "\\neq",
                BinOp::Lt => "<",
                BinOp::Le => "\\leq",
            };
            (
                format!("{} {sym} {}", tex_expr(a, p), tex_expr(b, p + 1)),
                p,
            )
        }
        ExprKind::Ctor { name, args } => (
            ctor(name, args.iter().map(|a| tex_expr(a, 0))),
            PREC_POSTFIX + 1,
        ),
        ExprKind::Syntax { parts, .. } => (
            syntax(parts, |s| match &s.kind {
                ExprKind::Syntax { parts, .. } if parts.len() > 1 => format!("({})", tex_expr(s, 0)),
                _ => tex_expr(s, PREC_POSTFIX),
            }),
            PREC_POSTFIX + 1,
        ),
    };
    if own < prec {
        format!("({s})")
    } else {
        s
    }
}
