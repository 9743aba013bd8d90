use std::sync::Arc;

use num_bigint::BigInt;

use super::types::{DomainDef, Shape, ShapeItem, SyntaxDef, TypeExpr};
use crate::span::SourceSpan;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum BinOp {
    Add,
    Sub,
    Mul,
    Eq,
    Ne,
    Lt,
    Le,
}

impl BinOp {
    pub fn symbol(self) -> &'static str {
        match self {
            BinOp::Add => "+",
            BinOp::Sub => "-",
            BinOp::Mul => "*",
            BinOp::Eq => "==",
            BinOp::Ne => "!=",
            BinOp::Lt => "<",
            BinOp::Le => "<=",
        }
    }

    pub fn is_arithmetic(self) -> bool {
        matches!(self, BinOp::Add | BinOp::Sub | BinOp::Mul)
    }

    /// Binding strength; higher binds tighter.
    pub fn precedence(self) -> u8 {
        match self {
            BinOp::Eq | BinOp::Ne | BinOp::Lt | BinOp::Le => 1,
            BinOp::Add | BinOp::Sub => 2,
            BinOp::Mul => 3,
        }
    }
}

/// One element of a syntax expression or syntax pattern: either a quoted
/// terminal or a sub-term placed in a hole.
#[derive(Debug, Clone, PartialEq)]
pub enum SyntaxPart<T> {
    Terminal(String),
    Sub(T),
}

pub fn shape_of<T>(parts: &[SyntaxPart<T>]) -> Shape {
    Shape(
        parts
            .iter()
            .map(|p| match p {
                SyntaxPart::Terminal(t) => ShapeItem::Terminal(t.clone()),
                SyntaxPart::Sub(_) => ShapeItem::Hole,
            })
            .collect(),
    )
}

pub fn sub_terms<T>(parts: &[SyntaxPart<T>]) -> impl Iterator<Item = &T> {
    parts.iter().filter_map(|p| match p {
        SyntaxPart::Sub(t) => Some(t),
        SyntaxPart::Terminal(_) => None,
    })
}

#[derive(Debug, Clone, PartialEq)]
pub struct Expr {
    pub kind: ExprKind,
    pub span: SourceSpan,
}

#[derive(Debug, Clone, PartialEq)]
pub enum ExprKind {
    Int(BigInt),
    Str(String),
    Bool(bool),
    Symbol(String),
    Var(String),
    Lambda {
        param: String,
        param_type: TypeExpr,
        body: Arc<Expr>,
    },
    Apply(Box<Expr>, Box<Expr>),
    /// The everywhere-undefined element, annotated with its type.
    Bottom(TypeExpr),
    Update {
        func: Box<Expr>,
        key: Box<Expr>,
        value: Box<Expr>,
    },
    Pair(Box<Expr>, Box<Expr>),
    BinOp(BinOp, Box<Expr>, Box<Expr>),
    Ctor {
        name: String,
        args: Vec<Expr>,
    },
    Syntax {
        parts: Vec<SyntaxPart<Expr>>,
        shape: Arc<Shape>,
    },
}

impl Expr {
    pub fn new(kind: ExprKind, span: SourceSpan) -> Expr {
        Expr { kind, span }
    }

    pub fn syntax(parts: Vec<SyntaxPart<Expr>>, span: SourceSpan) -> Expr {
        let shape = Arc::new(shape_of(&parts));
        Expr::new(ExprKind::Syntax { parts, shape }, span)
    }

    /// Direct sub-expressions in evaluation order.
    pub fn children(&self) -> Vec<&Expr> {
        match &self.kind {
            ExprKind::Int(_)
            | ExprKind::Str(_)
            | ExprKind::Bool(_)
            | ExprKind::Symbol(_)
            | ExprKind::Var(_)
            | ExprKind::Bottom(_) => vec![],
            ExprKind::Lambda { body, .. } => vec![body],
            ExprKind::Apply(a, b) | ExprKind::Pair(a, b) | ExprKind::BinOp(_, a, b) => vec![a, b],
            ExprKind::Update { func, key, value } => vec![func, key, value],
            ExprKind::Ctor { args, .. } => args.iter().collect(),
            ExprKind::Syntax { parts, .. } => sub_terms(parts).collect(),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Pattern {
    pub kind: PatternKind,
    pub span: SourceSpan,
}

#[derive(Debug, Clone, PartialEq)]
pub enum PatternKind {
    Var(String),
    Wildcard,
    Int(BigInt),
    Str(String),
    Bool(bool),
    Symbol(String),
    Pair(Box<Pattern>, Box<Pattern>),
    Ctor {
        name: String,
        args: Vec<Pattern>,
    },
    Syntax {
        parts: Vec<SyntaxPart<Pattern>>,
        shape: Arc<Shape>,
    },
}

impl Pattern {
    pub fn new(kind: PatternKind, span: SourceSpan) -> Pattern {
        Pattern { kind, span }
    }

    pub fn syntax(parts: Vec<SyntaxPart<Pattern>>, span: SourceSpan) -> Pattern {
        let shape = Arc::new(shape_of(&parts));
        Pattern::new(PatternKind::Syntax { parts, shape }, span)
    }

    pub fn children(&self) -> Vec<&Pattern> {
        match &self.kind {
            PatternKind::Pair(a, b) => vec![a, b],
            PatternKind::Ctor { args, .. } => args.iter().collect(),
            PatternKind::Syntax { parts, .. } => sub_terms(parts).collect(),
            _ => vec![],
        }
    }

    /// Variables bound by this pattern, left to right.
    pub fn variables(&self) -> Vec<&str> {
        let mut out = Vec::new();
        self.collect_vars(&mut out);
        out
    }

    fn collect_vars<'a>(&'a self, out: &mut Vec<&'a str>) {
        if let PatternKind::Var(v) = &self.kind {
            out.push(v);
        }
        for c in self.children() {
            c.collect_vars(out);
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum Premise {
    Transition {
        /// Target system; equal to the enclosing system for a bare `==>`.
        target: String,
        explicit_target: bool,
        antecedent: Option<Expr>,
        initial: Expr,
        result: Pattern,
        span: SourceSpan,
    },
    SideCondition {
        cond: Expr,
        span: SourceSpan,
    },
    Local {
        pattern: Pattern,
        value: Expr,
        span: SourceSpan,
    },
}

impl Premise {
    pub fn span(&self) -> &SourceSpan {
        match self {
            Premise::Transition { span, .. }
            | Premise::SideCondition { span, .. }
            | Premise::Local { span, .. } => span,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Rule {
    pub label: String,
    pub antecedent: Option<Pattern>,
    pub initial: Pattern,
    pub result: Expr,
    pub premises: Vec<Premise>,
    pub span: SourceSpan,
}

impl Rule {
    pub fn transition_count(&self) -> usize {
        self.premises
            .iter()
            .filter(|p| matches!(p, Premise::Transition { .. }))
            .count()
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct TransitionSystem {
    pub name: String,
    pub antecedent_type: Option<TypeExpr>,
    pub initial_type: TypeExpr,
    pub final_type: TypeExpr,
    pub rules: Vec<Rule>,
    pub span: SourceSpan,
}

#[derive(Debug, Clone, PartialEq)]
pub struct LetDef {
    pub name: String,
    pub value: Expr,
    pub span: SourceSpan,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Evaluation {
    pub antecedent: Option<Expr>,
    pub initial: Expr,
    pub system: String,
    pub span: SourceSpan,
}

#[derive(Debug, Clone, PartialEq)]
pub enum Definition {
    Domain(DomainDef),
    Syntax(SyntaxDef),
    Let(LetDef),
    System(TransitionSystem),
}

impl Definition {
    pub fn name(&self) -> &str {
        match self {
            Definition::Domain(d) => &d.name,
            Definition::Syntax(s) => &s.name,
            Definition::Let(l) => &l.name,
            Definition::System(s) => &s.name,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct Specification {
    pub domains: Vec<DomainDef>,
    pub syntaxes: Vec<SyntaxDef>,
    pub lets: Vec<LetDef>,
    pub systems: Vec<TransitionSystem>,
    pub evaluations: Vec<Evaluation>,
}

impl Specification {
    pub fn push(&mut self, def: Definition) {
        match def {
            Definition::Domain(d) => self.domains.push(d),
            Definition::Syntax(s) => self.syntaxes.push(s),
            Definition::Let(l) => self.lets.push(l),
            Definition::System(s) => self.systems.push(s),
        }
    }

    pub fn system(&self, name: &str) -> Option<&TransitionSystem> {
        self.systems.iter().find(|s| s.name == name)
    }

    pub fn rule_count(&self) -> usize {
        self.systems.iter().map(|s| s.rules.len()).sum()
    }

    /// Appends every definition and evaluation of `other`.
    pub fn extend(&mut self, other: Specification) {
        self.domains.extend(other.domains);
        self.syntaxes.extend(other.syntaxes);
        self.lets.extend(other.lets);
        self.systems.extend(other.systems);
        self.evaluations.extend(other.evaluations);
    }
}
