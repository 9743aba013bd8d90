//! Random programs, expressions and pattern/value pairs for the property
//! suites. Shared between this crate's tests and the CLI acceptance tests.
#![allow(dead_code)]

use std::fmt::Write;

use nasl_core::analysis::DomainTable;
use nasl_core::{Bindings, Pattern, PatternKind, Shape, ShapeItem, SourceSpan, TypeExpr, Value};
use proptest::prelude::*;
use proptest::test_runner::{Config, RngAlgorithm, RngSeed};

/// Seed used by every property suite so runs are reproducible.
pub const SEED: u64 = 0x6e61_736c_2024;
pub const CASES: u32 = 1000;

pub fn config() -> Config {
    Config {
        cases: CASES,
        rng_algorithm: RngAlgorithm::ChaCha,
        rng_seed: RngSeed::Fixed(SEED),
        failure_persistence: None,
        ..Config::default()
    }
}

pub const VARS: [&str; 3] = ["x", "y", "z"];

#[derive(Debug, Clone)]
pub enum AExp {
    Num(i64),
    Var(usize),
    Add(Box<AExp>, Box<AExp>),
}

#[derive(Debug, Clone)]
pub enum Stm {
    Assign(usize, AExp),
    Seq(Box<Stm>, Box<Stm>),
    If(AExp, Box<Stm>, Box<Stm>),
}

pub fn aexp() -> impl Strategy<Value = AExp> {
    let leaf = prop_oneof![(-5i64..20).prop_map(AExp::Num), (0..VARS.len()).prop_map(AExp::Var)];
    leaf.prop_recursive(3, 8, 2, |inner| {
        (inner.clone(), inner).prop_map(|(a, b)| AExp::Add(Box::new(a), Box::new(b)))
    })
}

/// Assignment sequences of 1..=`max` statements.
pub fn straight_line(max: usize) -> impl Strategy<Value = Vec<(usize, AExp)>> {
    prop::collection::vec((0..VARS.len(), aexp()), 1..=max)
}

/// Statements with conditionals, for the `imp_if` fixture.
pub fn stm() -> impl Strategy<Value = Stm> {
    let leaf = (0..VARS.len(), aexp()).prop_map(|(v, e)| Stm::Assign(v, e));
    leaf.prop_recursive(4, 12, 3, |inner| {
        prop_oneof![
            (inner.clone(), inner.clone()).prop_map(|(a, b)| Stm::Seq(Box::new(a), Box::new(b))),
            (aexp(), inner.clone(), inner).prop_map(|(g, a, b)| Stm::If(g, Box::new(a), Box::new(b))),
        ]
    })
}

pub fn seq(stmts: &[(usize, AExp)]) -> Stm {
    let mut it = stmts.iter().rev().map(|(v, e)| Stm::Assign(*v, e.clone()));
    let last = it.next().expect("at least one statement");
    it.fold(last, |acc, s| Stm::Seq(Box::new(s), Box::new(acc)))
}

pub fn aexp_src(e: &AExp) -> String {
    match e {
        AExp::Num(n) => format!("{{'#' {n}}}"),
        AExp::Var(v) => format!("{{`{}`}}", VARS[*v]),
        AExp::Add(a, b) => format!("{{{} '+' {}}}", aexp_src(a), aexp_src(b)),
    }
}

pub fn stm_src(s: &Stm) -> String {
    match s {
        Stm::Assign(v, e) => format!("{{`{}` '=' {}}}", VARS[*v], aexp_src(e)),
        Stm::Seq(a, b) => format!("{{{} ';' {}}}", stm_src(a), stm_src(b)),
        Stm::If(g, a, b) => format!("{{'if' {} 'then' {} 'else' {}}}", aexp_src(g), stm_src(a), stm_src(b)),
    }
}

/// An environment expression binding every variable to the given values.
pub fn env_src(init: &[i64; 3]) -> String {
    let mut s = "empty".to_string();
    for (v, n) in VARS.iter().zip(init) {
        let _ = write!(s, "[`{v}` -> {n}]");
    }
    s
}

// ----- expressions with a known static type -----

#[derive(Debug, Clone, PartialEq)]
pub enum Ty {
    Int,
    Bool,
    Sym,
    Pair(Box<Ty>, Box<Ty>),
    /// Symbol -> Int
    Env,
    /// The Imp `Exp` syntax domain.
    Exp,
}

impl Ty {
    pub fn to_type(&self) -> TypeExpr {
        use nasl_core::BasicKind;
        match self {
            Ty::Int => TypeExpr::Basic(BasicKind::Int),
            Ty::Bool => TypeExpr::Basic(BasicKind::Bool),
            Ty::Sym => TypeExpr::Basic(BasicKind::Symbol),
            Ty::Pair(a, b) => TypeExpr::product(a.to_type(), b.to_type()),
            Ty::Env => TypeExpr::arrow(TypeExpr::Basic(BasicKind::Symbol), TypeExpr::Basic(BasicKind::Int)),
            Ty::Exp => TypeExpr::named("Exp"),
        }
    }
}

pub fn ty() -> impl Strategy<Value = Ty> {
    let leaf = prop_oneof![Just(Ty::Int), Just(Ty::Bool), Just(Ty::Sym), Just(Ty::Env), Just(Ty::Exp)];
    leaf.prop_recursive(2, 4, 2, |inner| {
        (inner.clone(), inner).prop_map(|(a, b)| Ty::Pair(Box::new(a), Box::new(b)))
    })
}

fn sym() -> impl Strategy<Value = String> {
    prop::sample::select(vec!["a", "b", "c"]).prop_map(|s| format!("`{s}`"))
}

/// Source text of an expression of type `t`. `int_var` is a lambda-bound
/// Int variable in scope, if any.
pub fn expr_of(t: Ty, depth: u32, int_var: Option<&'static str>) -> BoxedStrategy<String> {
    let leaf: BoxedStrategy<String> = match &t {
        Ty::Int => match int_var {
            Some(v) => prop_oneof![(-50i64..50).prop_map(|n| n.to_string()), Just(v.to_string())].boxed(),
            None => (-50i64..50).prop_map(|n| n.to_string()).boxed(),
        },
        Ty::Bool => any::<bool>().prop_map(|b| b.to_string()).boxed(),
        Ty::Sym => sym().boxed(),
        Ty::Env => prop_oneof![Just("empty".to_string()), Just("-|Symbol -> Int|".to_string())].boxed(),
        Ty::Exp => (0i64..9).prop_map(|n| format!("{{'#' {n}}}")).boxed(),
        Ty::Pair(a, b) => (expr_of((**a).clone(), 0, int_var), expr_of((**b).clone(), 0, int_var))
            .prop_map(|(x, y)| format!("({x}, {y})"))
            .boxed(),
    };
    if depth == 0 {
        return leaf;
    }
    let d = depth - 1;
    let rec: BoxedStrategy<String> = match &t {
        Ty::Int => prop_oneof![
            (expr_of(Ty::Int, d, int_var), expr_of(Ty::Int, d, int_var), prop::sample::select(vec!["+", "-", "*"]))
                .prop_map(|(a, b, op)| format!("({a} {op} {b})")),
            (expr_of(Ty::Env, d, int_var), expr_of(Ty::Sym, d, int_var)).prop_map(|(f, s)| format!("({f})({s})")),
            (expr_of(Ty::Int, d, Some("n")), expr_of(Ty::Int, d, int_var))
                .prop_map(|(body, arg)| format!("(\\n : Int . {body})({arg})")),
        ]
        .boxed(),
        Ty::Bool => prop_oneof![
            (expr_of(Ty::Int, d, int_var), expr_of(Ty::Int, d, int_var), prop::sample::select(vec!["<", "<=", "==", "!="]))
                .prop_map(|(a, b, op)| format!("({a} {op} {b})")),
            (expr_of(Ty::Sym, d, int_var), expr_of(Ty::Sym, d, int_var)).prop_map(|(a, b)| format!("({a} == {b})")),
        ]
        .boxed(),
        Ty::Env => prop_oneof![
            (expr_of(Ty::Env, d, int_var), expr_of(Ty::Sym, d, int_var), expr_of(Ty::Int, d, int_var))
                .prop_map(|(f, k, v)| format!("{}[{k} -> {v}]", paren(&f))),
            expr_of(Ty::Int, d, None).prop_map(|body| format!("(\\s : Symbol . {body})")),
        ]
        .boxed(),
        Ty::Exp => prop_oneof![
            expr_of(Ty::Sym, d, int_var).prop_map(|s| format!("{{{s}}}")),
            (expr_of(Ty::Exp, d, int_var), expr_of(Ty::Exp, d, int_var)).prop_map(|(a, b)| format!("{{{a} '+' {b}}}")),
            // Application is not available inside braces, so always parenthesize.
            expr_of(Ty::Int, d, int_var).prop_map(|n| format!("{{'#' ({n})}}")),
        ]
        .boxed(),
        Ty::Sym | Ty::Pair(..) => return leaf,
    };
    prop_oneof![1 => leaf, 2 => rec].boxed()
}

fn paren(s: &str) -> String {
    if s.starts_with('(') || s.chars().all(|c| c.is_alphanumeric()) {
        s.to_string()
    } else {
        format!("({s})")
    }
}

pub fn typed_expr() -> impl Strategy<Value = (Ty, String)> {
    ty().prop_flat_map(|t| expr_of(t.clone(), 3, None).prop_map(move |e| (t.clone(), e)))
}

/// Whether `v` is a value of type `t`. Function values are only checked to
/// be functions.
pub fn inhabits(table: &DomainTable, v: &Value, t: &TypeExpr) -> bool {
    use nasl_core::BasicKind::*;
    match (table.normalize(t), v) {
        (TypeExpr::Basic(Int), Value::Int(_))
        | (TypeExpr::Basic(Bool), Value::Bool(_))
        | (TypeExpr::Basic(String), Value::Str(_))
        | (TypeExpr::Basic(Symbol), Value::Symbol(_)) => true,
        (TypeExpr::Product(a, b), Value::Pair(x, y)) => inhabits(table, x, &a) && inhabits(table, y, &b),
        (TypeExpr::Arrow(..), v) => v.is_function(),
        (TypeExpr::Named(n), Value::Syntax { shape, children }) => match table.production(shape) {
            Some(p) => {
                p.owner == n
                    && p.holes().len() == children.len()
                    && p.holes().into_iter().zip(children).all(|(h, c)| inhabits(table, c, h))
            }
            None => false,
        },
        (TypeExpr::Named(n), Value::Ctor { name, payload }) => match table.constructor(name) {
            Some(info) => {
                info.owner == n
                    && match (&info.payload, payload.as_slice()) {
                        (None, []) => true,
                        (Some(t), [p]) => inhabits(table, p, t),
                        _ => false,
                    }
            }
            None => false,
        },
        _ => false,
    }
}

// ----- pattern/value pairs -----

#[derive(Debug, Clone)]
pub enum PTree {
    Int(i64),
    Sym(String),
    Bool(bool),
    Str(String),
    Pair(Box<PTree>, Box<PTree>),
    /// `'#' _`
    Num(i64),
    /// `_ '+' _`
    Plus(Box<PTree>, Box<PTree>),
    Nil,
    Cons(i64, Box<PTree>),
    /// A variable standing for the whole subtree.
    Var(Box<PTree>),
    Wild(Box<PTree>),
}

pub fn ptree() -> impl Strategy<Value = PTree> {
    let leaf = prop_oneof![
        (-9i64..9).prop_map(PTree::Int),
        sym().prop_map(|s| PTree::Sym(s.trim_matches('`').to_string())),
        any::<bool>().prop_map(PTree::Bool),
        "[a-z]{0,3}".prop_map(PTree::Str),
        (0i64..9).prop_map(PTree::Num),
        Just(PTree::Nil),
    ];
    leaf.prop_recursive(4, 24, 2, |inner| {
        prop_oneof![
            (inner.clone(), inner.clone()).prop_map(|(a, b)| PTree::Pair(Box::new(a), Box::new(b))),
            (inner.clone(), inner.clone()).prop_map(|(a, b)| PTree::Plus(Box::new(a), Box::new(b))),
            ((0i64..9), inner.clone()).prop_map(|(n, t)| PTree::Cons(n, Box::new(t))),
            inner.clone().prop_map(|t| PTree::Var(Box::new(t))),
            inner.prop_map(|t| PTree::Wild(Box::new(t))),
        ]
    })
}

fn shape(items: &[Option<&str>]) -> Shape {
    Shape(
        items
            .iter()
            .map(|i| match i {
                Some(t) => ShapeItem::Terminal(t.to_string()),
                None => ShapeItem::Hole,
            })
            .collect(),
    )
}

/// The value described by a tree, the pattern abstracting its `Var` and
/// `Wild` nodes, and the bindings the pattern's variables must receive.
pub fn realize(t: &PTree) -> (Pattern, Value, Bindings) {
    let mut b = Bindings::new();
    let mut n = 0;
    let (p, v) = realize_in(t, &mut b, &mut n);
    (p, v, b)
}

fn realize_in(t: &PTree, b: &mut Bindings, n: &mut usize) -> (Pattern, Value) {
    let sp = SourceSpan::synthetic;
    let pat = |k| Pattern::new(k, sp());
    match t {
        PTree::Int(i) => (pat(PatternKind::Int((*i).into())), Value::int(*i)),
        PTree::Sym(s) => (pat(PatternKind::Symbol(s.clone())), Value::symbol(s.clone())),
        PTree::Bool(x) => (pat(PatternKind::Bool(*x)), Value::Bool(*x)),
        PTree::Str(s) => (pat(PatternKind::Str(s.clone())), Value::Str(s.clone())),
        PTree::Pair(x, y) => {
            let (px, vx) = realize_in(x, b, n);
            let (py, vy) = realize_in(y, b, n);
            (pat(PatternKind::Pair(Box::new(px), Box::new(py))), Value::pair(vx, vy))
        }
        PTree::Num(i) => {
            let parts = vec![
                nasl_core::SyntaxPart::Terminal("#".into()),
                nasl_core::SyntaxPart::Sub(pat(PatternKind::Int((*i).into()))),
            ];
            (Pattern::syntax(parts, sp()), Value::syntax(shape(&[Some("#"), None]), vec![Value::int(*i)]))
        }
        PTree::Plus(x, y) => {
            let (px, vx) = realize_in(x, b, n);
            let (py, vy) = realize_in(y, b, n);
            let parts = vec![
                nasl_core::SyntaxPart::Sub(px),
                nasl_core::SyntaxPart::Terminal("+".into()),
                nasl_core::SyntaxPart::Sub(py),
            ];
            (Pattern::syntax(parts, sp()), Value::syntax(shape(&[None, Some("+"), None]), vec![vx, vy]))
        }
        PTree::Nil => (
            pat(PatternKind::Ctor { name: "nil".into(), args: vec![] }),
            Value::Ctor { name: "nil".into(), payload: vec![] },
        ),
        PTree::Cons(h, tl) => {
            let (pt, vt) = realize_in(tl, b, n);
            let args = vec![pat(PatternKind::Pair(Box::new(pat(PatternKind::Int((*h).into()))), Box::new(pt)))];
            (
                pat(PatternKind::Ctor { name: "cons".into(), args }),
                Value::Ctor { name: "cons".into(), payload: vec![Value::pair(Value::int(*h), vt)] },
            )
        }
        PTree::Var(inner) => {
            let (_, v) = realize_in(inner, &mut Bindings::new(), &mut 0);
            let name = format!("v{n}");
            *n += 1;
            b.insert(name.clone(), v.clone());
            (pat(PatternKind::Var(name)), v)
        }
        PTree::Wild(inner) => {
            let (_, v) = realize_in(inner, &mut Bindings::new(), &mut 0);
            (pat(PatternKind::Wildcard), v)
        }
    }
}

pub fn has_wildcard(t: &PTree) -> bool {
    match t {
        PTree::Wild(_) => true,
        PTree::Var(_) | PTree::Int(_) | PTree::Sym(_) | PTree::Bool(_) | PTree::Str(_) | PTree::Num(_) | PTree::Nil => false,
        PTree::Pair(a, b) | PTree::Plus(a, b) => has_wildcard(a) || has_wildcard(b),
        PTree::Cons(_, t) => has_wildcard(t),
    }
}
