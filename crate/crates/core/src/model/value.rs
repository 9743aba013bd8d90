use std::fmt;
use std::sync::Arc;

use num_bigint::BigInt;
use thiserror::Error;

use super::ast::{Expr, Pattern, PatternKind, SyntaxPart};
use super::types::{Shape, ShapeItem, TypeExpr};
use crate::span::SourceSpan;

#[derive(Clone)]
pub enum Value {
    Int(BigInt),
    Str(String),
    Bool(bool),
    Symbol(String),
    Pair(Arc<Value>, Arc<Value>),
    /// Union constructor with zero or one payload value.
    Ctor { name: String, payload: Vec<Value> },
    /// Syntax-tree node: its constructor shape and one child per hole.
    Syntax { shape: Arc<Shape>, children: Vec<Value> },
    Closure(Arc<Closure>),
    /// `base[key -> value]`; lookups walk the chain, last update wins.
    Updated(Arc<Updated>),
}

pub struct Closure {
    pub param: String,
    pub param_type: TypeExpr,
    pub body: Arc<Expr>,
    pub env: Env,
}

pub struct Updated {
    pub base: Value,
    pub key: Value,
    pub value: Value,
}

impl Value {
    pub fn int(n: impl Into<BigInt>) -> Value {
        Value::Int(n.into())
    }

    pub fn symbol(s: impl Into<String>) -> Value {
        Value::Symbol(s.into())
    }

    pub fn pair(a: Value, b: Value) -> Value {
        Value::Pair(Arc::new(a), Arc::new(b))
    }

    pub fn syntax(shape: Shape, children: Vec<Value>) -> Value {
        debug_assert_eq!(shape.hole_count(), children.len());
        Value::Syntax {
            shape: Arc::new(shape),
            children,
        }
    }

    pub fn is_function(&self) -> bool {
        matches!(self, Value::Closure(_) | Value::Updated(_))
    }

    pub fn as_int(&self) -> Option<&BigInt> {
        match self {
            Value::Int(n) => Some(n),
            _ => None,
        }
    }

    pub fn as_bool(&self) -> Option<bool> {
        match self {
            Value::Bool(b) => Some(*b),
            _ => None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum RuntimeError {
    #[error("bottom element of type {ty} evaluated")]
    BottomEvaluated { ty: TypeExpr, span: SourceSpan },
    #[error("cannot compare functions for equality")]
    FunctionComparison,
    #[error("unbound variable `{0}`")]
    UnboundVariable(String),
    #[error("division by zero")]
    DivisionByZero,
    /// A value of the wrong shape reached an operation; only possible for
    /// unchecked input.
    #[error("ill-typed value: {0}")]
    IllTyped(String),
}

impl RuntimeError {
    pub fn span(&self) -> Option<&SourceSpan> {
        match self {
            RuntimeError::BottomEvaluated { span, .. } => Some(span),
            _ => None,
        }
    }
}

/// Structural equality on function-free values.
pub fn value_equals(a: &Value, b: &Value) -> Result<bool, RuntimeError> {
    match (a, b) {
        (Value::Closure(_) | Value::Updated(_), _) | (_, Value::Closure(_) | Value::Updated(_)) => {
            Err(RuntimeError::FunctionComparison)
        }
        (Value::Int(x), Value::Int(y)) => Ok(x == y),
        (Value::Str(x), Value::Str(y)) => Ok(x == y),
        (Value::Bool(x), Value::Bool(y)) => Ok(x == y),
        (Value::Symbol(x), Value::Symbol(y)) => Ok(x == y),
        (Value::Pair(a1, a2), Value::Pair(b1, b2)) => {
            Ok(value_equals(a1, b1)? && value_equals(a2, b2)?)
        }
        (Value::Ctor { name: n1, payload: p1 }, Value::Ctor { name: n2, payload: p2 }) => {
            if n1 != n2 || p1.len() != p2.len() {
                return Ok(false);
            }
            all_equal(p1, p2)
        }
        (
            Value::Syntax { shape: s1, children: c1 },
            Value::Syntax { shape: s2, children: c2 },
        ) => {
            if !(Arc::ptr_eq(s1, s2) || s1 == s2) {
                return Ok(false);
            }
            all_equal(c1, c2)
        }
        _ => Ok(false),
    }
}

fn all_equal(xs: &[Value], ys: &[Value]) -> Result<bool, RuntimeError> {
    for (x, y) in xs.iter().zip(ys) {
        if !value_equals(x, y)? {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Variable bindings produced by pattern matching, in binding order.
#[derive(Clone, Default)]
pub struct Bindings(Vec<(String, Value)>);

impl Bindings {
    pub fn new() -> Bindings {
        Bindings(Vec::new())
    }

    pub fn get(&self, name: &str) -> Option<&Value> {
        self.0.iter().rev().find(|(n, _)| n == name).map(|(_, v)| v)
    }

    pub fn insert(&mut self, name: impl Into<String>, value: Value) {
        self.0.push((name.into(), value));
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&str, &Value)> {
        self.0.iter().map(|(n, v)| (n.as_str(), v))
    }

    /// Same variables bound to equal values, ignoring order.
    pub fn same_as(&self, other: &Bindings) -> Result<bool, RuntimeError> {
        if self.len() != other.len() {
            return Ok(false);
        }
        for (name, v) in self.iter() {
            match other.get(name) {
                Some(w) if value_equals(v, w)? => {}
                _ => return Ok(false),
            }
        }
        Ok(true)
    }
}

impl FromIterator<(String, Value)> for Bindings {
    fn from_iter<I: IntoIterator<Item = (String, Value)>>(iter: I) -> Self {
        Bindings(iter.into_iter().collect())
    }
}

impl fmt::Debug for Bindings {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_map().entries(self.0.iter().map(|(n, v)| (n, v))).finish()
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum InstantiateError {
    #[error("pattern variable `{0}` is not bound")]
    UnboundPatternVariable(String),
    #[error("a wildcard denotes no particular value")]
    Wildcard,
}

/// The value a pattern denotes when its variables take the given values.
pub fn instantiate(pat: &Pattern, bindings: &Bindings) -> Result<Value, InstantiateError> {
    Ok(match &pat.kind {
        PatternKind::Var(v) => bindings
            .get(v)
            .cloned()
            .ok_or_else(|| InstantiateError::UnboundPatternVariable(v.clone()))?,
        PatternKind::Wildcard => return Err(InstantiateError::Wildcard),
        PatternKind::Int(n) => Value::Int(n.clone()),
        PatternKind::Str(s) => Value::Str(s.clone()),
        PatternKind::Bool(b) => Value::Bool(*b),
        PatternKind::Symbol(s) => Value::Symbol(s.clone()),
        PatternKind::Pair(a, b) => Value::pair(instantiate(a, bindings)?, instantiate(b, bindings)?),
        PatternKind::Ctor { name, args } => Value::Ctor {
            name: name.clone(),
            payload: args
                .iter()
                .map(|a| instantiate(a, bindings))
                .collect::<Result<_, _>>()?,
        },
        PatternKind::Syntax { parts, shape } => Value::Syntax {
            shape: shape.clone(),
            children: parts
                .iter()
                .filter_map(|p| match p {
                    SyntaxPart::Sub(sub) => Some(instantiate(sub, bindings)),
                    SyntaxPart::Terminal(_) => None,
                })
                .collect::<Result<_, _>>()?,
        },
    })
}

/// Persistent scope chain. Extending never mutates an existing
/// environment, so closures capture snapshots by cloning.
#[derive(Clone, Default)]
pub struct Env(Option<Arc<Frame>>);

struct Frame {
    name: String,
    value: Value,
    next: Env,
}

impl Env {
    pub fn new() -> Env {
        Env(None)
    }

    pub fn extend(&self, name: impl Into<String>, value: Value) -> Env {
        Env(Some(Arc::new(Frame {
            name: name.into(),
            value,
            next: self.clone(),
        })))
    }

    pub fn extend_all(&self, bindings: &Bindings) -> Env {
        bindings
            .iter()
            .fold(self.clone(), |env, (n, v)| env.extend(n, v.clone()))
    }

    pub fn lookup(&self, name: &str) -> Option<&Value> {
        let mut cur = &self.0;
        while let Some(frame) = cur {
            if frame.name == name {
                return Some(&frame.value);
            }
            cur = &frame.next.0;
        }
        None
    }
}

impl fmt::Display for Value {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Value::Int(n) => write!(f, "{n}"),
            Value::Str(s) => write!(f, "{s:?}"),
            Value::Bool(b) => write!(f, "{b}"),
            Value::Symbol(s) => write!(f, "`{s}`"),
            Value::Pair(a, b) => write!(f, "({a}, {b})"),
            Value::Ctor { name, payload } => {
                f.write_str(name)?;
                if let Some(p) = payload.first() {
                    match p {
                        Value::Pair(..) => write!(f, "{p}")?,
                        _ => write!(f, "({p})")?,
                    }
                }
                Ok(())
            }
            Value::Syntax { shape, children } => {
                f.write_str("{")?;
                let mut kids = children.iter();
                for (i, item) in shape.0.iter().enumerate() {
                    if i > 0 {
                        f.write_str(" ")?;
                    }
                    match item {
                        ShapeItem::Terminal(t) => write!(f, "'{t}'")?,
                        ShapeItem::Hole => match kids.next() {
                            Some(Value::Pair(a, b)) => write!(f, "({a}, {b})")?,
                            Some(v) => write!(f, "{v}")?,
                            None => f.write_str("_")?,
                        },
                    }
                }
                f.write_str("}")
            }
            Value::Closure(c) => write!(f, "<closure {} : {}>", c.param, c.param_type),
            Value::Updated(u) => write!(f, "{}[{} -> {}]", u.base, u.key, u.value),
        }
    }
}

impl fmt::Debug for Value {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}
