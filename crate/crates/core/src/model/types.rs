use std::fmt;

use crate::span::SourceSpan;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum BasicKind {
    Int,
    String,
    Bool,
    Symbol,
}

impl BasicKind {
    pub fn name(self) -> &'static str {
        match self {
            BasicKind::Int => "Int",
            BasicKind::String => "String",
            BasicKind::Bool => "Bool",
            BasicKind::Symbol => "Symbol",
        }
    }

    pub fn from_name(name: &str) -> Option<BasicKind> {
        match name {
            "Int" => Some(BasicKind::Int),
            "String" => Some(BasicKind::String),
            "Bool" => Some(BasicKind::Bool),
            "Symbol" => Some(BasicKind::Symbol),
            _ => None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum TypeExpr {
    Basic(BasicKind),
    Product(Box<TypeExpr>, Box<TypeExpr>),
    Arrow(Box<TypeExpr>, Box<TypeExpr>),
    /// Reference to a domain or syntax definition by name.
    Named(String),
}

impl TypeExpr {
    pub fn product(left: TypeExpr, right: TypeExpr) -> TypeExpr {
        TypeExpr::Product(Box::new(left), Box::new(right))
    }

    pub fn arrow(domain: TypeExpr, codomain: TypeExpr) -> TypeExpr {
        TypeExpr::Arrow(Box::new(domain), Box::new(codomain))
    }

    pub fn named(name: impl Into<String>) -> TypeExpr {
        TypeExpr::Named(name.into())
    }

    pub fn as_basic(&self) -> Option<BasicKind> {
        match self {
            TypeExpr::Basic(k) => Some(*k),
            _ => None,
        }
    }

    /// Names referenced anywhere inside this type, in left-to-right order.
    pub fn referenced_names(&self) -> Vec<&str> {
        let mut out = Vec::new();
        self.collect_names(&mut out);
        out
    }

    fn collect_names<'a>(&'a self, out: &mut Vec<&'a str>) {
        match self {
            TypeExpr::Basic(_) => {}
            TypeExpr::Product(l, r) | TypeExpr::Arrow(l, r) => {
                l.collect_names(out);
                r.collect_names(out);
            }
            TypeExpr::Named(n) => out.push(n),
        }
    }

    /// Number of right-nested product components (`A * B * C` has 3).
    pub fn product_width(&self) -> usize {
        match self {
            TypeExpr::Product(_, r) => 1 + r.product_width(),
            _ => 1,
        }
    }

    fn fmt_prec(&self, f: &mut fmt::Formatter<'_>, prec: u8) -> fmt::Result {
        match self {
            TypeExpr::Basic(k) => f.write_str(k.name()),
            TypeExpr::Named(n) => f.write_str(n),
            TypeExpr::Arrow(a, b) => {
                if prec > 0 {
                    f.write_str("(")?;
                }
                a.fmt_prec(f, 1)?;
                f.write_str(" -> ")?;
                b.fmt_prec(f, 0)?;
                if prec > 0 {
                    f.write_str(")")?;
                }
                Ok(())
            }
            TypeExpr::Product(a, b) => {
                if prec > 1 {
                    f.write_str("(")?;
                }
                a.fmt_prec(f, 2)?;
                f.write_str(" * ")?;
                b.fmt_prec(f, 1)?;
                if prec > 1 {
                    f.write_str(")")?;
                }
                Ok(())
            }
        }
    }
}

impl fmt::Display for TypeExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.fmt_prec(f, 0)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Constructor {
    pub name: String,
    pub payload: Option<TypeExpr>,
    pub span: SourceSpan,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum DomainBody {
    Alias(TypeExpr),
    Union(Vec<Constructor>),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DomainDef {
    pub name: String,
    pub body: DomainBody,
    pub span: SourceSpan,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ProductionItem {
    Terminal(String),
    Hole(TypeExpr),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Production {
    pub items: Vec<ProductionItem>,
    pub span: SourceSpan,
}

impl Production {
    pub fn shape(&self) -> Shape {
        Shape(
            self.items
                .iter()
                .map(|item| match item {
                    ProductionItem::Terminal(t) => ShapeItem::Terminal(t.clone()),
                    ProductionItem::Hole(_) => ShapeItem::Hole,
                })
                .collect(),
        )
    }

    pub fn holes(&self) -> impl Iterator<Item = &TypeExpr> {
        self.items.iter().filter_map(|item| match item {
            ProductionItem::Hole(t) => Some(t),
            ProductionItem::Terminal(_) => None,
        })
    }

    pub fn terminal_count(&self) -> usize {
        self.items.len() - self.holes().count()
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SyntaxDef {
    pub name: String,
    pub productions: Vec<Production>,
    pub span: SourceSpan,
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum ShapeItem {
    Terminal(String),
    Hole,
}

/// Identity of a syntax constructor: its terminal sequence with holes at
/// domain positions, e.g. `_ '+' _`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Shape(pub Vec<ShapeItem>);

impl Shape {
    pub fn hole_count(&self) -> usize {
        self.0.iter().filter(|i| matches!(i, ShapeItem::Hole)).count()
    }

    pub fn terminal_count(&self) -> usize {
        self.0.len() - self.hole_count()
    }
}

impl fmt::Display for Shape {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, item) in self.0.iter().enumerate() {
            if i > 0 {
                f.write_str(" ")?;
            }
            match item {
                ShapeItem::Terminal(t) => write!(f, "'{t}'")?,
                ShapeItem::Hole => f.write_str("_")?,
            }
        }
        Ok(())
    }
}
