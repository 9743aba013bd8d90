use std::collections::{BTreeMap, HashMap, HashSet};

use crate::diag::{Code, Diagnostic, Phase};
use crate::model::*;
use crate::span::SourceSpan;

#[derive(Debug, Clone)]
pub enum DomainEntry {
    Alias(TypeExpr),
    Union(Vec<Constructor>),
    Syntax(SyntaxDef),
}

#[derive(Debug, Clone)]
pub struct ConstructorInfo {
    pub owner: String,
    pub payload: Option<TypeExpr>,
    pub span: SourceSpan,
}

#[derive(Debug, Clone)]
pub struct ProductionInfo {
    pub owner: String,
    pub production: Production,
}

impl ProductionInfo {
    pub fn holes(&self) -> Vec<&TypeExpr> {
        self.production.holes().collect()
    }
}

/// Resolved domain and syntax definitions together with the global
/// constructor namespace.
#[derive(Debug, Clone, Default)]
pub struct DomainTable {
    pub entries: BTreeMap<String, DomainEntry>,
    pub constructors: BTreeMap<String, ConstructorInfo>,
    pub productions: HashMap<Shape, ProductionInfo>,
    /// Aliases that take part in a cycle; never expanded.
    cyclic: HashSet<String>,
}

impl DomainTable {
    pub fn contains(&self, name: &str) -> bool {
        self.entries.contains_key(name)
    }

    pub fn constructor(&self, name: &str) -> Option<&ConstructorInfo> {
        self.constructors.get(name)
    }

    pub fn production(&self, shape: &Shape) -> Option<&ProductionInfo> {
        self.productions.get(shape)
    }

    pub fn syntax(&self, name: &str) -> Option<&SyntaxDef> {
        match self.entries.get(name) {
            Some(DomainEntry::Syntax(s)) => Some(s),
            _ => None,
        }
    }

    /// Expands aliases until the head is a basic type, a product, an arrow
    /// or a nominal (union/syntax/unknown) name.
    pub fn normalize(&self, t: &TypeExpr) -> TypeExpr {
        match t {
            TypeExpr::Basic(_) => t.clone(),
            TypeExpr::Product(a, b) => TypeExpr::product(self.normalize(a), self.normalize(b)),
            TypeExpr::Arrow(a, b) => TypeExpr::arrow(self.normalize(a), self.normalize(b)),
            TypeExpr::Named(n) => match self.entries.get(n) {
                Some(DomainEntry::Alias(body)) if !self.cyclic.contains(n) => self.normalize(body),
                _ => t.clone(),
            },
        }
    }

    pub fn same_type(&self, a: &TypeExpr, b: &TypeExpr) -> bool {
        a == b || self.normalize(a) == self.normalize(b)
    }

    /// Whether values of this type can be compared structurally: no arrow
    /// occurs anywhere inside it, including through union payloads and
    /// syntax holes.
    pub fn is_function_free(&self, t: &TypeExpr) -> bool {
        let mut visiting = HashSet::new();
        self.function_free(t, &mut visiting)
    }

    fn function_free(&self, t: &TypeExpr, visiting: &mut HashSet<String>) -> bool {
        match self.normalize(t) {
            TypeExpr::Basic(_) => true,
            TypeExpr::Arrow(..) => false,
            TypeExpr::Product(a, b) => self.function_free(&a, visiting) && self.function_free(&b, visiting),
            TypeExpr::Named(n) => {
                if !visiting.insert(n.clone()) {
                    return true;
                }
                match self.entries.get(&n) {
                    Some(DomainEntry::Union(ctors)) => ctors
                        .iter()
                        .filter_map(|c| c.payload.as_ref())
                        .all(|p| self.function_free(p, visiting)),
                    Some(DomainEntry::Syntax(s)) => s
                        .productions
                        .iter()
                        .flat_map(|p| p.holes())
                        .all(|h| self.function_free(h, visiting)),
                    _ => true,
                }
            }
        }
    }

    /// Names in `t` that refer to no domain or syntax definition.
    pub fn free_names<'t>(&self, t: &'t TypeExpr) -> Vec<&'t str> {
        t.referenced_names()
            .into_iter()
            .filter(|n| !self.contains(n))
            .collect()
    }
}

/// Domain analysis: resolves names, rejects recursive aliases and checks
/// constructor uniqueness. Returns the table together with diagnostics so
/// that type analysis can continue after domain errors.
pub fn build_domain_table(spec: &Specification) -> (DomainTable, Vec<Diagnostic>) {
    let mut table = DomainTable::default();
    let mut diags = Vec::new();
    let mut first_span: HashMap<&str, &SourceSpan> = HashMap::new();

    let note_duplicate = |first_span: &HashMap<&str, &SourceSpan>,
                          name: &str,
                          span: &SourceSpan,
                          diags: &mut Vec<Diagnostic>| {
        if let Some(prev) = first_span.get(name) {
            diags.push(
                Diagnostic::error(
                    Phase::Domain,
                    Code::DuplicateDefinition,
                    span.clone(),
                    format!("duplicate definition of `{name}`"),
                )
                .with_note("previously defined here", Some((*prev).clone())),
            );
            false
        } else {
            true
        }
    };

    let mut accepted = vec![false; spec.domains.len()];
    for (i, d) in spec.domains.iter().enumerate() {
        if note_duplicate(&first_span, &d.name, &d.span, &mut diags) {
            accepted[i] = true;
            first_span.insert(&d.name, &d.span);
            let entry = match &d.body {
                DomainBody::Alias(t) => DomainEntry::Alias(t.clone()),
                DomainBody::Union(ctors) => DomainEntry::Union(ctors.clone()),
            };
            table.entries.insert(d.name.clone(), entry);
        }
    }
    for s in &spec.syntaxes {
        if note_duplicate(&first_span, &s.name, &s.span, &mut diags) {
            first_span.insert(&s.name, &s.span);
            table.entries.insert(s.name.clone(), DomainEntry::Syntax(s.clone()));
        }
    }

    // Free domain variables.
    let report_free = |t: &TypeExpr, span: &SourceSpan, diags: &mut Vec<Diagnostic>| {
        for name in table.free_names(t) {
            diags.push(Diagnostic::error(
                Phase::Domain,
                Code::FreeDomainVariable,
                span.clone(),
                format!("unknown domain `{name}`"),
            ));
        }
    };
    for d in &spec.domains {
        match &d.body {
            DomainBody::Alias(t) => report_free(t, &d.span, &mut diags),
            DomainBody::Union(ctors) => {
                for c in ctors {
                    if let Some(p) = &c.payload {
                        report_free(p, &c.span, &mut diags);
                    }
                }
            }
        }
    }
    for s in &spec.syntaxes {
        for p in &s.productions {
            for h in p.holes() {
                report_free(h, &p.span, &mut diags);
            }
        }
    }

    check_alias_cycles(spec, &mut table, &mut diags);

    // Union constructors share one global namespace.
    for (d, _) in spec.domains.iter().zip(&accepted).filter(|(_, ok)| **ok) {
        let DomainBody::Union(ctors) = &d.body else {
            continue;
        };
        for c in ctors {
            if let Some(prev) = table.constructors.get(&c.name) {
                diags.push(
                    Diagnostic::error(
                        Phase::Domain,
                        Code::DuplicateConstructor,
                        c.span.clone(),
                        format!("constructor `{}` is already defined", c.name),
                    )
                    .with_note(format!("first defined in `{}`", prev.owner), Some(prev.span.clone())),
                );
                continue;
            }
            table.constructors.insert(
                c.name.clone(),
                ConstructorInfo {
                    owner: d.name.clone(),
                    payload: c.payload.clone(),
                    span: c.span.clone(),
                },
            );
        }
    }

    // Syntax constructors are identified by shape, also globally.
    for s in &spec.syntaxes {
        for p in &s.productions {
            let shape = p.shape();
            if let Some(prev) = table.productions.get(&shape) {
                let diag = if shape.terminal_count() == 0 {
                    Diagnostic::error(
                        Phase::Domain,
                        Code::AmbiguousBareProduction,
                        p.span.clone(),
                        format!(
                            "production without terminals has {} hole(s), like another production without terminals",
                            shape.hole_count()
                        ),
                    )
                } else {
                    Diagnostic::error(
                        Phase::Domain,
                        Code::DuplicateConstructor,
                        p.span.clone(),
                        format!("syntax constructor `{shape}` is already defined"),
                    )
                };
                diags.push(diag.with_note(
                    format!("conflicts with this production of `{}`", prev.owner),
                    Some(prev.production.span.clone()),
                ));
                continue;
            }
            table.productions.insert(
                shape,
                ProductionInfo {
                    owner: s.name.clone(),
                    production: p.clone(),
                },
            );
        }
    }

    (table, diags)
}

/// Aliases may not refer to themselves, directly or through other aliases.
fn check_alias_cycles(spec: &Specification, table: &mut DomainTable, diags: &mut Vec<Diagnostic>) {
    let alias_deps = |name: &str| -> Vec<String> {
        match table.entries.get(name) {
            Some(DomainEntry::Alias(t)) => t
                .referenced_names()
                .into_iter()
                .filter(|n| matches!(table.entries.get(*n), Some(DomainEntry::Alias(_))))
                .map(str::to_string)
                .collect(),
            _ => Vec::new(),
        }
    };

    #[derive(Clone, Copy, PartialEq)]
    enum Mark {
        Visiting,
        Done,
    }
    let mut marks: HashMap<String, Mark> = HashMap::new();
    let mut cyclic: HashSet<String> = HashSet::new();
    let mut stack: Vec<String> = Vec::new();

    fn visit(
        name: &str,
        deps: &dyn Fn(&str) -> Vec<String>,
        marks: &mut HashMap<String, Mark>,
        stack: &mut Vec<String>,
        cycles: &mut Vec<Vec<String>>,
    ) {
        match marks.get(name) {
            Some(Mark::Done) => return,
            Some(Mark::Visiting) => {
                let start = stack.iter().position(|n| n == name).expect("on stack");
                let mut cycle = stack[start..].to_vec();
                cycle.push(name.to_string());
                cycles.push(cycle);
                return;
            }
            None => {}
        }
        marks.insert(name.to_string(), Mark::Visiting);
        stack.push(name.to_string());
        for d in deps(name) {
            visit(&d, deps, marks, stack, cycles);
        }
        stack.pop();
        marks.insert(name.to_string(), Mark::Done);
    }

    let mut cycles = Vec::new();
    for d in &spec.domains {
        if matches!(d.body, DomainBody::Alias(_)) {
            visit(&d.name, &alias_deps, &mut marks, &mut stack, &mut cycles);
        }
    }
    for cycle in cycles {
        let head = &cycle[0];
        let span = spec
            .domains
            .iter()
            .find(|d| &d.name == head)
            .map(|d| d.span.clone())
            .unwrap_or_else(SourceSpan::synthetic);
        diags.push(
            Diagnostic::error(
                Phase::Domain,
                Code::RecursiveAlias,
                span,
                format!("recursive alias: {}", cycle.join(" -> ")),
            )
            .with_note("only union domains may be inductive; use `{ ... }`", None),
        );
        cyclic.extend(cycle);
    }
    table.cyclic = cyclic;
}

pub fn check_domains(spec: &Specification) -> Result<DomainTable, Vec<Diagnostic>> {
    let (table, diags) = build_domain_table(spec);
    if diags.is_empty() {
        Ok(table)
    } else {
        Err(diags)
    }
}
