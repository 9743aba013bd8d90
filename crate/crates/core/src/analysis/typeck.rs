use std::collections::{BTreeMap, HashSet};

use super::domains::DomainTable;
use crate::diag::{Code, Diagnostic, Phase};
use crate::model::*;
use crate::span::SourceSpan;

/// Type signature of a transition system: `antecedent |- initial ==> result`.
#[derive(Debug, Clone, PartialEq)]
pub struct Signature {
    pub antecedent: Option<TypeExpr>,
    pub initial: TypeExpr,
    pub result: TypeExpr,
}

impl std::fmt::Display for Signature {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        if let Some(a) = &self.antecedent {
            write!(f, "{a} |- ")?;
        }
        write!(f, "{} ==> {}", self.initial, self.result)
    }
}

/// Typing environment: let-bound globals, lexically scoped locals and the
/// signatures of all transition systems.
#[derive(Debug, Clone)]
pub struct TypeContext<'a> {
    pub table: &'a DomainTable,
    pub systems: &'a BTreeMap<String, Signature>,
    globals: Vec<(String, TypeExpr)>,
    locals: Vec<(String, TypeExpr)>,
    /// Rule variables whose binding pattern failed to check; uses of them
    /// are not reported again.
    poisoned: HashSet<String>,
}

impl<'a> TypeContext<'a> {
    pub fn new(table: &'a DomainTable, systems: &'a BTreeMap<String, Signature>) -> Self {
        TypeContext {
            table,
            systems,
            globals: Vec::new(),
            locals: Vec::new(),
            poisoned: HashSet::new(),
        }
    }

    pub fn with_globals(mut self, globals: impl IntoIterator<Item = (String, TypeExpr)>) -> Self {
        self.globals.extend(globals);
        self
    }

    pub fn add_global(&mut self, name: impl Into<String>, t: TypeExpr) {
        self.globals.push((name.into(), t));
    }

    pub fn push_local(&mut self, name: impl Into<String>, t: TypeExpr) {
        self.locals.push((name.into(), t));
    }

    pub fn pop_local(&mut self) {
        self.locals.pop();
    }

    pub fn lookup(&self, name: &str) -> Option<&TypeExpr> {
        self.locals
            .iter()
            .rev()
            .chain(self.globals.iter().rev())
            .find(|(n, _)| n == name)
            .map(|(_, t)| t)
    }

    pub fn global(&self, name: &str) -> Option<&TypeExpr> {
        self.globals.iter().rev().find(|(n, _)| n == name).map(|(_, t)| t)
    }
}

fn mismatch(span: &SourceSpan, expected: &TypeExpr, found: &TypeExpr, table: &DomainTable) -> Diagnostic {
    let mut d = Diagnostic::error(
        Phase::Type,
        Code::TypeMismatch,
        span.clone(),
        format!("type mismatch: expected `{expected}`, found `{found}`"),
    );
    let (ne, nf) = (table.normalize(expected), table.normalize(found));
    if matches!(ne, TypeExpr::Product(..)) && matches!(nf, TypeExpr::Product(..) | TypeExpr::Basic(_) | TypeExpr::Named(_)) {
        let (we, wf) = (ne.product_width(), nf.product_width());
        if we != wf {
            d = d.with_note(format!("expected {we} components, found {wf}"), None);
        }
    }
    d
}

fn type_error(code: Code, span: &SourceSpan, msg: String) -> Diagnostic {
    Diagnostic::error(Phase::Type, code, span.clone(), msg)
}

/// Reports unknown domain names inside an annotation.
pub fn check_type_wf(table: &DomainTable, t: &TypeExpr, span: &SourceSpan, diags: &mut Vec<Diagnostic>) -> bool {
    let free = table.free_names(t);
    for name in &free {
        diags.push(Diagnostic::error(
            Phase::Domain,
            Code::FreeDomainVariable,
            span.clone(),
            format!("unknown domain `{name}`"),
        ));
    }
    free.is_empty()
}

/// Requires `found` to equal `expected`; reports a mismatch otherwise.
fn expect(
    ctx: &TypeContext,
    found: &TypeExpr,
    expected: &TypeExpr,
    span: &SourceSpan,
    diags: &mut Vec<Diagnostic>,
) -> bool {
    if ctx.table.same_type(found, expected) {
        true
    } else {
        diags.push(mismatch(span, expected, found, ctx.table));
        false
    }
}

/// Synthesizes the type of an expression bottom-up. Expects constructor
/// names to have been resolved.
pub fn infer_expr(ctx: &TypeContext, e: &Expr) -> Result<TypeExpr, Vec<Diagnostic>> {
    let mut ctx = ctx.clone();
    let mut diags = Vec::new();
    match infer(&mut ctx, e, &mut diags) {
        Some(t) if diags.is_empty() => Ok(t),
        _ => Err(diags),
    }
}

pub(crate) fn infer(ctx: &mut TypeContext, e: &Expr, diags: &mut Vec<Diagnostic>) -> Option<TypeExpr> {
    let table = ctx.table;
    match &e.kind {
        ExprKind::Int(_) => Some(TypeExpr::Basic(BasicKind::Int)),
        ExprKind::Str(_) => Some(TypeExpr::Basic(BasicKind::String)),
        ExprKind::Bool(_) => Some(TypeExpr::Basic(BasicKind::Bool)),
        ExprKind::Symbol(_) => Some(TypeExpr::Basic(BasicKind::Symbol)),
        ExprKind::Var(name) => match ctx.lookup(name) {
            Some(t) => Some(t.clone()),
            None if ctx.poisoned.contains(name) => None,
            None => {
                diags.push(type_error(
                    Code::UnknownVariable,
                    &e.span,
                    format!("unknown variable `{name}`"),
                ));
                None
            }
        },
        ExprKind::Lambda {
            param,
            param_type,
            body,
        } => {
            let ok = check_type_wf(table, param_type, &e.span, diags);
            ctx.push_local(param.clone(), param_type.clone());
            let body_t = infer(ctx, body, diags);
            ctx.pop_local();
            if !ok {
                return None;
            }
            Some(TypeExpr::arrow(param_type.clone(), body_t?))
        }
        ExprKind::Apply(func, arg) => {
            let ft = infer(ctx, func, diags);
            let at = infer(ctx, arg, diags);
            let ft = ft?;
            match table.normalize(&ft) {
                TypeExpr::Arrow(dom, cod) => {
                    if let Some(at) = at {
                        expect(ctx, &at, &dom, &arg.span, diags);
                    }
                    Some(*cod)
                }
                _ => {
                    diags.push(type_error(
                        Code::NotAFunction,
                        &func.span,
                        format!("`{func}` has type `{ft}` and cannot be applied"),
                    ));
                    None
                }
            }
        }
        ExprKind::Bottom(t) => {
            if check_type_wf(table, t, &e.span, diags) {
                Some(t.clone())
            } else {
                None
            }
        }
        ExprKind::Update { func, key, value } => {
            let ft = infer(ctx, func, diags);
            let kt = infer(ctx, key, diags);
            let vt = infer(ctx, value, diags);
            let ft = ft?;
            match table.normalize(&ft) {
                TypeExpr::Arrow(dom, cod) => {
                    if dom.as_basic().is_none() {
                        diags.push(type_error(
                            Code::UpdateOnNonBasicParameter,
                            &e.span,
                            format!(
                                "only functions whose parameter is a basic domain can be updated; `{func}` takes `{dom}`"
                            ),
                        ));
                        return None;
                    }
                    if let Some(kt) = kt {
                        expect(ctx, &kt, &dom, &key.span, diags);
                    }
                    if let Some(vt) = vt {
                        expect(ctx, &vt, &cod, &value.span, diags);
                    }
                    Some(ft)
                }
                _ => {
                    diags.push(type_error(
                        Code::NotAFunction,
                        &func.span,
                        format!("`{func}` has type `{ft}` and cannot be updated"),
                    ));
                    None
                }
            }
        }
        ExprKind::Pair(a, b) => {
            let at = infer(ctx, a, diags);
            let bt = infer(ctx, b, diags);
            Some(TypeExpr::product(at?, bt?))
        }
        ExprKind::BinOp(op, a, b) => {
            let at = infer(ctx, a, diags);
            let bt = infer(ctx, b, diags);
            let (at, bt) = (at?, bt?);
            if op.is_arithmetic() {
                let int = TypeExpr::Basic(BasicKind::Int);
                let ok_a = expect(ctx, &at, &int, &a.span, diags);
                let ok_b = expect(ctx, &bt, &int, &b.span, diags);
                (ok_a && ok_b).then_some(int)
            } else {
                let na = table.normalize(&at);
                if na.as_basic().is_none() {
                    diags.push(type_error(
                        Code::UnsupportedEquality,
                        &e.span,
                        format!("`{}` compares values of basic domains only, not `{at}`", op.symbol()),
                    ));
                    return None;
                }
                expect(ctx, &bt, &at, &b.span, diags).then_some(TypeExpr::Basic(BasicKind::Bool))
            }
        }
        ExprKind::Ctor { name, args } => {
            let mut arg_types = Vec::new();
            for a in args {
                arg_types.push((a, infer(ctx, a, diags)));
            }
            let Some(info) = table.constructor(name) else {
                diags.push(type_error(
                    Code::UnknownConstructor,
                    &e.span,
                    format!("unknown constructor `{name}`"),
                ));
                return None;
            };
            match (&info.payload, arg_types.as_slice()) {
                (None, []) => {}
                (Some(p), [(a, Some(t))]) => {
                    expect(ctx, t, p, &a.span, diags);
                }
                (Some(_), [(_, None)]) => {}
                (payload, _) => {
                    let want = if payload.is_some() { 1 } else { 0 };
                    diags.push(type_error(
                        Code::PatternArityMismatch,
                        &e.span,
                        format!(
                            "constructor `{name}` takes {want} argument(s), {} given",
                            args.len()
                        ),
                    ));
                    return None;
                }
            }
            Some(TypeExpr::Named(info.owner.clone()))
        }
        ExprKind::Syntax { parts, shape } => {
            let subs: Vec<&Expr> = sub_terms(parts).collect();
            let sub_types: Vec<Option<TypeExpr>> = subs.iter().map(|s| infer(ctx, s, diags)).collect();
            let Some(info) = table.production(shape) else {
                diags.push(no_such_production(&e.span, shape));
                return None;
            };
            for ((sub, st), hole) in subs.iter().zip(&sub_types).zip(info.holes()) {
                if let Some(st) = st {
                    expect(ctx, st, hole, &sub.span, diags);
                }
            }
            Some(TypeExpr::Named(info.owner.clone()))
        }
    }
}

fn no_such_production(span: &SourceSpan, shape: &Shape) -> Diagnostic {
    type_error(
        Code::NoSuchProduction,
        span,
        format!("no syntax production has the shape `{shape}`"),
    )
}

/// Finds the production a syntax expression or pattern denotes.
pub fn resolve_syntax_shape<'t>(
    table: &'t DomainTable,
    shape: &Shape,
    span: &SourceSpan,
) -> Result<(&'t SyntaxDef, &'t Production), Diagnostic> {
    let info = table
        .production(shape)
        .ok_or_else(|| no_such_production(span, shape))?;
    let def = table.syntax(&info.owner).expect("production owner is a syntax definition");
    Ok((def, &info.production))
}

/// Rule-level variable scope: variables bound by the conclusion and by
/// earlier premises.
#[derive(Debug, Default, Clone)]
pub struct RuleScope {
    vars: Vec<(String, TypeExpr)>,
}

impl RuleScope {
    pub fn get(&self, name: &str) -> Option<&TypeExpr> {
        self.vars.iter().find(|(n, _)| n == name).map(|(_, t)| t)
    }

    pub fn bindings(&self) -> &[(String, TypeExpr)] {
        &self.vars
    }
}

/// Checks `p` against `expected`, binding fresh variables into `scope`.
/// A variable already in scope is read as an equality constraint.
pub fn check_pattern(
    ctx: &TypeContext,
    p: &Pattern,
    expected: &TypeExpr,
    scope: &mut RuleScope,
    diags: &mut Vec<Diagnostic>,
) {
    let mut seen = HashSet::new();
    check_pat(ctx, p, expected, scope, &mut seen, diags);
}

fn check_pat(
    ctx: &TypeContext,
    p: &Pattern,
    expected: &TypeExpr,
    scope: &mut RuleScope,
    seen: &mut HashSet<String>,
    diags: &mut Vec<Diagnostic>,
) {
    let table = ctx.table;
    let basic = |k: BasicKind, diags: &mut Vec<Diagnostic>| {
        let t = TypeExpr::Basic(k);
        if !table.same_type(&t, expected) {
            diags.push(mismatch(&p.span, expected, &t, table));
        }
    };
    match &p.kind {
        PatternKind::Var(name) => {
            if !seen.insert(name.clone()) {
                diags.push(type_error(
                    Code::NonLinearPattern,
                    &p.span,
                    format!("variable `{name}` occurs more than once in this pattern"),
                ));
                return;
            }
            if let Some(prev) = scope.get(name) {
                if !table.same_type(prev, expected) {
                    diags.push(
                        mismatch(&p.span, expected, prev, table)
                            .with_note(format!("`{name}` is already bound; repeating it requires an equal value"), None),
                    );
                } else if !table.is_function_free(expected) {
                    diags.push(type_error(
                        Code::UnsupportedEquality,
                        &p.span,
                        format!(
                            "`{name}` is already bound and has type `{expected}`; values containing functions cannot be compared"
                        ),
                    ));
                }
            } else {
                scope.vars.push((name.clone(), expected.clone()));
            }
        }
        PatternKind::Wildcard => {}
        PatternKind::Int(_) => basic(BasicKind::Int, diags),
        PatternKind::Str(_) => basic(BasicKind::String, diags),
        PatternKind::Bool(_) => basic(BasicKind::Bool, diags),
        PatternKind::Symbol(_) => basic(BasicKind::Symbol, diags),
        PatternKind::Pair(a, b) => match table.normalize(expected) {
            TypeExpr::Product(ta, tb) => {
                check_pat(ctx, a, &ta, scope, seen, diags);
                check_pat(ctx, b, &tb, scope, seen, diags);
            }
            _ => {
                let mut d = type_error(
                    Code::TypeMismatch,
                    &p.span,
                    format!("type mismatch: expected `{expected}`, found a pair"),
                );
                if let TypeExpr::Named(n) = table.normalize(expected) {
                    if table.syntax(&n).is_some() || table.constructors.values().any(|c| c.owner == n) {
                        d = d.with_note(format!("`{n}` has no pair form"), None);
                    }
                }
                diags.push(d);
            }
        },
        PatternKind::Ctor { name, args } => {
            let Some(info) = table.constructor(name) else {
                diags.push(type_error(
                    Code::UnknownConstructor,
                    &p.span,
                    format!("unknown constructor `{name}`"),
                ));
                return;
            };
            let owner = TypeExpr::Named(info.owner.clone());
            if !table.same_type(&owner, expected) {
                diags.push(mismatch(&p.span, expected, &owner, table));
                return;
            }
            match (&info.payload, args.as_slice()) {
                (None, []) => {}
                (Some(t), [a]) => check_pat(ctx, a, t, scope, seen, diags),
                (payload, _) => diags.push(type_error(
                    Code::PatternArityMismatch,
                    &p.span,
                    format!(
                        "constructor `{name}` takes {} argument(s), pattern has {}",
                        usize::from(payload.is_some()),
                        args.len()
                    ),
                )),
            }
        }
        PatternKind::Syntax { parts, shape } => {
            let (def, prod) = match resolve_syntax_shape(table, shape, &p.span) {
                Ok(found) => found,
                Err(d) => {
                    diags.push(d);
                    return;
                }
            };
            let owner = TypeExpr::Named(def.name.clone());
            if !table.same_type(&owner, expected) {
                diags.push(mismatch(&p.span, expected, &owner, table));
                return;
            }
            for (sub, hole) in sub_terms(parts).zip(prod.holes()) {
                check_pat(ctx, sub, hole, scope, seen, diags);
            }
        }
    }
}

/// Type-checks every rule of a system against its header.
pub fn check_system(ctx: &TypeContext, sys: &TransitionSystem) -> Vec<Diagnostic> {
    let mut diags = Vec::new();
    let mut labels: BTreeMap<&str, &SourceSpan> = BTreeMap::new();
    for rule in &sys.rules {
        if let Some(prev) = labels.get(rule.label.as_str()) {
            diags.push(
                Diagnostic::warning(
                    Phase::Type,
                    Code::DuplicateRuleLabel,
                    rule.span.clone(),
                    format!("rule label `{}` is used more than once in system `{}`", rule.label, sys.name),
                )
                .with_note("first used here", Some((*prev).clone())),
            );
        } else {
            labels.insert(&rule.label, &rule.span);
        }
        check_rule(ctx, sys, rule, &mut diags);
    }
    diags
}

fn antecedent_mismatch(span: &SourceSpan, target: &str, expected: &Option<TypeExpr>) -> Diagnostic {
    let msg = match expected {
        Some(t) => format!("transitions of `{target}` require an antecedent of type `{t}`, but none is given"),
        None => format!("transitions of `{target}` take no antecedent, but one is given"),
    };
    type_error(Code::AntecedentArityMismatch, span, msg)
}

fn check_rule(ctx: &TypeContext, sys: &TransitionSystem, rule: &Rule, diags: &mut Vec<Diagnostic>) {
    let mut ctx = ctx.clone();
    let mut scope = RuleScope::default();
    match (&sys.antecedent_type, &rule.antecedent) {
        (Some(t), Some(p)) => bind_pattern(&mut ctx, p, Some(t), &mut scope, diags),
        (None, None) => {}
        (expected, p) => {
            diags.push(antecedent_mismatch(&rule.span, &sys.name, expected));
            if let Some(p) = p {
                bind_pattern(&mut ctx, p, None, &mut scope, diags);
            }
        }
    }
    bind_pattern(&mut ctx, &rule.initial, Some(&sys.initial_type), &mut scope, diags);

    let bind_scope = |ctx: &mut TypeContext, scope: &RuleScope, from: usize| {
        for (n, t) in &scope.vars[from..] {
            ctx.push_local(n.clone(), t.clone());
        }
    };
    bind_scope(&mut ctx, &scope, 0);

    for premise in &rule.premises {
        let before = scope.vars.len();
        match premise {
            Premise::Transition {
                target,
                antecedent,
                initial,
                result,
                span,
                ..
            } => {
                let Some(sig) = ctx.systems.get(target) else {
                    diags.push(type_error(
                        Code::UnknownSystem,
                        span,
                        format!("unknown transition system `{target}`"),
                    ));
                    bind_pattern(&mut ctx, result, None, &mut scope, diags);
                    continue;
                };
                match (&sig.antecedent, antecedent) {
                    (Some(t), Some(a)) => {
                        if let Some(at) = infer(&mut ctx, a, diags) {
                            expect(&ctx, &at, t, &a.span, diags);
                        }
                    }
                    (None, None) => {}
                    (expected, _) => diags.push(antecedent_mismatch(span, target, expected)),
                }
                if let Some(it) = infer(&mut ctx, initial, diags) {
                    expect(&ctx, &it, &sig.initial, &initial.span, diags);
                }
                let result_type = sig.result.clone();
                bind_pattern(&mut ctx, result, Some(&result_type), &mut scope, diags);
            }
            Premise::SideCondition { cond, .. } => {
                if let Some(t) = infer(&mut ctx, cond, diags) {
                    expect(&ctx, &t, &TypeExpr::Basic(BasicKind::Bool), &cond.span, diags);
                }
            }
            Premise::Local { pattern, value, .. } => {
                let t = infer(&mut ctx, value, diags);
                bind_pattern(&mut ctx, pattern, t.as_ref(), &mut scope, diags);
            }
        }
        bind_scope(&mut ctx, &scope, before);
    }

    if let Some(t) = infer(&mut ctx, &rule.result, diags) {
        expect(&ctx, &t, &sys.final_type, &rule.result.span, diags);
    }
}

/// Checks a binding pattern; if that fails (or the expected type is
/// unknown), its fresh variables are poisoned so that later uses do not
/// produce follow-up errors.
fn bind_pattern(
    ctx: &mut TypeContext,
    p: &Pattern,
    expected: Option<&TypeExpr>,
    scope: &mut RuleScope,
    diags: &mut Vec<Diagnostic>,
) {
    let before = diags.len();
    if let Some(t) = expected {
        check_pattern(ctx, p, t, scope, diags);
    }
    if expected.is_none() || diags.len() > before {
        for v in p.variables() {
            if scope.get(v).is_none() {
                ctx.poisoned.insert(v.to_string());
            }
        }
    }
}
