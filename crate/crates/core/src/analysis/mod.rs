//! Domain analysis followed by type analysis.

mod domains;
mod resolve;
mod typeck;

use std::collections::BTreeMap;

pub use domains::{
    build_domain_table, check_domains, ConstructorInfo, DomainEntry, DomainTable, ProductionInfo,
};
pub use resolve::{resolve_expr, resolve_pattern, resolve_specification};
pub use typeck::{
    check_pattern, check_system, check_type_wf, infer_expr, resolve_syntax_shape, RuleScope,
    Signature, TypeContext,
};

use crate::diag::{has_errors, Code, Diagnostic, Phase};
use crate::model::*;

/// A specification that passed domain and type analysis. Constructor
/// references in its AST are resolved.
#[derive(Debug, Clone)]
pub struct TypedSpecification {
    pub spec: Specification,
    pub table: DomainTable,
    pub signatures: BTreeMap<String, Signature>,
    /// Types of the let-bindings, in declaration order.
    pub let_types: Vec<(String, TypeExpr)>,
    pub warnings: Vec<Diagnostic>,
}

impl TypedSpecification {
    pub fn context(&self) -> TypeContext<'_> {
        TypeContext::new(&self.table, &self.signatures).with_globals(self.let_types.iter().cloned())
    }

    /// Resolves and type-checks a stand-alone expression against the
    /// specification's globals.
    pub fn check_expr(&self, mut e: Expr) -> Result<(Expr, TypeExpr), Vec<Diagnostic>> {
        resolve_expr(&self.table, &mut e);
        let t = infer_expr(&self.context(), &e)?;
        Ok((e, t))
    }

    /// Resolves and checks an `evaluate` directive.
    pub fn check_evaluation(&self, mut ev: Evaluation) -> Result<Evaluation, Vec<Diagnostic>> {
        if let Some(a) = &mut ev.antecedent {
            resolve_expr(&self.table, a);
        }
        resolve_expr(&self.table, &mut ev.initial);
        let mut diags = Vec::new();
        check_evaluation(&self.context(), &ev, &mut diags);
        if has_errors(&diags) {
            Err(diags)
        } else {
            Ok(ev)
        }
    }
}

fn check_evaluation(ctx: &TypeContext, ev: &Evaluation, diags: &mut Vec<Diagnostic>) {
    let Some(sig) = ctx.systems.get(&ev.system) else {
        diags.push(Diagnostic::error(
            Phase::Type,
            Code::UnknownSystem,
            ev.span.clone(),
            format!("unknown transition system `{}`", ev.system),
        ));
        return;
    };
    let check = |e: &Expr, expected: &TypeExpr, diags: &mut Vec<Diagnostic>| match infer_expr(ctx, e) {
        Ok(t) if ctx.table.same_type(&t, expected) => {}
        Ok(t) => diags.push(Diagnostic::error(
            Phase::Type,
            Code::TypeMismatch,
            e.span.clone(),
            format!("type mismatch: expected `{expected}`, found `{t}`"),
        )),
        Err(ds) => diags.extend(ds),
    };
    match (&sig.antecedent, &ev.antecedent) {
        (Some(t), Some(a)) => check(a, t, diags),
        (None, None) => {}
        (Some(t), None) => diags.push(Diagnostic::error(
            Phase::Type,
            Code::AntecedentArityMismatch,
            ev.span.clone(),
            format!(
                "transitions of `{}` require an antecedent of type `{t}`, but none is given",
                ev.system
            ),
        )),
        (None, Some(_)) => diags.push(Diagnostic::error(
            Phase::Type,
            Code::AntecedentArityMismatch,
            ev.span.clone(),
            format!("transitions of `{}` take no antecedent, but one is given", ev.system),
        )),
    }
    check(&ev.initial, &sig.initial, diags);
}

/// Runs domain analysis, collects system signatures, then type-checks lets
/// (in order), systems and evaluations. All diagnostics are reported, not
/// just the first.
pub fn check_specification(spec: &Specification) -> Result<TypedSpecification, Vec<Diagnostic>> {
    let (table, mut diags) = build_domain_table(spec);
    let mut spec = spec.clone();
    resolve_specification(&table, &mut spec);

    let mut signatures = BTreeMap::new();
    for sys in &spec.systems {
        if signatures.contains_key(&sys.name) {
            diags.push(Diagnostic::error(
                Phase::Type,
                Code::DuplicateDefinition,
                sys.span.clone(),
                format!("duplicate definition of system `{}`", sys.name),
            ));
            continue;
        }
        let mut ok = true;
        for t in sys.antecedent_type.iter().chain([&sys.initial_type, &sys.final_type]) {
            ok &= check_type_wf(&table, t, &sys.span, &mut diags);
        }
        if ok {
            signatures.insert(
                sys.name.clone(),
                Signature {
                    antecedent: sys.antecedent_type.clone(),
                    initial: sys.initial_type.clone(),
                    result: sys.final_type.clone(),
                },
            );
        }
    }

    let mut ctx = TypeContext::new(&table, &signatures);
    let mut let_types = Vec::new();
    for l in &spec.lets {
        if ctx.global(&l.name).is_some() {
            diags.push(Diagnostic::error(
                Phase::Type,
                Code::DuplicateDefinition,
                l.span.clone(),
                format!("duplicate definition of `{}`", l.name),
            ));
            continue;
        }
        match infer_expr(&ctx, &l.value) {
            Ok(t) => {
                ctx.add_global(l.name.clone(), t.clone());
                let_types.push((l.name.clone(), t));
            }
            Err(ds) => diags.extend(ds),
        }
    }

    for sys in &spec.systems {
        if signatures.contains_key(&sys.name) {
            diags.extend(check_system(&ctx, sys));
        }
    }
    for ev in &spec.evaluations {
        check_evaluation(&ctx, ev, &mut diags);
    }

    if has_errors(&diags) {
        return Err(diags);
    }
    Ok(TypedSpecification {
        spec,
        table,
        signatures,
        let_types,
        warnings: diags,
    })
}
