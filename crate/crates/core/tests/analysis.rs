mod common;

use common::{check, check_errors, codes, fixture, parse, IMP_PRELUDE};
use nasl_core::analysis::{check_domains, resolve_syntax_shape};
use nasl_core::diag::Code;
use nasl_core::frontend::parse_source;
use nasl_core::{check_specification, BasicKind, Shape, ShapeItem, SourceSpan, TypeExpr};

fn expr_type(prelude: &str, expr: &str) -> Result<TypeExpr, Vec<Code>> {
    let tspec = check(prelude);
    let e = parse(&format!("let it = {expr};")).lets.remove(0).value;
    tspec.check_expr(e).map(|(_, t)| t).map_err(|d| codes(&d))
}

#[test]
fn recursive_union_is_accepted() {
    check("domain List = { nil + cons : Int * List };");
}

#[test]
fn free_domain_variable() {
    let diags = check_errors("domain A = B;");
    assert_eq!(codes(&diags), [Code::FreeDomainVariable]);
    assert!(diags[0].message.contains('B'));
}

#[test]
fn recursive_alias() {
    assert!(codes(&check_errors("domain P = Int * P;")).contains(&Code::RecursiveAlias));
    assert!(codes(&check_errors("domain A = B -> Int; domain B = A * Int;")).contains(&Code::RecursiveAlias));
}

#[test]
fn mutually_recursive_unions() {
    check("domain T = { leaf + node : F }; domain F = { fnil + fcons : T * F };");
}

#[test]
fn duplicate_constructor_across_unions() {
    let diags = check_errors("domain A = { a + b }; domain B = { b + c };");
    assert_eq!(codes(&diags), [Code::DuplicateConstructor]);
}

#[test]
fn duplicate_shape_and_ambiguous_bare_productions() {
    let diags = check_errors("syntax A = '#' Int; syntax B = '#' Int;");
    assert_eq!(codes(&diags), [Code::DuplicateConstructor]);
    let diags = check_errors("syntax A = Int | Symbol;");
    assert_eq!(codes(&diags), [Code::AmbiguousBareProduction]);
    // Different hole counts are fine.
    check("syntax A = Int | Symbol Symbol;");
}

#[test]
fn duplicate_definition() {
    assert_eq!(
        codes(&check_errors("domain A = Int; domain A = Bool;")),
        [Code::DuplicateDefinition]
    );
}

#[test]
fn shapes_resolve_to_productions() {
    let spec = parse(IMP_PRELUDE);
    let table = check_domains(&spec).unwrap();
    let sp = SourceSpan::synthetic();
    let t = |s: &str| ShapeItem::Terminal(s.into());
    let (def, prod) = resolve_syntax_shape(&table, &Shape(vec![t("#"), ShapeItem::Hole]), &sp).unwrap();
    assert_eq!(def.name, "Exp");
    assert_eq!(prod.holes().collect::<Vec<_>>(), [&TypeExpr::Basic(BasicKind::Int)]);
    let (def, _) = resolve_syntax_shape(&table, &Shape(vec![ShapeItem::Hole, t("+"), ShapeItem::Hole]), &sp).unwrap();
    assert_eq!(def.name, "Exp");
    let err = resolve_syntax_shape(&table, &Shape(vec![t("#"), ShapeItem::Hole, t("#")]), &sp).unwrap_err();
    assert_eq!(err.code, Code::NoSuchProduction);
}

#[test]
fn inference_examples() {
    let sym_int = TypeExpr::arrow(TypeExpr::Basic(BasicKind::Symbol), TypeExpr::Basic(BasicKind::Int));
    assert_eq!(expr_type("", "\\x : Symbol . -|Int|"), Ok(sym_int.clone()));
    let t = expr_type(IMP_PRELUDE, "empty[`x` -> 0]").unwrap();
    assert_eq!(check(IMP_PRELUDE).table.normalize(&t), sym_int);
    assert_eq!(expr_type("", "3 + 5"), Ok(TypeExpr::Basic(BasicKind::Int)));
    assert_eq!(expr_type("", "(1, \"a\")").map(|t| t.to_string()), Ok("Int * String".into()));
    assert_eq!(expr_type(IMP_PRELUDE, "{{'#' 3} '+' {`x`}}"), Ok(TypeExpr::named("Exp")));
}

#[test]
fn inference_errors() {
    assert_eq!(
        expr_type("", "(\\p : Int * Int . 0)[(1, 2) -> 3]"),
        Err(vec![Code::UpdateOnNonBasicParameter])
    );
    assert_eq!(expr_type("", "1(2)"), Err(vec![Code::NotAFunction]));
    assert_eq!(expr_type("", "y"), Err(vec![Code::UnknownVariable]));
    assert_eq!(expr_type("", "1 + true"), Err(vec![Code::TypeMismatch]));
    assert_eq!(expr_type("", "foo(1)"), Err(vec![Code::UnknownVariable]));
    assert_eq!(expr_type(IMP_PRELUDE, "empty == empty"), Err(vec![Code::UnsupportedEquality]));
    assert_eq!(expr_type(IMP_PRELUDE, "{'#' 3 '#'}"), Err(vec![Code::NoSuchProduction]));
}

#[test]
fn union_constructors() {
    let src = "domain List = { nil + cons : Int * List };";
    assert_eq!(expr_type(src, "cons(1, cons(2, nil))"), Ok(TypeExpr::named("List")));
    assert_eq!(expr_type(src, "cons(true, nil)"), Err(vec![Code::TypeMismatch]));
}

fn system_errors(body: &str) -> Vec<Code> {
    let src = format!("{IMP_PRELUDE}\n{body}");
    match check_specification(&parse(&src)) {
        Ok(_) => Vec::new(),
        Err(d) => codes(&d),
    }
}

#[test]
fn pattern_checks() {
    assert!(system_errors(
        "system S : Stm * Env ==> Env = [[ D ]]: ({x '=' e}, s) ==> s[x -> 0]; end"
    )
    .is_empty());
    assert!(system_errors("system T : Int ==> Int = [[ Z ]]: 0 ==> 1; end").is_empty());
    assert_eq!(
        system_errors("system T : Int * Int ==> Int = [[ P ]]: (a, a) ==> a; end"),
        [Code::NonLinearPattern]
    );
    assert_eq!(
        system_errors("system T : Int ==> Int = [[ P ]]: (a, b) ==> a; end"),
        [Code::TypeMismatch]
    );
    assert_eq!(
        system_errors("system T : Exp ==> Int = [[ P ]]: {'#' a b} ==> 1; end"),
        [Code::NoSuchProduction]
    );
}

#[test]
fn rebinding_a_pattern_variable_is_an_equality_constraint() {
    let body = "system T : Int * Int ==> Int =
      [[ SAME ]]: (a, b) ==> a \\\\ let a = b;
      [[ BAD ]]: (a, b) ==> a \\\\ let a = true;
    end";
    assert_eq!(system_errors(body), [Code::TypeMismatch]);
}

#[test]
fn functions_cannot_be_equality_constrained() {
    let body = "system T : Env * Env ==> Int = [[ F ]]: (s, t) ==> 0 \\\\ let s = t; end";
    assert_eq!(system_errors(body), [Code::UnsupportedEquality]);
}

#[test]
fn antecedent_presence_must_match_the_header() {
    assert_eq!(
        system_errors("system T : Int ==> Int = [[ A ]]: s |- n ==> n; end"),
        [Code::AntecedentArityMismatch]
    );
    assert_eq!(
        system_errors("system T : Env |- Int ==> Int = [[ A ]]: n ==> n; end"),
        [Code::AntecedentArityMismatch]
    );
}

#[test]
fn unknown_system_in_evaluation_and_premise() {
    assert_eq!(system_errors("evaluate 1 in nowhere"), [Code::UnknownSystem]);
    assert_eq!(
        system_errors("system T : Int ==> Int = [[ A ]]: n ==> m \\\\ n =U=> m; end"),
        [Code::UnknownSystem]
    );
}

#[test]
fn forward_references_between_systems() {
    check(&format!(
        "{IMP_PRELUDE}
        system A : Int ==> Int = [[ R ]]: n ==> m \\\\ n =B=> m; end
        system B : Int ==> Int = [[ R ]]: n ==> n + 1; end"
    ));
}

#[test]
fn lets_are_checked_in_order() {
    check("let a = 1; let b = a + 1;");
    assert_eq!(codes(&check_errors("let b = a + 1; let a = 1;")), [Code::UnknownVariable]);
}

#[test]
fn side_conditions_must_be_boolean() {
    assert_eq!(
        system_errors("system T : Int ==> Int = [[ A ]]: n ==> n \\\\ if n + 1; end"),
        [Code::TypeMismatch]
    );
}

#[test]
fn imp_fixtures_check_cleanly() {
    for name in ["imp.nsml", "imp_if.nsml", "circular_first.nsml", "stop_first.nsml"] {
        let tspec = check(&fixture(name));
        assert!(tspec.warnings.is_empty(), "{name}: {:?}", tspec.warnings);
    }
}

#[test]
fn imp_repl_evaluation_of_int_in_e_is_rejected() {
    let tspec = check(&fixture("imp.nsml"));
    let ev = parse_source("evaluate 1 + 1 in e", "t").unwrap().spec.evaluations.remove(0);
    let diags = tspec.check_evaluation(ev).unwrap_err();
    assert!(codes(&diags).contains(&Code::AntecedentArityMismatch));
    assert!(codes(&diags).contains(&Code::TypeMismatch));
}

/// Every error of a flawed fixture must lie inside the named rule, and its
/// corrected variant must check without errors.
fn flaw_is_located(flawed: &str, fixed: &str, system: &str, rules: &[&str]) {
    let spec = parse(&fixture(flawed));
    let diags = check_specification(&spec).unwrap_err();
    let errors: Vec<_> = diags.iter().filter(|d| d.is_error()).collect();
    assert!(!errors.is_empty());
    let sys = spec.system(system).unwrap();
    for d in &errors {
        let inside = sys
            .rules
            .iter()
            .filter(|r| rules.contains(&r.label.as_str()))
            .any(|r| r.span.contains(&d.span));
        assert!(inside, "{flawed}: error outside {rules:?}: {d}");
    }
    check(&fixture(fixed));
}

#[test]
fn bur_while_guard_has_wrong_antecedent() {
    flaw_is_located("bur_while_flawed.nsml", "bur_while_fixed.nsml", "S", &["WHILE-TRUE", "WHILE-FALSE"]);
    let errors = check_errors(&fixture("bur_while_flawed.nsml"));
    assert!(errors.iter().all(|d| d.code == Code::TypeMismatch));
    assert!(errors[0].notes[0].message.contains("expected 3 components, found 2"));
}

#[test]
fn bur_block_premises_break_transition_formats() {
    flaw_is_located("bur_block_flawed.nsml", "bur_block_fixed.nsml", "S", &["BLOCK"]);
    let errors = check_errors(&fixture("bur_block_flawed.nsml"));
    assert!(codes(&errors).contains(&Code::AntecedentArityMismatch));
    assert!(codes(&errors).contains(&Code::TypeMismatch));
}

#[test]
fn flan_pair_is_not_a_value() {
    flaw_is_located("flan_pair_flawed.nsml", "flan_pair_fixed.nsml", "Flan", &["PAIR"]);
    let errors = check_errors(&fixture("flan_pair_flawed.nsml"));
    assert_eq!(codes(&errors), [Code::TypeMismatch]);
    assert!(errors[0].message.contains("Values"));
}

#[test]
fn permuting_domain_and_syntax_definitions_keeps_acceptance() {
    let a = "syntax Exp = '#' Int | Exp '+' Exp; domain Env = Symbol -> Val; domain Val = { num : Int };";
    let b = "domain Val = { num : Int }; domain Env = Symbol -> Val; syntax Exp = '#' Int | Exp '+' Exp;";
    check(a);
    check(b);
}

#[test]
fn inline_union_in_type_is_rejected() {
    assert!(parse_source("system T : { a + b } ==> Int = end", "t").is_err());
}
