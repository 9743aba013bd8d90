mod common;

use common::{check, fixture, parse, IMP_PRELUDE};
use nasl_core::eval::{
    apply, eval_expr, match_pattern, render_trace, render_tree, run_evaluations, DeriveError,
    Fuel, Interpreter,
};
use nasl_core::{
    value_equals, Bindings, DerivationTree, Env, Outcome, Pattern, PatternKind, Premise,
    RuntimeError, Shape, ShapeItem, SourceSpan, TypedSpecification, Value,
};

fn eval_in(tspec: &TypedSpecification, src: &str) -> Result<Value, RuntimeError> {
    let e = parse(&format!("let it = {src};")).lets.remove(0).value;
    let (e, _) = tspec.check_expr(e).expect("well-typed");
    Interpreter::new(tspec).unwrap().eval(&e)
}

fn imp() -> TypedSpecification {
    check(&fixture("imp.nsml"))
}

fn int(v: &Value) -> i64 {
    v.as_int().unwrap().try_into().unwrap()
}

#[test]
fn update_then_apply() {
    let t = imp();
    assert_eq!(int(&eval_in(&t, "empty[`x` -> 0](`x`)").unwrap()), 0);
    assert_eq!(int(&eval_in(&t, "empty[`x` -> 1][`x` -> 2](`x`)").unwrap()), 2);
    assert_eq!(int(&eval_in(&t, "empty[`x` -> 1][`y` -> 2](`x`)").unwrap()), 1);
    assert_eq!(int(&eval_in(&t, "3 + 5").unwrap()), 8);
}

#[test]
fn applying_bottom_raises() {
    let err = eval_in(&imp(), "empty(`y`)").unwrap_err();
    assert!(matches!(err, RuntimeError::BottomEvaluated { .. }));
    assert!(err.span().is_some());
}

#[test]
fn arithmetic_is_exact() {
    let t = check("");
    let v = eval_in(&t, "99999999999 * 99999999999 * 99999999999").unwrap();
    assert_eq!(v.to_string(), "999999999970000000000299999999999");
    assert_eq!(eval_in(&t, "2 - 5 < 0").unwrap().as_bool(), Some(true));
    assert_eq!(eval_in(&t, "\"a\" <= \"b\"").unwrap().as_bool(), Some(true));
}

#[test]
fn closures_capture_their_environment() {
    let t = check("let k = 10; let add = \\x : Int . x + k;");
    assert_eq!(int(&eval_in(&t, "add(5)").unwrap()), 15);
    assert_eq!(int(&eval_in(&t, "(\\k : Int . add(k))(1)").unwrap()), 11);
}

#[test]
fn apply_on_updated_falls_through_to_base() {
    let base = eval_expr(&Env::new(), &parse("let f = \\x : Int . x * 2;").lets[0].value).unwrap();
    let f = Value::Updated(std::sync::Arc::new(nasl_core::Updated {
        base,
        key: Value::int(3),
        value: Value::int(0),
    }));
    assert_eq!(int(&apply(&f, &Value::int(3)).unwrap()), 0);
    assert_eq!(int(&apply(&f, &Value::int(4)).unwrap()), 8);
}

fn syntax_value(parts: &[Option<&str>], children: Vec<Value>) -> Value {
    let shape = Shape(
        parts
            .iter()
            .map(|p| match p {
                Some(t) => ShapeItem::Terminal(t.to_string()),
                None => ShapeItem::Hole,
            })
            .collect(),
    );
    Value::syntax(shape, children)
}

fn decl_pattern() -> Pattern {
    let spec = parse(&fixture("imp.nsml"));
    spec.system("S").unwrap().rules[0].initial.clone()
}

#[test]
fn match_decl_conclusion() {
    let t = imp();
    let env = eval_in(&t, "empty").unwrap();
    let one = syntax_value(&[Some("#"), None], vec![Value::int(1)]);
    let stm = syntax_value(&[None, Some("="), None], vec![Value::symbol("x"), one.clone()]);
    let mut b = Bindings::new();
    assert!(match_pattern(&decl_pattern(), &Value::pair(stm, env), &mut b).unwrap());
    assert_eq!(b.get("x").unwrap().to_string(), "`x`");
    assert!(value_equals(b.get("e").unwrap(), &one).unwrap());
    assert!(b.get("s").unwrap().is_function());
}

#[test]
fn constant_and_wildcard_patterns() {
    let zero = Pattern::new(PatternKind::Int(0.into()), SourceSpan::synthetic());
    assert!(!match_pattern(&zero, &Value::int(1), &mut Bindings::new()).unwrap());
    assert!(match_pattern(&zero, &Value::int(0), &mut Bindings::new()).unwrap());
    let wild = Pattern::new(PatternKind::Wildcard, SourceSpan::synthetic());
    let mut b = Bindings::new();
    assert!(match_pattern(&wild, &Value::symbol("q"), &mut b).unwrap());
    assert!(b.is_empty());
}

#[test]
fn bound_variable_is_an_equality_constraint() {
    let x = Pattern::new(PatternKind::Var("x".into()), SourceSpan::synthetic());
    let mut b: Bindings = [("x".to_string(), Value::int(1))].into_iter().collect();
    assert!(match_pattern(&x, &Value::int(1), &mut b).unwrap());
    assert!(!match_pattern(&x, &Value::int(2), &mut b).unwrap());
    let mut f: Bindings = [("x".to_string(), eval_in(&imp(), "empty").unwrap())].into_iter().collect();
    assert_eq!(
        match_pattern(&x, &Value::int(2), &mut f),
        Err(RuntimeError::FunctionComparison)
    );
}

fn derive_src(tspec: &TypedSpecification, system: &str, ant: Option<&str>, init: &str, fuel: u64) -> Result<nasl_core::Derivation, DeriveError> {
    let interp = Interpreter::new(tspec).unwrap();
    let ant = ant.map(|a| eval_in(tspec, a).unwrap());
    let init = eval_in(tspec, init).unwrap();
    interp.derive(system, ant, init, Fuel(fuel))
}

fn labels(tree: &DerivationTree) -> Vec<String> {
    let mut out = vec![tree.rule_label.clone()];
    for s in tree.subtrees() {
        out.extend(labels(s));
    }
    out
}

#[test]
fn imp_addition_derives_eight() {
    let t = imp();
    let d = derive_src(&t, "e", Some("empty[`x` -> 5]"), "{{'#' 3} '+' {`x`}}", 10_000).unwrap();
    assert_eq!(int(&d.value), 8);
    assert_eq!(labels(&d.tree), ["ADD", "CONST", "VAR"]);
    // ADD is the third rule; CONST succeeds first time; VAR is tried after CONST.
    assert_eq!(d.fuel_used, 3 + 1 + 2);
}

#[test]
fn imp_constant() {
    let d = derive_src(&imp(), "e", Some("empty"), "{'#' 7}", 10).unwrap();
    assert_eq!(int(&d.value), 7);
    assert_eq!(labels(&d.tree), ["CONST"]);
    assert!(d.tree.is_axiom());
}

#[test]
fn imp_statements() {
    let t = imp();
    let d = derive_src(
        &t,
        "S",
        None,
        "({{`x` '=' {'#' 1}} ';' {`y` '=' {{`x`} '+' {`x`}}}}, empty)",
        10_000,
    )
    .unwrap();
    assert_eq!(labels(&d.tree)[0], "COMP");
    let decls: Vec<_> = d.tree.subtrees().map(|s| s.rule_label.as_str()).collect();
    assert_eq!(decls, ["DECL", "DECL"]);
    assert_eq!(int(&apply(&d.value, &Value::symbol("x")).unwrap()), 1);
    assert_eq!(int(&apply(&d.value, &Value::symbol("y")).unwrap()), 2);
}

#[test]
fn circular_first_exhausts_any_fuel() {
    let t = check(&fixture("circular_first.nsml"));
    for fuel in [1, 2, 7, 100, 10_000] {
        let err = derive_src(&t, "e", None, "{'stop'}", fuel).unwrap_err();
        assert!(matches!(err, DeriveError::FuelExhausted { .. }), "fuel {fuel}");
    }
}

#[test]
fn stop_first_yields_zero() {
    let t = check(&fixture("stop_first.nsml"));
    for fuel in [1, 100] {
        let d = derive_src(&t, "e", None, "{'stop'}", fuel).unwrap();
        assert_eq!(int(&d.value), 0);
        assert_eq!(d.fuel_used, 1);
    }
}

#[test]
fn fuel_zero_attempts_nothing() {
    let err = derive_src(&imp(), "e", Some("empty"), "{'#' 1}", 0).unwrap_err();
    assert!(matches!(err, DeriveError::FuelExhausted { .. }));
    assert!(err.trace().is_empty());
}

#[test]
fn conditional_abandons_if_true() {
    let t = check(&fixture("imp_if.nsml"));
    let results = run_evaluations(&t, Fuel::default()).unwrap();
    let d = results[0].outcome.as_ref().unwrap();
    assert_eq!(int(&apply(&d.value, &Value::symbol("x")).unwrap()), 2);
    let cond = d.tree.subtrees().nth(1).unwrap();
    assert_eq!(cond.rule_label, "IF-FALSE");
    let abandoned: Vec<_> = cond.abandoned.iter().map(|e| (e.rule_label.as_str(), &e.outcome)).collect();
    assert_eq!(
        abandoned,
        [
            ("DECL", &Outcome::PatternMismatch),
            ("COMP", &Outcome::PatternMismatch),
            ("IF-TRUE", &Outcome::SideConditionFalse { index: 1 }),
        ]
    );
    // The guard's derivation inside the abandoned attempt is kept.
    assert_eq!(cond.abandoned[2].premises[0].attempts.last().unwrap().rule_label, "VAR");
    let trace = d.tree.trace();
    assert!(trace.last().unwrap().succeeded());
    assert!(render_tree(&d.tree, true).contains("abandoned [IF-TRUE]"));
}

#[test]
fn no_rule_applies_reports_all_attempts() {
    let t = check(&format!(
        "{IMP_PRELUDE}
        system e : Env |- Exp ==> Int = [[ CONST ]]: s |- {{'#' n}} ==> n; end"
    ));
    let err = derive_src(&t, "e", Some("empty"), "{`x`}", 100).unwrap_err();
    let DeriveError::NoRuleApplies { system, trace } = &err else {
        panic!("{err}")
    };
    assert_eq!(system, "e");
    assert_eq!(trace.len(), 1);
    assert_eq!(trace[0].outcome, Outcome::PatternMismatch);
    assert!(render_trace(trace, 5).contains("[CONST] pattern did not match"));
}

#[test]
fn bottom_in_a_premise_backtracks() {
    let t = check(&format!(
        "{IMP_PRELUDE}
        system e : Env |- Exp ==> Int =
          [[ VAR ]]: s |- {{x}} ==> v \\\\ let v = s(x);
          [[ DEFAULT ]]: s |- {{x}} ==> 0;
        end"
    ));
    let d = derive_src(&t, "e", Some("empty"), "{`q`}", 100).unwrap();
    assert_eq!(int(&d.value), 0);
    assert_eq!(d.tree.rule_label, "DEFAULT");
    let d = derive_src(&t, "e", Some("empty[`q` -> 4]"), "{`q`}", 100).unwrap();
    assert_eq!(int(&d.value), 4);
}

#[test]
fn bottom_in_a_conclusion_aborts() {
    let t = check(&format!(
        "{IMP_PRELUDE}
        system e : Env |- Exp ==> Int =
          [[ VAR ]]: s |- {{x}} ==> s(x);
          [[ DEFAULT ]]: s |- {{x}} ==> 0;
        end"
    ));
    let err = derive_src(&t, "e", Some("empty"), "{`q`}", 100).unwrap_err();
    let DeriveError::Runtime { error, trace } = &err else {
        panic!("{err}")
    };
    assert!(matches!(error, RuntimeError::BottomEvaluated { .. }));
    assert_eq!(trace.len(), 1, "DEFAULT must not be tried");
    assert!(matches!(trace[0].outcome, Outcome::Aborted(_)));
}

#[test]
fn evaluations_are_independent() {
    let src = format!(
        "{}\nevaluate empty |- {{`nope`}} in e\nevaluate empty |- {{'#' 2}} in e\n",
        fixture("imp.nsml")
    );
    let t = check(&src);
    let results = run_evaluations(&t, Fuel::default()).unwrap();
    assert_eq!(results.len(), 3);
    assert_eq!(int(&results[0].outcome.as_ref().unwrap().value), 8);
    // VAR is not guarded, so the failure is a bottom in its conclusion.
    assert!(results[1].outcome.is_err());
    assert_eq!(int(&results[2].outcome.as_ref().unwrap().value), 2);
}

#[test]
fn lets_holding_bottom_under_a_lambda_bind_fine() {
    let t = check("let empty = \\x : Symbol . -|Int|;");
    assert!(Interpreter::new(&t).is_ok());
    let t = check("let boom = -|Int|;");
    let err = Interpreter::new(&t).err().unwrap();
    assert_eq!(err.name, "boom");
}

#[test]
fn derivation_is_deterministic() {
    let t = check(&fixture("imp_if.nsml"));
    let a = run_evaluations(&t, Fuel::default()).unwrap();
    let b = run_evaluations(&t, Fuel::default()).unwrap();
    let da = a[0].outcome.as_ref().unwrap();
    let db = b[0].outcome.as_ref().unwrap();
    assert_eq!(render_tree(&da.tree, true), render_tree(&db.tree, true));
    assert_eq!(da.tree.trace(), db.tree.trace());
}

/// Each node's subtrees correspond in order to the transition premises of
/// its rule, and the abandoned attempts are exactly the earlier rules.
fn check_node(tspec: &TypedSpecification, node: &DerivationTree) {
    let sys = tspec.spec.system(&node.system).unwrap();
    let pos = sys.rules.iter().position(|r| r.label == node.rule_label).unwrap();
    let tried: Vec<_> = node.abandoned.iter().map(|e| e.rule_label.clone()).collect();
    let earlier: Vec<_> = sys.rules[..pos].iter().map(|r| r.label.clone()).collect();
    assert_eq!(tried, earlier);
    let targets: Vec<_> = sys.rules[pos]
        .premises
        .iter()
        .filter_map(|p| match p {
            Premise::Transition { target, .. } => Some(target.clone()),
            _ => None,
        })
        .collect();
    let systems: Vec<_> = node.subtrees().map(|s| s.system.clone()).collect();
    assert_eq!(systems, targets);
    // Replay: the conclusion patterns bind and the result re-evaluates.
    let rule = &sys.rules[pos];
    let mut b = Bindings::new();
    if let (Some(p), Some(v)) = (&rule.antecedent, &node.antecedent) {
        assert!(match_pattern(p, v, &mut b).unwrap());
    }
    assert!(match_pattern(&rule.initial, &node.initial, &mut b).unwrap());
    for s in node.subtrees() {
        check_node(tspec, s);
    }
}

#[test]
fn trees_follow_rule_structure() {
    for name in ["imp.nsml", "imp_if.nsml", "bur_while_fixed.nsml", "bur_block_fixed.nsml", "flan_pair_fixed.nsml"] {
        let t = check(&fixture(name));
        for r in run_evaluations(&t, Fuel::default()).unwrap() {
            let d = r.outcome.unwrap_or_else(|e| panic!("{name}: {e}"));
            check_node(&t, &d.tree);
        }
    }
}

#[test]
fn corrected_fixtures_compute_expected_values() {
    let run = |name: &str| {
        let t = check(&fixture(name));
        run_evaluations(&t, Fuel::default()).unwrap().remove(0).outcome.unwrap().value
    };
    let sto = run("bur_while_fixed.nsml");
    assert_eq!(int(&apply(&sto, &Value::int(1)).unwrap()), 3);
    let sto = run("bur_block_fixed.nsml");
    assert_eq!(int(&apply(&sto, &Value::int(1)).unwrap()), 42);
    assert_eq!(run("flan_pair_fixed.nsml").to_string(), "{'(' {2} ',' {1} ')'}");
}

#[test]
fn deep_derivations_do_not_overflow() {
    let t = check(&fixture("circular_first.nsml"));
    let err = derive_src(&t, "e", None, "{'stop'}", 50_000).unwrap_err();
    let DeriveError::FuelExhausted { limit, trace } = &err else {
        panic!()
    };
    assert_eq!(limit.0, 50_000);
    let shown = render_trace(trace, 3);
    assert_eq!(shown.matches("[CIRCULAR]").count(), 3);
}
